use proptest::prelude::*;
use z2cover::abgroup::GroupSpec;
use z2cover::picard::SurfaceClass;

fn spec() -> GroupSpec {
    GroupSpec::new(2, vec![2, 2]).unwrap()
}

fn class() -> impl Strategy<Value = SurfaceClass> {
    (-20i64..20, -20i64..20, -5i64..5, -5i64..5, 0i64..2, 0i64..2).prop_map(|(a, d, f1, f2, t1, t2)| {
        SurfaceClass::new(a, d, spec().element(vec![f1, f2], vec![t1, t2]).unwrap())
    })
}

proptest! {
    #[test]
    fn intersection_is_symmetric_and_bilinear(u in class(), v in class(), w in class()) {
        prop_assert_eq!(u.intersect(&v).unwrap(), v.intersect(&u).unwrap());
        let vw = v.checked_add(&w).unwrap();
        prop_assert_eq!(
            u.intersect(&vw).unwrap(),
            u.intersect(&v).unwrap() + u.intersect(&w).unwrap()
        );
    }

    #[test]
    fn negative_degrees_have_no_sections(u in class()) {
        if u.a < 0 || u.c.degree < 0 {
            prop_assert_eq!(u.h0().unwrap(), 0);
        }
        if u.a >= 0 && u.c.degree >= 1 {
            prop_assert_eq!(u.h0().unwrap(), ((u.a + 1) * u.c.degree) as u64);
        }
    }

    #[test]
    fn riemann_roch_on_the_product(u in class()) {
        // χ(O_Y(u)) = χ(O_Y) + ½ u·(u − K_Y), with χ(O_Y) = 0.
        prop_assume!(u.a >= 0 && u.c.degree >= 1);
        let k = SurfaceClass::canonical(&spec());
        let twice = u.intersect(&u.checked_sub(&k).unwrap()).unwrap();
        prop_assert_eq!(twice % 2, 0);
        prop_assert_eq!((twice / 2) as u64, u.h0().unwrap());
    }

    #[test]
    fn surface_image_degree_identity(u in class()) {
        prop_assume!(u.h0().unwrap() > 0);
        let r = u.map_analysis().unwrap();
        if r.image_dim == 2 {
            let d = r.map_degree.unwrap() as i64;
            prop_assert_eq!(d * r.image_degree.unwrap(), u.intersect(&u).unwrap());
        } else {
            prop_assert!(r.map_degree.is_none());
        }
    }
}
