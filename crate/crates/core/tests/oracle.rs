use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use z2cover::construction::{construct_family, single_torsion_mutations};
use z2cover::curve_oracle::{find_assignment, realize, CurveOverFp, CurvePoint};

#[test]
fn associativity_on_random_triples() {
    let c = CurveOverFp::new(1019, 3, 7).unwrap();
    let pts = c.points().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..2000 {
        let [p, q, r] = [0; 3].map(|_| pts[rng.gen_range(0..pts.len())]);
        assert_eq!(c.add(c.add(p, q), r), c.add(p, c.add(q, r)));
        assert_eq!(c.add(p, q), c.add(q, p));
    }
}

#[test]
fn scalar_multiplication_is_linear() {
    let c = CurveOverFp::new(101, -1, 0).unwrap();
    let pts = c.points().unwrap();
    for &p in pts.iter().take(30) {
        for k in -6i64..6 {
            for l in -6i64..6 {
                assert_eq!(c.mul(k + l, p), c.add(c.mul(k, p), c.mul(l, p)));
            }
        }
    }
}

#[test]
fn lagrange_on_several_curves() {
    for (p, a, b) in [(5, -1, 0), (7, -1, 0), (97, 2, 3), (103, -1, 0)] {
        let c = CurveOverFp::new(p, a, b).unwrap();
        assert!(c.order_annihilates_all().unwrap());
        let s = c.group_structure().unwrap();
        assert_eq!(s.d1 * s.d2, s.order);
        assert_eq!(s.d2 % s.d1, 0);
        assert_eq!((p - 1) % s.d1, 0, "Weil pairing forces d1 | p − 1");
    }
}

#[test]
fn family_realizes_and_mutations_are_rejected() {
    let curve = CurveOverFp::default_curve();
    for n in [2, 3, 5] {
        let bd = construct_family(n, Some(&vec![3; n as usize])).unwrap();
        let a = find_assignment(&bd, &curve, 11).unwrap();
        let r = realize(&bd, &curve, &a).unwrap();
        assert!(r.agrees(), "{:?}", r.discrepancies);
        assert!(r.relations_hold_realized && r.injective_realized);
        for m in single_torsion_mutations(&bd).unwrap() {
            let r = realize(&m.data, &curve, &a).unwrap();
            assert!(!r.relations_hold_abstract);
            assert!(!r.relations_hold_realized, "L{} + eta{}", m.chi, m.eta);
            assert!(r.agrees());
        }
    }
}

#[test]
fn small_cyclic_factor_is_refused() {
    // y² = x³ − x over F_7 has N = 8: no odd prime to emulate free generators.
    let curve = CurveOverFp::new(7, -1, 0).unwrap();
    let bd = construct_family(3, None).unwrap();
    assert!(find_assignment(&bd, &curve, 0).is_err());
}

#[test]
fn infinity_is_on_every_curve() {
    assert!(CurveOverFp::default_curve().contains(CurvePoint::Infinity));
}
