//! Concrete check of the abstract `Pic⁰(C)` model on a genuine elliptic curve
//! `y² = x³ + ax + b` over `F_p`, `p ≤ 10⁴`.
//!
//! A [`Assignment`] sends each free generator of the [`GroupSpec`] to a curve
//! point and each torsion generator to a point of the same order; this extends
//! to a homomorphism `φ`. [`realize`] then recomputes every linear-equivalence
//! identity of a building datum with chord-and-tangent arithmetic and compares
//! it with the abstract verdict. A homomorphism never turns a true identity
//! false; the converse is what the search in [`find_assignment`] is for: free
//! generators go to random multiples of a point of large prime order `q`, with
//! `q` larger than twice the coefficient bound times the rank, and the
//! assignment is kept only when every abstract verdict is reproduced.
//!
//! Point counting is exhaustive enumeration, on purpose.
//!
//! [`GroupSpec`]: crate::abgroup::GroupSpec

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abgroup::GroupElement;
use crate::construction::{label_f, label_f_half, label_f_prime, label_f_torsion};
use crate::cover::{BuildingData, FiberKind};
use crate::error::{Error, Result};
use crate::picard::SurfaceClass;

pub const MAX_EXHAUSTIVE_PRIME: u64 = 10_000;

/// `y² = x³ − x` over `F_9907`: full 2-torsion, `N = 9908 = 4 · 2477`.
pub const DEFAULT_PRIME: u64 = 9907;
pub const DEFAULT_A: i64 = -1;
pub const DEFAULT_B: i64 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CurvePoint {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl CurvePoint {
    pub fn is_infinity(self) -> bool {
        self == CurvePoint::Infinity
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveOverFp {
    p: u64,
    a: u64,
    b: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroupStructure {
    pub order: u64,
    /// `E(F_p) ≅ Z/d1 ⊕ Z/d2` with `d1 | d2`.
    pub d1: u64,
    pub d2: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl CurveOverFp {
    pub fn new(p: u64, a: i64, b: i64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::Oracle(format!("{p} is not an odd prime")));
        }
        let red = |v: i64| (v as i128).rem_euclid(p as i128) as u64;
        let c = CurveOverFp { p, a: red(a), b: red(b) };
        let disc = (4 * c.mulm(c.mulm(c.a, c.a), c.a) + 27 * c.mulm(c.b, c.b)) % p;
        if disc == 0 {
            return Err(Error::Oracle(format!(
                "y^2 = x^3 + {a}x + {b} is singular mod {p}"
            )));
        }
        Ok(c)
    }

    pub fn default_curve() -> Self {
        CurveOverFp::new(DEFAULT_PRIME, DEFAULT_A, DEFAULT_B).expect("default curve is valid")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    fn mulm(&self, x: u64, y: u64) -> u64 {
        (x as u128 * y as u128 % self.p as u128) as u64
    }

    fn addm(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.p
    }

    fn subm(&self, x: u64, y: u64) -> u64 {
        (x + self.p - y) % self.p
    }

    fn inv(&self, x: u64) -> u64 {
        let (mut r0, mut r1) = (self.p as i64, x as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "inverse of zero");
        t0.rem_euclid(self.p as i64) as u64
    }

    fn rhs(&self, x: u64) -> u64 {
        let x3 = self.mulm(self.mulm(x, x), x);
        self.addm(self.addm(x3, self.mulm(self.a, x)), self.b)
    }

    pub fn contains(&self, pt: CurvePoint) -> bool {
        match pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                x < self.p && y < self.p && self.mulm(y, y) == self.rhs(x)
            }
        }
    }

    pub fn negate(&self, pt: CurvePoint) -> CurvePoint {
        match pt {
            CurvePoint::Infinity => pt,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x,
                y: (self.p - y) % self.p,
            },
        }
    }

    pub fn add(&self, p1: CurvePoint, p2: CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p1, p2) {
            (CurvePoint::Infinity, q) | (q, CurvePoint::Infinity) => return q,
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let slope = if x1 == x2 {
            if self.addm(y1, y2) == 0 {
                return CurvePoint::Infinity;
            }
            // tangent: (3x² + a) / 2y
            let num = self.addm(self.mulm(3, self.mulm(x1, x1)), self.a);
            self.mulm(num, self.inv(self.mulm(2, y1)))
        } else {
            self.mulm(self.subm(y2, y1), self.inv(self.subm(x2, x1)))
        };
        let x3 = self.subm(self.subm(self.mulm(slope, slope), x1), x2);
        let y3 = self.subm(self.mulm(slope, self.subm(x1, x3)), y1);
        CurvePoint::Affine { x: x3, y: y3 }
    }

    pub fn double(&self, pt: CurvePoint) -> CurvePoint {
        self.add(pt, pt)
    }

    pub fn sub(&self, p1: CurvePoint, p2: CurvePoint) -> CurvePoint {
        self.add(p1, self.negate(p2))
    }

    /// `k · pt` by double-and-add.
    pub fn mul(&self, k: i64, pt: CurvePoint) -> CurvePoint {
        let base = if k < 0 { self.negate(pt) } else { pt };
        let mut k = k.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut run = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, run);
            }
            run = self.double(run);
            k >>= 1;
        }
        acc
    }

    fn require_small(&self) -> Result<()> {
        if self.p > MAX_EXHAUSTIVE_PRIME {
            return Err(Error::Oracle(format!(
                "p = {} exceeds the exhaustive limit {MAX_EXHAUSTIVE_PRIME}",
                self.p
            )));
        }
        Ok(())
    }

    /// All points, infinity first, then affine points by `(x, y)`.
    pub fn points(&self) -> Result<Vec<CurvePoint>> {
        self.require_small()?;
        let mut roots: HashMap<u64, Vec<u64>> = HashMap::new();
        for y in 0..self.p {
            roots.entry(self.mulm(y, y)).or_default().push(y);
        }
        let mut out = vec![CurvePoint::Infinity];
        for x in 0..self.p {
            if let Some(ys) = roots.get(&self.rhs(x)) {
                out.extend(ys.iter().map(|&y| CurvePoint::Affine { x, y }));
            }
        }
        Ok(out)
    }

    /// The points with `y = 0`, i.e. the nonzero 2-torsion.
    pub fn two_torsion_points(&self) -> Vec<CurvePoint> {
        (0..self.p)
            .filter(|&x| self.rhs(x) == 0)
            .map(|x| CurvePoint::Affine { x, y: 0 })
            .collect()
    }

    pub fn has_full_two_torsion(&self) -> bool {
        self.two_torsion_points().len() == 3
    }

    /// Order of `pt`, given a multiple `n` of it (e.g. the group order).
    pub fn point_order(&self, pt: CurvePoint, n: u64) -> u64 {
        let mut order = n;
        for l in prime_factors(n) {
            while order.is_multiple_of(l) && self.mul((order / l) as i64, pt).is_infinity() {
                order /= l;
            }
        }
        order
    }

    pub fn group_structure(&self) -> Result<GroupStructure> {
        let points = self.points()?;
        let order = points.len() as u64;
        let mut exponent = 1u64;
        for &pt in &points {
            let o = self.point_order(pt, order);
            exponent = exponent / gcd(exponent, o) * o;
        }
        Ok(GroupStructure {
            order,
            d1: order / exponent,
            d2: exponent,
        })
    }

    /// `N · P = O` for every enumerated point.
    pub fn order_annihilates_all(&self) -> Result<bool> {
        let points = self.points()?;
        let n = points.len() as i64;
        Ok(points.iter().all(|&pt| self.mul(n, pt).is_infinity()))
    }
}

/// Images of the generators of a building datum's group model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub free: Vec<CurvePoint>,
    pub torsion: Vec<CurvePoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub abstract_holds: bool,
    pub realized_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizationReport {
    pub curve: CurveOverFp,
    pub checks: Vec<IdentityCheck>,
    pub discrepancies: Vec<String>,
    pub relations_hold_abstract: bool,
    pub relations_hold_realized: bool,
    pub injective_realized: bool,
}

impl RealizationReport {
    pub fn agrees(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct RealClass {
    a: i64,
    degree: i64,
    point: CurvePoint,
}

struct Realizer<'a> {
    curve: &'a CurveOverFp,
    assignment: &'a Assignment,
}

impl Realizer<'_> {
    fn phi(&self, x: &GroupElement) -> CurvePoint {
        let free = x.free().iter().zip(&self.assignment.free);
        let tors = x
            .tors()
            .iter()
            .map(|&t| t as i64)
            .zip(&self.assignment.torsion);
        free.map(|(&k, &pt)| (k, pt))
            .chain(tors.map(|(k, &pt)| (k, pt)))
            .fold(CurvePoint::Infinity, |acc, (k, pt)| {
                self.curve.add(acc, self.curve.mul(k, pt))
            })
    }

    fn class(&self, c: &SurfaceClass) -> RealClass {
        RealClass {
            a: c.a,
            degree: c.c.degree,
            point: self.phi(&c.c.pic0),
        }
    }

    fn plus(&self, x: RealClass, y: RealClass) -> RealClass {
        RealClass {
            a: x.a + y.a,
            degree: x.degree + y.degree,
            point: self.curve.add(x.point, y.point),
        }
    }
}

fn zero_class() -> RealClass {
    RealClass {
        a: 0,
        degree: 0,
        point: CurvePoint::Infinity,
    }
}

/// Re-evaluates the identities of `bd` on `curve` through `assignment`.
pub fn realize(
    bd: &BuildingData,
    curve: &CurveOverFp,
    assignment: &Assignment,
) -> Result<RealizationReport> {
    curve.require_small()?;
    let spec = bd.group_spec();
    if assignment.free.len() != spec.rank() || assignment.torsion.len() != spec.torsion().len() {
        return Err(Error::Oracle(format!(
            "assignment has {} free and {} torsion images, group model is {spec}",
            assignment.free.len(),
            assignment.torsion.len()
        )));
    }
    if let Some(pt) = assignment
        .free
        .iter()
        .chain(&assignment.torsion)
        .find(|&&pt| !curve.contains(pt))
    {
        return Err(Error::Oracle(format!("{pt:?} is not on the curve")));
    }
    let group_order = curve.points()?.len() as u64;
    for (j, (&pt, &m)) in assignment.torsion.iter().zip(spec.torsion()).enumerate() {
        let o = curve.point_order(pt, group_order);
        if o != m {
            return Err(Error::Oracle(format!(
                "torsion generator {j} of order {m} mapped to a point of order {o}"
            )));
        }
    }

    let r = Realizer { curve, assignment };
    let cfg = bd.config();
    let real_points: BTreeMap<&String, CurvePoint> =
        cfg.points_c.iter().map(|(l, aj)| (l, r.phi(aj))).collect();
    let real_branch = |sigma| {
        bd.d_of(sigma).iter().fold(zero_class(), |acc, comp| {
            let c = match comp.kind {
                FiberKind::E => RealClass {
                    a: 1,
                    degree: 0,
                    point: CurvePoint::Infinity,
                },
                FiberKind::F => RealClass {
                    a: 0,
                    degree: 1,
                    point: real_points[&comp.label],
                },
            };
            r.plus(acc, c)
        })
    };

    let mut checks = Vec::new();
    let mut relations_abstract = true;
    let mut relations_realized = true;
    for (chi, chi2) in bd.character_pairs()? {
        let (lhs, rhs) = bd.relation_sides(chi, chi2)?;
        let real_lhs = r.plus(r.class(&bd.l_of(chi)), r.class(&bd.l_of(chi2)));
        let real_rhs = cfg
            .shared_branch_indices(chi, chi2)?
            .into_iter()
            .fold(r.class(&bd.l_of(chi.mul(chi2)?)), |acc, s| {
                r.plus(acc, real_branch(s))
            });
        let (abs, real) = (lhs == rhs, real_lhs == real_rhs);
        relations_abstract &= abs;
        relations_realized &= real;
        checks.push(IdentityCheck {
            name: format!("L{chi} + L{chi2}"),
            abstract_holds: abs,
            realized_holds: real,
        });
    }
    for (&chi, l) in bd.l_map() {
        let real = r.class(l);
        checks.push(IdentityCheck {
            name: format!("L{chi} nontrivial"),
            abstract_holds: !l.is_zero(),
            realized_holds: !(real.a == 0 && real.degree == 0 && real.point.is_infinity()),
        });
    }

    if let Some(info) = bd.family() {
        let aj = |l: &str| cfg.point_c(l).map(|p| p.aj);
        let pt = |l: &str| {
            real_points
                .get(&l.to_string())
                .copied()
                .ok_or_else(|| Error::Malformed(format!("missing point {l}")))
        };
        for i in 1..=info.n {
            let (h, f, fp) = (label_f_half(i), label_f(i), label_f_prime(i));
            checks.push(IdentityCheck {
                name: format!("2{h} = {f} + {fp}"),
                abstract_holds: aj(&h)?.scale(2)? == aj(&f)?.checked_add(&aj(&fp)?)?,
                realized_holds: curve.double(pt(&h)?) == curve.add(pt(&f)?, pt(&fp)?),
            });
        }
        let t: Vec<String> = (1..=3).map(label_f_torsion).collect();
        let abs_eta = [
            aj(&t[0])?.checked_sub(&aj(&t[1])?)?,
            aj(&t[1])?.checked_sub(&aj(&t[2])?)?,
            aj(&t[0])?.checked_sub(&aj(&t[2])?)?,
        ];
        let real_eta = [
            curve.sub(pt(&t[0])?, pt(&t[1])?),
            curve.sub(pt(&t[1])?, pt(&t[2])?),
            curve.sub(pt(&t[0])?, pt(&t[2])?),
        ];
        for k in 0..3 {
            checks.push(IdentityCheck {
                name: format!("eta{} nonzero", k + 1),
                abstract_holds: !abs_eta[k].is_zero(),
                realized_holds: !real_eta[k].is_infinity(),
            });
            checks.push(IdentityCheck {
                name: format!("2 eta{} = 0", k + 1),
                abstract_holds: abs_eta[k].scale(2)?.is_zero(),
                realized_holds: curve.double(real_eta[k]).is_infinity(),
            });
        }
        checks.push(IdentityCheck {
            name: "eta3 = eta1 + eta2".into(),
            abstract_holds: abs_eta[2] == abs_eta[0].checked_add(&abs_eta[1])?,
            realized_holds: real_eta[2] == curve.add(real_eta[0], real_eta[1]),
        });
        for w in t.windows(2) {
            checks.push(IdentityCheck {
                name: format!("2{} = 2{}", w[0], w[1]),
                abstract_holds: aj(&w[0])?.scale(2)? == aj(&w[1])?.scale(2)?,
                realized_holds: curve.double(pt(&w[0])?) == curve.double(pt(&w[1])?),
            });
        }
    }

    let abstract_injective = cfg.verify_smoothness().injective_points;
    let mut distinct: Vec<CurvePoint> = real_points.values().copied().collect();
    distinct.sort();
    distinct.dedup();
    let injective_realized = distinct.len() == real_points.len();
    checks.push(IdentityCheck {
        name: "points pairwise distinct".into(),
        abstract_holds: abstract_injective,
        realized_holds: injective_realized,
    });

    let discrepancies = checks
        .iter()
        .filter(|c| c.abstract_holds != c.realized_holds)
        .map(|c| c.name.clone())
        .collect();
    Ok(RealizationReport {
        curve: *curve,
        checks,
        discrepancies,
        relations_hold_abstract: relations_abstract,
        relations_hold_realized: relations_realized,
        injective_realized,
    })
}

/// Largest absolute free coefficient among the points, the `L_χ` and both
/// sides of every pair relation.
pub fn coefficient_bound(bd: &BuildingData) -> Result<u64> {
    let mut elements: Vec<GroupElement> = bd.config().points_c.values().cloned().collect();
    elements.extend(bd.l_map().values().map(|c| c.c.pic0.clone()));
    for (chi, chi2) in bd.character_pairs()? {
        let (lhs, rhs) = bd.relation_sides(chi, chi2)?;
        elements.push(lhs.c.pic0);
        elements.push(rhs.c.pic0);
    }
    Ok(elements
        .iter()
        .flat_map(|e| e.free().iter().map(|v| v.unsigned_abs()))
        .max()
        .unwrap_or(0))
}

/// Searches for an assignment under which every abstract verdict of `bd` is
/// reproduced on `curve`. Deterministic for a fixed `seed`.
pub fn find_assignment(bd: &BuildingData, curve: &CurveOverFp, seed: u64) -> Result<Assignment> {
    const ATTEMPTS: usize = 256;
    let spec = bd.group_spec();
    let structure = curve.group_structure()?;
    let points = curve.points()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut by_order: BTreeMap<u64, Vec<CurvePoint>> = BTreeMap::new();
    for &pt in &points {
        by_order
            .entry(curve.point_order(pt, structure.order))
            .or_default()
            .push(pt);
    }

    let q = prime_factors(structure.d2)
        .into_iter()
        .filter(|&l| l % 2 == 1)
        .max()
        .ok_or_else(|| Error::Oracle("group exponent has no odd prime factor".into()))?;
    let bound = coefficient_bound(bd)?;
    let needed = 2 * bound * spec.rank().max(1) as u64;
    if q <= needed {
        return Err(Error::Oracle(format!(
            "largest odd prime factor {q} of the exponent does not exceed {needed}"
        )));
    }
    let generator = by_order
        .get(&q)
        .and_then(|v| v.first().copied())
        .ok_or_else(|| Error::Oracle(format!("no point of order {q}")))?;

    for _ in 0..ATTEMPTS {
        let mut torsion = Vec::new();
        for &m in spec.torsion() {
            let cands = by_order
                .get(&m)
                .ok_or_else(|| Error::Oracle(format!("no point of order {m}")))?;
            torsion.push(cands[rng.gen_range(0..cands.len())]);
        }
        let free = (0..spec.rank())
            .map(|_| curve.mul(rng.gen_range(1..q) as i64, generator))
            .collect();
        let assignment = Assignment { free, torsion };
        let report = realize(bd, curve, &assignment)?;
        if report.agrees() && report.injective_realized {
            return Ok(assignment);
        }
    }
    Err(Error::Oracle(format!(
        "no faithful assignment found in {ATTEMPTS} attempts"
    )))
}
