//! Finitely generated abelian groups `Z^r ⊕ Z/m_1 ⊕ … ⊕ Z/m_k`.
//!
//! This is the model used for `Pic⁰(C)`: the construction only ever touches
//! finitely many points of the elliptic curve, their integer combinations and
//! the 2-torsion, so a free-by-finite group is enough to decide every linear
//! equivalence it needs.
//!
//! Free coordinates are `i64` with checked arithmetic; an overflow surfaces as
//! [`Error::Overflow`] instead of wrapping.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of a group `Z^rank ⊕ Z/torsion[0] ⊕ …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct GroupSpec {
    rank: usize,
    torsion: Vec<u64>,
}

#[derive(Deserialize)]
struct RawSpec {
    rank: usize,
    torsion: Vec<u64>,
}

impl TryFrom<RawSpec> for GroupSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        GroupSpec::new(raw.rank, raw.torsion)
    }
}

impl GroupSpec {
    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if let Some(m) = torsion.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidGroupSpec(format!(
                "torsion order {m} is below 2"
            )));
        }
        Ok(GroupSpec { rank, torsion })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            spec: self.clone(),
            free: vec![0; self.rank],
            tors: vec![0; self.torsion.len()],
        }
    }

    /// Builds an element, reducing torsion entries into `[0, m_i)`.
    pub fn element(&self, free: Vec<i64>, tors: Vec<i64>) -> Result<GroupElement> {
        if free.len() != self.rank || tors.len() != self.torsion.len() {
            return Err(Error::ShapeMismatch {
                left: self.to_string(),
                right: format!("free len {}, tors len {}", free.len(), tors.len()),
            });
        }
        let tors = tors
            .iter()
            .zip(&self.torsion)
            .map(|(&t, &m)| reduce(t, m))
            .collect();
        Ok(GroupElement {
            spec: self.clone(),
            free,
            tors,
        })
    }

    /// The i-th free generator `e_i`.
    pub fn free_generator(&self, i: usize) -> GroupElement {
        assert!(i < self.rank, "free generator {i} out of range");
        let mut x = self.zero();
        x.free[i] = 1;
        x
    }

    /// The j-th torsion generator, of order `torsion[j]`.
    pub fn torsion_generator(&self, j: usize) -> GroupElement {
        assert!(j < self.torsion.len(), "torsion generator {j} out of range");
        let mut x = self.zero();
        x.tors[j] = 1;
        x
    }

    /// Number of elements `y` with `2y = 0`.
    pub fn two_torsion_count(&self) -> u64 {
        1u64 << self.torsion.iter().filter(|&&m| m % 2 == 0).count()
    }

    /// Group order, or `None` when the rank is positive.
    pub fn order(&self) -> Option<u64> {
        if self.rank > 0 {
            return None;
        }
        self.torsion
            .iter()
            .try_fold(1u64, |acc, &m| acc.checked_mul(m))
    }

    /// Every element of a finite group, in lexicographic order of the torsion
    /// coordinates. `None` for infinite groups or groups above `limit` elements.
    pub fn finite_elements(&self, limit: u64) -> Option<Vec<GroupElement>> {
        let order = self.order()?;
        if order > limit {
            return None;
        }
        let mut out = Vec::with_capacity(order as usize);
        let mut digits = vec![0u64; self.torsion.len()];
        for _ in 0..order {
            out.push(GroupElement {
                spec: self.clone(),
                free: Vec::new(),
                tors: digits.clone(),
            });
            for (d, &m) in digits.iter_mut().zip(&self.torsion).rev() {
                *d += 1;
                if *d < m {
                    break;
                }
                *d = 0;
            }
        }
        Some(out)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.rank)?;
        for m in &self.torsion {
            write!(f, " + Z/{m}")?;
        }
        Ok(())
    }
}

fn reduce(t: i64, m: u64) -> u64 {
    (t as i128).rem_euclid(m as i128) as u64
}

/// An element of the group described by its [`GroupSpec`].
///
/// Equality is componentwise; torsion entries are always stored reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawElement", into = "RawElement")]
pub struct GroupElement {
    spec: GroupSpec,
    free: Vec<i64>,
    tors: Vec<u64>,
}

/// Wire form: `{"rank": r, "torsion": [...], "free": [...], "tors": [...]}`.
#[derive(Serialize, Deserialize)]
struct RawElement {
    rank: usize,
    torsion: Vec<u64>,
    free: Vec<i64>,
    tors: Vec<i64>,
}

impl TryFrom<RawElement> for GroupElement {
    type Error = Error;

    fn try_from(raw: RawElement) -> Result<Self> {
        GroupSpec::new(raw.rank, raw.torsion)?.element(raw.free, raw.tors)
    }
}

impl From<GroupElement> for RawElement {
    fn from(x: GroupElement) -> Self {
        RawElement {
            rank: x.spec.rank,
            torsion: x.spec.torsion,
            free: x.free,
            tors: x.tors.into_iter().map(|t| t as i64).collect(),
        }
    }
}

impl GroupElement {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn free(&self) -> &[i64] {
        &self.free
    }

    pub fn tors(&self) -> &[u64] {
        &self.tors
    }

    fn same_shape(&self, other: &GroupElement) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::ShapeMismatch {
                left: self.spec.to_string(),
                right: other.spec.to_string(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.same_shape(other)?;
        let free = self
            .free
            .iter()
            .zip(&other.free)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("group addition")))
            .collect::<Result<_>>()?;
        let tors = self
            .tors
            .iter()
            .zip(&other.tors)
            .zip(&self.spec.torsion)
            .map(|((a, b), m)| (a + b) % m)
            .collect();
        Ok(GroupElement {
            spec: self.spec.clone(),
            free,
            tors,
        })
    }

    pub fn checked_neg(&self) -> Result<GroupElement> {
        self.scale(-1)
    }

    pub fn checked_sub(&self, other: &GroupElement) -> Result<GroupElement> {
        self.checked_add(&other.checked_neg()?)
    }

    /// `k · self`.
    pub fn scale(&self, k: i64) -> Result<GroupElement> {
        let free = self
            .free
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow("group scaling")))
            .collect::<Result<_>>()?;
        let tors = self
            .tors
            .iter()
            .zip(&self.spec.torsion)
            .map(|(&t, &m)| ((t as i128 * k as i128).rem_euclid(m as i128)) as u64)
            .collect();
        Ok(GroupElement {
            spec: self.spec.clone(),
            free,
            tors,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&a| a == 0) && self.tors.iter().all(|&t| t == 0)
    }

    /// Every `y` with `2y = self`, sorted; empty when `self` is not 2-divisible.
    ///
    /// The first entry is the solution whose torsion part is the smallest
    /// representative, i.e. the "all-zero coset" choice.
    pub fn halvings(&self) -> Vec<GroupElement> {
        if self.free.iter().any(|a| a % 2 != 0) {
            return Vec::new();
        }
        let free: Vec<i64> = self.free.iter().map(|a| a / 2).collect();

        // Per torsion factor, the solutions of 2y = t in Z/m.
        let mut per_factor: Vec<Vec<u64>> = Vec::with_capacity(self.tors.len());
        for (&t, &m) in self.tors.iter().zip(&self.spec.torsion) {
            if m % 2 == 1 {
                per_factor.push(vec![((t as u128 * m.div_ceil(2) as u128) % m as u128) as u64]);
            } else if t % 2 == 0 {
                per_factor.push(vec![t / 2, t / 2 + m / 2]);
            } else {
                return Vec::new();
            }
        }

        let mut out = vec![Vec::new()];
        for options in &per_factor {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u64>| {
                    options.iter().map(move |&o| {
                        let mut p = prefix.clone();
                        p.push(o);
                        p
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(|tors| GroupElement {
                spec: self.spec.clone(),
                free: free.clone(),
                tors,
            })
            .collect()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}; {:?})", self.free, self.tors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein(rank: usize) -> GroupSpec {
        GroupSpec::new(rank, vec![2, 2]).unwrap()
    }

    #[test]
    fn add_reduces_torsion() {
        let g = klein(1);
        let x = g.element(vec![1], vec![1, 0]).unwrap();
        let y = g.element(vec![2], vec![1, 1]).unwrap();
        let s = x.checked_add(&y).unwrap();
        assert_eq!(s.free(), &[3]);
        assert_eq!(s.tors(), &[0, 1]);
        assert_eq!(x.checked_add(&g.zero()).unwrap(), x);
    }

    #[test]
    fn eta_sum() {
        let g = klein(0);
        let eta1 = g.element(vec![], vec![1, 0]).unwrap();
        let eta2 = g.element(vec![], vec![0, 1]).unwrap();
        let eta3 = g.element(vec![], vec![1, 1]).unwrap();
        assert_eq!(eta1.checked_add(&eta2).unwrap(), eta3);
        assert!(eta1.scale(2).unwrap().is_zero());
        assert!(!eta1.is_zero());
    }

    #[test]
    fn scale_free_and_zero() {
        let g = GroupSpec::new(1, vec![]).unwrap();
        let x = g.element(vec![3], vec![]).unwrap();
        assert_eq!(x.scale(2).unwrap().free(), &[6]);
        assert!(x.scale(0).unwrap().is_zero());
    }

    #[test]
    fn unreduced_input_is_reduced() {
        let g = GroupSpec::new(1, vec![2]).unwrap();
        assert!(g.element(vec![0], vec![2]).unwrap().is_zero());
        assert_eq!(g.element(vec![0], vec![-1]).unwrap().tors(), &[1]);
    }

    #[test]
    fn shape_mismatch() {
        let a = klein(1).zero();
        let b = klein(2).zero();
        assert!(matches!(a.checked_add(&b), Err(Error::ShapeMismatch { .. })));
        assert!(klein(1).element(vec![1, 2], vec![0, 0]).is_err());
        assert!(GroupSpec::new(0, vec![1]).is_err());
    }

    #[test]
    fn overflow_is_an_error() {
        let g = GroupSpec::new(1, vec![]).unwrap();
        let x = g.element(vec![i64::MAX], vec![]).unwrap();
        assert_eq!(x.scale(2), Err(Error::Overflow("group scaling")));
        assert!(x.checked_add(&x).is_err());
    }

    #[test]
    fn halvings_examples() {
        let z = GroupSpec::new(1, vec![]).unwrap();
        let h = z.element(vec![4], vec![]).unwrap().halvings();
        assert_eq!(h, vec![z.element(vec![2], vec![]).unwrap()]);
        assert!(z.element(vec![3], vec![]).unwrap().halvings().is_empty());

        let g = klein(1);
        let h = g.element(vec![2], vec![0, 0]).unwrap().halvings();
        let expect: Vec<_> = [[0, 0], [0, 1], [1, 0], [1, 1]]
            .iter()
            .map(|t| g.element(vec![1], t.to_vec()).unwrap())
            .collect();
        assert_eq!(h, expect);
    }

    #[test]
    fn halvings_odd_modulus() {
        let g = GroupSpec::new(0, vec![5]).unwrap();
        let x = g.element(vec![], vec![3]).unwrap();
        let h = x.halvings();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].scale(2).unwrap(), x);
        // Z/4: 1 is not 2-divisible
        let g = GroupSpec::new(0, vec![4]).unwrap();
        assert!(g.element(vec![], vec![1]).unwrap().halvings().is_empty());
    }

    #[test]
    fn finite_elements_enumerates() {
        let g = GroupSpec::new(0, vec![2, 3]).unwrap();
        let all = g.finite_elements(100).unwrap();
        assert_eq!(all.len(), 6);
        assert!(all[0].is_zero());
        assert!(klein(1).finite_elements(100).is_none());
    }

    #[test]
    fn serde_wire_form() {
        let g = klein(1);
        let x = g.element(vec![-3], vec![1, 0]).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"rank":1,"torsion":[2,2],"free":[-3],"tors":[1,0]}"#);
        let back: GroupElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let bad = r#"{"rank":1,"torsion":[2,2],"free":[],"tors":[1,0]}"#;
        assert!(serde_json::from_str::<GroupElement>(bad).is_err());
    }
}
