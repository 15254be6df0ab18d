//! Divisor classes on `Y = ℙ¹ × C` with `C` an elliptic curve.
//!
//! `Pic(Y) = Pic(ℙ¹) ⊕ Pic(C)`, so a class is a pair `(a, c)`: `a` copies of the
//! fibre `E` of the projection to `ℙ¹`, plus the pullback of a curve class `c`
//! of degree `d` whose degree-zero part lives in the [`GroupElement`] model of
//! `Pic⁰(C)`. Linear equivalence is componentwise equality, and there is no
//! numerical-equivalence shortcut: forgetting `pic0` would erase the torsion
//! classes the whole construction hinges on.
//!
//! Intersections use `E² = F² = 0`, `E·F = 1`. Section counts are Künneth
//! products of `h⁰(ℙ¹, O(a))` and `h⁰(C, c)`, and the map analysis applies the
//! standard facts about linear systems on an elliptic curve (degree ≥ 3 embeds,
//! degree 2 is a double cover of `ℙ¹`, degree 1 has a base point).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abgroup::{GroupElement, GroupSpec};
use crate::error::{Error, Result};

/// A divisor class on `C`: degree plus the class in `Pic⁰(C)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveClass {
    pub degree: i64,
    pub pic0: GroupElement,
}

impl CurveClass {
    pub fn zero(spec: &GroupSpec) -> Self {
        CurveClass {
            degree: 0,
            pic0: spec.zero(),
        }
    }

    pub fn point(p: &PointOnC) -> Self {
        CurveClass {
            degree: 1,
            pic0: p.aj.clone(),
        }
    }

    pub fn checked_add(&self, other: &CurveClass) -> Result<CurveClass> {
        Ok(CurveClass {
            degree: self
                .degree
                .checked_add(other.degree)
                .ok_or(Error::Overflow("curve class degree"))?,
            pic0: self.pic0.checked_add(&other.pic0)?,
        })
    }

    pub fn scale(&self, k: i64) -> Result<CurveClass> {
        Ok(CurveClass {
            degree: self
                .degree
                .checked_mul(k)
                .ok_or(Error::Overflow("curve class degree"))?,
            pic0: self.pic0.scale(k)?,
        })
    }

    /// `h⁰(C, O(c))` by Riemann–Roch on a genus-one curve.
    pub fn h0(&self) -> u64 {
        match self.degree {
            d if d >= 1 => d as u64,
            0 if self.pic0.is_zero() => 1,
            _ => 0,
        }
    }

    pub fn is_base_point_free(&self) -> bool {
        self.degree >= 2 || (self.degree == 0 && self.pic0.is_zero())
    }
}

/// A point of `C`, identified by its Abel–Jacobi image `[p − p₀]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointOnC {
    pub label: String,
    pub aj: GroupElement,
}

/// A point of `ℙ¹`. All points of `ℙ¹` are linearly equivalent, so only the
/// label matters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointOnP1 {
    pub label: String,
}

/// A divisor class `a·E + p₂*(c)` on `ℙ¹ × C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceClass {
    pub a: i64,
    #[serde(flatten)]
    pub c: CurveClass,
}

/// How `φ_{|u|}` behaves, factor by factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapReport {
    pub image_dim: u8,
    /// Degree onto the image; only defined for a surface image.
    pub map_degree: Option<u64>,
    pub image_degree: Option<i64>,
}

impl SurfaceClass {
    pub fn new(a: i64, degree: i64, pic0: GroupElement) -> Self {
        SurfaceClass {
            a,
            c: CurveClass { degree, pic0 },
        }
    }

    pub fn zero(spec: &GroupSpec) -> Self {
        SurfaceClass {
            a: 0,
            c: CurveClass::zero(spec),
        }
    }

    /// The fibre `E` of `p₁: Y → ℙ¹`, i.e. `{pt} × C`.
    pub fn fiber_e(spec: &GroupSpec) -> Self {
        SurfaceClass {
            a: 1,
            c: CurveClass::zero(spec),
        }
    }

    /// The fibre `ℙ¹ × {p}` over a point of `C`.
    pub fn fiber_f(p: &PointOnC) -> Self {
        SurfaceClass {
            a: 0,
            c: CurveClass::point(p),
        }
    }

    /// `K_Y = −2E`.
    pub fn canonical(spec: &GroupSpec) -> Self {
        SurfaceClass {
            a: -2,
            c: CurveClass::zero(spec),
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        self.c.pic0.spec()
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.c.degree == 0 && self.c.pic0.is_zero()
    }

    pub fn checked_add(&self, other: &SurfaceClass) -> Result<SurfaceClass> {
        Ok(SurfaceClass {
            a: self
                .a
                .checked_add(other.a)
                .ok_or(Error::Overflow("surface class"))?,
            c: self.c.checked_add(&other.c)?,
        })
    }

    pub fn scale(&self, k: i64) -> Result<SurfaceClass> {
        Ok(SurfaceClass {
            a: self.a.checked_mul(k).ok_or(Error::Overflow("surface class"))?,
            c: self.c.scale(k)?,
        })
    }

    pub fn checked_sub(&self, other: &SurfaceClass) -> Result<SurfaceClass> {
        self.checked_add(&other.scale(-1)?)
    }

    /// Sum of a sequence of classes, starting from the zero class of `spec`.
    pub fn sum<'a>(
        spec: &GroupSpec,
        classes: impl IntoIterator<Item = &'a SurfaceClass>,
    ) -> Result<SurfaceClass> {
        classes
            .into_iter()
            .try_fold(SurfaceClass::zero(spec), |acc, c| acc.checked_add(c))
    }

    pub fn intersect(&self, other: &SurfaceClass) -> Result<i64> {
        let x = self.a.checked_mul(other.c.degree);
        let y = other.a.checked_mul(self.c.degree);
        x.zip(y)
            .and_then(|(x, y)| x.checked_add(y))
            .ok_or(Error::Overflow("intersection"))
    }

    pub fn h0(&self) -> Result<u64> {
        let p1 = if self.a >= 0 { self.a as u64 + 1 } else { 0 };
        p1.checked_mul(self.c.h0()).ok_or(Error::Overflow("h0"))
    }

    pub fn is_base_point_free(&self) -> Result<bool> {
        if self.h0()? == 0 {
            return Err(Error::EmptyLinearSystem);
        }
        Ok(self.a >= 0 && self.c.is_base_point_free())
    }

    pub fn map_analysis(&self) -> Result<MapReport> {
        if self.h0()? == 0 {
            return Err(Error::EmptyLinearSystem);
        }
        // ℙ¹ factor: O(a), a ≥ 1, is a rational normal curve embedding.
        let p1_degree = (self.a >= 1).then_some(1u64);
        let c_degree = match self.c.degree {
            d if d >= 3 => Some(1u64),
            2 => Some(2),
            _ => None,
        };
        Ok(match (p1_degree, c_degree) {
            (Some(x), Some(y)) => {
                let map_degree = x * y;
                let self_int = self.intersect(self)?;
                MapReport {
                    image_dim: 2,
                    map_degree: Some(map_degree),
                    image_degree: Some(self_int / map_degree as i64),
                }
            }
            (None, None) => MapReport {
                image_dim: 0,
                map_degree: None,
                image_degree: None,
            },
            _ => MapReport {
                image_dim: 1,
                map_degree: None,
                image_degree: None,
            },
        })
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, deg {}, {})", self.a, self.c.degree, self.c.pic0)
    }
}
