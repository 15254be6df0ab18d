//! Invariants of a smooth `Z₂ⁿ`-cover `f: X → Y = ℙ¹ × C`.
//!
//! With `S = 2K_Y + Σ_σ D_σ` and `2K_X ≡ f*S`:
//!
//! ```text
//! K_X²     = 2^{n-2} · S²
//! p_g(X)   = p_g(Y) + Σ_{χ≠χ₀} h⁰(K_Y + L_χ)
//! χ(O_X)   = 2ⁿ χ(O_Y) + Σ_{χ≠χ₀} ½ L_χ·(L_χ + K_Y)
//! q(X)     = 1 + p_g − χ(O_X)
//! ```
//!
//! For `n = 3` the first line is `K_X² = 2S²`. Here `p_g(Y) = χ(O_Y) = 0`
//! because `Y` is `ℙ¹` times an elliptic curve.
//!
//! `|K_X|` is spanned by `f*|K_Y + L_χ| + Σ_{χ(σ)=1} R_σ` over the characters
//! `χ ∈ J` with `h⁰(K_Y + L_χ) > 0`, where `R_σ` is the reduced preimage of
//! `D_σ`. When `J` is a single character and the `R_σ` term is empty the
//! canonical map is `φ_{|K_Y + L_χ|} ∘ f`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::characters::{Character, CoverElement, Sign};
use crate::cover::{BranchComponent, BuildingData};
use crate::error::{Error, Result};
use crate::picard::{MapReport, SurfaceClass};

/// `p_g`, `χ(O)` and `q` of `ℙ¹ × C`.
pub const BASE_P_G: i64 = 0;
pub const BASE_CHI: i64 = 0;
pub const BASE_Q: i64 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverInvariants {
    pub k_squared: i64,
    pub p_g: u64,
    pub chi: i64,
    pub q: i64,
    pub h0_by_character: BTreeMap<Character, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalGenerator {
    pub character: Character,
    /// `K_Y + L_χ`.
    pub class: SurfaceClass,
    pub h0: u64,
    /// Every nonzero `σ` with `χ(σ) = 1`.
    pub fixed_indices: Vec<CoverElement>,
    /// Those `σ` among `fixed_indices` whose `D_σ` is nonempty; the
    /// correction `Σ R_σ` is supported over them.
    pub correction: Vec<CoverElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalSystemDescription {
    pub contributing: Vec<Character>,
    pub generators: Vec<CanonicalGenerator>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalMapReport {
    pub factors_through_cover: bool,
    /// Set when the single contributing character carries a nonempty
    /// ramification correction, in which case no degree is assigned.
    pub correction_nonempty: bool,
    pub degree: Option<u64>,
    pub image_degree: Option<i64>,
    pub base_point_free: Option<bool>,
    pub factor_map: Option<MapReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NefCheck {
    pub curve: String,
    pub intersection: i64,
}

/// Evidence that `K_X` is nef and big: `S² > 0` and `S·C ≥ 0` for the
/// curves `E`, `F` and every branch component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub s_class: SurfaceClass,
    pub s_squared: i64,
    pub nef_checks: Vec<NefCheck>,
    pub nef_and_big: bool,
}

fn require_relations(bd: &BuildingData) -> Result<()> {
    if bd.verify_relations()?.ok {
        Ok(())
    } else {
        Err(Error::RelationsFailed)
    }
}

/// `2K_Y + Σ_σ D_σ`.
pub fn branch_canonical_class(bd: &BuildingData) -> Result<SurfaceClass> {
    SurfaceClass::canonical(bd.group_spec())
        .scale(2)?
        .checked_add(&bd.config().total_branch_class()?)
}

pub fn compute_invariants(bd: &BuildingData) -> Result<CoverInvariants> {
    require_relations(bd)?;
    let k_y = SurfaceClass::canonical(bd.group_spec());
    let dim = bd.cover_dim() as u32;

    let s = branch_canonical_class(bd)?;
    let s2 = s.intersect(&s)?;
    // K_X² = (f*S)² / 4 = 2ⁿ S² / 4
    let k_squared = if dim >= 2 {
        s2.checked_mul(1 << (dim - 2))
    } else if s2 % 2 == 0 {
        Some(s2 / 2)
    } else {
        return Err(Error::Integrality(s2));
    }
    .ok_or(Error::Overflow("K^2"))?;

    let mut h0_by_character = BTreeMap::new();
    let mut p_g = BASE_P_G as u64;
    let mut twice_chi_sum: i64 = 0;
    for (&chi, l) in bd.l_map() {
        let adjoint = l.checked_add(&k_y)?;
        let h0 = adjoint.h0()?;
        h0_by_character.insert(chi, h0);
        p_g = p_g.checked_add(h0).ok_or(Error::Overflow("p_g"))?;
        twice_chi_sum = twice_chi_sum
            .checked_add(l.intersect(&adjoint)?)
            .ok_or(Error::Overflow("chi"))?;
    }
    if twice_chi_sum % 2 != 0 {
        return Err(Error::Integrality(twice_chi_sum));
    }
    let chi = (1i64 << dim) * BASE_CHI + twice_chi_sum / 2;
    let q = 1 + p_g as i64 - chi;
    Ok(CoverInvariants {
        k_squared,
        p_g,
        chi,
        q,
        h0_by_character,
    })
}

pub fn canonical_system(bd: &BuildingData) -> Result<CanonicalSystemDescription> {
    require_relations(bd)?;
    let k_y = SurfaceClass::canonical(bd.group_spec());
    let mut contributing = Vec::new();
    let mut generators = Vec::new();
    for (&chi, l) in bd.l_map() {
        let class = l.checked_add(&k_y)?;
        let h0 = class.h0()?;
        if h0 == 0 {
            continue;
        }
        let mut fixed_indices = Vec::new();
        for sigma in CoverElement::nontrivial(bd.cover_dim())? {
            if chi.pair(sigma)? == Sign::Plus {
                fixed_indices.push(sigma);
            }
        }
        let correction = fixed_indices
            .iter()
            .copied()
            .filter(|&s| !bd.d_of(s).is_empty())
            .collect();
        contributing.push(chi);
        generators.push(CanonicalGenerator {
            character: chi,
            class,
            h0,
            fixed_indices,
            correction,
        });
    }
    Ok(CanonicalSystemDescription {
        contributing,
        generators,
    })
}

pub fn canonical_map_degree(bd: &BuildingData) -> Result<CanonicalMapReport> {
    let inv = compute_invariants(bd)?;
    if inv.p_g < 3 {
        return Err(Error::Precondition(format!(
            "p_g = {} is below 3, the canonical image is not a surface",
            inv.p_g
        )));
    }
    let system = canonical_system(bd)?;
    let undefined = |factors, correction_nonempty| CanonicalMapReport {
        factors_through_cover: factors,
        correction_nonempty,
        degree: None,
        image_degree: None,
        base_point_free: None,
        factor_map: None,
    };
    let [gen] = system.generators.as_slice() else {
        return Ok(undefined(false, false));
    };
    if !gen.correction.is_empty() {
        return Ok(undefined(true, true));
    }
    let map = gen.class.map_analysis()?;
    let degree = match (map.image_dim, map.map_degree) {
        (2, Some(d)) => Some(d << bd.cover_dim()),
        _ => None,
    };
    Ok(CanonicalMapReport {
        factors_through_cover: true,
        correction_nonempty: false,
        degree,
        image_degree: map.image_degree,
        base_point_free: Some(gen.class.is_base_point_free()?),
        factor_map: Some(map),
    })
}

pub fn minimality(bd: &BuildingData) -> Result<MinimalityReport> {
    let spec = bd.group_spec();
    let s = branch_canonical_class(bd)?;
    let s_squared = s.intersect(&s)?;
    let mut nef_checks = vec![
        NefCheck {
            curve: "E".into(),
            intersection: s.intersect(&SurfaceClass::fiber_e(spec))?,
        },
        NefCheck {
            curve: "F".into(),
            intersection: s.intersect(&SurfaceClass::new(0, 1, spec.zero()))?,
        },
    ];
    let mut seen: Vec<&BranchComponent> = bd.config().d.values().flatten().collect();
    seen.sort();
    seen.dedup();
    for comp in seen {
        nef_checks.push(NefCheck {
            curve: comp.label.clone(),
            intersection: s.intersect(&bd.config().component_class(comp)?)?,
        });
    }
    let nef_and_big = s_squared > 0 && nef_checks.iter().all(|c| c.intersection >= 0);
    Ok(MinimalityReport {
        s_class: s,
        s_squared,
        nef_checks,
        nef_and_big,
    })
}
