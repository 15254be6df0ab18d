//! Building data `{L_χ, D_σ}` for `Z₂ⁿ`-covers of `ℙ¹ × C` and their checks.
//!
//! A collection of classes `L_χ` (one per nontrivial character) and effective
//! branch divisors `D_σ` (one per nontrivial element) defines a cover iff for
//! every pair of nontrivial characters
//!
//! ```text
//! L_χ + L_χ' ≡ L_{χχ'} + Σ_{χ(σ) = χ'(σ) = −1} D_σ
//! ```
//!
//! with `L_{χ₀} = 0`, the total branch divisor is reduced, and every
//! `L_χ ≢ 0`. All `(2ⁿ − 1)·2ⁿ / 2` unordered pairs are checked, diagonal
//! included, rather than a generating subset.
//!
//! Branch components are fibres of either ruling. Two distinct fibres of the
//! same ruling are disjoint and fibres of opposite rulings meet transversally
//! once, so the branch locus is simple normal crossings exactly when it is
//! reduced and the points of `C` it sits over are distinct.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::abgroup::{GroupElement, GroupSpec};
use crate::characters::{Character, CoverElement, Sign};
use crate::construction::FamilyInfo;
use crate::error::{Error, Result};
use crate::picard::{PointOnC, SurfaceClass};

pub const SCHEMA_VERSION: u32 = 1;

/// Which ruling a branch fibre belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FiberKind {
    /// `{t} × C` over a point `t ∈ ℙ¹`; class `E`.
    E,
    /// `ℙ¹ × {p}` over a point `p ∈ C`; class `(0, (1, aj(p)))`.
    F,
}

/// A branch fibre, referring to a declared point by label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchComponent {
    pub kind: FiberKind,
    pub label: String,
}

impl BranchComponent {
    pub fn e(label: impl Into<String>) -> Self {
        BranchComponent {
            kind: FiberKind::E,
            label: label.into(),
        }
    }

    pub fn f(label: impl Into<String>) -> Self {
        BranchComponent {
            kind: FiberKind::F,
            label: label.into(),
        }
    }
}

/// Everything in a building datum except the `L_χ`: the group model, the
/// declared points and the branch divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchConfiguration {
    pub cover_dim: u8,
    pub group_spec: GroupSpec,
    pub points_c: BTreeMap<String, GroupElement>,
    pub points_p1: Vec<String>,
    pub d: BTreeMap<CoverElement, Vec<BranchComponent>>,
    pub family: Option<FamilyInfo>,
}

impl BranchConfiguration {
    fn validate(&self) -> Result<()> {
        crate::characters::CoverElement::zero(self.cover_dim)?;
        for (label, aj) in &self.points_c {
            if aj.spec() != &self.group_spec {
                return Err(Error::Malformed(format!(
                    "point {label} lives in {} instead of {}",
                    aj.spec(),
                    self.group_spec
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for label in &self.points_p1 {
            if !seen.insert(label) {
                return Err(Error::Malformed(format!("P1 point {label} declared twice")));
            }
        }
        for (sigma, comps) in &self.d {
            if sigma.dim() != self.cover_dim || sigma.is_zero() {
                return Err(Error::Malformed(format!("branch index {sigma} is not a nonzero element of Z2^{}", self.cover_dim)));
            }
            for comp in comps {
                let known = match comp.kind {
                    FiberKind::E => seen.contains(&comp.label),
                    FiberKind::F => self.points_c.contains_key(&comp.label),
                };
                if !known {
                    return Err(Error::Malformed(format!(
                        "branch component {:?} {} refers to an undeclared point",
                        comp.kind, comp.label
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn point_c(&self, label: &str) -> Result<PointOnC> {
        self.points_c
            .get(label)
            .map(|aj| PointOnC {
                label: label.to_string(),
                aj: aj.clone(),
            })
            .ok_or_else(|| Error::Malformed(format!("unknown point {label} on C")))
    }

    pub fn component_class(&self, comp: &BranchComponent) -> Result<SurfaceClass> {
        match comp.kind {
            FiberKind::E => Ok(SurfaceClass::fiber_e(&self.group_spec)),
            FiberKind::F => Ok(SurfaceClass::fiber_f(&self.point_c(&comp.label)?)),
        }
    }

    /// Branch components over `σ`; an absent entry is the zero divisor.
    pub fn d_of(&self, sigma: CoverElement) -> &[BranchComponent] {
        self.d.get(&sigma).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn branch_class(&self, comps: &[BranchComponent]) -> Result<SurfaceClass> {
        comps.iter().try_fold(SurfaceClass::zero(&self.group_spec), |acc, c| {
            acc.checked_add(&self.component_class(c)?)
        })
    }

    /// Class of `B = Σ_σ D_σ`.
    pub fn total_branch_class(&self) -> Result<SurfaceClass> {
        self.d.values().try_fold(SurfaceClass::zero(&self.group_spec), |acc, comps| {
            acc.checked_add(&self.branch_class(comps)?)
        })
    }

    /// Nonzero `σ` with `χ(σ) = χ'(σ) = −1`, in lexicographic order.
    pub fn shared_branch_indices(&self, chi: Character, chi2: Character) -> Result<Vec<CoverElement>> {
        let mut out = Vec::new();
        for sigma in CoverElement::nontrivial(self.cover_dim)? {
            if chi.pair(sigma)? == Sign::Minus && chi2.pair(sigma)? == Sign::Minus {
                out.push(sigma);
            }
        }
        Ok(out)
    }

    /// `Σ_{χ(σ) = χ'(σ) = −1} D_σ`.
    pub fn shared_branch_class(&self, chi: Character, chi2: Character) -> Result<SurfaceClass> {
        self.shared_branch_indices(chi, chi2)?
            .into_iter()
            .try_fold(SurfaceClass::zero(&self.group_spec), |acc, s| {
                acc.checked_add(&self.branch_class(self.d_of(s))?)
            })
    }

    pub fn verify_smoothness(&self) -> SmoothnessReport {
        let mut seen = BTreeSet::new();
        let mut repeated = Vec::new();
        for comps in self.d.values() {
            for comp in comps {
                if !seen.insert(comp) {
                    repeated.push(comp.clone());
                }
            }
        }
        let points: Vec<(&String, &GroupElement)> = self.points_c.iter().collect();
        let mut colliding = Vec::new();
        for (i, (l1, a1)) in points.iter().enumerate() {
            for (l2, a2) in &points[i + 1..] {
                if a1 == a2 {
                    colliding.push(((*l1).clone(), (*l2).clone()));
                }
            }
        }
        let reduced = repeated.is_empty();
        let injective_points = colliding.is_empty();
        SmoothnessReport {
            reduced,
            injective_points,
            snc: reduced && injective_points,
            repeated_components: repeated,
            colliding_points: colliding,
        }
    }
}

/// A validated building datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildingData {
    config: BranchConfiguration,
    l: BTreeMap<Character, SurfaceClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub chi: Character,
    pub chi_prime: Character,
    pub lhs: SurfaceClass,
    pub rhs: SurfaceClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub pairs_checked: usize,
    pub failures: Vec<RelationFailure>,
    /// Characters whose `L_χ` is linearly equivalent to zero.
    pub trivial_l: Vec<Character>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub reduced: bool,
    pub snc: bool,
    pub injective_points: bool,
    pub repeated_components: Vec<BranchComponent>,
    pub colliding_points: Vec<(String, String)>,
}

impl SmoothnessReport {
    pub fn ok(&self) -> bool {
        self.reduced && self.snc && self.injective_points
    }
}

impl BuildingData {
    pub fn new(config: BranchConfiguration, l: BTreeMap<Character, SurfaceClass>) -> Result<Self> {
        config.validate()?;
        let expected: BTreeSet<Character> = Character::nontrivial(config.cover_dim)?.into_iter().collect();
        let given: BTreeSet<Character> = l.keys().copied().collect();
        if expected != given {
            return Err(Error::Malformed(format!(
                "L must have exactly one entry per nontrivial character of Z2^{}",
                config.cover_dim
            )));
        }
        for (chi, class) in &l {
            if class.spec() != &config.group_spec {
                return Err(Error::Malformed(format!("L_{chi} lives in {}", class.spec())));
            }
        }
        Ok(BuildingData { config, l })
    }

    pub fn config(&self) -> &BranchConfiguration {
        &self.config
    }

    pub fn cover_dim(&self) -> u8 {
        self.config.cover_dim
    }

    pub fn group_spec(&self) -> &GroupSpec {
        &self.config.group_spec
    }

    pub fn family(&self) -> Option<&FamilyInfo> {
        self.config.family.as_ref()
    }

    pub fn l_map(&self) -> &BTreeMap<Character, SurfaceClass> {
        &self.l
    }

    /// `L_χ`, with `L_{χ₀} = 0`.
    pub fn l_of(&self, chi: Character) -> SurfaceClass {
        self.l
            .get(&chi)
            .cloned()
            .unwrap_or_else(|| SurfaceClass::zero(self.group_spec()))
    }

    pub fn d_of(&self, sigma: CoverElement) -> &[BranchComponent] {
        self.config.d_of(sigma)
    }

    pub fn into_parts(self) -> (BranchConfiguration, BTreeMap<Character, SurfaceClass>) {
        (self.config, self.l)
    }

    /// A copy with `L_χ` replaced.
    pub fn with_l(&self, chi: Character, class: SurfaceClass) -> Result<BuildingData> {
        let mut l = self.l.clone();
        l.insert(chi, class);
        BuildingData::new(self.config.clone(), l)
    }

    /// `(L_χ + L_χ', L_{χχ'} + Σ D_σ)`.
    pub fn relation_sides(&self, chi: Character, chi2: Character) -> Result<(SurfaceClass, SurfaceClass)> {
        let lhs = self.l_of(chi).checked_add(&self.l_of(chi2))?;
        let rhs = self
            .l_of(chi.mul(chi2)?)
            .checked_add(&self.config.shared_branch_class(chi, chi2)?)?;
        Ok((lhs, rhs))
    }

    /// Unordered pairs `χ ≤ χ'` of nontrivial characters, lexicographic.
    pub fn character_pairs(&self) -> Result<Vec<(Character, Character)>> {
        let chars = Character::nontrivial(self.cover_dim())?;
        Ok(chars
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| chars[i..].iter().map(move |&b| (a, b)))
            .collect())
    }

    pub fn verify_relations(&self) -> Result<VerificationReport> {
        let pairs = self.character_pairs()?;
        let mut failures = Vec::new();
        for &(chi, chi2) in &pairs {
            let (lhs, rhs) = self.relation_sides(chi, chi2)?;
            if lhs != rhs {
                failures.push(RelationFailure {
                    chi,
                    chi_prime: chi2,
                    lhs,
                    rhs,
                });
            }
        }
        let trivial_l: Vec<Character> = self
            .l
            .iter()
            .filter(|(_, c)| c.is_zero())
            .map(|(&chi, _)| chi)
            .collect();
        Ok(VerificationReport {
            ok: failures.is_empty() && trivial_l.is_empty(),
            pairs_checked: pairs.len(),
            failures,
            trivial_l,
        })
    }

    pub fn verify_smoothness(&self) -> SmoothnessReport {
        self.config.verify_smoothness()
    }

    pub fn to_file(&self) -> BuildingDataFile {
        BuildingDataFile {
            schema_version: SCHEMA_VERSION,
            cover_dim: self.config.cover_dim,
            group_spec: self.config.group_spec.clone(),
            points_c: self.config.points_c.clone(),
            points_p1: self.config.points_p1.clone(),
            l: self.l.clone(),
            d: self.config.d.clone(),
            family: self.config.family.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("building data serializes")
    }

    pub fn from_json(text: &str) -> Result<BuildingData> {
        let file: BuildingDataFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.try_into()
    }
}

/// Canonical on-disk form of a building datum.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildingDataFile {
    pub schema_version: u32,
    pub cover_dim: u8,
    pub group_spec: GroupSpec,
    pub points_c: BTreeMap<String, GroupElement>,
    pub points_p1: Vec<String>,
    #[serde(rename = "L")]
    pub l: BTreeMap<Character, SurfaceClass>,
    #[serde(rename = "D")]
    pub d: BTreeMap<CoverElement, Vec<BranchComponent>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyInfo>,
}

impl TryFrom<BuildingDataFile> for BuildingData {
    type Error = Error;

    fn try_from(file: BuildingDataFile) -> Result<Self> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema_version {}",
                file.schema_version
            )));
        }
        let config = BranchConfiguration {
            cover_dim: file.cover_dim,
            group_spec: file.group_spec,
            points_c: file.points_c,
            points_p1: file.points_p1,
            d: file.d,
            family: file.family,
        };
        BuildingData::new(config, file.l)
    }
}

/// Completes a building datum from `L` on the basis characters.
///
/// `generators[i]` is `L` of the character with a single 1 in coordinate `i`.
/// Every other `L_χ` is obtained from the mixed relation with `χ = e ⊕ χ'`,
/// `e` the leading basis character of `χ`:
/// `L_χ = L_e + L_χ' − Σ_{e(σ) = χ'(σ) = −1} D_σ`. The result is then checked
/// against all pair relations.
pub fn derive_from_generators(
    config: BranchConfiguration,
    generators: &[SurfaceClass],
) -> Result<BuildingData> {
    config.validate()?;
    let dim = config.cover_dim;
    if generators.len() != dim as usize {
        return Err(Error::Precondition(format!(
            "expected {dim} generator classes, got {}",
            generators.len()
        )));
    }
    let mut l: BTreeMap<Character, SurfaceClass> = BTreeMap::new();
    for (i, g) in generators.iter().enumerate() {
        let e = Character::basis(dim, i as u8)?;
        let twice = g.scale(2)?;
        let branch = config.shared_branch_class(e, e)?;
        if twice != branch {
            return Err(Error::DiagonalRelation(e));
        }
        l.insert(e, g.clone());
    }
    // Increasing bit value: the tail χ' = χ ⊕ e is always smaller than χ.
    for chi in Character::nontrivial(dim)? {
        if l.contains_key(&chi) {
            continue;
        }
        let lead = (0..dim).find(|&i| chi.coord(i) == 1).expect("nonzero character");
        let e = Character::basis(dim, lead)?;
        let tail = chi.mul(e)?;
        let class = l[&e]
            .checked_add(&l[&tail])?
            .checked_sub(&config.shared_branch_class(e, tail)?)?;
        l.insert(chi, class);
    }
    let bd = BuildingData::new(config, l)?;
    let report = bd.verify_relations()?;
    if !report.failures.is_empty() {
        return Err(Error::Inconsistent(
            report.failures.iter().map(|f| (f.chi, f.chi_prime)).collect(),
        ));
    }
    Ok(bd)
}
