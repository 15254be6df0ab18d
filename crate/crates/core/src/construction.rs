//! The `n`-parameter family of `Z₂³`-covers of `ℙ¹ × C` with `K² = 16n`,
//! `p_g = 2n`, `q = 1` and canonical map of degree 8 (degree 16 at `n = 2`).
//!
//! Group model: `Pic⁰(C) ≅ Z^{2n+1} ⊕ Z/2 ⊕ Z/2` with free generators
//! `g_1..g_n`, `h_1..h_n`, `u` and torsion generators `t₁`, `t₂`. Points:
//!
//! | label     | Abel–Jacobi image        |
//! |-----------|--------------------------|
//! | `F_i_i`   | `g_i + offset_i`         |
//! | `F_i`     | `h_i`                    |
//! | `F'_i`    | `2g_i − h_i`             |
//! | `F''_1`   | `u`                      |
//! | `F''_2`   | `u − t₁`                 |
//! | `F''_3`   | `u − t₁ − t₂`            |
//!
//! so `2F_ii ≡ F_i + F'_i`, `η₁ = F''_1 − F''_2 = t₁`, `η₂ = F''_2 − F''_3 = t₂`
//! and `η₃ = η₁ + η₂`. Each `offset_i` is one of the four 2-torsion classes;
//! they are the four halvings of `F_i + F'_i`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abgroup::{GroupElement, GroupSpec};
use crate::characters::{Character, CoverElement};
use crate::cover::{BranchComponent, BranchConfiguration, BuildingData};
use crate::error::{Error, Result};
use crate::picard::SurfaceClass;

/// Provenance recorded in files produced by [`construct_family`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyInfo {
    pub n: u32,
    /// Per-index 2-torsion offset of `F_ii`: 0 → 0, 1 → η₁, 2 → η₂, 3 → η₃.
    pub halving: Vec<u8>,
}

pub fn label_e(i: u32) -> String {
    format!("E_{i}")
}

pub fn label_f(i: u32) -> String {
    format!("F_{i}")
}

pub fn label_f_prime(i: u32) -> String {
    format!("F'_{i}")
}

pub fn label_f_half(i: u32) -> String {
    format!("F_{i}_{i}")
}

pub fn label_f_torsion(j: u32) -> String {
    format!("F''_{j}")
}

fn torsion_offset(spec: &GroupSpec, choice: u8) -> Result<GroupElement> {
    let t = match choice {
        0 => [0, 0],
        1 => [1, 0],
        2 => [0, 1],
        3 => [1, 1],
        _ => {
            return Err(Error::Precondition(format!(
                "halving choice {choice} is not in 0..=3"
            )))
        }
    };
    spec.element(vec![0; spec.rank()], t.to_vec())
}

fn ch(s: &str) -> Character {
    s.parse().expect("static character")
}

fn el(s: &str) -> CoverElement {
    s.parse().expect("static element")
}

/// Builds the family member for `n ≥ 2`. `halving`, when given, has one
/// entry in `0..=3` per index `i`.
pub fn construct_family(n: u32, halving: Option<&[u8]>) -> Result<BuildingData> {
    if n < 2 {
        return Err(Error::Precondition(format!("family parameter n = {n} must be at least 2")));
    }
    let nn = n as usize;
    let halving: Vec<u8> = match halving {
        Some(h) if h.len() != nn => {
            return Err(Error::Precondition(format!(
                "halving choice has {} entries, expected {n}",
                h.len()
            )))
        }
        Some(h) => h.to_vec(),
        None => vec![0; nn],
    };

    let spec = GroupSpec::new(2 * nn + 1, vec![2, 2])?;
    let g = |i: usize| spec.free_generator(i - 1);
    let h = |i: usize| spec.free_generator(nn + i - 1);
    let u = spec.free_generator(2 * nn);
    let t1 = spec.torsion_generator(0);
    let t2 = spec.torsion_generator(1);

    let mut points_c = BTreeMap::new();
    let mut sum_half = spec.zero();
    for i in 1..=nn {
        let half = g(i).checked_add(&torsion_offset(&spec, halving[i - 1])?)?;
        sum_half = sum_half.checked_add(&half)?;
        points_c.insert(label_f_half(i as u32), half);
        points_c.insert(label_f(i as u32), h(i));
        points_c.insert(label_f_prime(i as u32), g(i).scale(2)?.checked_sub(&h(i))?);
    }
    points_c.insert(label_f_torsion(1), u.clone());
    points_c.insert(label_f_torsion(2), u.checked_sub(&t1)?);
    points_c.insert(label_f_torsion(3), u.checked_sub(&t1)?.checked_sub(&t2)?);

    let mut d = BTreeMap::new();
    d.insert(el("100"), vec![BranchComponent::e(label_e(1)), BranchComponent::e(label_e(2))]);
    d.insert(el("101"), vec![BranchComponent::e(label_e(3)), BranchComponent::e(label_e(4))]);
    d.insert(el("110"), vec![BranchComponent::e(label_e(5)), BranchComponent::e(label_e(6))]);
    d.insert(
        el("111"),
        (1..=n)
            .flat_map(|i| [BranchComponent::f(label_f(i)), BranchComponent::f(label_f_prime(i))])
            .collect(),
    );

    let eta1 = t1.clone();
    let eta2 = t2.clone();
    let eta3 = t1.checked_add(&t2)?;
    let deg = n as i64;
    let mut l = BTreeMap::new();
    l.insert(ch("100"), SurfaceClass::new(3, deg, sum_half.clone()));
    l.insert(ch("010"), SurfaceClass::new(1, deg, sum_half.checked_add(&eta1)?));
    l.insert(ch("001"), SurfaceClass::new(1, deg, sum_half.checked_add(&eta2)?));
    l.insert(ch("110"), SurfaceClass::new(2, 0, eta1));
    l.insert(ch("101"), SurfaceClass::new(2, 0, eta2));
    l.insert(ch("011"), SurfaceClass::new(2, 0, eta3.clone()));
    l.insert(ch("111"), SurfaceClass::new(1, deg, sum_half.checked_add(&eta3)?));

    let config = BranchConfiguration {
        cover_dim: 3,
        group_spec: spec,
        points_c,
        points_p1: (1..=6).map(label_e).collect(),
        d,
        family: Some(FamilyInfo { n, halving }),
    };
    BuildingData::new(config, l)
}

/// The symbols `ΣF_ii`, `η₁`, `η₂`, `η₃` of a family member, read back from
/// its declared points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyBasis {
    pub n: u32,
    pub sum_half: GroupElement,
    pub etas: [GroupElement; 3],
}

impl FamilyBasis {
    pub fn of(bd: &BuildingData) -> Result<FamilyBasis> {
        let info = bd
            .family()
            .ok_or_else(|| Error::Precondition("building data carries no family record".into()))?;
        let cfg = bd.config();
        let mut sum_half = bd.group_spec().zero();
        for i in 1..=info.n {
            sum_half = sum_half.checked_add(&cfg.point_c(&label_f_half(i))?.aj)?;
        }
        let tp = |j| cfg.point_c(&label_f_torsion(j)).map(|p| p.aj);
        let eta1 = tp(1)?.checked_sub(&tp(2)?)?;
        let eta2 = tp(2)?.checked_sub(&tp(3)?)?;
        let eta3 = tp(1)?.checked_sub(&tp(3)?)?;
        Ok(FamilyBasis {
            n: info.n,
            sum_half,
            etas: [eta1, eta2, eta3],
        })
    }

    /// Writes a class as `aE + kΣF_ii + η`, or falls back to raw coordinates
    /// when it is not of that shape.
    pub fn render(&self, class: &SurfaceClass) -> String {
        self.try_render(class)
            .unwrap_or_else(|| format!("{}E + (deg {}, {})", class.a, class.c.degree, class.c.pic0))
    }

    fn try_render(&self, class: &SurfaceClass) -> Option<String> {
        let n = self.n as i64;
        if class.c.degree % n != 0 {
            return None;
        }
        let k = class.c.degree / n;
        let residual = class
            .c
            .pic0
            .checked_sub(&self.sum_half.scale(k).ok()?)
            .ok()?;
        let eta = if residual.is_zero() {
            None
        } else {
            Some(self.etas.iter().position(|e| *e == residual)?)
        };
        let mut terms = Vec::new();
        match class.a {
            0 => {}
            1 => terms.push("E".to_string()),
            a => terms.push(format!("{a}E")),
        }
        match k {
            0 => {}
            1 => terms.push("ΣF_ii".to_string()),
            k => terms.push(format!("{k}ΣF_ii")),
        }
        if let Some(j) = eta {
            terms.push(["η₁", "η₂", "η₃"][j].to_string());
        }
        Some(if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub chi: Character,
    pub chi_prime: Character,
    pub left: String,
    pub middle: String,
    pub lhs: SurfaceClass,
    pub rhs: SurfaceClass,
    pub lhs_symbolic: String,
    pub rhs_symbolic: String,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationsTable {
    pub n: u32,
    pub rows: Vec<TableRow>,
}

impl RelationsTable {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }
}

impl fmt::Display for RelationsTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let verdict = if r.equal { "equal" } else { "UNEQUAL" };
            write!(f, "{:<14} ≡ {:<30} ≡ {:<24} [{verdict}]", r.left, r.middle, r.rhs_symbolic)?;
            if !r.equal {
                write!(f, " (left side is {})", r.lhs_symbolic)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The six generating relations `(χ, χ')` over the basis characters.
pub const TABLE_ROWS: [(&str, &str); 6] = [
    ("100", "100"),
    ("100", "010"),
    ("100", "001"),
    ("010", "010"),
    ("010", "001"),
    ("001", "001"),
];

pub fn relations_table(bd: &BuildingData) -> Result<RelationsTable> {
    let basis = FamilyBasis::of(bd)?;
    let mut rows = Vec::with_capacity(TABLE_ROWS.len());
    for (a, b) in TABLE_ROWS {
        let (chi, chi2) = (ch(a), ch(b));
        let (lhs, rhs) = bd.relation_sides(chi, chi2)?;
        let mut middle: Vec<String> = bd
            .config()
            .shared_branch_indices(chi, chi2)?
            .iter()
            .map(|s| format!("D{s}"))
            .collect();
        let prod = chi.mul(chi2)?;
        if !prod.is_zero() {
            middle.push(format!("L{prod}"));
        }
        rows.push(TableRow {
            chi,
            chi_prime: chi2,
            left: format!("L{chi} + L{chi2}"),
            middle: middle.join(" + "),
            lhs_symbolic: basis.render(&lhs),
            rhs_symbolic: basis.render(&rhs),
            equal: lhs == rhs,
            lhs,
            rhs,
        });
    }
    Ok(RelationsTable { n: basis.n, rows })
}

/// One of the single-torsion perturbations `L_χ ↦ L_χ + η_k`.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub chi: Character,
    /// 1, 2 or 3.
    pub eta: u8,
    pub data: BuildingData,
}

/// All `7 × 3` single-torsion perturbations of a family member.
pub fn single_torsion_mutations(bd: &BuildingData) -> Result<Vec<Mutation>> {
    let basis = FamilyBasis::of(bd)?;
    let mut out = Vec::new();
    for (&chi, class) in bd.l_map() {
        for (k, eta) in basis.etas.iter().enumerate() {
            let mut mutated = class.clone();
            mutated.c.pic0 = mutated.c.pic0.checked_add(eta)?;
            out.push(Mutation {
                chi,
                eta: k as u8 + 1,
                data: bd.with_l(chi, mutated)?,
            });
        }
    }
    Ok(out)
}
