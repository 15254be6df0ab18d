//! Exact verification of `Z₂³`-covers of `ℙ¹ × C`, `C` an elliptic curve.
//!
//! The crate builds Pardini-style building data `{L_χ, D_σ}`, checks the cover
//! relations and the normal-crossings condition on the branch locus, and
//! computes `K²`, `p_g`, `χ(O)`, `q` and the degree of the canonical map of the
//! covering surface. Everything is integer arithmetic; `Pic⁰(C)` is modelled
//! by a finitely generated abelian group, and [`curve_oracle`] re-checks that
//! model on an honest elliptic curve over a small prime field.
//!
//! ```
//! use z2cover::construction::construct_family;
//! use z2cover::invariants::{canonical_map_degree, compute_invariants};
//!
//! let bd = construct_family(3, None)?;
//! assert!(bd.verify_relations()?.ok);
//! let inv = compute_invariants(&bd)?;
//! assert_eq!((inv.k_squared, inv.p_g, inv.q), (48, 6, 1));
//! assert_eq!(canonical_map_degree(&bd)?.degree, Some(8));
//! # Ok::<(), z2cover::Error>(())
//! ```
//!
//! The guide under `book/` walks through the same material chapter by
//! chapter; its code listings are compiled as doctests of this crate.

pub mod abgroup;
pub mod characters;
pub mod construction;
pub mod cover;
pub mod curve_oracle;
pub mod error;
pub mod invariants;
pub mod picard;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/groups.md")]
mod book_groups {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/classes.md")]
mod book_classes {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/characters.md")]
mod book_characters {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/building-data.md")]
mod book_building_data {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/invariants.md")]
mod book_invariants {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/family.md")]
mod book_family {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/oracle.md")]
mod book_oracle {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
