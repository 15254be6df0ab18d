use thiserror::Error;

use crate::characters::Character;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidGroupSpec(String),

    #[error("group shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("cover group dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u8, u8),

    #[error("cover group dimension {0} out of range 1..=8")]
    DimensionOutOfRange(u32),

    #[error("invalid bit string {0:?}")]
    InvalidBits(String),

    #[error("malformed building data: {0}")]
    Malformed(String),

    #[error("linear system is empty (h0 = 0)")]
    EmptyLinearSystem,

    #[error("diagonal relation 2L_{0} = sum of D_sigma fails for generator {0}")]
    DiagonalRelation(Character),

    #[error("derived data leaves {} relation(s) unsatisfied", .0.len())]
    Inconsistent(Vec<(Character, Character)>),

    #[error("building data fails the cover relations")]
    RelationsFailed,

    #[error("odd value {0} where an even intersection number was required")]
    Integrality(i64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("oracle: {0}")]
    Oracle(String),

    #[error("parse error: {0}")]
    Parse(String),
}
