//! The elementary abelian group `Z₂ⁿ` (n ≤ 8), its characters, and the
//! `±1` pairing `χ_j(a) = (−1)^{Σ j_i a_i}`.
//!
//! Both elements and characters are written as bit strings with the first
//! coordinate leftmost, so `"100"` is `(1,0,0)` and `χ₁₀₀`. Ordering on either
//! type is lexicographic in that string.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_DIM: u8 = 8;

/// Value of a character on an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

fn check_dim(dim: u32) -> Result<u8> {
    if (1..=MAX_DIM as u32).contains(&dim) {
        Ok(dim as u8)
    } else {
        Err(Error::DimensionOutOfRange(dim))
    }
}

fn parse_bits(s: &str) -> Result<(u8, u8)> {
    let dim = check_dim(s.len() as u32).map_err(|_| Error::InvalidBits(s.to_string()))?;
    let mut bits = 0u8;
    for c in s.chars() {
        bits = (bits << 1)
            | match c {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::InvalidBits(s.to_string())),
            };
    }
    Ok((dim, bits))
}

fn fmt_bits(dim: u8, bits: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for i in (0..dim).rev() {
        f.write_str(if bits >> i & 1 == 1 { "1" } else { "0" })?;
    }
    Ok(())
}

macro_rules! bit_vector {
    ($name:ident) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name {
            dim: u8,
            bits: u8,
        }

        impl $name {
            /// `bits` packs the coordinates with the first coordinate in the
            /// most significant of the `dim` low bits.
            pub fn new(dim: u8, bits: u8) -> Result<Self> {
                let dim = check_dim(dim as u32)?;
                if dim < 8 && bits >> dim != 0 {
                    return Err(Error::InvalidBits(format!("{bits:#b} for dimension {dim}")));
                }
                Ok(Self { dim, bits })
            }

            pub fn zero(dim: u8) -> Result<Self> {
                Self::new(dim, 0)
            }

            /// The vector with a single 1 in coordinate `i` (0-based, leftmost first).
            pub fn basis(dim: u8, i: u8) -> Result<Self> {
                if i >= dim {
                    return Err(Error::InvalidBits(format!("basis index {i} for dimension {dim}")));
                }
                Self::new(dim, 1 << (dim - 1 - i))
            }

            pub fn dim(self) -> u8 {
                self.dim
            }

            pub fn bits(self) -> u8 {
                self.bits
            }

            pub fn is_zero(self) -> bool {
                self.bits == 0
            }

            /// Coordinate `i`, leftmost first.
            pub fn coord(self, i: u8) -> u8 {
                self.bits >> (self.dim - 1 - i) & 1
            }

            /// All `2^dim` vectors in lexicographic order, starting at zero.
            pub fn all(dim: u8) -> Result<Vec<Self>> {
                let dim = check_dim(dim as u32)?;
                Ok((0..1u16 << dim).map(|b| Self { dim, bits: b as u8 }).collect())
            }

            /// The `2^dim − 1` nonzero vectors in lexicographic order.
            pub fn nontrivial(dim: u8) -> Result<Vec<Self>> {
                Ok(Self::all(dim)?.into_iter().skip(1).collect())
            }

            fn xor(self, other: Self) -> Result<Self> {
                if self.dim != other.dim {
                    return Err(Error::DimensionMismatch(self.dim, other.dim));
                }
                Ok(Self {
                    dim: self.dim,
                    bits: self.bits ^ other.bits,
                })
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt_bits(self.dim, self.bits, f)
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                let (dim, bits) = parse_bits(s)?;
                Ok(Self { dim, bits })
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

bit_vector!(CoverElement);
bit_vector!(Character);

impl CoverElement {
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: CoverElement) -> Result<CoverElement> {
        self.xor(other)
    }
}

impl Character {
    /// Product of characters, i.e. XOR of their bit vectors.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Character) -> Result<Character> {
        self.xor(other)
    }

    pub fn pair(self, sigma: CoverElement) -> Result<Sign> {
        if self.dim != sigma.dim {
            return Err(Error::DimensionMismatch(self.dim, sigma.dim));
        }
        Ok(if (self.bits & sigma.bits).count_ones().is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        })
    }
}

pub fn nontrivial_characters(dim: u8) -> Result<Vec<Character>> {
    Character::nontrivial(dim)
}

pub fn nontrivial_elements(dim: u8) -> Result<Vec<CoverElement>> {
    CoverElement::nontrivial(dim)
}
