use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::rank::residue;
use super::IntMatrix;
use crate::error::{Error, Result};

/// A character of the torus over a finite field, stored as exponents of a
/// generator of the cyclic group of order `order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCharacter", into = "RawCharacter")]
pub struct CharacterVector {
    order: u64,
    exponents: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawCharacter {
    order: u64,
    exponents: Vec<u64>,
}

impl TryFrom<RawCharacter> for CharacterVector {
    type Error = Error;
    fn try_from(r: RawCharacter) -> Result<Self> {
        CharacterVector::new(r.order, r.exponents)
    }
}

impl From<CharacterVector> for RawCharacter {
    fn from(c: CharacterVector) -> Self {
        RawCharacter { order: c.order, exponents: c.exponents }
    }
}

impl CharacterVector {
    /// Requires `order ≥ 1`, at least one exponent, and each exponent below `order`.
    pub fn new(order: u64, exponents: Vec<u64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidCharacter("order must be positive".into()));
        }
        if exponents.is_empty() {
            return Err(Error::InvalidCharacter("no exponents".into()));
        }
        if let Some(e) = exponents.iter().find(|&&e| e >= order) {
            return Err(Error::InvalidCharacter(format!("exponent {e} not below order {order}")));
        }
        Ok(CharacterVector { order, exponents })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn nontrivial0(&self) -> bool {
        self.exponents[0] != 0
    }
}

/// `e'_i = Σ_k m_ik · e_k mod order`.
pub fn character_transform(chi: &CharacterVector, m: &IntMatrix) -> Result<CharacterVector> {
    let n = chi.exponents.len();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::Dimension(format!(
            "character of length {n} against a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    let exponents = (0..n)
        .map(|i| {
            let s: BigInt = (0..n).map(|k| m.get(i, k) * BigInt::from(chi.exponents[k])).sum();
            residue(&s, chi.order)
        })
        .collect();
    Ok(CharacterVector { order: chi.order, exponents })
}
