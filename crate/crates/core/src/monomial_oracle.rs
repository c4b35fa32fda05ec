//! Cone pieces of monomial ideals in the Cox ring of `P^n`.
//!
//! On the chart of a cone the variables of rays outside the cone are
//! inverted, so the piece `I^sigma_m` is spanned by `x^{phi(m)}` exactly when
//! some generator divides it in the variables of the cone.

use crate::error::{Error, Result};
use crate::toric::{Cone, ToricVariety};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    variety: ToricVariety,
    generators: Vec<Vec<u32>>,
}

impl MonomialIdeal {
    /// Ideal of `P^n` generated by the monomials with the given exponents,
    /// one entry per ray `rho_0..rho_n`.
    pub fn new(n: usize, generators: Vec<Vec<u32>>) -> Result<Self> {
        let variety = ToricVariety::projective_space(n)?;
        if generators.is_empty() {
            return Err(Error::invalid("a monomial ideal needs at least one generator"));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != n + 1) {
            return Err(Error::DimensionMismatch { expected: n + 1, found: g.len() });
        }
        Ok(MonomialIdeal { variety, generators })
    }

    pub fn variety(&self) -> &ToricVariety {
        &self.variety
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }
}

/// `dim I^sigma_m`, either 0 or 1.
pub fn sigma_piece_dim(ideal: &MonomialIdeal, cone: &Cone, m: &[i64]) -> usize {
    let v = &ideal.variety;
    ideal
        .generators
        .iter()
        .any(|g| cone.rays.iter().all(|&k| i64::from(g[k]) <= v.pairing(m, k)))
        .into()
}
