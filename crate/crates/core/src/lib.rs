//! Equivariant reflexive sheaves on smooth complete toric varieties, described
//! by Klyachko filtrations: cohomology, multigraded Hilbert functions and
//! polynomials, support bounds and regularity regions, all in exact arithmetic.

pub mod cli;
pub mod cohomology;
pub mod config;
pub mod error;
pub mod exact_linalg;
pub mod filtration;
pub mod hilbert;
pub mod monomial_oracle;
pub mod polynomial;
pub mod polytopes;
pub mod toric;

pub use error::{Error, Result};
