//! Radial Green functions of power-law potentials related by the duality
//! `r = C ρ^η`, together with independent numerical checks.
//!
//! The map sends a radial problem with primary term `λ_a r^a` at energy
//! `E_a` into one with primary term `λ_b ρ^b` at energy `E_b`, swapping the
//! roles of energy and coupling. Coulomb and oscillator are the canonical
//! pair (`a = -1`, `b = 2`).

pub mod cli;
pub mod confine;
pub mod duality;
pub mod error;
pub mod green;
pub mod oracle;
pub mod quad;
pub mod slicer;
pub mod specfun;

pub use error::{Error, Result};

/// Target accuracy for series and quadrature based special functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionAccuracy {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for FunctionAccuracy {
    fn default() -> Self {
        FunctionAccuracy { rel_tol: 1e-12, max_terms: 500 }
    }
}
