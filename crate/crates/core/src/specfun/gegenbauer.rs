use std::f64::consts::PI;

use super::gamma::gamma;
use crate::error::{domain, Result};

/// Gegenbauer polynomial `C_ℓ^λ(t)` by the three-term recurrence.
pub fn gegenbauer(ell: u32, lambda: f64, t: f64) -> f64 {
    let mut p0 = 1.0;
    if ell == 0 {
        return p0;
    }
    let mut p1 = 2.0 * lambda * t;
    for n in 2..=ell {
        let nf = n as f64;
        let p2 = (2.0 * t * (nf + lambda - 1.0) * p1 - (nf + 2.0 * lambda - 2.0) * p0) / nf;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Gegenbauer polynomial normalised as the projector kernel on the unit
/// sphere in `D >= 3` dimensions.
pub fn modified_gegenbauer(ell: u32, dim: u32, t: f64) -> Result<f64> {
    if dim < 3 {
        return Err(domain(format!("modified_gegenbauer needs D >= 3, got {dim}")));
    }
    let d = dim as f64;
    let lambda = 0.5 * (d - 2.0);
    let norm = (2.0 * ell as f64 + d - 2.0) * gamma(0.5 * d) / (2.0 * (d - 2.0) * PI.powf(0.5 * d));
    Ok(norm * gegenbauer(ell, lambda, t))
}
