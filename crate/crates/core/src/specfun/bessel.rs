use std::f64::consts::PI;

use super::gamma::ln_gamma;
use crate::error::{domain, Error, Result};

const MAX_SERIES_TERMS: usize = 200_000;
const RESCALE: f64 = 1e250;

/// `ln I_ν(x)` for `ν >= 0`, `x >= 0`.
pub fn ln_bessel_i(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(domain(format!("bessel order {nu} must be non-negative")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(format!("bessel argument {x} must be non-negative")));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 0.0 } else { f64::NEG_INFINITY });
    }
    if x >= 30.0 && x >= nu * nu {
        Ok(x - 0.5 * (2.0 * PI * x).ln() + hankel_sum(nu, x).ln())
    } else {
        ln_series(nu, x)
    }
}

fn hankel_sum(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() > last {
            break;
        }
        sum += term;
        last = term.abs();
        if last < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn ln_series(nu: f64, x: f64) -> Result<f64> {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut scale = 0.0;
    for k in 1..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if sum > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            scale += RESCALE.ln();
        }
        if term < 1e-17 * sum && q < kf * (nu + kf) {
            return Ok(nu * (0.5 * x).ln() - ln_gamma(nu + 1.0) + sum.ln() + scale);
        }
    }
    Err(Error::Convergence(format!("bessel series I_{nu}({x})")))
}

/// Modified Bessel function of the first kind `I_ν(x)`.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    let l = ln_bessel_i(nu, x)?;
    if l > 709.0 {
        return Err(Error::Overflow(format!("I_{nu}({x})")));
    }
    Ok(l.exp())
}

/// Exponentially scaled `e^{-x} I_ν(x)`.
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64> {
    Ok((ln_bessel_i(nu, x)? - x).exp())
}
