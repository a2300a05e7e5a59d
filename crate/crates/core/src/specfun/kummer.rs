use super::gamma::{ln_gamma, pochhammer, factorial};
use crate::error::{domain, Error, Result};
use crate::quad::exp_sinh;
use crate::FunctionAccuracy;

const ASYMPTOTIC_Z: f64 = 30.0;

fn non_positive_integer(x: f64) -> Option<u32> {
    if x <= 0.0 && x == x.floor() && x > -1e6 {
        Some((-x) as u32)
    } else {
        None
    }
}

/// Kummer's confluent hypergeometric function `M(a, b, z) = ₁F₁(a; b; z)`.
pub fn kummer_m(a: f64, b: f64, z: f64, acc: FunctionAccuracy) -> Result<f64> {
    if non_positive_integer(b).is_some() {
        return Err(Error::Pole(format!("kummer_m: b = {b} is a non-positive integer")));
    }
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(domain("kummer_m: non-finite argument"));
    }
    let terminate = non_positive_integer(a);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..acc.max_terms {
        let kf = k as f64;
        if let Some(n) = terminate {
            if k as u32 >= n {
                return Ok(sum);
            }
        }
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum += term;
        if !sum.is_finite() {
            return Err(Error::Overflow(format!("M({a}, {b}, {z})")));
        }
        let past_peak = (a + kf).abs() * z.abs() < (b + kf).abs() * (kf + 1.0);
        if past_peak && term.abs() <= 0.1 * acc.rel_tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Convergence(format!("M({a}, {b}, {z}) after {} terms", acc.max_terms)))
}

/// Asymptotic series `z^{-a} Σ (a)_k (a-b+1)_k / k! (-z)^{-k}`; `None` if it
/// stalls before reaching the tolerance.
fn u_asymptotic(a: f64, b: f64, z: f64, tol: f64, terminating: bool) -> Option<f64> {
    let c = a - b + 1.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..2000 {
        let kf = k as f64;
        let next = term * -(a + kf) * (c + kf) / ((kf + 1.0) * z);
        if next == 0.0 {
            return Some(sum * z.powf(-a));
        }
        if !terminating && next.abs() > last {
            return None;
        }
        sum += next;
        term = next;
        last = next.abs();
        if last <= 0.1 * tol * sum.abs() {
            return Some(sum * z.powf(-a));
        }
    }
    None
}

/// `U(c, b, z)` for `c >= 1` from `Γ(c) U = ∫₀^∞ e^{-zt} t^{c-1} (1+t)^{b-c-1} dt`.
fn u_integral(c: f64, b: f64, z: f64, tol: f64) -> Result<f64> {
    let f = |t: f64| {
        (-z * t + (c - 1.0) * t.ln() + (b - c - 1.0) * t.ln_1p()).exp()
    };
    let scale = (b - 2.0).max(1.0) / z;
    let r = exp_sinh(f, 0.0, scale, tol)?;
    Ok((r.value.ln() - ln_gamma(c)).exp())
}

/// Tricomi's confluent hypergeometric function `U(a, b, z)`, `z > 0`.
pub fn kummer_u(a: f64, b: f64, z: f64, acc: FunctionAccuracy) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain(format!("kummer_u: z = {z} must be positive")));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(domain("kummer_u: non-finite parameter"));
    }
    let tol = acc.rel_tol.max(1e-15);
    if non_positive_integer(a).is_some() || non_positive_integer(a - b + 1.0).is_some() {
        if let Some(v) = u_asymptotic(a, b, z, 0.0, true) {
            return Ok(v);
        }
    }
    if z >= ASYMPTOTIC_Z {
        if let Some(v) = u_asymptotic(a, b, z, tol, false) {
            return Ok(v);
        }
    }
    // shift a up into [1, 2), integrate there and recur back down
    let steps = if a < 1.0 { (1.0 - a).ceil() as usize } else { 0 };
    let c = a + steps as f64;
    let upper = u_integral(c + 1.0, b, z, 0.01 * tol)?;
    let mut lower = u_integral(c, b, z, 0.01 * tol)?;
    if steps == 0 {
        return Ok(lower);
    }
    let mut above = upper;
    let mut s = c;
    for _ in 0..steps {
        // U(s-1) = (z + 2s - b) U(s) - s (s - b + 1) U(s+1)
        let next = (z + 2.0 * s - b) * lower - s * (s - b + 1.0) * above;
        above = lower;
        lower = next;
        s -= 1.0;
    }
    if !lower.is_finite() {
        return Err(Error::Overflow(format!("U({a}, {b}, {z})")));
    }
    Ok(lower)
}

/// Whittaker `M_{k,μ}(z) = e^{-z/2} z^{μ+1/2} M(μ-k+1/2, 2μ+1, z)`.
pub fn whittaker_m(k: f64, mu: f64, z: f64, acc: FunctionAccuracy) -> Result<f64> {
    if !(z > 0.0) {
        return Err(domain(format!("whittaker_m: z = {z} must be positive")));
    }
    let m = kummer_m(mu - k + 0.5, 2.0 * mu + 1.0, z, acc)?;
    let v = m.signum() * (-0.5 * z + (mu + 0.5) * z.ln() + m.abs().ln()).exp();
    if !v.is_finite() {
        return Err(Error::Overflow(format!("M_{{{k},{mu}}}({z})")));
    }
    Ok(v)
}

/// Whittaker `W_{k,μ}(z) = e^{-z/2} z^{μ+1/2} U(μ-k+1/2, 2μ+1, z)`.
pub fn whittaker_w(k: f64, mu: f64, z: f64, acc: FunctionAccuracy) -> Result<f64> {
    if !(z > 0.0) {
        return Err(domain(format!("whittaker_w: z = {z} must be positive")));
    }
    let u = kummer_u(mu - k + 0.5, 2.0 * mu + 1.0, z, acc)?;
    let v = u.signum() * (-0.5 * z + (mu + 0.5) * z.ln() + u.abs().ln()).exp();
    if !v.is_finite() {
        return Err(Error::Overflow(format!("W_{{{k},{mu}}}({z})")));
    }
    Ok(v)
}

/// Generalized Laguerre polynomial `L_n^α(x)`.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0 + alpha - x) * p1 - (kf + alpha) * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `M(-n, α+1, x) = n! Γ(α+1) / Γ(n+α+1) L_n^α(x)`.
pub fn kummer_m_polynomial(n: u32, alpha: f64, x: f64) -> f64 {
    factorial(n) / pochhammer(alpha + 1.0, n) * laguerre(n, alpha, x)
}
