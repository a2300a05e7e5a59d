//! Double-exponential quadrature on finite and half-infinite intervals.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const MAX_LEVEL: u32 = 11;
const MIN_LEVEL: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// difference between the last two refinement levels
    pub error: f64,
    pub evaluations: usize,
}

/// Weighted samples at spacing `h`. `node` maps `t` to `(abscissa, weight)`.
/// Non-finite products are dropped; they only occur where the weight has
/// already underflowed.
fn level_sum<F, G>(f: &F, node: &G, h: f64, t_max: f64, odd_only: bool, count: &mut usize) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> Option<(f64, f64)>,
{
    let n = (t_max / h).ceil() as i64;
    let step = if odd_only { 2 } else { 1 };
    let start = if odd_only { 1 } else { 0 };
    let mut sum = 0.0;
    let mut j = start;
    let mut add = |t: f64| {
        if let Some((x, w)) = node(t) {
            *count += 1;
            let v = f(x) * w;
            if v.is_finite() {
                sum += v;
            }
        }
    };
    while j <= n {
        let t = j as f64 * h;
        add(t);
        if j > 0 {
            add(-t);
        }
        j += step;
    }
    sum
}

fn refine<F, G>(f: F, node: G, t_max: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> Option<(f64, f64)>,
{
    let mut count = 0;
    let mut h = 0.5;
    let mut sum = level_sum(&f, &node, h, t_max, false, &mut count);
    let mut prev = h * sum;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        sum += level_sum(&f, &node, h, t_max, true, &mut count);
        let value = h * sum;
        let error = (value - prev).abs();
        if level >= MIN_LEVEL && error <= tol * value.abs().max(f64::MIN_POSITIVE) {
            return Ok(QuadResult { value, error, evaluations: count });
        }
        prev = value;
    }
    Err(Error::Convergence(format!(
        "double-exponential quadrature did not reach {tol:e} (last estimate {prev:e})"
    )))
}

/// Tanh-sinh rule on `[a, b]`; tolerates integrable endpoint singularities.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    let half = 0.5 * (b - a);
    let node = move |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        // distance to the nearer endpoint in units of `half`
        let d = 2.0 * e / (1.0 + e);
        if d * half.abs() < f64::MIN_POSITIVE {
            return None;
        }
        let w = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e)) * half;
        let x = if t >= 0.0 { b - half * d } else { a + half * d };
        Some((x, w))
    };
    refine(f, node, 6.5, tol)
}

/// Exp-sinh rule on `[a, ∞)`; `scale` sets where the bulk of the integrand lives.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, a: f64, scale: f64, tol: f64) -> Result<QuadResult> {
    let node = move |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        if u.abs() > 700.0 {
            return None;
        }
        let e = u.exp();
        Some((a + scale * e, scale * FRAC_PI_2 * t.cosh() * e))
    };
    refine(f, node, 6.8, tol)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}
