//! Time-sliced radial path integrals: short-time actions, their behaviour
//! under the duality map, and the Euclidean oscillator promotor built from
//! sliced kernels.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};

use crate::duality::{transform_system, DualityMap, RadialSystem};
use crate::error::{domain, Error, Result};
use crate::quad::tanh_sinh;
use crate::specfun::ln_bessel_i;

/// Geometric mean of two neighbouring radii.
fn mean(a: f64, b: f64) -> f64 {
    (a * b).sqrt()
}

/// Short-time action of one slice,
/// `(m/2τ)Δr² - (L²-1/4)ħ²τ/(2m r̂²) - (V(r̂) - E)τ` with `r̂ = √(r_j r_{j-1})`.
pub fn short_action(r_j: f64, r_prev: f64, tau: f64, system: &RadialSystem) -> f64 {
    let p = &system.params;
    let rh = mean(r_j, r_prev);
    let dr = r_j - r_prev;
    p.mass * dr * dr / (2.0 * tau) - p.centrifugal(rh) * tau - (p.potential(rh) - p.energy) * tau
}

/// Action of one slice on the dual side. `total` uses the dual angular
/// momentum `ηL` directly; `quantum_correction` is the
/// `(η²-1)ħ²σ/(8mρ̂²)` left over from the Schwarzian, so that
/// `total + quantum_correction` is the classical pullback.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedAction {
    pub total: f64,
    pub quantum_correction: f64,
}

impl TransformedAction {
    pub fn classical(&self) -> f64 {
        self.total + self.quantum_correction
    }
}

pub fn transformed_short_action(rho_j: f64, rho_prev: f64, sigma: f64, map: &DualityMap, system_a: &RadialSystem) -> Result<TransformedAction> {
    let dual = transform_system(system_a, map)?;
    Ok(dual_slice(rho_j, rho_prev, sigma, map, &dual))
}

fn dual_slice(rho_j: f64, rho_prev: f64, sigma: f64, map: &DualityMap, dual: &RadialSystem) -> TransformedAction {
    let p = &dual.params;
    let rh = mean(rho_j, rho_prev);
    let total = short_action(rho_j, rho_prev, sigma, dual);
    let eta2 = map.eta * map.eta;
    TransformedAction {
        total,
        quantum_correction: (eta2 - 1.0) * p.hbar * p.hbar * sigma / (8.0 * p.mass * rh * rh),
    }
}

/// `Σ_j |W_a(r_j, r_{j-1}; τ_j) - W_b(ρ_j, ρ_{j-1}; σ_j)|` along a path, with
/// `ρ = (r/C)^{1/η}`, `σ_j = τ_j/(C²η²ρ̂_j^{2η-2})` and the dual action
/// taken at its classical value.
pub fn action_duality_residual(path: &[f64], taus: &[f64], map: &DualityMap, system_a: &RadialSystem) -> Result<f64> {
    if path.len() != taus.len() + 1 {
        return Err(domain("a path of N slices needs N+1 radii"));
    }
    if path.iter().any(|&r| !(r > 0.0)) || taus.iter().any(|&t| !(t > 0.0)) {
        return Err(domain("radii and time steps must be positive"));
    }
    let dual = transform_system(system_a, map)?;
    let rho: Vec<f64> = path.iter().map(|&r| map.inverse_radius(r)).collect();
    let mut total = 0.0;
    for j in 1..path.len() {
        let rh = mean(rho[j], rho[j - 1]);
        let sigma = taus[j - 1] / crate::duality::short_time_jacobian(map, rh);
        let wa = short_action(path[j], path[j - 1], taus[j - 1], system_a);
        let wb = dual_slice(rho[j], rho[j - 1], sigma, map, &dual).classical();
        total += (wa - wb).abs();
    }
    Ok(total)
}

/// Euclidean promotor of the oscillator in the reduced radial variable,
/// `⟨ρ''| e^{-(H-E)σ/ħ} |ρ'⟩`.
pub fn closed_promotor_osc(rho_outer: f64, rho_inner: f64, sigma: f64, l: f64, omega: f64, energy: f64, mass: f64, hbar: f64) -> Result<f64> {
    if !(rho_outer > 0.0 && rho_inner > 0.0 && sigma > 0.0) || !(omega >= 0.0) || !(l >= 0.0) {
        return Err(domain("promotor needs positive radii and σ, ω >= 0, L >= 0"));
    }
    if omega == 0.0 {
        return free_promotor(rho_outer, rho_inner, sigma, l, mass, hbar).map(|p| p * (energy * sigma / hbar).exp());
    }
    let ws = omega * sigma;
    let c = mass * omega / hbar;
    let x = c * rho_outer * rho_inner / ws.sinh();
    let ln = (c * (rho_outer * rho_inner).sqrt() / ws.sinh()).ln() - 0.5 * c * (rho_outer * rho_outer + rho_inner * rho_inner) / ws.tanh()
        + energy * sigma / hbar
        + ln_bessel_i(l, x)?;
    Ok(ln.exp())
}

/// Free radial promotor, the `ω → 0` limit of [`closed_promotor_osc`] at `E = 0`.
pub fn free_promotor(rho_outer: f64, rho_inner: f64, sigma: f64, l: f64, mass: f64, hbar: f64) -> Result<f64> {
    let c = mass / (hbar * sigma);
    let x = c * rho_outer * rho_inner;
    let ln = (c * (rho_outer * rho_inner).sqrt()).ln() - 0.5 * c * (rho_outer * rho_outer + rho_inner * rho_inner) + ln_bessel_i(l, x)?;
    Ok(ln.exp())
}

const MIN_POINTS: usize = 16;

/// Radial grid with trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub points: Array1<f64>,
    pub weights: Array1<f64>,
}

impl RadialGrid {
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        let n = points.len();
        if n < MIN_POINTS || points.windows(2).any(|w| !(w[1] > w[0])) || !(points[0] > 0.0) {
            return Err(domain(format!("grid needs at least {MIN_POINTS} increasing positive points")));
        }
        let mut weights = vec![0.0; n];
        for i in 0..n - 1 {
            let h = points[i + 1] - points[i];
            weights[i] += 0.5 * h;
            weights[i + 1] += 0.5 * h;
        }
        Ok(RadialGrid { points: Array1::from(points), weights: Array1::from(weights) })
    }

    /// Geometric spacing up to `split`, uniform spacing `h` beyond it. Both
    /// parts are images of one uniform parameter grid under a map with
    /// continuous slope; weights are trapezoid weights in that parameter.
    pub fn geometric_uniform(r_min: f64, split: f64, r_max: f64, h: f64) -> Result<Self> {
        if !(0.0 < r_min && r_min < split && split < r_max && h > 0.0 && h < split) {
            return Err(domain("need 0 < r_min < split < r_max and 0 < h < split"));
        }
        let u = h / split;
        let n_geo = ((split / r_min).ln() / u).round() as usize;
        let n_uni = ((r_max - split) / h).round() as usize;
        let mut pts = Vec::with_capacity(n_geo + n_uni + 1);
        let mut wts = Vec::with_capacity(n_geo + n_uni + 1);
        for k in 0..n_geo {
            let r = split * (-((n_geo - k) as f64) * u).exp();
            pts.push(r);
            wts.push(if k == 0 { 0.5 * r * u } else { r * u });
        }
        for k in 0..=n_uni {
            pts.push(split + k as f64 * h);
            wts.push(if k == n_uni { 0.5 * h } else { h });
        }
        if pts.len() < MIN_POINTS {
            return Err(domain(format!("grid needs at least {MIN_POINTS} points")));
        }
        Ok(RadialGrid { points: Array1::from(pts), weights: Array1::from(wts) })
    }

    /// About 600 points on `[1e-3, 8]`, uniform with spacing `1/75` above `2/75`.
    pub fn standard() -> Self {
        Self::geometric_uniform(1e-3, 2.0 / 75.0, 8.0, 1.0 / 75.0).expect("standard grid parameters are valid")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the grid point nearest to `r`.
    pub fn nearest(&self, r: f64) -> usize {
        let mut best = 0;
        for (i, p) in self.points.iter().enumerate() {
            if (p - r).abs() < (self.points[best] - r).abs() {
                best = i;
            }
        }
        best
    }
}

/// Form of the single-slice kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelForm {
    /// `(m√(ρ''ρ')/ħσ) e^{-m(ρ''²+ρ'²)/2ħσ} I_L(mρ''ρ'/ħσ) e^{-(V(ρ̂)-E)σ/ħ}`, exact
    /// for the free part at any `σ`
    #[default]
    Bessel,
    /// `√(m/2πħσ) e^{-W_E/ħ}` with
    /// `W_E = (m/2σ)Δρ² + (L²-1/4)ħ²σ/(2mρ̂²) + (V(ρ̂) - E)σ`
    Exponential,
}

/// One entry of the single-slice Euclidean kernel, `ρ̂ = √(ρ''ρ')`.
pub fn short_kernel_value(rho_outer: f64, rho_inner: f64, sigma: f64, system: &RadialSystem, form: KernelForm) -> Result<f64> {
    let p = &system.params;
    let rh = mean(rho_outer, rho_inner);
    let u = (p.potential(rh) - p.energy) * sigma;
    match form {
        KernelForm::Bessel => {
            let c = p.mass / (p.hbar * sigma);
            let ln = (c * rh).ln() - 0.5 * c * (rho_outer * rho_outer + rho_inner * rho_inner) + ln_bessel_i(p.angular_momentum, c * rho_outer * rho_inner)? - u / p.hbar;
            Ok(ln.exp())
        }
        KernelForm::Exponential => {
            let d = rho_outer - rho_inner;
            let w = p.mass * d * d / (2.0 * sigma) + p.centrifugal(rh) * sigma + u;
            Ok((p.mass / (2.0 * PI * p.hbar * sigma)).sqrt() * (-w / p.hbar).exp())
        }
    }
}

/// Single-slice kernel matrix on the grid.
pub fn short_kernel(grid: &RadialGrid, sigma: f64, system: &RadialSystem, form: KernelForm) -> Result<Array2<f64>> {
    let n = grid.len();
    let mut k = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            k[[i, j]] = short_kernel_value(grid.points[i], grid.points[j], sigma, system, form)?;
        }
    }
    Ok(k)
}

/// `A^n` by repeated squaring.
pub fn matrix_power(a: &Array2<f64>, mut n: usize) -> Array2<f64> {
    let mut result: Option<Array2<f64>> = None;
    let mut base = a.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = Some(match result {
                Some(r) => r.dot(&base),
                None => base.clone(),
            });
        }
        n >>= 1;
        if n > 0 {
            base = base.dot(&base);
        }
    }
    result.unwrap_or_else(|| Array2::eye(a.nrows()))
}

/// Weighted single-slice matrix `K_ij w_j`; its powers compose slices.
pub fn weighted_kernel(grid: &RadialGrid, sigma: f64, system: &RadialSystem, form: KernelForm) -> Result<Array2<f64>> {
    let mut k = short_kernel(grid, sigma, system, form)?;
    for mut row in k.rows_mut() {
        row *= &grid.weights;
    }
    Ok(k)
}

/// Promotor over `σ_total` from `n` Bessel-form slices: entry `(i, j)`
/// approximates `P(ρ_i, ρ_j; σ_total)`.
pub fn sliced_promotor_compose(grid: &RadialGrid, n: usize, sigma_total: f64, system: &RadialSystem) -> Result<Array2<f64>> {
    sliced_promotor_compose_with(grid, n, sigma_total, system, KernelForm::Bessel)
}

pub fn sliced_promotor_compose_with(grid: &RadialGrid, n: usize, sigma_total: f64, system: &RadialSystem, form: KernelForm) -> Result<Array2<f64>> {
    if n == 0 || !(sigma_total > 0.0) {
        return Err(domain("need at least one slice and σ > 0"));
    }
    let a = weighted_kernel(grid, sigma_total / n as f64, system, form)?;
    let mut p = matrix_power(&a, n);
    for mut row in p.rows_mut() {
        row /= &grid.weights;
    }
    check_truncation(grid, &p)?;
    Ok(p)
}

/// Fails when sources in the inner half of the grid leak appreciable
/// mass into the outermost 5% of the grid.
fn check_truncation(grid: &RadialGrid, p: &Array2<f64>) -> Result<()> {
    let n = grid.len();
    let r_max = grid.points[n - 1];
    let edge: Vec<usize> = (0..n).filter(|&i| grid.points[i] >= 0.95 * r_max).collect();
    let mut worst = 0.0f64;
    for j in (0..n).filter(|&j| grid.points[j] <= 0.5 * r_max) {
        let col = p.column(j);
        let total: f64 = col.iter().zip(grid.weights.iter()).map(|(v, w)| v * w).sum();
        let tail: f64 = edge.iter().map(|&i| col[i] * grid.weights[i]).sum();
        if total > 0.0 {
            worst = worst.max(tail / total);
        }
    }
    if worst > 1e-8 {
        return Err(Error::Convergence(format!("grid edge carries {worst:e} of the kernel mass")));
    }
    Ok(())
}

/// Relative deviations of the three Gaussian moment relations used to
/// simplify short-time actions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussMoments {
    /// `∫e^{-αx²/ε + βx²}` against `√(πε/α) e^{βε/(2α)}`
    pub quadratic: f64,
    /// `∫e^{-αx²/ε + γx³/ε}` against `√(πε/α)`
    pub cubic: f64,
    /// `∫e^{-αx²/ε + δx⁴/ε}` against `√(πε/α) e^{3δε/(4α²)}`
    pub quartic: f64,
}

pub fn gauss_moment_check(alpha: f64, beta: f64, gamma: f64, delta: f64, eps: f64) -> Result<GaussMoments> {
    if !(alpha > 0.0 && eps > 0.0) {
        return Err(domain("need α > 0 and ε > 0"));
    }
    let base = (PI * eps / alpha).sqrt();
    let width = (eps / alpha).sqrt();
    let integrate = |g: &dyn Fn(f64) -> f64, cut: f64| -> Result<f64> {
        Ok(tanh_sinh(|x| g(x), -cut, cut, 1e-14)?.value)
    };
    // the cubic and quartic exponents turn over far out; integrate up to
    // where the Gaussian has long since decayed
    let far = 40.0 * width;
    let cut_cubic = if gamma == 0.0 { far } else { far.min(alpha / (2.0 * gamma.abs())) };
    let cut_quartic = if delta <= 0.0 { far } else { far.min((alpha / (2.0 * delta)).sqrt()) };
    let q = integrate(&|x| (-alpha * x * x / eps + beta * x * x).exp(), far)?;
    let c = integrate(&|x| (-alpha * x * x / eps + gamma * x * x * x / eps).exp(), cut_cubic)?;
    let d = integrate(&|x| (-alpha * x * x / eps + delta * x.powi(4) / eps).exp(), cut_quartic)?;
    Ok(GaussMoments {
        quadratic: (q / (base * (beta * eps / (2.0 * alpha)).exp()) - 1.0).abs(),
        cubic: (c / base - 1.0).abs(),
        quartic: (d / (base * (3.0 * delta * eps / (4.0 * alpha * alpha)).exp()) - 1.0).abs(),
    })
}
