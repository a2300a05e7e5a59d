//! Closed-form radial Green functions `(H - E)^{-1}` of the oscillator and
//! Coulomb problems, their spectra and eigenfunctions, and Green functions
//! obtained through a duality map.
//!
//! All Green functions here are one-dimensional radial kernels in the
//! reduced variable: they jump in slope by `-2m/ħ²` at coincident points and
//! behave as `ψ(r'')ψ(r')/(E_n - E)` near a pole.

use std::sync::Arc;

use crate::duality::{transform_params, DualityMap, PowerTerm, SystemParams};
use crate::error::{domain, Error, Result};
use crate::quad::tanh_sinh;
use crate::specfun::{factorial, ln_bessel_i, ln_gamma, ln_gamma_signed, pole_distance, whittaker_m, whittaker_w};
use crate::FunctionAccuracy;

pub const POLE_GUARD: f64 = 1e-12;

fn ordered(outer: f64, inner: f64) -> Result<()> {
    if !(inner > 0.0) || !outer.is_finite() {
        return Err(domain(format!("radii must be positive, got {inner} and {outer}")));
    }
    if !(outer > inner) {
        return Err(Error::Ordering { outer, inner });
    }
    Ok(())
}

/// `Γ(g)/Γ(d)` with the pole guard applied to `g`.
fn gamma_ratio(g: f64, d: f64) -> Result<f64> {
    if let Some(dist) = pole_distance(g) {
        if dist < POLE_GUARD {
            return Err(Error::Pole(format!("Γ({g}) within {dist:e} of a pole")));
        }
    }
    let (lg, sg) = ln_gamma_signed(g);
    Ok(sg * (lg - ln_gamma(d)).exp())
}

/// Oscillator Green function for `V = mω²ρ²/2`, angular momentum `L`,
/// energy `E`, at `ρ_outer > ρ_inner`.
pub fn osc_green(rho_outer: f64, rho_inner: f64, l: f64, energy: f64, omega: f64, mass: f64, hbar: f64) -> Result<f64> {
    ordered(rho_outer, rho_inner)?;
    if !(omega > 0.0 && mass > 0.0 && hbar > 0.0) || !(l >= 0.0) {
        return Err(domain("oscillator needs ω, m, ħ > 0 and L >= 0"));
    }
    let acc = FunctionAccuracy::default();
    let k = energy / (2.0 * hbar * omega);
    let mu = 0.5 * l;
    let c = mass * omega / hbar;
    let ratio = gamma_ratio(mu - k + 0.5, l + 1.0)?;
    let w = whittaker_w(k, mu, c * rho_outer * rho_outer, acc)?;
    let m = whittaker_m(k, mu, c * rho_inner * rho_inner, acc)?;
    Ok(ratio * w * m / (hbar * omega * (rho_outer * rho_inner).sqrt()))
}

/// The same Green function from its integral over the Euclidean promotor,
/// `(m√(ρ'ρ'')/ħ²) ∫₀^∞ dq/sinh q · e^{-c(ρ'²+ρ''²)/(2 tanh q) + (E/ħω) q} I_L(cρ'ρ''/sinh q)`.
/// Only defined below the first pole.
pub fn osc_green_quadrature(rho_outer: f64, rho_inner: f64, l: f64, energy: f64, omega: f64, mass: f64, hbar: f64, tol: f64) -> Result<f64> {
    ordered(rho_outer, rho_inner)?;
    let c = mass * omega / hbar;
    let e = energy / (hbar * omega);
    let decay = l + 1.0 - e;
    if !(decay > 0.0) {
        return Err(Error::Convergence(format!(
            "integral diverges: E/ħω = {e} is not below the first pole {}",
            l + 1.0
        )));
    }
    let sum = rho_outer * rho_outer + rho_inner * rho_inner;
    let prod = rho_outer * rho_inner;
    let ln_f = |q: f64| -> f64 {
        let ln_sinh = if q > 20.0 { q - std::f64::consts::LN_2 + (-2.0 * q).exp().ln_1p() } else { q.sinh().ln() };
        let x = c * prod * (-ln_sinh).exp();
        let coth = 1.0 / q.tanh();
        match ln_bessel_i(l, x) {
            Ok(lb) => -ln_sinh - 0.5 * c * sum * coth + e * q + lb,
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let f = |q: f64| ln_f(q).exp();
    // the tail beyond q_max decays as e^{-decay q}
    let mut q_max = 4.0 / decay + 10.0;
    for _ in 0..12 {
        let body = tanh_sinh(&f, 0.0, q_max, tol)?.value;
        let tail = f(q_max) / decay;
        if tail <= 1e-2 * tol * body.abs() {
            return Ok(mass * prod.sqrt() / (hbar * hbar) * (body + tail));
        }
        q_max *= 2.0;
    }
    Err(Error::Convergence("oscillator integral tail bound not met".into()))
}

/// `ħω(2n + ℓ + 3/2)`.
pub fn osc_spectrum(n: u32, ell: u32, omega: f64, hbar: f64) -> f64 {
    osc_level(n, ell as f64 + 0.5, omega, hbar)
}

/// `ħω(2n + L + 1)` for general `L`.
pub fn osc_level(n: u32, l: f64, omega: f64, hbar: f64) -> f64 {
    hbar * omega * (2.0 * n as f64 + l + 1.0)
}

/// `-m(Ze²)²/(2ħ²(n+ℓ+1)²)`.
pub fn coulomb_spectrum(n: u32, ell: u32, zesq: f64, mass: f64, hbar: f64) -> f64 {
    coulomb_level(n, ell as f64 + 0.5, zesq, mass, hbar)
}

/// Coulomb level with `ñ = n + L + 1/2`.
pub fn coulomb_level(n: u32, l: f64, zesq: f64, mass: f64, hbar: f64) -> f64 {
    let nt = n as f64 + l + 0.5;
    -mass * zesq * zesq / (2.0 * hbar * hbar * nt * nt)
}

/// A function of one radius.
pub trait Sampler: Send + Sync {
    fn eval(&self, r: f64) -> f64;
}

/// Shared handle to a sampled radial function.
pub type SharedSampler = Arc<dyn Sampler>;

impl<F: Fn(f64) -> f64 + Send + Sync> Sampler for F {
    fn eval(&self, r: f64) -> f64 {
        self(r)
    }
}

/// Normalised oscillator eigenfunction in the reduced radial variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscEigenfunction {
    pub n: u32,
    pub angular_momentum: f64,
    pub c: f64,
    norm: f64,
}

impl OscEigenfunction {
    pub fn new(n: u32, l: f64, omega: f64, mass: f64, hbar: f64) -> Result<Self> {
        if !(omega > 0.0 && mass > 0.0 && hbar > 0.0 && l >= 0.0) {
            return Err(domain("oscillator eigenfunction needs ω, m, ħ > 0 and L >= 0"));
        }
        let nf = n as f64;
        let ln_norm = 0.5 * (2f64.ln() + ln_gamma(nf + l + 1.0) - factorial(n).ln() - 2.0 * ln_gamma(l + 1.0));
        Ok(OscEigenfunction { n, angular_momentum: l, c: mass * omega / hbar, norm: ln_norm.exp() })
    }

    pub fn value(&self, rho: f64) -> Result<f64> {
        if rho <= 0.0 {
            return Ok(0.0);
        }
        let l = self.angular_momentum;
        let k = self.n as f64 + 0.5 * l + 0.5;
        let m = whittaker_m(k, 0.5 * l, self.c * rho * rho, FunctionAccuracy::default())?;
        Ok(self.norm * m / rho.sqrt())
    }
}

impl Sampler for OscEigenfunction {
    fn eval(&self, r: f64) -> f64 {
        self.value(r).unwrap_or(f64::NAN)
    }
}

pub fn osc_eigenfunction(n: u32, ell: u32, omega: f64, mass: f64, hbar: f64) -> Result<OscEigenfunction> {
    OscEigenfunction::new(n, ell as f64 + 0.5, omega, mass, hbar)
}

/// Normalised Coulomb bound state in the reduced radial variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombEigenfunction {
    pub n: u32,
    pub angular_momentum: f64,
    pub kappa: f64,
    norm: f64,
}

impl CoulombEigenfunction {
    pub fn new(n: u32, l: f64, zesq: f64, mass: f64, hbar: f64) -> Result<Self> {
        if !(zesq > 0.0 && mass > 0.0 && hbar > 0.0 && l >= 0.0) {
            return Err(domain("Coulomb eigenfunction needs Ze², m, ħ > 0 and L >= 0"));
        }
        let nf = n as f64;
        let nt = nf + l + 0.5;
        let kappa = mass * zesq / (hbar * hbar * nt);
        let ln_norm = 0.5 * (kappa.ln() + ln_gamma(nf + 2.0 * l + 1.0) - factorial(n).ln() - nt.ln() - 2.0 * ln_gamma(2.0 * l + 1.0));
        Ok(CoulombEigenfunction { n, angular_momentum: l, kappa, norm: ln_norm.exp() })
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        if r <= 0.0 {
            return Ok(0.0);
        }
        let l = self.angular_momentum;
        let k = self.n as f64 + l + 0.5;
        let m = whittaker_m(k, l, 2.0 * self.kappa * r, FunctionAccuracy::default())?;
        Ok(self.norm * m)
    }
}

impl Sampler for CoulombEigenfunction {
    fn eval(&self, r: f64) -> f64 {
        self.value(r).unwrap_or(f64::NAN)
    }
}

pub fn coulomb_eigenfunction(n: u32, ell: u32, zesq: f64, mass: f64, hbar: f64) -> Result<CoulombEigenfunction> {
    CoulombEigenfunction::new(n, ell as f64 + 0.5, zesq, mass, hbar)
}

/// Coulomb Green function for `V = -Ze²/r`, angular momentum `L`, `E < 0`.
pub fn coulomb_green(r_outer: f64, r_inner: f64, l: f64, energy: f64, zesq: f64, mass: f64, hbar: f64) -> Result<f64> {
    ordered(r_outer, r_inner)?;
    if !(energy < 0.0) {
        return Err(domain(format!("Coulomb Green function needs E < 0, got {energy}")));
    }
    if !(mass > 0.0 && hbar > 0.0) || !(l >= 0.0) {
        return Err(domain("Coulomb problem needs m, ħ > 0 and L >= 0"));
    }
    let acc = FunctionAccuracy::default();
    let kappa = (-2.0 * mass * energy).sqrt() / hbar;
    let k = mass * zesq / (kappa * hbar * hbar);
    let ratio = gamma_ratio(l - k + 0.5, 2.0 * l + 1.0)?;
    let w = whittaker_w(k, l, 2.0 * kappa * r_outer, acc)?;
    let m = whittaker_m(k, l, 2.0 * kappa * r_inner, acc)?;
    Ok(mass / (kappa * hbar * hbar) * ratio * w * m)
}

/// Green function of the full radial problem in three dimensions,
/// `G_ℓ(r'', r') = 𝒢(r'', r')/(r'r'')`.
pub fn coulomb_green_3d(r_outer: f64, r_inner: f64, ell: u32, energy: f64, zesq: f64, mass: f64, hbar: f64) -> Result<f64> {
    Ok(coulomb_green(r_outer, r_inner, ell as f64 + 0.5, energy, zesq, mass, hbar)? / (r_outer * r_inner))
}

/// A family of radial Green functions parametrised by couplings, energy and
/// angular momentum.
pub trait GreenFamily {
    fn green(&self, r_outer: f64, r_inner: f64, p: &SystemParams) -> Result<f64>;
}

/// Splits the terms into the coupling of the given exponent and a constant
/// shift; any other non-zero term is rejected.
fn single_term(p: &SystemParams, exponent: f64, what: &str) -> Result<(f64, f64)> {
    let mut coupling = 0.0;
    let mut shift = 0.0;
    for t in &p.terms {
        if t.coupling == 0.0 {
            continue;
        }
        if (t.exponent - exponent).abs() < 1e-12 {
            coupling += t.coupling;
        } else if t.exponent.abs() < 1e-12 {
            shift += t.coupling;
        } else {
            return Err(domain(format!("{what} family cannot carry a term with exponent {}", t.exponent)));
        }
    }
    Ok((coupling, shift))
}

fn harmonic(p: &SystemParams) -> Result<(f64, f64)> {
    let (lambda, shift) = single_term(p, 2.0, "oscillator")?;
    if !(lambda > 0.0) {
        return Err(domain(format!("oscillator coupling {lambda} must be positive")));
    }
    Ok(((2.0 * lambda / p.mass).sqrt(), p.energy - shift))
}

/// Closed-form oscillator family, `V = λρ² (+ const)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Oscillator;

impl GreenFamily for Oscillator {
    fn green(&self, r_outer: f64, r_inner: f64, p: &SystemParams) -> Result<f64> {
        let (omega, e) = harmonic(p)?;
        osc_green(r_outer, r_inner, p.angular_momentum, e, omega, p.mass, p.hbar)
    }
}

/// Oscillator family evaluated by quadrature of the promotor.
#[derive(Debug, Clone, Copy)]
pub struct OscillatorQuadrature {
    pub tol: f64,
}

impl Default for OscillatorQuadrature {
    fn default() -> Self {
        OscillatorQuadrature { tol: 1e-12 }
    }
}

impl GreenFamily for OscillatorQuadrature {
    fn green(&self, r_outer: f64, r_inner: f64, p: &SystemParams) -> Result<f64> {
        let (omega, e) = harmonic(p)?;
        osc_green_quadrature(r_outer, r_inner, p.angular_momentum, e, omega, p.mass, p.hbar, self.tol)
    }
}

/// Closed-form Coulomb family, `V = λ/r (+ const)` with `λ < 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Coulomb;

impl GreenFamily for Coulomb {
    fn green(&self, r_outer: f64, r_inner: f64, p: &SystemParams) -> Result<f64> {
        let (lambda, shift) = single_term(p, -1.0, "Coulomb")?;
        if !(lambda < 0.0) {
            return Err(domain(format!("Coulomb coupling {lambda} must be attractive")));
        }
        coulomb_green(r_outer, r_inner, p.angular_momentum, p.energy - shift, -lambda, p.mass, p.hbar)
    }
}

/// Green function of a system obtained by pulling back a family through a
/// duality map: `G_A(r'', r') = √(f'(ρ'') f'(ρ')) 𝒢_B(ρ'', ρ')` with `r = f(ρ)`.
#[derive(Debug, Clone)]
pub struct DualGreen<F> {
    pub family: F,
    pub map: DualityMap,
    pub dual: SystemParams,
}

/// Green function of system `a` through the family of its dual.
pub fn dual_green<F: GreenFamily>(family: F, map: DualityMap, a: &SystemParams) -> Result<DualGreen<F>> {
    let dual = transform_params(a, &map)?;
    Ok(DualGreen { family, map, dual })
}

impl<F: GreenFamily> DualGreen<F> {
    pub fn eval(&self, r_outer: f64, r_inner: f64) -> Result<f64> {
        ordered(r_outer, r_inner)?;
        let rho_o = self.map.inverse_radius(r_outer);
        let rho_i = self.map.inverse_radius(r_inner);
        let g = self.family.green(rho_o, rho_i, &self.dual)?;
        Ok((self.map.radius_derivative(rho_o) * self.map.radius_derivative(rho_i)).sqrt() * g)
    }
}

impl<F: GreenFamily> GreenFamily for DualGreen<F> {
    /// Evaluates with the stored dual parameters; `p` is ignored.
    fn green(&self, r_outer: f64, r_inner: f64, _p: &SystemParams) -> Result<f64> {
        self.eval(r_outer, r_inner)
    }
}

/// Coulomb Green function assembled from the oscillator through the map with
/// `C = mω/(2κħ)` at unit frequency.
pub fn coulomb_green_via_oscillator(r_outer: f64, r_inner: f64, l: f64, energy: f64, zesq: f64, mass: f64, hbar: f64) -> Result<f64> {
    if !(energy < 0.0) {
        return Err(domain("Coulomb Green function needs E < 0"));
    }
    let kappa = (-2.0 * mass * energy).sqrt() / hbar;
    let map = crate::duality::make_map(-1.0, mass / (2.0 * kappa * hbar))?;
    let a = SystemParams {
        angular_momentum: l,
        energy,
        terms: vec![PowerTerm::new(-zesq, -1.0)],
        mass,
        hbar,
    };
    dual_green(Oscillator, map, &a)?.eval(r_outer, r_inner)
}

/// Residue `lim (E_pole - E) G(E)` from symmetric samples around the pole
/// and Richardson extrapolation in the squared offset.
pub fn residue_extract<G: Fn(f64) -> Result<f64>>(green: G, e_pole: f64, rel_offset: f64) -> Result<f64> {
    let base = if e_pole == 0.0 { rel_offset } else { rel_offset * e_pole.abs() };
    const LEVELS: usize = 5;
    let mut table = [[0.0; LEVELS]; LEVELS];
    for k in 0..LEVELS {
        let h = base / (1u32 << k) as f64;
        table[k][0] = 0.5 * h * (green(e_pole - h)? - green(e_pole + h)?);
        let mut factor = 1.0;
        for j in 1..=k {
            factor *= 4.0;
            table[k][j] = table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / (factor - 1.0);
        }
    }
    let best = table[LEVELS - 1][LEVELS - 1];
    if !best.is_finite() {
        return Err(Error::Convergence("residue extrapolation produced a non-finite value".into()));
    }
    Ok(best)
}

/// Normalisation of a radial sampler, `∫₀^∞ f(r)² dr`.
pub fn l2_norm_squared(f: &dyn Sampler, scale: f64, tol: f64) -> Result<f64> {
    Ok(crate::quad::exp_sinh(|r| {
        let v = f.eval(r);
        v * v
    }, 0.0, scale, tol)?.value)
}
