//! Zero-energy states of confining potentials
//! `V(r) = λ_a r^{a'/2-1} + λ' r^{a'}`, `0 < a' <= 2`, obtained by mapping to
//! the oscillator. At `E = 0` the primary coupling is quantised, one value per
//! node count `ν`.

use serde::Serialize;

use crate::duality::{make_map, quasi_angular_momentum, DualityMap};
use crate::error::{domain, Result};
use crate::quad::exp_sinh;
use crate::specfun::whittaker_m;
use crate::FunctionAccuracy;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfinementSpec {
    /// exponent `a'` of the confining term
    pub a_prime: f64,
    /// coupling `λ' > 0` of the confining term
    pub confining_coupling: f64,
    pub nu: u32,
    pub ell: u32,
    pub dimension: u32,
    pub mass: f64,
    pub hbar: f64,
}

impl ConfinementSpec {
    pub fn new(a_prime: f64, confining_coupling: f64, nu: u32, ell: u32) -> Result<Self> {
        Self::with_units(a_prime, confining_coupling, nu, ell, 3, 1.0, 1.0)
    }

    pub fn with_units(a_prime: f64, confining_coupling: f64, nu: u32, ell: u32, dimension: u32, mass: f64, hbar: f64) -> Result<Self> {
        if !(a_prime > 0.0 && a_prime <= 2.0) {
            return Err(domain(format!("a' = {a_prime} must lie in (0, 2]")));
        }
        if !(confining_coupling > 0.0) || !confining_coupling.is_finite() {
            return Err(domain(format!("confining coupling {confining_coupling} must be positive")));
        }
        if dimension < 2 || !(mass > 0.0 && hbar > 0.0) {
            return Err(domain("need D >= 2 and m, ħ > 0"));
        }
        Ok(ConfinementSpec { a_prime, confining_coupling, nu, ell, dimension, mass, hbar })
    }

    /// `L = ℓ + (D-2)/2`.
    pub fn angular_momentum(&self) -> f64 {
        quasi_angular_momentum(self.ell, self.dimension)
    }

    /// Exponent of the quantised term, `a'/2 - 1`.
    pub fn primary_exponent(&self) -> f64 {
        0.5 * self.a_prime - 1.0
    }

    /// `η = 4/(2+a')`.
    pub fn eta(&self) -> f64 {
        4.0 / (2.0 + self.a_prime)
    }

    /// Exponent of the vanishing primary term on the oscillator side.
    pub fn dual_exponent(&self) -> f64 {
        2.0 * (2.0 - self.a_prime) / (2.0 + self.a_prime)
    }

    /// Upper bound on the quantised coupling, `-√(ħ²a'²λ'/8m)`.
    pub fn coupling_bound(&self) -> f64 {
        -(self.hbar * self.hbar * self.a_prime * self.a_prime * self.confining_coupling / (8.0 * self.mass)).sqrt()
    }

    /// Whittaker index `μ = 2L/(2+a')` of the state.
    fn mu(&self) -> f64 {
        2.0 * self.angular_momentum() / (2.0 + self.a_prime)
    }
}

/// `λ_{a,ν} = -((a'+2)/4) √(2λ'ħ²/m) (2ν + 4L/(a'+2) + 1)`.
pub fn admissible_coupling(spec: &ConfinementSpec) -> f64 {
    let s = spec.a_prime + 2.0;
    -(s / 4.0)
        * (2.0 * spec.confining_coupling * spec.hbar * spec.hbar / spec.mass).sqrt()
        * (2.0 * spec.nu as f64 + 4.0 * spec.angular_momentum() / s + 1.0)
}

/// Map to the oscillator at frequency `ω`, together with the derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfinementMap {
    pub map: DualityMap,
    pub coupling: f64,
    pub omega: f64,
    /// oscillator energy `E_b`
    pub dual_energy: f64,
    /// oscillator angular momentum `ηL`
    pub dual_angular_momentum: f64,
    /// argument scale `α` of the zero-energy state
    pub alpha: f64,
}

pub fn confine_map(spec: &ConfinementSpec, omega: f64) -> Result<ConfinementMap> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(domain(format!("ω = {omega} must be positive")));
    }
    let s = 2.0 + spec.a_prime;
    let (m, lam) = (spec.mass, spec.confining_coupling);
    let scale = (s * s * m * omega * omega / (32.0 * lam)).powf(1.0 / s);
    let a = spec.primary_exponent();
    let map = if a.abs() < 1e-12 { DualityMap::trivial(scale)? } else { make_map(a, scale)? };
    let coupling = admissible_coupling(spec);
    Ok(ConfinementMap {
        map,
        coupling,
        omega,
        dual_energy: omega * coupling.abs() * (8.0 * m / lam).sqrt() / s,
        dual_angular_momentum: map.eta * spec.angular_momentum(),
        alpha: zero_energy_scale(spec),
    })
}

/// `α = (4/(2+a')) √(2mλ')/ħ`.
pub fn zero_energy_scale(spec: &ConfinementSpec) -> f64 {
    4.0 / (2.0 + spec.a_prime) * (2.0 * spec.mass * spec.confining_coupling).sqrt() / spec.hbar
}

/// `(L²-1/4)ħ²/(2mr²) - |λ_{a,ν}| r^{a'/2-1} + λ' r^{a'}`.
pub fn effective_potential(spec: &ConfinementSpec, r: f64) -> f64 {
    let l = spec.angular_momentum();
    (l * l - 0.25) * spec.hbar * spec.hbar / (2.0 * spec.mass * r * r) - admissible_coupling(spec).abs() * r.powf(spec.primary_exponent())
        + spec.confining_coupling * r.powf(spec.a_prime)
}

/// The zero-energy eigenstate with `ν` nodes,
/// `ψ(r) = 𝒩 r^{-(D-1)/2 - a'/4} M_{ν+μ+1/2, μ}(α r^{(2+a')/2})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroEnergyState {
    pub spec: ConfinementSpec,
    pub alpha: f64,
    pub norm: f64,
}

impl ZeroEnergyState {
    fn shape(&self, r: f64) -> Result<f64> {
        let mu = self.spec.mu();
        let k = self.spec.nu as f64 + mu + 0.5;
        let z = self.alpha * r.powf(0.5 * (2.0 + self.spec.a_prime));
        Ok(r.powf(-0.25 * self.spec.a_prime) * whittaker_m(k, mu, z, FunctionAccuracy::default())?)
    }

    /// Reduced radial function `u(r) = r^{(D-1)/2} ψ(r)`, normalised in `dr`.
    pub fn reduced(&self, r: f64) -> Result<f64> {
        if r <= 0.0 {
            return Ok(0.0);
        }
        Ok(self.norm * self.shape(r)?)
    }

    /// Radial wavefunction `ψ(r)`, normalised with measure `r^{D-1} dr`.
    pub fn radial(&self, r: f64) -> Result<f64> {
        if r <= 0.0 {
            return Ok(0.0);
        }
        Ok(self.reduced(r)? * r.powf(-0.5 * (self.spec.dimension as f64 - 1.0)))
    }
}

impl crate::green::Sampler for ZeroEnergyState {
    fn eval(&self, r: f64) -> f64 {
        self.reduced(r).unwrap_or(f64::NAN)
    }
}

pub fn zero_energy_psi(spec: &ConfinementSpec) -> Result<ZeroEnergyState> {
    let alpha = zero_energy_scale(spec);
    let raw = ZeroEnergyState { spec: *spec, alpha, norm: 1.0 };
    // bulk of the state sits where α r^{(2+a')/2} is of order ν + μ + 1
    let p = 0.5 * (2.0 + spec.a_prime);
    let scale = ((spec.nu as f64 + spec.mu() + 1.0) / alpha).powf(1.0 / p);
    let n2 = exp_sinh(|r| raw.shape(r).map(|v| v * v).unwrap_or(f64::NAN), 0.0, scale, 1e-13)?.value;
    Ok(ZeroEnergyState { norm: 1.0 / n2.sqrt(), ..raw })
}
