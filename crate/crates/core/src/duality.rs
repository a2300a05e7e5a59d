//! The power-law duality `r = C ρ^η` between radial problems.
//!
//! A radial problem `-(ħ²/2m) u'' + [(L²-1/4)ħ²/(2mr²) + Σ λ_i r^{a_i} - E] u = 0`
//! with primary term `λ_a r^a` maps to one with primary exponent
//! `b = -2a/(a+2)`, angular momentum `ηL`, energy `-η²C^{a+2}λ_a` and primary
//! coupling `-η²C²E`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

const EXPONENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coupling: f64,
    pub exponent: f64,
}

impl PowerTerm {
    pub fn new(coupling: f64, exponent: f64) -> Self {
        PowerTerm { coupling, exponent }
    }

    pub fn eval(&self, r: f64) -> f64 {
        if self.coupling == 0.0 {
            0.0
        } else {
            self.coupling * r.powf(self.exponent)
        }
    }
}

/// Couplings, energy and angular momentum of a radial problem, without the
/// invariants of [`RadialSystem`]. The first term is the primary one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub angular_momentum: f64,
    pub energy: f64,
    pub terms: Vec<PowerTerm>,
    pub mass: f64,
    pub hbar: f64,
}

impl SystemParams {
    /// `Σ λ_i r^{a_i}`, centrifugal term excluded.
    pub fn potential(&self, r: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(r)).sum()
    }

    pub fn centrifugal(&self, r: f64) -> f64 {
        let l = self.angular_momentum;
        (l * l - 0.25) * self.hbar * self.hbar / (2.0 * self.mass * r * r)
    }

    pub fn effective_potential(&self, r: f64) -> f64 {
        self.centrifugal(r) + self.potential(r)
    }
}

/// A radial problem in `D` dimensions with a transformable primary term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSystem {
    pub dimension: u32,
    #[serde(flatten)]
    pub params: SystemParams,
}

impl RadialSystem {
    pub fn new(dimension: u32, angular_momentum: f64, energy: f64, terms: Vec<PowerTerm>, mass: f64, hbar: f64) -> Result<Self> {
        let sys = RadialSystem {
            dimension,
            params: SystemParams { angular_momentum, energy, terms, mass, hbar },
        };
        sys.validate()?;
        Ok(sys)
    }

    /// System with `L = ℓ + (D-2)/2`.
    pub fn quantized(ell: u32, dimension: u32, energy: f64, terms: Vec<PowerTerm>, mass: f64, hbar: f64) -> Result<Self> {
        Self::new(dimension, quasi_angular_momentum(ell, dimension), energy, terms, mass, hbar)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        if self.dimension < 2 {
            return Err(domain(format!("dimension {} < 2", self.dimension)));
        }
        if !(p.mass > 0.0 && p.hbar > 0.0) {
            return Err(domain("mass and hbar must be positive"));
        }
        if !(p.angular_momentum >= 0.0) || !p.energy.is_finite() {
            return Err(domain("angular momentum must be non-negative and energy finite"));
        }
        let primary = p.terms.first().ok_or_else(|| domain("system needs a primary term"))?;
        let a = primary.exponent;
        // a constant primary term is allowed; only the trivial map accepts it
        if (a + 2.0).abs() < EXPONENT_TOL {
            return Err(domain(format!("primary exponent {a} is not transformable")));
        }
        if p.terms.iter().any(|t| !t.coupling.is_finite() || !t.exponent.is_finite()) {
            return Err(domain("non-finite power term"));
        }
        Ok(())
    }

    pub fn primary(&self) -> PowerTerm {
        self.params.terms[0]
    }

    pub fn secondaries(&self) -> &[PowerTerm] {
        &self.params.terms[1..]
    }

    pub fn angular_momentum(&self) -> f64 {
        self.params.angular_momentum
    }

    pub fn energy(&self) -> f64 {
        self.params.energy
    }
}

/// `r = C ρ^η` with `η = 2/(a+2)`; `b` is the dual primary exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityMap {
    pub a: f64,
    pub b: f64,
    pub eta: f64,
    pub scale: f64,
}

pub fn dual_exponent(a: f64) -> f64 {
    -2.0 * a / (a + 2.0)
}

/// Map for primary exponent `a` and scale `C`.
pub fn make_map(a: f64, scale: f64) -> Result<DualityMap> {
    if !a.is_finite() || a.abs() < EXPONENT_TOL || (a + 2.0).abs() < EXPONENT_TOL {
        return Err(domain(format!("exponent {a} has no dual")));
    }
    if a < -2.0 {
        return Err(domain(format!("exponent {a} < -2 gives a negative η")));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(domain(format!("scale {scale} must be positive")));
    }
    Ok(DualityMap { a, b: dual_exponent(a), eta: 2.0 / (a + 2.0), scale })
}

pub fn invert_map(map: &DualityMap) -> DualityMap {
    DualityMap {
        a: map.b,
        b: map.a,
        eta: 1.0 / map.eta,
        scale: map.scale.powf(-1.0 / map.eta),
    }
}

impl DualityMap {
    /// The map `r = Cρ` between systems whose primary term is a constant.
    pub fn trivial(scale: f64) -> Result<DualityMap> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(domain(format!("scale {scale} must be positive")));
        }
        Ok(DualityMap { a: 0.0, b: 0.0, eta: 1.0, scale })
    }

    pub fn inverse(&self) -> DualityMap {
        invert_map(self)
    }

    /// `r = Cρ^η`.
    pub fn map_radius(&self, rho: f64) -> f64 {
        self.scale * rho.powf(self.eta)
    }

    /// `ρ = (r/C)^{1/η}`.
    pub fn inverse_radius(&self, r: f64) -> f64 {
        (r / self.scale).powf(1.0 / self.eta)
    }

    /// `dr/dρ = Cηρ^{η-1}`.
    pub fn radius_derivative(&self, rho: f64) -> f64 {
        self.scale * self.eta * rho.powf(self.eta - 1.0)
    }

    /// `E_b = -η² C^{a+2} λ_a`.
    pub fn dual_energy(&self, coupling_a: f64) -> f64 {
        -self.eta * self.eta * self.scale.powf(self.a + 2.0) * coupling_a
    }

    /// `λ_b = -η² C² E_a`.
    pub fn dual_coupling(&self, energy_a: f64) -> f64 {
        -self.eta * self.eta * self.scale * self.scale * energy_a
    }

    /// Secondary term `λ' r^{a'}` becomes `η² C^{a'+2} λ' ρ^{2(a'-a)/(a+2)}`.
    pub fn dual_secondary(&self, term: &PowerTerm) -> PowerTerm {
        PowerTerm {
            coupling: self.eta * self.eta * self.scale.powf(term.exponent + 2.0) * term.coupling,
            exponent: 2.0 * (term.exponent - self.a) / (self.a + 2.0),
        }
    }

    pub fn dual_angular_momentum(&self, l: f64) -> f64 {
        self.eta * l
    }

    /// Schwarzian derivative of `ρ ↦ Cρ^η`.
    pub fn schwarzian(&self, rho: f64) -> f64 {
        -(self.eta * self.eta - 1.0) / (2.0 * rho * rho)
    }
}

/// Time rescaling `dt/ds = C² η² ρ̂^{2η-2}`.
pub fn short_time_jacobian(map: &DualityMap, rho_hat: f64) -> f64 {
    map.scale * map.scale * map.eta * map.eta * rho_hat.powf(2.0 * map.eta - 2.0)
}

/// `L = ℓ + (D-2)/2`.
pub fn quasi_angular_momentum(ell: u32, dimension: u32) -> f64 {
    ell as f64 + 0.5 * (dimension as f64 - 2.0)
}

/// Dual of bare parameters; the first term must carry the map's exponent.
pub fn transform_params(p: &SystemParams, map: &DualityMap) -> Result<SystemParams> {
    let primary = p.terms.first().ok_or_else(|| domain("system needs a primary term"))?;
    if (primary.exponent - map.a).abs() > EXPONENT_TOL * (1.0 + map.a.abs()) {
        return Err(Error::ExponentMismatch { expected: map.a, found: primary.exponent });
    }
    let mut terms = Vec::with_capacity(p.terms.len());
    terms.push(PowerTerm { coupling: map.dual_coupling(p.energy), exponent: map.b });
    terms.extend(p.terms[1..].iter().map(|t| map.dual_secondary(t)));
    Ok(SystemParams {
        angular_momentum: map.dual_angular_momentum(p.angular_momentum),
        energy: map.dual_energy(primary.coupling),
        terms,
        mass: p.mass,
        hbar: p.hbar,
    })
}

pub fn transform_system(sys: &RadialSystem, map: &DualityMap) -> Result<RadialSystem> {
    let params = transform_params(&sys.params, map)?;
    Ok(RadialSystem { dimension: sys.dimension, params })
}
