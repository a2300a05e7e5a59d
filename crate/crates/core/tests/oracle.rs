mod common;

use common::{fitted_order, rel};
use dualgreen::confine::{admissible_coupling, effective_potential, zero_energy_psi, ConfinementSpec};
use dualgreen::green::{coulomb_eigenfunction, coulomb_green, osc_eigenfunction, osc_green, Sampler};
use dualgreen::oracle::*;
use dualgreen::specfun::{factorial, gamma, whittaker_m};
use dualgreen::{Error, FunctionAccuracy};

fn oscillator(l: f64, points: usize) -> RadialProblem {
    RadialProblem::new(move |r: f64| (l * l - 0.25) / (2.0 * r * r) + 0.5 * r * r, l, 1.0, 1.0, 9.0, points).unwrap()
}

fn coulomb(l: f64, r_max: f64, points: usize) -> RadialProblem {
    RadialProblem::new(move |r: f64| (l * l - 0.25) / (2.0 * r * r) - 1.0 / r, l, 1.0, 1.0, r_max, points).unwrap()
}

#[test]
fn oscillator_levels() {
    let p = oscillator(0.5, 8000);
    let states = numerov_eigen(&p, (0.0, 6.0), 10).unwrap();
    let e: Vec<f64> = states.iter().map(|s| s.energy).collect();
    assert_eq!(e.len(), 3);
    for (got, want) in e.iter().zip([1.5, 3.5, 5.5]) {
        assert!(rel(*got, want) < 1e-9, "{got}");
    }
    for (n, s) in states.iter().enumerate() {
        assert_eq!(s.nodes, n);
    }
}

#[test]
fn coulomb_levels() {
    let p = coulomb(0.5, 120.0, 20000);
    let states = numerov_eigen(&p, (-1.0, -0.04), 3).unwrap();
    for (s, want) in states.iter().zip([-0.5, -0.125, -1.0 / 18.0]) {
        assert!(rel(s.energy, want) < 1e-8, "{}", s.energy);
    }
}

#[test]
fn empty_window_has_no_bracket() {
    let p = oscillator(0.5, 2000);
    assert!(matches!(numerov_eigen(&p, (1.6, 3.4), 2), Err(Error::NoBracket(_))));
}

#[test]
fn confinement_zero_energy_state() {
    let spec = ConfinementSpec::new(1.0, 2.0, 2, 1).unwrap();
    let l = spec.angular_momentum();
    let p = RadialProblem::new(move |r: f64| effective_potential(&spec, r), l, 1.0, 1.0, 12.0, 12000).unwrap();
    let s = eigen_level(&p, 2, p.potential_floor()).unwrap();
    assert!(s.energy.abs() < 1e-6, "{}", s.energy);
    assert_eq!(s.nodes, 2);
    assert!(rel(admissible_coupling(&spec), -10.5) < 1e-15);
}

#[test]
fn mismatch_vanishes_at_eigenvalues() {
    let p = oscillator(0.5, 8000);
    for e in [1.5, 3.5] {
        assert!(shoot_mismatch(&p, e).unwrap().abs() < 1e-8);
    }
    // clearly non-zero between levels, with a sign change across each
    let mid = shoot_mismatch(&p, 2.0).unwrap();
    assert!(mid.abs() > 1e-3);
    let below = shoot_mismatch(&p, 1.4).unwrap();
    let above = shoot_mismatch(&p, 1.6).unwrap();
    assert!(below * above < 0.0);
    let past = shoot_mismatch(&p, 3.6).unwrap();
    assert!(past * mid < 0.0);
}

#[test]
fn quadrature_norms() {
    let v = osc_eigenfunction(0, 0, 1.0, 1.0, 1.0).unwrap();
    assert!((quadrature_norm(&v, 0.0, 12.0).unwrap() - 1.0).abs() < 1e-10);
    let u = coulomb_eigenfunction(0, 0, 1.0, 1.0, 1.0).unwrap();
    assert!((quadrature_norm(&u, 0.0, 60.0).unwrap() - 1.0).abs() < 1e-10);
    for (ap, nu, ell) in [(1.0, 0, 1), (0.5, 2, 0), (2.0, 1, 1)] {
        let psi = zero_energy_psi(&ConfinementSpec::new(ap, 2.0, nu, ell).unwrap()).unwrap();
        assert!((quadrature_norm(&psi, 0.0, 30.0).unwrap() - 1.0).abs() < 1e-10, "a'={ap}");
    }
}

#[test]
fn oracle_eigenfunctions_match_closed_forms() {
    let p = oscillator(1.5, 8000);
    for n in 0..3 {
        let s = eigen_level(&p, n, p.potential_floor()).unwrap();
        let v = osc_eigenfunction(n as u32, 1, 1.0, 1.0, 1.0).unwrap();
        for r in [0.3, 0.9, 1.7, 2.6] {
            assert!((s.function.eval(r) - v.eval(r)).abs() < 1e-7, "n={n} r={r}");
        }
        let line = s.line(Some(1), 1.5);
        assert_eq!(line.n, n as u32);
        assert_eq!(line.source, Source::Oracle);
    }
    let p = coulomb(1.5, 150.0, 20000);
    for n in 0..2 {
        let s = eigen_level(&p, n, p.potential_floor()).unwrap();
        let u = coulomb_eigenfunction(n as u32, 1, 1.0, 1.0, 1.0).unwrap();
        for r in [0.5, 2.0, 6.0, 11.0] {
            assert!((s.function.eval(r) - u.eval(r)).abs() < 1e-7, "n={n} r={r}");
        }
    }
}

#[test]
fn numerov_is_fourth_order() {
    let ns = [1000usize, 2000, 4000];
    let errs: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let p = oscillator(0.5, n);
            (eigen_level(&p, 2, p.potential_floor()).unwrap().energy - 5.5).abs()
        })
        .collect();
    let h: Vec<f64> = ns.iter().map(|&n| 1.0 / n as f64).collect();
    let order = fitted_order(&h, &errs);
    assert!(order >= 3.7, "order {order}, errors {errs:?}");
}

#[test]
fn green_by_shooting_matches_closed_forms() {
    let p = oscillator(0.5, 20000);
    for e in [0.3, 2.2] {
        let g = green_by_shooting(&p, e, 1.8, 0.6).unwrap();
        assert!(rel(g, osc_green(1.8, 0.6, 0.5, e, 1.0, 1.0, 1.0).unwrap()) < 1e-8);
    }
    let p = coulomb(1.5, 80.0, 20000);
    let g = green_by_shooting(&p, -0.3, 3.0, 1.2).unwrap();
    assert!(rel(g, coulomb_green(3.0, 1.2, 1.5, -0.3, 1.0, 1.0, 1.0).unwrap()) < 1e-8);
    assert!(matches!(green_by_shooting(&p, -0.3, 1.0, 3.0), Err(Error::Ordering { .. })));
}

#[test]
fn problem_validation() {
    assert!(RadialProblem::new(|r: f64| r, 0.5, 1.0, 1.0, 5.0, 10).is_err());
    assert!(RadialProblem::new(|r: f64| r, 0.5, -1.0, 1.0, 5.0, 100).is_err());
    assert!(RadialProblem::new(|r: f64| r, -0.5, 1.0, 1.0, 5.0, 100).is_err());
    assert!(RadialProblem::new(|r: f64| r, 0.5, 1.0, 1.0, 1e-7, 100).is_err());
}

struct Whittaker {
    k: f64,
    mu: f64,
    power: f64,
}

impl Sampler for Whittaker {
    fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        whittaker_m(self.k, self.mu, x, FunctionAccuracy::default()).unwrap() * x.powf(0.5 * self.power)
    }
}

#[test]
fn laguerre_orthogonality_integrals() {
    for alpha in [1.0, 2.0, 3.0] {
        for n in 0..=3u32 {
            let k = 0.5 * (alpha + 1.0) + n as f64;
            let base = factorial(n) * gamma(alpha + 1.0).powi(2) / gamma(n as f64 + alpha + 1.0);
            let x_max = 60.0 + 10.0 * n as f64;
            let weighted = quadrature_norm(&Whittaker { k, mu: 0.5 * alpha, power: -1.0 }, 0.0, x_max).unwrap();
            assert!(rel(weighted, base) < 1e-8, "α={alpha} n={n}");
            let plain = quadrature_norm(&Whittaker { k, mu: 0.5 * alpha, power: 0.0 }, 0.0, x_max).unwrap();
            assert!(rel(plain, base * (2.0 * n as f64 + alpha + 1.0)) < 1e-8, "α={alpha} n={n}");
        }
    }
}

#[test]
fn simpson_is_exact_for_cubics() {
    let h = 0.01;
    let f: Vec<f64> = (0..=100).map(|i| (i as f64 * h).powi(3)).collect();
    assert!((simpson(&f, h) - 0.25).abs() < 1e-14);
}
