mod common;

use std::f64::consts::PI;

use common::{rel, simpson};
use dualgreen::quad::gauss_legendre;
use dualgreen::specfun::*;
use dualgreen::{Error, FunctionAccuracy};
use proptest::prelude::*;

const ACC: FunctionAccuracy = FunctionAccuracy { rel_tol: 1e-12, max_terms: 500 };

/// `₁F₁(a; b; z)` summed directly.
fn series_m(a: f64, b: f64, z: f64, terms: usize) -> f64 {
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 0..terms {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum += term;
    }
    sum
}

#[test]
fn gamma_examples() {
    assert!(rel(gamma(5.0), 24.0) < 1e-14);
    assert!(rel(gamma(0.5), 1.772453850905516) < 1e-14);
    // Γ(5/4) = ∫ t^{1/4} e^{-t} dt, with t = s⁴ to smooth the origin
    let oracle = simpson(|s: f64| 4.0 * s.powi(4) * (-s.powi(4)).exp(), 0.0, 6.0, 20000);
    assert!(rel(gamma(1.25), oracle) < 1e-12, "{} vs {oracle}", gamma(1.25));
}

#[test]
fn gamma_reflection_and_poles() {
    for x in [-0.5, -1.5, -2.25, -7.3] {
        let reflected = PI / (sin_pi(x) * gamma(1.0 - x));
        assert!(rel(gamma(x), reflected) < 1e-12);
    }
    assert!(rel(gamma(-0.5), -2.0 * PI.sqrt()) < 1e-13);
    for x in [0.0, -1.0, -4.0] {
        assert!(gamma(x).is_infinite());
        assert_eq!(recip_gamma(x), 0.0);
    }
    assert!(rel(ln_gamma(100.0), 359.1342053695754) < 1e-13);
}

proptest! {
    #[test]
    fn gamma_recurrence(x in 0.1f64..50.0) {
        prop_assert!(rel(gamma(x + 1.0), x * gamma(x)) < 1e-12);
    }

    #[test]
    fn ln_gamma_agrees_with_gamma(x in 0.1f64..150.0) {
        prop_assert!((ln_gamma(x) - gamma(x).ln()).abs() < 1e-12 * ln_gamma(x).abs().max(1.0));
    }
}

#[test]
fn bessel_half_integer_closed_forms() {
    assert!(rel(bessel_i(0.5, 1.0).unwrap(), 0.9376748882454959) < 1e-14);
    let mut x = 1e-6;
    while x <= 700.0 {
        let half = bessel_i_scaled(0.5, x).unwrap();
        let expect = (2.0 / (PI * x)).sqrt() * 0.5 * (1.0 - (-2.0 * x).exp());
        assert!(rel(half, expect) < 1e-10, "I_1/2({x})");
        if x >= 0.5 {
            let three = bessel_i_scaled(1.5, x).unwrap();
            let expect = (2.0 / (PI * x)).sqrt() * 0.5 * ((1.0 + (-2.0 * x).exp()) - (1.0 - (-2.0 * x).exp()) / x);
            assert!(rel(three, expect) < 1e-10, "I_3/2({x})");
        }
        x *= 1.7;
    }
}

#[test]
fn bessel_small_argument() {
    assert!(rel(bessel_i(0.0, 1e-300).unwrap(), 1.0) < 1e-15);
    assert!(rel(bessel_i(0.0, 1e-8).unwrap(), 1.0) < 1e-15);
    // I_{3/2}(2) from 200 terms of the ascending series, Γ(5/2) = 3√π/4
    let (x, nu) = (2.0f64, 1.5);
    let mut term = (0.5 * x).powf(nu) / (0.75 * PI.sqrt());
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= 0.25 * x * x / (kf * (kf + nu));
        sum += term;
    }
    assert!(rel(bessel_i(1.5, 2.0).unwrap(), sum) < 1e-14);
}

#[test]
fn bessel_recurrence() {
    for nu in [1.0, 1.5, 2.5, 3.25, 5.0, 8.5] {
        for x in [1e-3, 0.5, 3.0, 20.0, 80.0, 300.0, 700.0] {
            let lo = bessel_i_scaled(nu - 1.0, x).unwrap();
            let hi = bessel_i_scaled(nu + 1.0, x).unwrap();
            let mid = bessel_i_scaled(nu, x).unwrap();
            assert!(rel(lo - hi, 2.0 * nu / x * mid) < 1e-9, "ν={nu} x={x}");
        }
    }
}

#[test]
fn bessel_overflow_is_reported() {
    assert!(matches!(bessel_i(0.0, 1000.0), Err(Error::Overflow(_))));
    assert!(bessel_i_scaled(0.0, 1000.0).unwrap().is_finite());
    assert!(rel(ln_bessel_i(0.0, 1000.0).unwrap(), 1000.0 - 0.5 * (2000.0 * PI).ln() + (1.0 + 1.0 / 8000.0f64).ln()) < 1e-9);
}

#[test]
fn bessel_large_argument_tail() {
    for k in 0..8 {
        let l = 0.5 * k as f64;
        let x = 1e4;
        let ratio = bessel_i_scaled(l, x).unwrap() * (2.0 * PI * x).sqrt() / (-(l * l - 0.25) / (2.0 * x)).exp();
        assert!((ratio - 1.0).abs() < 1e-3, "L={l}: {ratio}");
    }
}

#[test]
fn gegenbauer_examples() {
    for t in [-1.0, -0.3, 0.0, 0.7, 1.0] {
        assert!(rel(modified_gegenbauer(0, 3, t).unwrap(), 1.0 / (4.0 * PI)) < 1e-14);
    }
    assert!(rel(modified_gegenbauer(1, 3, 1.0).unwrap(), 3.0 / (4.0 * PI)) < 1e-14);
    assert_eq!(gegenbauer(2, 1.0, 0.0), -1.0);
    // (2ℓ+D-2)Γ(D/2)/(2(D-2)π^{D/2}) = 6/(4π²) at ℓ = 2, D = 4
    assert!(rel(modified_gegenbauer(2, 4, 0.0).unwrap(), -6.0 / (4.0 * PI * PI)) < 1e-14);
    assert!(matches!(modified_gegenbauer(1, 2, 0.5), Err(Error::Domain(_))));
}

#[test]
fn gegenbauer_matches_legendre_in_three_dimensions() {
    let legendre = |l: u32, t: f64| -> f64 {
        let (mut p0, mut p1) = (1.0, t);
        if l == 0 {
            return 1.0;
        }
        for n in 1..l {
            let nf = n as f64;
            let p2 = ((2.0 * nf + 1.0) * t * p1 - nf * p0) / (nf + 1.0);
            p0 = p1;
            p1 = p2;
        }
        p1
    };
    for l in 0..8 {
        for t in [-0.9, -0.2, 0.4, 1.0] {
            let expect = (2.0 * l as f64 + 1.0) / (4.0 * PI) * legendre(l, t);
            assert!((modified_gegenbauer(l, 3, t).unwrap() - expect).abs() < 1e-14);
        }
    }
}

#[test]
fn gegenbauer_orthonormality_on_the_sphere() {
    // Gauss-Legendre in cos θ times a uniform φ rule is exact for these degrees
    let (x, w) = gauss_legendre(24);
    let nphi = 48;
    let outer = [0.0, 0.0, 1.0];
    let inner = [0.6f64.sin(), 0.0, 0.6f64.cos()];
    let cos_oi = outer.iter().zip(&inner).map(|(a, b)| a * b).sum::<f64>();
    for l1 in 0..=5u32 {
        for l2 in 0..=5u32 {
            let mut total = 0.0;
            for (ct, wt) in x.iter().zip(&w) {
                let st = (1.0 - ct * ct).sqrt();
                for k in 0..nphi {
                    let phi = 2.0 * PI * k as f64 / nphi as f64;
                    let u = [st * phi.cos(), st * phi.sin(), *ct];
                    let a: f64 = outer.iter().zip(&u).map(|(p, q)| p * q).sum();
                    let b: f64 = u.iter().zip(&inner).map(|(p, q)| p * q).sum();
                    total += wt * (2.0 * PI / nphi as f64) * modified_gegenbauer(l1, 3, a).unwrap() * modified_gegenbauer(l2, 3, b).unwrap();
                }
            }
            let expect = if l1 == l2 { modified_gegenbauer(l1, 3, cos_oi).unwrap() } else { 0.0 };
            assert!((total - expect).abs() < 1e-8, "ℓ={l1},{l2}: {total} vs {expect}");
        }
    }
}

#[test]
fn gegenbauer_plane_wave_expansion() {
    let z = 5.0f64;
    for dim in [3u32, 4, 5] {
        let lam = 0.5 * (dim as f64 - 2.0);
        for t in [-1.0, 0.0, 0.5, 1.0] {
            let sum: f64 = (0..=40).map(|l| modified_gegenbauer(l, dim, t).unwrap() * bessel_i(l as f64 + lam, z).unwrap()).sum();
            let value = (2.0 * PI).powf(0.5 * dim as f64) * z.powf(-lam) * sum;
            assert!(rel(value, (z * t).exp()) < 1e-8, "D={dim} t={t}");
        }
    }
}

#[test]
fn kummer_examples() {
    for (b, z) in [(0.5, 1.0), (3.0, -2.0), (1.7, 25.0)] {
        assert_eq!(kummer_m(0.0, b, z, ACC).unwrap(), 1.0);
    }
    for (a, z) in [(0.3, 1.0), (2.5, 10.0), (1.0, -3.0), (4.0, 40.0)] {
        assert!(rel(kummer_m(a, a, z, ACC).unwrap(), z.exp()) < 1e-12);
    }
    // U(1, 1, 1) = ∫ e^{-t}/(1+t) dt
    let oracle = simpson(|t: f64| (-t).exp() / (1.0 + t), 0.0, 60.0, 200_000);
    let u = kummer_u(1.0, 1.0, 1.0, ACC).unwrap();
    assert!(rel(u, oracle) < 1e-10, "{u} vs {oracle}");
    assert!(rel(u, 0.5963473623231940) < 1e-12);
}

#[test]
fn kummer_m_against_direct_series() {
    for (a, b, z) in [(0.3, 1.7, 0.5), (-2.5, 3.5, 4.0), (1.5, 2.0, 8.0), (2.0, 0.5, -3.0)] {
        assert!(rel(kummer_m(a, b, z, ACC).unwrap(), series_m(a, b, z, 300)) < 1e-12);
    }
    assert!(matches!(kummer_m(1.0, -2.0, 1.0, ACC), Err(Error::Pole(_))));
    assert!(matches!(kummer_m(1.0, 0.0, 1.0, ACC), Err(Error::Pole(_))));
}

#[test]
fn kummer_u_connection_formula() {
    // U = Γ(1-b)/Γ(a-b+1) M(a,b,z) + Γ(b-1)/Γ(a) z^{1-b} M(a-b+1,2-b,z)
    for a in [0.3, 1.7, 2.2] {
        for b in [0.4, 1.6, 2.5] {
            for z in [0.5, 2.0, 5.0] {
                let t1 = gamma(1.0 - b) / gamma(a - b + 1.0) * series_m(a, b, z, 200);
                let t2 = gamma(b - 1.0) / gamma(a) * z.powf(1.0 - b) * series_m(a - b + 1.0, 2.0 - b, z, 200);
                let oracle = t1 + t2;
                let u = kummer_u(a, b, z, ACC).unwrap();
                // the two terms cancel, so the oracle is only good to ε(|t1| + |t2|)
                let tol = 1e-10 * oracle.abs() + 1e-14 * (t1.abs() + t2.abs());
                assert!((u - oracle).abs() < tol, "U({a},{b},{z}) = {u} vs {oracle}");
            }
        }
    }
}

#[test]
fn kummer_u_large_argument() {
    // integral representation for a >= 1, on both sides of the series switchover
    for a in [1.0, 2.0, 3.0] {
        for b in [0.6, 1.5, 2.7] {
            for z in [20.0, 29.0, 31.0, 60.0] {
                let g = gamma(a);
                let oracle = simpson(|t: f64| (-z * t).exp() * t.powf(a - 1.0) * (1.0 + t).powf(b - a - 1.0), 0.0, 50.0 / z, 40_000) / g;
                let u = kummer_u(a, b, z, ACC).unwrap();
                assert!(rel(u, oracle) < 1e-10, "U({a},{b},{z}) = {u} vs {oracle}");
            }
        }
    }
}

#[test]
fn whittaker_examples() {
    let m = whittaker_m(1.0, 0.5, 2.0, ACC).unwrap();
    assert!(rel(m, 2.0 * (-1.0f64).exp()) < 1e-14);
    assert!(rel(m, 0.7357588823428847) < 1e-14);
    assert!(rel(whittaker_w(1.0, 0.5, 2.0, ACC).unwrap(), m) < 1e-12);
    let series = (-0.5f64).exp() * series_m(1.0, 2.0, 1.0, 20);
    let m0 = whittaker_m(0.0, 0.5, 1.0, ACC).unwrap();
    assert!(rel(m0, series) < 1e-14);
    assert!(rel(m0, (-0.5f64).exp() * (1f64.exp() - 1.0)) < 1e-14);
    assert!(matches!(whittaker_m(1.0, 0.5, 0.0, ACC), Err(Error::Domain(_))));
    assert!(matches!(whittaker_w(1.0, 0.5, -1.0, ACC), Err(Error::Domain(_))));
}

#[test]
fn laguerre_examples() {
    for (alpha, x) in [(0.0, 3.0), (1.5, -2.0), (4.0, 0.1)] {
        assert_eq!(laguerre(0, alpha, x), 1.0);
    }
    assert_eq!(laguerre(1, 0.0, 2.0), -1.0);
    let alpha = 1.0;
    let x = 1.0;
    let expect = (alpha + 1.0) * (alpha + 2.0) / 2.0 - (alpha + 2.0) * x + x * x / 2.0;
    assert!(rel(laguerre(2, alpha, x), expect) < 1e-15);
}

/// `e^{-z/2} z^{(α+1)/2} n!Γ(α+1)/Γ(n+α+1) L_n^α(-z)`; bounds the polynomial
/// form term by term, so it is a safe error scale at Laguerre roots.
fn laguerre_envelope(n: u32, alpha: f64, z: f64) -> f64 {
    (-0.5 * z).exp() * z.powf(0.5 * (alpha + 1.0)) * factorial(n) * gamma(alpha + 1.0) / gamma(n as f64 + alpha + 1.0) * laguerre(n, alpha, -z)
}

#[test]
fn whittaker_m_reduces_to_laguerre() {
    for alpha in [0.5, 1.0, 2.0, 3.0] {
        for n in 0..=5u32 {
            for z in [0.1, 0.5, 2.0, 7.0, 15.0] {
                let m = whittaker_m(0.5 * (alpha + 1.0) + n as f64, 0.5 * alpha, z, ACC).unwrap();
                let lag = (-0.5 * z).exp() * z.powf(0.5 * (alpha + 1.0)) * kummer_m_polynomial(n, alpha, z);
                assert!((m - lag).abs() <= 1e-10 * laguerre_envelope(n, alpha, z), "α={alpha} n={n} z={z}");
            }
        }
    }
}

#[test]
fn whittaker_quantisation_identity() {
    for alpha in [0.5, 1.0, 2.0, 3.0] {
        for n in 0..=4u32 {
            for z in [0.5, 2.0, 10.0] {
                let k = 0.5 * (alpha + 1.0) + n as f64;
                let w = whittaker_w(k, 0.5 * alpha, z, ACC).unwrap();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let f = sign * gamma(n as f64 + alpha + 1.0) / gamma(alpha + 1.0);
                let m = f * whittaker_m(k, 0.5 * alpha, z, ACC).unwrap();
                let scale = w.abs().max(m.abs()).max(f.abs() * laguerre_envelope(n, alpha, z));
                assert!((w - m).abs() <= 1e-9 * scale, "α={alpha} n={n} z={z}: {w} vs {m}");
            }
        }
    }
}

proptest! {
    #[test]
    fn kummer_transformation(a in -3.0f64..3.0, b in 0.2f64..4.0, z in 0.0f64..8.0) {
        // M(a, b, z) = e^z M(b-a, b, -z)
        let lhs = kummer_m(a, b, z, ACC).unwrap();
        let rhs = z.exp() * kummer_m(b - a, b, -z, ACC).unwrap();
        let scale = lhs.abs().max(z.exp() * series_m(b - a, b, z, 200).abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale);
    }

    #[test]
    fn whittaker_wronskian(k in -1.0f64..3.0, mu in 0.1f64..2.0, z in 0.5f64..12.0) {
        // W{M_{k,μ}, W_{k,μ}} = -Γ(1+2μ)/Γ(1/2+μ-k)
        let h = 1e-4 * z;
        let d = |f: &dyn Fn(f64) -> f64| (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h);
        let m = |x: f64| whittaker_m(k, mu, x, ACC).unwrap();
        let w = |x: f64| whittaker_w(k, mu, x, ACC).unwrap();
        let wr = m(z) * d(&w) - d(&m) * w(z);
        let expect = -gamma(1.0 + 2.0 * mu) * recip_gamma(0.5 + mu - k);
        let scale = (m(z) * d(&w)).abs().max((d(&m) * w(z)).abs());
        prop_assert!((wr - expect).abs() <= 1e-7 * scale.max(expect.abs()), "{} vs {}", wr, expect);
    }
}
