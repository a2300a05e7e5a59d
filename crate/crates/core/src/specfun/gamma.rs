use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `sin(πx)` with exact argument reduction, so zeros at integers are exact.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    // r in [-1, 1]
    let (s, r) = if r > 0.5 {
        (1.0, 1.0 - r)
    } else if r < -0.5 {
        (1.0, -1.0 - r)
    } else {
        (1.0, r)
    };
    s * (PI * r).sin()
}

fn lanczos_sum(x: f64) -> f64 {
    // x >= 0.5, argument already shifted by one
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64 - 1.0);
    }
    acc
}

/// Euler gamma function. Returns ±inf at the poles.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma(1.0 - x));
    }
    if x == x.floor() && x <= 30.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return f;
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    let t = x + LANCZOS_G - 0.5;
    let a = lanczos_sum(x);
    // split the power to postpone overflow
    let p = t.powf(0.5 * (x - 0.5));
    (2.0 * PI).sqrt() * p * (p * (-t).exp()) * a
}

/// `ln |Γ(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_signed(x).0
}

/// `(ln |Γ(x)|, sign Γ(x))`. Poles give `(inf, 1)`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x <= 0.0 && x == x.floor() {
        return (f64::INFINITY, 1.0);
    }
    if x < 0.5 {
        let s = sin_pi(x);
        let (lg, sg) = ln_gamma_signed(1.0 - x);
        return ((PI / s.abs()).ln() - lg, sg * s.signum());
    }
    if x < 15.0 {
        return (gamma(x).ln(), 1.0);
    }
    let t = x + LANCZOS_G - 0.5;
    (HALF_LN_2PI + (x - 0.5) * t.ln() - t + lanczos_sum(x).ln(), 1.0)
}

/// `1/Γ(x)`, entire; exactly zero at the non-positive integers.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x < 0.5 {
        return sin_pi(x) * gamma(1.0 - x) / PI;
    }
    let (lg, _) = ln_gamma_signed(x);
    if lg > 700.0 {
        return (-lg).exp();
    }
    1.0 / gamma(x)
}

/// Distance from `x` to the nearest pole of Γ, or `None` if no pole is nearer than 0.5.
pub fn pole_distance(x: f64) -> Option<f64> {
    let n = x.round();
    if n <= 0.0 {
        Some((x - n).abs())
    } else {
        None
    }
}

/// Pochhammer symbol `(a)_n`.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |p, k| p * (a + k as f64))
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |p, k| p * k as f64)
}
