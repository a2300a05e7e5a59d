//! Independent numerical reference: Numerov integration of the radial
//! equation on a uniform grid in `x = ln r`.
//!
//! With `u(r) = r^{1/2} y(x)` the radial equation becomes
//! `y'' = [(2m/ħ²) r² (V_eff(r) - E) + 1/4] y`, whose coefficient stays
//! bounded at the origin; regular solutions start as `y ~ r^L`.

use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::green::{Sampler, SharedSampler};

const RESCALE: f64 = 1e150;

/// Radial problem for the oracle. `potential` includes the centrifugal term.
#[derive(Clone)]
pub struct RadialProblem {
    pub potential: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub angular_momentum: f64,
    pub mass: f64,
    pub hbar: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl std::fmt::Debug for RadialProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialProblem")
            .field("angular_momentum", &self.angular_momentum)
            .field("r_min", &self.r_min)
            .field("r_max", &self.r_max)
            .field("points", &self.points)
            .finish()
    }
}

impl RadialProblem {
    pub fn new<V>(potential: V, angular_momentum: f64, mass: f64, hbar: f64, r_max: f64, points: usize) -> Result<Self>
    where
        V: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let p = RadialProblem {
            potential: Arc::new(potential),
            angular_momentum,
            mass,
            hbar,
            r_min: 1e-6,
            r_max,
            points,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min) {
            return Err(domain("oracle grid needs 0 < r_min < r_max"));
        }
        if self.points < 16 {
            return Err(domain("oracle grid needs at least 16 points"));
        }
        if !(self.mass > 0.0 && self.hbar > 0.0 && self.angular_momentum >= 0.0) {
            return Err(domain("oracle needs m, ħ > 0 and L >= 0"));
        }
        Ok(())
    }

    /// Outer radius where a state of energy `e_max` has decayed by `e^{-depth}`
    /// past its outermost turning point.
    pub fn decay_radius(&self, e_max: f64, depth: f64) -> f64 {
        let two_m = 2.0 * self.mass / (self.hbar * self.hbar);
        let mut r = 1e-3;
        let mut turning = None;
        let mut phase = 0.0;
        let dr_rel = 1e-3;
        while r < 1e7 {
            let v = (self.potential)(r);
            let dr = r * dr_rel;
            if v < e_max {
                turning = Some(r);
                phase = 0.0;
            } else if turning.is_some() {
                phase += (two_m * (v - e_max)).sqrt() * dr;
                if phase > depth {
                    return r;
                }
            }
            r += dr;
        }
        r
    }

    /// Lowest energy worth searching from: below every level, but not so low
    /// that the Numerov recurrence becomes unstable (`h²q/12 < 1/2`).
    pub fn potential_floor(&self) -> f64 {
        let grid = self.grid();
        let stiff = 3.0 * self.hbar * self.hbar / (self.mass * grid.h * grid.h);
        let (mut lowest, mut stable) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..grid.n {
            let r = grid.r(i);
            let v = (self.potential)(r);
            lowest = lowest.min(v);
            stable = stable.max(v - stiff / (r * r));
        }
        (lowest - 1.0).max(stable)
    }

    pub fn grid(&self) -> LogGrid {
        LogGrid::new(self.r_min, self.r_max, self.points)
    }

    fn coefficient(&self, grid: &LogGrid, energy: f64) -> Vec<f64> {
        let two_m = 2.0 * self.mass / (self.hbar * self.hbar);
        (0..grid.n)
            .map(|i| {
                let r = grid.r(i);
                two_m * r * r * ((self.potential)(r) - energy) + 0.25
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGrid {
    pub x0: f64,
    pub h: f64,
    pub n: usize,
}

impl LogGrid {
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Self {
        let x0 = r_min.ln();
        LogGrid { x0, h: (r_max.ln() - x0) / (n - 1) as f64, n }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    pub fn r(&self, i: usize) -> f64 {
        self.x(i).exp()
    }
}

fn numerov_step(q: &[f64], y: &mut [f64], i: usize, h2: f64, forward: bool) {
    // fills y[i] from its two predecessors in the direction of travel
    let (a, b) = if forward { (i - 1, i - 2) } else { (i + 1, i + 2) };
    let ca = 1.0 + 5.0 * h2 * q[a] / 12.0;
    let cb = 1.0 - h2 * q[b] / 12.0;
    let ci = 1.0 - h2 * q[i] / 12.0;
    y[i] = (2.0 * ca * y[a] - cb * y[b]) / ci;
}

/// Regular solution integrated outward up to index `end` (inclusive).
fn integrate_out(problem: &RadialProblem, grid: &LogGrid, q: &[f64], end: usize) -> Vec<f64> {
    let h2 = grid.h * grid.h;
    let l = problem.angular_momentum;
    let mut y = vec![0.0; end + 1];
    y[0] = (l * grid.x(0)).exp();
    y[1] = (l * grid.x(1)).exp();
    for i in 2..=end {
        numerov_step(q, &mut y, i, h2, true);
        if y[i].abs() > RESCALE {
            y[..=i].iter_mut().for_each(|v| *v /= RESCALE);
        }
    }
    y
}

/// Solution vanishing at `r_max`, integrated inward down to index `start`.
fn integrate_in(grid: &LogGrid, q: &[f64], start: usize) -> Vec<f64> {
    let h2 = grid.h * grid.h;
    let n = grid.n;
    let mut y = vec![0.0; n];
    y[n - 2] = 1e-30;
    let mut i = n - 2;
    while i > start {
        i -= 1;
        numerov_step(q, &mut y, i, h2, false);
        if y[i].abs() > RESCALE {
            y[i..].iter_mut().for_each(|v| *v /= RESCALE);
        }
    }
    y
}

fn sign_changes(y: &[f64]) -> usize {
    let mut count = 0;
    let mut last = 0.0;
    for &v in y {
        if v != 0.0 {
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
    }
    count
}

/// Index of the outermost classical turning point, kept away from the ends.
fn matching_index(q: &[f64]) -> usize {
    let n = q.len();
    let idx = (0..n).rev().find(|&i| q[i] < 0.0).unwrap_or_else(|| {
        (0..n).min_by(|&a, &b| q[a].partial_cmp(&q[b]).unwrap()).unwrap_or(n / 2)
    });
    idx.clamp(n / 20 + 2, n - n / 20 - 3)
}

struct Shot {
    out: Vec<f64>,
    inw: Vec<f64>,
    m: usize,
}

fn shoot(problem: &RadialProblem, grid: &LogGrid, energy: f64, at: Option<usize>) -> Shot {
    let q = problem.coefficient(grid, energy);
    let m = at.unwrap_or_else(|| matching_index(&q));
    let out = integrate_out(problem, grid, &q, m + 2);
    let inw = integrate_in(grid, &q, m - 2);
    Shot { out, inw, m }
}

fn derivative(y: &[f64], i: usize, h: f64) -> f64 {
    (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * h)
}

/// Difference of the logarithmic derivatives (in `x = ln r`) of the outward
/// and inward solutions at the outermost turning point.
pub fn shoot_mismatch(problem: &RadialProblem, energy: f64) -> Result<f64> {
    problem.validate()?;
    let grid = problem.grid();
    let s = shoot(problem, &grid, energy, None);
    let m = s.m;
    Ok(derivative(&s.out, m, grid.h) / s.out[m] - derivative(&s.inw, m, grid.h) / s.inw[m])
}

/// Bounded matching function: sine of the angle between the two solutions in
/// the `(y, h y')` plane. Continuous in `E`, zero at eigenvalues.
fn phase_mismatch(problem: &RadialProblem, grid: &LogGrid, energy: f64, at: usize) -> f64 {
    let s = shoot(problem, grid, energy, Some(at));
    let m = s.m;
    let (yo, yi) = (s.out[m], s.inw[m]);
    let (po, pi) = (grid.h * derivative(&s.out, m, grid.h), grid.h * derivative(&s.inw, m, grid.h));
    (po * yi - pi * yo) / ((yo * yo + po * po).sqrt() * (yi * yi + pi * pi).sqrt())
}

/// Sturm count: eigenvalues of the truncated problem below `energy`.
fn count_below(problem: &RadialProblem, grid: &LogGrid, energy: f64) -> usize {
    let q = problem.coefficient(grid, energy);
    sign_changes(&integrate_out(problem, grid, &q, grid.n - 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Closed,
    Oracle,
}

/// Eigenfunction tabulated on the oracle grid; evaluation interpolates
/// cubically in `ln r`.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub grid: LogGrid,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl Sampler for GridFunction {
    fn eval(&self, r: f64) -> f64 {
        if !(r > 0.0) {
            return 0.0;
        }
        let t = (r.ln() - self.grid.x0) / self.grid.h;
        if t < 0.0 || t > (self.grid.n - 1) as f64 {
            return 0.0;
        }
        lagrange4(&self.values, t)
    }
}

fn lagrange4(v: &[f64], t: f64) -> f64 {
    let n = v.len();
    let i = (t.floor() as usize).clamp(1, n - 3);
    let s = t - i as f64;
    let (a, b, c, d) = (v[i - 1], v[i], v[i + 1], v[i + 2]);
    -s * (s - 1.0) * (s - 2.0) / 6.0 * a + (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0 * b
        - (s + 1.0) * s * (s - 2.0) / 2.0 * c
        + (s + 1.0) * s * (s - 1.0) / 6.0 * d
}

#[derive(Clone)]
pub struct SpectralLine {
    pub n: u32,
    pub ell: Option<u32>,
    pub angular_momentum: f64,
    pub energy: f64,
    pub eigenfunction: SharedSampler,
    pub source: Source,
}

impl std::fmt::Debug for SpectralLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralLine")
            .field("n", &self.n)
            .field("ell", &self.ell)
            .field("angular_momentum", &self.angular_momentum)
            .field("energy", &self.energy)
            .field("source", &self.source)
            .finish()
    }
}

/// Oracle eigenstate: energy, node count and normalised reduced radial
/// function on the grid.
#[derive(Debug, Clone)]
pub struct OracleState {
    pub energy: f64,
    pub nodes: usize,
    pub function: GridFunction,
}

impl OracleState {
    pub fn line(&self, ell: Option<u32>, angular_momentum: f64) -> SpectralLine {
        SpectralLine {
            n: self.nodes as u32,
            ell,
            angular_momentum,
            energy: self.energy,
            eigenfunction: Arc::new(self.function.clone()),
            source: Source::Oracle,
        }
    }
}

fn refine_root(problem: &RadialProblem, grid: &LogGrid, mut lo: f64, mut hi: f64) -> f64 {
    let at = matching_index(&problem.coefficient(grid, 0.5 * (lo + hi)));
    let mut f_lo = phase_mismatch(problem, grid, lo, at);
    let mut f_hi = phase_mismatch(problem, grid, hi, at);
    if f_lo == 0.0 {
        return lo;
    }
    if f_hi == 0.0 || (f_lo > 0.0) == (f_hi > 0.0) {
        // fall back to the Sturm count when the matching function is not bracketing
        return bisect_count(problem, grid, lo, hi);
    }
    // Illinois variant of regula falsi
    let mut side = 0;
    for _ in 0..200 {
        let mid = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        let mid = if mid > lo && mid < hi { mid } else { 0.5 * (lo + hi) };
        let f_mid = phase_mismatch(problem, grid, mid, at);
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = mid;
            f_hi = f_mid;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
        if (hi - lo).abs() <= 1e-14 * (1.0 + mid.abs()) || f_mid == 0.0 {
            return mid;
        }
    }
    0.5 * (lo + hi)
}

fn bisect_count(problem: &RadialProblem, grid: &LogGrid, mut lo: f64, mut hi: f64) -> f64 {
    let target = count_below(problem, grid, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(problem, grid, mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * (1.0 + mid.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn state_at(problem: &RadialProblem, grid: &LogGrid, energy: f64) -> OracleState {
    let s = shoot(problem, grid, energy, None);
    let m = s.m;
    let scale = s.out[m] / s.inw[m];
    let mut y: Vec<f64> = s.out[..=m].to_vec();
    y.extend(s.inw[m + 1..].iter().map(|v| v * scale));
    let radii: Vec<f64> = (0..grid.n).map(|i| grid.r(i)).collect();
    let mut u: Vec<f64> = y.iter().zip(&radii).map(|(v, r)| v * r.sqrt()).collect();
    // ∫u² dr = ∫ r u² dx, composite Simpson in x
    let g: Vec<f64> = u.iter().zip(&radii).map(|(v, r)| v * v * r).collect();
    let norm = simpson(&g, grid.h).sqrt();
    let sign = u.iter().find(|v| v.abs() > 1e-12 * norm).map(|v| v.signum()).unwrap_or(1.0);
    u.iter_mut().for_each(|v| *v *= sign / norm);
    let nodes = sign_changes(&u);
    OracleState { energy, nodes, function: GridFunction { grid: *grid, radii, values: u } }
}

pub fn simpson(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    if n < 3 {
        return 0.0;
    }
    let (body, tail) = if n % 2 == 1 { (n, 0.0) } else { (n - 1, 0.5 * h * (f[n - 2] + f[n - 1])) };
    let mut s = f[0] + f[body - 1];
    for i in 1..body - 1 {
        s += if i % 2 == 1 { 4.0 * f[i] } else { 2.0 * f[i] };
    }
    s * h / 3.0 + tail
}

/// The state with `n` nodes; `floor` must lie below the ground state.
pub fn eigen_level(problem: &RadialProblem, n: usize, floor: f64) -> Result<OracleState> {
    problem.validate()?;
    let grid = problem.grid();
    let lo_count = count_below(problem, &grid, floor);
    if lo_count > n {
        return Err(Error::NoBracket(format!("{lo_count} levels already lie below {floor}")));
    }
    let mut lo = floor;
    let mut step = 1.0f64.max(floor.abs());
    let mut hi = floor + step;
    let mut tries = 0;
    while count_below(problem, &grid, hi) <= n {
        lo = hi;
        step *= 2.0;
        hi += step;
        tries += 1;
        if tries > 60 {
            return Err(Error::NoBracket(format!("level {n} not found above {floor}")));
        }
    }
    // narrow to exactly one level in [lo, hi]
    for _ in 0..200 {
        let below_lo = count_below(problem, &grid, lo);
        let below_hi = count_below(problem, &grid, hi);
        if below_lo == n && below_hi == n + 1 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if count_below(problem, &grid, mid) <= n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let e = refine_root(problem, &grid, lo, hi);
    Ok(state_at(problem, &grid, e))
}

/// Up to `count` eigenvalues inside `window`, ascending.
pub fn numerov_eigen(problem: &RadialProblem, window: (f64, f64), count: usize) -> Result<Vec<OracleState>> {
    problem.validate()?;
    let grid = problem.grid();
    let (lo, hi) = window;
    let first = count_below(problem, &grid, lo);
    let last = count_below(problem, &grid, hi);
    if last <= first {
        return Err(Error::NoBracket(format!("no eigenvalue in [{lo}, {hi}]")));
    }
    (first..last.min(first + count)).map(|n| eigen_level(problem, n, lo)).collect()
}

/// `∫ f(r)² dr` by tanh-sinh quadrature over `[r_min, r_max]`.
pub fn quadrature_norm(f: &dyn Sampler, r_min: f64, r_max: f64) -> Result<f64> {
    Ok(crate::quad::tanh_sinh(|r| f.eval(r).powi(2), r_min, r_max, 1e-12)?.value)
}

/// Green function at `E` from the regular and decaying Numerov solutions and
/// their Wronskian.
pub fn green_by_shooting(problem: &RadialProblem, energy: f64, r_outer: f64, r_inner: f64) -> Result<f64> {
    problem.validate()?;
    if !(r_outer > r_inner && r_inner > problem.r_min && r_outer < problem.r_max) {
        return Err(Error::Ordering { outer: r_outer, inner: r_inner });
    }
    let grid = problem.grid();
    let q = problem.coefficient(&grid, energy);
    let x_to_t = |r: f64| (r.ln() - grid.x0) / grid.h;
    let i_in = (x_to_t(r_inner).floor() as usize).clamp(3, grid.n - 4);
    let i_out = (x_to_t(r_outer).floor() as usize).clamp(3, grid.n - 4);
    let regular = integrate_out(problem, &grid, &q, (i_out + 3).min(grid.n - 1));
    let decaying = integrate_in(&grid, &q, i_in.saturating_sub(3));
    // Wronskian in x, constant along the grid; averaged over a few points between the radii
    let mid = ((i_in + i_out) / 2).clamp(i_in.max(3), i_out.max(3));
    let w: f64 = (0..5)
        .map(|j| {
            let i = mid - 2 + j;
            regular[i] * derivative(&decaying, i, grid.h) - derivative(&regular, i, grid.h) * decaying[i]
        })
        .sum::<f64>()
        / 5.0;
    let y_reg = lagrange4(&regular, x_to_t(r_inner));
    let y_dec = lagrange4(&decaying, x_to_t(r_outer));
    let two_m = 2.0 * problem.mass / (problem.hbar * problem.hbar);
    Ok(-two_m * (r_inner * r_outer).sqrt() * y_reg * y_dec / w)
}
