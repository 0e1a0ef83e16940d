//! Derivative-free minimisation of `E` over `Gr>0(2,n)`.
//!
//! Points are parametrised by column angles `0 < θ_1 < … < θ_n < π` and radii
//! `r_i > 0`, giving minors `r_i r_j sin(θ_j − θ_i) > 0`. Every positive point
//! has such a representative up to the linear action on the plane, which
//! leaves `E` unchanged.
//!
//! The search runs in an unconstrained chart. The `n + 1` gaps between
//! `0, θ_1, …, θ_n, π` are `exp(z)` with the first gap pinned to `1`, then
//! rescaled to sum to `π`. The radii are `exp(y)` with `r_1 = 1`.
//! The objective `log E = log max Δ − log min Δ` is nonsmooth, so the
//! minimiser is a Nelder–Mead simplex with restarts.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::extremal::{loss_e, optimal_loss};
use crate::plucker::{minors, PointMatrix};

/// Minimum angular gap and margin used by [`sample_positive`].
pub const SAMPLE_DELTA: f64 = 1e-3;

/// Angles and radii of `n` columns in the open upper half-plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleRadiusParam {
    theta: Vec<f64>,
    r: Vec<f64>,
}

impl AngleRadiusParam {
    pub fn new(theta: Vec<f64>, r: Vec<f64>) -> Result<Self> {
        let n = theta.len();
        if n < 3 {
            return Err(Error::TooFewColumns(n));
        }
        if r.len() != n {
            return Err(Error::DimensionMismatch(r.len(), n));
        }
        let bounded = theta.iter().all(|&t| t > 0.0 && t < std::f64::consts::PI);
        let sorted = theta.windows(2).all(|w| w[0] < w[1]);
        if !(bounded && sorted) {
            return Err(Error::InvalidParam(
                "angles must increase strictly inside (0, π)".into(),
            ));
        }
        if !r.iter().all(|&x| x > 0.0 && x.is_finite()) {
            return Err(Error::InvalidParam(
                "radii must be positive and finite".into(),
            ));
        }
        Ok(Self { theta, r })
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    /// Multiplies every radius by `factor`.
    pub fn scale_radii(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.theta.clone(),
            self.r.iter().map(|x| x * factor).collect(),
        )
    }

    /// `C` rotated by `π/(2n)` so that no angle sits on the boundary.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewColumns(n));
        }
        let step = std::f64::consts::PI / n as f64;
        Self::new(
            (0..n).map(|i| (i as f64 + 0.5) * step).collect(),
            vec![1.0; n],
        )
    }

    /// `log E` straight from the angles and radii.
    pub fn log_loss(&self) -> f64 {
        log_loss(&self.theta, &self.r)
    }
}

/// Columns `r_i (cos θ_i, sin θ_i)`.
pub fn to_matrix(p: &AngleRadiusParam) -> Result<PointMatrix> {
    PointMatrix::new(
        p.theta
            .iter()
            .zip(&p.r)
            .map(|(&t, &r)| [r * t.cos(), r * t.sin()])
            .collect(),
    )
}

fn log_minors(theta: &[f64], r: &[f64], out: &mut Vec<f64>) {
    let n = theta.len();
    out.clear();
    for i in 0..n {
        for j in i + 1..n {
            out.push(r[i].ln() + r[j].ln() + (theta[j] - theta[i]).sin().ln());
        }
    }
}

fn log_loss(theta: &[f64], r: &[f64]) -> f64 {
    let mut v = Vec::new();
    log_minors(theta, r, &mut v);
    spread(&v, None)
}

/// `max v − min v`, or with `Some(β)` its log-sum-exp upper bound
/// `smax_β v − smin_β v`, which exceeds the exact spread by at most
/// `2 ln(len)/β`.
fn spread(v: &[f64], sharpness: Option<f64>) -> f64 {
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    match sharpness {
        None => hi - lo,
        Some(beta) => {
            let up: f64 = v.iter().map(|x| (beta * (x - hi)).exp()).sum();
            let down: f64 = v.iter().map(|x| (beta * (lo - x)).exp()).sum();
            hi - lo + (up.ln() + down.ln()) / beta
        }
    }
}

/// A deterministic random positive point: sorted angles in `(δ, π − δ)` with
/// pairwise gaps at least `δ`, and log-radii uniform in `[−1, 1]`.
pub fn sample_positive(n: usize, seed: u64) -> Result<AngleRadiusParam> {
    if n < 3 {
        return Err(Error::TooFewColumns(n));
    }
    let delta = SAMPLE_DELTA;
    let room = std::f64::consts::PI - 2.0 * delta - (n - 1) as f64 * delta;
    if room <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "n = {n} too large for gap {delta}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * room).collect();
    u.sort_by(f64::total_cmp);
    let theta = u
        .iter()
        .enumerate()
        .map(|(i, x)| delta + x + i as f64 * delta)
        .collect();
    let r = (0..n).map(|_| rng.gen_range(-1.0..=1.0f64).exp()).collect();
    AngleRadiusParam::new(theta, r)
}

/// Seed of restart `index`, split from `seed` by ChaCha stream selection.
pub fn restart_seed(seed: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng.next_u64()
}

/// Maps free coordinates of the frame chart to angles and radii.
///
/// Columns 1 and 2 are pinned to `(1, 0)` and `(0, 1)`. Columns `3..n` have
/// angles in `(π/2, π)`, built from the `n − 1` gaps between
/// `π/2, θ_3, …, θ_n, π` with the first gap pinned to `1`. Their radii are
/// `exp(y)`. Every point of `Gr>0(2,n)` has exactly one such representative.
fn decode(z: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let (gaps_free, radii_free) = z.split_at(n - 2);
    let gaps: Vec<f64> = std::iter::once(1.0)
        .chain(gaps_free.iter().map(|x| x.exp()))
        .collect();
    let total: f64 = gaps.iter().sum();
    let scale = half_pi / total;
    let mut acc = 0.0;
    let theta = [0.0, half_pi]
        .into_iter()
        .chain(gaps[..n - 2].iter().map(|g| {
            acc += g;
            half_pi + acc * scale
        }))
        .collect();
    let r = [1.0, 1.0]
        .into_iter()
        .chain(radii_free.iter().map(|y| y.exp()))
        .collect();
    (theta, r)
}

/// Inverse of [`decode`]: moves columns 1 and 2 onto the frame by the unique
/// linear map doing so, then reads off gaps and radii.
fn encode(p: &AngleRadiusParam) -> Vec<f64> {
    let n = p.n();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let cols: Vec<[f64; 2]> = p
        .theta
        .iter()
        .zip(&p.r)
        .map(|(&t, &r)| [r * t.cos(), r * t.sin()])
        .collect();
    let (x1, x2) = (cols[0], cols[1]);
    let det = x1[0] * x2[1] - x1[1] * x2[0];
    // rows of [x1 x2]^{-1}
    let inv = [[x2[1] / det, -x2[0] / det], [-x1[1] / det, x1[0] / det]];
    let mapped: Vec<(f64, f64)> = cols[2..]
        .iter()
        .map(|c| {
            let u = inv[0][0] * c[0] + inv[0][1] * c[1];
            let v = inv[1][0] * c[0] + inv[1][1] * c[1];
            (v.atan2(u), u.hypot(v))
        })
        .collect();
    let mut gaps = Vec::with_capacity(n - 1);
    let mut prev = half_pi;
    for &(t, _) in &mapped {
        gaps.push(t - prev);
        prev = t;
    }
    gaps.push(std::f64::consts::PI - prev);
    let g0 = gaps[0];
    gaps[1..]
        .iter()
        .map(|g| (g / g0).ln())
        .chain(mapped.iter().map(|&(_, r)| r.ln()))
        .collect()
}

/// Rotates frame-chart angles (first angle `0`) into the open interval `(0, π)`.
fn centred(theta: Vec<f64>, r: Vec<f64>) -> Result<AngleRadiusParam> {
    let last = *theta.last().expect("n >= 3");
    let shift = 0.5 * (std::f64::consts::PI - last);
    AngleRadiusParam::new(theta.into_iter().map(|t| t + shift).collect(), r)
}

fn objective(z: &[f64], n: usize) -> f64 {
    smoothed_objective(z, n, None)
}

fn smoothed_objective(z: &[f64], n: usize, sharpness: Option<f64>) -> f64 {
    let (theta, r) = decode(z, n);
    let mut v = Vec::with_capacity(n * (n - 1) / 2);
    log_minors(&theta, &r, &mut v);
    let f = spread(&v, sharpness);
    if f.is_finite() {
        f
    } else {
        f64::INFINITY
    }
}

/// Sharpness schedule of the smoothed warm-up stages.
const SHARPNESS: [f64; 6] = [1e1, 1e2, 1e3, 1e4, 1e5, 1e6];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub n: usize,
    pub restarts: usize,
    /// Simplex iterations per restart, shared by all polishing rounds.
    pub max_iters: usize,
    pub seed: u64,
    pub simplex_scale: f64,
    /// Stop a simplex run once `max f − min f` over its vertices drops below this.
    pub ftol: f64,
}

impl OptimizerConfig {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            restarts: 20,
            max_iters: 40_000,
            seed: 0,
            simplex_scale: 0.5,
            ftol: 1e-12,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::TooFewColumns(self.n));
        }
        if self.restarts < 1 || self.max_iters < 1 {
            return Err(Error::InvalidParam(
                "restarts and max_iters must be at least 1".into(),
            ));
        }
        if !(self.simplex_scale > 0.0 && self.ftol > 0.0) {
            return Err(Error::InvalidParam(
                "simplex_scale and ftol must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    MaxIters,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub index: usize,
    pub seed: u64,
    pub start_e: f64,
    pub best_e: f64,
    pub iterations: usize,
    pub stop: StopReason,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub n: usize,
    #[serde(rename = "best_E")]
    pub best_e: f64,
    pub best_param: AngleRadiusParam,
    pub best_matrix: PointMatrix,
    /// `s_d / s_1`.
    pub optimum: f64,
    /// `best_E − s_d/s_1`.
    pub gap_to_theory: f64,
    pub best_restart: usize,
    pub iterations: usize,
    pub restarts: Vec<RestartSummary>,
}

struct SimplexRun {
    x: Vec<f64>,
    f: f64,
    iterations: usize,
    stop: StopReason,
    /// Largest distance from the best vertex to another vertex.
    diameter: f64,
}

/// Nelder–Mead with dimension-adapted coefficients.
fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    scale: f64,
    max_iters: usize,
    ftol: f64,
) -> SimplexRun {
    let dim = x0.len();
    let nd = dim as f64;
    let (alpha, gamma, rho, shrink) =
        (1.0, 1.0 + 2.0 / nd, 0.75 - 1.0 / (2.0 * nd), 1.0 - 1.0 / nd);

    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    pts.push(x0.to_vec());
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += scale;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut order: Vec<usize> = (0..=dim).collect();
    let mut iterations = 0;
    let mut stop = StopReason::MaxIters;

    let affine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
    };

    while iterations < max_iters {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        let (best, worst, second) = (order[0], order[dim], order[dim - 1]);
        if vals[worst] - vals[best] < ftol {
            stop = StopReason::Converged;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; dim];
        for &idx in &order[..dim] {
            for (c, x) in centroid.iter_mut().zip(&pts[idx]) {
                *c += x / nd;
            }
        }
        let xr = affine(&centroid, &pts[worst], -alpha);
        let fr = f(&xr);
        if fr < vals[best] {
            let xe = affine(&centroid, &pts[worst], -alpha * gamma);
            let fe = f(&xe);
            if fe < fr {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if fr < vals[second] {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        // outside contraction when the reflection beat the worst vertex
        let outside = fr < vals[worst];
        let xc = if outside {
            affine(&centroid, &xr, rho)
        } else {
            affine(&centroid, &pts[worst], rho)
        };
        let fc = f(&xc);
        if (outside && fc <= fr) || (!outside && fc < vals[worst]) {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        let anchor = pts[best].clone();
        for &idx in &order[1..] {
            pts[idx] = affine(&anchor, &pts[idx], shrink);
            vals[idx] = f(&pts[idx]);
        }
    }
    let best = (0..=dim)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)))
        .expect("non-empty simplex");
    let diameter = pts
        .iter()
        .map(|p| {
            p.iter()
                .zip(&pts[best])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    SimplexRun {
        x: pts[best].clone(),
        f: vals[best],
        iterations,
        stop,
        diameter,
    }
}

/// Simplex runs on one objective: the first from `z0`, later ones re-started
/// at the incumbent. The simplex scale drops tenfold after each run that fails
/// to improve by `ftol`; three such runs in a row end the stage.
fn polish<F: Fn(&[f64]) -> f64>(
    f: &F,
    z0: Vec<f64>,
    scale0: f64,
    budget: usize,
    ftol: f64,
) -> SimplexRun {
    let mut best = SimplexRun {
        f: f(&z0),
        x: z0,
        iterations: 0,
        stop: StopReason::MaxIters,
        diameter: scale0,
    };
    let mut scale = scale0;
    let mut stalls = 0;
    while best.iterations < budget {
        let run = nelder_mead(f, &best.x, scale, budget - best.iterations, ftol);
        let improved = run.f < best.f - ftol;
        best.iterations += run.iterations;
        best.diameter = run.diameter;
        if run.f <= best.f {
            best.x = run.x;
            best.f = run.f;
        }
        if run.stop == StopReason::MaxIters {
            break;
        }
        if improved {
            stalls = 0;
        } else {
            stalls += 1;
            if stalls >= 3 {
                best.stop = StopReason::Converged;
                break;
            }
            scale = (scale * 0.1).max(1e-9);
        }
    }
    best
}

/// One restart. Warm-up stages minimise the log-sum-exp surrogate of `log E`
/// with increasing sharpness; the last stage minimises `log E` itself. Each
/// stage starts from the previous stage's point with a simplex sized to where
/// the previous one ended. Stages share `max_iters` equally.
fn search_from(cfg: &OptimizerConfig, z0: Vec<f64>) -> SimplexRun {
    let n = cfg.n;
    let stages = SHARPNESS.len() + 1;
    let share = (cfg.max_iters / stages).max(1);
    let mut z = z0;
    let mut scale = cfg.simplex_scale;
    let mut iterations = 0;
    for beta in SHARPNESS {
        let f = |x: &[f64]| smoothed_objective(x, n, Some(beta));
        let run = polish(&f, z, scale, share, cfg.ftol);
        iterations += run.iterations;
        scale = run.diameter.clamp(1e-6, cfg.simplex_scale);
        z = run.x;
    }
    let f = |x: &[f64]| objective(x, n);
    let budget = cfg.max_iters.saturating_sub(iterations).max(1);
    let mut last = polish(&f, z, scale, budget, cfg.ftol);
    last.iterations += iterations;
    last
}

fn finish(
    cfg: &OptimizerConfig,
    runs: Vec<(RestartSummary, Vec<f64>)>,
) -> Result<OptimizationResult> {
    let n = cfg.n;
    let (best_restart, z) = runs
        .iter()
        .filter(|(s, _)| s.best_e.is_finite())
        .min_by(|a, b| {
            a.0.best_e
                .total_cmp(&b.0.best_e)
                .then(a.0.index.cmp(&b.0.index))
        })
        .map(|(s, z)| (s.index, z.clone()))
        .ok_or(Error::NoFiniteObjective)?;
    let (theta, r) = decode(&z, n);
    let best_param = centred(theta, r)?;
    let best_matrix = to_matrix(&best_param)?;
    let best_e = loss_e(&minors(&best_matrix))?;
    let optimum = optimal_loss(n);
    let restarts: Vec<RestartSummary> = runs.into_iter().map(|(s, _)| s).collect();
    Ok(OptimizationResult {
        n,
        best_e,
        best_param,
        best_matrix,
        optimum,
        gap_to_theory: best_e - optimum,
        best_restart,
        iterations: restarts.iter().map(|s| s.iterations).sum(),
        restarts,
    })
}

fn run_restart(
    cfg: &OptimizerConfig,
    index: usize,
    start: &AngleRadiusParam,
    seed: u64,
) -> (RestartSummary, Vec<f64>) {
    let z0 = encode(start);
    let start_e = objective(&z0, cfg.n).exp();
    let run = search_from(cfg, z0);
    let summary = RestartSummary {
        index,
        seed,
        start_e,
        best_e: run.f.exp(),
        iterations: run.iterations,
        stop: run.stop,
    };
    (summary, run.x)
}

/// Multi-restart search from seeded random starting points.
pub fn minimize(cfg: &OptimizerConfig) -> Result<OptimizationResult> {
    minimize_with(cfg, Execution::default())
}

/// [`minimize`] with an explicit execution strategy; the result does not
/// depend on it.
pub fn minimize_with(cfg: &OptimizerConfig, exec: Execution) -> Result<OptimizationResult> {
    cfg.validate()?;
    let runs = exec.try_map(cfg.restarts, |index| {
        let seed = restart_seed(cfg.seed, index);
        let start = sample_positive(cfg.n, seed)?;
        Ok(run_restart(cfg, index, &start, seed))
    })?;
    finish(cfg, runs)
}

/// A single search from a given starting point.
pub fn minimize_from(
    cfg: &OptimizerConfig,
    start: &AngleRadiusParam,
) -> Result<OptimizationResult> {
    cfg.validate()?;
    if start.n() != cfg.n {
        return Err(Error::DimensionMismatch(start.n(), cfg.n));
    }
    finish(cfg, vec![run_restart(cfg, 0, start, cfg.seed)])
}
