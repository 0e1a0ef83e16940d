use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use grplus::cyclic::{geometric_means, normalize, shifted_relation, OrbitTable};
use grplus::extremal::{
    b_reduction, certify_point, certify_sweep, check_linear_inequalities, cyclic_matrix, loss_b,
    loss_e, normalized_logs, profile_csv, slacks_csv,
};
use grplus::optimizer::{minimize_with, sample_positive, to_matrix, OptimizerConfig};
use grplus::plucker::{minors, quads, triples, uvw_residual, uvw_scale};
use grplus::qfamily::{plateau_csv, verify_nonuniqueness};
use grplus::reconstruct::{extract_outer, reconstruct as rebuild, OuterOrbitData};
use grplus::PointMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::{CliError, Common, Outcome};

/// Where the input point comes from.
#[derive(Args, Debug, Clone, Serialize)]
pub(crate) struct MatrixArgs {
    /// Number of columns; required unless the matrix is read from a file
    #[arg(long)]
    pub n: Option<usize>,
    /// `cyclic`, `random`, or a path to a JSON matrix {"n", "columns"}
    #[arg(long, default_value = "cyclic")]
    pub matrix: String,
    /// Path to a JSON matrix; overrides --matrix
    #[arg(long)]
    pub matrix_file: Option<PathBuf>,
}

enum Source<'a> {
    Cyclic,
    Random,
    File(&'a Path),
}

impl MatrixArgs {
    fn source(&self) -> Source<'_> {
        match (&self.matrix_file, self.matrix.as_str()) {
            (Some(p), _) => Source::File(p),
            (None, "cyclic") => Source::Cyclic,
            (None, "random") => Source::Random,
            (None, p) => Source::File(Path::new(p)),
        }
    }

    fn require_n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| {
            CliError::Usage(format!("--n is required with --matrix {}", self.matrix))
        })
    }

    /// Loads the matrix. `random` draws a positive point from `seed` when
    /// `positive` is set and uniform entries in `[−1, 1]` otherwise.
    fn load(&self, seed: u64, positive: bool) -> Result<PointMatrix, CliError> {
        let x = match self.source() {
            Source::Cyclic => cyclic_matrix(self.require_n()?)?,
            Source::Random if positive => to_matrix(&sample_positive(self.require_n()?, seed)?)?,
            Source::Random => {
                let n = self.require_n()?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                PointMatrix::new(
                    (0..n)
                        .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
                        .collect(),
                )?
            }
            Source::File(path) => read_json::<PointMatrix>(path)?,
        };
        if let Some(n) = self.n {
            if n != x.n() {
                return Err(CliError::Usage(format!(
                    "--n {n} but the matrix has {} columns",
                    x.n()
                )));
            }
        }
        Ok(x)
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })
}

fn to_value<T: Serialize>(v: &T) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Usage(e.to_string()))
}

#[derive(Args, Debug, Serialize)]
pub(crate) struct CertifyArgs {
    #[command(flatten)]
    pub input: MatrixArgs,
    /// Certify this many random positive points instead of one matrix
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

/// One point: the full [`grplus::extremal::CertificateReport`]; CSV holds the
/// linear-inequality slacks. Sweep: a [`grplus::extremal::SweepSummary`].
pub(crate) fn certify(a: &CertifyArgs) -> Result<Outcome, CliError> {
    let tol = a.common.tolerance()?;
    if let Some(samples) = a.samples {
        let n = a.input.require_n()?;
        let summary = certify_sweep(n, samples, a.common.seed, tol, a.common.execution())?;
        return Ok(Outcome {
            report: to_value(&summary)?,
            passed: summary.passed(),
            csv: None,
        });
    }
    let x = a.input.load(a.common.seed, true)?;
    let report = certify_point(&x, tol)?;
    let g = geometric_means(&normalize(&minors(&x))?)?;
    let slacks = check_linear_inequalities(&normalized_logs(&g, tol)?, x.n())?;
    Ok(Outcome {
        report: to_value(&report)?,
        passed: report.passed,
        csv: Some(slacks_csv(&slacks)),
    })
}

#[derive(Args, Debug, Serialize)]
pub(crate) struct MinimizeArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    /// Simplex iterations per restart
    #[arg(long, default_value_t = 40_000)]
    pub max_iters: usize,
    /// Largest accepted |best_E − s_d/s_1|
    #[arg(long, default_value_t = 1e-5)]
    pub gap_tol: f64,
    #[command(flatten)]
    pub common: Common,
}

/// Report: the [`grplus::optimizer::OptimizationResult`] plus `gap_tol` and
/// `passed`; CSV: one row per restart.
pub(crate) fn minimize(a: &MinimizeArgs) -> Result<Outcome, CliError> {
    let cfg = OptimizerConfig {
        restarts: a.restarts,
        max_iters: a.max_iters,
        seed: a.common.seed,
        ..OptimizerConfig::new(a.n)
    };
    let res = minimize_with(&cfg, a.common.execution())?;
    let passed = res.gap_to_theory.abs() <= a.gap_tol;
    let mut csv = String::from("restart,seed,start_E,best_E,iterations\n");
    for r in &res.restarts {
        let _ = writeln!(
            csv,
            "{},{},{:e},{:e},{}",
            r.index, r.seed, r.start_e, r.best_e, r.iterations
        );
    }
    let mut report = to_value(&res)?;
    report["gap_tol"] = json!(a.gap_tol);
    report["passed"] = json!(passed);
    Ok(Outcome {
        report,
        passed,
        csv: Some(csv),
    })
}

#[derive(Args, Debug, Serialize)]
pub(crate) struct ReconstructArgs {
    /// Outer-orbit data as a JSON map "i,j" -> value; otherwise it is
    /// extracted from the matrix
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[command(flatten)]
    pub input: MatrixArgs,
    #[command(flatten)]
    pub common: Common,
}

/// Rebuilds the point and checks it reproduces the data up to a positive
/// scalar (and the whole Plücker vector when a matrix was given).
pub(crate) fn reconstruct(a: &ReconstructArgs) -> Result<Outcome, CliError> {
    let tol = a.common.tolerance()?;
    let (data, original) = match &a.data {
        Some(path) => (read_json::<OuterOrbitData>(path)?, None),
        None => {
            let x = a.input.load(a.common.seed, true)?;
            (extract_outer(&minors(&x))?, Some(minors(&x)))
        }
    };
    let x = rebuild(&data, tol)?;
    let got = extract_outer(&minors(&x))?;
    let (first, v0) = data
        .values()
        .iter()
        .next()
        .map(|(p, &v)| (*p, v))
        .expect("outer data is never empty");
    let lambda = got.values()[&first] / v0;
    let max_relative_deviation = data
        .values()
        .iter()
        .map(|(p, &v)| (got.values()[p] - lambda * v).abs() / (lambda * v))
        .fold(0.0f64, f64::max);
    let outer_ok = max_relative_deviation <= tol.rel;
    let full_ok = match &original {
        Some(p) => Some(p.proportional(&minors(&x), tol)?),
        None => None,
    };
    let passed = outer_ok && full_ok.unwrap_or(true);
    let report = json!({
        "n": data.n(),
        "tolerance": tol,
        "outer_data": data,
        "matrix": x,
        "scale": lambda,
        "max_relative_deviation": max_relative_deviation,
        "proportional_to_input": full_ok,
        "passed": passed,
    });
    Ok(Outcome {
        report,
        passed,
        csv: None,
    })
}

#[derive(Args, Debug, Serialize)]
pub(crate) struct QfamilyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.02)]
    pub q: f64,
    #[command(flatten)]
    pub common: Common,
}

/// Report: [`grplus::qfamily::QFamilyReport`]; CSV: `E(C^q)` for `q` in
/// `[0.9, 1.1]` with step `0.001`.
pub(crate) fn qfamily(a: &QfamilyArgs) -> Result<Outcome, CliError> {
    let report = verify_nonuniqueness(a.n, a.q, a.common.tolerance()?)?;
    let grid: Vec<f64> = (0..=200).map(|i| 0.9 + 0.001 * i as f64).collect();
    Ok(Outcome {
        report: to_value(&report)?,
        passed: report.passed,
        csv: Some(plateau_csv(a.n, &grid)?),
    })
}

#[derive(Args, Debug, Serialize)]
pub(crate) struct BreduceArgs {
    /// `random` draws uniform entries in [−1, 1], not a positive point
    #[command(flatten)]
    pub input: MatrixArgs,
    #[command(flatten)]
    pub common: Common,
}

/// Compares the sorted minors of the reduced matrix with the sorted
/// `|Δ_{i,j}|` of the input.
pub(crate) fn breduce(a: &BreduceArgs) -> Result<Outcome, CliError> {
    let tol = a.common.tolerance()?;
    let x = a.input.load(a.common.seed, false)?;
    let y = b_reduction(&x)?;
    let mut got = minors(&y).entries().to_vec();
    let mut want: Vec<f64> = minors(&x).entries().iter().map(|v| v.abs()).collect();
    got.sort_by(f64::total_cmp);
    want.sort_by(f64::total_cmp);
    let deviation = got
        .iter()
        .zip(&want)
        .map(|(g, w)| (g - w).abs())
        .fold(0.0f64, f64::max);
    let scale = want.last().copied().unwrap_or(1.0);
    let all_positive = got[0] > 0.0;
    let b = loss_b(&x)?;
    let e = loss_e(&minors(&y))?;
    let passed = all_positive && deviation <= tol.rel * scale + tol.abs && tol.within(b, e, b);
    let report = json!({
        "n": x.n(),
        "tolerance": tol,
        "input": x,
        "output": y,
        "B_input": b,
        "E_output": e,
        "multiset_max_deviation": deviation,
        "all_positive": all_positive,
        "passed": passed,
    });
    Ok(Outcome {
        report,
        passed,
        csv: None,
    })
}

#[derive(Args, Debug, Serialize)]
pub(crate) struct OrbitsArgs {
    /// Point whose geometric means are listed
    #[command(flatten)]
    pub input: MatrixArgs,
    #[command(flatten)]
    pub common: Common,
}

/// Orbit listing plus `D_k` and `a_k` of the normalised point; CSV rows
/// `k,D_k,a_k`.
pub(crate) fn orbits(a: &OrbitsArgs) -> Result<Outcome, CliError> {
    let tol = a.common.tolerance()?;
    let x = a.input.load(a.common.seed, true)?;
    let table = OrbitTable::new(x.n())?;
    let g = geometric_means(&normalize(&minors(&x))?)?;
    let logs = normalized_logs(&g, tol)?;
    let report = json!({
        "n": x.n(),
        "tolerance": tol,
        "orbits": table.listing(),
        "geo_means": g.values(),
        "normalized_logs": logs,
        "passed": true,
    });
    Ok(Outcome {
        report,
        passed: true,
        csv: Some(profile_csv(&g, &logs)?),
    })
}

#[derive(Args, Debug, Serialize)]
pub(crate) struct RelationsArgs {
    /// `random` draws uniform entries in [−1, 1]
    #[command(flatten)]
    pub input: MatrixArgs,
    #[command(flatten)]
    pub common: Common,
}

/// Largest relative residuals of the three-term Plücker relations, their
/// σ-shifts for every `m ∈ [0, n)`, and the uvw identity over column triples.
/// Each must stay below `tol_rel`.
pub(crate) fn relations(a: &RelationsArgs) -> Result<Outcome, CliError> {
    let tol = a.common.tolerance()?;
    let x = a.input.load(a.common.seed, false)?;
    let n = x.n();
    let p = minors(&x);
    let quads = quads(n);
    let mut plucker = 0.0f64;
    let mut shifted = 0.0f64;
    for &q in &quads {
        plucker = plucker.max(p.plucker_relation(q)?.relative());
        for m in 0..n as i64 {
            shifted = shifted.max(shifted_relation(&p, q, m)?.relative());
        }
    }
    let uvw = triples(n)
        .into_iter()
        .map(|[i, j, k]| {
            let (u, v, w) = (x.column(i), x.column(j), x.column(k));
            uvw_residual(u, v, w) / uvw_scale(u, v, w)
        })
        .fold(0.0f64, f64::max);
    let passed = [plucker, shifted, uvw].iter().all(|&r| r <= tol.rel);
    let report = json!({
        "n": n,
        "tolerance": tol,
        "quads": quads.len(),
        "plucker_max_relative": plucker,
        "shifted_max_relative": shifted,
        "uvw_max_relative": uvw,
        "passed": passed,
    });
    Ok(Outcome {
        report,
        passed,
        csv: None,
    })
}
