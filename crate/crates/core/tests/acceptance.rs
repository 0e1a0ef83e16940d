//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p grplus-core --test acceptance`.

use std::time::{Duration, Instant};

use grplus::cyclic::{geometric_means, normalize, shifted_relation};
use grplus::exec::Execution;
use grplus::extremal::{
    b_reduction, check_geomean_inequalities, check_linear_inequalities, cyclic_matrix, loss_e,
    normalized_logs, operator_s, optimal_loss, SineTable,
};
use grplus::optimizer::{minimize, sample_positive, to_matrix, OptimizerConfig};
use grplus::plucker::{minors, quads, uvw_residual, uvw_scale, PointMatrix, Tolerance};
use grplus::qfamily::{admissible_interval, q_transform, verify_nonuniqueness};
use grplus::reconstruct::{extract_outer, reconstruct};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> PointMatrix {
    PointMatrix::new(
        (0..n)
            .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
            .collect(),
    )
    .unwrap()
}

fn positive_minors(n: usize, seed: u64) -> grplus::PlueckerVector {
    minors(&to_matrix(&sample_positive(n, seed).unwrap()).unwrap())
}

fn closed_form_optimum() -> Outcome {
    let mut worst = 0.0f64;
    for n in 3..=32 {
        let e = loss_e(&minors(&cyclic_matrix(n).unwrap())).unwrap();
        let expected = (((n / 2) as f64) * std::f64::consts::PI / n as f64).sin()
            / (std::f64::consts::PI / n as f64).sin();
        worst = worst.max((e - expected).abs() / expected);
    }
    #[allow(clippy::approx_constant)]
    let spot = [(4, 1.414_213_6), (5, 1.618_034_0), (6, 2.0)];
    let spots_ok = spot.iter().all(|&(n, v)| {
        let e = loss_e(&minors(&cyclic_matrix(n).unwrap())).unwrap();
        (e - v).abs() < 5e-8
    });
    outcome(
        worst <= 1e-12 && spots_ok,
        format!("max relative error {worst:.2e}, spot values ok = {spots_ok}"),
    )
}

fn global_lower_bound() -> Outcome {
    let mut ok = true;
    let mut worst_margin = f64::INFINITY;
    for n in 4..=10 {
        let bound = optimal_loss(n);
        let min_e = Execution::default().reduce(
            10_000,
            f64::INFINITY,
            |i| loss_e(&positive_minors(n, 1_000_000 * n as u64 + i as u64)).unwrap(),
            f64::min,
        );
        ok &= min_e >= bound - 1e-9;
        worst_margin = worst_margin.min(min_e - bound);
    }
    outcome(
        ok,
        format!("min over 7e4 points of E − s_d/s_1 = {worst_margin:.3e}"),
    )
}

fn optimizer_convergence() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for n in 4..=8 {
        let cfg = OptimizerConfig {
            seed: 2024,
            ..OptimizerConfig::new(n)
        };
        let res = minimize(&cfg).unwrap();
        ok &= res.gap_to_theory.abs() <= 1e-5;
        details.push(format!("n={n}: gap {:.1e}", res.gap_to_theory));
        if n == 5 {
            let got = normalize(&minors(&res.best_matrix)).unwrap();
            let c = minors(&cyclic_matrix(5).unwrap());
            let prop = c
                .proportional(&got, Tolerance::new(1e-4, 0.0).unwrap())
                .unwrap();
            ok &= prop;
            details.push(format!("n=5 proportional to C: {prop}"));
        }
    }
    outcome(ok, details.join(", "))
}

fn inequality_suites() -> Outcome {
    let floor = -1e-10;
    let mut min_geo = f64::INFINITY;
    let mut min_lin = f64::INFINITY;
    let mut min_a = f64::INFINITY;
    for n in 5..=10 {
        let per_point = Execution::default().map(1000, |i| {
            let p = normalize(&positive_minors(n, 7_000_000 + 1000 * n as u64 + i as u64)).unwrap();
            let g = geometric_means(&p).unwrap();
            let a = normalized_logs(&g, Tolerance::default()).unwrap();
            let geo = check_geomean_inequalities(&g)
                .iter()
                .map(|s| s.slack)
                .fold(f64::INFINITY, f64::min);
            let lin = check_linear_inequalities(&a, n)
                .unwrap()
                .iter()
                .map(|s| s.slack)
                .fold(f64::INFINITY, f64::min);
            (geo, lin, a.iter().copied().fold(f64::INFINITY, f64::min))
        });
        for (g, l, a) in per_point {
            min_geo = min_geo.min(g);
            min_lin = min_lin.min(l);
            min_a = min_a.min(a);
        }
    }
    let mut worst_at_c = 0.0f64;
    for n in 5..=10 {
        let g = geometric_means(&minors(&cyclic_matrix(n).unwrap())).unwrap();
        for s in check_geomean_inequalities(&g) {
            worst_at_c = worst_at_c.max(s.slack.abs() / s.scale);
        }
        let a = normalized_logs(&g, Tolerance::default()).unwrap();
        for s in check_linear_inequalities(&a, n).unwrap() {
            worst_at_c = worst_at_c.max(s.slack.abs());
        }
    }
    let ok = min_geo >= floor && min_lin >= floor && min_a >= floor && worst_at_c <= 1e-12;
    outcome(
        ok,
        format!(
            "min geomean slack {min_geo:.2e}, min linear slack {min_lin:.2e}, min a_k {min_a:.2e}, max |slack| at C {worst_at_c:.1e}"
        ),
    )
}

fn identities() -> Outcome {
    let worst_rel = Execution::default().reduce(
        1000,
        0.0,
        |i| {
            let mut rng = ChaCha8Rng::seed_from_u64(5_000 + i as u64);
            let n = 4 + i % 5;
            let p = minors(&random_matrix(&mut rng, n));
            let mut worst = 0.0f64;
            for q in quads(n) {
                worst = worst.max(p.plucker_relation(q).unwrap().relative());
                for m in 0..n as i64 {
                    worst = worst.max(shifted_relation(&p, q, m).unwrap().relative());
                }
            }
            worst
        },
        f64::max,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst_uvw = 0.0f64;
    for _ in 0..1000 {
        let mut v = || [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let (a, b, c) = (v(), v(), v());
        worst_uvw = worst_uvw.max(uvw_residual(a, b, c) / uvw_scale(a, b, c));
    }
    outcome(
        worst_rel <= 1e-12 && worst_uvw <= 1e-12,
        format!("max relative relation residual {worst_rel:.2e}, max relative uvw residual {worst_uvw:.2e}"),
    )
}

fn reconstruction_roundtrip() -> Outcome {
    let tol = Tolerance::new(1e-9, 0.0).unwrap();
    let mut failures = 0;
    for n in (3..=15).step_by(2) {
        failures += Execution::default()
            .map(100, |i| {
                let p = positive_minors(n, 9_000_000 + 1000 * n as u64 + i as u64);
                let x = reconstruct(&extract_outer(&p).unwrap(), Tolerance::default()).unwrap();
                usize::from(!p.proportional(&minors(&x), tol).unwrap())
            })
            .into_iter()
            .sum::<usize>();
    }
    outcome(
        failures == 0,
        format!("{failures} of 700 roundtrips failed"),
    )
}

fn nonuniqueness_family() -> Outcome {
    let strict = Tolerance::new(1e-12, 0.0).unwrap();
    let mut ok = true;
    let mut details = Vec::new();
    for n in [6usize, 10] {
        let (lo, hi) = admissible_interval(n).unwrap();
        let c = minors(&cyclic_matrix(n).unwrap());
        let target = optimal_loss(n);
        let mut checked = Vec::new();
        for q in [0.95, 0.98, 1.02, 1.05] {
            let cq = minors(&q_transform(&cyclic_matrix(n).unwrap(), q).unwrap());
            ok &= !c.proportional(&cq, strict).unwrap();
            if lo < q && q < hi {
                let r = verify_nonuniqueness(n, q, strict).unwrap();
                ok &= (r.e_cq - target).abs() <= 1e-12 * target && r.passed && !r.proportional_to_c;
                checked.push(q);
            }
        }
        details.push(format!(
            "n={n}: interval ({lo:.4}, {hi:.4}), equal loss checked at {checked:?}"
        ));
    }
    outcome(ok, details.join("; "))
}

fn b_reduction_oracle() -> Outcome {
    let results = Execution::default().map(1000, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(11_000 + i as u64);
        let n = 3 + i % 8;
        let x = loop {
            let x = random_matrix(&mut rng, n);
            if b_reduction(&x).is_ok() {
                break x;
            }
        };
        let y = b_reduction(&x).unwrap();
        let mut got = minors(&y).entries().to_vec();
        let mut want: Vec<f64> = minors(&x).entries().iter().map(|v| v.abs()).collect();
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        let dev = got
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        (dev, got[0] > 0.0)
    });
    let max_dev = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let all_positive = results.iter().all(|r| r.1);
    outcome(
        max_dev <= 1e-12 && all_positive,
        format!("max multiset deviation {max_dev:.1e}, all positive = {all_positive}"),
    )
}

fn s_contraction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let tol = Tolerance::default();
    let mut ok = true;
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let n = 4 + i % 13;
        let ratio = SineTable::new(n).unwrap().max_q();
        let mut a: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        a[0] = 0.0;
        a[n - 2] = 0.0;
        let norm = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let start = norm(&a);
        let mut cur = a;
        for m in 1..=10 {
            cur = operator_s(&cur, n, tol).unwrap();
            let bound = ratio.powi(m) * start;
            ok &= norm(&cur) <= bound * (1.0 + 1e-12);
            if bound > 0.0 {
                worst = worst.max(norm(&cur) / bound);
            }
        }
    }
    outcome(ok, format!("max ‖S^m a‖ / (q_max^m ‖a‖) = {worst:.4}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "AC1 closed-form optimum E(C) = s_d/s_1, n in [3,32]",
            Duration::from_secs(1),
            closed_form_optimum,
        ),
        (
            "AC2 global lower bound over 1e4 random points, n in [4,10]",
            Duration::from_secs(30),
            global_lower_bound,
        ),
        (
            "AC3 optimizer reaches s_d/s_1 within 1e-5, n in [4,8]",
            Duration::from_secs(60),
            optimizer_convergence,
        ),
        (
            "AC4 geomean / linear / a_k inequality suites",
            Duration::from_secs(60),
            inequality_suites,
        ),
        (
            "AC5 Plücker, shifted and uvw identities",
            Duration::from_secs(30),
            identities,
        ),
        (
            "AC6 outer-orbit reconstruction roundtrip, odd n <= 15",
            Duration::from_secs(10),
            reconstruction_roundtrip,
        ),
        (
            "AC7 C^q non-uniqueness family, n in {6,10}",
            Duration::from_secs(1),
            nonuniqueness_family,
        ),
        (
            "AC8 B-reduction multiset oracle",
            Duration::from_secs(10),
            b_reduction_oracle,
        ),
        (
            "AC9 operator S contraction",
            Duration::from_secs(5),
            s_contraction,
        ),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let ok = out.ok && elapsed <= limit;
        failed += usize::from(!ok);
        println!(
            "[{}] {name} ({:.2}s, limit {}s): {}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs(),
            out.detail
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
