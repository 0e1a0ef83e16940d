//! The cyclic matrix `C`, the minor-ratio losses and the inequality chain
//! that bounds them from below.
//!
//! For a positive point the chain is:
//!
//! 1. normalise so that `D_1 = D_{n−1} = s_1`,
//! 2. the geometric means obey `D_k D_{l−j} ≥ D_j D_{l−k} + D_l D_{k−j}`,
//! 3. their normalised logs `a_k = log(D_k / s_k)` obey the linear system
//!    `a_k + a_{l−j} ≥ p (a_j + a_{l−k}) + q (a_l + a_{k−j})`,
//! 4. hence `a_k ≥ 0`, so `E ≥ L = D_d / D_1 ≥ s_d / s_1 = E(C)`.
//!
//! [`certify_point`] evaluates every step numerically and reports the slacks.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::cyclic::{geometric_means, half, normalize, GeoMeans};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::optimizer::{sample_positive, to_matrix};
use crate::plucker::{
    check_increasing, minors, quads, triples, wedge, PlueckerVector, PointMatrix, Tolerance, Vec2,
};

/// `s_k = sin(kπ/n)` for `k ∈ [1, n−1]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SineTable {
    pub n: usize,
    s: Vec<f64>,
}

impl SineTable {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewColumns(n));
        }
        let s = (1..n).map(|k| sine(k, n)).collect();
        Ok(Self { n, s })
    }

    /// `s_k`, `k ∈ [1, n−1]`.
    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        self.s[k - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.s
    }

    /// `q_k = s_{k+1} s_{k−1} / s_k²`, the weight surviving in the
    /// sub-concavity bound `a_k ≥ q_k (a_{k+1} + a_{k−1}) / 2`; `k ∈ [2, n−2]`.
    pub fn q(&self, k: usize) -> f64 {
        self.get(k + 1) * self.get(k - 1) / (self.get(k) * self.get(k))
    }

    /// `max_k q_k`, the ∞-norm of [`operator_s`]. Zero when `n = 3`.
    pub fn max_q(&self) -> f64 {
        (2..self.n.saturating_sub(1))
            .map(|k| self.q(k))
            .fold(0.0, f64::max)
    }
}

/// `sin(kπ/n)`, symmetrised so that `s_k` and `s_{n−k}` are bit-identical.
#[inline]
pub fn sine(k: usize, n: usize) -> f64 {
    let k = k.min(n - k);
    (k as f64 * PI / n as f64).sin()
}

/// The minimum of `E` over `Gr>0(2,n)`: `s_d / s_1` with `d = ⌊n/2⌋`.
pub fn optimal_loss(n: usize) -> f64 {
    sine(half(n), n) / sine(1, n)
}

/// The spanning matrix with columns `(cos((i−1)π/n), sin((i−1)π/n))`.
pub fn cyclic_matrix(n: usize) -> Result<PointMatrix> {
    if n < 3 {
        return Err(Error::TooFewColumns(n));
    }
    PointMatrix::new(
        (0..n)
            .map(|i| {
                let t = i as f64 * PI / n as f64;
                [t.cos(), t.sin()]
            })
            .collect(),
    )
}

/// `max Δ / min Δ` over all ordered pairs.
pub fn loss_e(p: &PlueckerVector) -> Result<f64> {
    p.ensure_positive()?;
    Ok(p.max().1 / p.min().1)
}

/// `D_d / D_1`.
pub fn loss_l(g: &GeoMeans) -> f64 {
    g.get(g.d()) / g.get(1)
}

/// `max |Δ| / min |Δ|`, defined on all of `Gr(2,n)` minus the zero-minor locus.
pub fn loss_b(x: &PointMatrix) -> Result<f64> {
    let p = minors(x);
    let mut hi = 0.0f64;
    let mut lo = f64::INFINITY;
    for (q, v) in p.iter() {
        if v == 0.0 {
            return Err(Error::ZeroMinor { i: q.i, j: q.j });
        }
        hi = hi.max(v.abs());
        lo = lo.min(v.abs());
    }
    Ok(hi / lo)
}

/// Moves every column into the upper half-plane by a sign flip and sorts the
/// columns counterclockwise. The result has positive minors whose multiset is
/// `{|Δ_{i,j}(x)|}`.
pub fn b_reduction(x: &PointMatrix) -> Result<PointMatrix> {
    if let Some((q, _)) = minors(x).iter().find(|&(_, v)| v == 0.0) {
        return Err(Error::Collinear { i: q.i, j: q.j });
    }
    let mut cols: Vec<(usize, Vec2, f64)> = x
        .columns()
        .iter()
        .enumerate()
        .map(|(idx, &c)| {
            let flip = c[1] < 0.0 || (c[1] == 0.0 && c[0] < 0.0);
            let c = if flip { [-c[0], -c[1]] } else { c };
            (idx + 1, c, c[1].atan2(c[0]))
        })
        .collect();
    cols.sort_by(|a, b| a.2.total_cmp(&b.2));
    for w in cols.windows(2) {
        // an angle tie or an order that disagrees with the wedge sign means the
        // two columns are numerically collinear
        if !(wedge(w[0].1, w[1].1) > 0.0) {
            let (i, j) = (w[0].0.min(w[1].0), w[0].0.max(w[1].0));
            return Err(Error::Collinear { i, j });
        }
    }
    let y = PointMatrix::new(cols.into_iter().map(|c| c.1).collect())?;
    if let Some((q, _)) = minors(&y).iter().find(|&(_, v)| !(v > 0.0)) {
        return Err(Error::Collinear { i: q.i, j: q.j });
    }
    Ok(y)
}

/// Convex weights `p + q = 1` of the linear inequality for `(j,k,l)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightPair {
    pub p: f64,
    pub q: f64,
}

/// `p = s_j s_{l−k} / (s_k s_{l−j})`, `q = s_l s_{k−j} / (s_k s_{l−j})` for
/// `j < k < l` in `[n−1]`.
pub fn weights(j: usize, k: usize, l: usize, n: usize) -> Result<WeightPair> {
    if n < 3 {
        return Err(Error::TooFewColumns(n));
    }
    check_increasing(&[j, k, l], n - 1)?;
    let s = |m| sine(m, n);
    let denom = s(k) * s(l - j);
    Ok(WeightPair {
        p: s(j) * s(l - k) / denom,
        q: s(l) * s(k - j) / denom,
    })
}

/// One inequality of a `(j,k,l)` family: `slack ≥ 0` means it holds.
/// `scale` is the largest term magnitude, for relative comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Slack {
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub slack: f64,
    pub scale: f64,
}

impl Slack {
    /// Whether the slack falls below `−(rel·scale + abs)`.
    pub fn violates(&self, tol: Tolerance) -> bool {
        self.slack < -(tol.rel * self.scale + tol.abs)
    }
}

/// Slacks of `D_k D_{l−j} − D_j D_{l−k} − D_l D_{k−j}` for every `j < k < l`.
pub fn check_geomean_inequalities(g: &GeoMeans) -> Vec<Slack> {
    let n = g.n;
    triples(n - 1)
        .into_iter()
        .map(|[j, k, l]| {
            let lhs = g.get(k) * g.get(l - j);
            let t1 = g.get(j) * g.get(l - k);
            let t2 = g.get(l) * g.get(k - j);
            Slack {
                j,
                k,
                l,
                slack: lhs - t1 - t2,
                scale: lhs.max(t1).max(t2),
            }
        })
        .collect()
}

/// `a_k = log(D_k / s_k)`. The means must satisfy `D_1 = D_{n−1} = s_1`
/// within `tol`.
pub fn normalized_logs(g: &GeoMeans, tol: Tolerance) -> Result<Vec<f64>> {
    let n = g.n;
    let s1 = sine(1, n);
    for d in [g.get(1), g.get(n - 1)] {
        if !tol.within(d, s1, s1) {
            return Err(Error::NotNormalized { d1: d, s1 });
        }
    }
    Ok((1..n).map(|k| (g.get(k) / sine(k, n)).ln()).collect())
}

/// Slacks of `a_k + a_{l−j} − p (a_j + a_{l−k}) − q (a_l + a_{k−j})`.
pub fn check_linear_inequalities(a: &[f64], n: usize) -> Result<Vec<Slack>> {
    if n < 3 {
        return Err(Error::TooFewColumns(n));
    }
    if a.len() != n - 1 {
        return Err(Error::DimensionMismatch(a.len(), n - 1));
    }
    let at = |m: usize| a[m - 1];
    triples(n - 1)
        .into_iter()
        .map(|[j, k, l]| {
            let w = weights(j, k, l, n)?;
            let lhs = at(k) + at(l - j);
            let t1 = w.p * (at(j) + at(l - k));
            let t2 = w.q * (at(l) + at(k - j));
            let scale = lhs.abs().max(t1.abs()).max(t2.abs());
            Ok(Slack {
                j,
                k,
                l,
                slack: lhs - t1 - t2,
                scale,
            })
        })
        .collect()
}

/// `y_k = q_k (a_{k+1} + a_{k−1}) / 2` on the interior, zero on the boundary.
/// Requires `a_1 = a_{n−1} = 0` within `tol.abs`.
pub fn operator_s(a: &[f64], n: usize, tol: Tolerance) -> Result<Vec<f64>> {
    let sines = SineTable::new(n)?;
    apply_s(&sines, a, tol)
}

/// [`operator_s`] with a precomputed sine table.
pub fn apply_s(sines: &SineTable, a: &[f64], tol: Tolerance) -> Result<Vec<f64>> {
    let n = sines.n;
    if a.len() != n - 1 {
        return Err(Error::DimensionMismatch(a.len(), n - 1));
    }
    let (first, last) = (a[0], a[n - 2]);
    if first.abs() > tol.abs || last.abs() > tol.abs {
        return Err(Error::Boundary { first, last });
    }
    let mut y = vec![0.0; n - 1];
    for k in 2..=n.saturating_sub(2) {
        y[k - 1] = sines.q(k) * (a[k] + a[k - 2]) / 2.0;
    }
    Ok(y)
}

/// Every check of the inequality chain evaluated at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub n: usize,
    pub tolerance: Tolerance,
    /// Largest Plücker relation residual relative to its largest monomial.
    pub relation_max_residual: f64,
    pub geomean_min_slack: f64,
    pub geomean_violations: Vec<Slack>,
    pub linear_min_slack: f64,
    pub linear_violations: Vec<Slack>,
    /// `D_1..D_{n−1}` after normalisation.
    pub geo_means: Vec<f64>,
    /// `a_1..a_{n−1}`.
    pub normalized_logs: Vec<f64>,
    pub a_min: f64,
    #[serde(rename = "E_value")]
    pub e_value: f64,
    #[serde(rename = "L_value")]
    pub l_value: f64,
    /// `s_d / s_1`.
    pub optimum: f64,
    /// `E − s_d/s_1`.
    pub lower_bound_gap: f64,
    pub passed: bool,
}

/// Runs the whole chain on `x`, whose minors must be positive.
pub fn certify_point(x: &PointMatrix, tol: Tolerance) -> Result<CertificateReport> {
    certify_minors(&minors(x), tol)
}

/// [`certify_point`] for a Plücker vector given directly.
pub fn certify_minors(p: &PlueckerVector, tol: Tolerance) -> Result<CertificateReport> {
    p.ensure_positive()?;
    let n = p.n();
    let relation_max_residual = quads(n)
        .into_iter()
        .map(|q| p.plucker_relation(q).map(|r| r.relative()))
        .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))?;

    let normalized = normalize(p)?;
    let g = geometric_means(&normalized)?;
    let geo = check_geomean_inequalities(&g);
    let a = normalized_logs(&g, tol)?;
    let lin = check_linear_inequalities(&a, n)?;

    let min_slack = |v: &[Slack]| v.iter().map(|s| s.slack).fold(f64::INFINITY, f64::min);
    let geomean_min_slack = min_slack(&geo);
    let linear_min_slack = min_slack(&lin);
    let geomean_violations: Vec<_> = geo.into_iter().filter(|s| s.violates(tol)).collect();
    let linear_violations: Vec<_> = lin.into_iter().filter(|s| s.violates(tol)).collect();
    let a_min = a.iter().copied().fold(f64::INFINITY, f64::min);

    let e_value = loss_e(p)?;
    let l_value = loss_l(&g);
    let optimum = optimal_loss(n);
    let lower_bound_gap = e_value - optimum;
    let slack_floor = tol.rel + tol.abs;
    let passed = geomean_violations.is_empty()
        && linear_violations.is_empty()
        && a_min >= -slack_floor
        && lower_bound_gap >= -(tol.rel * optimum + tol.abs);

    Ok(CertificateReport {
        n,
        tolerance: tol,
        relation_max_residual,
        geomean_min_slack,
        geomean_violations,
        linear_min_slack,
        linear_violations,
        geo_means: g.values().to_vec(),
        normalized_logs: a,
        a_min,
        e_value,
        l_value,
        optimum,
        lower_bound_gap,
        passed,
    })
}

/// Aggregate of [`certify_point`] over many seeded random positive points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub n: usize,
    pub samples: usize,
    pub failures: usize,
    /// Seed of the lowest-indexed failing sample, if any.
    pub first_failure: Option<u64>,
    pub min_lower_bound_gap: f64,
    pub min_geomean_slack: f64,
    pub min_linear_slack: f64,
    pub min_a: f64,
    pub max_relation_residual: f64,
    /// Largest `L − E`; never positive when `L ≤ E` holds.
    pub max_l_minus_e: f64,
}

impl SweepSummary {
    fn empty(n: usize) -> Self {
        Self {
            n,
            samples: 0,
            failures: 0,
            first_failure: None,
            min_lower_bound_gap: f64::INFINITY,
            min_geomean_slack: f64::INFINITY,
            min_linear_slack: f64::INFINITY,
            min_a: f64::INFINITY,
            max_relation_residual: 0.0,
            max_l_minus_e: f64::NEG_INFINITY,
        }
    }

    fn single(r: &CertificateReport, seed: u64) -> Self {
        Self {
            n: r.n,
            samples: 1,
            failures: usize::from(!r.passed),
            first_failure: (!r.passed).then_some(seed),
            min_lower_bound_gap: r.lower_bound_gap,
            min_geomean_slack: r.geomean_min_slack,
            min_linear_slack: r.linear_min_slack,
            min_a: r.a_min,
            max_relation_residual: r.relation_max_residual,
            max_l_minus_e: r.l_value - r.e_value,
        }
    }

    /// Associative, commutative merge.
    pub fn merge(self, other: Self) -> Self {
        let first_failure = match (self.first_failure, other.first_failure) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Self {
            n: self.n,
            samples: self.samples + other.samples,
            failures: self.failures + other.failures,
            first_failure,
            min_lower_bound_gap: self.min_lower_bound_gap.min(other.min_lower_bound_gap),
            min_geomean_slack: self.min_geomean_slack.min(other.min_geomean_slack),
            min_linear_slack: self.min_linear_slack.min(other.min_linear_slack),
            min_a: self.min_a.min(other.min_a),
            max_relation_residual: self.max_relation_residual.max(other.max_relation_residual),
            max_l_minus_e: self.max_l_minus_e.max(other.max_l_minus_e),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Certifies `samples` random positive points drawn with seeds
/// `seed, seed + 1, …` and folds the reports.
pub fn certify_sweep(
    n: usize,
    samples: usize,
    seed: u64,
    tol: Tolerance,
    exec: Execution,
) -> Result<SweepSummary> {
    let reports = exec.try_map(samples, |idx| {
        let s = seed.wrapping_add(idx as u64);
        let p = sample_positive(n, s)?;
        certify_point(&to_matrix(&p)?, tol).map(|r| SweepSummary::single(&r, s))
    })?;
    Ok(reports
        .into_iter()
        .fold(SweepSummary::empty(n), SweepSummary::merge))
}

/// CSV rows `j,k,l,slack`.
pub fn slacks_csv(slacks: &[Slack]) -> String {
    let mut out = String::from("j,k,l,slack\n");
    for s in slacks {
        let _ = writeln!(out, "{},{},{},{:e}", s.j, s.k, s.l, s.slack);
    }
    out
}

/// CSV rows `k,D_k,a_k` for `k ∈ [1, n−1]`. `a` is indexed like the output of
/// [`normalized_logs`].
pub fn profile_csv(g: &GeoMeans, a: &[f64]) -> Result<String> {
    if a.len() != g.values().len() {
        return Err(Error::DimensionMismatch(a.len(), g.values().len()));
    }
    let mut out = String::from("k,D_k,a_k\n");
    for (k, (d, ak)) in g.values().iter().zip(a).enumerate() {
        let _ = writeln!(out, "{},{:e},{:e}", k + 1, d, ak);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::OrbitTable;

    const GOLDEN: f64 = 1.618_033_988_749_895;

    #[test]
    fn cyclic_matrix_columns() {
        let c = cyclic_matrix(4).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [[1.0, 0.0], [h, h], [0.0, 1.0], [-h, h]];
        for (got, want) in c.columns().iter().zip(expect) {
            assert!((got[0] - want[0]).abs() < 1e-15 && (got[1] - want[1]).abs() < 1e-15);
        }
        for n in 3..12 {
            assert_eq!(cyclic_matrix(n).unwrap().column(1), [1.0, 0.0]);
        }
        assert!(cyclic_matrix(2).is_err());
    }

    #[test]
    fn cyclic_minors_are_sines_on_orbits() {
        for n in 3..=16 {
            let p = minors(&cyclic_matrix(n).unwrap());
            let t = OrbitTable::new(n).unwrap();
            for k in 1..n {
                for q in t.orbit(k) {
                    assert!((p.at(*q) - sine(k, n)).abs() < 1e-14, "n={n} k={k} {q}");
                }
            }
        }
        let p4 = minors(&cyclic_matrix(4).unwrap());
        #[allow(clippy::approx_constant)]
        let rounded = 0.707_106_8;
        assert!((p4.get(1, 2) - rounded).abs() < 1e-7);
        assert!((p4.get(1, 3) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn losses_at_cyclic_matrix() {
        let e6 = loss_e(&minors(&cyclic_matrix(6).unwrap())).unwrap();
        assert!((e6 - 2.0).abs() < 1e-14);
        let e5 = loss_e(&minors(&cyclic_matrix(5).unwrap())).unwrap();
        assert!((e5 - GOLDEN).abs() < 1e-14);
        let ones = PlueckerVector::from_entries(4, vec![1.0; 6]).unwrap();
        assert_eq!(loss_e(&ones).unwrap(), 1.0);
        assert_eq!(loss_l(&geometric_means(&ones).unwrap()), 1.0);
        for n in 3..=12 {
            let p = minors(&cyclic_matrix(n).unwrap());
            let l = loss_l(&geometric_means(&p).unwrap());
            assert!((l - loss_e(&p).unwrap()).abs() < 1e-13);
        }
        assert!(loss_e(&ones.scaled(-1.0)).is_err());
    }

    #[test]
    fn loss_b_examples() {
        let c = cyclic_matrix(5).unwrap();
        let mut cols = c.columns().to_vec();
        cols[1] = [-cols[1][0], -cols[1][1]];
        let flipped = PointMatrix::new(cols).unwrap();
        assert!((loss_b(&flipped).unwrap() - GOLDEN).abs() < 1e-14);
        let x = PointMatrix::new(vec![[1.0, 0.0], [0.0, 1.0], [-1.0, 1.0]]).unwrap();
        assert_eq!(loss_b(&x).unwrap(), 1.0);
        let y = PointMatrix::new(vec![[1.0, 0.0], [2.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(loss_b(&y), Err(Error::ZeroMinor { i: 1, j: 2 }));
    }

    #[test]
    fn b_reduction_examples() {
        let x = PointMatrix::new(vec![[1.0, 0.0], [0.0, -1.0], [-1.0, -1.0]]).unwrap();
        let y = b_reduction(&x).unwrap();
        assert_eq!(y.columns(), &[[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        assert_eq!(minors(&y).entries(), &[1.0, 1.0, 1.0]);

        let c = cyclic_matrix(7).unwrap();
        assert_eq!(b_reduction(&c).unwrap(), c);

        let bad = PointMatrix::new(vec![[1.0, 1.0], [-2.0, -2.0], [0.0, 1.0]]).unwrap();
        assert_eq!(b_reduction(&bad), Err(Error::Collinear { i: 1, j: 2 }));
    }

    #[test]
    fn weights_examples() {
        let w = weights(1, 2, 3, 4).unwrap();
        assert!((w.p - 0.5).abs() < 1e-15 && (w.q - 0.5).abs() < 1e-15);
        for n in 4..=14 {
            let s = SineTable::new(n).unwrap();
            for [j, k, l] in triples(n - 1) {
                let w = weights(j, k, l, n).unwrap();
                assert!(w.p > 0.0 && w.q > 0.0);
                assert!((w.p + w.q - 1.0).abs() < 1e-12);
                if j == 1 && l == k + 1 {
                    assert!((w.q - s.q(k)).abs() < 1e-14);
                    assert!(w.q < 1.0);
                }
            }
        }
        assert!(weights(2, 2, 3, 5).is_err());
        assert!(weights(1, 2, 5, 5).is_err());
    }

    #[test]
    fn sine_table_shape() {
        for n in 3..=20 {
            let s = SineTable::new(n).unwrap();
            let d = half(n);
            for k in 1..n {
                assert_eq!(s.get(k), s.get(n - k));
            }
            for k in 1..d {
                assert!(s.get(k) < s.get(k + 1));
            }
        }
    }

    #[test]
    fn equality_at_cyclic_matrix() {
        for n in 4..=16 {
            let p = minors(&cyclic_matrix(n).unwrap());
            let g = geometric_means(&p).unwrap();
            for s in check_geomean_inequalities(&g) {
                assert!(s.slack.abs() <= 1e-12 * s.scale, "n={n} {s:?}");
            }
            let a = normalized_logs(&g, Tolerance::default()).unwrap();
            assert!(a.iter().all(|x| x.abs() < 1e-12));
            for s in check_linear_inequalities(&a, n).unwrap() {
                assert!(s.slack.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn collapsed_inequality_for_five() {
        // n = 5 has a single independent inequality D_2² ≥ D_1² + D_1 D_2
        let x = PointMatrix::new(vec![
            [1.0, 0.05],
            [0.9, 0.7],
            [0.2, 1.1],
            [-0.5, 0.9],
            [-1.3, 0.2],
        ])
        .unwrap();
        let g = geometric_means(&minors(&x)).unwrap();
        let (d1, d2) = (g.get(1), g.get(2));
        assert!(d2 * d2 >= d1 * d1 + d1 * d2);
        let slacks = check_geomean_inequalities(&g);
        let s123 = slacks
            .iter()
            .find(|s| (s.j, s.k, s.l) == (1, 2, 3))
            .unwrap();
        assert!((s123.slack - (d2 * d2 - d1 * d1 - d1 * d2)).abs() < 1e-14);
    }

    #[test]
    fn normalized_logs_guard_and_synthetic() {
        let n = 6;
        let s: Vec<f64> = (1..n).map(|k| sine(k, n)).collect();
        let mut d = s.clone();
        d[2] *= 2.0;
        let a =
            normalized_logs(&GeoMeans::from_values(n, d).unwrap(), Tolerance::default()).unwrap();
        assert!((a[2] - 2f64.ln()).abs() < 1e-15);
        let unnormalized = GeoMeans::from_values(n, s.iter().map(|x| 2.0 * x).collect()).unwrap();
        assert!(matches!(
            normalized_logs(&unnormalized, Tolerance::default()),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn linear_inequalities_homogeneous() {
        let slacks = check_linear_inequalities(&[0.0; 6], 7).unwrap();
        assert_eq!(slacks.len(), 20);
        assert!(slacks.iter().all(|s| s.slack == 0.0));
        assert!(check_linear_inequalities(&[0.0; 5], 7).is_err());
    }

    #[test]
    fn operator_s_examples() {
        let tol = Tolerance::default();
        let y = operator_s(&[0.0, 1.0, 1.0, 0.0], 5, tol).unwrap();
        let half_golden_conj = 0.309_017_0;
        assert_eq!(y[0], 0.0);
        assert_eq!(y[3], 0.0);
        assert!((y[1] - half_golden_conj).abs() < 1e-7);
        assert!((y[2] - half_golden_conj).abs() < 1e-7);
        assert_eq!(operator_s(&[0.0; 7], 8, tol).unwrap(), vec![0.0; 7]);
        assert!(matches!(
            operator_s(&[1.0, 0.0, 0.0, 0.0], 5, tol),
            Err(Error::Boundary { .. })
        ));
        assert_eq!(operator_s(&[0.0, 0.0], 3, tol).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn certificate_at_cyclic_matrix() {
        for n in 3..=12 {
            let r = certify_point(&cyclic_matrix(n).unwrap(), Tolerance::default()).unwrap();
            assert!(r.passed, "{r:?}");
            assert!(r.lower_bound_gap.abs() < 1e-12);
        }
    }

    #[test]
    fn certificate_rejects_negative_minor() {
        let x = PointMatrix::new(vec![[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]).unwrap();
        assert_eq!(
            certify_point(&x, Tolerance::default()),
            Err(Error::NotPositive {
                i: 2,
                j: 3,
                value: -1.0
            })
        );
    }

    #[test]
    fn sweep_is_execution_independent() {
        let tol = Tolerance::default();
        let a = certify_sweep(7, 50, 9, tol, Execution::Sequential).unwrap();
        let b = certify_sweep(7, 50, 9, tol, Execution::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 50);
        assert!(a.passed() && a.min_lower_bound_gap > 0.0 && a.max_l_minus_e <= 1e-12);
    }

    #[test]
    fn csv_rows() {
        let s = [Slack {
            j: 1,
            k: 2,
            l: 3,
            slack: 0.5,
            scale: 1.0,
        }];
        assert_eq!(slacks_csv(&s), "j,k,l,slack\n1,2,3,5e-1\n");
    }
}
