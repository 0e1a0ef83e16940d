//! The family `C^q` of distinct points with `E(C^q) = E(C)` when `n ≡ 2 (mod 4)`.
//!
//! Scaling column `i` of `C` by `q^{(−1)^i}` multiplies `Δ_{i,j}` by
//! `q^{(−1)^i + (−1)^j}`. For even `n` the exponent is `0` on odd-`k` orbits
//! and `±2` on even-`k` orbits. When `n ≡ 2 (mod 4)`, `d` is odd, so the outer
//! orbits (which carry `max Δ = s_d` and `min Δ = s_1`) are untouched. The loss
//! then stays put for as long as the rescaled inner entries remain strictly
//! inside `(s_1, s_d)`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cyclic::{half, OrbitTable};
use crate::error::{Error, Result};
use crate::extremal::{cyclic_matrix, loss_e, sine};
use crate::plucker::{minors, PointMatrix, Tolerance};

/// Multiplies odd-numbered columns by `1/q` and even-numbered ones by `q`.
pub fn q_transform(x: &PointMatrix, q: f64) -> Result<PointMatrix> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::BadQ(q));
    }
    let factors: Vec<f64> = (1..=x.n())
        .map(|i| if i % 2 == 1 { 1.0 / q } else { q })
        .collect();
    x.scale_columns(&factors)
}

fn check_two_mod_four(n: usize) -> Result<()> {
    if n % 4 == 2 {
        Ok(())
    } else {
        Err(Error::NotTwoModFour(n))
    }
}

/// The open interval `(1/q*, q*)` of `q` on which every even-orbit coordinate
/// `q^{±2} s_k` of `C^q` stays strictly inside `(s_1, s_d)`.
///
/// Each entry is monotone in `q`, so the binding constraint is
/// `q*² = min over even k of min(s_d / s_k, s_k / s_1)`.
pub fn admissible_interval(n: usize) -> Result<(f64, f64)> {
    check_two_mod_four(n)?;
    let d = half(n);
    let (s1, sd) = (sine(1, n), sine(d, n));
    let rho = (2..n)
        .step_by(2)
        .map(|k| {
            let sk = sine(k, n);
            (sd / sk).min(sk / s1)
        })
        .fold(f64::INFINITY, f64::min);
    let hi = rho.sqrt();
    Ok((1.0 / hi, hi))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QFamilyReport {
    pub n: usize,
    pub q: f64,
    pub tolerance: Tolerance,
    pub admissible_interval: (f64, f64),
    pub in_admissible_interval: bool,
    #[serde(rename = "E_Cq")]
    pub e_cq: f64,
    #[serde(rename = "E_C")]
    pub e_c: f64,
    pub equal_loss: bool,
    pub proportional_to_c: bool,
    /// Largest `|Δ^q − Δ|` over odd-`k` orbits.
    pub odd_orbit_max_change: f64,
    /// Whether `Δ^q / Δ = q^{2(−1)^i}` on every even-`k` orbit, within `tol.rel`.
    pub even_orbit_scale_check: bool,
    pub passed: bool,
}

/// Evaluates `C^q` against `C` for `n ≡ 2 (mod 4)`.
///
/// Inside the admissible interval the loss must match; for `q ≠ 1` the two
/// Plücker vectors must not be proportional. Outside the interval the loss
/// comparison is reported but not required.
pub fn verify_nonuniqueness(n: usize, q: f64, tol: Tolerance) -> Result<QFamilyReport> {
    check_two_mod_four(n)?;
    let c = cyclic_matrix(n)?;
    let cq = q_transform(&c, q)?;
    let p = minors(&c);
    let pq = minors(&cq);
    let e_c = loss_e(&p)?;
    let e_cq = loss_e(&pq)?;
    let interval = admissible_interval(n)?;
    let in_interval = interval.0 < q && q < interval.1;
    let equal_loss = tol.within(e_cq, e_c, e_c);
    let proportional_to_c = p.proportional(&pq, tol)?;

    let table = OrbitTable::new(n)?;
    let mut odd_orbit_max_change = 0.0f64;
    let mut even_orbit_scale_check = true;
    for k in 1..=table.d {
        for pair in table.distinct(k) {
            let (before, after) = (p.at(pair), pq.at(pair));
            if k % 2 == 1 {
                odd_orbit_max_change = odd_orbit_max_change.max((after - before).abs());
            } else {
                let expected = if pair.i % 2 == 1 {
                    q.powi(-2)
                } else {
                    q.powi(2)
                };
                even_orbit_scale_check &=
                    Tolerance::rel(tol.rel).within(after / before, expected, expected);
            }
        }
    }

    let passed = even_orbit_scale_check
        && odd_orbit_max_change <= tol.rel * e_c.max(1.0) + tol.abs
        && (!in_interval || equal_loss)
        && (q == 1.0 || !proportional_to_c);

    Ok(QFamilyReport {
        n,
        q,
        tolerance: tol,
        admissible_interval: interval,
        in_admissible_interval: in_interval,
        e_cq,
        e_c,
        equal_loss,
        proportional_to_c,
        odd_orbit_max_change,
        even_orbit_scale_check,
        passed,
    })
}

/// CSV rows `q,E` of `E(C^q)` over a grid, for plotting the loss plateau.
pub fn plateau_csv(n: usize, qs: &[f64]) -> Result<String> {
    let c = cyclic_matrix(n)?;
    let mut out = String::from("q,E\n");
    for &q in qs {
        let e = loss_e(&minors(&q_transform(&c, q)?))?;
        let _ = writeln!(out, "{q},{e}");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::orbit_of;

    #[test]
    fn identity_transform() {
        let c = cyclic_matrix(6).unwrap();
        assert_eq!(q_transform(&c, 1.0).unwrap(), c);
        assert_eq!(q_transform(&c, 0.0), Err(Error::BadQ(0.0)));
        assert!(q_transform(&c, -2.0).is_err());
        assert!(q_transform(&c, f64::NAN).is_err());
    }

    #[test]
    fn orbit_parity_scaling() {
        let c = cyclic_matrix(6).unwrap();
        let q = 1.3;
        let p = minors(&c);
        let pq = minors(&q_transform(&c, q).unwrap());
        assert!((pq.get(1, 3) / p.get(1, 3) - q.powi(-2)).abs() < 1e-14);
        assert!((pq.get(2, 4) / p.get(2, 4) - q.powi(2)).abs() < 1e-14);
        for (pair, v) in p.iter() {
            if orbit_of(pair, 6) % 2 == 1 {
                assert!((pq.at(pair) - v).abs() <= 1e-15 * v.abs(), "{pair}");
            }
        }
    }

    #[test]
    fn interval_matches_bisection() {
        for n in [6usize, 10, 14, 18, 22] {
            let (lo, hi) = admissible_interval(n).unwrap();
            assert!((lo * hi - 1.0).abs() < 1e-15);
            // grow q until E(C^q) departs from E(C)
            let e = |q: f64| {
                loss_e(&minors(
                    &q_transform(&cyclic_matrix(n).unwrap(), q).unwrap(),
                ))
                .unwrap()
            };
            let target = e(1.0);
            let (mut a, mut b) = (1.0, 4.0);
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                if (e(m) - target).abs() <= 1e-12 * target {
                    a = m;
                } else {
                    b = m;
                }
            }
            assert!(
                (a - hi).abs() < 1e-9,
                "n = {n}: bisection {a} vs closed form {hi}"
            );
        }
        assert_eq!(admissible_interval(8), Err(Error::NotTwoModFour(8)));
    }

    #[test]
    fn report_examples() {
        let strict = Tolerance::rel(1e-12);
        let r = verify_nonuniqueness(6, 1.02, strict).unwrap();
        assert!(r.passed && r.equal_loss && !r.proportional_to_c && r.in_admissible_interval);
        assert!((r.e_cq - 2.0).abs() < 1e-12);
        let r = verify_nonuniqueness(10, 1.01, strict).unwrap();
        assert!(r.passed && r.equal_loss && !r.proportional_to_c);
        let r = verify_nonuniqueness(6, 1.0, strict).unwrap();
        assert!(r.passed && r.equal_loss && r.proportional_to_c);
        assert_eq!(
            verify_nonuniqueness(8, 1.02, strict),
            Err(Error::NotTwoModFour(8))
        );
        assert_eq!(
            verify_nonuniqueness(5, 1.02, strict),
            Err(Error::NotTwoModFour(5))
        );
    }

    #[test]
    fn outside_interval_is_reported_not_failed() {
        let r = verify_nonuniqueness(10, 1.05, Tolerance::rel(1e-12)).unwrap();
        assert!(!r.in_admissible_interval);
        assert!(!r.equal_loss);
        assert!(r.passed);
    }

    #[test]
    fn plateau_csv_rows() {
        let csv = plateau_csv(6, &[1.0, 1.02]).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "q,E");
        assert_eq!(lines.len(), 3);
    }
}
