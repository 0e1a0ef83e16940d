//! Recovery of a point of `Gr>0(2,n)`, `n` odd, from its coordinates on the
//! outer orbits `O_1 ∪ O_d`.
//!
//! The columns are visited in the order `c(k) = σ^{kd}·1`, which covers `[n]`
//! because `gcd(d, n) = 1`. Two seed columns are fixed and each further column
//! follows from the previous two by
//!
//! ```text
//! x_{c(k)} = (Δ_{c(k−2),c(k)} x_{c(k−1)} − Δ_{c(k−1),c(k)} x_{c(k−2)}) / Δ_{c(k−2),c(k−1)}
//! ```
//!
//! where every coordinate involved lies, up to transposition, on `O_1` or `O_d`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cyclic::{half, OrbitTable};
use crate::error::{Error, Result};
use crate::plucker::{PairIndex, PlueckerVector, PointMatrix, Tolerance, Vec2};

/// Positive Plücker coordinates restricted to the outer orbits, `n` odd.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>", into = "BTreeMap<String, f64>")]
pub struct OuterOrbitData {
    n: usize,
    values: BTreeMap<PairIndex, f64>,
}

impl OuterOrbitData {
    /// Validates that the keys are exactly the outer-orbit pairs of an odd `n`
    /// and that every value is positive.
    pub fn new(n: usize, values: BTreeMap<PairIndex, f64>) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewColumns(n));
        }
        if n.is_multiple_of(2) {
            return Err(Error::EvenN(n));
        }
        let outer = OrbitTable::new(n)?.outer();
        if let Some(p) = values.keys().find(|p| !outer.contains(p)) {
            return Err(Error::NotOuter { i: p.i, j: p.j });
        }
        if let Some(p) = outer.iter().find(|p| !values.contains_key(p)) {
            return Err(Error::MissingPair { i: p.i, j: p.j });
        }
        if let Some((p, &v)) = values.iter().find(|(_, &v)| !(v > 0.0 && v.is_finite())) {
            return Err(Error::NotPositive {
                i: p.i,
                j: p.j,
                value: v,
            });
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &BTreeMap<PairIndex, f64> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Signed `Δ_{a,b}` for an outer pair given in either order.
    pub fn lookup(&self, a: usize, b: usize) -> Result<f64> {
        let p = PairIndex::sorted(a, b, self.n)?;
        let v = *self
            .values
            .get(&p)
            .ok_or(Error::NotOuter { i: p.i, j: p.j })?;
        Ok(if a < b { v } else { -v })
    }
}

impl TryFrom<BTreeMap<String, f64>> for OuterOrbitData {
    type Error = Error;

    fn try_from(raw: BTreeMap<String, f64>) -> Result<Self> {
        let values = raw
            .into_iter()
            .map(|(k, v)| Ok((k.parse::<PairIndex>()?, v)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let n = values.keys().map(|p| p.j).max().unwrap_or(0);
        Self::new(n, values)
    }
}

impl From<OuterOrbitData> for BTreeMap<String, f64> {
    fn from(d: OuterOrbitData) -> Self {
        d.values
            .into_iter()
            .map(|(p, v)| (p.to_string(), v))
            .collect()
    }
}

/// The visiting order `c(0..n−1)`, `c(k) = σ^{kd}·1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CSequence {
    pub n: usize,
    pub c: Vec<usize>,
}

pub fn c_sequence(n: usize) -> Result<CSequence> {
    if n < 3 {
        return Err(Error::TooFewColumns(n));
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenN(n));
    }
    let d = half(n);
    Ok(CSequence {
        n,
        c: (0..n).map(|k| (k * d) % n + 1).collect(),
    })
}

/// Restricts a positive Plücker vector to the outer orbits.
pub fn extract_outer(p: &PlueckerVector) -> Result<OuterOrbitData> {
    let n = p.n();
    if n.is_multiple_of(2) {
        return Err(Error::EvenN(n));
    }
    p.ensure_positive()?;
    let outer: BTreeSet<PairIndex> = OrbitTable::new(n)?.outer();
    OuterOrbitData::new(n, outer.into_iter().map(|q| (q, p.at(q))).collect())
}

/// Rebuilds a spanning matrix whose minors equal `data` on the outer orbits.
///
/// The seeds are `x_{c(0)} = (1, 0)` and `x_{c(1)} = (0, Δ_{c(0),c(1)})`, so the
/// seed wedge matches the data and the minors are reproduced exactly rather
/// than up to scale.
pub fn reconstruct(data: &OuterOrbitData, tol: Tolerance) -> Result<PointMatrix> {
    let n = data.n();
    let c = c_sequence(n)?.c;
    let mut cols: Vec<Option<Vec2>> = vec![None; n];
    cols[c[0] - 1] = Some([1.0, 0.0]);
    cols[c[1] - 1] = Some([0.0, data.lookup(c[0], c[1])?]);
    for k in 2..n {
        let (a, b, t) = (c[k - 2], c[k - 1], c[k]);
        let denom = data.lookup(a, b)?;
        if denom.abs() <= tol.abs {
            return Err(Error::Degenerate {
                i: a.min(b),
                j: a.max(b),
                value: denom,
            });
        }
        let d_at = data.lookup(a, t)?;
        let d_bt = data.lookup(b, t)?;
        let xa = cols[a - 1].expect("visited");
        let xb = cols[b - 1].expect("visited");
        cols[t - 1] = Some([
            (d_at * xb[0] - d_bt * xa[0]) / denom,
            (d_at * xb[1] - d_bt * xa[1]) / denom,
        ]);
    }
    PointMatrix::new(
        cols.into_iter()
            .map(|c| c.expect("c visits every column"))
            .collect(),
    )
}
