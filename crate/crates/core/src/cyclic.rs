//! The right cyclic shift `σ` on ordered tuples and the orbits it cuts out of
//! the Plücker index set.
//!
//! `σ` adds one to every entry of an ordered tuple; when the last entry is
//! `n` it wraps to `1` and moves to the front so the tuple stays ordered. The
//! pair orbits `O_k = {σ^m(1, k+1)}` are kept as multisets in shift order,
//! since geometric means average over the multiset.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::plucker::{check_increasing, pair_count, PairIndex, PlueckerVector, Relation};

/// `d = ⌊n/2⌋`, the number of distinct orbits.
#[inline]
pub fn half(n: usize) -> usize {
    n / 2
}

/// One application of `σ` to a strictly increasing tuple of `[n]`.
pub fn sigma_tuple(t: &[usize], n: usize) -> Result<Vec<usize>> {
    check_increasing(t, n)?;
    Ok(sigma_unchecked(t, n))
}

fn sigma_unchecked(t: &[usize], n: usize) -> Vec<usize> {
    let last = *t.last().expect("non-empty tuple");
    if last < n {
        t.iter().map(|x| x + 1).collect()
    } else {
        std::iter::once(1)
            .chain(t[..t.len() - 1].iter().map(|x| x + 1))
            .collect()
    }
}

/// `σ^m` applied to a tuple; `m` may be negative.
pub fn sigma_power(t: &[usize], m: i64, n: usize) -> Result<Vec<usize>> {
    check_increasing(t, n)?;
    let steps = m.rem_euclid(n as i64) as usize;
    let mut cur = t.to_vec();
    for _ in 0..steps {
        cur = sigma_unchecked(&cur, n);
    }
    Ok(cur)
}

/// `σ^m` on a pair. Because `σ` acts on `[n]` elementwise up to reordering,
/// this is `(i+m, j+m) mod n`, sorted.
#[inline]
pub fn sigma_pair(p: PairIndex, m: i64, n: usize) -> PairIndex {
    let shift = |x: usize| ((x as i64 - 1 + m).rem_euclid(n as i64) + 1) as usize;
    let (a, b) = (shift(p.i), shift(p.j));
    PairIndex {
        i: a.min(b),
        j: a.max(b),
    }
}

/// The multiset `O_k = {σ^m(1, k+1) : m ∈ [0, n−1]}` in shift order.
pub fn orbit(k: usize, n: usize) -> Result<Vec<PairIndex>> {
    if n < 3 {
        return Err(Error::TooFewColumns(n));
    }
    if k < 1 || k > n - 1 {
        return Err(Error::BadOrbit { k, max: n - 1 });
    }
    let mut out = Vec::with_capacity(n);
    let mut cur = vec![1, k + 1];
    for _ in 0..n {
        out.push(PairIndex {
            i: cur[0],
            j: cur[1],
        });
        cur = sigma_unchecked(&cur, n);
    }
    Ok(out)
}

/// Which distinct orbit `k ∈ [1, d]` a pair belongs to.
#[inline]
pub fn orbit_of(p: PairIndex, n: usize) -> usize {
    let g = p.gap();
    g.min(n - g)
}

/// All orbits `O_1..O_{n−1}` of `[n]` with the `d` distinct representatives.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitTable {
    pub n: usize,
    pub d: usize,
    /// `orbits[k-1]` is `O_k` with multiplicity, in shift order.
    orbits: Vec<Vec<PairIndex>>,
}

#[derive(Serialize)]
struct OrbitListing<'a> {
    k: usize,
    pairs: &'a [PairIndex],
    distinct: usize,
}

impl OrbitTable {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewColumns(n));
        }
        let orbits = (1..n).map(|k| orbit(k, n)).collect::<Result<Vec<_>>>()?;
        let table = Self {
            n,
            d: half(n),
            orbits,
        };
        table.validate()?;
        Ok(table)
    }

    /// `O_k` as a multiset, `k ∈ [1, n−1]`.
    pub fn orbit(&self, k: usize) -> &[PairIndex] {
        &self.orbits[k - 1]
    }

    /// `O_k` as a set.
    pub fn distinct(&self, k: usize) -> BTreeSet<PairIndex> {
        self.orbit(k).iter().copied().collect()
    }

    /// The outer orbits `O_1 ∪ O_d` as a set.
    pub fn outer(&self) -> BTreeSet<PairIndex> {
        let mut s = self.distinct(1);
        s.extend(self.distinct(self.d));
        s
    }

    /// Orbit listing for JSON export: `k`, the shift-ordered pairs and the
    /// count of distinct members, for `k ∈ [1, d]`.
    pub fn listing(&self) -> serde_json::Value {
        let rows: Vec<_> = (1..=self.d)
            .map(|k| OrbitListing {
                k,
                pairs: self.orbit(k),
                distinct: self.distinct(k).len(),
            })
            .collect();
        serde_json::json!({ "n": self.n, "d": self.d, "orbits": rows })
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        let broken = |what: &str| {
            Err(Error::InvalidParam(format!(
                "orbit table for n = {n}: {what}"
            )))
        };
        for k in 1..n {
            if self.orbit(k).len() != n {
                return broken("orbit size differs from n");
            }
            if self.distinct(k) != self.distinct(n - k) {
                return broken("O_k and O_(n-k) differ as sets");
            }
            if self
                .orbit(k)
                .iter()
                .any(|p| p.gap() != k && p.gap() != n - k)
            {
                return broken("gap law violated");
            }
        }
        let mut seen = BTreeSet::new();
        for k in 1..=self.d {
            for p in self.distinct(k) {
                if !seen.insert(p) {
                    return broken("orbits overlap");
                }
            }
        }
        if seen.len() != pair_count(n) {
            return broken("orbits do not cover all pairs");
        }
        Ok(())
    }
}

/// Geometric means `D_1..D_{n−1}` of the Plücker coordinates over each orbit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeoMeans {
    pub n: usize,
    /// `values[k-1] = D_k`.
    values: Vec<f64>,
}

impl GeoMeans {
    /// Wraps precomputed means; all must be positive and finite.
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewColumns(n));
        }
        if values.len() != n - 1 {
            return Err(Error::DimensionMismatch(values.len(), n - 1));
        }
        if let Some(k) = values.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidParam(format!(
                "D_{} = {} is not positive",
                k + 1,
                values[k]
            )));
        }
        Ok(Self { n, values })
    }

    /// `D_k`, `k ∈ [1, n−1]`.
    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn d(&self) -> usize {
        half(self.n)
    }
}

/// `D_k = (∏ over O_k of Δ)^{1/n}`, evaluated as `exp(mean log Δ)`.
pub fn geometric_means(p: &PlueckerVector) -> Result<GeoMeans> {
    let n = p.n();
    let mut values = Vec::with_capacity(n - 1);
    for k in 1..n {
        let mut log_sum = 0.0;
        for q in orbit(k, n)? {
            let x = p.at(q);
            if !(x > 0.0) {
                return Err(Error::NotPositive {
                    i: q.i,
                    j: q.j,
                    value: x,
                });
            }
            log_sum += x.ln();
        }
        values.push((log_sum / n as f64).exp());
    }
    Ok(GeoMeans { n, values })
}

/// Rescales a positive vector so that `D_1 = D_{n−1} = sin(π/n)`.
pub fn normalize(p: &PlueckerVector) -> Result<PlueckerVector> {
    p.ensure_positive()?;
    let n = p.n();
    let d1 = geometric_means(p)?.get(1);
    let s1 = (std::f64::consts::PI / n as f64).sin();
    Ok(p.scaled(s1 / d1))
}

/// The relation for `(i,j,k,l)` with every index pair shifted by `σ^m`.
///
/// Shifted pairs may come out of order; lookups then pick up the sign from
/// antisymmetry, which is what makes the shifted relation hold.
pub fn shifted_relation(p: &PlueckerVector, quad: [usize; 4], m: i64) -> Result<Relation> {
    let n = p.n();
    check_increasing(&quad, n)?;
    let [i, j, k, l] = quad;
    let s = |a: usize, b: usize| {
        let t = sigma_power(&[a, b], m, n).expect("increasing pair");
        (t[0], t[1])
    };
    Ok(p.relation_on(s(i, k), s(j, l), s(i, j), s(k, l), s(i, l), s(j, k)))
}

/// Residual of [`shifted_relation`].
pub fn shifted_relation_residual(p: &PlueckerVector, quad: [usize; 4], m: i64) -> Result<f64> {
    Ok(shifted_relation(p, quad, m)?.residual)
}
