//! Planar linear algebra and Plücker coordinates of `2 × n` matrices.
//!
//! Indices in the public API are 1-based, matching the usual `Δ_{i,j}`
//! notation. A [`PlueckerVector`] stores one value per ordered pair `i < j`
//! and answers out-of-order lookups by antisymmetry, `Δ_{j,i} = −Δ_{i,j}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A planar vector `(u, v)`.
pub type Vec2 = [f64; 2];

/// The determinant `u_x v_y − u_y v_x` of the `2 × 2` matrix `[u v]`.
#[inline]
pub fn wedge(u: Vec2, v: Vec2) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Max-norm of `(u∧v)w − (u∧w)v + (v∧w)u`, which vanishes identically.
pub fn uvw_residual(u: Vec2, v: Vec2, w: Vec2) -> f64 {
    let uv = wedge(u, v);
    let uw = wedge(u, w);
    let vw = wedge(v, w);
    (0..2)
        .map(|c| (uv * w[c] - uw * v[c] + vw * u[c]).abs())
        .fold(0.0, f64::max)
}

/// Magnitude of the largest monomial in the uvw identity, for relative checks.
pub fn uvw_scale(u: Vec2, v: Vec2, w: Vec2) -> f64 {
    let uv = wedge(u, v).abs();
    let uw = wedge(u, w).abs();
    let vw = wedge(v, w).abs();
    (0..2)
        .map(|c| (uv * w[c].abs()).max(uw * v[c].abs()).max(vw * u[c].abs()))
        .fold(0.0, f64::max)
}

/// Relative and absolute tolerance pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-9,
            abs: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !(rel >= 0.0 && abs >= 0.0 && rel.is_finite() && abs.is_finite()) {
            return Err(Error::InvalidParam(format!(
                "tolerances must be finite and non-negative, got rel = {rel}, abs = {abs}"
            )));
        }
        Ok(Self { rel, abs })
    }

    /// Relative-only tolerance.
    pub fn rel(rel: f64) -> Self {
        Self { rel, abs: 0.0 }
    }

    /// `|a − b| ≤ rel · scale + abs`.
    #[inline]
    pub fn within(&self, a: f64, b: f64, scale: f64) -> bool {
        (a - b).abs() <= self.rel * scale.abs() + self.abs
    }
}

/// An ordered pair `1 ≤ i < j ≤ n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairIndex {
    pub i: usize,
    pub j: usize,
}

impl PairIndex {
    pub fn new(i: usize, j: usize, n: usize) -> Result<Self> {
        if i >= 1 && i < j && j <= n {
            Ok(Self { i, j })
        } else {
            Err(Error::BadTuple {
                tuple: vec![i, j],
                n,
            })
        }
    }

    /// Builds the ordered pair from two distinct indices given in any order.
    pub fn sorted(a: usize, b: usize, n: usize) -> Result<Self> {
        Self::new(a.min(b), a.max(b), n)
    }

    pub fn gap(&self) -> usize {
        self.j - self.i
    }
}

impl fmt::Display for PairIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.i, self.j)
    }
}

impl std::str::FromStr for PairIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("pair key {s:?} is not of the form \"i,j\"")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("pair key {s:?}: {e}")))
        };
        let (i, j) = (parse(a)?, parse(b)?);
        if i == 0 || i >= j {
            return Err(Error::Parse(format!(
                "pair key {s:?} is not an ordered pair"
            )));
        }
        Ok(Self { i, j })
    }
}

/// Number of ordered pairs of `[n]`.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Position of the ordered pair `(i, j)` in lexicographic order.
#[inline]
fn pair_offset(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    (i - 1) * n - (i - 1) * i / 2 + (j - i - 1)
}

/// All ordered pairs of `[n]` in lexicographic order.
pub fn pairs(n: usize) -> impl Iterator<Item = PairIndex> {
    (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| PairIndex { i, j }))
}

/// All strictly increasing `k`-tuples of `[n]`, lexicographically.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut t: Vec<usize> = (1..=k).collect();
    loop {
        out.push(t.clone());
        // advance the rightmost entry that still has room
        let mut pos = k;
        while pos > 0 && t[pos - 1] == n - k + pos {
            pos -= 1;
        }
        if pos == 0 {
            return out;
        }
        t[pos - 1] += 1;
        for q in pos..k {
            t[q] = t[q - 1] + 1;
        }
    }
}

/// Increasing 4-tuples of `[n]`; each indexes one three-term Plücker relation.
pub fn quads(n: usize) -> Vec<[usize; 4]> {
    increasing_tuples(n, 4)
        .into_iter()
        .map(|t| [t[0], t[1], t[2], t[3]])
        .collect()
}

/// Increasing triples of `[m]`.
pub fn triples(m: usize) -> Vec<[usize; 3]> {
    increasing_tuples(m, 3)
        .into_iter()
        .map(|t| [t[0], t[1], t[2]])
        .collect()
}

/// A `2 × n` real matrix stored as its `n` planar columns.
///
/// Invariants: `n ≥ 3`, every column is finite and non-zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct PointMatrix {
    columns: Vec<Vec2>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    columns: Vec<Vec2>,
}

impl TryFrom<MatrixJson> for PointMatrix {
    type Error = Error;

    fn try_from(raw: MatrixJson) -> Result<Self> {
        if raw.columns.len() != raw.n {
            return Err(Error::ColumnCount {
                n: raw.n,
                got: raw.columns.len(),
            });
        }
        PointMatrix::new(raw.columns)
    }
}

impl From<PointMatrix> for MatrixJson {
    fn from(m: PointMatrix) -> Self {
        MatrixJson {
            n: m.n(),
            columns: m.columns,
        }
    }
}

impl PointMatrix {
    pub fn new(columns: Vec<Vec2>) -> Result<Self> {
        if columns.len() < 3 {
            return Err(Error::TooFewColumns(columns.len()));
        }
        for (idx, c) in columns.iter().enumerate() {
            if !(c[0].is_finite() && c[1].is_finite()) {
                return Err(Error::NonFinite { index: idx + 1 });
            }
            if c[0] == 0.0 && c[1] == 0.0 {
                return Err(Error::ZeroColumn(idx + 1));
            }
        }
        Ok(Self { columns })
    }

    /// Builds the matrix from its two rows `(u_1..u_n)` and `(v_1..v_n)`.
    pub fn from_rows(u: &[f64], v: &[f64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch(u.len(), v.len()));
        }
        Self::new(u.iter().zip(v).map(|(&a, &b)| [a, b]).collect())
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec2] {
        &self.columns
    }

    /// Column `i`, 1-based.
    pub fn column(&self, i: usize) -> Vec2 {
        self.columns[i - 1]
    }

    pub fn into_columns(self) -> Vec<Vec2> {
        self.columns
    }

    /// Left-multiplies by the `2 × 2` matrix `mix`, i.e. replaces the rows by
    /// linear combinations of themselves.
    pub fn mix_rows(&self, mix: [[f64; 2]; 2]) -> Result<Self> {
        Self::new(
            self.columns
                .iter()
                .map(|c| {
                    [
                        mix[0][0] * c[0] + mix[0][1] * c[1],
                        mix[1][0] * c[0] + mix[1][1] * c[1],
                    ]
                })
                .collect(),
        )
    }

    /// Multiplies column `i` (1-based) by `factors[i-1]`.
    pub fn scale_columns(&self, factors: &[f64]) -> Result<Self> {
        if factors.len() != self.n() {
            return Err(Error::DimensionMismatch(factors.len(), self.n()));
        }
        Self::new(
            self.columns
                .iter()
                .zip(factors)
                .map(|(c, &f)| [f * c[0], f * c[1]])
                .collect(),
        )
    }
}

/// The `n(n−1)/2` Plücker coordinates `Δ_{i,j}` of a point of `Gr(2,n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlueckerVector {
    n: usize,
    entries: Vec<f64>,
}

/// Residual of one three-term relation together with its largest monomial.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Relation {
    pub residual: f64,
    pub scale: f64,
}

impl Relation {
    fn from_terms(ik_jl: f64, ij_kl: f64, il_jk: f64) -> Self {
        Self {
            residual: ik_jl - ij_kl - il_jk,
            scale: ik_jl.abs().max(ij_kl.abs()).max(il_jk.abs()),
        }
    }

    /// `|residual| / scale`, or the raw magnitude when every monomial vanishes.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.residual.abs() / self.scale
        } else {
            self.residual.abs()
        }
    }
}

pub(crate) fn check_increasing(t: &[usize], n: usize) -> Result<()> {
    let ok = t.first().is_some_and(|&f| f >= 1)
        && t.last().is_some_and(|&l| l <= n)
        && t.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(Error::BadTuple {
            tuple: t.to_vec(),
            n,
        })
    }
}

impl PlueckerVector {
    /// Wraps raw entries given in lexicographic pair order.
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewColumns(n));
        }
        if entries.len() != pair_count(n) {
            return Err(Error::DimensionMismatch(entries.len(), pair_count(n)));
        }
        Ok(Self { n, entries })
    }

    /// Builds a vector by evaluating `f` on every ordered pair.
    pub fn from_fn(n: usize, mut f: impl FnMut(PairIndex) -> f64) -> Result<Self> {
        Self::from_entries(n, pairs(n).map(&mut f).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Raw entries in lexicographic pair order.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `Δ_{i,j}` for any `i, j ∈ [n]`; swapped indices negate, equal ones give 0.
    ///
    /// Panics when an index is outside `[n]`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "pair ({i},{j}) out of range for n = {}",
            self.n
        );
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.entries[pair_offset(i, j, self.n)],
            std::cmp::Ordering::Greater => -self.entries[pair_offset(j, i, self.n)],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    #[inline]
    pub fn at(&self, p: PairIndex) -> f64 {
        self.get(p.i, p.j)
    }

    pub fn set(&mut self, p: PairIndex, value: f64) {
        let off = pair_offset(p.i, p.j, self.n);
        self.entries[off] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (PairIndex, f64)> + '_ {
        pairs(self.n).zip(self.entries.iter().copied())
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|x| lambda * x).collect(),
        }
    }

    /// Largest coordinate with its pair.
    pub fn max(&self) -> (PairIndex, f64) {
        self.iter()
            .fold(None, |best: Option<(PairIndex, f64)>, (p, x)| match best {
                Some((_, b)) if b >= x => best,
                _ => Some((p, x)),
            })
            .expect("at least three pairs")
    }

    /// Smallest coordinate with its pair.
    pub fn min(&self) -> (PairIndex, f64) {
        self.iter()
            .fold(None, |best: Option<(PairIndex, f64)>, (p, x)| match best {
                Some((_, b)) if b <= x => best,
                _ => Some((p, x)),
            })
            .expect("at least three pairs")
    }

    /// True iff every coordinate exceeds `tol.abs`.
    pub fn is_positive(&self, tol: Tolerance) -> bool {
        self.entries.iter().all(|&x| x > tol.abs)
    }

    /// First coordinate that is not strictly positive.
    pub fn ensure_positive(&self) -> Result<()> {
        match self.iter().find(|&(_, x)| !(x > 0.0)) {
            Some((p, value)) => Err(Error::NotPositive {
                i: p.i,
                j: p.j,
                value,
            }),
            None => Ok(()),
        }
    }

    /// The factor `λ` with `other ≈ λ · self`, or `None` when the vectors are
    /// not proportional within `tol`.
    ///
    /// `λ` is read off the largest-magnitude entry of `self`; each entry must
    /// then satisfy `|Q − λP| ≤ tol.rel · max(|Q|, |λP|) + tol.abs`.
    pub fn proportionality_factor(&self, other: &Self, tol: Tolerance) -> Result<Option<f64>> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let (pivot, peak) = self
            .entries
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |acc, (idx, &x)| {
                if x.abs() > acc.1 {
                    (idx, x.abs())
                } else {
                    acc
                }
            });
        if peak == 0.0 {
            return Err(Error::ZeroVector);
        }
        let lambda = other.entries[pivot] / self.entries[pivot];
        if lambda == 0.0 || !lambda.is_finite() {
            return Ok(None);
        }
        let ok = self.entries.iter().zip(&other.entries).all(|(&p, &q)| {
            let lp = lambda * p;
            tol.within(q, lp, q.abs().max(lp.abs()))
        });
        Ok(ok.then_some(lambda))
    }

    /// Whether `other = λ · self` for some `λ ≠ 0`, within `tol`.
    pub fn proportional(&self, other: &Self, tol: Tolerance) -> Result<bool> {
        Ok(self.proportionality_factor(other, tol)?.is_some())
    }

    /// `Δ_{i,k}Δ_{j,l} − Δ_{i,j}Δ_{k,l} − Δ_{i,l}Δ_{j,k}` for `i < j < k < l`.
    pub fn plucker_residual(&self, quad: [usize; 4]) -> Result<f64> {
        Ok(self.plucker_relation(quad)?.residual)
    }

    /// The relation residual together with its largest monomial.
    pub fn plucker_relation(&self, quad: [usize; 4]) -> Result<Relation> {
        check_increasing(&quad, self.n)?;
        let [i, j, k, l] = quad;
        Ok(Relation::from_terms(
            self.get(i, k) * self.get(j, l),
            self.get(i, j) * self.get(k, l),
            self.get(i, l) * self.get(j, k),
        ))
    }

    /// Evaluates the relation on arbitrary (possibly out-of-order) index pairs.
    pub(crate) fn relation_on(
        &self,
        ik: (usize, usize),
        jl: (usize, usize),
        ij: (usize, usize),
        kl: (usize, usize),
        il: (usize, usize),
        jk: (usize, usize),
    ) -> Relation {
        Relation::from_terms(
            self.get(ik.0, ik.1) * self.get(jl.0, jl.1),
            self.get(ij.0, ij.1) * self.get(kl.0, kl.1),
            self.get(il.0, il.1) * self.get(jk.0, jk.1),
        )
    }
}

/// The Plücker coordinates `Δ_{i,j} = x_i ∧ x_j` of `x`.
pub fn minors(x: &PointMatrix) -> PlueckerVector {
    let n = x.n();
    let cols = x.columns();
    let mut entries = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i + 1..n {
            entries.push(wedge(cols[i], cols[j]));
        }
    }
    PlueckerVector { n, entries }
}

impl Serialize for PlueckerVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (p, x) in self.iter() {
            map.serialize_entry(&p.to_string(), &x)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for PlueckerVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PairMap;

        impl<'de> Visitor<'de> for PairMap {
            type Value = BTreeMap<PairIndex, f64>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from \"i,j\" keys to numbers")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut out = BTreeMap::new();
                while let Some((key, value)) = access.next_entry::<String, f64>()? {
                    let p: PairIndex = key.parse().map_err(de::Error::custom)?;
                    if out.insert(p, value).is_some() {
                        return Err(de::Error::custom(format!("duplicate pair key {key:?}")));
                    }
                }
                Ok(out)
            }
        }

        let map = deserializer.deserialize_map(PairMap)?;
        plucker_from_map(&map).map_err(de::Error::custom)
    }
}

/// Assembles a full vector from a pair map; every pair of `[n]` must be present.
pub fn plucker_from_map(map: &BTreeMap<PairIndex, f64>) -> Result<PlueckerVector> {
    let n = map.keys().map(|p| p.j).max().unwrap_or(0);
    if n < 3 {
        return Err(Error::TooFewColumns(n));
    }
    if map.len() != pair_count(n) {
        return Err(Error::DimensionMismatch(map.len(), pair_count(n)));
    }
    PlueckerVector::from_entries(n, map.values().copied().collect())
}
