use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("n = {0} is too small, need n >= 3")]
    TooFewColumns(usize),
    #[error("column {0} is the zero vector")]
    ZeroColumn(usize),
    #[error("column {index} is not finite")]
    NonFinite { index: usize },
    #[error("column count mismatch: n = {n} but {got} columns given")]
    ColumnCount { n: usize, got: usize },
    #[error("invalid index tuple {tuple:?} for n = {n}")]
    BadTuple { tuple: Vec<usize>, n: usize },
    #[error("orbit index k = {k} outside [1, {max}]")]
    BadOrbit { k: usize, max: usize },
    #[error("Plücker coordinate ({i},{j}) = {value} is not positive")]
    NotPositive { i: usize, j: usize, value: f64 },
    #[error("Plücker coordinate ({i},{j}) vanishes")]
    ZeroMinor { i: usize, j: usize },
    #[error("columns {i} and {j} are collinear")]
    Collinear { i: usize, j: usize },
    #[error("Plücker vector is identically zero")]
    ZeroVector,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("expected odd n, got {0}")]
    EvenN(usize),
    #[error("n = {0} does not satisfy n mod 4 = 2")]
    NotTwoModFour(usize),
    #[error("q = {0} must be positive and finite")]
    BadQ(f64),
    #[error("boundary entries must vanish, got a_1 = {first}, a_(n-1) = {last}")]
    Boundary { first: f64, last: f64 },
    #[error("geometric means are not normalized: D_1 = {d1}, expected {s1}")]
    NotNormalized { d1: f64, s1: f64 },
    #[error("missing outer-orbit value for pair ({i},{j})")]
    MissingPair { i: usize, j: usize },
    #[error("pair ({i},{j}) is not on an outer orbit")]
    NotOuter { i: usize, j: usize },
    #[error("denominator |Δ({i},{j})| = {value} underflows the tolerance")]
    Degenerate { i: usize, j: usize, value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("no restart produced a finite objective")]
    NoFiniteObjective,
    #[error("parse error: {0}")]
    Parse(String),
}
