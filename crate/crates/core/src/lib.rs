//! Plücker coordinates, cyclic orbits and the minor-ratio extremal problem on
//! the positive Grassmannian `Gr>0(2,n)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`plucker`] – planar wedge products, spanning matrices, Plücker vectors
//!   and the quadratic identities they satisfy.
//! * [`cyclic`] – the cyclic shift on ordered tuples, the orbits `O_k`, and
//!   orbit geometric means `D_k`.
//! * [`extremal`] – the cyclic matrix `C`, the losses `E`, `L`, `B`, the
//!   inequality chain and per-point certificates.
//! * [`reconstruct`] – recovery of a point from its outer-orbit coordinates
//!   (odd `n`).
//! * [`qfamily`] – the `C^q` family of equal-loss points for `n ≡ 2 (mod 4)`.
//! * [`optimizer`] – a positivity-preserving chart and a multi-restart
//!   Nelder–Mead search for `min E`.
//! * [`exec`] – sequential / rayon-parallel execution of batch sweeps.

// `!(x > 0.0)` is used on purpose so that NaN fails positivity checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cyclic;
pub mod error;
pub mod exec;
pub mod extremal;
pub mod optimizer;
pub mod plucker;
pub mod qfamily;
pub mod reconstruct;

pub use error::{Error, Result};
pub use plucker::{wedge, PairIndex, PlueckerVector, PointMatrix, Tolerance, Vec2};
