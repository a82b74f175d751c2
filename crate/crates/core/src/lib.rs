//! Numerical laboratory for Orlicz-type norms of disjoint-block random processes.
//!
//! The crate builds two families of processes indexed by the compact metric space
//! `{1, 2, ..., ∞}`: each coordinate has a sub-Gaussian tail, yet the supremum over
//! the index set has a polynomial (heavy) tail. Everything needed to check this
//! numerically lives here:
//!
//! * [`quad`]: adaptive Gauss–Kronrod quadrature with endpoint-singularity
//!   substitutions, positive-series summation with integral-test brackets, and
//!   log-log regression.
//! * [`young`]: Young functions, Grand Lebesgue generators, domination and Δ₂ profiling.
//! * [`space`]: measurable functions on `(0, 1)` and `(0, ∞)` with closed-form tails
//!   and moments, plus decreasing rearrangement.
//! * [`norms`]: Lp, Luxemburg, Grand Lebesgue, Lorentz–Zygmund and tail quasinorms.
//! * [`counterexample`]: the two disjoint systems and their verification procedures.
//! * [`mc`]: seeded Monte Carlo for the supremum law and Rademacher symmetrization.
//! * [`suite`]: configurable batch runner producing JSON/CSV reports.

pub mod check;
pub mod counterexample;
mod error;
pub mod mc;
pub mod norms;
pub mod quad;
pub mod space;
pub mod special;
pub mod suite;
pub mod young;

pub use check::{CheckResult, Quantity, Verdict};
pub use error::{Error, Result};
