//! Schatten p-norm sparsification toolkit.
//!
//! A matrix A has an (eps, S_p, s)-norm sparsifier A' when A' has at most s
//! non-zero entries and ||A - A'||_{S_p} <= eps ||A||_{S_p}. For vectors the
//! analogous lp notion promotes cleanly from p to q > p with a constant
//! sparsity factor; for matrices it does not, and this crate builds the
//! explicit instance families that separate the two regimes, verifies their
//! properties numerically, and benchmarks concrete sparsification
//! strategies against them.
//!
//! Modules:
//! - [`matrix`]: dense matrices, structured builders, head/tail selection
//! - [`io`]: coordinate text format and atomic writes
//! - [`spectra`]: Jacobi SVD, Schatten and lp norms, numerical rank
//! - [`sparsify`]: the vector lp -> lq promotion with its exact budget
//! - [`forge`]: the four hard-instance families
//! - [`verify`]: P1-P3 checks and the supporting inequalities
//! - [`attack`]: sparsification strategies and sweep benchmarks
//! - [`cli`]: the `spnorm` command-line tool

pub mod attack;
pub mod cli;
pub mod error;
pub mod forge;
pub mod io;
pub mod matrix;
pub mod report;
pub mod sparsify;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use forge::{CaseId, HardInstance};
pub use matrix::{IndexSet, Matrix, Vector};
pub use report::{CheckRecord, VerificationReport};
pub use spectra::{SchattenExponent, Spectrum};
