//! Exact linear algebra for a family of structured integer and rational
//! matrices, together with the machinery needed to verify their closed-form
//! determinants, spectra and permanent congruences with zero-error arithmetic.
//!
//! The crate is organised in layers:
//!
//! * [`exact`]: arbitrary-precision integers, normalized rationals and
//!   quadratic extension fields `Q(w)` with `w^2 = d`.
//! * [`matrix`]: dense matrices over those scalars: Bareiss determinants,
//!   cofactor determinants, Faddeev–LeVerrier characteristic polynomials,
//!   rank and matrix–vector products.
//! * [`families`]: generators for the matrix families `A1 = [j-k+d_jk]`,
//!   `A2 = [2^(j-k)-(-1)^d_jk]`, `B = [|j-k|+d_jk]`, `[|j-k|]`, the
//!   elementary factors `T`/`T~`, and Hankel matrices of OEIS A025276.
//! * [`closedforms`]: the closed-form values and eigenstructure of those
//!   families, with exact verification routines.
//! * [`permanent`]: naive and Gray-code Ryser permanents, exact and
//!   modular, plus congruence scanners over ranges of primes.
//! * [`reduction`]: an executable, self-checking replay of the elementary
//!   transformation pipeline that evaluates `det(B)`.
//! * [`selftest`]: the end-to-end verification suite used by both the
//!   acceptance tests and the CLI `selftest` subcommand.
//!
//! All arithmetic is exact. No floating point is used anywhere.

// parity tests and closed-form values like (p + 1) / 2 are written the
// way the mathematics states them
#![allow(clippy::manual_div_ceil, clippy::manual_is_multiple_of)]

pub mod closedforms;
pub mod error;
pub mod exact;
pub mod families;
pub mod matrix;
pub mod permanent;
pub mod reduction;
pub mod selftest;

pub use error::{Error, Result};
pub use exact::{Int, QuadExt, Rat};
pub use matrix::{IntMatrix, Matrix, Poly, QuadMatrix, RatMatrix};
