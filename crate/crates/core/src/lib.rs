//! Landau levels on the Euclidean plane, the Poincaré half-plane and the
//! hyperbolic disk.
//!
//! The crate is organised bottom-up:
//!
//! - [`opalg`]: exact operator algebra (Gaussian rationals, Laurent
//!   polynomials, rational functions, differential operators, Poisson
//!   brackets).
//! - [`geometry`]: conformal metrics, gauge potentials, de Witt momenta and
//!   the gauged Laplace–Beltrami builder.
//! - [`models`]: the concrete operators and the exact identity suite.
//! - [`classical`]: Hamilton's equations on the half-plane.
//! - [`specfun`], [`spectra`], [`numverify`]: special functions, closed-form
//!   levels and eigenfunctions, and independent numerical oracles.
//! - [`manybody`]: lowest-Landau-level Slater and Laughlin states.
//! - [`io`]: the JSON/CSV formats used by the command-line tool.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod geometry;
pub mod io;
pub mod manybody;
pub mod models;
pub mod numverify;
pub mod opalg;
pub mod specfun;
pub mod spectra;
