//! Exact computer-algebra kernel: Gaussian-rational scalars, Laurent
//! polynomials, rational functions, differential operators and Poisson
//! brackets.
//!
//! Every value carries its [`Ring`] (the ordered symbol declarations).
//! Parameters such as β, m, a, ρ are ordinary derivative-inert symbols, so
//! an identity that normalizes to zero here holds for every numeric value
//! of them.

mod diffop;
mod phase;
mod poly;
mod ratfunc;
pub mod render;
mod ring;
mod scalar;

pub use diffop::{DerivIndex, DiffOp};
pub use phase::{poisson_bracket, PhasePoly, PhaseSpace};
pub use poly::{LaurentPoly, Monomial};
pub use ratfunc::RationalFunc;
pub use ring::{Ring, RingBuilder, Role, SqrtRule, Symbol};
pub use scalar::GaussianRational;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("declaration error: {0}")]
    Declaration(String),
    #[error("operands are declared over different symbol lists")]
    RingMismatch,
    #[error("negative power of non-Laurent symbol `{0}`")]
    NegativeExponent(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("result is not a polynomial")]
    NotPolynomial,
    #[error("coefficient is singular at the evaluation point ({0})")]
    Singular(String),
    #[error("no numeric value bound for symbol `{0}`")]
    Unbound(String),
}

/// Convenience: `c · Π name^e` as a multiplication operator.
pub fn mono_op(
    ring: &std::sync::Arc<Ring>,
    c: GaussianRational,
    powers: &[(&str, i32)],
) -> Result<DiffOp, AlgebraError> {
    Ok(DiffOp::from_poly(LaurentPoly::monomial(ring, c, powers)?))
}
