//! Pochhammer symbols, generalized Laguerre polynomials, Kummer's confluent
//! hypergeometric series and the Whittaker `M` function, in `f64`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// Hard cap on the number of series terms.
pub const TERM_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("1F1 pole: b = {b} is a nonpositive integer and the series does not truncate first")]
    Pole { b: f64 },
    #[error("1F1 series did not reach tolerance {tol:e} within {terms} terms")]
    NoConvergence { terms: usize, tol: f64 },
    #[error("argument out of domain: {0}")]
    Domain(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub converged: bool,
    /// Tail bound plus accumulated rounding (`ε · Σ|t_k|`).
    pub est_abs_error: f64,
}

/// `(τ)_n = τ(τ+1)⋯(τ+n−1)`, with `(τ)_0 = 1`.
pub fn pochhammer(tau: f64, n: u32) -> f64 {
    (0..n).map(|k| tau + k as f64).product()
}

/// `L_n^{(τ)}(z)` by the three-term recurrence.
pub fn laguerre(n: u32, tau: f64, z: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + tau - z;
    for k in 2..=n {
        let k = k as f64;
        let next = ((2.0 * k - 1.0 + tau - z) * cur - (k - 1.0 + tau) * prev) / k;
        prev = cur;
        cur = next;
    }
    cur
}

fn nonpositive_integer(v: f64) -> Option<u64> {
    (v <= 0.0 && v.fract() == 0.0).then(|| (-v) as u64)
}

/// `₁F₁(α; b; z) = Σ_k (α)_k z^k / ((b)_k k!)`.
///
/// A nonpositive integer `α` gives a finite sum, evaluated in exact rational
/// arithmetic and rounded once. Otherwise the series runs until a ratio-based bound on the
/// tail drops below `tol · max(1, |sum|)`, so `tol` is absolute for values of
/// modulus at most one and relative above that.
pub fn hyp1f1(alpha: f64, b: f64, z: f64, tol: f64) -> Result<SeriesResult, SpecfunError> {
    if !(tol > 0.0) {
        return Err(SpecfunError::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let truncation = nonpositive_integer(alpha);
    if let Some(nb) = nonpositive_integer(b) {
        // (b)_k vanishes from k = |b| + 1 on; only a shorter polynomial survives.
        if truncation.is_none_or(|na| na > nb) {
            return Err(SpecfunError::Pole { b });
        }
    }
    if let Some(na) = truncation {
        if let Some(v) = terminating_exact(na, b, z) {
            return Ok(SeriesResult {
                value: v,
                terms_used: na as usize + 1,
                converged: true,
                est_abs_error: 0.5 * f64::EPSILON * v.abs(),
            });
        }
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut abs_sum = 1.0f64;
    if let Some(na) = truncation {
        for k in 0..na {
            let kf = k as f64;
            term *= (alpha + kf) * z / ((b + kf) * (kf + 1.0));
            sum += term;
            abs_sum += term.abs();
        }
        return Ok(SeriesResult {
            value: sum,
            terms_used: na as usize + 1,
            converged: true,
            est_abs_error: f64::EPSILON * abs_sum,
        });
    }
    for k in 0..TERM_CAP {
        let kf = k as f64;
        term *= (alpha + kf) * z / ((b + kf) * (kf + 1.0));
        sum += term;
        abs_sum += term.abs();
        // Bound every later ratio |t_{j+1}/t_j| for j > k.
        let (an, bn) = (alpha + kf + 1.0, b + kf + 1.0);
        if an > 0.0 && bn > 0.0 {
            let q = z.abs() / (kf + 2.0) * (an / bn).max(1.0);
            if q < 1.0 {
                let tail = term.abs() * q / (1.0 - q);
                if tail <= tol * sum.abs().max(1.0) {
                    return Ok(SeriesResult {
                        value: sum,
                        terms_used: k + 2,
                        converged: true,
                        est_abs_error: tail + f64::EPSILON * abs_sum,
                    });
                }
            }
        }
    }
    Err(SpecfunError::NoConvergence { terms: TERM_CAP, tol })
}

/// Longest terminating series summed in exact arithmetic.
const EXACT_TERMS: u64 = 1000;

/// `Σ_{k≤n} (−n)_k z^k / ((b)_k k!)` in rational arithmetic from the exact
/// binary values of `b` and `z`, rounded once.
fn terminating_exact(n: u64, b: f64, z: f64) -> Option<f64> {
    if n > EXACT_TERMS {
        return None;
    }
    let b = BigRational::from_float(b)?;
    let z = BigRational::from_float(z)?;
    let mut term = BigRational::from_integer(BigInt::from(1));
    let mut sum = term.clone();
    for k in 0..n {
        let kq = BigRational::from_integer(BigInt::from(k));
        let den = (&b + &kq) * (&kq + BigRational::from_integer(BigInt::from(1)));
        if den.is_zero() {
            return None;
        }
        term = term * (BigRational::from_integer(BigInt::from(k) - BigInt::from(n))) * &z / den;
        sum += &term;
    }
    sum.to_f64()
}

/// `M_{β,n}(s) = e^{−s/2} s^{½+n} ₁F₁(½ + n − β; 1 + 2n; s)`.
///
/// The companion solution `M_{β,−n}` is obtained by passing `−n`.
pub fn whittaker_m(beta: f64, n: f64, s: f64, tol: f64) -> Result<f64, SpecfunError> {
    if !(s > 0.0) {
        return Err(SpecfunError::Domain(format!("Whittaker M needs s > 0, got {s}")));
    }
    let f = hyp1f1(0.5 + n - beta, 1.0 + 2.0 * n, s, tol)?;
    Ok((-s / 2.0).exp() * s.powf(0.5 + n) * f.value)
}
