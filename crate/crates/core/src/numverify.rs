//! Numerical oracles that do not share code paths with the closed forms:
//! finite-difference application of operators, eigenfunction residuals, a
//! finite-difference eigensolver for the separated Whittaker equation and a
//! quadrature norm.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::opalg::{AlgebraError, DiffOp, RationalFunc, Role};
use crate::spectra::{self, SpectraError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("unsupported operator: {0}")]
    Unsupported(String),
    #[error("grid too coarse: {found} eigenvalues below 1/4, {wanted} requested")]
    Resolution { found: usize, wanted: usize },
    #[error("not normalizable: beta - l = {0} <= 1/2")]
    NonNormalizable(f64),
    #[error("invalid input: {0}")]
    Domain(String),
}

type Result<T> = std::result::Result<T, NumError>;

/// Numeric values for the parameter symbols of an operator's ring.
pub type Bindings = BTreeMap<String, f64>;

fn mentions(rf: &RationalFunc, idx: usize) -> bool {
    rf.numerator().terms().any(|(m, _)| m.0[idx] != 0)
        || rf
            .denominator_factors()
            .iter()
            .any(|(f, _)| f.terms().any(|(m, _)| m.0[idx] != 0))
}

/// 4th-order central stencil `(offset, weight)` for `d^k/dx^k`, `k ≤ 2`,
/// weights to be divided by `h^k`.
fn stencil(k: u32) -> &'static [(i32, f64)] {
    const D0: [(i32, f64); 1] = [(0, 1.0)];
    const D1: [(i32, f64); 4] = [(-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0)];
    const D2: [(i32, f64); 5] = [
        (-2, -1.0 / 12.0),
        (-1, 16.0 / 12.0),
        (0, -30.0 / 12.0),
        (1, 16.0 / 12.0),
        (2, -1.0 / 12.0),
    ];
    match k {
        0 => &D0,
        1 => &D1,
        _ => &D2,
    }
}

/// Evaluates `H f` at `point` (one value per geometric coordinate) with
/// 4th-order central differences of step `h` and exact coefficients.
pub fn fd_apply(
    op: &DiffOp,
    f: &dyn Fn(&[f64]) -> Complex64,
    point: &[f64],
    h: f64,
    bindings: &Bindings,
) -> Result<Complex64> {
    let ring = op.ring();
    let ng = ring.n_geometric();
    if point.len() != ng {
        return Err(NumError::Domain(format!(
            "expected {ng} coordinates, got {}",
            point.len()
        )));
    }
    if !(h > 0.0) {
        return Err(NumError::Domain(format!("step must be positive, got {h}")));
    }
    let mut values = Vec::with_capacity(ring.len());
    for (idx, sym) in ring.symbols().iter().enumerate() {
        let v = match sym.role {
            Role::Geometric => point[idx],
            Role::Parameter => match bindings.get(&sym.name) {
                Some(v) => *v,
                None if op.terms().any(|(_, c)| mentions(c, idx)) => {
                    return Err(AlgebraError::Unbound(sym.name.clone()).into())
                }
                None => 0.0,
            },
        };
        values.push(Complex64::new(v, 0.0));
    }
    let mut total = Complex64::new(0.0, 0.0);
    let mut shifted = point.to_vec();
    for (alpha, coef) in op.terms() {
        if let Some(k) = alpha.0.iter().find(|&&k| k > 2) {
            return Err(NumError::Unsupported(format!("derivative order {k} in one variable")));
        }
        let c = coef.eval(&values)?;
        // Tensor product of the one-dimensional stencils.
        let stencils: Vec<&[(i32, f64)]> = alpha.0.iter().map(|&k| stencil(k)).collect();
        let scale: f64 = alpha.0.iter().map(|&k| h.powi(k as i32)).product();
        let mut idx = vec![0usize; ng];
        let mut acc = Complex64::new(0.0, 0.0);
        'outer: loop {
            let mut w = 1.0;
            for d in 0..ng {
                let (off, wd) = stencils[d][idx[d]];
                shifted[d] = point[d] + off as f64 * h;
                w *= wd;
            }
            acc += f(&shifted) * w;
            for d in 0..ng {
                idx[d] += 1;
                if idx[d] < stencils[d].len() {
                    continue 'outer;
                }
                idx[d] = 0;
            }
            break;
        }
        total += c * acc / scale;
    }
    Ok(total)
}

/// How the finite-difference step is chosen at each sample point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Step {
    Fixed(f64),
    /// `factor · |point[coord]|`, for coordinates that set the local scale
    /// (the half-plane `y`).
    Scaled {
        coord: usize,
        factor: f64,
    },
}

impl Step {
    fn at(&self, point: &[f64]) -> f64 {
        match *self {
            Step::Fixed(h) => h,
            Step::Scaled { coord, factor } => factor * point[coord].abs(),
        }
    }
}

/// `max |HΨ − EΨ| / (|E||Ψ| + ε)` over the sample points.
pub fn residual_check(
    op: &DiffOp,
    psi: &dyn Fn(&[f64]) -> Complex64,
    energy: f64,
    points: &[Vec<f64>],
    step: Step,
    bindings: &Bindings,
) -> Result<f64> {
    const GUARD: f64 = 1e-300;
    let mut worst = 0.0f64;
    for p in points {
        let hp = fd_apply(op, psi, p, step.at(p), bindings)?;
        let v = psi(p);
        worst = worst.max((hp - v * energy).norm() / (energy.abs() * v.norm() + GUARD));
    }
    Ok(worst)
}

/// Interior grid `s_i = smin + i h`, `i = 1..=n`, `h = (smax − smin)/(n + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FdGrid {
    pub smin: f64,
    pub smax: f64,
    pub n: usize,
}

impl FdGrid {
    pub const MIN_POINTS: usize = 100;

    pub fn new(smin: f64, smax: f64, n: usize) -> Result<Self> {
        if !(smin > 0.0 && smax > smin) {
            return Err(NumError::Domain(format!("need 0 < smin < smax, got [{smin}, {smax}]")));
        }
        if n < Self::MIN_POINTS {
            return Err(NumError::Domain(format!(
                "need at least {} points, got {n}",
                Self::MIN_POINTS
            )));
        }
        Ok(Self { smin, smax, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.smax - self.smin) / (self.n as f64 + 1.0)
    }

    pub fn node(&self, i: usize) -> f64 {
        self.smin + (i as f64 + 1.0) * self.spacing()
    }

    pub fn refined(&self) -> Self {
        Self { n: 2 * self.n, ..*self }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSpectrum {
    pub beta: f64,
    /// Smallest generalized eigenvalues, ascending.
    pub mu: Vec<f64>,
    /// `(μ + β²)/(2ma²)`.
    pub energies: Vec<f64>,
    pub grid: FdGrid,
}

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`
/// (Sturm sequence / LDLᵀ inertia).
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0f64;
    for i in 0..diag.len() {
        let o2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        d = diag[i] - x - if i == 0 { 0.0 } else { o2 / d };
        if d == 0.0 {
            d = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues of a symmetric tridiagonal matrix, ascending,
/// by Sturm-sequence bisection to `1e−12` absolute (or the floating-point
/// resolution of the bracket).
pub fn tridiag_eigs(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let n = diag.len();
    assert!(
        off.len() + 1 == n || (n == 0 && off.is_empty()),
        "off-diagonal length must be n - 1"
    );
    let k = k.min(n);
    let radius = |i: usize| {
        let l = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let r = if i + 1 < n { off[i].abs() } else { 0.0 };
        l + r
    };
    let lo0 = (0..n).map(|i| diag[i] - radius(i)).fold(f64::INFINITY, f64::min) - 1.0;
    let hi0 = (0..n).map(|i| diag[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max) + 1.0;
    (0..k)
        .map(|j| {
            let (mut lo, mut hi) = (lo0, hi0);
            loop {
                let mid = 0.5 * (lo + hi);
                if hi - lo <= 1e-12 || mid <= lo || mid >= hi {
                    break 0.5 * (lo + hi);
                }
                if sturm_count(diag, off, mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        })
        .collect()
}

/// Finite-difference eigenvalues of `−φ'' + (¼ − β/s)φ = μ φ/s²` with
/// Dirichlet ends. The pencil `A − μW`, `W = diag(1/s_i²)`, is symmetrized
/// to `S A S` with `S = diag(s_i)`, which stays tridiagonal.
pub fn whittaker_oracle(beta: f64, grid: FdGrid, k_levels: usize, m: f64, a: f64) -> Result<OracleSpectrum> {
    if !(beta > 0.5) {
        return Err(NumError::Domain(format!(
            "need beta > 1/2 for a bound state, got {beta}"
        )));
    }
    let available = spectra::halfplane_level_count(beta);
    if k_levels == 0 || k_levels > available {
        return Err(NumError::Domain(format!(
            "requested {k_levels} levels, the bound-state window holds {available}"
        )));
    }
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let s: Vec<f64> = (0..grid.n).map(|i| grid.node(i)).collect();
    let diag: Vec<f64> = s
        .iter()
        .map(|&si| si * si * (2.0 * inv_h2 + 0.25 - beta / si))
        .collect();
    let off: Vec<f64> = s.windows(2).map(|w| -w[0] * w[1] * inv_h2).collect();
    let found = sturm_count(&diag, &off, 0.25);
    if found < k_levels {
        return Err(NumError::Resolution {
            found,
            wanted: k_levels,
        });
    }
    let mu = tridiag_eigs(&diag, &off, k_levels);
    let energies = mu.iter().map(|mu| (mu + beta * beta) / (2.0 * m * a * a)).collect();
    Ok(OracleSpectrum {
        beta,
        mu,
        energies,
        grid,
    })
}

/// Number of finite-difference eigenvalues below `¼` on the grid.
pub fn whittaker_bound_count(beta: f64, grid: FdGrid) -> usize {
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let s: Vec<f64> = (0..grid.n).map(|i| grid.node(i)).collect();
    let diag: Vec<f64> = s
        .iter()
        .map(|&si| si * si * (2.0 * inv_h2 + 0.25 - beta / si))
        .collect();
    let off: Vec<f64> = s.windows(2).map(|w| -w[0] * w[1] * inv_h2).collect();
    sturm_count(&diag, &off, 0.25)
}

#[derive(Serialize)]
struct OracleJson<'a> {
    beta: f64,
    grid: &'a FdGrid,
    mu: &'a [f64],
    energies: &'a [f64],
    analytic: Vec<f64>,
    relerr: Vec<f64>,
}

impl OracleSpectrum {
    /// Closed-form energies for the same levels.
    pub fn analytic(&self, m: f64, a: f64) -> Result<Vec<f64>> {
        (0..self.mu.len())
            .map(|l| Ok(spectra::landau_halfplane(self.beta, l as i64, m, a)?.energy))
            .collect()
    }

    /// `|E_fd − E| / |E|` per level.
    pub fn relerr(&self, m: f64, a: f64) -> Result<Vec<f64>> {
        Ok(self
            .analytic(m, a)?
            .iter()
            .zip(&self.energies)
            .map(|(e, fd)| (fd - e).abs() / e.abs())
            .collect())
    }

    /// `{beta, grid:{smin,smax,n}, mu, energies, analytic, relerr}`.
    pub fn report_json(&self, m: f64, a: f64) -> Result<serde_json::Value> {
        Ok(serde_json::to_value(OracleJson {
            beta: self.beta,
            grid: &self.grid,
            mu: &self.mu,
            energies: &self.energies,
            analytic: self.analytic(m, a)?,
            relerr: self.relerr(m, a)?,
        })
        .expect("plain struct"))
    }
}

/// One Simpson panel `[a, b]` with its end and midpoint samples.
#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
}

impl Panel {
    fn new(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Self {
        Self {
            a,
            b,
            fa: f(a),
            fm: f(0.5 * (a + b)),
            fb: f(b),
        }
    }

    fn simpson(&self) -> f64 {
        (self.b - self.a) / 6.0 * (self.fa + 4.0 * self.fm + self.fb)
    }
}

fn simpson_rec(f: &dyn Fn(f64) -> f64, p: Panel, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (p.a + p.b);
    let left = Panel {
        a: p.a,
        b: m,
        fa: p.fa,
        fm: f(0.5 * (p.a + m)),
        fb: p.fm,
    };
    let right = Panel {
        a: m,
        b: p.b,
        fa: p.fm,
        fm: f(0.5 * (m + p.b)),
        fb: p.fb,
    };
    let (sl, sr) = (left.simpson(), right.simpson());
    let delta = sl + sr - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return sl + sr + delta / 15.0;
    }
    simpson_rec(f, left, sl, tol / 2.0, depth - 1) + simpson_rec(f, right, sr, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    // A few fixed panels first so narrow features are not skipped.
    const PANELS: usize = 64;
    let w = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|i| {
            let p = Panel::new(f, a + i as f64 * w, a + (i + 1) as f64 * w);
            simpson_rec(f, p, p.simpson(), tol / PANELS as f64, 40)
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormResult {
    /// `∫|Ψ|² (a²/y²) dy` per unit length in x.
    pub value: f64,
    pub cutoff: f64,
}

/// Default upper limit: past the last Laguerre zero, where `|Ψ|²` has
/// fallen by `e^{−80}` from its running maximum.
fn default_cutoff(beta: f64, l: i64, c: f64) -> Result<f64> {
    let log_density = |y: f64| -> Result<f64> {
        let v = spectra::eigenfunction_halfplane(beta, l, c, 0.0, y)?.norm();
        Ok(2.0 * v.ln() - 2.0 * y.ln())
    };
    let tau = 2.0 * beta - 2.0 * l as f64 - 1.0;
    let mut y = (4.0 * l as f64 + 2.0 * tau + 4.0) / (2.0 * c);
    let peak = log_density(y)?;
    loop {
        y *= 1.25;
        if log_density(y)? < peak - 80.0 {
            return Ok(y);
        }
    }
}

/// Norm of the unnormalized half-plane eigenfunction with respect to the
/// invariant measure `(a²/y²) dx dy`, per unit length in x.
///
/// The y-integral uses `y = u^q` to soften the power-law behaviour at the
/// origin, then adaptive Simpson on `[0, cutoff^{1/q}]`.
pub fn norm_quadrature(beta: f64, l: i64, c: f64, a: f64, cutoff: Option<f64>) -> Result<NormResult> {
    if beta - (l as f64) <= 0.5 {
        return Err(NumError::NonNormalizable(beta - l as f64));
    }
    // Validates the window and c.
    spectra::eigenfunction_halfplane(beta, l, c, 0.0, 1.0)?;
    let cutoff = match cutoff {
        Some(y) if y > 0.0 => y,
        Some(y) => return Err(NumError::Domain(format!("cutoff must be positive, got {y}"))),
        None => default_cutoff(beta, l, c)?,
    };
    // Near 0 the density behaves like y^p with p = 2β − 2l − 2 > −1.
    let p = 2.0 * beta - 2.0 * l as f64 - 2.0;
    let q = (3.0 / (p + 1.0)).max(1.0);
    let integrand = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let y = u.powf(q);
        let psi = spectra::eigenfunction_halfplane(beta, l, c, 0.0, y)
            .map(|v| v.norm_sqr())
            .unwrap_or(0.0);
        psi * a * a / (y * y) * q * u.powf(q - 1.0)
    };
    let umax = cutoff.powf(1.0 / q);
    let rough = adaptive_simpson(&integrand, 0.0, umax, 1e-6);
    let value = adaptive_simpson(&integrand, 0.0, umax, 1e-14 * rough.abs().max(f64::MIN_POSITIVE));
    Ok(NormResult { value, cutoff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::plane_ring;
    use crate::models;
    use crate::opalg::{mono_op, GaussianRational};
    use approx::assert_relative_eq;

    fn natural() -> Bindings {
        [("m", 1.0), ("a", 1.0), ("beta", 5.0)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect()
    }

    #[test]
    fn stencils_exact_on_cubics() {
        let r = plane_ring();
        let dxx = DiffOp::partial(&r, "x").unwrap().pow(2);
        let f = |p: &[f64]| Complex64::new(p[0] * p[0], 0.0);
        let v = fd_apply(&dxx, &f, &[0.3, 1.0], 0.1, &Bindings::new()).unwrap();
        assert_relative_eq!(v.re, 2.0, epsilon = 1e-12);
        let dxy = DiffOp::partial(&r, "x")
            .unwrap()
            .compose(&DiffOp::partial(&r, "y").unwrap())
            .unwrap();
        let g = |p: &[f64]| Complex64::new(p[0].powi(3) * p[1] + p[1].powi(3), 0.0);
        let v = fd_apply(&dxy, &g, &[0.7, -0.4], 0.05, &Bindings::new()).unwrap();
        assert_relative_eq!(v.re, 3.0 * 0.49, epsilon = 1e-12);
    }

    #[test]
    fn fd_apply_errors() {
        let h = models::hamiltonian_halfplane();
        let f = |_: &[f64]| Complex64::new(1.0, 0.0);
        assert!(fd_apply(&h, &f, &[0.0, 1.0], 1e-3, &Bindings::new()).is_err());
        let sing = mono_op(&plane_ring(), GaussianRational::one(), &[("y", -1)]).unwrap();
        assert!(matches!(
            fd_apply(&sing, &f, &[0.0, 0.0], 1e-3, &Bindings::new()),
            Err(NumError::Algebra(AlgebraError::Singular(_)))
        ));
    }

    #[test]
    fn halfplane_ground_state_residual() {
        let h = models::hamiltonian_halfplane();
        let psi = |p: &[f64]| spectra::eigenfunction_halfplane(5.0, 0, 1.0, p[0], p[1]).unwrap();
        let pt = [0.2, 1.0];
        let v = fd_apply(&h, &psi, &pt, 1e-3, &natural()).unwrap();
        assert_relative_eq!(v.re / psi(&pt).re, 2.5, max_relative = 1e-8);
    }

    #[test]
    fn tridiag_closed_form() {
        let n = 50;
        let ev = tridiag_eigs(&vec![2.0; n], &vec![-1.0; n - 1], n);
        for (j, e) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((j + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((e - exact).abs() < 1e-11, "{j}: {e} vs {exact}");
        }
        let diag = tridiag_eigs(&[3.0, -1.0, 2.0], &[0.0, 0.0], 3);
        for (got, want) in diag.iter().zip([-1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let one = tridiag_eigs(&[4.5], &[], 1);
        assert!((one[0] - 4.5).abs() < 1e-12);
    }

    #[test]
    fn oracle_small_grid() {
        let grid = FdGrid::new(1e-3, 60.0, 4000).unwrap();
        let o = whittaker_oracle(3.0, grid, 2, 1.0, 1.0).unwrap();
        for (e, want) in o.energies.iter().zip(o.analytic(1.0, 1.0).unwrap()) {
            assert!((e - want).abs() / want < 5e-3, "{e} vs {want}");
        }
        assert!(whittaker_oracle(3.0, grid, 4, 1.0, 1.0).is_err());
        let coarse = FdGrid::new(1e-3, 2.0, 100).unwrap();
        assert!(matches!(
            whittaker_oracle(5.0, coarse, 5, 1.0, 1.0),
            Err(NumError::Resolution { .. })
        ));
        assert!(FdGrid::new(1e-3, 60.0, 50).is_err());
    }

    #[test]
    fn norm_finite_and_stable() {
        let n = norm_quadrature(5.0, 0, 1.0, 1.0, None).unwrap();
        // ∫ e^{−2y} y^8 dy = 8!/2^9
        assert_relative_eq!(n.value, 40320.0 / 512.0, max_relative = 1e-10);
        let doubled = norm_quadrature(5.0, 0, 1.0, 1.0, Some(2.0 * n.cutoff)).unwrap();
        assert!((doubled.value - n.value).abs() / n.value < 1e-10);
        assert!(norm_quadrature(5.0, 4, 1.0, 1.0, None).is_ok());
        assert!(matches!(
            norm_quadrature(4.5, 4, 1.0, 1.0, None),
            Err(NumError::NonNormalizable(_))
        ));
    }
}
