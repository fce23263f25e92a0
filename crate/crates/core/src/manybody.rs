//! Lowest-Landau-level many-body trial states: Slater determinants of the
//! one-body states `z^n e^{−|z|²/4z0²}`, Laughlin states and filling factors.
//!
//! Both wavefunctions are evaluated in a canonical particle order (points
//! sorted by value) and the permutation parity is applied afterwards, so an
//! exchange of two particles flips the sign bit and nothing else.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_PARTICLES: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ManyBodyError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("Pauli violation: orbital {0} is occupied twice")]
    Pauli(u32),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

type Result<T> = std::result::Result<T, ManyBodyError>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct ParticleConfig {
    points: Vec<Complex64>,
    z0: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    z0: f64,
    points: Vec<[f64; 2]>,
}

impl TryFrom<RawConfig> for ParticleConfig {
    type Error = ManyBodyError;

    fn try_from(raw: RawConfig) -> Result<Self> {
        ParticleConfig::new(raw.points.iter().map(|p| Complex64::new(p[0], p[1])).collect(), raw.z0)
    }
}

impl From<ParticleConfig> for RawConfig {
    fn from(c: ParticleConfig) -> Self {
        RawConfig {
            z0: c.z0,
            points: c.points.iter().map(|p| [p.re, p.im]).collect(),
        }
    }
}

impl ParticleConfig {
    pub fn new(points: Vec<Complex64>, z0: f64) -> Result<Self> {
        if points.is_empty() || points.len() > MAX_PARTICLES {
            return Err(ManyBodyError::Config(format!(
                "need 1..={MAX_PARTICLES} particles, got {}",
                points.len()
            )));
        }
        if !(z0 > 0.0 && z0.is_finite()) {
            return Err(ManyBodyError::Config(format!(
                "z0 must be positive and finite, got {z0}"
            )));
        }
        if points.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) {
            return Err(ManyBodyError::Config("non-finite particle position".into()));
        }
        Ok(Self { points, z0 })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same configuration with particles `i` and `j` exchanged.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut c = self.clone();
        c.points.swap(i, j);
        c
    }

    /// Indices in canonical order and the parity of that permutation.
    fn canonical(&self) -> (Vec<usize>, bool) {
        let mut idx: Vec<usize> = (0..self.points.len()).collect();
        idx.sort_by(|&a, &b| {
            let (p, q) = (self.points[a], self.points[b]);
            p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)).then(a.cmp(&b))
        });
        // Parity from the cycle decomposition.
        let mut seen = vec![false; idx.len()];
        let mut odd = false;
        for start in 0..idx.len() {
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = idx[k];
                len += 1;
            }
            if len > 0 && len % 2 == 0 {
                odd = !odd;
            }
        }
        (idx, odd)
    }

    /// `exp(−Σ|z_i|²/4z0²)`.
    pub fn gaussian(&self) -> f64 {
        let (idx, _) = self.canonical();
        let s: f64 = idx.iter().map(|&i| self.points[i].norm_sqr()).sum();
        (-s / (4.0 * self.z0 * self.z0)).exp()
    }
}

/// Determinant by LU decomposition with partial pivoting.
pub fn complex_det(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r][col].norm().total_cmp(&a[s][col].norm()))
            .expect("non-empty range");
        if a[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in rest.iter_mut() {
            let factor = row[col] / p;
            for (x, &v) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= factor * v;
            }
        }
    }
    det
}

/// `det[z_i^{n_j}] · exp(−Σ|z_i|²/4z0²)`.
pub fn slater_lll(cfg: &ParticleConfig, orbitals: &[u32]) -> Result<Complex64> {
    if orbitals.len() != cfg.len() {
        return Err(ManyBodyError::Invalid(format!(
            "{} orbitals for {} particles",
            orbitals.len(),
            cfg.len()
        )));
    }
    let mut sorted = orbitals.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(ManyBodyError::Pauli(w[0]));
    }
    let (idx, odd) = cfg.canonical();
    let matrix = idx
        .iter()
        .map(|&i| orbitals.iter().map(|&n| cfg.points[i].powu(n)).collect())
        .collect();
    let det = complex_det(matrix) * cfg.gaussian();
    Ok(if odd { -det } else { det })
}

/// `Π_{i<j}(z_i − z_j)^m · exp(−Σ|z_i|²/4z0²)`.
pub fn laughlin(cfg: &ParticleConfig, m: u32) -> Result<Complex64> {
    if m == 0 {
        return Err(ManyBodyError::Invalid("Laughlin exponent must be at least 1".into()));
    }
    let (idx, odd) = cfg.canonical();
    let mut prod = Complex64::new(1.0, 0.0);
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            prod *= (cfg.points[idx[a]] - cfg.points[idx[b]]).powu(m);
        }
    }
    let value = prod * cfg.gaussian();
    Ok(if odd && m % 2 == 1 { -value } else { value })
}

/// `ν = 2π (N/S) / B` in natural units.
pub fn filling_factor(n: u32, b: f64, area: f64) -> Result<f64> {
    if !(b > 0.0 && area > 0.0) {
        return Err(ManyBodyError::Invalid(format!(
            "need B > 0 and S > 0, got B = {b}, S = {area}"
        )));
    }
    Ok(2.0 * std::f64::consts::PI * (f64::from(n) / area) / b)
}

/// `ν = N / N_φ` as an exact fraction.
pub fn filling_quantized(n: u32, n_phi: u32) -> Result<BigRational> {
    if n_phi == 0 {
        return Err(ManyBodyError::Invalid("N_phi must be at least 1".into()));
    }
    Ok(BigRational::new(BigInt::from(n), BigInt::from(n_phi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn config_validation() {
        assert!(ParticleConfig::new(vec![], 1.0).is_err());
        assert!(ParticleConfig::new(vec![c(0.0, 0.0); 13], 1.0).is_err());
        assert!(ParticleConfig::new(vec![c(0.0, 0.0)], 0.0).is_err());
        assert!(ParticleConfig::new(vec![c(f64::NAN, 0.0)], 1.0).is_err());
    }

    #[test]
    fn single_particle() {
        let cfg = ParticleConfig::new(vec![c(1.0, 2.0)], 1.5).unwrap();
        let v = slater_lll(&cfg, &[0]).unwrap();
        assert_relative_eq!(v.re, (-5.0f64 / 9.0).exp(), max_relative = 1e-15);
    }

    #[test]
    fn two_particle_vandermonde() {
        let (z1, z2) = (c(0.3, -0.2), c(-1.1, 0.7));
        let cfg = ParticleConfig::new(vec![z1, z2], 1.0).unwrap();
        let v = slater_lll(&cfg, &[0, 1]).unwrap();
        let want = (z2 - z1) * cfg.gaussian();
        assert_relative_eq!((v - want).norm(), 0.0, epsilon = 1e-15);
        assert_eq!(slater_lll(&cfg.swapped(0, 1), &[0, 1]).unwrap(), -v);
        assert!(matches!(slater_lll(&cfg, &[1, 1]), Err(ManyBodyError::Pauli(1))));
    }

    #[test]
    fn laughlin_examples() {
        let cfg = ParticleConfig::new(vec![c(0.0, 0.0), c(1.0, 0.0)], 1.0).unwrap();
        let v = laughlin(&cfg, 3).unwrap();
        assert_relative_eq!(v.re, -(-0.25f64).exp(), max_relative = 1e-15);
        assert_eq!(v.im, 0.0);
        let merged = ParticleConfig::new(vec![c(0.5, 0.5), c(0.5, 0.5), c(2.0, 0.0)], 1.0).unwrap();
        assert_eq!(laughlin(&merged, 3).unwrap().norm(), 0.0);
    }

    #[test]
    fn laughlin_zero_order() {
        let at = |eps: f64| {
            let cfg = ParticleConfig::new(vec![c(0.2, 0.1), c(0.2 + eps, 0.1), c(-1.0, 0.4)], 1.0).unwrap();
            laughlin(&cfg, 3).unwrap().norm().powf(1.0 / 3.0)
        };
        assert_relative_eq!(at(1e-4) / at(1e-5), 10.0, max_relative = 1e-3);
    }

    #[test]
    fn exchange_symmetry() {
        let cfg = ParticleConfig::new(vec![c(0.1, 0.9), c(-0.4, 0.2), c(1.3, -0.8), c(0.0, -1.1)], 1.2).unwrap();
        for m in 1..=4 {
            let v = laughlin(&cfg, m).unwrap();
            let s = laughlin(&cfg.swapped(1, 3), m).unwrap();
            if m % 2 == 1 {
                assert_eq!(s, -v);
            } else {
                assert_eq!(s, v);
            }
        }
    }

    #[test]
    fn determinant_basics() {
        let m = vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(3.0, 0.0), c(4.0, 0.0)]];
        assert_relative_eq!(complex_det(m).re, -2.0, epsilon = 1e-15);
        assert_eq!(complex_det(vec![vec![c(0.0, 0.0)]]), c(0.0, 0.0));
    }

    #[test]
    fn filling() {
        assert_eq!(filling_quantized(3, 9).unwrap(), BigRational::new(1.into(), 3.into()));
        assert_eq!(filling_quantized(7, 7).unwrap(), BigRational::from_integer(1.into()));
        assert_relative_eq!(
            filling_factor(10, 2.0 * std::f64::consts::PI, 10.0).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        assert!(filling_quantized(1, 0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let cfg: ParticleConfig = serde_json::from_str(r#"{"z0": 1.0, "points": [[0, 0], [1, 0.5]]}"#).unwrap();
        assert_eq!(cfg.points()[1], c(1.0, 0.5));
        let back: ParticleConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(serde_json::from_str::<ParticleConfig>(r#"{"z0": -1, "points": [[0, 0]]}"#).is_err());
    }
}
