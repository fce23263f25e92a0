//! Closed-form Landau levels on the plane, the half-plane and the sphere,
//! plus the corresponding eigenfunctions.
//!
//! Energies are computed exactly in rational arithmetic from the (exactly
//! representable) `f64` inputs and then rounded once, so `energy` is always
//! the nearest double to `energy_exact`.
//!
//! The half-plane level formula arises twice, once from the su(1,1)
//! representation labels and once from the separated Whittaker equation;
//! both give the same expression and [`landau_halfplane`] serves both.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::specfun::laguerre;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("no bound state for beta = {beta}, l = {l}: the window is 0 <= l < beta - 1/2")]
    NoBoundState { beta: f64, l: i64 },
    #[error("invalid parameter: {0}")]
    Domain(String),
}

type Result<T> = std::result::Result<T, SpectraError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Flat,
    Halfplane,
    Sphere,
}

impl std::fmt::Display for Geometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Geometry::Flat => "flat",
            Geometry::Halfplane => "halfplane",
            Geometry::Sphere => "sphere",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumLine {
    pub geometry: Geometry,
    /// Level label (`n` or `l`) plus the context parameters (`beta`, `k`).
    pub quantum_numbers: BTreeMap<String, f64>,
    pub energy: f64,
    pub energy_exact: BigRational,
}

impl SpectrumLine {
    fn new(geometry: Geometry, qn: &[(&str, f64)], exact: BigRational) -> Self {
        Self {
            geometry,
            quantum_numbers: qn.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            energy: exact.to_f64().unwrap_or(f64::NAN),
            energy_exact: exact,
        }
    }

    /// The level label: `n` on the plane, `l` elsewhere.
    pub fn label(&self) -> i64 {
        let key = if self.geometry == Geometry::Flat { "n" } else { "l" };
        self.quantum_numbers.get(key).copied().unwrap_or(f64::NAN) as i64
    }
}

fn exact(v: f64, name: &str) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| SpectraError::Domain(format!("{name} must be finite, got {v}")))
}

fn positive(v: f64, name: &str) -> Result<BigRational> {
    if v > 0.0 {
        exact(v, name)
    } else {
        Err(SpectraError::Domain(format!("{name} must be positive, got {v}")))
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// `E_n = (n + ½) ħ ω_c`.
pub fn landau_flat(n: u32, omega_c: f64, hbar: f64) -> Result<SpectrumLine> {
    let e = (int(n.into()) + half()) * exact(hbar, "hbar")? * exact(omega_c, "omega_c")?;
    Ok(SpectrumLine::new(Geometry::Flat, &[("n", n.into())], e))
}

/// Whether `0 ≤ l < β − ½`.
pub fn in_window(beta: f64, l: i64) -> bool {
    l >= 0 && (l as f64) < beta - 0.5
}

/// `E = (1/2ma²)(β² + ¼ − (l − β + ½)²)` for `0 ≤ l < β − ½`.
pub fn landau_halfplane(beta: f64, l: i64, m: f64, a: f64) -> Result<SpectrumLine> {
    if !in_window(beta, l) {
        return Err(SpectraError::NoBoundState { beta, l });
    }
    let b = exact(beta, "beta")?;
    let shift = int(l) - &b + half();
    let e = (&b * &b + half() * half() - &shift * &shift) / (int(2) * positive(m, "m")? * positive(a, "a")?.pow(2));
    Ok(SpectrumLine::new(
        Geometry::Halfplane,
        &[("l", l as f64), ("beta", beta)],
        e,
    ))
}

/// `#{ l ∈ ℤ : 0 ≤ l < β − ½ }`.
pub fn halfplane_level_count(beta: f64) -> usize {
    let top = beta - 0.5;
    if top <= 0.0 {
        0
    } else {
        top.ceil() as usize
    }
}

/// Every bound level on the half-plane, `l = 0, 1, …`.
pub fn halfplane_spectrum(beta: f64, m: f64, a: f64) -> Result<Vec<SpectrumLine>> {
    (0..halfplane_level_count(beta) as i64)
        .map(|l| landau_halfplane(beta, l, m, a))
        .collect()
}

/// `E = (1/2ma²)(¼ − n² + β²)`, exact.
pub fn energy_from_whittaker_index_exact(n: f64, beta: f64, m: f64, a: f64) -> Result<BigRational> {
    let n = exact(n, "n")?;
    let b = exact(beta, "beta")?;
    Ok((half() * half() - &n * &n + &b * &b) / (int(2) * positive(m, "m")? * positive(a, "a")?.pow(2)))
}

/// `E = (1/2ma²)(¼ − n² + β²)`.
pub fn energy_from_whittaker_index(n: f64, beta: f64, m: f64, a: f64) -> Result<f64> {
    Ok(energy_from_whittaker_index_exact(n, beta, m, a)?
        .to_f64()
        .unwrap_or(f64::NAN))
}

/// `E = (2/ρ²)[(l − k/2)(l − k/2 + 1) − k²/4]`.
pub fn sphere_spectrum(l: u32, k: f64, rho: f64) -> Result<SpectrumLine> {
    let k_ex = exact(k, "k")?;
    let j = int(l.into()) - &k_ex * half();
    let e = int(2) * (&j * (&j + int(1)) - &k_ex * &k_ex * half() * half()) / positive(rho, "rho")?.pow(2);
    Ok(SpectrumLine::new(Geometry::Sphere, &[("l", l.into()), ("k", k)], e))
}

/// `Ψ = e^{−icx − cy} y^{β−l} L_l^{(2β−2l−1)}(2cy)`, unnormalized.
pub fn eigenfunction_halfplane(beta: f64, l: i64, c: f64, x: f64, y: f64) -> Result<Complex64> {
    if !in_window(beta, l) {
        return Err(SpectraError::NoBoundState { beta, l });
    }
    if !(c > 0.0) {
        return Err(SpectraError::Domain(format!("c must be positive, got {c}")));
    }
    if !(y > 0.0) {
        return Err(SpectraError::Domain(format!("y must be positive, got {y}")));
    }
    let lf = l as f64;
    let radial = (-c * y).exp() * y.powf(beta - lf) * laguerre(l as u32, 2.0 * beta - 2.0 * lf - 1.0, 2.0 * c * y);
    Ok(Complex64::from_polar(radial, -c * x))
}

/// Lowest flat-plane level with trivial holomorphic factor: `exp(−|z|²/4z0²)`.
pub fn ground_state_flat(z: Complex64, z0: f64) -> Result<Complex64> {
    if !(z0 > 0.0) {
        return Err(SpectraError::Domain(format!("z0 must be positive, got {z0}")));
    }
    Ok(Complex64::new((-z.norm_sqr() / (4.0 * z0 * z0)).exp(), 0.0))
}

#[derive(Serialize)]
struct LevelJson {
    qn: i64,
    energy: f64,
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    geometry: Geometry,
    params: &'a BTreeMap<String, f64>,
    levels: Vec<LevelJson>,
}

/// `{geometry, params:{...}, levels:[{qn, energy}]}`.
pub fn spectrum_json(geometry: Geometry, params: &BTreeMap<String, f64>, lines: &[SpectrumLine]) -> serde_json::Value {
    let levels = lines
        .iter()
        .map(|l| LevelJson {
            qn: l.label(),
            energy: l.energy,
        })
        .collect();
    serde_json::to_value(SpectrumJson {
        geometry,
        params,
        levels,
    })
    .expect("plain struct")
}

/// `qn,energy` rows with a header, shortest round-trip float formatting.
pub fn spectrum_csv(lines: &[SpectrumLine]) -> String {
    let mut out = String::from("qn,energy\n");
    for l in lines {
        out.push_str(&format!("{},{}\n", l.label(), l.energy));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn flat_levels() {
        assert_eq!(landau_flat(0, 1.0, 1.0).unwrap().energy, 0.5);
        assert_eq!(landau_flat(3, 2.0, 1.0).unwrap().energy, 7.0);
        for n in 0..10 {
            let d = landau_flat(n + 1, 1.3, 0.7).unwrap().energy_exact - landau_flat(n, 1.3, 0.7).unwrap().energy_exact;
            assert_eq!(d, exact(1.3, "").unwrap() * exact(0.7, "").unwrap());
        }
    }

    #[test]
    fn halfplane_levels() {
        let e: Vec<f64> = halfplane_spectrum(5.0, 1.0, 1.0)
            .unwrap()
            .iter()
            .map(|l| l.energy)
            .collect();
        assert_eq!(e, vec![2.5, 6.5, 9.5, 11.5, 12.5]);
        assert!(matches!(
            landau_halfplane(5.0, 5, 1.0, 1.0),
            Err(SpectraError::NoBoundState { .. })
        ));
        assert!(landau_halfplane(5.0, -1, 1.0, 1.0).is_err());
        assert_eq!(halfplane_level_count(5.0), 5);
        assert_eq!(halfplane_level_count(0.4), 0);
        assert_eq!(halfplane_level_count(0.5), 0);
        assert_eq!(halfplane_level_count(1.0), 1);
        assert_eq!(halfplane_level_count(10.5), 10);
    }

    #[test]
    fn halfplane_monotone_in_l() {
        for &beta in &[3.0, 5.0, 10.5] {
            let lines = halfplane_spectrum(beta, 1.0, 1.0).unwrap();
            assert!(lines.windows(2).all(|w| w[0].energy_exact < w[1].energy_exact));
        }
    }

    #[test]
    fn whittaker_index_consistency() {
        assert_eq!(energy_from_whittaker_index(0.5, 0.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(energy_from_whittaker_index(4.5, 5.0, 1.0, 1.0).unwrap(), 2.5);
        for &beta in &[3.0, 5.0, 10.5, 7.25] {
            for l in 0..halfplane_level_count(beta) as i64 {
                let n = beta - l as f64 - 0.5;
                assert_eq!(
                    landau_halfplane(beta, l, 0.75, 1.5).unwrap().energy_exact,
                    energy_from_whittaker_index_exact(n, beta, 0.75, 1.5).unwrap()
                );
            }
        }
    }

    #[test]
    fn sphere_levels() {
        let e: Vec<f64> = (0..3).map(|l| sphere_spectrum(l, 2.0, 1.0).unwrap().energy).collect();
        assert_eq!(e, vec![-2.0, -2.0, 2.0]);
        for l in 0..6 {
            assert_eq!(
                sphere_spectrum(l, 0.0, 2.0).unwrap().energy,
                2.0 / 4.0 * f64::from(l * (l + 1))
            );
        }
    }

    #[test]
    fn eigenfunction_values() {
        let v = eigenfunction_halfplane(5.0, 0, 1.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(v.re, (-1f64).exp(), max_relative = 1e-15);
        let a = eigenfunction_halfplane(5.0, 2, 0.7, 0.0, 2.3).unwrap().norm();
        let b = eigenfunction_halfplane(5.0, 2, 0.7, 4.1, 2.3).unwrap().norm();
        assert_relative_eq!(a, b, max_relative = 1e-14);
        assert!(eigenfunction_halfplane(5.0, 5, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn flat_ground_state() {
        assert_eq!(ground_state_flat(Complex64::new(0.0, 0.0), 1.0).unwrap().re, 1.0);
        let v = ground_state_flat(Complex64::new(0.0, 3.0), 1.5).unwrap();
        assert_relative_eq!(v.re, (-1f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn output_formats() {
        let lines = halfplane_spectrum(5.0, 1.0, 1.0).unwrap();
        let csv = spectrum_csv(&lines);
        assert_eq!(csv, "qn,energy\n0,2.5\n1,6.5\n2,9.5\n3,11.5\n4,12.5\n");
        let params: BTreeMap<String, f64> = [("beta".to_string(), 5.0)].into();
        let j = spectrum_json(Geometry::Halfplane, &params, &lines);
        assert_eq!(j["geometry"], "halfplane");
        assert_eq!(j["levels"][4]["energy"], 12.5);
    }
}
