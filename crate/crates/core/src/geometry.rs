//! Conformal 2D metrics `Ω²(dx² + dy²)`, gauge potentials, de Witt momenta
//! and the gauged Laplace–Beltrami operator.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use thiserror::Error;

use crate::opalg::{AlgebraError, DiffOp, GaussianRational, LaurentPoly, RationalFunc, Ring};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numeric evaluation needs a numeric metric scale")]
    SymbolicScale,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The real-coordinate ring used for all planar operators: geometric `x`, `y`
/// (`y` Laurent, as on the half-plane) and the parameters `beta`, `m`, `a`,
/// `rho`, `B`.
pub fn plane_ring() -> Arc<Ring> {
    static RING: OnceLock<Arc<Ring>> = OnceLock::new();
    Arc::clone(RING.get_or_init(|| {
        Ring::builder()
            .geometric("x", false)
            .geometric("y", true)
            .parameter("beta", false)
            .parameter("m", true)
            .parameter("a", true)
            .parameter("rho", true)
            .parameter("B", false)
            .build()
            .expect("static declaration")
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricKind {
    Flat,
    HalfPlane,
    Disk,
}

/// Length scale `a` (half-plane) or `ρ` (disk).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scale {
    /// Kept as the ring symbol `a` or `rho`.
    Symbolic,
    Value(f64),
}

#[derive(Clone, Debug)]
pub struct Metric2D {
    pub kind: MetricKind,
    pub scale: Scale,
    /// `Ω`, with `g_11 = g_22 = Ω²`.
    pub conformal_factor: RationalFunc,
}

fn rf(p: LaurentPoly) -> RationalFunc {
    RationalFunc::from_poly(p)
}

fn exact(x: f64) -> Result<GaussianRational, GeometryError> {
    GaussianRational::from_f64(x).ok_or_else(|| GeometryError::Domain(format!("non-finite parameter {x}")))
}

/// `φ = 1 − (x² + y²)/ρ²` over [`plane_ring`].
pub fn disk_phi(scale: Scale) -> Result<LaurentPoly, GeometryError> {
    let r = plane_ring();
    let x = LaurentPoly::var(&r, "x")?;
    let y = LaurentPoly::var(&r, "y")?;
    let inv_rho2 = match scale {
        Scale::Symbolic => LaurentPoly::monomial(&r, GaussianRational::one(), &[("rho", -2)])?,
        Scale::Value(rho) => LaurentPoly::constant(&r, exact(rho * rho)?.inv().ok_or(AlgebraError::DivisionByZero)?),
    };
    Ok(LaurentPoly::one(&r).sub(&x.mul(&x).add(&y.mul(&y)).mul(&inv_rho2)))
}

/// Builds the metric of the given kind: `Ω = 1` (flat), `a/y` (half-plane)
/// or `1/φ` (disk of radius ρ).
pub fn make_metric(kind: MetricKind, scale: Scale) -> Result<Metric2D, GeometryError> {
    if let Scale::Value(v) = scale {
        if !(v > 0.0) || !v.is_finite() {
            return Err(GeometryError::Domain(format!("metric scale must be positive, got {v}")));
        }
    }
    let r = plane_ring();
    let conformal_factor = match kind {
        MetricKind::Flat => RationalFunc::one(&r),
        MetricKind::HalfPlane => {
            let a = match scale {
                Scale::Symbolic => LaurentPoly::var(&r, "a")?,
                Scale::Value(a) => LaurentPoly::constant(&r, exact(a)?),
            };
            rf(a.mul(&LaurentPoly::monomial(&r, GaussianRational::one(), &[("y", -1)])?))
        }
        MetricKind::Disk => RationalFunc::inverse_of_poly(&disk_phi(scale)?)?,
    };
    Ok(Metric2D {
        kind,
        scale,
        conformal_factor,
    })
}

impl Metric2D {
    /// `√g = Ω²`.
    pub fn sqrt_det(&self) -> RationalFunc {
        self.conformal_factor.mul(&self.conformal_factor)
    }

    /// `g^{11} = g^{22} = Ω^{-2}`.
    pub fn inverse_component(&self) -> Result<RationalFunc, GeometryError> {
        Ok(self.sqrt_det().inv()?)
    }

    /// True when `(x, y)` lies in the open domain of the metric.
    pub fn contains(&self, x: f64, y: f64) -> Result<bool, GeometryError> {
        Ok(match self.kind {
            MetricKind::Flat => x.is_finite() && y.is_finite(),
            MetricKind::HalfPlane => y > 0.0,
            MetricKind::Disk => match self.scale {
                Scale::Value(rho) => x * x + y * y < rho * rho,
                Scale::Symbolic => return Err(GeometryError::SymbolicScale),
            },
        })
    }

    fn eval_factor(&self, x: f64, y: f64) -> Result<f64, GeometryError> {
        if matches!(self.scale, Scale::Symbolic) && self.kind != MetricKind::Flat {
            return Err(GeometryError::SymbolicScale);
        }
        let ring = plane_ring();
        let mut vals = vec![Complex64::new(f64::NAN, 0.0); ring.len()];
        vals[0] = Complex64::new(x, 0.0);
        vals[1] = Complex64::new(y, 0.0);
        Ok(self.conformal_factor.eval(&vals)?.re)
    }
}

/// Vector potential `(A_x, A_y)`.
#[derive(Clone, Debug)]
pub struct GaugePotential {
    pub ax: RationalFunc,
    pub ay: RationalFunc,
}

impl GaugePotential {
    pub fn zero() -> Self {
        let r = plane_ring();
        Self {
            ax: RationalFunc::zero(&r),
            ay: RationalFunc::zero(&r),
        }
    }

    /// `A = (−β/y, 0)` on the half-plane.
    pub fn halfplane() -> Result<Self, GeometryError> {
        let r = plane_ring();
        Ok(Self {
            ax: rf(LaurentPoly::monomial(
                &r,
                GaussianRational::from_int(-1),
                &[("beta", 1), ("y", -1)],
            )?),
            ay: RationalFunc::zero(&r),
        })
    }

    /// Symmetric gauge `A = B(y, −x)` on the disk.
    pub fn disk_symmetric() -> Result<Self, GeometryError> {
        let r = plane_ring();
        Ok(Self {
            ax: rf(LaurentPoly::monomial(
                &r,
                GaussianRational::one(),
                &[("B", 1), ("y", 1)],
            )?),
            ay: rf(LaurentPoly::monomial(
                &r,
                GaussianRational::from_int(-1),
                &[("B", 1), ("x", 1)],
            )?),
        })
    }
}

/// `p_j = −i(∂_j + ½ ∂_j ln √g)`, the log-derivative taken exactly as
/// `(∂_j √g)/√g`.
pub fn dewitt_momenta(metric: &Metric2D) -> Result<(DiffOp, DiffOp), GeometryError> {
    let r = plane_ring();
    let sg = metric.sqrt_det();
    let sg_inv = sg.inv()?;
    let minus_i = GaussianRational::imag(-1);
    let half = GaussianRational::from_frac(1, 2);
    let momentum = |var: usize, name: &str| -> Result<DiffOp, GeometryError> {
        let log_d = sg.derivative(var).mul(&sg_inv).scale(&half);
        Ok(DiffOp::partial(&r, name)?
            .add(&DiffOp::multiplication(log_d))?
            .scale(&minus_i))
    };
    Ok((momentum(0, "x")?, momentum(1, "y")?))
}

/// Operator ordering used when quantizing `(1/2m√g) P_i √g g^{ij} P_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ordering {
    /// `(1/2m) (1/√g) P_i (√g g^{ij}) P_j`, exactly as the gauged form is
    /// usually written.
    Literal,
    /// `(1/2m) g^{-1/4} P_i (√g g^{ij}) P_j g^{-1/4}`: with de Witt momenta
    /// this is the Hermitian Laplace–Beltrami operator `−(1/√g)∂_i √g g^{ij} ∂_j`
    /// plus gauge terms.
    Symmetric,
}

/// Gauged Laplace–Beltrami Hamiltonian in normal form. `mass` is usually the
/// ring symbol `m`.
pub fn laplace_beltrami(
    metric: &Metric2D,
    potential: &GaugePotential,
    mass: &RationalFunc,
    ordering: Ordering,
) -> Result<DiffOp, GeometryError> {
    let (px, py) = dewitt_momenta(metric)?;
    let big_px = px.sub(&DiffOp::multiplication(potential.ax.clone()))?;
    let big_py = py.sub(&DiffOp::multiplication(potential.ay.clone()))?;
    let middle = DiffOp::multiplication(metric.sqrt_det().mul(&metric.inverse_component()?));
    let kinetic = big_px
        .compose(&middle)?
        .compose(&big_px)?
        .add(&big_py.compose(&middle)?.compose(&big_py)?)?;
    let two_m_inv = mass.scale(&GaussianRational::from_int(2)).inv()?;
    let op = match ordering {
        Ordering::Literal => kinetic.left_mul(&metric.sqrt_det().inv()?),
        Ordering::Symmetric => {
            let quarter = DiffOp::multiplication(metric.conformal_factor.inv()?);
            quarter.compose(&kinetic)?.compose(&quarter)?
        }
    };
    Ok(op.left_mul(&two_m_inv))
}

/// Scalar curvature `R = 2K = −2 e^{−2u} Δu`, `u = ln Ω`, with `Δu` from the
/// five-point second-order stencil.
pub fn scalar_curvature_fd(metric: &Metric2D, point: (f64, f64), step: f64) -> Result<f64, GeometryError> {
    let (x, y) = point;
    if !(step > 0.0) {
        return Err(GeometryError::Domain("step must be positive".into()));
    }
    let stencil = [(x, y), (x + step, y), (x - step, y), (x, y + step), (x, y - step)];
    for &(sx, sy) in &stencil {
        if !metric.contains(sx, sy)? {
            return Err(GeometryError::Domain(format!(
                "stencil point ({sx}, {sy}) is outside the domain"
            )));
        }
    }
    let u = |sx: f64, sy: f64| -> Result<f64, GeometryError> { Ok(metric.eval_factor(sx, sy)?.ln()) };
    let u0 = u(x, y)?;
    let lap = (u(x + step, y)? + u(x - step, y)? + u(x, y + step)? + u(x, y - step)? - 4.0 * u0) / (step * step);
    Ok(-2.0 * (-2.0 * u0).exp() * lap)
}

/// The reference closed form of the disk Hamiltonian:
/// `(φ/2m){−φΔ − (4/ρ²)(x∂_x + y∂_y) + 2iBφ(y∂_x − x∂_y) + B²φ − (4/ρ²)(1 + 2|w|²/(ρ²φ))}`.
pub fn disk_hamiltonian_reference() -> Result<DiffOp, GeometryError> {
    let r = plane_ring();
    let g = GaussianRational::from_int;
    let phi = rf(disk_phi(Scale::Symbolic)?);
    let mono = |c: GaussianRational, p: &[(&str, i32)]| -> Result<RationalFunc, GeometryError> {
        Ok(rf(LaurentPoly::monomial(&r, c, p)?))
    };
    let dx = DiffOp::partial(&r, "x")?;
    let dy = DiffOp::partial(&r, "y")?;
    let lap = dx.pow(2).add(&dy.pow(2))?;
    let euler = dx
        .left_mul(&mono(g(1), &[("x", 1)])?)
        .add(&dy.left_mul(&mono(g(1), &[("y", 1)])?))?;
    let rot = dx
        .left_mul(&mono(g(1), &[("y", 1)])?)
        .sub(&dy.left_mul(&mono(g(1), &[("x", 1)])?))?;
    let four_rho2 = mono(g(4), &[("rho", -2)])?;
    let w2 = mono(g(1), &[("x", 2)])?.add(&mono(g(1), &[("y", 2)])?);
    let tail = RationalFunc::one(&r).add(&w2.scale(&g(2)).mul(&mono(g(1), &[("rho", -2)])?).mul(&phi.inv()?));
    let bracket = lap
        .left_mul(&phi.neg())
        .sub(&euler.left_mul(&four_rho2))?
        .add(&rot.left_mul(&phi.mul(&mono(GaussianRational::imag(2), &[("B", 1)])?)))?
        .add(&DiffOp::multiplication(mono(g(1), &[("B", 2)])?.mul(&phi)))?
        .sub(&DiffOp::multiplication(four_rho2.mul(&tail)))?;
    let prefactor = phi.mul(&mono(GaussianRational::from_frac(1, 2), &[("m", -1)])?);
    Ok(bracket.left_mul(&prefactor))
}

/// `laplace_beltrami(disk, A = B(y,−x), m, Literal) − disk_hamiltonian_reference()`.
pub fn disk_expansion_diff() -> Result<DiffOp, GeometryError> {
    let r = plane_ring();
    let metric = make_metric(MetricKind::Disk, Scale::Symbolic)?;
    let h = laplace_beltrami(
        &metric,
        &GaugePotential::disk_symmetric()?,
        &rf(LaurentPoly::var(&r, "m")?),
        Ordering::Literal,
    )?;
    Ok(h.sub(&disk_hamiltonian_reference()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::DerivIndex;

    fn sym_mass() -> RationalFunc {
        rf(LaurentPoly::var(&plane_ring(), "m").unwrap())
    }

    #[test]
    fn halfplane_sqrt_det() {
        let m = make_metric(MetricKind::HalfPlane, Scale::Symbolic).unwrap();
        let r = plane_ring();
        let expect = rf(LaurentPoly::monomial(&r, GaussianRational::one(), &[("a", 2), ("y", -2)]).unwrap());
        assert!(m.sqrt_det().equals(&expect));
    }

    #[test]
    fn disk_factor_numeric_radius() {
        let m = make_metric(MetricKind::Disk, Scale::Value(2.0)).unwrap();
        let r = plane_ring();
        let x = LaurentPoly::var(&r, "x").unwrap();
        let y = LaurentPoly::var(&r, "y").unwrap();
        let phi = LaurentPoly::one(&r).sub(&x.mul(&x).add(&y.mul(&y)).scale(&GaussianRational::from_frac(1, 4)));
        assert!(m.conformal_factor.equals(&RationalFunc::inverse_of_poly(&phi).unwrap()));
    }

    #[test]
    fn nonpositive_scale_rejected() {
        assert!(matches!(
            make_metric(MetricKind::HalfPlane, Scale::Value(0.0)),
            Err(GeometryError::Domain(_))
        ));
        assert!(make_metric(MetricKind::Disk, Scale::Value(-1.0)).is_err());
    }

    #[test]
    fn momenta_on_each_geometry() {
        let r = plane_ring();
        let mi = GaussianRational::imag(-1);
        let dx = DiffOp::partial(&r, "x").unwrap();
        let dy = DiffOp::partial(&r, "y").unwrap();

        let (px, py) = dewitt_momenta(&make_metric(MetricKind::Flat, Scale::Symbolic).unwrap()).unwrap();
        assert!(px.equals(&dx.scale(&mi)) && py.equals(&dy.scale(&mi)));

        let (px, py) = dewitt_momenta(&make_metric(MetricKind::HalfPlane, Scale::Symbolic).unwrap()).unwrap();
        assert!(px.equals(&dx.scale(&mi)));
        let i_over_y = DiffOp::from_poly(LaurentPoly::monomial(&r, GaussianRational::i(), &[("y", -1)]).unwrap());
        assert!(py.equals(&dy.scale(&mi).add(&i_over_y).unwrap()));

        let (px, _) = dewitt_momenta(&make_metric(MetricKind::Disk, Scale::Symbolic).unwrap()).unwrap();
        let phi = disk_phi(Scale::Symbolic).unwrap();
        let shift = rf(LaurentPoly::monomial(&r, GaussianRational::from_int(2), &[("x", 1), ("rho", -2)]).unwrap())
            .mul(&RationalFunc::inverse_of_poly(&phi).unwrap());
        let expect = dx.add(&DiffOp::multiplication(shift)).unwrap().scale(&mi);
        assert!(px.equals(&expect), "{}", px.render());
    }

    #[test]
    fn flat_free_hamiltonian_is_pure_second_order() {
        let m = make_metric(MetricKind::Flat, Scale::Symbolic).unwrap();
        let h = laplace_beltrami(&m, &GaugePotential::zero(), &sym_mass(), Ordering::Literal).unwrap();
        for (alpha, _) in h.terms() {
            assert_eq!(alpha.order(), 2);
        }
        let r = plane_ring();
        let lap = DiffOp::partial(&r, "x")
            .unwrap()
            .pow(2)
            .add(&DiffOp::partial(&r, "y").unwrap().pow(2))
            .unwrap();
        let expect = lap.left_mul(&rf(LaurentPoly::monomial(
            &r,
            GaussianRational::from_frac(-1, 2),
            &[("m", -1)],
        )
        .unwrap()));
        assert!(h.equals(&expect));
    }

    #[test]
    fn literal_ordering_differs_on_halfplane_by_first_order_term() {
        let m = make_metric(MetricKind::HalfPlane, Scale::Symbolic).unwrap();
        let a = GaugePotential::halfplane().unwrap();
        let lit = laplace_beltrami(&m, &a, &sym_mass(), Ordering::Literal).unwrap();
        let sym = laplace_beltrami(&m, &a, &sym_mass(), Ordering::Symmetric).unwrap();
        let d = lit.sub(&sym).unwrap();
        // (y∂_y − 1)/(m a²)
        let r = plane_ring();
        let c = |p: &[(&str, i32)], k| rf(LaurentPoly::monomial(&r, GaussianRational::from_int(k), p).unwrap());
        assert!(d
            .coefficient(&DerivIndex(vec![0, 1]))
            .unwrap()
            .equals(&c(&[("y", 1), ("m", -1), ("a", -2)], 1)));
        assert!(d
            .coefficient(&DerivIndex(vec![0, 0]))
            .unwrap()
            .equals(&c(&[("m", -1), ("a", -2)], -1)));
        assert_eq!(d.terms().count(), 2);
    }

    #[test]
    fn curvature_halfplane_and_disk() {
        let h = make_metric(MetricKind::HalfPlane, Scale::Value(1.0)).unwrap();
        let k = scalar_curvature_fd(&h, (0.0, 1.0), 1e-3).unwrap();
        assert!((k + 2.0).abs() < 10.0 * 1e-6, "{k}");
        let d = make_metric(MetricKind::Disk, Scale::Value(1.0)).unwrap();
        let k = scalar_curvature_fd(&d, (0.1, 0.2), 1e-3).unwrap();
        assert!((k + 8.0).abs() < 1e-4, "{k}");
    }

    #[test]
    fn curvature_stencil_outside_domain() {
        let h = make_metric(MetricKind::HalfPlane, Scale::Value(1.0)).unwrap();
        assert!(matches!(
            scalar_curvature_fd(&h, (0.0, 1e-4), 1e-3),
            Err(GeometryError::Domain(_))
        ));
        let d = make_metric(MetricKind::Disk, Scale::Value(1.0)).unwrap();
        assert!(scalar_curvature_fd(&d, (0.9995, 0.0), 1e-3).is_err());
        let s = make_metric(MetricKind::HalfPlane, Scale::Symbolic).unwrap();
        assert!(matches!(
            scalar_curvature_fd(&s, (0.0, 1.0), 1e-3),
            Err(GeometryError::SymbolicScale)
        ));
    }
}
