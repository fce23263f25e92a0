//! Classical observables on phase space and the canonical Poisson bracket.

use std::sync::Arc;

use super::poly::LaurentPoly;
use super::ring::Ring;
use super::scalar::GaussianRational;
use super::AlgebraError;

/// A ring together with its canonical pairs `(q_r, p_r)`.
#[derive(Debug, PartialEq, Eq)]
pub struct PhaseSpace {
    ring: Arc<Ring>,
    pairs: Vec<(usize, usize)>,
}

impl PhaseSpace {
    pub fn new(ring: Arc<Ring>, pairs: &[(&str, &str)]) -> Result<Arc<Self>, AlgebraError> {
        let pairs = pairs
            .iter()
            .map(|(q, p)| Ok((ring.index_of(q)?, ring.index_of(p)?)))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        Ok(Arc::new(Self { ring, pairs }))
    }

    /// `(x, y, p_x, p_y)` with `y` Laurent (half-plane), plus derivative-inert
    /// parameters.
    pub fn planar(params: &[(&str, bool)]) -> Result<Arc<Self>, AlgebraError> {
        let mut b = Ring::builder()
            .geometric("x", false)
            .geometric("y", true)
            .geometric("px", false)
            .geometric("py", false);
        for (name, laurent) in params {
            b = b.parameter(name, *laurent);
        }
        Self::new(b.build()?, &[("x", "px"), ("y", "py")])
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn zero(self: &Arc<Self>) -> PhasePoly {
        PhasePoly::new(self, LaurentPoly::zero(&self.ring))
    }

    pub fn constant(self: &Arc<Self>, c: GaussianRational) -> PhasePoly {
        PhasePoly::new(self, LaurentPoly::constant(&self.ring, c))
    }

    pub fn monomial(self: &Arc<Self>, c: GaussianRational, powers: &[(&str, i32)]) -> Result<PhasePoly, AlgebraError> {
        Ok(PhasePoly::new(self, LaurentPoly::monomial(&self.ring, c, powers)?))
    }

    pub fn var(self: &Arc<Self>, name: &str) -> Result<PhasePoly, AlgebraError> {
        self.monomial(GaussianRational::one(), &[(name, 1)])
    }
}

#[derive(Clone, Debug)]
pub struct PhasePoly {
    space: Arc<PhaseSpace>,
    poly: LaurentPoly,
}

impl PartialEq for PhasePoly {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.poly == other.poly
    }
}

impl PhasePoly {
    pub fn new(space: &Arc<PhaseSpace>, poly: LaurentPoly) -> Self {
        Self {
            space: Arc::clone(space),
            poly,
        }
    }

    pub fn space(&self) -> &Arc<PhaseSpace> {
        &self.space
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn lift(&self, poly: LaurentPoly) -> Self {
        Self::new(&self.space, poly)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.lift(self.poly.add(&o.poly))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.lift(self.poly.sub(&o.poly))
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.lift(self.poly.mul(&o.poly))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.lift(self.poly.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.lift(self.poly.neg())
    }

    pub fn pow(&self, e: u32) -> Self {
        self.lift(self.poly.pow(e))
    }

    pub fn partial(&self, name: &str) -> Result<Self, AlgebraError> {
        let k = self.space.ring.index_of(name)?;
        Ok(self.lift(self.poly.derivative(k)))
    }

    /// Fixes one symbol to an exact value.
    pub fn substitute(&self, name: &str, value: &GaussianRational) -> Result<Self, AlgebraError> {
        let k = self.space.ring.index_of(name)?;
        Ok(self.lift(self.poly.substitute_scalar(k, value)?))
    }

    /// Real value at a point; `values` follows the ring's symbol order.
    pub fn eval(&self, values: &[f64]) -> Result<f64, AlgebraError> {
        let z: Vec<_> = values.iter().map(|&v| num_complex::Complex64::new(v, 0.0)).collect();
        Ok(self.poly.eval(&z)?.re)
    }

    pub fn render(&self) -> String {
        super::render::render_poly(&self.poly)
    }
}

/// `{F, G} = Σ_r (∂F/∂q_r ∂G/∂p_r − ∂F/∂p_r ∂G/∂q_r)`.
pub fn poisson_bracket(f: &PhasePoly, g: &PhasePoly) -> Result<PhasePoly, AlgebraError> {
    if f.space != g.space {
        return Err(AlgebraError::RingMismatch);
    }
    let mut acc = LaurentPoly::zero(&f.space.ring);
    for &(q, p) in &f.space.pairs {
        let t = f.poly.derivative(q).mul(&g.poly.derivative(p));
        let u = f.poly.derivative(p).mul(&g.poly.derivative(q));
        acc = acc.add(&t).sub(&u);
    }
    Ok(f.lift(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_pairs() {
        let s = PhaseSpace::planar(&[]).unwrap();
        let x = s.var("x").unwrap();
        let px = s.var("px").unwrap();
        let py = s.var("py").unwrap();
        let one = s.constant(GaussianRational::one());
        assert_eq!(poisson_bracket(&x, &px).unwrap(), one);
        assert!(poisson_bracket(&x, &py).unwrap().is_zero());
        assert_eq!(poisson_bracket(&px, &x).unwrap(), one.neg());
    }

    #[test]
    fn self_bracket_vanishes() {
        let s = PhaseSpace::planar(&[("beta", false)]).unwrap();
        let f = s
            .monomial(GaussianRational::from_int(3), &[("x", 2), ("py", 1)])
            .unwrap()
            .add(
                &s.monomial(GaussianRational::one(), &[("y", -1), ("px", 2), ("beta", 1)])
                    .unwrap(),
            );
        assert!(poisson_bracket(&f, &f).unwrap().is_zero());
    }
}
