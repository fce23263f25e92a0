//! Rational functions `num / Π factorᵉ` with a factored denominator.
//!
//! Denominators are kept as products of monic, monomial-free polynomials
//! (`x²+y²−ρ²`, `z−z̄`, ...). Powers of Laurent symbols such as `y` live in the
//! numerator's negative exponents instead. After every operation the
//! numerator is divided by each denominator factor for as long as the
//! division is exact, so equal values have equal representations whenever
//! the factors are irreducible and pairwise distinct. Equality is still
//! decided by cross-multiplication, which does not rely on that.

use std::cmp::Ordering;
use std::sync::Arc;

use num_complex::Complex64;

use super::poly::LaurentPoly;
use super::ring::Ring;
use super::scalar::GaussianRational;
use super::AlgebraError;

#[derive(Clone, Debug)]
pub struct RationalFunc {
    num: LaurentPoly,
    den: Vec<(LaurentPoly, u32)>,
}

fn cmp_poly(a: &LaurentPoly, b: &LaurentPoly) -> Ordering {
    let ta = a.terms().map(|(m, c)| (m, &c.re, &c.im));
    let tb = b.terms().map(|(m, c)| (m, &c.re, &c.im));
    ta.cmp(tb)
}

impl RationalFunc {
    pub fn from_poly(num: LaurentPoly) -> Self {
        Self { num, den: Vec::new() }
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self::from_poly(LaurentPoly::zero(ring))
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::from_poly(LaurentPoly::one(ring))
    }

    pub fn constant(ring: &Arc<Ring>, c: GaussianRational) -> Self {
        Self::from_poly(LaurentPoly::constant(ring, c))
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.num.ring()
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(LaurentPoly, u32)] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is trivial.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        self.as_poly().and_then(LaurentPoly::as_constant)
    }

    /// `1 / p`. The monomial part of `p` must only involve Laurent symbols.
    pub fn inverse_of_poly(p: &LaurentPoly) -> Result<Self, AlgebraError> {
        let (lc, shift, prim) = p.monic_primitive().ok_or(AlgebraError::DivisionByZero)?;
        let ring = p.ring();
        for (k, &e) in shift.0.iter().enumerate() {
            if e > 0 && !ring.symbol(k).laurent {
                return Err(AlgebraError::NegativeExponent(ring.symbol(k).name.clone()));
            }
        }
        let num = LaurentPoly::one(ring).mul_monomial(&lc.inv().ok_or(AlgebraError::DivisionByZero)?, &shift.inv());
        let den = if prim.is_one() { Vec::new() } else { vec![(prim, 1)] };
        Ok(Self::normalized(num, den))
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        let mut out = Self::inverse_of_poly(&self.num)?;
        for (f, e) in &self.den {
            out = out.mul(&Self::from_poly(f.pow(*e)));
        }
        Ok(out)
    }

    fn normalized(mut num: LaurentPoly, den: Vec<(LaurentPoly, u32)>) -> Self {
        let mut kept: Vec<(LaurentPoly, u32)> = Vec::with_capacity(den.len());
        for (f, mut e) in den {
            if num.is_zero() {
                break;
            }
            while e > 0 {
                match num.exact_div(&f) {
                    Some(q) => {
                        num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                kept.push((f, e));
            }
        }
        if num.is_zero() {
            kept.clear();
        }
        kept.sort_by(|a, b| cmp_poly(&a.0, &b.0));
        Self { num, den: kept }
    }

    /// Re-runs cancellation; a no-op on values built through the public API.
    pub fn normalize(&self) -> Self {
        Self::normalized(self.num.clone(), self.den.clone())
    }

    /// Numerators of `self` and `other` over the least common denominator.
    fn over_common(&self, other: &Self) -> (LaurentPoly, LaurentPoly, Vec<(LaurentPoly, u32)>) {
        let mut common: Vec<(LaurentPoly, u32)> = self.den.clone();
        for (f, e) in &other.den {
            match common.iter_mut().find(|(g, _)| g == f) {
                Some((_, ce)) => *ce = (*ce).max(*e),
                None => common.push((f.clone(), *e)),
            }
        }
        let lift = |rf: &Self| -> LaurentPoly {
            let mut n = rf.num.clone();
            for (f, e) in &common {
                let have = rf.den.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k);
                if *e > have {
                    n = n.mul(&f.pow(e - have));
                }
            }
            n
        };
        (lift(self), lift(other), common)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den.is_empty() && other.den.is_empty() {
            return Self::from_poly(self.num.add(&other.num));
        }
        let (a, b, common) = self.over_common(other);
        Self::normalized(a.add(&b), common)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.ring());
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.num);
        if self.den.is_empty() && other.den.is_empty() {
            return Self::from_poly(num);
        }
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            match den.iter_mut().find(|(g, _)| g == f) {
                Some((_, ce)) => *ce += e,
                None => den.push((f.clone(), *e)),
            }
        }
        Self::normalized(num, den)
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        self.mul(&Self::from_poly(p.clone()))
    }

    pub fn pow(&self, e: i32) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.ring());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Partial derivative by the quotient rule on each denominator factor.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self {
            num: self.num.derivative(var),
            den: self.den.clone(),
        };
        for (i, (f, e)) in self.den.iter().enumerate() {
            let df = f.derivative(var);
            if df.is_zero() {
                continue;
            }
            let mut den = self.den.clone();
            den[i].1 += 1;
            let num = self.num.mul(&df).scale(&GaussianRational::from_int(-(*e as i64)));
            out = out.add(&Self::normalized(num, den));
        }
        if self.den.is_empty() {
            out
        } else {
            Self::normalized(out.num, out.den)
        }
    }

    /// `a/b = c/d ⟺ a·d − c·b = 0`, with `b`, `d` reduced to their least
    /// common multiple first.
    pub fn equals(&self, other: &Self) -> bool {
        if self.num.ring() != other.num.ring() {
            return false;
        }
        let (a, b, _) = self.over_common(other);
        a.sub(&b).is_zero()
    }

    pub fn eval(&self, values: &[Complex64]) -> Result<Complex64, AlgebraError> {
        let n = self.num.eval(values)?;
        let mut d = Complex64::new(1.0, 0.0);
        for (f, e) in &self.den {
            d *= f.eval(values)?.powu(*e);
        }
        if d == Complex64::new(0.0, 0.0) {
            let name = self.den.first().map(|(f, _)| format!("{f:?}")).unwrap_or_default();
            return Err(AlgebraError::Singular(name));
        }
        Ok(n / d)
    }

    /// Rewrites every symbol `k` of the source ring as `images[k]`, a rational
    /// function over `target`.
    pub fn substitute(&self, target: &Arc<Ring>, images: &[RationalFunc]) -> Result<Self, AlgebraError> {
        let map_poly = |p: &LaurentPoly| -> Result<RationalFunc, AlgebraError> {
            let mut acc = Self::zero(target);
            for (m, c) in p.terms() {
                let mut t = Self::constant(target, c.clone());
                for (k, &e) in m.0.iter().enumerate() {
                    if e != 0 {
                        t = t.mul(&images[k].pow(e)?);
                    }
                }
                acc = acc.add(&t);
            }
            Ok(acc)
        };
        let mut out = map_poly(&self.num)?;
        for (f, e) in &self.den {
            out = out.mul(&map_poly(f)?.pow(-(*e as i32))?);
        }
        Ok(out)
    }

    /// Replaces symbol `var` by an exact scalar.
    pub fn substitute_scalar(&self, var: usize, value: &GaussianRational) -> Result<Self, AlgebraError> {
        let ring = Arc::clone(self.ring());
        let images: Vec<RationalFunc> = (0..ring.len())
            .map(|k| {
                if k == var {
                    Ok(Self::constant(&ring, value.clone()))
                } else {
                    let mut exps = vec![0; ring.len()];
                    exps[k] = 1;
                    LaurentPoly::from_exponents(&ring, GaussianRational::one(), exps).map(Self::from_poly)
                }
            })
            .collect::<Result<_, _>>()?;
        self.substitute(&ring, &images)
    }

    /// True when the numerator contains `var` only at exactly power `e`
    /// and no denominator factor mentions it.
    pub fn is_homogeneous_in(&self, var: usize, e: i32) -> bool {
        !self.num.is_zero()
            && self.num.terms().all(|(m, _)| m.0[var] == e)
            && self.den.iter().all(|(f, _)| f.terms().all(|(m, _)| m.0[var] == 0))
    }
}

impl PartialEq for RationalFunc {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<Ring> {
        Ring::builder()
            .geometric("x", false)
            .geometric("y", true)
            .parameter("rho", true)
            .build()
            .unwrap()
    }

    fn phi(r: &Arc<Ring>) -> LaurentPoly {
        let x = LaurentPoly::var(r, "x").unwrap();
        let y = LaurentPoly::var(r, "y").unwrap();
        let rho_m2 = LaurentPoly::monomial(r, GaussianRational::one(), &[("rho", -2)]).unwrap();
        LaurentPoly::one(r).sub(&x.mul(&x).add(&y.mul(&y)).mul(&rho_m2))
    }

    #[test]
    fn inverse_cancels() {
        let r = ring();
        let p = phi(&r);
        let inv = RationalFunc::inverse_of_poly(&p).unwrap();
        let prod = inv.mul(&RationalFunc::from_poly(p.clone()));
        assert!(prod.is_polynomial());
        assert!(prod.as_poly().unwrap().is_one());
    }

    #[test]
    fn derivative_of_inverse_phi() {
        // d/dx (1/φ) = (2x/ρ²) / φ²
        let r = ring();
        let p = phi(&r);
        let inv = RationalFunc::inverse_of_poly(&p).unwrap();
        let d = inv.derivative(0);
        let two_x = LaurentPoly::monomial(&r, GaussianRational::from_int(2), &[("x", 1), ("rho", -2)]).unwrap();
        let expect = RationalFunc::from_poly(two_x).mul(&inv).mul(&inv);
        assert!(d.equals(&expect));
    }

    #[test]
    fn sum_over_common_denominator() {
        let r = ring();
        let p = phi(&r);
        let inv = RationalFunc::inverse_of_poly(&p).unwrap();
        let inv2 = inv.mul(&inv);
        // 1/φ − 1/φ² · φ = 0
        let z = inv.sub(&inv2.mul_poly(&p));
        assert!(z.is_zero());
        assert!(z.denominator_factors().is_empty());
    }

    #[test]
    fn non_laurent_monomial_cannot_be_inverted() {
        let r = ring();
        let x = LaurentPoly::var(&r, "x").unwrap();
        assert!(matches!(
            RationalFunc::inverse_of_poly(&x),
            Err(AlgebraError::NegativeExponent(_))
        ));
    }
}
