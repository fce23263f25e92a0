//! Multivariate Laurent polynomials over the Gaussian rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::ring::Ring;
use super::scalar::GaussianRational;
use super::AlgebraError;

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then the earliest declared variable with the larger exponent wins).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| -e).collect())
    }

    /// `self / other` if every exponent stays nonnegative.
    fn divides_into(&self, other: &Monomial) -> Option<Monomial> {
        let q: Vec<i32> = self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect();
        q.iter().all(|&e| e >= 0).then_some(Monomial(q))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite sum of Gaussian-rational multiples of monomials. No zero
/// coefficient is ever stored and every square-root rule of the ring has
/// been applied, so structural equality is mathematical equality.
#[derive(Clone, Debug)]
pub struct LaurentPoly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl LaurentPoly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self {
            ring: Arc::clone(ring),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: GaussianRational) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(Monomial::one(ring.len()), c);
        p
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, GaussianRational::one())
    }

    pub fn int(ring: &Arc<Ring>, n: i64) -> Self {
        Self::constant(ring, GaussianRational::from_int(n))
    }

    pub fn var(ring: &Arc<Ring>, name: &str) -> Result<Self, AlgebraError> {
        Self::monomial(ring, GaussianRational::one(), &[(name, 1)])
    }

    /// `c · Π name^e`, rejecting negative powers of non-Laurent symbols.
    pub fn monomial(ring: &Arc<Ring>, c: GaussianRational, powers: &[(&str, i32)]) -> Result<Self, AlgebraError> {
        let mut exps = vec![0; ring.len()];
        for (name, e) in powers {
            exps[ring.index_of(name)?] += e;
        }
        Self::from_exponents(ring, c, exps)
    }

    pub fn from_exponents(ring: &Arc<Ring>, c: GaussianRational, exps: Vec<i32>) -> Result<Self, AlgebraError> {
        if exps.len() != ring.len() {
            return Err(AlgebraError::Declaration("exponent vector length".into()));
        }
        for (k, &e) in exps.iter().enumerate() {
            if e < 0 && !ring.symbol(k).laurent {
                return Err(AlgebraError::NegativeExponent(ring.symbol(k).name.clone()));
            }
        }
        let mut p = Self::zero(ring);
        p.add_term(Monomial(exps), c);
        Ok(p)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// The single coefficient when the polynomial is a constant (or zero).
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    /// Inserts `c·m` after reducing `m` by the ring's square-root rules.
    pub(crate) fn add_term(&mut self, mut m: Monomial, mut c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        for rule in self.ring.sqrt_rules() {
            let e = m.0[rule.var];
            if e == 0 || e == 1 {
                continue;
            }
            let q = e.div_euclid(2);
            m.0[rule.var] = e.rem_euclid(2);
            for (k, &f) in rule.exps.iter().enumerate() {
                m.0[k] += q * f;
            }
            c = &c * &rule.coeff.powi(q);
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn assert_ring(&self, other: &Self) {
        assert!(self.ring == other.ring, "polynomials over different rings");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussianRational::from_int(-1))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, d) in &self.terms {
            out.add_term(m.clone(), c * d);
        }
        out
    }

    pub fn mul_monomial(&self, c: &GaussianRational, mono: &Monomial) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, d) in &self.terms {
            out.add_term(m.mul(mono), c * d);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_ring(other);
        let mut out = Self::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative with respect to symbol `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.add_term(m2, c.scale_int(e as i64));
        }
        out
    }

    /// Componentwise minimum exponent over all terms (zero vector for the
    /// zero polynomial).
    pub fn min_exponents(&self) -> Monomial {
        let n = self.ring.len();
        let mut lo = vec![i32::MAX; n];
        for m in self.terms.keys() {
            for (l, &e) in lo.iter_mut().zip(&m.0) {
                *l = (*l).min(e);
            }
        }
        if self.terms.is_empty() {
            lo = vec![0; n];
        }
        Monomial(lo)
    }

    /// Splits `self = c·m·p` with `p` a polynomial in the strict sense (all
    /// exponents ≥ 0, each variable's minimum exponent zero) whose leading
    /// coefficient is one. Returns `(c, m, p)`.
    pub fn monic_primitive(&self) -> Option<(GaussianRational, Monomial, LaurentPoly)> {
        let (_, lc) = self.leading()?;
        let lc = lc.clone();
        let shift = self.min_exponents();
        let p = self.mul_monomial(&lc.inv()?, &shift.inv());
        Some((lc, shift, p))
    }

    /// Exact quotient `self / divisor` when `divisor` is a strict
    /// polynomial without monomial content (as produced by
    /// [`monic_primitive`](Self::monic_primitive)); `None` if not divisible.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        self.assert_ring(divisor);
        if !self.ring.sqrt_rules().is_empty() {
            // Shifting would re-trigger the square-root rewrite.
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm_d, lc_d) = divisor.leading()?;
        let lc_inv = lc_d.inv()?;
        let shift = self.min_exponents();
        let mut rem = self.mul_monomial(&GaussianRational::one(), &shift.inv());
        let mut quot = Self::zero(&self.ring);
        // Single-divisor division: {divisor} is a Gröbner basis of its ideal,
        // so a nonzero remainder term means non-divisibility.
        while let Some((lm, lc)) = rem.leading() {
            let q_m = lm.divides_into(lm_d)?;
            let q_c = lc * &lc_inv;
            rem = rem.sub(&divisor.mul_monomial(&q_c, &q_m));
            quot.add_term(q_m, q_c);
        }
        Some(quot.mul_monomial(&GaussianRational::one(), &shift))
    }

    /// Replaces symbol `var` by an exact scalar. Fails on `0^negative`.
    pub fn substitute_scalar(&self, var: usize, value: &GaussianRational) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e < 0 && value.is_zero() {
                return Err(AlgebraError::DivisionByZero);
            }
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out.add_term(m2, c * &value.powi(e));
        }
        Ok(out)
    }

    /// Numeric value with one complex number per ring symbol. Returns a
    /// singularity error if a symbol with a negative exponent is zero.
    pub fn eval(&self, values: &[Complex64]) -> Result<Complex64, AlgebraError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex64();
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if e < 0 && values[k] == Complex64::new(0.0, 0.0) {
                    return Err(AlgebraError::Singular(self.ring.symbol(k).name.clone()));
                }
                t *= values[k].powi(e);
            }
            acc += t;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<Ring> {
        Ring::builder()
            .geometric("x", false)
            .geometric("y", true)
            .parameter("beta", false)
            .build()
            .unwrap()
    }

    #[test]
    fn grlex_leading_term() {
        let r = ring();
        let x = LaurentPoly::var(&r, "x").unwrap();
        let y = LaurentPoly::var(&r, "y").unwrap();
        let p = x.mul(&y).add(&y.pow(2)).add(&LaurentPoly::int(&r, 3));
        let (lm, _) = p.leading().unwrap();
        assert_eq!(lm.0, vec![1, 1, 0]);
    }

    #[test]
    fn negative_power_only_for_laurent_symbols() {
        let r = ring();
        assert!(LaurentPoly::monomial(&r, GaussianRational::one(), &[("y", -2)]).is_ok());
        assert!(matches!(
            LaurentPoly::monomial(&r, GaussianRational::one(), &[("x", -1)]),
            Err(AlgebraError::NegativeExponent(_))
        ));
    }

    #[test]
    fn derivative_of_laurent_term() {
        let r = ring();
        let p = LaurentPoly::monomial(&r, GaussianRational::from_int(3), &[("y", -2)]).unwrap();
        let d = p.derivative(1);
        let expect = LaurentPoly::monomial(&r, GaussianRational::from_int(-6), &[("y", -3)]).unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn exact_division() {
        let r = ring();
        let x = LaurentPoly::var(&r, "x").unwrap();
        let y = LaurentPoly::var(&r, "y").unwrap();
        let f = x.mul(&x).add(&y.mul(&y)).sub(&LaurentPoly::one(&r));
        let g = x.add(&y.pow(3));
        let yinv = LaurentPoly::monomial(&r, GaussianRational::one(), &[("y", -1)]).unwrap();
        let prod = f.mul(&g).mul(&yinv);
        let (_, _, fp) = f.monic_primitive().unwrap();
        let q = prod.exact_div(&fp).unwrap();
        assert_eq!(q.mul(&fp), prod);
        assert!(g.exact_div(&fp).is_none());
    }

    #[test]
    fn sqrt_rule_rewrites_even_powers() {
        let r = Ring::builder()
            .geometric("z", false)
            .parameter("hbar", true)
            .parameter("kappa", true)
            .sqrt_rule("kappa", GaussianRational::from_frac(1, 2), &[("hbar", 1)])
            .build()
            .unwrap();
        let k = LaurentPoly::var(&r, "kappa").unwrap();
        let expect =
            LaurentPoly::monomial(&r, GaussianRational::from_frac(1, 4), &[("hbar", 2), ("kappa", 1)]).unwrap();
        assert_eq!(k.pow(5), expect);
        let kinv = LaurentPoly::monomial(&r, GaussianRational::one(), &[("kappa", -1)]).unwrap();
        assert!(k.mul(&kinv).is_one());
    }
}
