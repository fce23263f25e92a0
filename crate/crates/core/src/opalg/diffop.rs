//! Linear differential operators `Σ c_α(q) ∂^α` with rational-function
//! coefficients, kept in normal form (every derivative to the right).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::poly::LaurentPoly;
use super::ratfunc::RationalFunc;
use super::ring::Ring;
use super::scalar::GaussianRational;
use super::AlgebraError;

/// Derivative multi-index over the ring's geometric symbols. Ordered by
/// total order, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DerivIndex(pub Vec<u32>);

impl DerivIndex {
    pub fn zero(n: usize) -> Self {
        DerivIndex(vec![0; n])
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    fn add(&self, other: &DerivIndex) -> DerivIndex {
        DerivIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for DerivIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order().cmp(&other.order()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for DerivIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct DiffOp {
    ring: Arc<Ring>,
    terms: BTreeMap<DerivIndex, RationalFunc>,
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// All multi-indices `γ ≤ α` componentwise.
fn sub_indices(alpha: &DerivIndex) -> Vec<DerivIndex> {
    let mut out = vec![Vec::new()];
    for &a in &alpha.0 {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for prefix in &out {
            for g in 0..=a {
                let mut p = prefix.clone();
                p.push(g);
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(DerivIndex).collect()
}

impl DiffOp {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self {
            ring: Arc::clone(ring),
            terms: BTreeMap::new(),
        }
    }

    /// Multiplication by `c`.
    pub fn multiplication(c: RationalFunc) -> Self {
        let ring = Arc::clone(c.ring());
        let mut op = Self::zero(&ring);
        op.add_term(DerivIndex::zero(ring.n_geometric()), c);
        op
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self::multiplication(RationalFunc::from_poly(p))
    }

    pub fn identity(ring: &Arc<Ring>) -> Self {
        Self::multiplication(RationalFunc::one(ring))
    }

    pub fn constant(ring: &Arc<Ring>, c: GaussianRational) -> Self {
        Self::multiplication(RationalFunc::constant(ring, c))
    }

    /// `∂/∂name` for a geometric symbol.
    pub fn partial(ring: &Arc<Ring>, name: &str) -> Result<Self, AlgebraError> {
        let k = ring.index_of(name)?;
        if k >= ring.n_geometric() {
            return Err(AlgebraError::Declaration(format!(
                "`{name}` is a parameter; derivatives do not act on it"
            )));
        }
        let mut idx = vec![0; ring.n_geometric()];
        idx[k] = 1;
        let mut op = Self::zero(ring);
        op.add_term(DerivIndex(idx), RationalFunc::one(ring));
        Ok(op)
    }

    /// `c ∂^α` with `α` given as per-symbol derivative orders.
    pub fn term(c: RationalFunc, alpha: DerivIndex) -> Result<Self, AlgebraError> {
        let ring = Arc::clone(c.ring());
        if alpha.0.len() != ring.n_geometric() {
            return Err(AlgebraError::Declaration("multi-index length".into()));
        }
        let mut op = Self::zero(&ring);
        op.add_term(alpha, c);
        Ok(op)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&DerivIndex, &RationalFunc)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &DerivIndex) -> Option<&RationalFunc> {
        self.terms.get(alpha)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum `|α|` over the stored terms; zero for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(DerivIndex::order).max().unwrap_or(0)
    }

    fn add_term(&mut self, alpha: DerivIndex, c: RationalFunc) {
        if c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&alpha) {
            Some(existing) => existing.add(&c),
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(alpha, merged);
        }
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussianRational::from_int(-1))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(&self.ring);
        for (a, coef) in &self.terms {
            out.add_term(a.clone(), coef.scale(c));
        }
        out
    }

    /// `c · self` (multiplication from the left, no derivative acts on `c`).
    pub fn left_mul(&self, c: &RationalFunc) -> Self {
        let mut out = Self::zero(&self.ring);
        for (a, coef) in &self.terms {
            out.add_term(a.clone(), c.mul(coef));
        }
        out
    }

    fn coeff_derivative(&self, c: &RationalFunc, gamma: &DerivIndex) -> RationalFunc {
        let mut d = c.clone();
        for (var, &k) in gamma.0.iter().enumerate() {
            for _ in 0..k {
                d = d.derivative(var);
            }
        }
        d
    }

    /// `self ∘ other` via the generalized Leibniz rule
    /// `∂^α ∘ b = Σ_{γ≤α} C(α,γ) (∂^γ b) ∂^{α−γ}`.
    pub fn compose(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = Self::zero(&self.ring);
        for (alpha, a) in &self.terms {
            let gammas = sub_indices(alpha);
            for (beta, b) in &other.terms {
                for gamma in &gammas {
                    let db = self.coeff_derivative(b, gamma);
                    if db.is_zero() {
                        continue;
                    }
                    let mult: i64 = alpha.0.iter().zip(&gamma.0).map(|(&n, &k)| binomial(n, k)).product();
                    let rest = DerivIndex(alpha.0.iter().zip(&gamma.0).map(|(n, k)| n - k).collect());
                    out.add_term(rest.add(beta), a.mul(&db).scale(&GaussianRational::from_int(mult)));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(&self.ring);
        for _ in 0..e {
            acc = acc.compose(self).expect("same ring");
        }
        acc
    }

    /// `[A, B] = A∘B − B∘A`.
    pub fn commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// Exact operator equality: `A − B` normalizes to zero. Operators over
    /// different declarations are never equal.
    pub fn equals(&self, other: &Self) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Image `A(f)` of a rational function.
    pub fn apply(&self, f: &RationalFunc) -> Result<RationalFunc, AlgebraError> {
        if f.ring() != &self.ring {
            return Err(AlgebraError::RingMismatch);
        }
        let mut acc = RationalFunc::zero(&self.ring);
        for (alpha, c) in &self.terms {
            acc = acc.add(&c.mul(&self.coeff_derivative(f, alpha)));
        }
        Ok(acc)
    }

    /// Image of a polynomial; errors if the result has a nontrivial denominator.
    pub fn apply_poly(&self, f: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
        let out = self.apply(&RationalFunc::from_poly(f.clone()))?;
        out.as_poly().cloned().ok_or(AlgebraError::NotPolynomial)
    }

    /// Rewrites the operator in new coordinates. `coords[k]` gives source
    /// symbol `k` (geometric or parameter) as a function over `target`;
    /// `derivs[j]` gives `∂/∂q_j` of the source as a first-order operator
    /// over `target` (chain rule). The `derivs` must commute pairwise, which
    /// holds for any genuine change of coordinates.
    pub fn change_variables(
        &self,
        target: &Arc<Ring>,
        coords: &[RationalFunc],
        derivs: &[DiffOp],
    ) -> Result<Self, AlgebraError> {
        if coords.len() != self.ring.len() || derivs.len() != self.ring.n_geometric() {
            return Err(AlgebraError::Declaration("change of variables arity".into()));
        }
        let mut out = Self::zero(target);
        for (alpha, c) in &self.terms {
            let mut op = Self::multiplication(c.substitute(target, coords)?);
            for (j, &k) in alpha.0.iter().enumerate() {
                if k > 0 {
                    op = op.compose(&derivs[j].pow(k))?;
                }
            }
            out = out.add(&op)?;
        }
        Ok(out)
    }

    /// Replaces a parameter by an exact scalar in every coefficient.
    pub fn substitute_scalar(&self, name: &str, value: &GaussianRational) -> Result<Self, AlgebraError> {
        let k = self.ring.index_of(name)?;
        let mut out = Self::zero(&self.ring);
        for (alpha, c) in &self.terms {
            out.add_term(alpha.clone(), c.substitute_scalar(k, value)?);
        }
        Ok(out)
    }

    /// Text form such as `(-2*i*beta)*y*Dx + y^2*Dy^2`.
    pub fn render(&self) -> String {
        super::render::render_diffop(self)
    }
}

impl PartialEq for DiffOp {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
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

    fn mul(r: &Arc<Ring>, c: GaussianRational, powers: &[(&str, i32)]) -> DiffOp {
        DiffOp::from_poly(LaurentPoly::monomial(r, c, powers).unwrap())
    }

    #[test]
    fn single_leibniz_step() {
        let r = ring();
        let dy = DiffOp::partial(&r, "y").unwrap();
        let y = mul(&r, GaussianRational::one(), &[("y", 1)]);
        let lhs = dy.compose(&y).unwrap();
        let rhs = y.compose(&dy).unwrap().add(&DiffOp::identity(&r)).unwrap();
        assert!(lhs.equals(&rhs));
    }

    #[test]
    fn derivative_passes_through_x_independent_coefficient() {
        // (−i∂_x) ∘ (2βy) = −2iβ y ∂_x
        let r = ring();
        let dx = DiffOp::partial(&r, "x").unwrap().scale(&GaussianRational::imag(-1));
        let c = mul(&r, GaussianRational::from_int(2), &[("beta", 1), ("y", 1)]);
        let lhs = dx.compose(&c).unwrap();
        let rhs = mul(&r, GaussianRational::imag(-2), &[("beta", 1), ("y", 1)])
            .compose(&DiffOp::partial(&r, "x").unwrap())
            .unwrap();
        assert!(lhs.equals(&rhs));
        assert_eq!(lhs.render(), "(-2*i*beta)*y*Dx");
    }

    #[test]
    fn conjugated_momentum_square() {
        // y(−i∂_y + i/y)² y = −y²∂_y²
        let r = ring();
        let p = DiffOp::partial(&r, "y")
            .unwrap()
            .scale(&GaussianRational::imag(-1))
            .add(&mul(&r, GaussianRational::i(), &[("y", -1)]))
            .unwrap();
        let y = mul(&r, GaussianRational::one(), &[("y", 1)]);
        let lhs = y.compose(&p.pow(2)).unwrap().compose(&y).unwrap();
        let rhs = mul(&r, GaussianRational::from_int(-1), &[("y", 2)])
            .compose(&DiffOp::partial(&r, "y").unwrap().pow(2))
            .unwrap();
        assert!(lhs.equals(&rhs), "{}", lhs.render());
    }

    #[test]
    fn mixed_partials_commute() {
        let r = ring();
        let dx = DiffOp::partial(&r, "x").unwrap();
        let dy = DiffOp::partial(&r, "y").unwrap();
        assert!(dx.compose(&dy).unwrap().equals(&dy.compose(&dx).unwrap()));
        assert!(!dx.equals(&dy));
    }

    #[test]
    fn self_commutator_vanishes() {
        let r = ring();
        let a = mul(&r, GaussianRational::from_int(3), &[("x", 2), ("y", -1)])
            .compose(&DiffOp::partial(&r, "y").unwrap())
            .unwrap();
        assert!(a.commutator(&a).unwrap().is_zero());
    }

    #[test]
    fn apply_to_polynomials() {
        let r = ring();
        let dx = DiffOp::partial(&r, "x").unwrap().scale(&GaussianRational::imag(-1));
        let x2 = LaurentPoly::monomial(&r, GaussianRational::one(), &[("x", 2)]).unwrap();
        let out = dx.apply_poly(&x2).unwrap();
        assert_eq!(
            out,
            LaurentPoly::monomial(&r, GaussianRational::imag(-2), &[("x", 1)]).unwrap()
        );
    }

    #[test]
    fn mismatched_declarations_are_rejected() {
        let r1 = ring();
        let r2 = Ring::builder().geometric("x", false).build().unwrap();
        let a = DiffOp::partial(&r1, "x").unwrap();
        let b = DiffOp::partial(&r2, "x").unwrap();
        assert!(matches!(a.compose(&b), Err(AlgebraError::RingMismatch)));
        assert!(!a.equals(&b));
    }

    #[test]
    fn parameters_are_derivative_inert() {
        let r = ring();
        assert!(DiffOp::partial(&r, "beta").is_err());
    }
}
