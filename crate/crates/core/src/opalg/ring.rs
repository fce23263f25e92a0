//! Variable declarations shared by polynomials, rational functions and operators.

use std::sync::Arc;

use super::scalar::GaussianRational;
use super::AlgebraError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Derivatives act on it.
    Geometric,
    /// Derivative-inert symbol (β, m, a, ρ, ...).
    Parameter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub role: Role,
    /// Negative exponents allowed.
    pub laurent: bool,
}

/// `var² = coeff · Π other^e`, applied whenever a term is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtRule {
    pub var: usize,
    pub coeff: GaussianRational,
    pub exps: Vec<i32>,
}

/// Ordered symbol list. Geometric symbols come first, so a derivative
/// multi-index is a prefix of the exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    symbols: Vec<Symbol>,
    n_geom: usize,
    sqrt_rules: Vec<SqrtRule>,
}

impl Ring {
    pub fn builder() -> RingBuilder {
        RingBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn n_geometric(&self) -> usize {
        self.n_geom
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, idx: usize) -> &Symbol {
        &self.symbols[idx]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, AlgebraError> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| AlgebraError::UnknownSymbol(name.to_string()))
    }

    pub fn geometric_names(&self) -> impl Iterator<Item = &str> {
        self.symbols[..self.n_geom].iter().map(|s| s.name.as_str())
    }

    pub fn sqrt_rules(&self) -> &[SqrtRule] {
        &self.sqrt_rules
    }
}

/// A square-root rule as declared, before symbols are resolved.
type PendingRule = (String, GaussianRational, Vec<(String, i32)>);

#[derive(Default)]
pub struct RingBuilder {
    geom: Vec<Symbol>,
    params: Vec<Symbol>,
    rules: Vec<PendingRule>,
}

impl RingBuilder {
    pub fn geometric(mut self, name: &str, laurent: bool) -> Self {
        self.geom.push(Symbol {
            name: name.to_string(),
            role: Role::Geometric,
            laurent,
        });
        self
    }

    pub fn parameter(mut self, name: &str, laurent: bool) -> Self {
        self.params.push(Symbol {
            name: name.to_string(),
            role: Role::Parameter,
            laurent,
        });
        self
    }

    /// Declares `name² = coeff · Π factor^e`. `name` and every factor must be
    /// Laurent parameters; the right-hand side must not mention `name`.
    pub fn sqrt_rule(mut self, name: &str, coeff: GaussianRational, factors: &[(&str, i32)]) -> Self {
        self.rules.push((
            name.to_string(),
            coeff,
            factors.iter().map(|(n, e)| (n.to_string(), *e)).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<Arc<Ring>, AlgebraError> {
        let n_geom = self.geom.len();
        let mut symbols = self.geom;
        symbols.extend(self.params);
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(AlgebraError::Declaration(format!("duplicate symbol `{}`", s.name)));
            }
        }
        let mut ring = Ring {
            symbols,
            n_geom,
            sqrt_rules: Vec::new(),
        };
        for (name, coeff, factors) in self.rules {
            let var = ring.index_of(&name)?;
            if coeff.is_zero() || ring.symbols[var].role != Role::Parameter || !ring.symbols[var].laurent {
                return Err(AlgebraError::Declaration(format!(
                    "square-root symbol `{name}` must be a nonzero Laurent parameter"
                )));
            }
            let mut exps = vec![0; ring.len()];
            for (f, e) in factors {
                let k = ring.index_of(&f)?;
                if k == var || (e < 0 && !ring.symbols[k].laurent) {
                    return Err(AlgebraError::Declaration(format!(
                        "invalid factor `{f}` in the rule for `{name}`"
                    )));
                }
                exps[k] += e;
            }
            ring.sqrt_rules.push(SqrtRule { var, coeff, exps });
        }
        Ok(Arc::new(ring))
    }
}
