//! Plain-text rendering for reports.

use super::diffop::DiffOp;
use super::poly::{LaurentPoly, Monomial};
use super::ratfunc::RationalFunc;
use super::ring::{Ring, Role};
use super::scalar::GaussianRational;

fn power(name: &str, e: i32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

fn split_monomial(ring: &Ring, m: &Monomial) -> (Vec<String>, Vec<String>) {
    let mut params = Vec::new();
    let mut geom = Vec::new();
    for (k, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let s = ring.symbol(k);
        match s.role {
            Role::Parameter => params.push(power(&s.name, e)),
            Role::Geometric => geom.push(power(&s.name, e)),
        }
    }
    (params, geom)
}

/// `(c*params)*geom`, with the parenthesized factor dropped when it is `1`.
fn render_term(ring: &Ring, m: &Monomial, c: &GaussianRational) -> String {
    let (params, geom) = split_monomial(ring, m);
    let mut scalar: Vec<String> = Vec::new();
    let neg_one = GaussianRational::from_int(-1);
    if !params.is_empty() && c == &neg_one {
        scalar.push(format!("-{}", params.join("*")));
    } else {
        if !c.is_one() || params.is_empty() {
            scalar.push(c.to_string());
        }
        scalar.extend(params);
    }
    let mut parts = Vec::new();
    let lone_unit = scalar.len() == 1 && scalar[0] == "1";
    if !(lone_unit && !geom.is_empty()) {
        if geom.is_empty() && scalar.len() == 1 && !scalar[0].contains('*') {
            parts.push(scalar[0].clone());
        } else {
            parts.push(format!("({})", scalar.join("*")));
        }
    }
    parts.extend(geom);
    parts.join("*")
}

pub fn render_poly(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let ring = p.ring();
    p.terms()
        .rev()
        .map(|(m, c)| render_term(ring, m, c))
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn render_ratfunc(r: &RationalFunc) -> String {
    let num = r.numerator();
    let mut s = if num.n_terms() > 1 && !r.is_polynomial() {
        format!("[{}]", render_poly(num))
    } else {
        render_poly(num)
    };
    for (f, e) in r.denominator_factors() {
        if *e == 1 {
            s.push_str(&format!("/({})", render_poly(f)));
        } else {
            s.push_str(&format!("/({})^{}", render_poly(f), e));
        }
    }
    s
}

pub fn render_diffop(op: &DiffOp) -> String {
    if op.is_zero() {
        return "0".to_string();
    }
    let ring = op.ring();
    let names: Vec<&str> = ring.geometric_names().collect();
    let mut out = Vec::new();
    for (alpha, c) in op.terms().rev() {
        let derivs: Vec<String> = alpha
            .0
            .iter()
            .zip(&names)
            .filter(|(k, _)| **k > 0)
            .map(|(k, n)| power(&format!("D{n}"), *k as i32))
            .collect();
        let coef = if c.numerator().n_terms() > 1 && !derivs.is_empty() {
            format!("[{}]", render_ratfunc(c))
        } else {
            render_ratfunc(c)
        };
        if derivs.is_empty() {
            out.push(coef);
        } else if coef == "1" {
            out.push(derivs.join("*"));
        } else {
            out.push(format!("{}*{}", coef, derivs.join("*")));
        }
    }
    out.join(" + ")
}
