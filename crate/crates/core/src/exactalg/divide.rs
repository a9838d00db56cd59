//! Exact division, and the gcd/content machinery the elimination needs to
//! separate extraneous factors from resultants.

use num_traits::{One, Zero};

use super::poly::{divides, sub_exps, MultiPoly, Var};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Quotient `q` with `num = q * den`, treating `var` as the leading variable.
///
/// Fails with `NonZeroRemainder` when `den` does not divide `num`.
pub fn exact_divide(num: &MultiPoly, den: &MultiPoly, var: Var) -> Result<MultiPoly> {
    if den.is_zero() {
        return Err(Error::InvalidArgument(
            "division by the zero polynomial".into(),
        ));
    }
    if let Some(c) = den.constant_value() {
        return Ok(num.scale(&c.recip()));
    }
    let (lead_e, lead_c) = den.leading_term_with(var).expect("non-zero");
    let lead_inv = lead_c.recip();
    let mut rem = num.clone();
    let mut quot = MultiPoly::zero();
    while let Some((e, c)) = rem.leading_term_with(var) {
        if !divides(&lead_e, &e) {
            return Err(Error::NonZeroRemainder { var });
        }
        let qe = sub_exps(&e, &lead_e);
        let qc = &c * &lead_inv;
        rem -= &den.mul_monomial(&qe, &qc);
        quot.add_term(qe, qc);
    }
    Ok(quot)
}

/// Like [`exact_divide`] but returns `None` instead of an error.
pub fn try_divide(num: &MultiPoly, den: &MultiPoly) -> Option<MultiPoly> {
    let var = den.variables().first().copied().unwrap_or(Var::X);
    exact_divide(num, den, var).ok()
}

/// Pseudo-remainder of `f` by `g` in `v`: `lc(g)^k f mod g` for some `k`.
fn pseudo_remainder(f: &MultiPoly, g: &MultiPoly, v: Var) -> MultiPoly {
    let dg = g.degree(v);
    let lc_g = g.leading_coeff(v);
    let mut r = f.clone();
    while !r.is_zero() && r.degree(v) >= dg {
        let dr = r.degree(v);
        let lc_r = r.leading_coeff(v);
        let shift = MultiPoly::var_pow(v, dr - dg);
        r = &(&lc_g * &r) - &(&(&lc_r * &shift) * g);
    }
    r
}

/// Normalises a gcd so that its lexicographic leading coefficient is one.
fn normalize(p: MultiPoly) -> MultiPoly {
    p.monic()
}

/// Greatest common divisor over `Q`, normalised to a monic leading term.
///
/// Recursive primitive remainder sequence; adequate for the small
/// polynomials met during elimination.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return normalize(b.clone());
    }
    if b.is_zero() {
        return normalize(a.clone());
    }
    let mut vars = a.variables();
    for v in b.variables() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars.sort();
    let Some(&v) = vars.last() else {
        return MultiPoly::one();
    };
    if a.degree(v) == 0 {
        return gcd(a, &content(b, v));
    }
    if b.degree(v) == 0 {
        return gcd(&content(a, v), b);
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let c = gcd(&ca, &cb);
    let pa = exact_divide(a, &ca, v).expect("content divides");
    let pb = exact_divide(b, &cb, v).expect("content divides");
    let (mut f, mut g) = if pa.degree(v) >= pb.degree(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = pseudo_remainder(&f, &g, v);
        if r.is_zero() {
            break;
        }
        if r.degree(v) == 0 {
            g = MultiPoly::one();
            break;
        }
        f = g;
        g = primitive_part(&r, v);
    }
    normalize(&c * &primitive_part(&g, v))
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content(p: &MultiPoly, v: Var) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for c in p.to_univariate(v) {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, &c);
        if acc.is_constant() {
            return MultiPoly::one();
        }
    }
    if acc.is_zero() {
        MultiPoly::one()
    } else {
        acc
    }
}

pub fn primitive_part(p: &MultiPoly, v: Var) -> MultiPoly {
    if p.is_zero() {
        return MultiPoly::zero();
    }
    let c = content(p, v);
    exact_divide(p, &c, v).expect("content divides")
}

/// Divides `p` by `factor` as many times as possible; returns the cofactor and multiplicity.
pub fn strip_factor(p: &MultiPoly, factor: &MultiPoly) -> (MultiPoly, u32) {
    let mut out = p.clone();
    let mut k = 0;
    if factor.is_constant() {
        return (out, 0);
    }
    while let Some(q) = try_divide(&out, factor) {
        out = q;
        k += 1;
    }
    (out, k)
}

/// Scales `p` so that the coefficient of `exps` becomes `target`.
pub fn normalize_coefficient(
    p: &MultiPoly,
    exps: &super::poly::Exponents,
    target: &Rational,
) -> Option<MultiPoly> {
    let c = p.coefficient(exps);
    if c.is_zero() {
        return None;
    }
    let s = target / c;
    Some(if s.is_one() { p.clone() } else { p.scale(&s) })
}
