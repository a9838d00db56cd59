//! Sparse multivariate polynomials over `Rational`.
//!
//! Exponent vectors are dense over the fixed variable universe [`Var::ALL`],
//! so polynomials in different variable subsets combine without alignment.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{to_f64, Rational};

pub const NVARS: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
    C,
    S01,
    S00,
    B01,
    B00,
    W,
    Z,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::X,
        Var::Y,
        Var::C,
        Var::S01,
        Var::S00,
        Var::B01,
        Var::B00,
        Var::W,
        Var::Z,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::C => "c",
            Var::S01 => "S01",
            Var::S00 => "S00",
            Var::B01 => "B01",
            Var::B00 => "B00",
            Var::W => "W",
            Var::Z => "z",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type Exponents = [u16; NVARS];

pub(crate) fn add_exps(a: &Exponents, b: &Exponents) -> Exponents {
    let mut out = *a;
    for (o, e) in out.iter_mut().zip(b) {
        *o += e;
    }
    out
}

pub(crate) fn divides(d: &Exponents, n: &Exponents) -> bool {
    d.iter().zip(n).all(|(a, b)| a <= b)
}

pub(crate) fn sub_exps(n: &Exponents, d: &Exponents) -> Exponents {
    let mut out = *n;
    for (o, e) in out.iter_mut().zip(d) {
        *o -= e;
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(value: Rational) -> Self {
        Self::monomial([0; NVARS], value)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(super::rational::int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, k: u16) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = k;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Exponents, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exps: Exponents, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    /// The value of a constant polynomial (zero for the zero polynomial).
    pub fn constant_value(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.terms
                .values()
                .next()
                .cloned()
                .unwrap_or_else(Rational::zero),
        )
    }

    /// Coefficient of the exact monomial `exps`.
    pub fn coefficient(&self, exps: &Exponents) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self, v: Var) -> u16 {
        self.terms.keys().map(|e| e[v.index()]).max().unwrap_or(0)
    }

    pub fn min_degree(&self, v: Var) -> u16 {
        self.terms.keys().map(|e| e[v.index()]).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.degree(v) > 0
    }

    /// Variables that occur with a positive exponent, in universe order.
    pub fn variables(&self) -> Vec<Var> {
        Var::ALL.into_iter().filter(|&v| self.contains(v)).collect()
    }

    /// Coefficient of `v^k`, a polynomial free of `v`.
    pub fn coeff_of(&self, v: Var, k: u16) -> MultiPoly {
        let i = v.index();
        let mut out = MultiPoly::zero();
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut e2 = *e;
                e2[i] = 0;
                out.terms.insert(e2, c.clone());
            }
        }
        out
    }

    /// Coefficients in `v`, lowest power first.
    pub fn to_univariate(&self, v: Var) -> Vec<MultiPoly> {
        let i = v.index();
        let mut out = vec![MultiPoly::zero(); self.degree(v) as usize + 1];
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[i] = 0;
            out[e[i] as usize].terms.insert(e2, c.clone());
        }
        out
    }

    pub fn from_univariate(v: Var, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            out += &c.mul_monomial(&var_exps(v, k as u16), &Rational::one());
        }
        out
    }

    /// Leading coefficient in `v` (coefficient of the top power).
    pub fn leading_coeff(&self, v: Var) -> MultiPoly {
        self.coeff_of(v, self.degree(v))
    }

    pub fn scale(&self, s: &Rational) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn mul_monomial(&self, exps: &Exponents, coeff: &Rational) -> MultiPoly {
        if coeff.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (add_exps(e, exps), c * coeff))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut result = MultiPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Replaces `v` by the number `value`.
    pub fn specialize(&self, v: Var, value: &Rational) -> MultiPoly {
        let i = v.index();
        let mut powers: Vec<Rational> = vec![Rational::one()];
        let mut out = MultiPoly::zero();
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut e2 = *e;
            e2[i] = 0;
            out.add_term(e2, c * &powers[k]);
        }
        out
    }

    /// Replaces `v` by the polynomial `with`.
    pub fn substitute(&self, v: Var, with: &MultiPoly) -> MultiPoly {
        let coeffs = self.to_univariate(v);
        // Horner in `with`
        let mut out = MultiPoly::zero();
        for c in coeffs.iter().rev() {
            out = &(&out * with) + c;
        }
        out
    }

    pub fn derivative(&self, v: Var) -> MultiPoly {
        let i = v.index();
        let mut out = MultiPoly::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = *e;
                e2[i] -= 1;
                out.add_term(e2, c * Rational::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Componentwise minimum exponent over all terms (the monomial content).
    pub fn monomial_content(&self) -> Exponents {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return [0; NVARS];
        };
        let mut m = *first;
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    /// Divides every term by the monomial `exps`; panics if some term is not divisible.
    pub fn div_monomial(&self, exps: &Exponents) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    assert!(divides(exps, e), "monomial does not divide term");
                    (sub_exps(e, exps), c.clone())
                })
                .collect(),
        }
    }

    /// Leading term under lexicographic order with `first` compared before
    /// the remaining variables (which follow universe order).
    pub fn leading_term_with(&self, first: Var) -> Option<(Exponents, Rational)> {
        let i = first.index();
        let mut best: Option<(&Exponents, &Rational)> = None;
        for (e, c) in &self.terms {
            best = match best {
                None => Some((e, c)),
                Some((be, bc)) => {
                    if (e[i], e) > (be[i], be) {
                        Some((e, c))
                    } else {
                        Some((be, bc))
                    }
                }
            };
        }
        best.map(|(e, c)| (*e, c.clone()))
    }

    /// Leading term in plain lexicographic order.
    pub fn leading_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Scales so that the lexicographically leading coefficient is one.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            None => MultiPoly::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn eval_complex(&self, point: &[Complex64; NVARS]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(to_f64(c), 0.0);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= point[i].powi(k as i32);
                }
            }
            total += t;
        }
        total
    }

    pub fn eval_f64(&self, point: &[f64; NVARS]) -> f64 {
        let mut total = 0.0;
        for (e, c) in &self.terms {
            let mut t = to_f64(c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= point[i].powi(k as i32);
                }
            }
            total += t;
        }
        total
    }

    pub fn has_nonnegative_integer_coefficients(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.is_integer() && !c.is_negative())
    }
}

pub(crate) fn var_exps(v: Var, k: u16) -> Exponents {
    let mut e = [0; NVARS];
    e[v.index()] = k;
    e
}

impl From<Rational> for MultiPoly {
    fn from(r: Rational) -> Self {
        MultiPoly::constant(r)
    }
}

impl From<Var> for MultiPoly {
    fn from(v: Var) -> Self {
        MultiPoly::var(v)
    }
}

impl<'a> Add<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &'a MultiPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<'a> SubAssign<&'a MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &'a MultiPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c.clone());
        }
    }
}

impl<'a> Sub<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl<'a> Mul<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        let (small, large) = if self.num_terms() <= rhs.num_terms() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut acc: std::collections::HashMap<Exponents, Rational> =
            std::collections::HashMap::with_capacity(small.num_terms() * large.num_terms());
        for (e1, c1) in &small.terms {
            for (e2, c2) in &large.terms {
                let e = add_exps(e1, e2);
                let prod = c1 * c2;
                match acc.entry(e) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += prod;
                    }
                }
            }
        }
        MultiPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl<'a> MulAssign<&'a MultiPoly> for MultiPoly {
    fn mul_assign(&mut self, rhs: &'a MultiPoly) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for MultiPoly {
    /// Terms in descending lexicographic order, e.g. `c^2*y^4 - 2*x + 1/3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let is_const = e.iter().all(|&k| k == 0);
            let mut wrote = false;
            if !abs.is_one() || is_const {
                write!(f, "{}", super::rational::format_rational(&abs))?;
                wrote = true;
            }
            for v in Var::ALL {
                let k = e[v.index()];
                if k == 0 {
                    continue;
                }
                if wrote {
                    f.write_str("*")?;
                }
                f.write_str(v.name())?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = p("y^2 + c");
        let b = p("y^2 - c");
        assert_eq!(&a * &b, p("y^4 - c^2"));
    }

    #[test]
    fn additive_identity_and_cancellation() {
        let a = p("3*x*y - 1/2*c + S01^2");
        assert_eq!(&a + &MultiPoly::zero(), a);
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).num_terms(), 0);
    }

    #[test]
    fn univariate_views_round_trip() {
        let a = p("x^2*S01^3 + c*S01 - y + 4");
        let coeffs = a.to_univariate(Var::S01);
        assert_eq!(coeffs.len(), 4);
        assert_eq!(coeffs[1], p("c"));
        assert_eq!(MultiPoly::from_univariate(Var::S01, &coeffs), a);
        assert_eq!(a.leading_coeff(Var::S01), p("x^2"));
    }

    #[test]
    fn specialize_and_substitute() {
        let a = p("c^2 + c*y^2");
        assert_eq!(
            a.specialize(Var::C, &int(1)).specialize(Var::Y, &rat(1, 2)),
            MultiPoly::constant(rat(5, 4))
        );
        let sub = a.substitute(Var::C, &p("y + 1"));
        assert_eq!(sub, p("y^3 + y^2 + y^2 + 2*y + 1"));
    }

    #[test]
    fn monomial_content_and_display() {
        let a = p("x^3*y^2*c + x^2*y^4");
        let m = a.monomial_content();
        assert_eq!(m[Var::X.index()], 2);
        assert_eq!(m[Var::Y.index()], 2);
        assert_eq!(m[Var::C.index()], 0);
        assert_eq!(a.div_monomial(&m), p("x*c + y^2"));
        assert_eq!(p("-x + 1/3").to_string(), "-x + 1/3");
        assert_eq!(p("2*c^2*y - 1").to_string(), "2*y*c^2 - 1");
    }

    #[test]
    fn derivative_and_pow() {
        let a = p("W^3*z^2 - W*z + 1");
        assert_eq!(a.derivative(Var::W), p("3*W^2*z^2 - z"));
        assert_eq!(p("x + 1").pow(3), p("x^3 + 3*x^2 + 3*x + 1"));
    }
}
