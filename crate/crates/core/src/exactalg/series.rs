//! Power series in `x` truncated at a fixed order, with polynomial
//! coefficients (in practice polynomials in `y` and `c`).

use std::collections::HashMap;

use num_traits::One;

use super::poly::{MultiPoly, Var};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    coeffs: Vec<MultiPoly>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![MultiPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, MultiPoly::one())
    }

    pub fn constant(order: usize, c: MultiPoly) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `x` itself (zero if `order == 0`).
    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = MultiPoly::one();
        }
        s
    }

    /// Builds from coefficients; missing ones are zero and extras are dropped.
    pub fn from_coeffs(order: usize, coeffs: Vec<MultiPoly>) -> Self {
        let mut coeffs = coeffs;
        coeffs.resize(order + 1, MultiPoly::zero());
        Self { order, coeffs }
    }

    /// Truncates a polynomial in `x` (other variables stay in the coefficients).
    pub fn from_poly_in_x(order: usize, p: &MultiPoly) -> Self {
        let mut coeffs = p.to_univariate(Var::X);
        coeffs.truncate(order + 1);
        Self::from_coeffs(order, coeffs)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, j: usize) -> &MultiPoly {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(MultiPoly::is_zero)
    }

    /// Index of the first non-zero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let k = self.order;
        let mut out = vec![MultiPoly::zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=k - i].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] += &(a * b);
            }
        }
        Ok(Self {
            order: k,
            coeffs: out,
        })
    }

    pub fn scale(&self, p: &MultiPoly) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * p).collect(),
        }
    }

    /// Multiplies by `x`, dropping the coefficient pushed past the order.
    pub fn mul_x(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.order + 1);
        coeffs.push(MultiPoly::zero());
        coeffs.extend(self.coeffs[..self.order].iter().cloned());
        Self {
            order: self.order,
            coeffs,
        }
    }

    /// The series `b` with `self * b = 1 + O(x^{K+1})`; requires constant term 1.
    pub fn geometric_inverse(&self) -> Result<Self> {
        if self.coeffs[0] != MultiPoly::one() {
            return Err(Error::NonUnitConstantTerm);
        }
        let k = self.order;
        let mut inv: Vec<MultiPoly> = Vec::with_capacity(k + 1);
        inv.push(MultiPoly::one());
        for n in 1..=k {
            let mut acc = MultiPoly::zero();
            for j in 1..=n {
                if self.coeffs[j].is_zero() || inv[n - j].is_zero() {
                    continue;
                }
                acc -= &(&self.coeffs[j] * &inv[n - j]);
            }
            inv.push(acc);
        }
        Ok(Self {
            order: k,
            coeffs: inv,
        })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut result = Self::one(self.order);
        for _ in 0..e {
            result = result.mul(self)?;
        }
        Ok(result)
    }

    pub fn specialize(&self, v: Var, value: &super::rational::Rational) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.specialize(v, value)).collect(),
        }
    }

    /// The truncated polynomial `sum_j coeff_j x^j`.
    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_univariate(Var::X, &self.coeffs)
    }
}

/// Substitutes series for some variables of `poly`; `x` stays the series
/// variable and any other variable stays in the coefficients.
///
/// Powers of each substituted series are cached, so evaluating a large
/// polynomial costs one product per term.
pub fn substitute_series(
    poly: &MultiPoly,
    assignments: &[(Var, &TruncatedSeries)],
) -> Result<TruncatedSeries> {
    let order = assignments
        .first()
        .map(|(_, s)| s.order())
        .ok_or_else(|| Error::InvalidArgument("no series to substitute".into()))?;
    for (_, s) in assignments {
        if s.order() != order {
            return Err(Error::OrderMismatch {
                left: order,
                right: s.order(),
            });
        }
    }
    let mut cache: HashMap<(usize, u16), TruncatedSeries> = HashMap::new();
    let mut total = TruncatedSeries::zero(order);
    for (exps, coeff) in poly.terms() {
        let mut rest = *exps;
        let xpow = rest[Var::X.index()] as usize;
        rest[Var::X.index()] = 0;
        if xpow > order {
            continue;
        }
        let mut term = TruncatedSeries::one(order);
        for (slot, (v, s)) in assignments.iter().enumerate() {
            let k = rest[v.index()];
            rest[v.index()] = 0;
            if k == 0 {
                continue;
            }
            if !cache.contains_key(&(slot, k)) {
                let base = if k > 1 && cache.contains_key(&(slot, k - 1)) {
                    cache[&(slot, k - 1)].mul(s)?
                } else {
                    s.pow(k as u32)?
                };
                cache.insert((slot, k), base);
            }
            term = term.mul(&cache[&(slot, k)])?;
        }
        let c = MultiPoly::monomial(rest, coeff.clone());
        for (j, t) in term.coeffs.iter().enumerate() {
            if j + xpow > order || t.is_zero() {
                continue;
            }
            total.coeffs[j + xpow] += &(t * &c);
        }
    }
    Ok(total)
}

impl TruncatedSeries {
    /// True if the constant coefficient is exactly one.
    pub fn has_unit_constant(&self) -> bool {
        self.coeffs[0].constant_value().is_some_and(|c| c.is_one())
    }

    /// True if every coefficient through `upto` is zero.
    pub fn vanishes_through(&self, upto: usize) -> bool {
        self.coeffs[..=upto.min(self.order)]
            .iter()
            .all(MultiPoly::is_zero)
    }
}

impl Default for TruncatedSeries {
    fn default() -> Self {
        Self::zero(0)
    }
}
