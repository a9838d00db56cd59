//! Dense univariate polynomials over `Rational`: Euclidean gcd, square-free
//! parts and Sturm-sequence real root isolation.

use num_traits::{One, Signed, Zero};

use super::poly::{MultiPoly, Var};
use super::rational::{to_f64, Rational};

/// Coefficients lowest power first; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Converts a polynomial that involves only `v`; `None` otherwise.
    pub fn from_multi(p: &MultiPoly, v: Var) -> Option<Self> {
        let coeffs = p.to_univariate(v);
        let mut out = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            out.push(c.constant_value()?);
        }
        Some(Self::new(out))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t + to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().recip();
        Self::new(self.coeffs.iter().map(|c| c * &l).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(vec![]);
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let lead_inv = d.lead().recip();
        if rem.len() < d.coeffs.len() {
            return (Self::new(vec![]), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] * &lead_inv;
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * dc;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// The product of the distinct irreducible factors, monic.
    pub fn square_free_part(&self) -> Self {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Removes the factor `t^k` and returns `(rest, k)`.
    pub fn strip_zero_root(&self) -> (Self, usize) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (Self::new(self.coeffs[k..].to_vec()), k)
    }

    fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(Self::new(r.coeffs.into_iter().map(|c| -c).collect()));
        }
        seq.pop();
        seq
    }

    fn sign_changes(seq: &[Self], t: &Rational) -> usize {
        let mut changes = 0;
        let mut last = 0i8;
        for p in seq {
            let v = p.eval(t);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Distinct real roots, each refined by exact bisection to width below `tol`.
    pub fn real_roots(&self, tol: f64) -> Vec<f64> {
        if self.degree() == 0 {
            return vec![];
        }
        let p = self.square_free_part();
        // Cauchy bound
        let lead = p.lead().abs();
        let bound = Rational::one()
            + p.coeffs[..p.degree()]
                .iter()
                .map(|c| c.abs() / &lead)
                .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        let seq = p.sturm_sequence();
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        let tol_r = Rational::from_float(tol)
            .unwrap_or_else(|| Rational::new(1.into(), 1_000_000_000_000i64.into()));
        let two = Rational::from_integer(2.into());
        while let Some((lo, hi)) = stack.pop() {
            let count = Self::sign_changes(&seq, &lo) - Self::sign_changes(&seq, &hi);
            if count == 0 {
                continue;
            }
            if count == 1 && &hi - &lo < tol_r {
                out.push(to_f64(&((&lo + &hi) / &two)));
                continue;
            }
            let mid = (&lo + &hi) / &two;
            if p.eval(&mid).is_zero() {
                out.push(to_f64(&mid));
                // isolate the root at the split point before recursing on both sides
                let mut eps = (&hi - &lo) / Rational::from_integer(1024.into());
                loop {
                    let (a, b) = (&mid - &eps, &mid + &eps);
                    if !p.eval(&a).is_zero()
                        && !p.eval(&b).is_zero()
                        && Self::sign_changes(&seq, &a) - Self::sign_changes(&seq, &b) == 1
                    {
                        break;
                    }
                    eps /= &two;
                }
                stack.push((lo, &mid - &eps));
                stack.push((&mid + &eps, hi));
                continue;
            }
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::int;

    fn u(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&k| int(k)).collect())
    }

    #[test]
    fn gcd_and_square_free() {
        // (t-1)^2 (t+2)
        let p = u(&[2, -3, 0, 1]);
        assert_eq!(p.square_free_part(), u(&[-2, 1, 1]));
        assert_eq!(p.gcd(&p.derivative()), u(&[-1, 1]));
    }

    #[test]
    fn sturm_isolates_roots() {
        // (4t - 27)^2 t^3 (t + 1)
        let p = u(&[-27, 4]).mul(&u(&[-27, 4])).mul(&u(&[0, 0, 0, 1, 1]));
        let roots = p.real_roots(1e-12);
        assert_eq!(roots.len(), 3);
        assert!((roots[0] + 1.0).abs() < 1e-9);
        assert!(roots[1].abs() < 1e-9);
        assert!((roots[2] - 6.75).abs() < 1e-9);
    }

    #[test]
    fn root_at_midpoint_does_not_hide_neighbours() {
        // t (t - 7) (t + 20000)
        let p = u(&[0, -140000, 19993, 1]);
        let r = p.real_roots(1e-12);
        assert_eq!(r.len(), 3);
        assert!((r[0] + 20000.0).abs() < 1e-9 && r[1] == 0.0 && (r[2] - 7.0).abs() < 1e-9);
    }

    #[test]
    fn strip_zero_root() {
        let (rest, k) = u(&[0, 0, 3, 1]).strip_zero_root();
        assert_eq!(k, 2);
        assert_eq!(rest, u(&[3, 1]));
    }
}
