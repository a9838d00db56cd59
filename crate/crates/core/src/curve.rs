//! Spectral curves `Q(W, z) = 0` with exact coefficients in `(y, c)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactalg::{to_f64, MultiPoly, Rational, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralCurve {
    poly: MultiPoly,
    degree_w: usize,
}

impl SpectralCurve {
    /// Wraps a polynomial in `W, z, y, c`.
    pub fn new(poly: MultiPoly) -> Result<Self> {
        for v in poly.variables() {
            if !matches!(v, Var::W | Var::Z | Var::Y | Var::C) {
                return Err(Error::InvalidArgument(format!(
                    "spectral curve may only involve W, z, y, c; found {v}"
                )));
            }
        }
        let degree_w = poly.degree(Var::W) as usize;
        if degree_w == 0 {
            return Err(Error::DegenerateInput { var: Var::W });
        }
        Ok(Self { poly, degree_w })
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn degree_w(&self) -> usize {
        self.degree_w
    }

    /// Fixes `y` and `c` exactly.
    pub fn specialize(&self, y: &Rational, c: &Rational) -> Self {
        let poly = self.poly.specialize(Var::Y, y).specialize(Var::C, c);
        let degree_w = poly.degree(Var::W) as usize;
        Self { poly, degree_w }
    }

    /// Coefficients of `W^0, W^1, ...` as polynomials in the remaining variables.
    pub fn w_coefficients(&self) -> Vec<MultiPoly> {
        self.poly.to_univariate(Var::W)
    }

    /// Floating-point coefficients at fixed `(y, c)`: entry `k` holds the
    /// coefficients in `z` (lowest first) of `W^k`.
    pub fn numeric(&self, y: f64, c: f64) -> NumericCurve {
        let mut coeffs = vec![Vec::new(); self.degree_w + 1];
        for (e, coeff) in self.poly.terms() {
            let mut v = to_f64(coeff);
            v *= y.powi(e[Var::Y.index()] as i32);
            v *= c.powi(e[Var::C.index()] as i32);
            let (k, j) = (e[Var::W.index()] as usize, e[Var::Z.index()] as usize);
            let row: &mut Vec<f64> = &mut coeffs[k];
            if row.len() <= j {
                row.resize(j + 1, 0.0);
            }
            row[j] += v;
        }
        NumericCurve { coeffs }
    }
}

/// `Σ_k p_k(z) W^k` with real polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericCurve {
    coeffs: Vec<Vec<f64>>,
}

fn horner(p: &[f64], z: Complex64) -> Complex64 {
    p.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

impl NumericCurve {
    pub fn from_coeffs(coeffs: Vec<Vec<f64>>) -> Self {
        Self { coeffs }
    }

    pub fn degree_w(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficients of the univariate polynomial in `W` at fixed `z`, lowest first.
    pub fn at(&self, z: Complex64) -> Vec<Complex64> {
        self.coeffs.iter().map(|p| horner(p, z)).collect()
    }

    pub fn eval(&self, w: Complex64, z: Complex64) -> Complex64 {
        self.at(z)
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * w + a)
    }

    /// `(∂Q/∂W, ∂Q/∂z)` at `(w, z)`.
    pub fn gradient(&self, w: Complex64, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut qw, mut qz) = (zero, zero);
        let mut wk = Complex64::new(1.0, 0.0);
        for (k, p) in self.coeffs.iter().enumerate() {
            let dp = p
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(zero, |acc, (j, &a)| acc * z + a * j as f64);
            qz += dp * wk;
            if k + 1 < self.coeffs.len() {
                qw += horner(&self.coeffs[k + 1], z) * wk * (k + 1) as f64;
            }
            wk *= w;
        }
        (qw, qz)
    }

    /// `Σ_k |p_k(z)| |w|^k`: the natural magnitude against which residuals are judged.
    pub fn scale(&self, w: Complex64, z: Complex64) -> f64 {
        let r = w.norm();
        self.at(z)
            .iter()
            .enumerate()
            .map(|(k, a)| a.norm() * r.powi(k as i32))
            .sum::<f64>()
            .max(f64::MIN_POSITIVE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    #[test]
    fn numeric_matches_exact() {
        let c = SpectralCurve::new("z^2 W^3 + 2(c-1) z W^2 + ((c-1)^2 - z) W + 1".parse().unwrap())
            .unwrap();
        assert_eq!(c.degree_w(), 3);
        let n = c.numeric(0.5, 2.0);
        let (w, z) = (Complex64::new(0.3, -0.2), Complex64::new(1.5, 0.7));
        let mut pt = [Complex64::new(0.0, 0.0); crate::exactalg::NVARS];
        pt[Var::W.index()] = w;
        pt[Var::Z.index()] = z;
        pt[Var::C.index()] = Complex64::new(2.0, 0.0);
        let exact = c.poly().eval_complex(&pt);
        assert!((n.eval(w, z) - exact).norm() < 1e-12);
        let (qw, qz) = n.gradient(w, z);
        let h = 1e-6;
        let fd_w = (n.eval(w + h, z) - n.eval(w - h, z)) / (2.0 * h);
        let fd_z = (n.eval(w, z + h) - n.eval(w, z - h)) / (2.0 * h);
        assert!((qw - fd_w).norm() < 1e-7 && (qz - fd_z).norm() < 1e-7);
        let s = c.specialize(&int(0), &int(1));
        assert_eq!(s.poly(), &"z^2 W^3 - z W + 1".parse().unwrap());
    }

    #[test]
    fn rejects_foreign_variables() {
        assert!(SpectralCurve::new("W x".parse().unwrap()).is_err());
        assert!(SpectralCurve::new("z + c".parse().unwrap()).is_err());
    }
}
