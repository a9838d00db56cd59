//! Sylvester resultants with fraction-free (Bareiss) determinant evaluation.

use super::divide::exact_divide;
use super::poly::{MultiPoly, Var};
use crate::error::{Error, Result};

/// `Res_var(p, q)`: the Sylvester determinant with the rows of `p` first.
///
/// Swapping the arguments multiplies the result by `(-1)^(deg p * deg q)`.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: Var) -> Result<MultiPoly> {
    let m = p.degree(var) as usize;
    let n = q.degree(var) as usize;
    if m == 0 {
        return Err(Error::DegenerateInput { var });
    }
    if n == 0 {
        return Err(Error::DegenerateInput { var });
    }
    let pc = p.to_univariate(var);
    let qc = q.to_univariate(var);
    let size = m + n;
    let mut mat = vec![vec![MultiPoly::zero(); size]; size];
    // coefficients run from the top power down along each row
    for row in 0..n {
        for (j, c) in pc.iter().rev().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in qc.iter().rev().enumerate() {
            mat[n + row][row + j] = c.clone();
        }
    }
    Ok(bareiss_determinant(mat, var))
}

/// Fraction-free Gaussian elimination; every division is exact.
#[allow(clippy::needless_range_loop)]
pub fn bareiss_determinant(mut mat: Vec<Vec<MultiPoly>>, hint: Var) -> MultiPoly {
    let n = mat.len();
    if n == 0 {
        return MultiPoly::one();
    }
    let mut sign_flip = false;
    let mut prev = MultiPoly::one();
    for k in 0..n - 1 {
        if mat[k][k].is_zero() {
            // choose the smallest non-zero pivot to keep intermediate sizes down
            let swap = (k + 1..n)
                .filter(|&i| !mat[i][k].is_zero())
                .min_by_key(|&i| mat[i][k].num_terms());
            match swap {
                Some(i) => {
                    mat.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return MultiPoly::zero(),
            }
        }
        let pivot = mat[k][k].clone();
        for i in k + 1..n {
            let lead = mat[i][k].clone();
            for j in k + 1..n {
                let num = if lead.is_zero() {
                    &mat[i][j] * &pivot
                } else {
                    &(&mat[i][j] * &pivot) - &(&lead * &mat[k][j])
                };
                mat[i][j] = if prev.is_constant() {
                    let c = prev.constant_value().expect("constant");
                    num.scale(&num_traits::Inv::inv(c))
                } else {
                    let var = prev.variables().first().copied().unwrap_or(hint);
                    exact_divide(&num, &prev, var).expect("Bareiss division is exact")
                };
            }
            mat[i][k] = MultiPoly::zero();
        }
        prev = pivot;
    }
    let det = mat[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::int;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn linear_case() {
        let r = resultant(&p("B00 - c*x"), &p("B00 - S01"), Var::B00).unwrap();
        let expected = p("c*x - S01");
        assert!(r == expected || r == -&expected, "{r}");
    }

    #[test]
    fn quadratic_against_linear() {
        let r = resultant(&p("S00^2 - c"), &p("S00 - y"), Var::S00).unwrap();
        let expected = p("y^2 - c");
        assert!(r == expected || r == -&expected, "{r}");
    }

    #[test]
    fn degenerate_input() {
        assert_eq!(
            resultant(&p("c + 1"), &p("B01 - 1"), Var::B01),
            Err(Error::DegenerateInput { var: Var::B01 })
        );
    }

    #[test]
    fn numeric_determinant_with_pivoting() {
        let m = vec![
            vec![
                MultiPoly::zero(),
                MultiPoly::from_int(2),
                MultiPoly::from_int(1),
            ],
            vec![
                MultiPoly::from_int(1),
                MultiPoly::from_int(1),
                MultiPoly::from_int(1),
            ],
            vec![
                MultiPoly::from_int(3),
                MultiPoly::zero(),
                MultiPoly::from_int(4),
            ],
        ];
        // 0*(4) - 2*(4-3) + 1*(0-3) = -5
        assert_eq!(bareiss_determinant(m, Var::X), MultiPoly::constant(int(-5)));
    }

    #[test]
    fn swap_sign_rule() {
        let a = p("W^3*z^2 - W*z + 1");
        let b = p("W^2 - c");
        let r1 = resultant(&a, &b, Var::W).unwrap();
        let r2 = resultant(&b, &a, Var::W).unwrap();
        // (-1)^(3*2) = +1
        assert_eq!(r1, r2);
        let r3 = resultant(&a, &p("W - y"), Var::W).unwrap();
        let r4 = resultant(&p("W - y"), &a, Var::W).unwrap();
        assert_eq!(r3, -&r4);
    }
}
