//! Petal generating functions solved as a fixed point on truncated series.
//!
//! With the type symmetries applied, the unknowns are `B00, B01` (petals)
//! and `S00, S01` (petal sequences). Each round recomputes the sequences from
//! the transfer-matrix closed forms
//!
//! ```text
//! S01 = (1 - B01) / D,   S00 = B00 / D,   D = (1 - B01)^2 - B00^2
//! ```
//!
//! and then the petals from
//!
//! ```text
//! B00 = c x + x S00 B00 + x S01 B01
//! B01 = x S00 B01 + y^2 x S01 B00
//! ```
//!
//! Every `B` carries an explicit factor `x`, so round `r` fixes the
//! coefficients of `x^r`; rounds run at truncation `r + 1` until the last one
//! at the full order, which must reproduce its input.

use crate::error::{Error, Result};
use crate::exactalg::{MultiPoly, TruncatedSeries, Var};
use crate::maps::MomentTable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PetalSystemState {
    order: usize,
    b00: TruncatedSeries,
    b01: TruncatedSeries,
    s00: TruncatedSeries,
    s01: TruncatedSeries,
    rounds: usize,
}

impl PetalSystemState {
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn b00(&self) -> &TruncatedSeries {
        &self.b00
    }
    pub fn b01(&self) -> &TruncatedSeries {
        &self.b01
    }
    pub fn s00(&self) -> &TruncatedSeries {
        &self.s00
    }
    pub fn s01(&self) -> &TruncatedSeries {
        &self.s01
    }
    /// By the type-exchange symmetry `S10 = S01`.
    pub fn s10(&self) -> &TruncatedSeries {
        &self.s01
    }
    /// Number of fixed-point rounds used.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// The value of variable `v` as a series; `None` for variables that are
    /// not unknowns of the system.
    pub fn series_for(&self, v: Var) -> Option<&TruncatedSeries> {
        match v {
            Var::B00 => Some(&self.b00),
            Var::B01 => Some(&self.b01),
            Var::S00 => Some(&self.s00),
            Var::S01 => Some(&self.s01),
            _ => None,
        }
    }

    /// Restricts to a lower order.
    pub fn truncate(&self, order: usize) -> Self {
        let t = |s: &TruncatedSeries| TruncatedSeries::from_coeffs(order, s.coeffs().to_vec());
        Self {
            order: order.min(self.order),
            b00: t(&self.b00),
            b01: t(&self.b01),
            s00: t(&self.s00),
            s01: t(&self.s01),
            rounds: self.rounds,
        }
    }
}

fn extend(s: &TruncatedSeries, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_coeffs(order, s.coeffs().to_vec())
}

fn denominator(b00: &TruncatedSeries, b01: &TruncatedSeries) -> Result<TruncatedSeries> {
    let one_minus = TruncatedSeries::one(b01.order()).sub(b01)?;
    one_minus.mul(&one_minus)?.sub(&b00.mul(b00)?)
}

/// `(S00, S01)` from the closed forms.
fn sequences(
    b00: &TruncatedSeries,
    b01: &TruncatedSeries,
) -> Result<(TruncatedSeries, TruncatedSeries)> {
    let inv = denominator(b00, b01)?.geometric_inverse()?;
    let s01 = TruncatedSeries::one(b01.order()).sub(b01)?.mul(&inv)?;
    let s00 = b00.mul(&inv)?;
    Ok((s00, s01))
}

/// `(B00, B01)` from the petal equations.
fn petals(
    b00: &TruncatedSeries,
    b01: &TruncatedSeries,
    s00: &TruncatedSeries,
    s01: &TruncatedSeries,
) -> Result<(TruncatedSeries, TruncatedSeries)> {
    let order = b00.order();
    let y2 = MultiPoly::var_pow(Var::Y, 2);
    let cx = TruncatedSeries::x(order).scale(&MultiPoly::var(Var::C));
    let new00 = cx.add(&s00.mul(b00)?.add(&s01.mul(b01)?)?.mul_x())?;
    let new01 = s00.mul(b01)?.add(&s01.mul(b00)?.scale(&y2))?.mul_x();
    Ok((new00, new01))
}

/// Solves the reduced system through `x^order`.
pub fn solve_petal_system(order: usize) -> Result<PetalSystemState> {
    if order < 2 {
        return Err(Error::InvalidArgument(format!(
            "series order must be at least 2, got {order}"
        )));
    }
    let max_rounds = order + 2;
    let mut b00 = TruncatedSeries::zero(1);
    let mut b01 = TruncatedSeries::zero(1);
    for round in 1..=max_rounds {
        let work = (round + 1).min(order);
        let (o00, o01) = (extend(&b00, work), extend(&b01, work));
        let (s00, s01) = sequences(&o00, &o01)?;
        let (n00, n01) = petals(&o00, &o01, &s00, &s01)?;
        if work == order && n00 == o00 && n01 == o01 {
            return Ok(PetalSystemState {
                order,
                b00: n00,
                b01: n01,
                s00,
                s01,
                rounds: round,
            });
        }
        b00 = n00;
        b01 = n01;
    }
    Err(Error::NoConvergence {
        iterations: max_rounds,
    })
}

/// The plain Jacobi iteration at a fixed truncation, starting from `B = 0`.
/// Returns the `(B00, B01)` iterates after each round.
pub fn fixed_point_iterates(
    order: usize,
    rounds: usize,
) -> Result<Vec<(TruncatedSeries, TruncatedSeries)>> {
    let mut b00 = TruncatedSeries::zero(order);
    let mut b01 = TruncatedSeries::zero(order);
    let mut out = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let (s00, s01) = sequences(&b00, &b01)?;
        let (n00, n01) = petals(&b00, &b01, &s00, &s01)?;
        b00 = n00;
        b01 = n01;
        out.push((b00.clone(), b01.clone()));
    }
    Ok(out)
}

/// The four equations of the reduced system, with the transfer-matrix
/// denominator, evaluated on `state`; all vanish for a solution.
pub fn residuals(state: &PetalSystemState) -> Result<[TruncatedSeries; 4]> {
    let (b00, b01, s00, s01) = (&state.b00, &state.b01, &state.s00, &state.s01);
    let d = denominator(b00, b01)?;
    let order = state.order;
    let one = TruncatedSeries::one(order);
    let y2 = MultiPoly::var_pow(Var::Y, 2);
    let cx = TruncatedSeries::x(order).scale(&MultiPoly::var(Var::C));
    let r1 = s01.mul(&d)?.add(b01)?.sub(&one)?;
    let r2 = s00.mul(&d)?.sub(b00)?;
    let r3 = cx
        .add(&s00.mul(b00)?.mul_x())?
        .add(&s01.mul(b01)?.mul_x())?
        .sub(b00)?;
    let r4 = s00
        .mul(b01)?
        .mul_x()
        .add(&s01.mul(b00)?.mul_x().scale(&y2))?
        .sub(b01)?;
    Ok([r1, r2, r3, r4])
}

/// `M_0..M_{n_max}` read off the even coefficients of `S01`.
pub fn extract_moments(state: &PetalSystemState, n_max: usize) -> Result<MomentTable> {
    if 2 * n_max > state.order {
        return Err(Error::InsufficientOrder {
            order: state.order,
            n_max,
        });
    }
    Ok(MomentTable::new(
        (0..=n_max)
            .map(|n| state.s01.coeff(2 * n).clone())
            .collect(),
    ))
}

/// True when every odd coefficient of `S01` vanishes.
pub fn odd_coefficients_vanish(state: &PetalSystemState) -> bool {
    (1..=state.order)
        .step_by(2)
        .all(|j| state.s01.coeff(j).is_zero())
}

type Mat2 = [[TruncatedSeries; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Result<Mat2> {
    let entry = |i: usize, j: usize| -> Result<TruncatedSeries> {
        a[i][0].mul(&b[0][j])?.add(&a[i][1].mul(&b[1][j])?)
    };
    Ok([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
}

/// The transfer matrix `T_ab = B_{ā b}`, with the symmetries applied.
pub fn transfer_matrix(state: &PetalSystemState) -> Mat2 {
    let (b00, b01) = (state.b00.clone(), state.b01.clone());
    [[b01.clone(), b00.clone()], [b00, b01]]
}

/// Compares the geometric series `Σ_{j ≤ n_terms} T^j` with the closed forms:
/// entry `(0,0)` against `S10` and entry `(1,0)` against `S00`, both through
/// order `min(K, n_terms)`.
pub fn transfer_matrix_check(state: &PetalSystemState, n_terms: usize) -> bool {
    let run = || -> Result<bool> {
        let order = state.order;
        let t = transfer_matrix(state);
        let one = TruncatedSeries::one(order);
        let zero = TruncatedSeries::zero(order);
        let mut power: Mat2 = [[one.clone(), zero.clone()], [zero.clone(), one]];
        let mut sum = power.clone();
        for _ in 0..n_terms.min(order) {
            power = mat_mul(&power, &t)?;
            for i in 0..2 {
                for j in 0..2 {
                    sum[i][j] = sum[i][j].add(&power[i][j])?;
                }
            }
        }
        let upto = n_terms.min(order);
        let agree =
            |a: &TruncatedSeries, b: &TruncatedSeries| (0..=upto).all(|j| a.coeff(j) == b.coeff(j));
        Ok(agree(&sum[0][0], state.s10()) && agree(&sum[1][0], &state.s00))
    };
    run().unwrap_or(false)
}

/// Checks `λ± = B01 ± B00` against the trace and determinant of `T`, and
/// `T Q = Q diag(λ-, λ+)` for `Q = [[-1, 1], [1, 1]]`.
pub fn eigen_identity_check(state: &PetalSystemState) -> bool {
    let run = || -> Result<bool> {
        let t = transfer_matrix(state);
        let lp = state.b01.add(&state.b00)?;
        let lm = state.b01.sub(&state.b00)?;
        let trace = t[0][0].add(&t[1][1])?;
        let det = t[0][0].mul(&t[1][1])?.sub(&t[0][1].mul(&t[1][0])?)?;
        let sum_ok = lp.add(&lm)? == trace && trace == state.b01.scale(&MultiPoly::from_int(2));
        let b01sq = state.b01.mul(&state.b01)?;
        let b00sq = state.b00.mul(&state.b00)?;
        let prod_ok = lp.mul(&lm)? == det && det == b01sq.sub(&b00sq)?;
        let order = state.order;
        let one = TruncatedSeries::one(order);
        let zero = TruncatedSeries::zero(order);
        let q: Mat2 = [[one.neg(), one.clone()], [one.clone(), one]];
        let diag: Mat2 = [[lm, zero.clone()], [zero, lp]];
        let basis_ok = mat_mul(&t, &q)? == mat_mul(&q, &diag)?;
        Ok(sum_ok && prod_ok && basis_ok)
    };
    run().unwrap_or(false)
}

/// Solution of the system without the symmetry reduction: all four petal
/// series `B_ij` and sequence series `S_ij`, indexed `[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnreducedState {
    pub b: Mat2,
    pub s: Mat2,
}

/// Solves the unreduced system; no symmetry between the two types is assumed.
pub fn solve_unreduced(order: usize) -> Result<UnreducedState> {
    let mut b: Mat2 =
        std::array::from_fn(|_| std::array::from_fn(|_| TruncatedSeries::zero(order)));
    let cx = TruncatedSeries::x(order).scale(&MultiPoly::var(Var::C));
    let y2 = MultiPoly::var_pow(Var::Y, 2);
    for _ in 0..order + 2 {
        // T_ab = B_{ā b}; Σ T^n = (I - T)^{-1} = adj(I - T) / det(I - T)
        let t = |a: usize, c: usize| &b[1 - a][c];
        let one = TruncatedSeries::one(order);
        let i00 = one.sub(t(0, 0))?;
        let i11 = one.sub(t(1, 1))?;
        let det = i00.mul(&i11)?.sub(&t(0, 1).mul(t(1, 0))?)?;
        let inv = det.geometric_inverse()?;
        let resolvent: Mat2 = [
            [i11.mul(&inv)?, t(0, 1).mul(&inv)?],
            [t(1, 0).mul(&inv)?, i00.mul(&inv)?],
        ];
        // S_aa = (ΣT^n)_{ā a}, S_{ā a} = (ΣT^n)_{a a}
        let mut s: Mat2 =
            std::array::from_fn(|_| std::array::from_fn(|_| TruncatedSeries::zero(order)));
        for a in 0..2 {
            s[a][a] = resolvent[1 - a][a].clone();
            s[1 - a][a] = resolvent[a][a].clone();
        }
        let mut next = b.clone();
        for a in 0..2 {
            let abar = 1 - a;
            next[a][a] = cx.add(
                &s[abar][abar]
                    .mul(&b[a][a])?
                    .add(&s[abar][a].mul(&b[abar][a])?)?
                    .mul_x(),
            )?;
            next[a][abar] = s[abar][abar]
                .mul(&b[a][abar])?
                .add(&s[abar][a].mul(&b[abar][abar])?.scale(&y2))?
                .mul_x();
        }
        if next == b {
            return Ok(UnreducedState { b, s });
        }
        b = next;
    }
    Err(Error::NoConvergence {
        iterations: order + 2,
    })
}
