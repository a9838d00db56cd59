//! From the petal system to the spectral curve: iterated resultants down to
//! a single equation on `S01`, removal of the `S01 = -c` branch, and the
//! change of variables `x^2 = 1/z`, `S01 = z W`.

pub mod golden;

use crate::curve::SpectralCurve;
use crate::error::{Error, Result};
use crate::exactalg::{
    content, exact_divide, gcd, resultant, strip_factor, substitute_series, MultiPoly, Var, NVARS,
};
use crate::petals::PetalSystemState;

/// Which denominator the first two generators carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transcription {
    /// `1 - B01 + B01^2 - B00^2`.
    SingleB01,
    /// `1 - 2 B01 + B01^2 - B00^2 = (1 - B01)^2 - B00^2`, from the transfer matrix.
    TransferMatrix,
}

const UNKNOWNS: [Var; 4] = [Var::S01, Var::S00, Var::B01, Var::B00];

fn p(text: &str) -> MultiPoly {
    text.parse().expect("generator parses")
}

/// The four generators of the ideal in `x, y, c, S01, S00, B01, B00`.
pub fn build_system(t: Transcription) -> [MultiPoly; 4] {
    let d = match t {
        Transcription::SingleB01 => "(1 - B01 + B01^2 - B00^2)",
        Transcription::TransferMatrix => "(1 - 2 B01 + B01^2 - B00^2)",
    };
    [
        p(&format!("S01 {d} + B01 - 1")),
        p(&format!("S00 {d} - B00")),
        p("c x + x S00 B00 + x S01 B01 - B00"),
        p("x S00 B01 + y^2 x S01 B00 - B01"),
    ]
}

/// True when substituting the petal series into `poly` gives zero through
/// the order of the state.
pub fn vanishes_on(poly: &MultiPoly, state: &PetalSystemState) -> Result<bool> {
    if poly.is_zero() {
        return Ok(true);
    }
    let mut assignments = Vec::new();
    for v in UNKNOWNS {
        if poly.contains(v) {
            assignments.push((v, state.series_for(v).expect("unknown has a series")));
        }
    }
    if assignments.is_empty() {
        return Ok(false);
    }
    Ok(substitute_series(poly, &assignments)?.is_zero())
}

/// The transcription whose generators all vanish on the series solution.
pub fn adjudicate(state: &PetalSystemState) -> Result<Transcription> {
    for t in [Transcription::SingleB01, Transcription::TransferMatrix] {
        let mut ok = true;
        for g in build_system(t) {
            ok &= vanishes_on(&g, state)?;
        }
        if ok {
            return Ok(t);
        }
    }
    Err(Error::EliminationFailed(
        "no transcription of the system vanishes on the series solution".into(),
    ))
}

/// Exchanges two variables.
pub fn swap_vars(poly: &MultiPoly, a: Var, b: Var) -> MultiPoly {
    let mut terms = Vec::with_capacity(poly.num_terms());
    for (e, c) in poly.terms() {
        let mut e = *e;
        e.swap(a.index(), b.index());
        terms.push((e, c.clone()));
    }
    MultiPoly::from_terms(terms)
}

/// At `y = 1` the bilinear part of the fourth generator is invariant under
/// `B00 <-> B01, S00 <-> S01`, and exchanging `B00 <-> B01` alone turns the
/// whole generator into the third one at `c = 0`.
pub fn fourth_generator_symmetry(gens: &[MultiPoly; 4]) -> bool {
    let one = crate::exactalg::int(1);
    let g4 = gens[3].specialize(Var::Y, &one);
    let bilinear = MultiPoly::from_terms(
        g4.terms()
            .filter(|(e, _)| e[Var::X.index()] == 1)
            .map(|(e, c)| (*e, c.clone())),
    );
    let swapped = swap_vars(&swap_vars(&bilinear, Var::B00, Var::B01), Var::S00, Var::S01);
    let g3 = gens[2].specialize(Var::C, &crate::exactalg::int(0));
    swapped == bilinear && swap_vars(&g4, Var::B00, Var::B01) == g3
}

/// Outcome of an elimination: the eliminant and every factor removed on the way.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub eta: MultiPoly,
    pub stripped: Vec<MultiPoly>,
}

/// Gcd of the coefficients of `poly` viewed as a polynomial in `vars`.
fn content_in(poly: &MultiPoly, vars: &[Var]) -> MultiPoly {
    let mut groups: std::collections::BTreeMap<Vec<u16>, Vec<_>> = Default::default();
    for (e, c) in poly.terms() {
        let key: Vec<u16> = vars.iter().map(|v| e[v.index()]).collect();
        let mut rest = *e;
        for v in vars {
            rest[v.index()] = 0;
        }
        groups.entry(key).or_default().push((rest, c.clone()));
    }
    let mut acc = MultiPoly::zero();
    for (_, terms) in groups {
        acc = gcd(&acc, &MultiPoly::from_terms(terms));
        if acc.is_constant() {
            return MultiPoly::one();
        }
    }
    acc
}

struct Stripper<'a> {
    witness: &'a PetalSystemState,
    /// Leading coefficients of earlier pivots: resultants pick up powers of them.
    candidates: Vec<MultiPoly>,
    stripped: Vec<MultiPoly>,
}

impl Stripper<'_> {
    /// Removes monomial factors, factors free of the remaining unknowns and
    /// powers of earlier pivot leading coefficients. None of these vanish on
    /// the series solution; the last kind is checked.
    fn clean(&mut self, poly: MultiPoly, unknowns: &[Var]) -> Result<MultiPoly> {
        if poly.is_zero() {
            return Err(Error::EliminationFailed(
                "a resultant vanished identically".into(),
            ));
        }
        let mono = poly.monomial_content();
        let mut out = poly;
        if mono != [0; NVARS] {
            out = out.div_monomial(&mono);
            self.stripped
                .push(MultiPoly::monomial(mono, crate::exactalg::int(1)));
        }
        let cont = content_in(&out, unknowns);
        if !cont.is_constant() {
            out = exact_divide(&out, &cont, cont.variables()[0])?;
            self.stripped.push(cont);
        }
        for h in self.candidates.clone() {
            let (rest, k) = strip_factor(&out, &h);
            if k > 0 && !vanishes_on(&h, self.witness)? {
                out = rest;
                self.stripped.push(h.pow(k));
            }
        }
        Ok(out.monic())
    }

    fn note_pivot(&mut self, pivot: &MultiPoly, v: Var) {
        let lc = pivot.leading_coeff(v);
        if lc.is_constant() {
            return;
        }
        let mono = lc.monomial_content();
        let lc = lc.div_monomial(&mono);
        if !lc.is_constant() && !self.candidates.contains(&lc.monic()) {
            self.candidates.push(lc.monic());
        }
    }
}

/// Eliminates `order` from `generators` with iterated resultants; at each step
/// the generator of lowest positive degree is the pivot. Extraneous factors are
/// those that do not vanish on `witness`.
pub fn eliminate_with_order(
    generators: &[MultiPoly],
    witness: &PetalSystemState,
    order: [Var; 3],
) -> Result<Elimination> {
    let mut s = Stripper {
        witness,
        candidates: Vec::new(),
        stripped: Vec::new(),
    };
    let mut remaining: Vec<Var> = UNKNOWNS.to_vec();
    let mut polys: Vec<MultiPoly> = generators.to_vec();
    for v in order {
        remaining.retain(|&u| u != v);
        let (with_v, mut next): (Vec<_>, Vec<_>) = polys.into_iter().partition(|q| q.contains(v));
        if with_v.len() < 2 {
            return Err(Error::EliminationFailed(format!(
                "fewer than two polynomials involve {v}"
            )));
        }
        let pivot_at = (0..with_v.len())
            .min_by_key(|&i| with_v[i].degree(v))
            .expect("non-empty");
        let pivot = &with_v[pivot_at];
        s.note_pivot(pivot, v);
        for (i, q) in with_v.iter().enumerate() {
            if i == pivot_at {
                continue;
            }
            let r = resultant(q, pivot, v)?;
            next.push(s.clean(r, &remaining)?);
        }
        polys = next;
    }
    let mut candidates = Vec::new();
    for q in polys {
        let q = s.clean(q, &[Var::S01])?;
        let prim = {
            let c = content(&q, Var::S01);
            if c.is_constant() {
                q
            } else {
                s.stripped.push(c.clone());
                exact_divide(&q, &c, Var::S01)?
            }
        };
        if prim.contains(Var::S01) && vanishes_on(&prim, witness)? {
            candidates.push(prim.monic());
        }
    }
    candidates.sort_by_key(MultiPoly::num_terms);
    let eta = candidates.into_iter().next().ok_or_else(|| {
        Error::EliminationFailed("no factor of the eliminant vanishes on the series solution".into())
    })?;
    Ok(Elimination {
        eta,
        stripped: s.stripped,
    })
}

/// Eliminates `B00`, then `B01`, then `S00`.
pub fn eliminate_to_eta(
    generators: &[MultiPoly],
    witness: &PetalSystemState,
) -> Result<Elimination> {
    eliminate_with_order(generators, witness, [Var::B00, Var::B01, Var::S00])
}

/// True when `a = λ b` for some non-zero rational `λ`.
pub fn equal_up_to_constant(a: &MultiPoly, b: &MultiPoly) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    a.monic() == b.monic()
}

/// Divides out `c + S01`, then sets `x^2 = 1/z` and `S01 = z W` and clears
/// the smallest power of `z`.
pub fn eta_to_sextic(eta: &MultiPoly) -> Result<SpectralCurve> {
    let q = exact_divide(eta, &p("c + S01"), Var::S01)?;
    let mut shifted = Vec::with_capacity(q.num_terms());
    for (e, c) in q.terms() {
        let xe = e[Var::X.index()];
        if xe % 2 == 1 {
            return Err(Error::OddPowerEncountered);
        }
        let k = e[Var::S01.index()] as i32;
        shifted.push((e, c, k - (xe / 2) as i32));
    }
    let zmin = shifted.iter().map(|t| t.2).min().unwrap_or(0);
    let mut terms = Vec::with_capacity(shifted.len());
    for (e, c, zexp) in shifted {
        let mut out = [0u16; NVARS];
        out[Var::Y.index()] = e[Var::Y.index()];
        out[Var::C.index()] = e[Var::C.index()];
        out[Var::W.index()] = e[Var::S01.index()];
        out[Var::Z.index()] = (zexp - zmin) as u16;
        terms.push((out, c.clone()));
    }
    SpectralCurve::new(MultiPoly::from_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;
    use crate::petals::solve_petal_system;

    #[test]
    fn single_b01_system_fails_the_series_test() {
        let st = solve_petal_system(8).unwrap();
        let single = build_system(Transcription::SingleB01);
        assert!(!vanishes_on(&single[0], &st).unwrap());
        assert!(vanishes_on(&single[2], &st).unwrap());
        for g in build_system(Transcription::TransferMatrix) {
            assert!(vanishes_on(&g, &st).unwrap());
        }
        assert_eq!(adjudicate(&st).unwrap(), Transcription::TransferMatrix);
    }

    #[test]
    fn generator_symmetry() {
        assert!(fourth_generator_symmetry(&build_system(Transcription::TransferMatrix)));
    }

    #[test]
    fn golden_eta_to_sextic() {
        let curve = eta_to_sextic(&golden::eta()).unwrap();
        assert_eq!(curve.poly(), &golden::sextic());
        assert_eq!(curve.degree_w(), 6);
    }

    #[test]
    fn odd_powers_are_rejected() {
        let bad = &p("c + S01") * &p("x S01 - c");
        assert_eq!(eta_to_sextic(&bad).unwrap_err(), Error::OddPowerEncountered);
        assert!(matches!(
            eta_to_sextic(&p("S01^2 + 1")),
            Err(Error::NonZeroRemainder { .. })
        ));
    }

    #[test]
    fn golden_eta_properties() {
        let eta = golden::eta();
        assert!(eta.substitute(Var::S01, &p("-c")).is_zero());
        assert_eq!(eta.coeff_of(Var::S01, 7), p("x^4 y^4 - 2x^4 y^2 + x^4"));
        assert_eq!(eta.coeff_of(Var::S01, 0), p("-c^2"));
        let st = solve_petal_system(12).unwrap();
        assert!(vanishes_on(&eta, &st).unwrap());
        let degenerate = golden::sextic()
            .specialize(Var::Y, &int(0))
            .specialize(Var::C, &int(1));
        assert_eq!(degenerate, p(golden::DEGENERATE_SEXTIC));
    }
}
