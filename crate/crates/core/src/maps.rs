//! Edge-typed combinatorial maps with a single black vertex, and the brute
//! force moment oracle that sums planar map weights over all of `S_{2k}`.
//!
//! Labels are 1-based in every textual form and 0-based internally. The black
//! vertex is the full cycle `(1 2 ... 2k)`; edge `e` has type 1 when `e` is
//! odd and type 0 when it is even.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{int, MultiPoly, Rational, Var};
use crate::exec::Exec;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// The cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn full_cycle(n: usize) -> Self {
        Self {
            images: (0..n).map(|i| (i + 1) % n).collect(),
        }
    }

    /// Builds from 0-based images; rejects anything that is not a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidArgument(format!(
                    "not a permutation of 0..{n}: {images:?}"
                )));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// Builds from 1-based cycles; unlisted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cyc in cycles {
            for (j, &label) in cyc.iter().enumerate() {
                if label == 0 || label > n || seen[label - 1] {
                    return Err(Error::InvalidArgument(format!(
                        "bad cycle label {label} for n = {n}"
                    )));
                }
                seen[label - 1] = true;
                images[label - 1] = cyc[(j + 1) % cyc.len()] - 1;
            }
        }
        Ok(Self { images })
    }

    /// Parses cycle notation such as `(2)(5)(6)(143)` or `(1,4,3)(2)`.
    /// Without separators every digit is its own label.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        for chunk in text.split('(').skip(1) {
            let body = chunk
                .split(')')
                .next()
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let labels: Vec<usize> = if body.contains([',', ' ']) {
                body.split([',', ' '])
                    .filter(|s| !s.is_empty())
                    .map(|s| s.trim().parse().map_err(|_| Error::Parse(s.to_string())))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .map(|ch| {
                        ch.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::Parse(format!("bad label {ch:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            cycles.push(labels);
        }
        Self::from_cycles(n, &cycles)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`, i.e. `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    /// Disjoint cycles (0-based), each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i);
                i = self.images[i];
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        count_cycles(&self.images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.len() > 9;
        for cyc in self.cycles() {
            let labels: Vec<String> = cyc.iter().map(|i| (i + 1).to_string()).collect();
            let sep = if wide { "," } else { "" };
            write!(f, "({})", labels.join(sep))?;
        }
        Ok(())
    }
}

fn count_cycles(images: &[usize]) -> usize {
    let mut seen = [false; 64];
    let mut count = 0;
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = images[i];
        }
    }
    count
}

/// Type of the 0-based edge `i` (label `i + 1`): odd labels are type 1.
pub fn edge_type(i: usize) -> u8 {
    ((i + 1) % 2) as u8
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeTypedMap {
    k: usize,
    sigma_circ: Permutation,
}

impl EdgeTypedMap {
    pub fn new(k: usize, sigma_circ: Permutation) -> Result<Self> {
        if k == 0 || sigma_circ.len() != 2 * k {
            return Err(Error::InvalidArgument(format!(
                "sigma_circ must act on 2k = {} edges, got {}",
                2 * k,
                sigma_circ.len()
            )));
        }
        Ok(Self { k, sigma_circ })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sigma_circ(&self) -> &Permutation {
        &self.sigma_circ
    }

    pub fn sigma_bullet(&self) -> Permutation {
        Permutation::full_cycle(2 * self.k)
    }

    /// `σ•σ∘`, whose cycles are the faces.
    pub fn faces(&self) -> Permutation {
        self.sigma_bullet().compose(&self.sigma_circ)
    }

    pub fn is_planar(&self) -> bool {
        let lhs = self.sigma_circ.cycle_count() as i64 - 2 * self.k as i64
            + self.faces().cycle_count() as i64
            - 1;
        lhs == 0
    }

    /// Type changes going once around the white vertex `cycle` (0-based labels
    /// in `σ∘` order).
    pub fn alt_statistic(&self, cycle: &[usize]) -> Result<u32> {
        if cycle.is_empty() {
            return Err(Error::InvalidArgument("empty cycle".into()));
        }
        for (j, &e) in cycle.iter().enumerate() {
            if self.sigma_circ.apply(e) != cycle[(j + 1) % cycle.len()] {
                return Err(Error::InvalidArgument(format!(
                    "{cycle:?} is not a cycle of sigma_circ"
                )));
            }
        }
        Ok(alt_of(cycle.iter().map(|&e| edge_type(e))))
    }

    /// `c^{#white vertices} y^{Σ alt}`; only defined for planar maps.
    pub fn weight(&self) -> Result<MultiPoly> {
        if !self.is_planar() {
            return Err(Error::NonPlanarMap);
        }
        let cycles = self.sigma_circ.cycles();
        let mut alt = 0;
        for cyc in &cycles {
            alt += self.alt_statistic(cyc)?;
        }
        Ok(weight_monomial(cycles.len() as u16, alt as u16, 1))
    }
}

fn alt_of(types: impl Iterator<Item = u8>) -> u32 {
    let types: Vec<u8> = types.collect();
    let n = types.len();
    (0..n).filter(|&j| types[j] != types[(j + 1) % n]).count() as u32
}

fn weight_monomial(c_exp: u16, y_exp: u16, count: u64) -> MultiPoly {
    let mut exps = [0u16; crate::exactalg::NVARS];
    exps[Var::C.index()] = c_exp;
    exps[Var::Y.index()] = y_exp;
    MultiPoly::monomial(exps, Rational::from_integer(count.into()))
}

/// Exact moments `M_0, M_1, ...` as polynomials in `(c, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTable {
    entries: Vec<MultiPoly>,
}

impl MomentTable {
    pub fn new(entries: Vec<MultiPoly>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    pub fn get(&self, n: usize) -> Option<&MultiPoly> {
        self.entries.get(n)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest moment index present.
    pub fn n_max(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }

    /// Specialises every entry at the given `y` and `c`.
    pub fn evaluate(&self, y: &Rational, c: &Rational) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|p| {
                p.specialize(Var::Y, y)
                    .specialize(Var::C, c)
                    .constant_value()
                    .unwrap_or_else(|| int(0))
            })
            .collect()
    }

    /// The table structure invariants: unit `M_0` and non-negative integer coefficients.
    pub fn is_well_formed(&self) -> bool {
        self.entries.first() == Some(&MultiPoly::one())
            && self
                .entries
                .iter()
                .all(MultiPoly::has_nonnegative_integer_coefficients)
    }
}

pub const DEFAULT_BUDGET: u128 = 3_628_800;

/// Enumeration settings: permutation budget, execution mode and optional
/// exchange of the two edge types.
#[derive(Clone, Copy, Debug)]
pub struct Enumerator {
    pub budget: u128,
    pub exec: Exec,
    pub swap_types: bool,
}

impl Default for Enumerator {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            exec: Exec::default(),
            swap_types: false,
        }
    }
}

/// One planar map, for JSON-lines dumps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRecord {
    pub k: usize,
    pub sigma_circ: String,
    pub weight: String,
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Counts indexed by `(c exponent, y exponent)`.
type Histogram = BTreeMap<(u16, u16), u64>;

impl Enumerator {
    fn check_budget(&self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        let perms = factorial(2 * k);
        if perms > self.budget {
            return Err(Error::TooLarge {
                permutations: perms,
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// `M_k` as the sum of planar map weights.
    pub fn moment(&self, k: usize) -> Result<MultiPoly> {
        self.check_budget(k)?;
        let hist = self.histogram(k);
        let mut out = MultiPoly::zero();
        for ((ce, ye), count) in hist {
            out += &weight_monomial(ce, ye, count);
        }
        Ok(out)
    }

    /// All planar maps with their weights, in lexicographic order of `σ∘`.
    pub fn planar_maps(&self, k: usize) -> Result<Vec<MapRecord>> {
        self.check_budget(k)?;
        let n = 2 * k;
        let prefixes = prefixes(n);
        let swap = self.swap_types;
        let chunks = self.exec.map(&prefixes, |&(a, b)| {
            let mut recs = Vec::new();
            for_each_with_prefix(n, a, b, |perm| {
                if let Some((ce, ye)) = planar_weight(perm, swap) {
                    let p = Permutation {
                        images: perm.to_vec(),
                    };
                    recs.push(MapRecord {
                        k,
                        sigma_circ: p.to_string(),
                        weight: weight_monomial(ce, ye, 1).to_string(),
                    });
                }
            });
            recs
        });
        Ok(chunks.into_iter().flatten().collect())
    }

    fn histogram(&self, k: usize) -> Histogram {
        let n = 2 * k;
        let swap = self.swap_types;
        let parts = self.exec.map(&prefixes(n), |&(a, b)| {
            let mut h = Histogram::new();
            for_each_with_prefix(n, a, b, |perm| {
                if let Some(key) = planar_weight(perm, swap) {
                    *h.entry(key).or_insert(0) += 1;
                }
            });
            h
        });
        let mut total = Histogram::new();
        for h in parts {
            for (key, v) in h {
                *total.entry(key).or_insert(0) += v;
            }
        }
        total
    }
}

/// `M_k` with the default budget and execution mode.
pub fn enumerate_moment(k: usize) -> Result<MultiPoly> {
    Enumerator::default().moment(k)
}

/// The moment table `M_0..M_{k_max}` from the oracle.
pub fn enumerate_table(k_max: usize, settings: &Enumerator) -> Result<MomentTable> {
    let mut entries = vec![MultiPoly::one()];
    for k in 1..=k_max {
        entries.push(settings.moment(k)?);
    }
    Ok(MomentTable::new(entries))
}

/// Work items: the first two images of `σ∘`.
fn prefixes(n: usize) -> Vec<(usize, usize)> {
    if n == 1 {
        return vec![(0, usize::MAX)];
    }
    let mut out = Vec::with_capacity(n * (n - 1));
    for a in 0..n {
        for b in 0..n {
            if a != b {
                out.push((a, b));
            }
        }
    }
    out
}

/// Visits every permutation of `0..n` with `perm[0] = a`, `perm[1] = b`.
fn for_each_with_prefix(n: usize, a: usize, b: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    perm.push(a);
    if b != usize::MAX {
        perm.push(b);
    }
    perm.extend((0..n).filter(|&i| i != a && i != b));
    let fixed = perm.len().min(2).min(n);
    loop {
        f(&perm);
        if !next_permutation(&mut perm[fixed..]) {
            break;
        }
    }
}

fn next_permutation(s: &mut [usize]) -> bool {
    if s.len() < 2 {
        return false;
    }
    let mut i = s.len() - 1;
    while i > 0 && s[i - 1] >= s[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = s.len() - 1;
    while s[j] <= s[i - 1] {
        j -= 1;
    }
    s.swap(i - 1, j);
    s[i..].reverse();
    true
}

/// `(c exponent, y exponent)` of a planar `σ∘`, or `None` if non-planar.
fn planar_weight(perm: &[usize], swap: bool) -> Option<(u16, u16)> {
    let n = perm.len();
    let typ = |i: usize| edge_type(i) ^ u8::from(swap);
    let mut seen = [false; 64];
    let mut vertices = 0u16;
    let mut alt = 0u16;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        vertices += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            let j = perm[i];
            if typ(i) != typ(j) {
                alt += 1;
            }
            i = j;
        }
    }
    let mut seen = [false; 64];
    let mut faces = 0usize;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = (perm[i] + 1) % n;
        }
    }
    (vertices as usize + faces == n + 1).then_some((vertices, alt))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn cycle_counts() {
        assert_eq!(Permutation::identity(4).cycle_count(), 4);
        assert_eq!(Permutation::full_cycle(4).cycle_count(), 1);
        let fig = Permutation::parse_cycles(6, "(2)(5)(6)(143)").unwrap();
        assert_eq!(fig.cycle_count(), 4);
        assert_eq!(fig.to_string(), "(143)(2)(5)(6)");
    }

    #[test]
    fn figure_map() {
        let m =
            EdgeTypedMap::new(3, Permutation::parse_cycles(6, "(2)(5)(6)(143)").unwrap()).unwrap();
        assert!(m.is_planar());
        assert_eq!(m.faces().cycle_count(), 3);
        assert_eq!(m.alt_statistic(&[0, 3, 2]).unwrap(), 2);
        assert_eq!(m.alt_statistic(&[1]).unwrap(), 0);
        assert_eq!(m.weight().unwrap(), p("c^4 y^2"));
    }

    #[test]
    fn k1_maps() {
        let id = EdgeTypedMap::new(1, Permutation::identity(2)).unwrap();
        assert!(id.is_planar());
        assert_eq!(id.weight().unwrap(), p("c^2"));
        let sw = EdgeTypedMap::new(1, Permutation::parse_cycles(2, "(12)").unwrap()).unwrap();
        assert!(sw.is_planar());
        assert_eq!(sw.alt_statistic(&[0, 1]).unwrap(), 2);
        assert_eq!(sw.weight().unwrap(), p("c y^2"));
    }

    #[test]
    fn non_planar_has_no_weight() {
        // (13)(24) on four edges: 2 vertices and 2 faces, genus one
        let m = EdgeTypedMap::new(2, Permutation::parse_cycles(4, "(13)(24)").unwrap()).unwrap();
        assert!(!m.is_planar());
        assert_eq!(m.weight(), Err(Error::NonPlanarMap));
    }

    #[test]
    fn rejects_non_cycles() {
        let m = EdgeTypedMap::new(1, Permutation::identity(2)).unwrap();
        assert!(m.alt_statistic(&[0, 1]).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let e = Enumerator {
            budget: 1000,
            ..Enumerator::default()
        };
        assert!(e.moment(3).is_ok());
        assert_eq!(
            e.moment(4),
            Err(Error::TooLarge {
                permutations: 40320,
                budget: 1000
            })
        );
    }

    #[test]
    fn fast_path_matches_structural_weight() {
        for perm in Enumerator::default().planar_maps(3).unwrap() {
            let sigma = Permutation::parse_cycles(6, &perm.sigma_circ).unwrap();
            let m = EdgeTypedMap::new(3, sigma).unwrap();
            assert_eq!(m.weight().unwrap().to_string(), perm.weight);
        }
    }

    #[test]
    fn small_moments() {
        assert_eq!(enumerate_moment(1).unwrap(), p("c^2 + c y^2"));
        assert_eq!(
            enumerate_moment(2).unwrap(),
            p("c^4 + 4c^3 y^2 + 2c^3 + 2c^2 y^4 + 4c^2 y^2 + c y^4")
        );
    }
}
