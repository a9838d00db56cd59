//! Finite-size simulation: Gaussian tensors, their two marginals, and the
//! normalised moments and spectrum of the marginal product.

use matrixmultiply::CGemmOption;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::resolvent::Regime;

/// Name of the generator recorded in every output.
pub const RNG_NAME: &str = "ChaCha20 (rand_chacha), one stream per leading index";

/// Outer dimensions `N_A = N_D` and seed count used by default for the freeness probe.
pub const PROBE_OUTER_DIM: usize = 2;
pub const PROBE_SEEDS: usize = 20;

/// Relative eigen-decomposition residual above which a spectrum is rejected.
pub const EIGEN_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub n_a: usize,
    pub dim_b: usize,
    pub dim_c: usize,
    pub n_d: usize,
}

impl Dims {
    pub fn len(&self) -> usize {
        self.n_a * self.dim_b * self.dim_c * self.n_d
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `N_D / N_A`.
    pub fn ratio(&self) -> f64 {
        self.n_d as f64 / self.n_a as f64
    }

    /// Side of both marginals.
    pub fn side(&self) -> usize {
        self.n_a * self.dim_b
    }

    /// `m N_A` in the unbalanced regime, `N_A N` in the balanced one. The two
    /// coincide as formulas; the regime only records which dimensions grow.
    pub fn scale(&self, _regime: Regime) -> f64 {
        (self.n_a * self.dim_b) as f64
    }
}

/// A complex Gaussian tensor `X_{abcd}` with `E|X|² = 1`, stored with index
/// `((a·N_B + b)·N_C + c)·N_D + d`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianTensor {
    dims: Dims,
    seed: u64,
    data: Vec<Complex64>,
}

impl GaussianTensor {
    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    fn index(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        let Dims { dim_b, dim_c, n_d, .. } = self.dims;
        ((a * dim_b + b) * dim_c + c) * n_d + d
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> Complex64 {
        self.data[self.index(a, b, c, d)]
    }

    /// `Σ |X_{abcd}|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum()
    }
}

/// Samples a tensor reproducibly from `seed`; each leading index `a` draws
/// from its own stream, so the result does not depend on the execution mode.
pub fn sample_tensor(n_a: usize, dim_b: usize, dim_c: usize, n_d: usize, seed: u64) -> Result<GaussianTensor> {
    sample_tensor_with(Dims { n_a, dim_b, dim_c, n_d }, seed, Exec::default())
}

pub fn sample_tensor_with(dims: Dims, seed: u64, exec: Exec) -> Result<GaussianTensor> {
    check_dims(dims)?;
    let mut data = vec![Complex64::new(0.0, 0.0); dims.len()];
    exec.for_each_chunk_mut(&mut data, dims.len() / dims.n_a, |a, chunk| fill_gaussian(seed, a as u64, chunk));
    Ok(GaussianTensor { dims, seed, data })
}

fn fill_gaussian(seed: u64, stream: u64, out: &mut [Complex64]) {
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    for x in out {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *x = Complex64::new(re * amp, im * amp);
    }
}

fn check_dims(dims: Dims) -> Result<()> {
    if dims.dim_b != dims.dim_c {
        return Err(Error::DimensionMismatch {
            dim_b: dims.dim_b,
            dim_c: dims.dim_c,
        });
    }
    if dims.is_empty() {
        return Err(Error::InvalidArgument("tensor dimensions must be positive".into()));
    }
    Ok(())
}

/// Dense complex product through the blocked `zgemm` kernel.
fn mul(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    assert_eq!(a.ncols(), b.nrows());
    let (m, k, n) = (a.nrows(), a.ncols(), b.ncols());
    let mut out = DMatrix::<Complex64>::zeros(m, n);
    if m == 0 || n == 0 || k == 0 {
        return out;
    }
    // SAFETY: `Complex64` is `repr(C)` with the same layout as `[f64; 2]`, all
    // three buffers are column-major with the extents passed, and `out` does
    // not alias the inputs.
    unsafe {
        matrixmultiply::zgemm(
            CGemmOption::Standard,
            CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.as_ptr().cast(),
            1,
            m as isize,
            b.as_ptr().cast(),
            1,
            k as isize,
            [0.0, 0.0],
            out.as_mut_ptr().cast(),
            1,
            m as isize,
        );
    }
    out
}

/// `V_AB = Y Y†` and `V_AC = Z Z†`, where `Y` groups the indices as
/// `(a,b) × (c,d)` and `Z` as `(a,c) × (b,d)`.
#[derive(Clone, Debug)]
pub struct MarginalPair {
    pub v_ab: DMatrix<Complex64>,
    pub v_ac: DMatrix<Complex64>,
}

pub fn marginals(x: &GaussianTensor) -> MarginalPair {
    let Dims { n_a, dim_b, dim_c, n_d } = x.dims;
    let y = DMatrix::from_row_slice(n_a * dim_b, dim_c * n_d, &x.data);
    let z = DMatrix::from_fn(n_a * dim_c, dim_b * n_d, |row, col| {
        let (a, c) = (row / dim_c, row % dim_c);
        let (b, d) = (col / n_d, col % n_d);
        x.get(a, b, c, d)
    });
    MarginalPair {
        v_ab: mul(&y, &y.adjoint()),
        v_ac: mul(&z, &z.adjoint()),
    }
}

impl MarginalPair {
    /// `max(‖V - V†‖) / max(‖V‖)` over both marginals, in Frobenius norm.
    pub fn hermiticity_residual(&self) -> f64 {
        [&self.v_ab, &self.v_ac]
            .iter()
            .map(|v| (*v - v.adjoint()).norm() / v.norm().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }

    /// `V_AB · V_AC`.
    pub fn product(&self) -> DMatrix<Complex64> {
        mul(&self.v_ab, &self.v_ac)
    }
}

/// `Tr((V_AB V_AC)^n) / scale^{2n+1}` for `n = 1..=n_max`, by repeated multiplication.
pub fn empirical_moments(pair: &MarginalPair, n_max: usize, scale: f64) -> Vec<f64> {
    let m = pair.product();
    let mut power = m.clone();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if n > 1 {
            power = mul(&power, &m);
        }
        out.push(power.trace().re / scale.powi(2 * n as i32 + 1));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralSample {
    /// Sorted eigenvalues of `V_AB^{1/2} V_AC V_AB^{1/2} / scale²`.
    pub eigenvalues: Vec<f64>,
    pub seed: u64,
    pub dims: Dims,
}

impl SpectralSample {
    /// Mean of `λ^n` over the sample.
    pub fn moment(&self, n: i32) -> f64 {
        self.eigenvalues.iter().map(|l| l.powi(n)).sum::<f64>() / self.eigenvalues.len() as f64
    }
}

fn hermitian_eigen(m: DMatrix<Complex64>) -> Result<SymmetricEigen<Complex64, nalgebra::Dyn>> {
    let norm = m.norm().max(f64::MIN_POSITIVE);
    let eig = SymmetricEigen::new(m.clone());
    let q = &eig.eigenvectors;
    let mut scaled = q.clone();
    for (mut col, &l) in scaled.column_iter_mut().zip(eig.eigenvalues.iter()) {
        col *= Complex64::new(l, 0.0);
    }
    let residual = (mul(&m, q) - scaled).norm() / norm;
    if residual.is_nan() || residual > EIGEN_TOL {
        return Err(Error::EigensolverFailure { residual });
    }
    Ok(eig)
}

/// Spectrum of `P = V_AB^{1/2} V_AC V_AB^{1/2}`, scaled by `scale^{-2}`.
/// Tiny negative eigenvalues of `V_AB` are clamped to zero before the root.
pub fn empirical_spectrum(pair: &MarginalPair, scale: f64, seed: u64, dims: Dims) -> Result<SpectralSample> {
    let eig = hermitian_eigen(pair.v_ab.clone())?;
    // With V_AB = Q D Q†, P is unitarily similar to D^{1/2} Q† V_AC Q D^{1/2}.
    let roots: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
    let q = &eig.eigenvectors;
    let mut p = mul(&mul(&q.adjoint(), &pair.v_ac), q);
    for ((i, j), v) in p.iter_mut().enumerate().map(|(k, v)| ((k % roots.len(), k / roots.len()), v)) {
        *v *= roots[i] * roots[j];
    }
    let p = (&p + p.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = hermitian_eigen(p)?;
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().map(|l| l / (scale * scale)).collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(SpectralSample { eigenvalues, seed, dims })
}

/// Unbiased estimate of `Tr(V_AB V_AC) / scale³` from `probes` complex
/// Gaussian vectors, without forming either marginal: with `u = Z v`,
/// `‖Y† u‖²` has mean `Tr(Y Y† Z Z†)`. Returns the mean and its standard error.
pub fn first_moment_estimate(x: &GaussianTensor, probes: usize, seed: u64, scale: f64, exec: Exec) -> (f64, f64) {
    let block = x.dims.len() / x.dims.n_a;
    hutchinson(x.dims, probes, seed, scale, exec, |a, buf| {
        buf.clear();
        buf.extend_from_slice(&x.data[a * block..(a + 1) * block]);
    })
}

/// [`first_moment_estimate`] for the tensor [`sample_tensor`] would draw from
/// `tensor_seed`, regenerating one leading-index block at a time so the
/// tensor is never held in memory.
pub fn streamed_first_moment_estimate(
    dims: Dims,
    tensor_seed: u64,
    probes: usize,
    probe_seed: u64,
    regime: Regime,
    exec: Exec,
) -> Result<(f64, f64)> {
    check_dims(dims)?;
    let block = dims.len() / dims.n_a;
    Ok(hutchinson(dims, probes, probe_seed, dims.scale(regime), exec, |a, buf| {
        buf.resize(block, Complex64::new(0.0, 0.0));
        fill_gaussian(tensor_seed, a as u64, buf);
    }))
}

fn hutchinson<F>(dims: Dims, probes: usize, seed: u64, scale: f64, exec: Exec, block: F) -> (f64, f64)
where
    F: Fn(usize, &mut Vec<Complex64>) + Sync + Send,
{
    let Dims { n_a, dim_b, dim_c, n_d } = dims;
    let zero = Complex64::new(0.0, 0.0);
    let v: Vec<Vec<Complex64>> = (0..probes)
        .map(|p| {
            let mut out = vec![zero; dim_b * n_d];
            fill_gaussian(seed, p as u64, &mut out);
            out
        })
        .collect();
    // u_p[(a,c)] = Σ_{b,d} X_{abcd} v_p[(b,d)], one row block per a
    let u: Vec<Vec<Vec<Complex64>>> = exec.map_range(n_a, |a| {
        let mut buf = Vec::new();
        block(a, &mut buf);
        v.iter()
            .map(|vp| {
                let mut row = vec![zero; dim_c];
                for b in 0..dim_b {
                    let vb = &vp[b * n_d..(b + 1) * n_d];
                    for (c, r) in row.iter_mut().enumerate() {
                        let xs = &buf[(b * dim_c + c) * n_d..(b * dim_c + c + 1) * n_d];
                        *r += xs.iter().zip(vb).map(|(x, v)| x * v).sum::<Complex64>();
                    }
                }
                row
            })
            .collect()
    });
    // w_p[(c,d)] = Σ_{a,b} conj(X_{abcd}) u_p[(a,b)], reading b as an index of C
    let partial: Vec<Vec<Vec<Complex64>>> = exec.map_range(n_a, |a| {
        let mut buf = Vec::new();
        block(a, &mut buf);
        (0..probes)
            .map(|p| {
                let mut w = vec![zero; dim_c * n_d];
                for b in 0..dim_b {
                    let ub = u[a][p][b];
                    for c in 0..dim_c {
                        let xs = &buf[(b * dim_c + c) * n_d..(b * dim_c + c + 1) * n_d];
                        for (t, x) in w[c * n_d..(c + 1) * n_d].iter_mut().zip(xs) {
                            *t += x.conj() * ub;
                        }
                    }
                }
                w
            })
            .collect()
    });
    let norm = scale.powi(3);
    let samples: Vec<f64> = (0..probes)
        .map(|p| {
            let mut w = vec![zero; dim_c * n_d];
            for part in &partial {
                for (t, x) in w.iter_mut().zip(&part[p]) {
                    *t += x;
                }
            }
            w.iter().map(|z| z.norm_sqr()).sum::<f64>() / norm
        })
        .collect();
    mean_and_stderr(&samples)
}

pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Counts of `values` in `[edges[i], edges[i+1])`; the last bin is closed.
    pub fn new(values: &[f64], edges: Vec<f64>) -> Self {
        let mut counts = vec![0u64; edges.len().saturating_sub(1)];
        let last = edges.len().saturating_sub(1);
        for &v in values {
            let i = edges.partition_point(|&e| e <= v);
            if i >= 1 && i <= last {
                counts[i - 1] += 1;
            } else if last > 0 && v == edges[last] {
                counts[last - 1] += 1;
            }
        }
        Self { edges, counts }
    }

    pub fn uniform(values: &[f64], lo: f64, hi: f64, bins: usize) -> Self {
        let edges = (0..=bins).map(|k| lo + (hi - lo) * k as f64 / bins as f64).collect();
        Self::new(values, edges)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `Σ |count_i / total - mass_i|` against reference bin masses.
    pub fn l1_distance(&self, masses: &[f64], total: usize) -> f64 {
        self.counts
            .iter()
            .zip(masses)
            .map(|(&k, m)| (k as f64 / total as f64 - m).abs())
            .sum()
    }
}

/// Per-seed output, serialised as the simulation record.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub seed: u64,
    pub dims: Dims,
    pub regime: Regime,
    pub rng: &'static str,
    pub normalized_moments: Vec<f64>,
    pub eigenvalues_histogram: Option<Histogram>,
    #[serde(skip)]
    pub eigenvalues: Vec<f64>,
}

/// One full sample: tensor, marginals, moments and (optionally) spectrum.
pub fn simulate(dims: Dims, regime: Regime, seed: u64, n_max: usize, spectrum: bool) -> Result<RunRecord> {
    let x = sample_tensor_with(dims, seed, Exec::Sequential)?;
    let pair = marginals(&x);
    let scale = dims.scale(regime);
    let normalized_moments = empirical_moments(&pair, n_max, scale);
    let eigenvalues = if spectrum {
        empirical_spectrum(&pair, scale, seed, dims)?.eigenvalues
    } else {
        Vec::new()
    };
    Ok(RunRecord {
        seed,
        dims,
        regime,
        rng: RNG_NAME,
        normalized_moments,
        eigenvalues_histogram: None,
        eigenvalues,
    })
}

/// Runs independent seeds, in parallel when `exec` allows.
pub fn simulate_seeds(
    dims: Dims,
    regime: Regime,
    seeds: &[u64],
    n_max: usize,
    spectrum: bool,
    exec: Exec,
) -> Result<Vec<RunRecord>> {
    exec.try_map_range(seeds.len(), |i| simulate(dims, regime, seeds[i], n_max, spectrum))
}

/// Alternating centred mixed moment and single-matrix moments at one size.
#[derive(Clone, Debug, Serialize)]
pub struct FreenessReport {
    pub n: usize,
    pub dims: Dims,
    pub seeds: Vec<u64>,
    /// `φ[(a−φa)(b−φb)(a−φa)(b−φb)]` per seed.
    pub alternating: Vec<f64>,
    pub alternating_mean: f64,
    pub alternating_stderr: f64,
    /// Seed-averaged `φ(a^k)` for `k = 1, 2, 3`.
    pub single_moments: Vec<f64>,
    /// Seed-averaged `φ(b^k)` for `k = 1, 2, 3`.
    pub single_moments_b: Vec<f64>,
}

impl FreenessReport {
    /// Root mean square of the per-seed alternating moments.
    pub fn rms(&self) -> f64 {
        (self.alternating.iter().map(|v| v * v).sum::<f64>() / self.alternating.len() as f64).sqrt()
    }
}

/// Estimates the mixed moments that freeness of `a = V_AB/(N_A N)` and
/// `b = V_AC/(N_A N)` forces to vanish, with `φ = Tr/(N_A N)`.
type SeedStats = (f64, [f64; 3], [f64; 3]);

pub fn mixed_moment_freeness_probe(n: usize, n_a: usize, n_d: usize, seeds: &[u64], exec: Exec) -> Result<FreenessReport> {
    let dims = Dims { n_a, dim_b: n, dim_c: n, n_d };
    let side = dims.side() as f64;
    let per_seed = exec.try_map_range(seeds.len(), |i| -> Result<(f64, [f64; 3], [f64; 3])> {
        let x = sample_tensor_with(dims, seeds[i], Exec::Sequential)?;
        let pair = marginals(&x);
        let s = Complex64::new(1.0 / side, 0.0);
        let a = &pair.v_ab * s;
        let b = &pair.v_ac * s;
        let phi = |m: &DMatrix<Complex64>| m.trace().re / side;
        let id = DMatrix::<Complex64>::identity(a.nrows(), a.ncols());
        let a0 = &a - &id * Complex64::new(phi(&a), 0.0);
        let b0 = &b - &id * Complex64::new(phi(&b), 0.0);
        let ab = mul(&a0, &b0);
        let alt = mul(&ab, &ab).trace().re / side;
        let a2 = mul(&a, &a);
        let b2 = mul(&b, &b);
        let ma = [phi(&a), phi(&a2), mul(&a2, &a).trace().re / side];
        let mb = [phi(&b), phi(&b2), mul(&b2, &b).trace().re / side];
        Ok((alt, ma, mb))
    })?;
    let alternating: Vec<f64> = per_seed.iter().map(|r| r.0).collect();
    let (alternating_mean, alternating_stderr) = mean_and_stderr(&alternating);
    let avg = |f: &dyn Fn(&SeedStats) -> [f64; 3]| -> Vec<f64> {
        (0..3)
            .map(|k| per_seed.iter().map(|r| f(r)[k]).sum::<f64>() / per_seed.len() as f64)
            .collect()
    };
    Ok(FreenessReport {
        n,
        dims,
        seeds: seeds.to_vec(),
        alternating,
        alternating_mean,
        alternating_stderr,
        single_moments: avg(&|r| r.1),
        single_moments_b: avg(&|r| r.2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinism_and_modes() {
        let dims = Dims { n_a: 3, dim_b: 2, dim_c: 2, n_d: 4 };
        let a = sample_tensor_with(dims, 7, Exec::Sequential).unwrap();
        let b = sample_tensor_with(dims, 7, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        let c = sample_tensor_with(dims, 8, Exec::Sequential).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(matches!(
            sample_tensor(2, 3, 4, 2, 0),
            Err(Error::DimensionMismatch { dim_b: 3, dim_c: 4 })
        ));
        assert!(sample_tensor(0, 1, 1, 1, 0).is_err());
    }

    #[test]
    fn scalar_tensor_marginals() {
        let x = sample_tensor(1, 1, 1, 1, 3).unwrap();
        let p = marginals(&x);
        let v = x.data()[0].norm_sqr();
        assert!((p.v_ab[(0, 0)].re - v).abs() < 1e-15);
        assert!((p.v_ac[(0, 0)].re - v).abs() < 1e-15);
    }

    #[test]
    fn traces_equal_squared_norm() {
        let x = sample_tensor(3, 4, 4, 5, 11).unwrap();
        let p = marginals(&x);
        let n = x.norm_sqr();
        assert!((p.v_ab.trace().re - n).abs() < 1e-10 * n);
        assert!((p.v_ac.trace().re - n).abs() < 1e-10 * n);
        assert!(p.hermiticity_residual() < 1e-12);
    }

    #[test]
    fn trace_powers_match_eigenvalues() {
        let dims = Dims { n_a: 6, dim_b: 3, dim_c: 3, n_d: 5 };
        let x = sample_tensor_with(dims, 5, Exec::Sequential).unwrap();
        let p = marginals(&x);
        let scale = dims.scale(Regime::Unbalanced);
        let m = empirical_moments(&p, 3, scale);
        let s = empirical_spectrum(&p, scale, 5, dims).unwrap();
        assert!(s.eigenvalues[0] > -1e-8);
        for (n, mn) in m.iter().enumerate() {
            let from_eigs = s.moment(n as i32 + 1);
            assert!(((mn - from_eigs) / mn).abs() < 1e-8, "{mn} {from_eigs}");
        }
    }

    #[test]
    fn probe_estimate_is_close_to_the_trace() {
        let dims = Dims { n_a: 4, dim_b: 10, dim_c: 10, n_d: 4 };
        let x = sample_tensor_with(dims, 2, Exec::Sequential).unwrap();
        let scale = dims.scale(Regime::Balanced);
        let exact = empirical_moments(&marginals(&x), 1, scale)[0];
        let (est, se) = first_moment_estimate(&x, 64, 9, scale, Exec::Sequential);
        assert!((est - exact).abs() < 4.0 * se, "{est} ± {se} vs {exact}");
        let streamed = streamed_first_moment_estimate(dims, 2, 64, 9, Regime::Balanced, Exec::Parallel).unwrap();
        assert_eq!(streamed, (est, se));
    }

    #[test]
    fn blocked_product_matches_naive() {
        let a = DMatrix::from_fn(5, 3, |i, j| Complex64::new(i as f64 - 1.5, j as f64 * 0.25));
        let b = DMatrix::from_fn(3, 4, |i, j| Complex64::new((i * j) as f64, 1.0 - i as f64));
        assert!((mul(&a, &b) - &a * &b).norm() < 1e-12);
    }

    #[test]
    fn histogram_counts() {
        let h = Histogram::uniform(&[0.0, 0.5, 0.99, 1.0, 2.0, -1.0], 0.0, 2.0, 2);
        assert_eq!(h.counts, vec![3, 2]);
        let l1 = h.l1_distance(&[0.5, 0.5], 6);
        assert!((l1 - (0.0 + (0.5 - 2.0 / 6.0))).abs() < 1e-12);
    }
}
