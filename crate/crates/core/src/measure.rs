//! Entanglement distance of pure hybrid multi-qudit states.
//!
//! For a state `|s⟩` and subsystem μ with generators `T_{μk}`, the local
//! covariance is `A_{μij} = ⟨T_{μi}T_{μj}⟩ − ⟨T_{μi}⟩⟨T_{μj}⟩` and
//!
//! ```text
//! E(|s⟩) = Σ_μ [tr A_μ − 2(d_μ−1)] = Σ_μ [2(d_μ−1)/d_μ − Σ_k ⟨T_{μk}⟩²].
//! ```
//!
//! Restricting local unitary variations to directions `v_μ·T_μ` gives the
//! Fubini-Study metric `g(v)`. For qubits, aligning each `v_μ` with the Bloch
//! vector minimizes `tr g(v)`, and the minimum equals `E`; the metric at that
//! point is the entanglement metric.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eig::{hermitian_eig, HermitianSpectrum};
use crate::error::{Error, Result};
use crate::generators::{purity_sum_value, GeneratorSet};
use crate::random::random_unit_vector;
use crate::scalar::{cr, Cplx, Real};
use crate::tensor::{apply_local, inner, partial_trace, DenseOperator, Dims, StateVector};

/// Input normalization required by the measure.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Bloch vectors shorter than this have no preferred direction.
pub const DEGENERATE_BLOCH_NORM: f64 = 1e-8;

/// Imaginary residue tolerated on expectation values of Hermitian products.
pub const IMAGINARY_TOL: f64 = 1e-10;

/// Covariance matrix of the generators of one subsystem.
#[derive(Clone, Debug)]
pub struct LocalCovariance<T: Real = f64> {
    pub mu: usize,
    pub a: DenseOperator<T>,
}

impl<T: Real> LocalCovariance<T> {
    pub fn trace(&self) -> T {
        self.a.trace().re
    }
}

/// One real unit vector per subsystem, `v_μ ∈ R^{d_μ²−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionSet<T: Real = f64> {
    v: Vec<Vec<T>>,
}

impl<T: Real> DirectionSet<T> {
    /// Fails unless every vector has norm 1 within `1e-9`.
    pub fn new(v: Vec<Vec<T>>) -> Result<Self> {
        for (index, x) in v.iter().enumerate() {
            let norm = x.iter().map(|&c| c * c).sum::<T>().sqrt();
            if !norm.is_finite() || (norm - T::one()).abs() > T::tol(NORMALIZATION_TOL) {
                return Err(Error::NotUnitDirection { index, norm: norm.as_f64() });
            }
        }
        Ok(Self { v })
    }

    /// Rescales each vector to unit length.
    pub fn normalized(v: Vec<Vec<T>>) -> Result<Self> {
        let v = v
            .into_iter()
            .enumerate()
            .map(|(index, x)| {
                let norm = x.iter().map(|&c| c * c).sum::<T>().sqrt();
                if norm == T::zero() || !norm.is_finite() {
                    Err(Error::NotUnitDirection { index, norm: norm.as_f64() })
                } else {
                    Ok(x.into_iter().map(|c| c / norm).collect())
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self { v })
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn get(&self, mu: usize) -> &[T] {
        &self.v[mu]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[T]> {
        self.v.iter().map(Vec::as_slice)
    }

    fn check_compatible(&self, dims: &Dims) -> Result<()> {
        if self.v.len() != dims.count() {
            return Err(Error::DimensionMismatch { expected: dims.count(), found: self.v.len() });
        }
        for (mu, x) in self.v.iter().enumerate() {
            let d = dims.dim(mu);
            if x.len() != d * d - 1 {
                return Err(Error::DimensionMismatch { expected: d * d - 1, found: x.len() });
            }
        }
        Ok(())
    }
}

/// Fubini-Study metric restricted to the local directions it was evaluated at.
/// Rows and columns are labelled by subsystem.
#[derive(Clone, Debug)]
pub struct FsMetric<T: Real = f64> {
    m: usize,
    g: Vec<T>,
    pub directions: DirectionSet<T>,
}

impl<T: Real> FsMetric<T> {
    pub fn size(&self) -> usize {
        self.m
    }

    pub fn get(&self, mu: usize, nu: usize) -> T {
        self.g[mu * self.m + nu]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.g.chunks(self.m).map(<[T]>::to_vec).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.m).map(|i| self.get(i, i)).sum()
    }

    pub fn as_operator(&self) -> DenseOperator<T> {
        DenseOperator::from_fn(self.m, |i, j| cr(self.get(i, j)))
    }

    pub fn spectrum(&self) -> Result<HermitianSpectrum<T>> {
        hermitian_eig(&self.as_operator())
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        Ok(self.spectrum()?.eigenvalues)
    }

    /// Largest entrywise difference to another metric of the same size.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: other.m });
        }
        Ok(self
            .g
            .iter()
            .zip(&other.g)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs())))
    }
}

/// Value of the measure and its per-subsystem breakdown.
#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementResult<T: Real = f64> {
    pub e: T,
    /// `2(d_μ−1)/d_μ − Σ_k ⟨T_{μk}⟩²` per subsystem.
    pub per_subsystem: Vec<T>,
    /// `Σ_μ 2(d_μ−1)/d_μ`.
    pub e_max: T,
    /// Same quantity computed as `Σ_μ [tr A_μ − 2(d_μ−1)]`.
    pub trace_form: T,
}

impl<T: Real> EntanglementResult<T> {
    /// `E / M`.
    pub fn per_subsystem_mean(&self) -> T {
        self.e / T::count(self.per_subsystem.len())
    }
}

fn generators<T: Real>(dims: &Dims, mu: usize) -> Result<std::sync::Arc<GeneratorSet<T>>> {
    dims.check_subsystem(mu)?;
    GeneratorSet::cached(dims.dim(mu))
}

/// `T_{μk}|s⟩` for every generator of subsystem `mu`.
fn generator_images<T: Real>(state: &StateVector<T>, mu: usize) -> Result<Vec<Vec<Cplx<T>>>> {
    let g = generators::<T>(state.dims(), mu)?;
    g.iter()
        .map(|t| apply_local(t, mu, state.dims(), state.amplitudes()))
        .collect()
}

/// `⟨s|T_{μk}|s⟩` for `k = 1 … d_μ²−1`.
pub fn generator_expectations<T: Real>(state: &StateVector<T>, mu: usize) -> Result<Vec<T>> {
    Ok(generator_images(state, mu)?
        .iter()
        .map(|img| inner(state.amplitudes(), img).re)
        .collect())
}

/// Qubit Bloch vector `(⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩)` of subsystem `mu`.
pub fn bloch_vector<T: Real>(state: &StateVector<T>, mu: usize) -> Result<[T; 3]> {
    state.dims().check_subsystem(mu)?;
    let d = state.dims().dim(mu);
    if d != 2 {
        return Err(Error::NotQubitSystem(d));
    }
    let e = generator_expectations(state, mu)?;
    Ok([e[0], e[1], e[2]])
}

/// `A_μ` for subsystem `mu`.
pub fn covariance_matrix<T: Real>(state: &StateVector<T>, mu: usize) -> Result<LocalCovariance<T>> {
    let images = generator_images(state, mu)?;
    let s = state.amplitudes();
    let means: Vec<Cplx<T>> = images.iter().map(|img| inner(s, img)).collect();
    let n = images.len();
    // T Hermitian: ⟨s|T_i T_j|s⟩ = ⟨T_i s|T_j s⟩
    let a = DenseOperator::from_fn(n, |i, j| inner(&images[i], &images[j]) - means[i] * means[j]);
    Ok(LocalCovariance { mu, a })
}

/// `Σ_μ 2(d_μ−1)/d_μ`.
pub fn max_entanglement<T: Real>(dims: &Dims) -> T {
    dims.local().iter().map(|&d| purity_sum_value::<T>(d)).sum()
}

/// Entanglement measure of a pure state, computed in both algebraic forms.
pub fn entanglement_pure<T: Real>(state: &StateVector<T>) -> Result<EntanglementResult<T>> {
    state.ensure_normalized(T::tol(NORMALIZATION_TOL))?;
    let dims = state.dims();
    let s = state.amplitudes();
    let mut per_subsystem = Vec::with_capacity(dims.count());
    let mut trace_form = T::zero();
    for mu in 0..dims.count() {
        let d = dims.dim(mu);
        let images = generator_images(state, mu)?;
        let mut sq = T::zero();
        let mut tr = T::zero();
        for img in &images {
            let mean = inner(s, img).re;
            sq = sq + mean * mean;
            tr = tr + inner(img, img).re - mean * mean;
        }
        per_subsystem.push((purity_sum_value::<T>(d) - sq).max(T::zero()));
        trace_form = trace_form + tr - T::c(2.0 * (d - 1) as f64);
    }
    let e: T = per_subsystem.iter().copied().sum();
    debug_assert!(
        (e - trace_form).abs() <= T::tol(1e-9) * (T::one() + e.abs()),
        "closed and trace forms disagree: {e} vs {trace_form}"
    );
    Ok(EntanglementResult { e, per_subsystem, e_max: max_entanglement(dims), trace_form })
}

/// Bloch vectors rebuilt from raw amplitude sums:
/// `w_{ν−} = Σ_{n_ν=0} c*_{k+2^ν} c_k`, `w_{ν+} = Σ_{n_ν=1} c*_{k−2^ν} c_k`,
/// `w_{ν3} = Σ (−1)^{n_ν} |c_k|²`, returned as the real vectors
/// `(w_{ν+} + w_{ν−}, −i(w_{ν+} − w_{ν−}), w_{ν3})`.
///
/// For any qubit state `E = M − Σ_ν ‖w_ν‖²`.
pub fn brs_w_vectors<T: Real>(state: &StateVector<T>) -> Result<Vec<[T; 3]>> {
    let dims = state.dims();
    if let Some(&d) = dims.local().iter().find(|&&d| d != 2) {
        return Err(Error::NotQubitSystem(d));
    }
    let c = state.amplitudes();
    let mut out = Vec::with_capacity(dims.count());
    for nu in 0..dims.count() {
        let bit = 1usize << nu;
        let mut minus = Cplx::<T>::new(T::zero(), T::zero());
        let mut plus = minus;
        let mut w3 = T::zero();
        for (k, &ck) in c.iter().enumerate() {
            if k & bit == 0 {
                minus = minus + c[k + bit].conj() * ck;
                w3 = w3 + ck.norm_sqr();
            } else {
                plus = plus + c[k - bit].conj() * ck;
                w3 = w3 - ck.norm_sqr();
            }
        }
        let w1 = (plus + minus).re;
        let w2 = (plus - minus).im;
        out.push([w1, w2, w3]);
    }
    Ok(out)
}

/// `g_{μν}(v) = ⟨(v·T)_μ (v·T)_ν⟩ − ⟨(v·T)_μ⟩⟨(v·T)_ν⟩`.
pub fn fs_metric<T: Real>(state: &StateVector<T>, dirs: &DirectionSet<T>) -> Result<FsMetric<T>> {
    let dims = state.dims();
    dirs.check_compatible(dims)?;
    let m = dims.count();
    let s = state.amplitudes();
    let images: Vec<Vec<Cplx<T>>> = (0..m)
        .map(|mu| {
            let op = generators::<T>(dims, mu)?.combine(dirs.get(mu))?;
            apply_local(&op, mu, dims, s)
        })
        .collect::<Result<_>>()?;
    let means: Vec<T> = images.iter().map(|img| inner(s, img).re).collect();
    let mut g = vec![T::zero(); m * m];
    for mu in 0..m {
        for nu in 0..m {
            let second = inner(&images[mu], &images[nu]);
            debug_assert!(second.im.abs() <= T::tol(IMAGINARY_TOL) * T::c(10.0));
            g[mu * m + nu] = second.re - means[mu] * means[nu];
        }
    }
    Ok(FsMetric { m, g, directions: dirs.clone() })
}

fn require_qubits(dims: &Dims) -> Result<()> {
    match dims.local().iter().find(|&&d| d != 2) {
        Some(&d) => Err(Error::NotQubitSystem(d)),
        None => Ok(()),
    }
}

/// Directions minimizing `tr g(v)` for a qubit state: each `v_μ` is the unit
/// Bloch vector, or `(0, 0, 1)` when the Bloch vector vanishes.
pub fn trace_min_directions<T: Real>(state: &StateVector<T>) -> Result<DirectionSet<T>> {
    require_qubits(state.dims())?;
    let v = (0..state.dims().count())
        .map(|mu| {
            let b = bloch_vector(state, mu)?;
            let norm = b.iter().map(|&x| x * x).sum::<T>().sqrt();
            Ok(if norm > T::c(DEGENERATE_BLOCH_NORM) {
                b.iter().map(|&x| x / norm).collect()
            } else {
                vec![T::zero(), T::zero(), T::one()]
            })
        })
        .collect::<Result<_>>()?;
    Ok(DirectionSet { v })
}

/// Entanglement metric `g̃` of a qubit state.
pub fn entanglement_metric<T: Real>(state: &StateVector<T>) -> Result<FsMetric<T>> {
    fs_metric(state, &trace_min_directions(state)?)
}

/// Entanglement metric evaluated at caller-chosen qubit directions, for states
/// whose Bloch vectors vanish and the minimizer is not unique.
pub fn entanglement_metric_with<T: Real>(
    state: &StateVector<T>,
    dirs: &DirectionSet<T>,
) -> Result<FsMetric<T>> {
    require_qubits(state.dims())?;
    fs_metric(state, dirs)
}

/// Eigenvalues of `g̃`, descending.
pub fn em_eigenvalues<T: Real>(state: &StateVector<T>) -> Result<Vec<T>> {
    entanglement_metric(state)?.eigenvalues()
}

/// Outcome of sampling random direction sets against the bound `tr g(v) ≥ E`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceBoundReport {
    pub e: f64,
    pub trials: usize,
    pub min_trace: f64,
    /// Trials with `tr g(v) < E − 1e-9`.
    pub violations: usize,
}

impl DistanceBoundReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Samples `trials` uniformly random direction sets and records how close
/// `tr g(v)` comes to `E`.
pub fn distance_bound_check<T: Real>(
    state: &StateVector<T>,
    trials: usize,
    seed: u64,
) -> Result<DistanceBoundReport> {
    require_qubits(state.dims())?;
    let e = entanglement_pure(state)?.e.as_f64();
    let m = state.dims().count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_trace = f64::INFINITY;
    let mut violations = 0;
    for _ in 0..trials {
        let v = (0..m).map(|_| random_unit_vector::<T, _>(3, &mut rng)).collect();
        let tr = fs_metric(state, &DirectionSet { v })?.trace().as_f64();
        min_trace = min_trace.min(tr);
        if tr < e - 1e-9 {
            violations += 1;
        }
    }
    Ok(DistanceBoundReport { e, trials, min_trace, violations })
}

/// `−Σ λ log₂ λ` over the spectrum of an operator; `0 log 0 = 0`.
pub fn entropy_of<T: Real>(rho: &DenseOperator<T>) -> Result<T> {
    let ev = hermitian_eig(rho)?.eigenvalues;
    Ok(ev
        .into_iter()
        .filter(|&x| x > T::zero())
        .map(|x| -x * x.log2())
        .sum())
}

/// Von Neumann entropy (bits) of the reduced state on `keep`.
pub fn von_neumann_entropy<T: Real>(state: &StateVector<T>, keep: &[usize]) -> Result<T> {
    entropy_of(&partial_trace(state, keep)?)
}
