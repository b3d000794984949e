//! Convex-roof extension of the measure to mixed states.
//!
//! Every length-`L` pure-state ensemble of `ρ = Σ_i λ_i |e_i⟩⟨e_i|` (rank `r`)
//! is `√p_j |ψ_j⟩ = Σ_i V_{ji} √λ_i |e_i⟩` for an `L × r` isometry `V`. The
//! roof is minimized over `V` by Riemannian gradient descent on the complex
//! Stiefel manifold from several starting points. The result is an upper
//! bound on the true roof value; nothing here certifies global optimality.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::eig::hermitian_eig;
use crate::error::{Error, Result};
use crate::generators::GeneratorSet;
use crate::measure::{entanglement_pure, max_entanglement};
use crate::random::{orthonormalize_columns, random_isometry};
use crate::scalar::{cr, cz, Cplx, Real};
use crate::tensor::{apply_local, embed_local, inner, DenseOperator, Dims, StateVector};

/// Eigenvalues of `ρ` at or below this are treated as exact zeros.
pub const RANK_TOL: f64 = 1e-12;

/// Ensemble members lighter than this are dropped.
pub const MIN_WEIGHT: f64 = 1e-14;

/// Density operator on a hybrid multi-qudit space.
#[derive(Clone, Debug)]
pub struct DensityMatrix<T: Real = f64> {
    dims: Dims,
    rho: DenseOperator<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity (`1e-10`), positivity (`λ_min ≥ −1e-9`) and unit
    /// trace (`1e-10`).
    pub fn new(dims: Dims, rho: DenseOperator<T>) -> Result<Self> {
        if rho.dim() != dims.total() {
            return Err(Error::DimensionMismatch { expected: dims.total(), found: rho.dim() });
        }
        let herm = rho.hermitian_deviation();
        if herm > T::tol(1e-10) {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = rho.trace();
        if (tr.re - T::one()).abs() > T::tol(1e-10) || tr.im.abs() > T::tol(1e-10) {
            return Err(Error::InvalidDensity(format!("trace {} + {}i is not 1", tr.re, tr.im)));
        }
        let min = hermitian_eig(&rho)?
            .eigenvalues
            .last()
            .copied()
            .unwrap_or_else(T::zero);
        if min < -T::tol(1e-9) {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { dims, rho })
    }

    pub fn from_pure(state: &StateVector<T>) -> Self {
        Self { dims: state.dims().clone(), rho: state.density() }
    }

    /// `Σ_j w_j |ψ_j⟩⟨ψ_j|`; weights must be non-negative and sum to 1.
    pub fn mixture(weights: &[T], states: &[StateVector<T>]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::InvalidDensity("weights and states differ in length".into()));
        }
        let dims = states[0].dims().clone();
        let mut rho = DenseOperator::zeros(dims.total());
        for (&w, s) in weights.iter().zip(states) {
            if s.dims() != &dims {
                return Err(Error::InvalidDims(format!("{} vs {}", s.dims(), dims)));
            }
            if w < T::zero() {
                return Err(Error::InvalidDensity(format!("negative weight {w}")));
            }
            rho = rho.add(&s.density().scale(cr(w)))?;
        }
        Self::new(dims, rho)
    }

    /// `α ρ₁ + (1 − α) ρ₂`.
    pub fn convex_combination(alpha: T, a: &Self, b: &Self) -> Result<Self> {
        if a.dims != b.dims {
            return Err(Error::InvalidDims(format!("{} vs {}", a.dims, b.dims)));
        }
        let rho = a.rho.scale(cr(alpha)).add(&b.rho.scale(cr(T::one() - alpha)))?;
        Self::new(a.dims.clone(), rho)
    }

    /// `(⊗_μ U_μ) ρ (⊗_μ U_μ)†`.
    pub fn conjugate_local(&self, unitaries: &[DenseOperator<T>]) -> Result<Self> {
        if unitaries.len() != self.dims.count() {
            return Err(Error::DimensionMismatch { expected: self.dims.count(), found: unitaries.len() });
        }
        let mut u = DenseOperator::identity(self.dims.total());
        for (mu, op) in unitaries.iter().enumerate() {
            u = u.matmul(&embed_local(op, mu, &self.dims)?)?;
        }
        let rho = u.matmul(&self.rho)?.matmul(&u.adjoint())?;
        Self::new(self.dims.clone(), rho)
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn matrix(&self) -> &DenseOperator<T> {
        &self.rho
    }

    /// Eigenvalues above [`RANK_TOL`] and their eigenvectors scaled by `√λ`.
    fn weighted_eigenvectors(&self) -> Result<Vec<Vec<Cplx<T>>>> {
        let sp = hermitian_eig(&self.rho)?;
        Ok(sp
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > T::c(RANK_TOL))
            .map(|(i, &l)| {
                let s = l.sqrt();
                sp.eigenvector(i).into_iter().map(|z| z * s).collect()
            })
            .collect())
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.weighted_eigenvectors()?.len())
    }
}

/// Pure-state ensemble `{p_j, |ψ_j⟩}`.
#[derive(Clone, Debug)]
pub struct Decomposition<T: Real = f64> {
    pub probs: Vec<T>,
    pub states: Vec<StateVector<T>>,
}

impl<T: Real> Decomposition<T> {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `Σ_j p_j |ψ_j⟩⟨ψ_j|`.
    pub fn reconstruct(&self) -> Result<DenseOperator<T>> {
        let dim = self.states.first().map_or(0, |s| s.dims().total());
        let mut acc = DenseOperator::zeros(dim);
        for (&p, s) in self.probs.iter().zip(&self.states) {
            acc = acc.add(&s.density().scale(cr(p)))?;
        }
        Ok(acc)
    }

    /// `‖Σ_j p_j |ψ_j⟩⟨ψ_j| − ρ‖_F`.
    pub fn reconstruction_error(&self, rho: &DensityMatrix<T>) -> Result<T> {
        self.reconstruct()?.distance(rho.matrix())
    }
}

/// Row-major `rows × cols` complex matrix with orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry<T: Real = f64> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Cplx<T>>,
}

impl<T: Real> Isometry<T> {
    /// Fails unless `V†V = I` within `1e-10` (Frobenius).
    pub fn new(rows: usize, cols: usize, data: Vec<Cplx<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        let v = Self { rows, cols, data };
        let dev = v.gram_deviation();
        if dev > T::tol(1e-10) {
            return Err(Error::NotIsometry(dev.as_f64()));
        }
        Ok(v)
    }

    /// `[I_cols; 0]`.
    pub fn embedding(rows: usize, cols: usize) -> Result<Self> {
        let mut data = vec![cz(); rows * cols];
        for i in 0..cols.min(rows) {
            data[i * cols + i] = cr(T::one());
        }
        Self::new(rows, cols, data)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Cplx<T> {
        self.data[i * self.cols + j]
    }

    /// `‖V†V − I‖_F`.
    pub fn gram_deviation(&self) -> T {
        let mut acc = T::zero();
        for a in 0..self.cols {
            for b in 0..self.cols {
                let mut dot = cz::<T>();
                for i in 0..self.rows {
                    dot = dot + self.get(i, a).conj() * self.get(i, b);
                }
                let target = if a == b { T::one() } else { T::zero() };
                acc = acc + (dot - cr(target)).norm_sqr();
            }
        }
        acc.sqrt()
    }
}

/// Roof search settings.
#[derive(Clone, Debug, PartialEq)]
pub struct RoofConfig {
    /// Ensemble length `L`; `None` picks `max(r², 4)`.
    pub ensemble_len: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    pub step_tol: f64,
    pub seed: u64,
}

impl Default for RoofConfig {
    fn default() -> Self {
        Self { ensemble_len: None, restarts: 32, max_iters: 500, step_tol: 1e-9, seed: 0 }
    }
}

/// Outcome of [`minimize_roof`].
#[derive(Clone, Debug)]
pub struct RoofResult<T: Real = f64> {
    /// Smallest ensemble average found: an upper bound on the roof.
    pub value: T,
    pub decomposition: Decomposition<T>,
    /// Final objective of each restart, in restart order.
    pub restart_values: Vec<T>,
    /// Running minimum over `restart_values`.
    pub best_so_far: Vec<T>,
    pub best_restart: usize,
    /// Descent iterations spent per restart.
    pub iterations: Vec<usize>,
    pub rank: usize,
    pub ensemble_len: usize,
}

impl<T: Real> RoofResult<T> {
    pub const fn is_upper_bound(&self) -> bool {
        true
    }
}

/// `√p_j |ψ_j⟩ = Σ_i V_{ji} √λ_i |e_i⟩`, dropping members with `p_j < 1e-14`.
pub fn decomposition_from_isometry<T: Real>(
    rho: &DensityMatrix<T>,
    v: &Isometry<T>,
) -> Result<Decomposition<T>> {
    let basis = rho.weighted_eigenvectors()?;
    if v.cols != basis.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), found: v.cols });
    }
    let dev = v.gram_deviation();
    if dev > T::tol(1e-10) {
        return Err(Error::NotIsometry(dev.as_f64()));
    }
    let unnormalized = ensemble_vectors(&basis, v);
    let mut probs = Vec::new();
    let mut states = Vec::new();
    for psi in unnormalized {
        let p = psi.iter().map(|z| z.norm_sqr()).sum::<T>();
        if p < T::c(MIN_WEIGHT) {
            continue;
        }
        probs.push(p);
        states.push(StateVector::new(rho.dims().clone(), psi)?);
    }
    Ok(Decomposition { probs, states })
}

/// `Σ_j p_j E(|ψ_j⟩)`.
pub fn roof_objective<T: Real>(dec: &Decomposition<T>) -> Result<T> {
    let mut acc = T::zero();
    for (&p, s) in dec.probs.iter().zip(&dec.states) {
        acc = acc + p * entanglement_pure(s)?.e;
    }
    Ok(acc)
}

fn ensemble_vectors<T: Real>(basis: &[Vec<Cplx<T>>], v: &Isometry<T>) -> Vec<Vec<Cplx<T>>> {
    let dim = basis.first().map_or(0, Vec::len);
    (0..v.rows)
        .map(|j| {
            let mut psi = vec![cz(); dim];
            for (i, u) in basis.iter().enumerate() {
                let c = v.get(j, i);
                for (slot, &x) in psi.iter_mut().zip(u) {
                    *slot = *slot + c * x;
                }
            }
            psi
        })
        .collect()
}

/// Objective and Euclidean gradient of `f(V) = E_max − Σ_j Q_j / p_j`, where
/// `Q_j = Σ_{μk} ⟨ψ̃_j|T_{μk}|ψ̃_j⟩²` and `p_j = ⟨ψ̃_j|ψ̃_j⟩`.
struct Objective<'a, T: Real> {
    dims: &'a Dims,
    basis: &'a [Vec<Cplx<T>>],
    gens: Vec<std::sync::Arc<GeneratorSet<T>>>,
    e_max: T,
}

impl<'a, T: Real> Objective<'a, T> {
    fn new(dims: &'a Dims, basis: &'a [Vec<Cplx<T>>]) -> Result<Self> {
        let gens = dims
            .local()
            .iter()
            .map(|&d| GeneratorSet::cached(d))
            .collect::<Result<_>>()?;
        Ok(Self { dims, basis, gens, e_max: max_entanglement(dims) })
    }

    fn value(&self, v: &Isometry<T>) -> Result<T> {
        Ok(self.evaluate(v, false)?.0)
    }

    fn value_and_gradient(&self, v: &Isometry<T>) -> Result<(T, Vec<Cplx<T>>)> {
        self.evaluate(v, true)
    }

    fn evaluate(&self, v: &Isometry<T>, with_grad: bool) -> Result<(T, Vec<Cplx<T>>)> {
        let psis = ensemble_vectors(self.basis, v);
        let mut f = self.e_max;
        let mut grad = if with_grad { vec![cz(); v.rows * v.cols] } else { Vec::new() };
        let two = T::c(2.0);
        for (j, psi) in psis.iter().enumerate() {
            let p = psi.iter().map(|z| z.norm_sqr()).sum::<T>();
            if p <= T::min_positive_value().sqrt() {
                continue;
            }
            let mut q = T::zero();
            let mut h = if with_grad { vec![cz::<T>(); psi.len()] } else { Vec::new() };
            for (mu, g) in self.gens.iter().enumerate() {
                for t in g.iter() {
                    let img = apply_local(t, mu, self.dims, psi)?;
                    let x = inner(psi, &img).re;
                    q = q + x * x;
                    if with_grad {
                        let w = two * x / p;
                        for (slot, &y) in h.iter_mut().zip(&img) {
                            *slot = *slot + y * w;
                        }
                    }
                }
            }
            f = f - q / p;
            if with_grad {
                let w = q / (p * p);
                for (slot, &y) in h.iter_mut().zip(psi) {
                    *slot = *slot - y * w;
                }
                // ∂f/∂V̄_{ji} = −⟨u_i|h_j⟩; Euclidean gradient is twice that
                for (i, u) in self.basis.iter().enumerate() {
                    grad[j * v.cols + i] = -inner(u, &h) * two;
                }
            }
        }
        Ok((f, grad))
    }
}

/// Riemannian gradient `G − V sym(V†G)` on the Stiefel manifold.
fn project_tangent<T: Real>(v: &Isometry<T>, g: &[Cplx<T>]) -> Vec<Cplx<T>> {
    let (rows, cols) = (v.rows, v.cols);
    let mut vg = vec![cz::<T>(); cols * cols];
    for a in 0..cols {
        for b in 0..cols {
            let mut acc = cz();
            for i in 0..rows {
                acc = acc + v.get(i, a).conj() * g[i * cols + b];
            }
            vg[a * cols + b] = acc;
        }
    }
    let half = T::c(0.5);
    let sym: Vec<Cplx<T>> = (0..cols * cols)
        .map(|idx| {
            let (a, b) = (idx / cols, idx % cols);
            (vg[a * cols + b] + vg[b * cols + a].conj()) * half
        })
        .collect();
    let mut out = g.to_vec();
    for i in 0..rows {
        for b in 0..cols {
            let mut acc = cz();
            for a in 0..cols {
                acc = acc + v.get(i, a) * sym[a * cols + b];
            }
            out[i * cols + b] = out[i * cols + b] - acc;
        }
    }
    out
}

fn retract<T: Real>(v: &Isometry<T>, dir: &[Cplx<T>], step: T) -> Option<Isometry<T>> {
    let mut data: Vec<Cplx<T>> = v.data.iter().zip(dir).map(|(&a, &d)| a - d * step).collect();
    orthonormalize_columns(&mut data, v.rows, v.cols)
        .then(|| Isometry { rows: v.rows, cols: v.cols, data })
}

fn real_dot<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>]) -> T {
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

struct DescentOutcome<T: Real> {
    value: T,
    v: Isometry<T>,
    iterations: usize,
}

fn descend<T: Real>(obj: &Objective<'_, T>, start: Isometry<T>, cfg: &RoofConfig) -> Result<DescentOutcome<T>> {
    let step_tol = T::tol(cfg.step_tol);
    let armijo = T::c(1e-4);
    let mut v = start;
    let (mut f, g) = obj.value_and_gradient(&v)?;
    let mut grad = project_tangent(&v, &g);
    let mut step = T::one();
    let mut prev: Option<(Isometry<T>, Vec<Cplx<T>>)> = None;
    let mut iterations = 0;
    let mut small_steps = 0;

    while iterations < cfg.max_iters {
        let gnorm2 = real_dot(&grad, &grad);
        if gnorm2.sqrt() <= step_tol * T::c(1e-3) {
            break;
        }
        // Barzilai-Borwein guess from the previous step
        if let Some((pv, pg)) = &prev {
            let s: Vec<Cplx<T>> = v.data.iter().zip(&pv.data).map(|(a, b)| a - b).collect();
            let y: Vec<Cplx<T>> = grad.iter().zip(pg).map(|(a, b)| a - b).collect();
            let sy = real_dot(&s, &y);
            if sy > T::zero() {
                step = (real_dot(&s, &s) / sy).min(T::c(1e3)).max(T::c(1e-6));
            }
        }
        let mut accepted = None;
        let mut trial = step;
        for _ in 0..40 {
            if let Some(cand) = retract(&v, &grad, trial) {
                let fc = obj.value(&cand)?;
                if fc <= f - armijo * trial * gnorm2 {
                    accepted = Some((cand, fc));
                    break;
                }
            }
            trial = trial * T::c(0.5);
        }
        let Some((next, f_next)) = accepted else { break };
        iterations += 1;
        let decrease = f - f_next;
        let (_, g_next) = obj.value_and_gradient(&next)?;
        let grad_next = project_tangent(&next, &g_next);
        prev = Some((std::mem::replace(&mut v, next), std::mem::replace(&mut grad, grad_next)));
        f = f_next;
        step = trial;
        if decrease <= step_tol * T::c(1e-3) {
            small_steps += 1;
            if small_steps >= 3 {
                break;
            }
        } else {
            small_steps = 0;
        }
    }
    Ok(DescentOutcome { value: f, v, iterations })
}

/// Searches for the decomposition with the smallest average entanglement.
///
/// Restart 0 starts from the spectral ensemble `[I_r; 0]`; restart `i ≥ 1`
/// starts from a random isometry drawn from ChaCha stream `i` of `cfg.seed`,
/// so every restart is independent of scheduling. Ties go to the lowest
/// restart index.
pub fn minimize_roof<T: Real>(rho: &DensityMatrix<T>, cfg: &RoofConfig) -> Result<RoofResult<T>> {
    if cfg.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    let basis = rho.weighted_eigenvectors()?;
    let rank = basis.len();
    if rank == 0 {
        return Err(Error::InvalidDensity("zero matrix".into()));
    }
    let ensemble_len = cfg.ensemble_len.unwrap_or_else(|| (rank * rank).max(4));
    if ensemble_len < rank {
        return Err(Error::InvalidParameter(format!(
            "ensemble length {ensemble_len} below rank {rank}"
        )));
    }
    let obj = Objective::new(rho.dims(), &basis)?;

    let outcomes: Vec<DescentOutcome<T>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let start = if restart == 0 {
                Isometry::embedding(ensemble_len, rank)?
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(restart as u64);
                Isometry {
                    rows: ensemble_len,
                    cols: rank,
                    data: random_isometry(ensemble_len, rank, &mut rng),
                }
            };
            descend(&obj, start, cfg)
        })
        .collect::<Result<_>>()?;

    let mut best_restart = 0;
    let mut best_so_far = Vec::with_capacity(outcomes.len());
    for (i, o) in outcomes.iter().enumerate() {
        if o.value < outcomes[best_restart].value {
            best_restart = i;
        }
        best_so_far.push(outcomes[best_restart].value);
    }
    let decomposition = decomposition_from_isometry(rho, &outcomes[best_restart].v)?;
    let value = roof_objective(&decomposition)?;
    Ok(RoofResult {
        value,
        decomposition,
        restart_values: outcomes.iter().map(|o| o.value).collect(),
        best_so_far,
        best_restart,
        iterations: outcomes.iter().map(|o| o.iterations).collect(),
        rank,
        ensemble_len,
    })
}

/// `2×2` Hadamard-like helper used in examples: columns `(1, ±1)/√2`.
#[doc(hidden)]
pub fn hadamard_isometry<T: Real>() -> Isometry<T> {
    let h = T::c(std::f64::consts::FRAC_1_SQRT_2);
    Isometry {
        rows: 2,
        cols: 2,
        data: vec![Complex::new(h, T::zero()), Complex::new(h, T::zero()), Complex::new(h, T::zero()), Complex::new(-h, T::zero())],
    }
}
