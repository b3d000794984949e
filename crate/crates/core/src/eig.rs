//! Cyclic Jacobi eigensolver for dense Hermitian matrices.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cr, cz, Cplx, Real};
use crate::tensor::DenseOperator;

/// Sweep cap before the solver gives up and reports its residual.
pub const MAX_SWEEPS: usize = 100;

/// Relative off-diagonal Frobenius norm at which the iteration stops.
pub const CONVERGENCE_TOL: f64 = 1e-12;

/// Hermiticity required of the input, relative to `max(1, ‖A‖_F)`.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues (descending) and matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum<T: Real = f64> {
    pub eigenvalues: Vec<T>,
    /// Column `i` is the eigenvector of `eigenvalues[i]`.
    pub eigenvectors: DenseOperator<T>,
    pub sweeps: usize,
    /// Off-diagonal Frobenius norm left when iteration stopped.
    pub residual: T,
    pub converged: bool,
}

impl<T: Real> HermitianSpectrum<T> {
    pub fn eigenvector(&self, i: usize) -> Vec<Cplx<T>> {
        self.eigenvectors.column(i)
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> DenseOperator<T> {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        DenseOperator::from_fn(n, |i, j| {
            (0..n).fold(cz(), |acc, k| acc + v[(i, k)] * v[(j, k)].conj() * self.eigenvalues[k])
        })
    }

    /// Projector onto the span of eigenvectors whose eigenvalue lies within
    /// `tol` of `value`. Unlike raw eigenvectors this is basis independent.
    pub fn cluster_projector(&self, value: T, tol: T) -> DenseOperator<T> {
        let n = self.eigenvalues.len();
        let cols: Vec<usize> = (0..n)
            .filter(|&k| (self.eigenvalues[k] - value).abs() <= tol)
            .collect();
        let v = &self.eigenvectors;
        DenseOperator::from_fn(n, |i, j| {
            cols.iter().fold(cz(), |acc, &k| acc + v[(i, k)] * v[(j, k)].conj())
        })
    }
}

/// Full spectrum of a Hermitian matrix.
///
/// Deterministic: identical input yields bit-identical output. Eigenvectors
/// inside a degenerate cluster are whatever the rotation sequence produced.
pub fn hermitian_eig<T: Real>(a: &DenseOperator<T>) -> Result<HermitianSpectrum<T>> {
    let n = a.dim();
    let scale = a.frobenius_norm();
    let dev = a.hermitian_deviation();
    if dev > T::tol(HERMITIAN_TOL) * scale.max(T::one()) {
        return Err(Error::NotHermitian(dev.as_f64()));
    }
    if !scale.is_finite() {
        return Err(Error::NonFinite);
    }

    // symmetrize so the rotations act on an exactly Hermitian matrix
    let half = T::c(0.5);
    let mut m = DenseOperator::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * half);
    let mut v = DenseOperator::<T>::identity(n);
    let target = T::tol(CONVERGENCE_TOL) * scale;

    let mut sweeps = 0;
    let mut off = off_norm(&m);
    while off > target && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_norm(&m);
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| m[(i, i)].re).collect();
    // stable sort keeps the tie order deterministic
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(std::cmp::Ordering::Equal));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = DenseOperator::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
        sweeps,
        residual: off,
        converged: off <= target,
    })
}

/// Eigenvalues only, descending.
pub fn hermitian_eigenvalues<T: Real>(a: &DenseOperator<T>) -> Result<Vec<T>> {
    Ok(hermitian_eig(a)?.eigenvalues)
}

fn off_norm<T: Real>(m: &DenseOperator<T>) -> T {
    let n = m.dim();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Zeroes `m[p,q]` with a unitary plane rotation `J`: `m ← J† m J`, `v ← v J`.
fn rotate<T: Real>(m: &mut DenseOperator<T>, v: &mut DenseOperator<T>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == T::zero() {
        return;
    }
    let phase = apq / mag;
    let (app, aqq) = (m[(p, p)].re, m[(q, q)].re);

    let theta = (aqq - app) / (T::c(2.0) * mag);
    let t = if theta >= T::zero() {
        T::one() / (theta + (theta * theta + T::one()).sqrt())
    } else {
        -T::one() / (-theta + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    // J = diag(1, conj(phase)) · R(c, s): zeroes the real off-diagonal left
    // after removing the phase of m[p,q]
    let jpp = cr(c);
    let jpq = cr(s);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = m.dim();
    for k in 0..n {
        let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = mkp * jpp + mkq * jqp;
        m[(k, q)] = mkp * jpq + mkq * jqq;
    }
    for k in 0..n {
        let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = jpp.conj() * mpk + jqp.conj() * mqk;
        m[(q, k)] = jpq.conj() * mpk + jqq.conj() * mqk;
    }
    m[(p, q)] = cz();
    m[(q, p)] = cz();
    m[(p, p)] = Complex::new(m[(p, p)].re, T::zero());
    m[(q, q)] = Complex::new(m[(q, q)].re, T::zero());

    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}
