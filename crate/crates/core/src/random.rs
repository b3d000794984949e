//! Random states, unitaries and directions for property checks and restarts.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::scalar::{Cplx, Real};
use crate::tensor::{DenseOperator, Dims, StateVector};

fn normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::c(rng.sample::<f64, _>(StandardNormal))
}

fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Cplx<T> {
    Complex::new(normal(rng), normal(rng))
}

/// Orthonormalizes the columns of a row-major `rows × cols` matrix in place
/// with two passes of modified Gram-Schmidt. Returns `false` on rank loss.
pub fn orthonormalize_columns<T: Real>(m: &mut [Cplx<T>], rows: usize, cols: usize) -> bool {
    for j in 0..cols {
        for _ in 0..2 {
            for p in 0..j {
                let mut proj = Complex::new(T::zero(), T::zero());
                for i in 0..rows {
                    proj = proj + m[i * cols + p].conj() * m[i * cols + j];
                }
                for i in 0..rows {
                    let v = m[i * cols + p];
                    m[i * cols + j] = m[i * cols + j] - v * proj;
                }
            }
        }
        let norm = (0..rows).map(|i| m[i * cols + j].norm_sqr()).sum::<T>().sqrt();
        if norm <= T::epsilon() {
            return false;
        }
        let inv = norm.recip();
        for i in 0..rows {
            m[i * cols + j] = m[i * cols + j] * inv;
        }
    }
    true
}

/// Random `rows × cols` isometry (orthonormal columns), row-major.
///
/// Orthonormalized standard-normal complex matrix; Gram-Schmidt fixes the
/// phase of `R` so the distribution is unitarily invariant.
pub fn random_isometry<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Vec<Cplx<T>> {
    loop {
        let mut m: Vec<Cplx<T>> = (0..rows * cols).map(|_| complex_normal(rng)).collect();
        if orthonormalize_columns(&mut m, rows, cols) {
            return m;
        }
    }
}

/// Haar-distributed `d × d` unitary.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> DenseOperator<T> {
    let m = random_isometry(d, d, rng);
    DenseOperator::from_row_major(d, m).expect("square by construction")
}

/// One Haar unitary per subsystem.
pub fn random_local_unitaries<T: Real, R: Rng + ?Sized>(dims: &Dims, rng: &mut R) -> Vec<DenseOperator<T>> {
    dims.local().iter().map(|&d| haar_unitary(d, rng)).collect()
}

/// Uniformly random unit vector in `C^d`.
pub fn random_state_vec<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Cplx<T>> {
    loop {
        let v: Vec<Cplx<T>> = (0..d).map(|_| complex_normal(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm > T::epsilon() {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random pure state.
pub fn random_state<T: Real, R: Rng + ?Sized>(dims: &Dims, rng: &mut R) -> Result<StateVector<T>> {
    StateVector::new(dims.clone(), random_state_vec(dims.total(), rng))
}

/// Random product state `⊗_μ |a_μ⟩`.
pub fn random_product_state<T: Real, R: Rng + ?Sized>(dims: &Dims, rng: &mut R) -> Result<StateVector<T>> {
    let factors: Vec<Vec<Cplx<T>>> = dims.local().iter().map(|&d| random_state_vec(d, rng)).collect();
    StateVector::product(&factors)
}

/// Uniformly random unit vector in `R^n`.
pub fn random_unit_vector<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<T> {
    loop {
        let v: Vec<T> = (0..n).map(|_| normal(rng)).collect();
        let norm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm > T::epsilon() {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}
