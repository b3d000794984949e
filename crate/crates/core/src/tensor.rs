//! Dense complex linear algebra over mixed-radix tensor-product spaces.
//!
//! Basis states are enumerated little-endian: subsystem 0 is the least
//! significant digit, so basis index `k = Σ_μ n_μ · stride(μ)` with
//! `stride(μ) = Π_{ν<μ} d_ν`. For qubits this is `k = Σ n_μ 2^μ`, and the
//! written ket `|n_{M-1} … n_0⟩` reads most-significant first.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cr, cz, is_finite, Cplx, Real};

/// Largest total dimension accepted for dense storage.
pub const MAX_DIM: usize = 1 << 24;

/// Local dimensions `d_0 … d_{M-1}` of a hybrid multi-qudit system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dims {
    local: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl Dims {
    pub fn new(local: impl Into<Vec<usize>>) -> Result<Self> {
        let local = local.into();
        if local.is_empty() {
            return Err(Error::InvalidDims("at least one subsystem is required".into()));
        }
        if let Some(&d) = local.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDims(format!("local dimension {d} is below 2")));
        }
        let mut strides = Vec::with_capacity(local.len());
        let mut total: usize = 1;
        for &d in &local {
            strides.push(total);
            total = total
                .checked_mul(d)
                .filter(|&t| t <= MAX_DIM)
                .ok_or(Error::SizeOverflow(total.saturating_mul(d)))?;
        }
        Ok(Self { local, strides, total })
    }

    /// `m` subsystems of dimension `d`.
    pub fn uniform(d: usize, m: usize) -> Result<Self> {
        Self::new(vec![d; m])
    }

    pub fn qubits(m: usize) -> Result<Self> {
        Self::uniform(2, m)
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.local.len()
    }

    #[inline]
    pub fn total(&self) -> usize {
        self.total
    }

    #[inline]
    pub fn local(&self) -> &[usize] {
        &self.local
    }

    #[inline]
    pub fn dim(&self, mu: usize) -> usize {
        self.local[mu]
    }

    #[inline]
    pub fn stride(&self, mu: usize) -> usize {
        self.strides[mu]
    }

    /// Digit of subsystem `mu` in basis index `k`.
    #[inline]
    pub fn digit(&self, k: usize, mu: usize) -> usize {
        (k / self.strides[mu]) % self.local[mu]
    }

    pub fn digits(&self, k: usize) -> Vec<usize> {
        (0..self.count()).map(|mu| self.digit(k, mu)).collect()
    }

    /// Basis index of a digit string (`digits[μ]` is the digit of subsystem μ).
    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.strides)
            .map(|(&n, &s)| n * s)
            .sum()
    }

    pub fn is_all_qubits(&self) -> bool {
        self.local.iter().all(|&d| d == 2)
    }

    pub(crate) fn check_subsystem(&self, mu: usize) -> Result<()> {
        if mu >= self.count() {
            return Err(Error::SubsystemOutOfRange { index: mu, count: self.count() });
        }
        Ok(())
    }

    /// Dimensions of the subsystems in `keep` (ascending order).
    pub fn sub_dims(&self, keep: &[usize]) -> Result<Dims> {
        let keep = self.normalize_keep(keep)?;
        Dims::new(keep.iter().map(|&mu| self.local[mu]).collect::<Vec<_>>())
    }

    /// Sorted, validated strict subset of subsystem indices.
    pub(crate) fn normalize_keep(&self, keep: &[usize]) -> Result<Vec<usize>> {
        if keep.is_empty() {
            return Err(Error::InvalidSubsystemSet("kept set is empty".into()));
        }
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != keep.len() {
            return Err(Error::InvalidSubsystemSet("duplicate subsystem index".into()));
        }
        if let Some(&mu) = sorted.iter().find(|&&mu| mu >= self.count()) {
            return Err(Error::SubsystemOutOfRange { index: mu, count: self.count() });
        }
        if sorted.len() == self.count() {
            return Err(Error::InvalidSubsystemSet("kept set is the full system".into()));
        }
        Ok(sorted)
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.local)
    }
}

/// Square dense complex matrix, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator<T: Real = f64> {
    dim: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> DenseOperator<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![cz(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out[(i, i)] = cr(T::one());
        }
        out
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds from row-major entries; fails unless `data.len()` is a square.
    pub fn from_row_major(dim: usize, data: Vec<Cplx<T>>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        if !data.iter().all(|&z| is_finite(z)) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let mut out = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            out[(i, i)] = cr(x);
        }
        out
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn outer(psi: &[Cplx<T>]) -> Self {
        Self::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[Cplx<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Cplx<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Cplx<T>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        Ok((0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(cz(), |acc, (&a, &x)| acc + a * x)
            })
            .collect())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        Ok(self.zip_map(rhs, |a, b| a + b))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        Ok(self.zip_map(rhs, |a, b| a - b))
    }

    pub fn scale(&self, s: Cplx<T>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&a| a * s).collect() }
    }

    pub fn trace(&self) -> Cplx<T> {
        (0..self.dim).fold(cz(), |acc, i| acc + self[(i, i)])
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `‖self − rhs‖_F`.
    pub fn distance(&self, rhs: &Self) -> Result<T> {
        Ok(self.sub(rhs)?.frobenius_norm())
    }

    /// Largest `|a_ij − conj(a_ji)|`.
    pub fn hermitian_deviation(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.adjoint()
            .matmul(self)
            .and_then(|p| p.distance(&Self::identity(self.dim)))
            .map(|d| d <= tol)
            .unwrap_or(false)
    }

    /// `[self, rhs]`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.matmul(rhs)?.sub(&rhs.matmul(self)?)
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Real>(&self) -> DenseOperator<U> {
        DenseOperator {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::c(z.re.as_f64()), U::c(z.im.as_f64())))
                .collect(),
        }
    }

    fn check_same_dim(&self, rhs: &Self) -> Result<()> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rhs.dim });
        }
        Ok(())
    }

    fn zip_map(&self, rhs: &Self, f: impl Fn(Cplx<T>, Cplx<T>) -> Cplx<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl<T: Real> Index<(usize, usize)> for DenseOperator<T> {
    type Output = Cplx<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cplx<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for DenseOperator<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx<T> {
        &mut self.data[i * self.dim + j]
    }
}

/// Kronecker product: `out[(i_a·n_b + i_b), (j_a·n_b + j_b)] = a[i_a,j_a]·b[i_b,j_b]`.
pub fn kron<T: Real>(a: &DenseOperator<T>, b: &DenseOperator<T>) -> Result<DenseOperator<T>> {
    let (na, nb) = (a.dim(), b.dim());
    let n = na
        .checked_mul(nb)
        .filter(|&n| n <= MAX_DIM)
        .ok_or(Error::SizeOverflow(na.saturating_mul(nb)))?;
    let mut out = DenseOperator::zeros(n);
    for ia in 0..na {
        for ja in 0..na {
            let x = a[(ia, ja)];
            for ib in 0..nb {
                for jb in 0..nb {
                    out[(ia * nb + ib, ja * nb + jb)] = x * b[(ib, jb)];
                }
            }
        }
    }
    Ok(out)
}

/// `D×D` matrix acting as `op` on subsystem `mu` and as the identity elsewhere.
pub fn embed_local<T: Real>(
    op: &DenseOperator<T>,
    mu: usize,
    dims: &Dims,
) -> Result<DenseOperator<T>> {
    dims.check_subsystem(mu)?;
    let d = dims.dim(mu);
    if op.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: op.dim() });
    }
    let stride = dims.stride(mu);
    let mut out = DenseOperator::zeros(dims.total());
    for k in 0..dims.total() {
        let n = dims.digit(k, mu);
        let base = k - n * stride;
        for m in 0..d {
            out[(k, base + m * stride)] = op[(n, m)];
        }
    }
    Ok(out)
}

/// Applies a local `d_mu × d_mu` operator to subsystem `mu` of an amplitude
/// vector in `O(d_mu · D)` without forming the embedded matrix.
pub fn apply_local<T: Real>(
    op: &DenseOperator<T>,
    mu: usize,
    dims: &Dims,
    amps: &[Cplx<T>],
) -> Result<Vec<Cplx<T>>> {
    dims.check_subsystem(mu)?;
    let d = dims.dim(mu);
    if op.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: op.dim() });
    }
    if amps.len() != dims.total() {
        return Err(Error::DimensionMismatch { expected: dims.total(), found: amps.len() });
    }
    let stride = dims.stride(mu);
    let mut out = vec![cz(); amps.len()];
    for (k, slot) in out.iter_mut().enumerate() {
        let n = dims.digit(k, mu);
        let base = k - n * stride;
        let row = op.row(n);
        let mut acc = cz();
        for (m, &a) in row.iter().enumerate() {
            acc = acc + a * amps[base + m * stride];
        }
        *slot = acc;
    }
    Ok(out)
}

/// `⟨a|b⟩`.
pub fn inner<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>]) -> Cplx<T> {
    a.iter().zip(b).fold(cz(), |acc, (&x, &y)| acc + x.conj() * y)
}

/// Normalized pure state over a [`Dims`] space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real = f64> {
    dims: Dims,
    amps: Vec<Cplx<T>>,
}

impl<T: Real> StateVector<T> {
    /// Normalizes `amps`; fails on length mismatch, non-finite entries or a
    /// zero vector.
    pub fn new(dims: Dims, amps: Vec<Cplx<T>>) -> Result<Self> {
        let mut s = Self::from_raw(dims, amps)?;
        let norm = s.norm();
        if norm == T::zero() {
            return Err(Error::NotNormalized(1.0));
        }
        let inv = norm.recip();
        for a in &mut s.amps {
            *a = *a * inv;
        }
        Ok(s)
    }

    /// Wraps amplitudes without normalizing them.
    pub fn from_raw(dims: Dims, amps: Vec<Cplx<T>>) -> Result<Self> {
        if amps.len() != dims.total() {
            return Err(Error::DimensionMismatch { expected: dims.total(), found: amps.len() });
        }
        if !amps.iter().all(|&z| is_finite(z)) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dims, amps })
    }

    pub fn from_real(dims: Dims, amps: &[T]) -> Result<Self> {
        Self::new(dims, amps.iter().map(|&x| cr(x)).collect())
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(dims: Dims, k: usize) -> Result<Self> {
        if k >= dims.total() {
            return Err(Error::InvalidParameter(format!(
                "basis index {k} outside dimension {}",
                dims.total()
            )));
        }
        let mut amps = vec![cz(); dims.total()];
        amps[k] = cr(T::one());
        Ok(Self { dims, amps })
    }

    /// `|a_0⟩ ⊗ … ⊗ |a_{M-1}⟩` with factor μ acting on subsystem μ.
    pub fn product(factors: &[Vec<Cplx<T>>]) -> Result<Self> {
        let dims = Dims::new(factors.iter().map(Vec::len).collect::<Vec<_>>())?;
        let amps = (0..dims.total())
            .map(|k| {
                factors
                    .iter()
                    .enumerate()
                    .fold(cr(T::one()), |acc, (mu, f)| acc * f[dims.digit(k, mu)])
            })
            .collect();
        Self::new(dims, amps)
    }

    #[inline]
    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Cplx<T>] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Cplx<T>> {
        self.amps
    }

    pub fn norm(&self) -> T {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `|‖ψ‖ − 1|`.
    pub fn norm_deviation(&self) -> T {
        (self.norm() - T::one()).abs()
    }

    /// Fails when `|‖ψ‖ − 1| > tol`.
    pub fn ensure_normalized(&self, tol: T) -> Result<()> {
        let dev = self.norm_deviation();
        if dev > tol {
            return Err(Error::NotNormalized(dev.as_f64()));
        }
        Ok(())
    }

    pub fn inner(&self, other: &Self) -> Cplx<T> {
        inner(&self.amps, &other.amps)
    }

    /// Applies a full-space operator and renormalizes.
    pub fn transform(&self, op: &DenseOperator<T>) -> Result<Self> {
        Self::new(self.dims.clone(), op.apply(&self.amps)?)
    }

    /// Applies a local operator on subsystem `mu` and renormalizes.
    pub fn apply_local(&self, op: &DenseOperator<T>, mu: usize) -> Result<Self> {
        Self::new(self.dims.clone(), apply_local(op, mu, &self.dims, &self.amps)?)
    }

    /// Applies one local unitary per subsystem.
    pub fn apply_local_all(&self, ops: &[DenseOperator<T>]) -> Result<Self> {
        if ops.len() != self.dims.count() {
            return Err(Error::DimensionMismatch { expected: self.dims.count(), found: ops.len() });
        }
        let mut amps = self.amps.clone();
        for (mu, op) in ops.iter().enumerate() {
            amps = apply_local(op, mu, &self.dims, &amps)?;
        }
        Self::new(self.dims.clone(), amps)
    }

    pub fn density(&self) -> DenseOperator<T> {
        DenseOperator::outer(&self.amps)
    }

    pub fn cast<U: Real>(&self) -> StateVector<U> {
        StateVector {
            dims: self.dims.clone(),
            amps: self
                .amps
                .iter()
                .map(|z| Complex::new(U::c(z.re.as_f64()), U::c(z.im.as_f64())))
                .collect(),
        }
    }
}

/// `⟨s|op|s⟩`.
pub fn expectation<T: Real>(state: &StateVector<T>, op: &DenseOperator<T>) -> Result<Cplx<T>> {
    let image = op.apply(state.amplitudes())?;
    Ok(inner(state.amplitudes(), &image))
}

/// Reduced density matrix on the subsystems in `keep`.
///
/// The result is indexed little-endian over the kept subsystems in ascending
/// order (see [`Dims::sub_dims`]).
pub fn partial_trace<T: Real>(state: &StateVector<T>, keep: &[usize]) -> Result<DenseOperator<T>> {
    let dims = state.dims();
    let keep = dims.normalize_keep(keep)?;
    let rest: Vec<usize> = (0..dims.count()).filter(|mu| !keep.contains(mu)).collect();
    let kept_dims = dims.sub_dims(&keep)?;
    let rest_dims = dims.sub_dims(&rest)?;

    let (nk, nr) = (kept_dims.total(), rest_dims.total());
    let mut psi = vec![cz::<T>(); nk * nr];
    for (k, &a) in state.amplitudes().iter().enumerate() {
        let ik: usize = keep
            .iter()
            .enumerate()
            .map(|(i, &mu)| dims.digit(k, mu) * kept_dims.stride(i))
            .sum();
        let ir: usize = rest
            .iter()
            .enumerate()
            .map(|(i, &mu)| dims.digit(k, mu) * rest_dims.stride(i))
            .sum();
        psi[ik * nr + ir] = a;
    }
    Ok(DenseOperator::from_fn(nk, |i, j| {
        inner(&psi[j * nr..(j + 1) * nr], &psi[i * nr..(i + 1) * nr])
    }))
}
