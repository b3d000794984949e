//! Generalized Gell-Mann generators of su(d).
//!
//! Generators are indexed `ℓ = 1 … d²−1` (stored at position `ℓ − 1`):
//!
//! * symmetric `E_jk + E_kj` at `ℓ = 2(k−j) + (j−1)(2d−j) − 1`,
//! * antisymmetric `−i(E_jk − E_kj)` at the following index,
//! * diagonal `(Σ_{j≤k} E_jj − k E_{k+1,k+1}) √(2/(k(k+1)))` at `ℓ = d(d−1) + k`,
//!
//! with 1-based `1 ≤ j < k ≤ d`. For `d = 2` this is `(σ_x, σ_y, σ_z)`.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;
use rand::Rng;

use crate::eig::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::random::{haar_unitary, random_state_vec};
use crate::scalar::{cr, Cplx, Real};
use crate::tensor::{inner, DenseOperator};

/// Largest local dimension accepted by [`gellmann`].
pub const MAX_LOCAL_DIM: usize = 64;

/// Which of the three Gell-Mann classes a generator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `(j, k)`, 1-based, `j < k`.
    Symmetric(usize, usize),
    Antisymmetric(usize, usize),
    /// `k` in `1 … d−1`.
    Diagonal(usize),
}

/// 1-based index `ℓ` of a generator.
pub fn generator_index(d: usize, kind: GeneratorKind) -> usize {
    match kind {
        GeneratorKind::Symmetric(j, k) => 2 * (k - j) + (j - 1) * (2 * d - j) - 1,
        GeneratorKind::Antisymmetric(j, k) => 2 * (k - j) + (j - 1) * (2 * d - j),
        GeneratorKind::Diagonal(k) => d * (d - 1) + k,
    }
}

/// The `d² − 1` generalized Gell-Mann matrices for one local dimension.
#[derive(Clone, Debug)]
pub struct GeneratorSet<T: Real = f64> {
    d: usize,
    t: Vec<DenseOperator<T>>,
    kinds: Vec<GeneratorKind>,
}

impl<T: Real> GeneratorSet<T> {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Generator with 1-based index `l`.
    pub fn get(&self, l: usize) -> &DenseOperator<T> {
        &self.t[l - 1]
    }

    pub fn kind(&self, l: usize) -> GeneratorKind {
        self.kinds[l - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = &DenseOperator<T>> {
        self.t.iter()
    }

    pub fn as_slice(&self) -> &[DenseOperator<T>] {
        &self.t
    }

    /// `Σ_k c_k T_k` for real coefficients.
    pub fn combine(&self, coeffs: &[T]) -> Result<DenseOperator<T>> {
        if coeffs.len() != self.t.len() {
            return Err(Error::DimensionMismatch { expected: self.t.len(), found: coeffs.len() });
        }
        let mut out = DenseOperator::zeros(self.d);
        for (c, t) in coeffs.iter().zip(&self.t) {
            if *c != T::zero() {
                out = out.add(&t.scale(cr(*c)))?;
            }
        }
        Ok(out)
    }

    /// Shared immutable set for dimension `d`, built on first use.
    pub fn cached(d: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<(TypeId, usize), Arc<dyn Any + Send + Sync>>>> =
            OnceLock::new();
        let key = (TypeId::of::<T>(), d);
        let cache = CACHE.get_or_init(Default::default);
        if let Some(hit) = cache.lock().expect("generator cache poisoned").get(&key) {
            return Ok(hit.clone().downcast::<Self>().expect("cache keyed by scalar type"));
        }
        let built: Arc<dyn Any + Send + Sync> = Arc::new(gellmann::<T>(d)?);
        let shared = cache
            .lock()
            .expect("generator cache poisoned")
            .entry(key)
            .or_insert(built)
            .clone();
        Ok(shared.downcast::<Self>().expect("cache keyed by scalar type"))
    }

    /// Replaces generator `l`. Only meant for negative-control self tests.
    #[doc(hidden)]
    pub fn with_replaced(mut self, l: usize, op: DenseOperator<T>) -> Self {
        self.t[l - 1] = op;
        self
    }
}

/// Builds the generalized Gell-Mann set for `2 ≤ d ≤ 64`.
pub fn gellmann<T: Real>(d: usize) -> Result<GeneratorSet<T>> {
    if !(2..=MAX_LOCAL_DIM).contains(&d) {
        return Err(Error::InvalidParameter(format!(
            "local dimension {d} outside 2..={MAX_LOCAL_DIM}"
        )));
    }
    let n = d * d - 1;
    let mut slots: Vec<Option<(GeneratorKind, DenseOperator<T>)>> = vec![None; n];
    let one = cr(T::one());
    let i = Complex::new(T::zero(), T::one());

    for j in 1..d {
        for k in (j + 1)..=d {
            let mut sym = DenseOperator::zeros(d);
            sym[(j - 1, k - 1)] = one;
            sym[(k - 1, j - 1)] = one;
            let kind = GeneratorKind::Symmetric(j, k);
            slots[generator_index(d, kind) - 1] = Some((kind, sym));

            let mut anti = DenseOperator::zeros(d);
            anti[(j - 1, k - 1)] = -i;
            anti[(k - 1, j - 1)] = i;
            let kind = GeneratorKind::Antisymmetric(j, k);
            slots[generator_index(d, kind) - 1] = Some((kind, anti));
        }
    }
    for k in 1..d {
        let norm = (T::c(2.0) / T::count(k * (k + 1))).sqrt();
        let mut diag = vec![T::zero(); d];
        for x in diag.iter_mut().take(k) {
            *x = norm;
        }
        diag[k] = -T::count(k) * norm;
        let kind = GeneratorKind::Diagonal(k);
        slots[generator_index(d, kind) - 1] = Some((kind, DenseOperator::from_real_diagonal(&diag)));
    }

    let (kinds, t) = slots
        .into_iter()
        .map(|s| s.expect("index map covers 1..d²-1"))
        .unzip();
    Ok(GeneratorSet { d, t, kinds })
}

/// `Σ_k T_k²` should equal this multiple of the identity.
pub fn casimir_value<T: Real>(d: usize) -> T {
    T::c(2.0 * (d * d - 1) as f64 / d as f64)
}

/// `Σ_k ⟨T_k⟩²` for any normalized single-qudit state.
pub fn purity_sum_value<T: Real>(d: usize) -> T {
    T::c(2.0 * (d - 1) as f64 / d as f64)
}

/// `Σ_k ⟨s|T_k|s⟩²` for a single-qudit amplitude vector.
pub fn expectation_square_sum<T: Real>(g: &GeneratorSet<T>, psi: &[Cplx<T>]) -> Result<T> {
    if psi.len() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: psi.len() });
    }
    let mut acc = T::zero();
    for t in g.iter() {
        let e = inner(psi, &t.apply(psi)?).re;
        acc = acc + e * e;
    }
    Ok(acc)
}

/// Residuals of the three generator identities.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub d: usize,
    /// `‖Σ_k T_k² − (2(d²−1)/d) I‖_F`.
    pub casimir: f64,
    /// `max |Σ_k ⟨T_k⟩² − 2(d−1)/d|` over the probes.
    pub purity_sum: f64,
    /// `max |Σ_k ⟨U†T_kU⟩² − Σ_k ⟨T_k⟩²|` over probes and random unitaries.
    pub frame_invariance: f64,
    /// `max_ℓ ρ(T_ℓ)` and its distance from `√(2(d−1)/d)`.
    pub max_eigenvalue: f64,
    pub max_eigenvalue_error: f64,
}

/// Checks the Casimir, purity-sum and frame-invariance identities.
///
/// `unitaries` random local unitaries are drawn from `rng` and tested against
/// every probe.
pub fn verify_identities<T: Real, R: Rng + ?Sized>(
    g: &GeneratorSet<T>,
    probes: &[Vec<Cplx<T>>],
    unitaries: usize,
    rng: &mut R,
) -> Result<IdentityReport> {
    let d = g.dim();
    if let Some(p) = probes.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: p.len() });
    }

    let mut sum_sq = DenseOperator::zeros(d);
    for t in g.iter() {
        sum_sq = sum_sq.add(&t.matmul(t)?)?;
    }
    let casimir = sum_sq
        .distance(&DenseOperator::identity(d).scale(cr(casimir_value::<T>(d))))?
        .as_f64();

    let target = purity_sum_value::<T>(d);
    let mut purity_sum = 0.0f64;
    for p in probes {
        let s = expectation_square_sum(g, p)?;
        purity_sum = purity_sum.max((s - target).abs().as_f64());
    }

    let mut frame_invariance = 0.0f64;
    for _ in 0..unitaries {
        let u = haar_unitary::<T, _>(d, rng);
        let ud = u.adjoint();
        let rotated: Vec<DenseOperator<T>> = g
            .iter()
            .map(|t| ud.matmul(t).and_then(|x| x.matmul(&u)))
            .collect::<Result<_>>()?;
        for p in probes {
            let base = expectation_square_sum(g, p)?;
            let mut acc = T::zero();
            for t in &rotated {
                let e = inner(p, &t.apply(p)?).re;
                acc = acc + e * e;
            }
            frame_invariance = frame_invariance.max((acc - base).abs().as_f64());
        }
    }

    let max_eigenvalue = max_generator_eigenvalue(g)?;
    let expected = (2.0 * (d - 1) as f64 / d as f64).sqrt();
    Ok(IdentityReport {
        d,
        casimir,
        purity_sum,
        frame_invariance,
        max_eigenvalue,
        max_eigenvalue_error: (max_eigenvalue - expected).abs(),
    })
}

/// Random normalized single-qudit probes.
pub fn random_probes<T: Real, R: Rng + ?Sized>(d: usize, count: usize, rng: &mut R) -> Vec<Vec<Cplx<T>>> {
    (0..count).map(|_| random_state_vec(d, rng)).collect()
}

/// Largest spectral radius among the generators.
pub fn max_generator_eigenvalue<T: Real>(g: &GeneratorSet<T>) -> Result<f64> {
    let mut best = 0.0f64;
    for t in g.iter() {
        let ev = hermitian_eigenvalues(t)?;
        let radius = ev.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        best = best.max(radius.as_f64());
    }
    Ok(best)
}
