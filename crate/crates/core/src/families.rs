//! Analytic state families: Briegel-Raussendorf chains, GHZ-like states, a
//! two-parameter three-qubit family, a qubit⊗qutrit family and the qutrit
//! GHZ generalization.
//!
//! Kets are written most-significant subsystem first, `|n_{M-1} … n_0⟩`, and
//! stored little-endian (see [`crate::tensor`]).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cr, cz, Cplx, Real};
use crate::tensor::{Dims, StateVector};

/// Largest chain accepted by [`brs`].
pub const MAX_BRS_QUBITS: usize = 14;

/// Number of adjacent pairs reading `01` in `|n_{M-1} … n_0⟩`, i.e. digit
/// `μ+1` is 0 and digit `μ` is 1, for `μ = 0 … M−2` (open chain).
pub fn brs_pair_count(k: usize, m: usize) -> usize {
    (0..m.saturating_sub(1))
        .filter(|&mu| (k >> (mu + 1)) & 1 == 0 && (k >> mu) & 1 == 1)
        .count()
}

/// Eigenvalue `λ = Σ_{j=0}^{n} C(n, j) α^j` of the chain entangler on a
/// basis state with `n` marked pairs, `α = e^{−iφ} − 1`.
pub fn brs_eigenvalue<T: Real>(n: usize, phi: T) -> Cplx<T> {
    let alpha = Complex::new(phi.cos() - T::one(), -phi.sin());
    let mut acc = cz();
    let mut binom = T::one();
    let mut power = cr(T::one());
    for j in 0..=n {
        acc = acc + power * binom;
        power = power * alpha;
        // C(n, j+1) = C(n, j) (n − j) / (j + 1)
        binom = binom * T::count(n - j) / T::count(j + 1);
    }
    acc
}

/// Briegel-Raussendorf chain state `|r, φ⟩_M = 2^{−M/2} Σ_k λ_k |k⟩`.
pub fn brs<T: Real>(m: usize, phi: T) -> Result<StateVector<T>> {
    if !(2..=MAX_BRS_QUBITS).contains(&m) {
        return Err(Error::InvalidParameter(format!(
            "BRS qubit count {m} outside 2..={MAX_BRS_QUBITS}"
        )));
    }
    let dims = Dims::qubits(m)?;
    let scale = T::c(2f64.powf(-(m as f64) / 2.0));
    // λ depends only on the pair count, which is at most M/2
    let lambdas: Vec<Cplx<T>> = (0..=m / 2).map(|n| brs_eigenvalue(n, phi)).collect();
    let amps = (0..dims.total())
        .map(|k| lambdas[brs_pair_count(k, m)] * scale)
        .collect();
    StateVector::new(dims, amps)
}

/// `cos θ |0…0⟩ + sin θ e^{iφ} |1…1⟩` on `m` qubits.
pub fn ghzls<T: Real>(m: usize, theta: T, phase: T) -> Result<StateVector<T>> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("GHZ-like state needs m >= 2, got {m}")));
    }
    let dims = Dims::qubits(m)?;
    let mut amps = vec![cz(); dims.total()];
    amps[0] = cr(theta.cos());
    amps[dims.total() - 1] = Complex::from_polar(theta.sin(), phase);
    StateVector::new(dims, amps)
}

/// `cos γ |0⟩[cos τ |00⟩ + sin τ |11⟩] + sin γ |1⟩[sin τ |00⟩ + cos τ |11⟩]`,
/// the leftmost factor being qubit 2.
pub fn three_qubit<T: Real>(gamma: T, tau: T) -> Result<StateVector<T>> {
    let dims = Dims::qubits(3)?;
    let (sg, cg) = gamma.sin_cos();
    let (st, ct) = tau.sin_cos();
    let mut amps = vec![cz(); 8];
    amps[0b000] = cr(cg * ct);
    amps[0b011] = cr(cg * st);
    amps[0b100] = cr(sg * st);
    amps[0b111] = cr(sg * ct);
    StateVector::new(dims, amps)
}

/// `cos θ |+,0⟩ + sin θ |−,2⟩` on a qubit (subsystem 0) and a qutrit
/// (subsystem 1). The labels `+`/`−` are the qubit basis states 0/1.
pub fn hybrid_qubit_qutrit<T: Real>(theta: T) -> Result<StateVector<T>> {
    let dims = Dims::new(vec![2, 3])?;
    let mut amps = vec![cz(); 6];
    amps[dims.index_of(&[0, 0])] = cr(theta.cos());
    amps[dims.index_of(&[1, 2])] = cr(theta.sin());
    StateVector::new(dims, amps)
}

/// `sin θ cos φ |0…0⟩ + sin θ sin φ |1…1⟩ + cos θ |2…2⟩` on `m` qutrits.
pub fn qutrit_ghz<T: Real>(m: usize, theta: T, phi: T) -> Result<StateVector<T>> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("qutrit GHZ state needs m >= 2, got {m}")));
    }
    let dims = Dims::uniform(3, m)?;
    let mut amps = vec![cz(); dims.total()];
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    amps[dims.index_of(&vec![0; m])] = cr(st * cp);
    amps[dims.index_of(&vec![1; m])] = cr(st * sp);
    amps[dims.index_of(&vec![2; m])] = cr(ct);
    StateVector::new(dims, amps)
}

/// A family member together with its parameters (angles in radians).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FamilyLabel {
    Brs { m: usize, phi: f64 },
    Ghzls { m: usize, theta: f64, phase: f64 },
    ThreeQubit { gamma: f64, tau: f64 },
    Hybrid23 { theta: f64 },
    QutritGhz { m: usize, theta: f64, phi: f64 },
}

impl FamilyLabel {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyLabel::Brs { .. } => "brs",
            FamilyLabel::Ghzls { .. } => "ghzls",
            FamilyLabel::ThreeQubit { .. } => "three-qubit",
            FamilyLabel::Hybrid23 { .. } => "hybrid",
            FamilyLabel::QutritGhz { .. } => "qutrit-ghz",
        }
    }

    pub fn build<T: Real>(&self) -> Result<StateVector<T>> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        let ok = match *self {
            FamilyLabel::Brs { phi, .. } => finite(&[phi]),
            FamilyLabel::Ghzls { theta, phase, .. } => finite(&[theta, phase]),
            FamilyLabel::ThreeQubit { gamma, tau } => finite(&[gamma, tau]),
            FamilyLabel::Hybrid23 { theta } => finite(&[theta]),
            FamilyLabel::QutritGhz { theta, phi, .. } => finite(&[theta, phi]),
        };
        if !ok {
            return Err(Error::NonFinite);
        }
        match *self {
            FamilyLabel::Brs { m, phi } => brs(m, T::c(phi)),
            FamilyLabel::Ghzls { m, theta, phase } => ghzls(m, T::c(theta), T::c(phase)),
            FamilyLabel::ThreeQubit { gamma, tau } => three_qubit(T::c(gamma), T::c(tau)),
            FamilyLabel::Hybrid23 { theta } => hybrid_qubit_qutrit(T::c(theta)),
            FamilyLabel::QutritGhz { m, theta, phi } => qutrit_ghz(m, T::c(theta), T::c(phi)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{embed_local, DenseOperator};
    use std::f64::consts::PI;

    #[test]
    fn brs_at_zero_is_uniform() {
        for m in 2..=6 {
            let s = brs::<f64>(m, 0.0).unwrap();
            let a = 2f64.powf(-(m as f64) / 2.0);
            assert!(s.amplitudes().iter().all(|z| (z - Complex::new(a, 0.0)).norm() < 1e-15));
        }
    }

    #[test]
    fn brs_eigenvalues_are_phases() {
        for n in 0..=7 {
            for &phi in &[0.0, 0.3, 1.7, PI, 4.1, 2.0 * PI] {
                let lam = brs_eigenvalue::<f64>(n, phi);
                let closed = Complex::from_polar(1.0, -phi * n as f64);
                assert!((lam.norm() - 1.0).abs() < 1e-12);
                assert!((lam - closed).norm() < 1e-12, "n={n} phi={phi}");
            }
        }
    }

    #[test]
    fn pair_count_convention() {
        // |n1 n0> = |01> is k = 1
        assert_eq!(brs_pair_count(0b01, 2), 1);
        assert_eq!(brs_pair_count(0b10, 2), 0);
        assert_eq!(brs_pair_count(0b0101, 4), 2);
        assert_eq!(brs_pair_count(0b1010, 4), 1);
        assert_eq!(brs_pair_count(0b1111, 4), 0);
    }

    /// Entangler built as a product of diagonal pair factors
    /// `I + α P0^{μ+1} P1^{μ}` from embedded projectors.
    fn entangler_oracle(m: usize, phi: f64) -> DenseOperator {
        let dims = Dims::qubits(m).unwrap();
        let alpha = Complex::new(phi.cos() - 1.0, -phi.sin());
        let p0 = DenseOperator::from_real_diagonal(&[1.0, 0.0]);
        let p1 = DenseOperator::from_real_diagonal(&[0.0, 1.0]);
        let id = DenseOperator::identity(dims.total());
        let mut u = id.clone();
        for mu in 0..m - 1 {
            let proj = embed_local(&p0, mu + 1, &dims)
                .unwrap()
                .matmul(&embed_local(&p1, mu, &dims).unwrap())
                .unwrap();
            let factor = id.add(&proj.scale(alpha)).unwrap();
            u = u.matmul(&factor).unwrap();
        }
        u
    }

    #[test]
    fn brs_matches_entangler_oracle() {
        for m in 2..=6 {
            for &phi in &[0.4, PI / 2.0, PI, 5.0] {
                let u = entangler_oracle(m, phi);
                assert!(u.is_unitary(1e-12));
                let r0 = brs::<f64>(m, 0.0).unwrap();
                let via_matrix = u.apply(r0.amplitudes()).unwrap();
                let direct = brs::<f64>(m, phi).unwrap();
                for (a, b) in via_matrix.iter().zip(direct.amplitudes()) {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn brs_is_two_pi_periodic() {
        for &phi in &[0.1, 1.3, 3.0] {
            let a = brs::<f64>(5, phi).unwrap();
            let b = brs::<f64>(5, phi + 2.0 * PI).unwrap();
            for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn brs_range() {
        assert!(brs::<f64>(1, 0.3).is_err());
        assert!(brs::<f64>(15, 0.3).is_err());
        assert!(brs::<f64>(14, 0.3).is_ok());
    }

    #[test]
    fn ghzls_layout() {
        let s = ghzls::<f64>(3, 0.3, 0.7).unwrap();
        assert!((s.amplitudes()[0].re - 0.3f64.cos()).abs() < 1e-15);
        assert!((s.amplitudes()[7] - Complex::from_polar(0.3f64.sin(), 0.7)).norm() < 1e-15);
        assert!(ghzls::<f64>(1, 0.3, 0.0).is_err());
    }

    #[test]
    fn three_qubit_layout() {
        let s = three_qubit::<f64>(0.0, 0.0).unwrap();
        assert_eq!(s, StateVector::basis(Dims::qubits(3).unwrap(), 0).unwrap());
        // sin γ |1⟩ sin τ |00⟩ sits on qubit 2 = 1, qubits 1,0 = 0
        let s = three_qubit::<f64>(PI / 2.0, PI / 2.0).unwrap();
        assert!((s.amplitudes()[4].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hybrid_layout() {
        let s = hybrid_qubit_qutrit::<f64>(PI / 2.0).unwrap();
        assert!((s.amplitudes()[5].re - 1.0).abs() < 1e-15);
        assert_eq!(s.dims().local(), &[2, 3]);
    }

    #[test]
    fn qutrit_ghz_layout() {
        let s = qutrit_ghz::<f64>(2, 0.0, 0.4).unwrap();
        assert!((s.amplitudes()[8].re - 1.0).abs() < 1e-15);
        let s = qutrit_ghz::<f64>(3, PI / 2.0, PI / 2.0).unwrap();
        assert!((s.amplitudes()[13].re - 1.0).abs() < 1e-15);
        assert!(qutrit_ghz::<f64>(1, 0.1, 0.1).is_err());
    }

    #[test]
    fn label_builds_and_rejects_nan() {
        let s: StateVector = FamilyLabel::Hybrid23 { theta: 0.2 }.build().unwrap();
        assert_eq!(s, hybrid_qubit_qutrit(0.2).unwrap());
        assert!(FamilyLabel::Brs { m: 3, phi: f64::NAN }.build::<f64>().is_err());
    }
}
