//! Closed-form oracles shared by the integration suites.
#![allow(dead_code)]

use num_complex::Complex64;
use qudit_entanglement::{hermitian_eig, DenseOperator, DensityMatrix, Dims, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `E` of `cos θ|0…0⟩ + e^{iφ} sin θ|1…1⟩`.
pub fn ghzls_e(m: usize, theta: f64) -> f64 {
    m as f64 * (2.0 * theta).sin().powi(2)
}

/// `E` of the two-qubit BRS state.
pub fn brs2_e(phi: f64) -> f64 {
    2.0 * (phi / 2.0).sin().powi(2)
}

/// `E` of the three-qubit BRS state.
pub fn brs3_e(phi: f64) -> f64 {
    let (s, c) = ((phi / 2.0).sin().powi(2), (phi / 2.0).cos().powi(2));
    s * (3.0 + c)
}

/// `sin θ cos φ|0…0⟩ + sin θ sin φ|1…1⟩ + cos θ|2…2⟩` on `m` qutrits.
pub fn qutrit_ghz_e(m: usize, theta: f64, phi: f64) -> f64 {
    let s2 = theta.sin().powi(2);
    m as f64 / 4.0 * s2 * (9.0 + 7.0 * (2.0 * theta).cos() - 2.0 * s2 * (4.0 * phi).cos())
}

/// `E` of the three-qubit `(γ, τ)` family.
pub fn three_qubit_e(gamma: f64, tau: f64) -> f64 {
    2.0 * (2.0 * tau).sin().powi(2) + 3.0 * (2.0 * gamma).sin().powi(2) * (2.0 * tau).cos().powi(2)
}

/// `E` of `cos θ|0,0⟩ + sin θ|1,2⟩` on a qubit ⊗ qutrit.
pub fn hybrid_e(theta: f64) -> f64 {
    2.0 * (2.0 * theta).sin().powi(2)
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn wootters_concurrence(rho: &DenseOperator) -> f64 {
    let sy = [[0.0, -1.0], [1.0, 0.0]];
    // σy ⊗ σy is real: entries (i,j) = sy[i1][j1] * sy[i0][j0] times i·i = −1
    let yy = DenseOperator::from_fn(4, |i, j| {
        Complex64::new(-(sy[i >> 1][j >> 1] * sy[i & 1][j & 1]), 0.0)
    });
    let conj = DenseOperator::from_fn(4, |i, j| rho[(i, j)].conj());
    let tilde = yy.matmul(&conj).unwrap().matmul(&yy).unwrap();
    let sp = hermitian_eig(rho).unwrap();
    let root = DenseOperator::from_fn(4, |i, j| {
        (0..4)
            .map(|k| {
                let l = sp.eigenvalues[k].max(0.0).sqrt();
                sp.eigenvectors[(i, k)] * sp.eigenvectors[(j, k)].conj() * l
            })
            .sum()
    });
    let r = root.matmul(&tilde).unwrap().matmul(&root).unwrap();
    let ev = hermitian_eig(&r).unwrap().eigenvalues;
    // round-off eigenvalues near 1e-16 would otherwise contribute 1e-8 roots
    let floor = 1e-12 * ev[0].abs().max(1.0);
    let mut l: Vec<f64> = ev.iter().map(|&x| if x > floor { x.sqrt() } else { 0.0 }).collect();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Exact two-qubit roof: `E(ψ) = 2 C(ψ)²` for pure states, and `2C²` is
/// convex-roof extensible through Wootters' formula.
pub fn two_qubit_roof(rho: &DensityMatrix) -> f64 {
    2.0 * wootters_concurrence(rho.matrix()).powi(2)
}

/// Pure two-qubit concurrence `2|a₀₀a₁₁ − a₀₁a₁₀|`.
pub fn pure_concurrence(s: &StateVector) -> f64 {
    let a = s.amplitudes();
    2.0 * (a[0] * a[3] - a[1] * a[2]).norm()
}

pub fn qubits(m: usize) -> Dims {
    Dims::qubits(m).unwrap()
}
