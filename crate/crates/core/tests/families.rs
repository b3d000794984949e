mod common;

use common::*;
use qudit_entanglement::{
    bloch_vector, brs, brs_eigenvalue, brs_pair_count, brs_w_vectors, covariance_matrix,
    embed_local, entanglement_pure, ghzls, hybrid_qubit_qutrit, partial_trace, qutrit_ghz,
    three_qubit, trace_min_directions, von_neumann_entropy, DenseOperator, Dims, FamilyLabel,
    StateVector,
};
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `Π_μ (I + α Π₀^{μ+1} Π₁^μ)` built from embedded projectors.
fn entangler(m: usize, phi: f64) -> DenseOperator {
    let dims = qubits(m);
    let alpha = c(0.0, -phi).exp() - c(1.0, 0.0);
    let p0 = DenseOperator::from_real_diagonal(&[1.0, 0.0]);
    let p1 = DenseOperator::from_real_diagonal(&[0.0, 1.0]);
    let id = DenseOperator::identity(dims.total());
    let mut u = id.clone();
    for mu in 0..m - 1 {
        let pair = embed_local(&p0, mu + 1, &dims).unwrap().matmul(&embed_local(&p1, mu, &dims).unwrap()).unwrap();
        u = u.matmul(&id.add(&pair.scale(alpha)).unwrap()).unwrap();
    }
    u
}

#[test]
fn brs_matches_explicit_entangler() {
    for m in 2..=5 {
        let uniform = brs(m, 0.0).unwrap();
        for phi in [0.3, 1.7, PI, 4.0] {
            let u = entangler(m, phi);
            assert!(u.is_unitary(1e-12));
            let via_matrix = uniform.transform(&u).unwrap();
            let direct = brs(m, phi).unwrap();
            let diff: f64 = via_matrix
                .amplitudes()
                .iter()
                .zip(direct.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-12, "m {m} φ {phi}: {diff}");
        }
    }
}

#[test]
fn brs_eigenvalues_are_phases() {
    for n in 0..6 {
        for phi in [0.1f64, 1.0, 2.5, 6.0] {
            let l = brs_eigenvalue(n, phi);
            assert!((l.norm() - 1.0).abs() < 1e-12);
            assert!((l - c(0.0, -phi * n as f64).exp()).norm() < 1e-12);
        }
    }
    // counts "01" substrings reading the ket most-significant digit first
    assert_eq!(brs_pair_count(0b0110, 4), 1);
    assert_eq!(brs_pair_count(0b0101, 4), 2);
    assert_eq!(brs_pair_count(0b1111, 4), 0);
}

#[test]
fn brs_is_periodic_and_uniform_at_zero() {
    for m in 2..=6 {
        let a = brs(m, 0.9).unwrap();
        let b = brs(m, 0.9 + 2.0 * PI).unwrap();
        assert!((a.inner(&b).norm() - 1.0).abs() < 1e-12);
        let expect = (2f64).powf(-(m as f64) / 2.0);
        assert!(brs(m, 0.0).unwrap().amplitudes().iter().all(|z| (z - c(expect, 0.0)).norm() < 1e-14));
    }
}

#[test]
fn w_vectors_are_bloch_vectors() {
    let mut r = rng(3);
    for _ in 0..10 {
        let m = r.random_range(2..=5);
        let s: StateVector = qudit_entanglement::random::random_state(&qubits(m), &mut r).unwrap();
        let w = brs_w_vectors(&s).unwrap();
        for (mu, v) in w.iter().enumerate() {
            let b = bloch_vector(&s, mu).unwrap();
            for k in 0..3 {
                assert!((v[k] - b[k]).abs() < 1e-12);
            }
        }
    }
    let w = brs_w_vectors(&brs(4, 0.0).unwrap()).unwrap();
    let total: f64 = w.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>()).sum();
    assert!((total - 4.0).abs() < 1e-12);
}

#[test]
fn two_qubit_brs_directions() {
    for phi in [0.4f64, 1.3, 2.2, 5.0] {
        let dirs = trace_min_directions(&brs(2, phi).unwrap()).unwrap();
        let (s, co) = ((phi / 2.0).sin(), (phi / 2.0).cos());
        for (nu, v) in dirs.iter().enumerate() {
            let sign: f64 = if nu == 0 { -1.0 } else { 1.0 };
            let want = [co, sign * s, 0.0];
            let same = (0..3).all(|k| (v[k] - want[k]).abs() < 1e-10);
            let flipped = (0..3).all(|k| (v[k] + want[k]).abs() < 1e-10);
            assert!(same || flipped, "ν {nu}: {v:?}");
        }
    }
}

#[test]
fn three_qubit_third_direction() {
    for (gamma, tau) in [(0.3, 0.2), (1.0, 0.7), (0.5, 1.3)] {
        let dirs = trace_min_directions(&three_qubit(gamma, tau).unwrap()).unwrap();
        let raw = [(2.0f64 * gamma).sin() * (2.0f64 * tau).sin(), 0.0, (2.0f64 * gamma).cos()];
        let n = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        let v = dirs.get(2);
        for k in 0..3 {
            assert!((v[k] - raw[k] / n).abs() < 1e-10);
        }
    }
}

#[test]
fn three_qubit_separability_pattern() {
    for gamma in [0.0, PI / 2.0] {
        for tau in [0.0, PI / 2.0] {
            assert!(entanglement_pure(&three_qubit(gamma, tau).unwrap()).unwrap().e.abs() < 1e-12);
        }
    }
    let e = entanglement_pure(&three_qubit(0.4, PI / 4.0).unwrap()).unwrap().e;
    assert!(e > 0.0 && e / 3.0 < 1.0);
}

#[test]
fn hybrid_covariance_matrices() {
    for theta in [0.2f64, 0.7, 1.2] {
        let s = hybrid_qubit_qutrit(theta).unwrap();
        let (co, si) = (theta.cos().powi(2), theta.sin().powi(2));
        let c2 = (2.0 * theta).cos();
        let a0 = covariance_matrix(&s, 0).unwrap().a;
        let want0 = [
            [c(1.0, 0.0), c(0.0, c2), c(0.0, 0.0)],
            [c(0.0, -c2), c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(1.0 - c2 * c2, 0.0)],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((a0[(i, j)] - want0[i][j]).norm() < 1e-12, "A_0 ({i},{j})");
            }
        }
        let a1 = covariance_matrix(&s, 1).unwrap().a;
        let diag: Vec<f64> = (0..8).map(|i| a1[(i, i)].re).collect();
        let ordered = [co, co, 1.0, 1.0, si, si, co * si, 3.0 * co * si];
        for (x, y) in diag.iter().zip(ordered) {
            assert!((x - y).abs() < 1e-12);
        }
        let mut listed = vec![co, co, co * si, si, si, 3.0 * co * si, 1.0, 1.0];
        let mut got = diag.clone();
        listed.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        assert!(listed.iter().zip(&got).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}

#[test]
fn reduced_states_and_entropies() {
    let theta = 0.6f64;
    let s = hybrid_qubit_qutrit(theta).unwrap();
    let q = partial_trace(&s, &[1]).unwrap();
    let want = [theta.cos().powi(2), 0.0, theta.sin().powi(2)];
    for i in 0..3 {
        for j in 0..3 {
            let w = if i == j { want[i] } else { 0.0 };
            assert!((q[(i, j)] - c(w, 0.0)).norm() < 1e-12);
        }
    }
    let (th, ph) = (0.9f64, 0.4f64);
    let probs = [(th.sin() * ph.cos()).powi(2), (th.sin() * ph.sin()).powi(2), th.cos().powi(2)];
    let expect: f64 = probs.iter().map(|p| -p * p.log2()).sum();
    let got = von_neumann_entropy(&qutrit_ghz(2, th, ph).unwrap(), &[0]).unwrap();
    assert!((got - expect).abs() < 1e-12);
}

#[test]
fn hybrid_entropy_and_measure_share_extrema() {
    let thetas: Vec<f64> = (0..=100).map(|i| PI / 2.0 * i as f64 / 100.0).collect();
    let e: Vec<f64> = thetas.iter().map(|&t| entanglement_pure(&hybrid_qubit_qutrit(t).unwrap()).unwrap().e).collect();
    let h: Vec<f64> = thetas.iter().map(|&t| von_neumann_entropy(&hybrid_qubit_qutrit(t).unwrap(), &[0]).unwrap()).collect();
    let argmax = |v: &[f64]| v.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert_eq!(argmax(&e), 50);
    assert_eq!(argmax(&h), 50);
    for i in [0, 100] {
        assert!(e[i].abs() < 1e-12 && h[i].abs() < 1e-12);
    }
}

#[test]
fn constructors_normalize_over_random_draws() {
    let mut r = rng(77);
    for _ in 0..1000 {
        let (a, b) = (r.random_range(-10.0..10.0), r.random_range(-10.0..10.0));
        let m = r.random_range(2..=5);
        for s in [
            brs(m, a).unwrap(),
            ghzls(m, a, b).unwrap(),
            three_qubit(a, b).unwrap(),
            hybrid_qubit_qutrit(a).unwrap(),
            qutrit_ghz(2, a, b).unwrap(),
        ] {
            assert!(s.norm_deviation() < 1e-12);
        }
    }
}

#[test]
fn ghzls_phase_is_irrelevant() {
    for m in 2..=5 {
        let base: f64 = entanglement_pure(&ghzls(m, 0.37, 0.0).unwrap()).unwrap().e;
        for phase in [0.5, 2.0, -3.0] {
            let e = entanglement_pure(&ghzls(m, 0.37, phase).unwrap()).unwrap().e;
            assert!((e - base).abs() < 1e-12);
        }
    }
}

#[test]
fn constructors_reject_bad_parameters() {
    assert!(ghzls::<f64>(1, 0.1, 0.0).is_err());
    assert!(qutrit_ghz::<f64>(1, 0.1, 0.0).is_err());
    assert!(brs::<f64>(1, 0.1).is_err());
    assert!(FamilyLabel::Hybrid23 { theta: f64::NAN }.build::<f64>().is_err());
    let s = FamilyLabel::Ghzls { m: 3, theta: PI / 4.0, phase: 0.0 }.build::<f64>().unwrap();
    assert_eq!(s.dims(), &Dims::qubits(3).unwrap());
}
