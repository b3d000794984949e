mod common;

use common::*;
use qudit_entanglement::random::{random_local_unitaries, random_state};
use qudit_entanglement::{
    entanglement_pure, ghzls, minimize_roof, DenseOperator, DensityMatrix, RoofConfig, StateVector,
};
use std::f64::consts::PI;

fn random_mixture(seed: u64, n: usize) -> DensityMatrix {
    let mut r = rng(seed);
    let dims = qubits(2);
    let states: Vec<StateVector> = (0..n).map(|_| random_state(&dims, &mut r).unwrap()).collect();
    let mut w: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64 * 0.37 + seed as f64).sin().abs()).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    DensityMatrix::mixture(&w, &states).unwrap()
}

fn werner(p: f64) -> DensityMatrix {
    let bell = ghzls(2, PI / 4.0, 0.0).unwrap();
    let noise = DenseOperator::identity(4).scale(num_complex::Complex64::new((1.0 - p) / 4.0, 0.0));
    let rho = bell.density().scale(num_complex::Complex64::new(p, 0.0)).add(&noise).unwrap();
    DensityMatrix::new(qubits(2), rho).unwrap()
}

#[test]
fn wootters_oracle_matches_pure_states() {
    let mut r = rng(1);
    for _ in 0..20 {
        let s = random_state(&qubits(2), &mut r).unwrap();
        let e = entanglement_pure(&s).unwrap().e;
        assert!((e - 2.0 * pure_concurrence(&s).powi(2)).abs() < 1e-12);
        let rho = DensityMatrix::from_pure(&s);
        assert!((two_qubit_roof(&rho) - e).abs() < 1e-9, "{} vs {e}", two_qubit_roof(&rho));
    }
}

#[test]
fn werner_states_reach_the_exact_roof() {
    for p in [0.2, 0.5, 0.7, 0.9] {
        let rho = werner(p);
        let exact = two_qubit_roof(&rho);
        let found = minimize_roof(&rho, &RoofConfig::default()).unwrap();
        assert!(found.value >= exact - 1e-9, "p {p}: {} below exact {exact}", found.value);
        assert!(found.value - exact < 1e-6, "p {p}: {} vs {exact}", found.value);
    }
}

#[test]
fn random_mixtures_reach_the_exact_roof() {
    for seed in 0..6 {
        let rho = random_mixture(seed, 2 + (seed as usize % 3));
        let exact = two_qubit_roof(&rho);
        let found = minimize_roof(&rho, &RoofConfig::default()).unwrap();
        assert!(found.value >= exact - 1e-9);
        assert!(found.value - exact < 1e-6, "seed {seed}: {} vs {exact}", found.value);
        assert!(found.decomposition.reconstruction_error(&rho).unwrap() < 1e-9);
    }
}

#[test]
fn rank_one_input_returns_the_pure_value() {
    let s: StateVector = ghzls(3, 0.4, 0.3).unwrap();
    let found = minimize_roof(&DensityMatrix::from_pure(&s), &RoofConfig::default()).unwrap();
    assert!((found.value - entanglement_pure(&s).unwrap().e).abs() < 1e-8);
    assert_eq!(found.rank, 1);
}

#[test]
fn product_mixture_is_unentangled() {
    let dims = qubits(2);
    let states: Vec<StateVector> = [0, 1, 3].iter().map(|&k| StateVector::basis(dims.clone(), k).unwrap()).collect();
    let rho = DensityMatrix::mixture(&[0.2, 0.3, 0.5], &states).unwrap();
    assert!(minimize_roof(&rho, &RoofConfig::default()).unwrap().value < 1e-6);
}

#[test]
fn local_unitary_invariance() {
    let rho = random_mixture(11, 3);
    let mut r = rng(12);
    let turned = rho.conjugate_local(&random_local_unitaries(rho.dims(), &mut r)).unwrap();
    let a = minimize_roof(&rho, &RoofConfig::default()).unwrap().value;
    let b = minimize_roof(&turned, &RoofConfig::default()).unwrap().value;
    assert!((a - b).abs() < 1e-5, "{a} vs {b}");
}

#[test]
fn convexity_on_a_mixing_line() {
    let a = werner(0.9);
    let b = random_mixture(3, 2);
    let cfg = RoofConfig::default();
    let ea = minimize_roof(&a, &cfg).unwrap().value;
    let eb = minimize_roof(&b, &cfg).unwrap().value;
    for alpha in [0.25, 0.5, 0.75] {
        let mix = DensityMatrix::convex_combination(alpha, &a, &b).unwrap();
        let em = minimize_roof(&mix, &cfg).unwrap().value;
        assert!(em <= alpha * ea + (1.0 - alpha) * eb + 1e-6);
    }
}

#[test]
fn seeded_runs_are_reproducible_and_monotone() {
    let rho = random_mixture(5, 3);
    let cfg = RoofConfig { seed: 42, restarts: 8, ..RoofConfig::default() };
    let a = minimize_roof(&rho, &cfg).unwrap();
    let b = minimize_roof(&rho, &cfg).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.restart_values, b.restart_values);
    assert!(a.best_so_far.windows(2).all(|w| w[1] <= w[0]));
    assert!(a.is_upper_bound());
}

#[test]
fn hybrid_mixed_state_is_bounded() {
    use qudit_entanglement::hybrid_qubit_qutrit;
    let a: StateVector = hybrid_qubit_qutrit(0.7).unwrap();
    let b = hybrid_qubit_qutrit(0.1).unwrap();
    let rho = DensityMatrix::mixture(&[0.6, 0.4], &[a.clone(), b.clone()]).unwrap();
    let found = minimize_roof(&rho, &RoofConfig { restarts: 8, ..RoofConfig::default() }).unwrap();
    let ea = entanglement_pure(&a).unwrap().e;
    let eb = entanglement_pure(&b).unwrap().e;
    assert!(found.value <= 0.6 * ea + 0.4 * eb + 1e-9);
    assert!(found.value >= 0.0);
}
