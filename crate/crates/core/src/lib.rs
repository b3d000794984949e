//! Entanglement distance for pure and mixed states of hybrid multi-qudit
//! systems.
//!
//! Everything is generic over the real scalar (`f32` or `f64`) through
//! [`Real`]; the aliases at the bottom of this file fix the common choices.
//!
//! ```
//! use qudit_entanglement::{entanglement_pure, ghzls};
//! let ghz = ghzls::<f64>(3, std::f64::consts::FRAC_PI_4, 0.0).unwrap();
//! let e = entanglement_pure(&ghz).unwrap();
//! assert!((e.e - 3.0).abs() < 1e-12);
//! ```

pub mod eig;
pub mod error;
pub mod families;
pub mod generators;
pub mod measure;
pub mod random;
pub mod roof;
pub mod scalar;
pub mod tensor;

pub use eig::{hermitian_eig, hermitian_eigenvalues, HermitianSpectrum};
pub use error::{Error, Result};
pub use families::{
    brs, brs_eigenvalue, brs_pair_count, ghzls, hybrid_qubit_qutrit, qutrit_ghz, three_qubit,
    FamilyLabel,
};
pub use generators::{
    casimir_value, gellmann, generator_index, max_generator_eigenvalue, purity_sum_value,
    verify_identities, GeneratorKind, GeneratorSet, IdentityReport,
};
pub use measure::{
    bloch_vector, brs_w_vectors, covariance_matrix, distance_bound_check, em_eigenvalues,
    entanglement_metric, entanglement_metric_with, entanglement_pure, entropy_of, fs_metric,
    generator_expectations, max_entanglement, trace_min_directions, von_neumann_entropy,
    DirectionSet, DistanceBoundReport, EntanglementResult, FsMetric, LocalCovariance,
};
pub use roof::{
    decomposition_from_isometry, minimize_roof, roof_objective, Decomposition, DensityMatrix,
    Isometry, RoofConfig, RoofResult,
};
pub use scalar::{Cplx, Real};
pub use tensor::{apply_local, embed_local, inner, kron, partial_trace, DenseOperator, Dims, StateVector};

pub type State64 = StateVector<f64>;
pub type State32 = StateVector<f32>;
pub type Operator64 = DenseOperator<f64>;
pub type Operator32 = DenseOperator<f32>;
pub type Spectrum64 = HermitianSpectrum<f64>;
pub type Generators64 = GeneratorSet<f64>;
pub type Density64 = DensityMatrix<f64>;
pub type Metric64 = FsMetric<f64>;
pub type Metric32 = FsMetric<f32>;
pub type Entanglement64 = EntanglementResult<f64>;
pub type Roof64 = RoofResult<f64>;
