//! Biorthonormal eigensystems of diagonalizable non-Hermitian matrices,
//! pseudohermiticity certificates, antilinear symmetries with `T^2 = -1`,
//! and non-unitary time evolution.
//!
//! ```
//! use kramers::{kramers_test, ComplexMatrix, DEFAULT_TOL};
//!
//! let h = ComplexMatrix::real_diagonal(&[2.0, 2.0, -1.0, -1.0]).unwrap();
//! let report = kramers_test(&h, DEFAULT_TOL).unwrap();
//! assert!(report.pseudohermitian && report.all_even);
//! assert!(report.witness.is_some());
//! ```

pub mod cli;
pub mod error;
pub mod evolution;
pub mod matrix;
pub mod matrix_file;
pub mod model;
pub mod report;
pub mod spectral;
pub mod symmetry;

pub use error::{Error, Result};
pub use evolution::{
    evolution_operator, propagate, time_asymmetry, transition_probability, EvolutionOperator,
};
pub use matrix::{ComplexMatrix, C64};
pub use model::ModelParams;
pub use spectral::{
    biorthonormal_system, classify_spectrum, diagonalize, reconstruct, BiorthonormalSystem,
    SpectralConfig, SpectrumClassification, DEFAULT_COND_CEILING, DEFAULT_TOL,
};
pub use symmetry::{
    apply_antilinear, commutator_residual, construct_eta, construct_t, kramers_test,
    verify_pseudohermitian, AntilinearOperator, EtaOperator, KramersReport,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
