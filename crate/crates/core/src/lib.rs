//! Greedy sparse sensor selection for linear reduced-order models.
//!
//! Given a candidate matrix `U` (one row per candidate location, one column
//! per latent mode), the selectors pick `p` rows that make the least-squares
//! reconstruction of the latent state well conditioned, scored by the
//! determinant (D), the trace of the inverse (A) or the smallest eigenvalue
//! (E) of the Fisher information.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*F64` aliases
//! cover the common case.
//!
//! ```
//! use greedy_sensors::{select_dg, CandidateMatrixF64};
//!
//! let u = CandidateMatrixF64::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.5, 0.5]).unwrap();
//! let picked = select_dg(&u, 2).unwrap();
//! assert_eq!(picked.indices, vec![0, 1]);
//! ```

pub mod data;
mod error;
pub mod fisher;
pub mod linalg;
mod scalar;
pub mod select;
pub mod submod;

pub use error::{Error, ErrorClass, Result};
pub use fisher::{
    build_measurement, error_covariance, estimate, estimate_columns, fisher_info,
    observable_basis, observable_error_covariance, reconstruction_error, CandidateMatrix,
    FisherInfo, NoiseModel, Regime, SensorSet,
};
pub use scalar::Real;
pub use select::{
    select, select_ag, select_bruteforce, select_dg, select_eg, select_random, Criterion, Method,
    SelectOptions, SelectionResult,
};
pub use submod::{counterexample_matrix, counterexample_report, nemhauser_check, SetObjective};

pub type CandidateMatrixF64 = CandidateMatrix<f64>;
pub type SensorSetF64 = SensorSet<f64>;
pub type FisherInfoF64 = FisherInfo<f64>;
pub type SelectionResultF64 = SelectionResult<f64>;
pub type SnapshotDataF64 = data::SnapshotData<f64>;
pub type PodModelF64 = data::PodModel<f64>;

pub type CandidateMatrixF32 = CandidateMatrix<f32>;
pub type SelectionResultF32 = SelectionResult<f32>;
