//! Forward model and estimator for quantum process tomography of a coupled
//! excitonic dimer probed by two-color photon-echo spectroscopy.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. All IO, configuration and parallel drivers live in the
//! `exciton-qpt` companion crate.
//!
//! Layout:
//!
//! * [`dimer`]: site Hamiltonian, exciton basis, disordered ensembles.
//! * [`pulse`]: frequency-selectivity coefficients, the two-waveform toolbox
//!   and the pulse-overlap factor.
//! * [`process`]: the process matrix χ(T) and its CPTP predicates.
//! * [`dynamics`]: secular Redfield ground truth and optical-coherence
//!   propagators.
//! * [`signal`]: pathway polarizations, isotropic averaging and the sixteen
//!   signals of the experiment.
//! * [`reconstruct`]: design matrix, conditioning diagnostics and
//!   PSD-constrained least-squares inversion.

#![cfg_attr(not(feature = "std"), no_std)]
// NaN-rejecting checks are written as `!(x > 0.0)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod dimer;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod process;
pub mod pulse;
pub mod reconstruct;
pub mod signal;
pub mod special;
pub mod units;

pub use error::{Error, GeometryHint, Result};

/// Complex double used throughout.
pub type C64 = num_complex::Complex64;

/// Cartesian 3-vector (transition dipoles, field polarizations).
pub type Vec3 = nalgebra::Vector3<f64>;

pub use dimer::{
    exciton_transform, sample_disordered_ensemble, DimerParams, DipoleGeometry, Exciton, ExcitonBasis,
};
pub use dynamics::{coherence_propagator, redfield_uphill_rate, true_process_matrix, BathParams};
pub use process::{Level, Pair, ProcessMatrix};
pub use pulse::{coefficient, overlap_factor, toolbox_coefficients, PulseSpec, PulseToolbox};
pub use reconstruct::{
    assemble_design_matrix, condition_number, leakage_report, reconstruct_chi, relative_error,
    DesignMatrix, ReconstructionResult, SolverOptions,
};
pub use signal::{
    ensemble_noisy_signals, isotropic_average_weight, pathway_polarization,
    synthesize_signal_set, EnsembleSpec, ExperimentConfig, SignalSet, Word,
};
