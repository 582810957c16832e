//! Integer factorization by simulated NMR evaluation of truncated Gauss sums.
//!
//! A trial factor `j` of `N` is tested by programming the phases of a train of
//! RF pulses with `2π m² N / j`. When `j` divides `N` every phase is a multiple
//! of 2π and the pulses act coherently; otherwise they interfere away. Two
//! read-out schemes are simulated on a spin-1/2 Bloch vector:
//!
//! * [`methods::simulate_differential`]: weak pulses tip longitudinal
//!   magnetization, normalized against an all-zero-phase reference.
//! * [`methods::simulate_spatial`]: a gradient echo that only refocuses when
//!   the train adds up to a π rotation.
//!
//! [`scanner`] sweeps trial factors and drives a complete factorization, and
//! [`cli`] wraps it all in the `gauss-nmr` binary.

pub mod cli;
pub mod error;
pub mod gauss;
pub mod methods;
pub mod output;
pub mod scanner;
pub mod spin;

pub use error::{Error, Result};
pub use gauss::{
    gauss_sum_exact, is_exact_factor, phase_schedule, FactorizationTarget, GaussSumValue,
    PhaseSchedule,
};
pub use methods::{
    reference_signal, simulate, simulate_differential, simulate_spatial, DifferentialParams,
    Method, MethodParams, SignalSample, SpatialParams,
};
pub use scanner::{
    classify, full_factorize, scan, Factor, FactorKind, ScanConfig, ScanRecord, ScanResult,
};
pub use spin::{apply, compose, pulse, z_rotation, BlochState, Rotation};
