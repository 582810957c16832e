//! The two measurement schemes that turn a phase schedule into a signal.
//!
//! *Differential excitation* tips longitudinal magnetization with M+1 weak
//! pulses whose phases follow the schedule. For a divisor all pulses share one
//! axis and their small rotations add up; otherwise they largely cancel. The
//! transverse magnitude is normalized by a reference run with all phases zero.
//!
//! *Spatial averaging* dephases transverse magnetization with a gradient,
//! applies the pulse train with a total flip of π, and rephases with a second
//! gradient. Only a train that acts as a π rotation about an in-plane axis
//! (a divisor) refocuses every slice, so the slice average returns to full
//! amplitude.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{phase_schedule, FactorizationTarget};
use crate::spin::{apply, compose, pulse, z_rotation, BlochState, Rotation};

/// Reference magnitudes below this are treated as a vanishing reference.
pub const ZERO_REFERENCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Differential,
    Spatial,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Differential => "differential",
            Method::Spatial => "spatial",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifferentialParams {
    /// Per-pulse flip angle in radians.
    theta: f64,
    normalize: bool,
}

impl DifferentialParams {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() || theta <= 0.0 {
            return Err(Error::InvalidFlipAngle(theta));
        }
        Ok(DifferentialParams {
            theta,
            normalize: true,
        })
    }

    pub fn from_degrees(degrees: f64) -> Result<Self> {
        Self::new(degrees.to_radians())
    }

    pub fn with_normalize(mut self, normalize: bool) -> Self {
        self.normalize = normalize;
        self
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn normalize(&self) -> bool {
        self.normalize
    }

    /// Warning text when the total flip (M+1)θ leaves the small-angle regime
    /// in which the signal tracks the Gauss sum.
    pub fn small_angle_warning(&self, m: u64) -> Option<String> {
        let total = (m as f64 + 1.0) * self.theta;
        (total > FRAC_PI_4).then(|| {
            format!(
                "total flip angle (M+1)*theta = {:.4} rad exceeds pi/4; \
                 the signal no longer approximates the Gauss sum",
                total
            )
        })
    }
}

impl Default for DifferentialParams {
    fn default() -> Self {
        DifferentialParams {
            theta: 1f64.to_radians(),
            normalize: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpatialParams {
    n_slices: usize,
    windings: u32,
}

impl SpatialParams {
    pub fn new(n_slices: usize, windings: u32) -> Result<Self> {
        if n_slices < 2 {
            return Err(Error::TooFewSlices(n_slices));
        }
        if windings == 0 {
            return Err(Error::ZeroWindings);
        }
        if (windings as usize).is_multiple_of(n_slices) {
            return Err(Error::NoDephasing { n_slices, windings });
        }
        Ok(SpatialParams { n_slices, windings })
    }

    pub fn n_slices(&self) -> usize {
        self.n_slices
    }

    pub fn windings(&self) -> u32 {
        self.windings
    }

    /// Gradient phase of slice `k`: `2π · windings · k / n_slices`.
    pub fn slice_phase(&self, k: usize) -> f64 {
        TAU * self.windings as f64 * k as f64 / self.n_slices as f64
    }

    pub fn slice_phases(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_slices).map(|k| self.slice_phase(k))
    }

    /// Slice-averaged transverse magnetization right after the first gradient.
    pub fn dephased_signal(&self) -> Complex64 {
        let g = self
            .slice_phases()
            .fold(Complex64::new(0.0, 0.0), |acc, a| {
                acc + apply(&z_rotation(a), &BlochState::transverse_x()).transverse()
            });
        g / self.n_slices as f64
    }
}

impl Default for SpatialParams {
    fn default() -> Self {
        SpatialParams {
            n_slices: 256,
            windings: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum MethodParams {
    Differential(DifferentialParams),
    Spatial(SpatialParams),
}

impl MethodParams {
    pub fn method(&self) -> Method {
        match self {
            MethodParams::Differential(_) => Method::Differential,
            MethodParams::Spatial(_) => Method::Spatial,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalSample {
    pub j: u64,
    /// `<Ix> + i<Iy>` at the end of the sequence.
    pub raw_transverse: Complex64,
    pub normalized: f64,
}

fn cascade(theta: f64, phases: impl IntoIterator<Item = f64>) -> BlochState {
    phases
        .into_iter()
        .fold(BlochState::longitudinal(), |s, phi| {
            apply(&pulse(theta, phi), &s)
        })
}

/// Transverse magnetization after M+1 in-phase pulses of flip `theta`.
pub fn reference_signal(m: u64, theta: f64) -> Complex64 {
    cascade(theta, (0..=m).map(|_| 0.0)).transverse()
}

pub fn simulate_differential(
    target: &FactorizationTarget,
    j: u64,
    m: u64,
    params: &DifferentialParams,
) -> Result<SignalSample> {
    let schedule = phase_schedule(target, j, m)?;
    let raw = cascade(params.theta, schedule.phases().iter().copied()).transverse();
    let normalized = if params.normalize {
        let reference = reference_signal(m, params.theta).norm();
        if reference < ZERO_REFERENCE_TOLERANCE {
            return Err(Error::ZeroReference {
                m,
                theta: params.theta,
            });
        }
        raw.norm() / reference
    } else {
        raw.norm()
    };
    Ok(SignalSample {
        j,
        raw_transverse: raw,
        normalized,
    })
}

/// Flip angle per pulse in the spatial scheme: the train totals π.
pub fn spatial_flip_angle(m: u64) -> f64 {
    PI / (m as f64 + 1.0)
}

pub fn simulate_spatial(
    target: &FactorizationTarget,
    j: u64,
    m: u64,
    params: &SpatialParams,
) -> Result<SignalSample> {
    let schedule = phase_schedule(target, j, m)?;
    let theta = spatial_flip_angle(m);
    let pulses: Vec<Rotation> = schedule
        .phases()
        .iter()
        .map(|&phi| pulse(theta, phi))
        .collect();
    let train = compose(&pulses)?;
    let sum = params
        .slice_phases()
        .fold(Complex64::new(0.0, 0.0), |acc, alpha| {
            let gradient = z_rotation(alpha);
            let dephased = apply(&gradient, &BlochState::transverse_x());
            acc + apply(&gradient, &apply(&train, &dephased)).transverse()
        });
    let raw = sum / params.n_slices as f64;
    Ok(SignalSample {
        j,
        raw_transverse: raw,
        normalized: raw.norm(),
    })
}

pub fn simulate(
    target: &FactorizationTarget,
    j: u64,
    m: u64,
    params: &MethodParams,
) -> Result<SignalSample> {
    match params {
        MethodParams::Differential(p) => simulate_differential(target, j, m, p),
        MethodParams::Spatial(p) => simulate_spatial(target, j, m, p),
    }
}
