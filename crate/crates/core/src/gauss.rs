//! Truncated Gauss sums and the pulse phase schedules that encode them.
//!
//! For a number `N` and trial factor `j` the truncated sum is
//!
//! ```text
//! A(j) = 1/(M+1) * sum_{m=0}^{M} exp(i * 2π * m^e * N / j)
//! ```
//!
//! Only the fractional part of `m^e * N / j` matters, so every phase is kept
//! as an exact residue `r_m = m^e * N mod j` and converted to radians once.
//! Floating evaluation of `m^e * N / j` would lose the fractional part as soon
//! as the product exceeds 2^53.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the number of pulses (M + 1) in one schedule.
pub const DEFAULT_MAX_TERMS: u64 = 1_000_000;

/// The number being factored, plus the knobs that shape its phase schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationTarget {
    n: u64,
    exponent: u32,
    max_terms: u64,
}

impl FactorizationTarget {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::TargetTooSmall(n));
        }
        Ok(FactorizationTarget {
            n,
            exponent: 2,
            max_terms: DEFAULT_MAX_TERMS,
        })
    }

    pub fn with_exponent(mut self, exponent: u32) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::ZeroExponent);
        }
        self.exponent = exponent;
        Ok(self)
    }

    /// Overrides the sequence-length cap. A cap of zero rejects every schedule.
    pub fn with_max_terms(mut self, max_terms: u64) -> Self {
        self.max_terms = max_terms;
        self
    }

    /// Same exponent and cap, different number. `n` must be at least 2.
    pub(crate) fn with_n(&self, n: u64) -> Self {
        debug_assert!(n >= 2);
        FactorizationTarget { n, ..*self }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn max_terms(&self) -> u64 {
        self.max_terms
    }
}

/// Pulse phases `φ_m = 2π r_m / j` for `m = 0..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSchedule {
    j: u64,
    residues: Vec<u64>,
    phases: Vec<f64>,
}

impl PhaseSchedule {
    pub fn j(&self) -> u64 {
        self.j
    }

    /// Truncation number: one less than the number of pulses.
    pub fn m(&self) -> u64 {
        self.residues.len() as u64 - 1
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// Phases in radians, each in `[0, 2π)`.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// True when every pulse shares the zero phase, which happens exactly when
    /// the schedule belongs to a divisor of `N`.
    pub fn is_coherent(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussSumValue {
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
}

impl From<Complex64> for GaussSumValue {
    fn from(z: Complex64) -> Self {
        GaussSumValue {
            re: z.re,
            im: z.im,
            magnitude: z.norm(),
        }
    }
}

fn mul_mod(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u32, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// `m^e * n mod j` without ever forming the full product.
pub fn phase_residue(n: u64, m: u64, exponent: u32, j: u64) -> u64 {
    mul_mod(pow_mod(m, exponent, j), n % j, j)
}

pub fn phase_schedule(target: &FactorizationTarget, j: u64, m: u64) -> Result<PhaseSchedule> {
    if j == 0 {
        return Err(Error::ZeroTrialFactor);
    }
    let terms = m.saturating_add(1);
    if terms > target.max_terms {
        return Err(Error::SequenceTooLong {
            terms,
            cap: target.max_terms,
        });
    }
    let residues: Vec<u64> = (0..=m)
        .map(|k| phase_residue(target.n, k, target.exponent, j))
        .collect();
    let phases = residues
        .iter()
        .map(|&r| TAU * r as f64 / j as f64)
        .collect();
    Ok(PhaseSchedule {
        j,
        residues,
        phases,
    })
}

/// Direct summation of the `M + 1` unit phasors, normalized by `M + 1`.
pub fn gauss_sum_exact(target: &FactorizationTarget, j: u64, m: u64) -> Result<GaussSumValue> {
    let schedule = phase_schedule(target, j, m)?;
    let sum: Complex64 = schedule
        .phases()
        .iter()
        .map(|&phi| Complex64::from_polar(1.0, phi))
        .sum();
    Ok((sum / schedule.len() as f64).into())
}

pub fn is_exact_factor(n: u64, j: u64) -> bool {
    j != 0 && n.is_multiple_of(j)
}
