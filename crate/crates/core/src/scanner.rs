//! Trial-factor sweeps and a complete factorization driver built on them.

use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{is_exact_factor, FactorizationTarget};
use crate::methods::{simulate, Method, MethodParams, SignalSample};

pub const DEFAULT_THRESHOLD: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    params: MethodParams,
    j_min: u64,
    j_max: u64,
    m: u64,
    threshold: f64,
}

impl ScanConfig {
    pub fn new(params: MethodParams, j_min: u64, j_max: u64, m: u64) -> Result<Self> {
        if j_min < 2 || j_min > j_max {
            return Err(Error::InvalidRange {
                min: j_min,
                max: j_max,
            });
        }
        Ok(ScanConfig {
            params,
            j_min,
            j_max,
            m,
            threshold: DEFAULT_THRESHOLD,
        })
    }

    pub fn with_threshold(mut self, threshold: f64) -> Result<Self> {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::InvalidThreshold(threshold));
        }
        self.threshold = threshold;
        Ok(self)
    }

    pub fn with_range(self, j_min: u64, j_max: u64) -> Result<Self> {
        ScanConfig::new(self.params, j_min, j_max, self.m)?.with_threshold(self.threshold)
    }

    pub fn method(&self) -> Method {
        self.params.method()
    }

    pub fn params(&self) -> &MethodParams {
        &self.params
    }

    pub fn j_min(&self) -> u64 {
        self.j_min
    }

    pub fn j_max(&self) -> u64 {
        self.j_max
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn trial_count(&self) -> u64 {
        self.j_max - self.j_min + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub j: u64,
    /// `None` when the simulation for this `j` failed; see `error`.
    pub normalized: Option<f64>,
    pub raw_transverse: Option<Complex64>,
    pub classified: bool,
    /// Exact divisibility, kept for auditing only.
    pub arithmetic_check: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMetadata {
    pub n: u64,
    pub exponent: u32,
    pub method: Method,
    pub m: u64,
    pub j_min: u64,
    pub j_max: u64,
    pub threshold: f64,
    pub params: MethodParams,
    /// Seconds since the Unix epoch at the start of the scan.
    pub timestamp: Option<u64>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub metadata: ScanMetadata,
    pub records: Vec<ScanRecord>,
}

impl ScanResult {
    /// Trial factors whose signal crossed the threshold.
    pub fn classified(&self) -> Vec<u64> {
        self.records
            .iter()
            .filter(|r| r.classified)
            .map(|r| r.j)
            .collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &ScanRecord> {
        self.records.iter().filter(|r| r.error.is_some())
    }

    pub fn strip_timestamp(mut self) -> Self {
        self.metadata.timestamp = None;
        self
    }
}

pub fn classify(sample: &SignalSample, threshold: f64) -> bool {
    sample.normalized >= threshold
}

fn evaluate(target: &FactorizationTarget, cfg: &ScanConfig, j: u64) -> ScanRecord {
    let arithmetic_check = is_exact_factor(target.n(), j);
    match simulate(target, j, cfg.m, &cfg.params) {
        Ok(sample) => ScanRecord {
            j,
            normalized: Some(sample.normalized),
            raw_transverse: Some(sample.raw_transverse),
            classified: classify(&sample, cfg.threshold),
            arithmetic_check,
            error: None,
        },
        Err(e) => ScanRecord {
            j,
            normalized: None,
            raw_transverse: None,
            classified: false,
            arithmetic_check,
            error: Some(e.to_string()),
        },
    }
}

/// Sweeps every `j` in the configured range on the global rayon pool.
pub fn scan(target: &FactorizationTarget, cfg: &ScanConfig) -> ScanResult {
    scan_with_jobs(target, cfg, None)
}

/// Like [`scan`], but with at most `jobs` worker threads. Records come back in
/// ascending `j` whatever the thread count.
pub fn scan_with_jobs(
    target: &FactorizationTarget,
    cfg: &ScanConfig,
    jobs: Option<usize>,
) -> ScanResult {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .ok()
        .map(|d| d.as_secs());

    let run = || -> Vec<ScanRecord> {
        (cfg.j_min..=cfg.j_max)
            .into_par_iter()
            .map(|j| evaluate(target, cfg, j))
            .collect()
    };
    let records = match jobs.map(|n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
    }) {
        Some(Ok(pool)) => pool.install(run),
        _ => run(),
    };

    let warnings = match &cfg.params {
        MethodParams::Differential(p) => p.small_angle_warning(cfg.m).into_iter().collect(),
        MethodParams::Spatial(_) => Vec::new(),
    };

    ScanResult {
        metadata: ScanMetadata {
            n: target.n(),
            exponent: target.exponent(),
            method: cfg.method(),
            m: cfg.m,
            j_min: cfg.j_min,
            j_max: cfg.j_max,
            threshold: cfg.threshold,
            params: cfg.params,
            timestamp,
            warnings,
        },
        records,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    /// No trial factor up to its square root was classified.
    Prime,
    /// The last scan had failed or contradictory entries, so primality was not
    /// established by the signal.
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub value: u64,
    pub multiplicity: u32,
    pub kind: FactorKind,
}

/// Repeatedly scans `2..=isqrt(n)` for the current cofactor, divides out the
/// smallest classified trial factor that also divides exactly, and continues
/// on the quotient. The method, M, and threshold come from `template`; its
/// range is ignored.
pub fn full_factorize(target: &FactorizationTarget, template: &ScanConfig) -> Vec<Factor> {
    full_factorize_with_jobs(target, template, None)
}

pub fn full_factorize_with_jobs(
    target: &FactorizationTarget,
    template: &ScanConfig,
    jobs: Option<usize>,
) -> Vec<Factor> {
    let mut factors = Vec::new();
    let mut rest = target.n();
    while rest > 1 {
        let root = rest.isqrt();
        if root < 2 {
            factors.push(Factor {
                value: rest,
                multiplicity: 1,
                kind: FactorKind::Prime,
            });
            break;
        }
        let current = target.with_n(rest);
        let cfg = template
            .with_range(2, root)
            .expect("2 <= isqrt(rest) and the template was already validated");
        let result = scan_with_jobs(&current, &cfg, jobs);
        let hit = result
            .records
            .iter()
            .find(|r| r.classified && is_exact_factor(rest, r.j));
        match hit {
            Some(record) => {
                let mut multiplicity = 0;
                while rest.is_multiple_of(record.j) {
                    rest /= record.j;
                    multiplicity += 1;
                }
                factors.push(Factor {
                    value: record.j,
                    multiplicity,
                    kind: FactorKind::Prime,
                });
            }
            None => {
                let suspicious = result
                    .records
                    .iter()
                    .any(|r| r.error.is_some() || (r.arithmetic_check && !r.classified));
                factors.push(Factor {
                    value: rest,
                    multiplicity: 1,
                    kind: if suspicious {
                        FactorKind::Unresolved
                    } else {
                        FactorKind::Prime
                    },
                });
                break;
            }
        }
    }
    factors
}
