//! C ABI for gauss-nmr.
//!
//! Every fallible function returns a [`GnStatus`]. On failure a message is kept
//! in thread-local storage and can be read with [`gn_last_error`]. Scan and
//! factorization results are opaque handles that must be released with their
//! matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use gauss_nmr::output::{emit_plot_data, emit_results, OutputFormat};
use gauss_nmr::scanner::{full_factorize_with_jobs, scan_with_jobs, FactorKind};
use gauss_nmr::{
    gauss_sum_exact, simulate, DifferentialParams, Error, Factor, FactorizationTarget,
    MethodParams, ScanConfig, ScanResult, SpatialParams,
};

pub const GN_METHOD_DIFFERENTIAL: u32 = 0;
pub const GN_METHOD_SPATIAL: u32 = 1;

pub const GN_FORMAT_CSV: u32 = 0;
pub const GN_FORMAT_JSON: u32 = 1;
pub const GN_FORMAT_PLOT: u32 = 2;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The differential reference run has no transverse signal.
    ZeroReference = 3,
    Io = 4,
    OutOfRange = 5,
    Panic = 6,
}

/// Scan parameters. Fill with `gn_scan_config_default` and override fields.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GnScanConfig {
    /// `GN_METHOD_DIFFERENTIAL` or `GN_METHOD_SPATIAL`.
    pub method: u32,
    pub j_min: u64,
    pub j_max: u64,
    pub m: u64,
    pub threshold: f64,
    /// Per-pulse flip angle in radians (differential only).
    pub theta: f64,
    /// Whether differential signals are divided by the reference run.
    pub normalize: bool,
    /// Gradient slices (spatial only).
    pub n_slices: u32,
    pub windings: u32,
    pub exponent: u32,
    /// Worker threads; 0 uses the global pool.
    pub jobs: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GnGaussSum {
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GnSample {
    pub j: u64,
    pub raw_re: f64,
    pub raw_im: f64,
    pub normalized: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GnRecord {
    pub j: u64,
    /// NaN when the simulation failed for this trial factor.
    pub normalized: f64,
    pub raw_re: f64,
    pub raw_im: f64,
    pub classified: bool,
    pub arithmetic_check: bool,
    pub failed: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GnFactor {
    pub value: u64,
    pub multiplicity: u32,
    /// False when the scan could not establish primality.
    pub prime: bool,
}

/// Opaque scan result.
pub struct GnScanResult {
    inner: ScanResult,
}

/// Opaque factor list.
pub struct GnFactorization {
    factors: Vec<Factor>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = CString::new(message.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn fail(status: GnStatus, message: impl Into<String>) -> GnStatus {
    set_error(message);
    status
}

fn status_of(err: &Error) -> GnStatus {
    match err {
        Error::ZeroReference { .. } => GnStatus::ZeroReference,
        Error::Io { .. } => GnStatus::Io,
        _ => GnStatus::InvalidArgument,
    }
}

fn from_error(err: Error) -> GnStatus {
    fail(status_of(&err), err.to_string())
}

fn guard(f: impl FnOnce() -> GnStatus) -> GnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(GnStatus::Panic, "internal panic"),
    }
}

macro_rules! try_gn {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return from_error(e),
        }
    };
}

fn target(n: u64, exponent: u32) -> Result<FactorizationTarget, Error> {
    FactorizationTarget::new(n)?.with_exponent(exponent)
}

fn method_params(cfg: &GnScanConfig) -> Result<MethodParams, GnStatus> {
    match cfg.method {
        GN_METHOD_DIFFERENTIAL => DifferentialParams::new(cfg.theta)
            .map(|p| MethodParams::Differential(p.with_normalize(cfg.normalize)))
            .map_err(from_error),
        GN_METHOD_SPATIAL => SpatialParams::new(cfg.n_slices as usize, cfg.windings)
            .map(MethodParams::Spatial)
            .map_err(from_error),
        other => Err(fail(
            GnStatus::InvalidArgument,
            format!("unknown method {other}"),
        )),
    }
}

fn scan_config(cfg: &GnScanConfig) -> Result<ScanConfig, GnStatus> {
    let params = method_params(cfg)?;
    ScanConfig::new(params, cfg.j_min, cfg.j_max, cfg.m)
        .and_then(|c| c.with_threshold(cfg.threshold))
        .map_err(from_error)
}

fn jobs(cfg: &GnScanConfig) -> Option<usize> {
    (cfg.jobs > 0).then_some(cfg.jobs as usize)
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gn_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Differential method, M = 15, θ = 1°, j in [2, 2], threshold 0.7,
/// 256 slices, 1 winding, exponent 2.
#[no_mangle]
pub extern "C" fn gn_scan_config_default() -> GnScanConfig {
    GnScanConfig {
        method: GN_METHOD_DIFFERENTIAL,
        j_min: 2,
        j_max: 2,
        m: 15,
        threshold: gauss_nmr::scanner::DEFAULT_THRESHOLD,
        theta: DifferentialParams::default().theta(),
        normalize: true,
        n_slices: SpatialParams::default().n_slices() as u32,
        windings: SpatialParams::default().windings(),
        exponent: 2,
        jobs: 0,
    }
}

/// # Safety
/// `out` must be null or point to writable memory for one `GnGaussSum`.
#[no_mangle]
pub unsafe extern "C" fn gn_gauss_sum(
    n: u64,
    exponent: u32,
    j: u64,
    m: u64,
    out: *mut GnGaussSum,
) -> GnStatus {
    guard(|| {
        if out.is_null() {
            return fail(GnStatus::NullPointer, "out is null");
        }
        let t = try_gn!(target(n, exponent));
        let g = try_gn!(gauss_sum_exact(&t, j, m));
        *out = GnGaussSum {
            re: g.re,
            im: g.im,
            magnitude: g.magnitude,
        };
        GnStatus::Ok
    })
}

/// Simulates one trial factor with the method in `cfg`; the range fields of
/// `cfg` are ignored.
///
/// # Safety
/// `cfg` must point to a valid `GnScanConfig`; `out` to writable memory for
/// one `GnSample`.
#[no_mangle]
pub unsafe extern "C" fn gn_simulate(
    n: u64,
    cfg: *const GnScanConfig,
    j: u64,
    out: *mut GnSample,
) -> GnStatus {
    guard(|| {
        if cfg.is_null() || out.is_null() {
            return fail(GnStatus::NullPointer, "cfg or out is null");
        }
        let cfg = &*cfg;
        let params = match method_params(cfg) {
            Ok(p) => p,
            Err(status) => return status,
        };
        let t = try_gn!(target(n, cfg.exponent));
        let s = try_gn!(simulate(&t, j, cfg.m, &params));
        *out = GnSample {
            j: s.j,
            raw_re: s.raw_transverse.re,
            raw_im: s.raw_transverse.im,
            normalized: s.normalized,
        };
        GnStatus::Ok
    })
}

/// Runs a scan and hands back an owned result in `*out`.
///
/// # Safety
/// `cfg` must point to a valid `GnScanConfig`; `out` to a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gn_scan(
    n: u64,
    cfg: *const GnScanConfig,
    out: *mut *mut GnScanResult,
) -> GnStatus {
    guard(|| {
        if cfg.is_null() || out.is_null() {
            return fail(GnStatus::NullPointer, "cfg or out is null");
        }
        *out = ptr::null_mut();
        let cfg = &*cfg;
        let scan_cfg = match scan_config(cfg) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let t = try_gn!(target(n, cfg.exponent));
        let inner = scan_with_jobs(&t, &scan_cfg, jobs(cfg));
        *out = Box::into_raw(Box::new(GnScanResult { inner }));
        GnStatus::Ok
    })
}

/// Number of records, or 0 for a null handle.
///
/// # Safety
/// `result` must be null or a live handle from `gn_scan`.
#[no_mangle]
pub unsafe extern "C" fn gn_scan_len(result: *const GnScanResult) -> usize {
    result.as_ref().map_or(0, |r| r.inner.records.len())
}

/// # Safety
/// `result` must be a live handle from `gn_scan`; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gn_scan_record(
    result: *const GnScanResult,
    index: usize,
    out: *mut GnRecord,
) -> GnStatus {
    guard(|| {
        let (Some(result), false) = (result.as_ref(), out.is_null()) else {
            return fail(GnStatus::NullPointer, "result or out is null");
        };
        let Some(r) = result.inner.records.get(index) else {
            return fail(
                GnStatus::OutOfRange,
                format!("record {index} of {}", result.inner.records.len()),
            );
        };
        let raw = r.raw_transverse.unwrap_or_default();
        *out = GnRecord {
            j: r.j,
            normalized: r.normalized.unwrap_or(f64::NAN),
            raw_re: raw.re,
            raw_im: raw.im,
            classified: r.classified,
            arithmetic_check: r.arithmetic_check,
            failed: r.error.is_some(),
        };
        GnStatus::Ok
    })
}

/// Writes the result as CSV, JSON or plot data (`GN_FORMAT_*`) to `path`.
///
/// # Safety
/// `result` must be a live handle; `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn gn_scan_write(
    result: *const GnScanResult,
    format: u32,
    path: *const c_char,
) -> GnStatus {
    guard(|| {
        let Some(result) = result.as_ref() else {
            return fail(GnStatus::NullPointer, "result is null");
        };
        if path.is_null() {
            return fail(GnStatus::NullPointer, "path is null");
        }
        let Ok(path) = CStr::from_ptr(path).to_str() else {
            return fail(GnStatus::InvalidArgument, "path is not valid UTF-8");
        };
        let path = Path::new(path);
        let written = match format {
            GN_FORMAT_CSV => emit_results(&result.inner, OutputFormat::Csv, path),
            GN_FORMAT_JSON => emit_results(&result.inner, OutputFormat::Json, path),
            GN_FORMAT_PLOT => emit_plot_data(&result.inner, path),
            other => return fail(GnStatus::InvalidArgument, format!("unknown format {other}")),
        };
        try_gn!(written);
        GnStatus::Ok
    })
}

/// # Safety
/// `result` must be null or a handle from `gn_scan` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gn_scan_free(result: *mut GnScanResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Factors `n` completely. The range fields of `cfg` are ignored.
///
/// # Safety
/// `cfg` must point to a valid `GnScanConfig`; `out` to a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gn_factorize(
    n: u64,
    cfg: *const GnScanConfig,
    out: *mut *mut GnFactorization,
) -> GnStatus {
    guard(|| {
        if cfg.is_null() || out.is_null() {
            return fail(GnStatus::NullPointer, "cfg or out is null");
        }
        *out = ptr::null_mut();
        let cfg = &*cfg;
        let template = match scan_config(&GnScanConfig {
            j_min: 2,
            j_max: 2,
            ..*cfg
        }) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let t = try_gn!(target(n, cfg.exponent));
        let factors = full_factorize_with_jobs(&t, &template, jobs(cfg));
        *out = Box::into_raw(Box::new(GnFactorization { factors }));
        GnStatus::Ok
    })
}

/// # Safety
/// `f` must be null or a live handle from `gn_factorize`.
#[no_mangle]
pub unsafe extern "C" fn gn_factorization_len(f: *const GnFactorization) -> usize {
    f.as_ref().map_or(0, |f| f.factors.len())
}

/// # Safety
/// `f` must be a live handle from `gn_factorize`; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gn_factorization_get(
    f: *const GnFactorization,
    index: usize,
    out: *mut GnFactor,
) -> GnStatus {
    guard(|| {
        let (Some(f), false) = (f.as_ref(), out.is_null()) else {
            return fail(GnStatus::NullPointer, "factorization or out is null");
        };
        let Some(factor) = f.factors.get(index) else {
            return fail(
                GnStatus::OutOfRange,
                format!("factor {index} of {}", f.factors.len()),
            );
        };
        *out = GnFactor {
            value: factor.value,
            multiplicity: factor.multiplicity,
            prime: factor.kind == FactorKind::Prime,
        };
        GnStatus::Ok
    })
}

/// # Safety
/// `f` must be null or a handle from `gn_factorize` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gn_factorization_free(f: *mut GnFactorization) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}
