use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use gauss_nmr_ffi::*;

fn last_error() -> String {
    let p = gn_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn spatial_cfg() -> GnScanConfig {
    GnScanConfig {
        method: GN_METHOD_SPATIAL,
        j_min: 120,
        j_max: 140,
        m: 12,
        ..gn_scan_config_default()
    }
}

#[test]
fn gauss_sum_through_the_abi() {
    let mut g = GnGaussSum::default();
    assert_eq!(
        unsafe { gn_gauss_sum(52_882_363, 2, 67, 15, &mut g) },
        GnStatus::Ok
    );
    assert_eq!((g.re, g.im, g.magnitude), (1.0, 0.0, 1.0));

    assert_eq!(
        unsafe { gn_gauss_sum(1, 2, 3, 4, &mut g) },
        GnStatus::InvalidArgument
    );
    assert!(last_error().contains("at least 2"));
    assert_eq!(
        unsafe { gn_gauss_sum(15, 2, 3, 4, ptr::null_mut()) },
        GnStatus::NullPointer
    );
}

#[test]
fn simulate_single_trial_factor() {
    let mut s = GnSample::default();
    let cfg = gn_scan_config_default();
    assert_eq!(
        unsafe { gn_simulate(16637, &cfg, 127, &mut s) },
        GnStatus::Ok
    );
    assert_eq!(s.normalized, 1.0);

    let bad = GnScanConfig {
        theta: std::f64::consts::PI / 13.0,
        m: 12,
        ..cfg
    };
    assert_eq!(
        unsafe { gn_simulate(16637, &bad, 129, &mut s) },
        GnStatus::ZeroReference
    );

    let unknown = GnScanConfig { method: 7, ..cfg };
    assert_eq!(
        unsafe { gn_simulate(16637, &unknown, 129, &mut s) },
        GnStatus::InvalidArgument
    );
    assert!(last_error().contains("unknown method"));
}

#[test]
fn scan_handle_lifecycle() {
    let cfg = spatial_cfg();
    let mut handle = ptr::null_mut();
    assert_eq!(unsafe { gn_scan(16637, &cfg, &mut handle) }, GnStatus::Ok);
    assert!(!handle.is_null());
    assert_eq!(unsafe { gn_scan_len(handle) }, 21);

    let mut classified = Vec::new();
    for i in 0..21 {
        let mut r = GnRecord::default();
        assert_eq!(unsafe { gn_scan_record(handle, i, &mut r) }, GnStatus::Ok);
        assert_eq!(r.j, 120 + i as u64);
        assert_eq!(r.arithmetic_check, 16637 % r.j == 0);
        if r.classified {
            classified.push(r.j);
        }
    }
    assert_eq!(classified, vec![127, 131]);

    let mut r = GnRecord::default();
    assert_eq!(
        unsafe { gn_scan_record(handle, 21, &mut r) },
        GnStatus::OutOfRange
    );

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let c_path = CString::new(csv.to_str().unwrap()).unwrap();
    assert_eq!(
        unsafe { gn_scan_write(handle, GN_FORMAT_CSV, c_path.as_ptr()) },
        GnStatus::Ok
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.contains("\n127,1.000000000,true,true\n"));
    assert_eq!(
        unsafe { gn_scan_write(handle, 9, c_path.as_ptr()) },
        GnStatus::InvalidArgument
    );

    let missing = CString::new("/nonexistent-dir/x.csv").unwrap();
    assert_eq!(
        unsafe { gn_scan_write(handle, GN_FORMAT_JSON, missing.as_ptr()) },
        GnStatus::Io
    );
    assert!(last_error().contains("/nonexistent-dir/x.csv"));

    unsafe { gn_scan_free(handle) };
    unsafe { gn_scan_free(ptr::null_mut()) };
    assert_eq!(unsafe { gn_scan_len(ptr::null()) }, 0);
}

#[test]
fn scan_rejects_bad_ranges() {
    let cfg = GnScanConfig {
        j_min: 10,
        j_max: 5,
        ..spatial_cfg()
    };
    let mut handle = ptr::null_mut();
    assert_eq!(
        unsafe { gn_scan(16637, &cfg, &mut handle) },
        GnStatus::InvalidArgument
    );
    assert!(handle.is_null());
    assert!(last_error().contains("j_min"));
}

#[test]
fn factorization_handle() {
    let cfg = gn_scan_config_default();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { gn_factorize(52_882_363, &cfg, &mut f) },
        GnStatus::Ok
    );
    let n = unsafe { gn_factorization_len(f) };
    let factors: Vec<GnFactor> = (0..n)
        .map(|i| {
            let mut out = GnFactor::default();
            assert_eq!(
                unsafe { gn_factorization_get(f, i, &mut out) },
                GnStatus::Ok
            );
            out
        })
        .collect();
    let values: Vec<u64> = factors.iter().map(|f| f.value).collect();
    assert_eq!(values, vec![67, 79, 97, 103]);
    assert!(factors.iter().all(|f| f.prime && f.multiplicity == 1));
    unsafe { gn_factorization_free(f) };
}

#[test]
fn header_declares_the_api() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/gauss_nmr.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in [
        "gn_last_error",
        "gn_scan_config_default",
        "gn_gauss_sum",
        "gn_simulate",
        "gn_scan",
        "gn_scan_len",
        "gn_scan_record",
        "gn_scan_write",
        "gn_scan_free",
        "gn_factorize",
        "gn_factorization_len",
        "gn_factorization_get",
        "gn_factorization_free",
        "typedef struct GnScanResult GnScanResult",
        "GN_STATUS_ZERO_REFERENCE",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

/// Compiles the C smoke test against the generated header and static library.
#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libgauss_nmr_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
        .ok_or(())
}
