use std::ffi::{CStr, CString};
use std::ptr;

use dncoupling_ffi::*;

fn last_error() -> String {
    let mut needed = 0usize;
    unsafe { dnc_last_error_message(ptr::null_mut(), 0, &mut needed) };
    let mut buf = vec![0u8; needed];
    let rc = unsafe { dnc_last_error_message(buf.as_mut_ptr().cast(), buf.len(), &mut needed) };
    assert_eq!(rc, DNC_OK);
    CStr::from_bytes_with_nul(&buf).unwrap().to_str().unwrap().to_owned()
}

fn inputs(dt: f64, dx1: f64, r: f64, m1: &str, m2: &str) -> Result<*mut DncRateInputs, i32> {
    let (a, b) = (CString::new(m1).unwrap(), CString::new(m2).unwrap());
    let mut h = ptr::null_mut();
    match unsafe { dnc_rate_inputs_new(dt, dx1, r, a.as_ptr(), b.as_ptr(), &mut h) } {
        DNC_OK => Ok(h),
        code => Err(code),
    }
}

#[test]
fn rate_report_through_handle() {
    let h = inputs(40.0 / 39.0, 1.0 / 1100.0, 100.0, "air", "steel").unwrap();
    let mut s = 0.0;
    let mut rep = DncRateReport::default();
    unsafe {
        assert_eq!(dnc_sigma_exact(h, &mut s), DNC_OK);
        assert_eq!(dnc_rate_report(h, &mut rep), DNC_OK);
    }
    assert_eq!(s, rep.sigma_exact);
    assert!((rep.sigma_exact / rep.sigma_schur - 1.0).abs() < 1e-10);
    assert!((rep.delta_r - 100.0 * 0.0243 / 48.9).abs() < 1e-15);

    let (mut rate, mut conv) = (0.0, -1);
    unsafe { assert_eq!(dnc_observed_rate_1d(h, 1e-10, 100, &mut rate, &mut conv), DNC_OK) };
    assert_eq!(conv, 1);
    assert!((rate / s - 1.0).abs() < 1e-6);
    unsafe { dnc_rate_inputs_free(h) };
}

#[test]
fn custom_inputs_match_presets() {
    let mut h = ptr::null_mut();
    let rc = unsafe {
        dnc_rate_inputs_new_custom(1.0, 19, 0.05, 19, 0.05, 0.0243, 1.293, 1005.0, 48.9, 7836.0, 443.0, &mut h)
    };
    assert_eq!(rc, DNC_OK);
    let g = inputs(1.0, 0.05, 1.0, "air", "steel").unwrap();
    let (mut a, mut b) = (0.0, 0.0);
    unsafe {
        dnc_sigma_exact(h, &mut a);
        dnc_sigma_exact(g, &mut b);
        dnc_rate_inputs_free(h);
        dnc_rate_inputs_free(g);
    }
    assert_eq!(a, b);
}

#[test]
fn error_codes_and_messages() {
    assert_eq!(inputs(1.0, 0.05, 1.0, "air", "lava").unwrap_err(), DNC_ERR_UNKNOWN_MATERIAL);
    assert!(last_error().contains("lava"));
    assert_eq!(inputs(-1.0, 0.05, 1.0, "air", "steel").unwrap_err(), DNC_ERR_DOMAIN);
    assert_eq!(inputs(1.0, 0.3, 1.0, "air", "steel").unwrap_err(), DNC_ERR_DOMAIN);

    let m = CString::new("air").unwrap();
    let rc = unsafe { dnc_rate_inputs_new(1.0, 0.05, 1.0, m.as_ptr(), ptr::null(), &mut ptr::null_mut()) };
    assert_eq!(rc, DNC_ERR_NULL);
    assert_eq!(unsafe { dnc_sigma_exact(ptr::null(), &mut 0.0) }, DNC_ERR_NULL);
    unsafe {
        dnc_rate_inputs_free(ptr::null_mut());
        dnc_sweep_free(ptr::null_mut());
    }
}

#[test]
fn sweep_round_trip() {
    let spec = CString::new("var = dt\nvalues = 0.5, 1, 2\ndx1 = 1/20\nmodes = formula, observed_1d\n").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { dnc_sweep_run(spec.as_ptr(), &mut t) }, DNC_OK);
    let (mut rows, mut errs) = (0usize, -1);
    let mut v = [0.0; 2];
    unsafe {
        dnc_sweep_rows(t, &mut rows);
        dnc_sweep_has_errors(t, &mut errs);
        dnc_sweep_value(t, 1, 0, &mut v[0]);
        dnc_sweep_value(t, 1, 1, &mut v[1]);
        assert_eq!(dnc_sweep_value(t, 3, 0, &mut 0.0), DNC_ERR_DIMENSION);
    }
    assert_eq!((rows, errs), (3, 0));
    assert!((v[1] / v[0] - 1.0).abs() < 1e-6);

    let mut needed = 0usize;
    let mut small = [0i8; 4];
    let rc = unsafe { dnc_sweep_csv(t, small.as_mut_ptr().cast(), small.len(), &mut needed) };
    assert_eq!(rc, DNC_ERR_BUFFER);
    let mut buf = vec![0u8; needed];
    assert_eq!(unsafe { dnc_sweep_csv(t, buf.as_mut_ptr().cast(), buf.len(), &mut needed) }, DNC_OK);
    let csv = CStr::from_bytes_with_nul(&buf).unwrap().to_str().unwrap();
    assert!(csv.contains("dt,formula,observed_1d,observed_1d_status"));
    unsafe { dnc_sweep_free(t) };

    let bad = CString::new("var = dt\nvalues = 2, 1\ndx1 = 1/20\n").unwrap();
    assert_eq!(unsafe { dnc_sweep_run(bad.as_ptr(), &mut t) }, DNC_ERR_PARSE);
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/dncoupling.h")).unwrap();
    for name in [
        "dnc_version",
        "dnc_last_error_message",
        "dnc_rate_inputs_new",
        "dnc_rate_inputs_new_custom",
        "dnc_rate_inputs_free",
        "dnc_sigma_exact",
        "dnc_rate_report",
        "dnc_observed_rate_1d",
        "dnc_sweep_run",
        "dnc_sweep_rows",
        "dnc_sweep_value",
        "dnc_sweep_has_errors",
        "dnc_sweep_csv",
        "dnc_sweep_free",
        "typedef struct DncRateInputs DncRateInputs",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let v = unsafe { CStr::from_ptr(dnc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
