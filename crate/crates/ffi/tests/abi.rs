use std::ffi::{CStr, CString};
use std::ptr;

use spa_realign_ffi::*;

fn last_error() -> String {
    let p = sr_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn family(f: SrFamily, param: f64) -> *mut SrState {
    let mut state = ptr::null_mut();
    let status = unsafe { sr_state_from_family(f, param, 3, &mut state) };
    assert_eq!(status, SrStatus::Ok);
    assert!(!state.is_null());
    state
}

#[test]
fn isotropic_report() {
    let state = family(SrFamily::Isotropic, 0.9);
    let mut report = SrReport::default();
    let status = unsafe { sr_analyze(state, 0.5, 1e-9, &mut report) };
    assert_eq!(status, SrStatus::Ok);
    assert!(report.spa_r_entangled);
    assert!(report.realignment_entangled);
    assert_eq!(report.p, 0.5);
    assert!(report.trace_norm_spa_r > report.upper_bound);

    let (mut a, mut b) = (0, 0);
    assert_eq!(
        unsafe { sr_state_dims(state, &mut a, &mut b) },
        SrStatus::Ok
    );
    assert_eq!((a, b), (3, 3));
    unsafe { sr_state_free(state) };
}

#[test]
fn threshold_matches_library() {
    let state = family(SrFamily::RhoT, -0.5);
    let mut t = SrSpaThreshold::default();
    assert_eq!(unsafe { sr_spa_threshold(state, &mut t) }, SrStatus::Ok);
    let lib = spa_realign::spa::spa_threshold(&spa_realign::realign::realign(
        &spa_realign::states::rho_t(-0.5).unwrap(),
    ))
    .unwrap();
    assert_eq!(t.d, 2);
    assert_eq!(t.k, lib.k);
    assert_eq!(t.l, lib.l);
    assert!(!t.psd);
    unsafe { sr_state_free(state) };
}

#[test]
fn realignment_norm_of_maximally_entangled_qubits() {
    let h = 0.5;
    #[rustfmt::skip]
    let entries = [
        h, 0.0, 0.0, 0.0, 0.0, 0.0, h, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        h, 0.0, 0.0, 0.0, 0.0, 0.0, h, 0.0,
    ];
    let mut state = ptr::null_mut();
    let status =
        unsafe { sr_state_from_entries(2, 2, entries.as_ptr(), entries.len(), &mut state) };
    assert_eq!(status, SrStatus::Ok);
    let mut norm = 0.0;
    assert_eq!(
        unsafe { sr_realignment_norm(state, &mut norm) },
        SrStatus::Ok
    );
    assert!((norm - 2.0).abs() < 1e-12);
    unsafe { sr_state_free(state) };
}

#[test]
fn json_states() {
    let rho = spa_realign::states::rho_a(0.8).unwrap();
    let doc = CString::new(spa_realign::io::state_to_json(&rho)).unwrap();
    let mut state = ptr::null_mut();
    assert_eq!(
        unsafe { sr_state_from_json(doc.as_ptr(), &mut state) },
        SrStatus::Ok
    );
    let mut s = 0.0;
    assert_eq!(unsafe { sr_simulate_s(state, 0.5, &mut s) }, SrStatus::Ok);
    assert!(s.is_finite());
    unsafe { sr_state_free(state) };

    let bad = CString::new("{\"dims\": [2, 2]}").unwrap();
    let mut state = ptr::null_mut();
    assert_eq!(
        unsafe { sr_state_from_json(bad.as_ptr(), &mut state) },
        SrStatus::InvalidState
    );
    assert!(state.is_null());
    assert!(last_error().contains("state file"));
}

#[test]
fn invalid_inputs_report_status() {
    let mut state = ptr::null_mut();
    assert_eq!(
        unsafe { sr_state_from_family(SrFamily::RhoT, 0.9, 3, &mut state) },
        SrStatus::InvalidArgument
    );
    assert!(last_error().contains("outside the valid range"));

    let not_psd = [2.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0];
    assert_eq!(
        unsafe { sr_state_from_entries(1, 2, not_psd.as_ptr(), 8, &mut state) },
        SrStatus::InvalidState
    );
    assert_eq!(
        unsafe { sr_state_from_entries(1, 2, not_psd.as_ptr(), 6, &mut state) },
        SrStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { sr_state_from_entries(0, 2, not_psd.as_ptr(), 0, &mut state) },
        SrStatus::InvalidArgument
    );
}

#[test]
fn null_pointers_are_rejected() {
    let mut norm = 0.0;
    assert_eq!(
        unsafe { sr_realignment_norm(ptr::null(), &mut norm) },
        SrStatus::NullPointer
    );
    let state = family(SrFamily::RhoA, 0.8);
    assert_eq!(
        unsafe { sr_realignment_norm(state, ptr::null_mut()) },
        SrStatus::NullPointer
    );
    assert_eq!(
        unsafe { sr_state_from_family(SrFamily::RhoA, 0.8, 3, ptr::null_mut()) },
        SrStatus::NullPointer
    );
    unsafe {
        sr_state_free(state);
        sr_state_free(ptr::null_mut());
    }
}

#[test]
fn domain_and_range_errors() {
    // Tr R = 0 for the isotropic state at beta = -1/8.
    let state = family(SrFamily::Isotropic, -0.125);
    let mut t = SrSpaThreshold::default();
    assert_eq!(unsafe { sr_spa_threshold(state, &mut t) }, SrStatus::Domain);
    let mut report = SrReport::default();
    let other = family(SrFamily::RhoA, 0.8);
    assert_eq!(
        unsafe { sr_analyze(other, 1.5, 1e-9, &mut report) },
        SrStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { sr_analyze(other, 0.5, -1.0, &mut report) },
        SrStatus::InvalidArgument
    );
    unsafe {
        sr_state_free(state);
        sr_state_free(other);
    }
}

#[test]
fn moment_intervals() {
    let mut q = SrInterval {
        lower: f64::NAN,
        upper: f64::NAN,
        case_tag: SrCaseTag::Case1,
    };
    assert_eq!(
        unsafe { sr_m1_interval_quadratic(0.2, 2, 0.01, &mut q) },
        SrStatus::Ok
    );
    assert_eq!(q.case_tag, SrCaseTag::Quadratic);
    assert!((q.lower - 0.013668).abs() < 1e-6);
    assert!((q.upper - 0.146332).abs() < 1e-6);

    let mut c = q;
    assert_eq!(
        unsafe { sr_m1_case_bounds(0.2, 2, 0.001, &mut c) },
        SrStatus::Ok
    );
    assert_eq!(c.case_tag, SrCaseTag::Case2);
    assert!(c.lower <= c.upper);

    assert_eq!(
        unsafe { sr_m1_interval_quadratic(0.2, 2, 0.1, &mut q) },
        SrStatus::Estimation
    );
}

#[test]
fn status_names_and_version() {
    let name = unsafe { CStr::from_ptr(sr_status_str(SrStatus::Domain)) };
    assert_eq!(name.to_str().unwrap(), "outside SPA-R domain");
    let version = unsafe { CStr::from_ptr(sr_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn errors_are_per_thread() {
    let mut state = ptr::null_mut();
    unsafe { sr_state_from_family(SrFamily::RhoT, 5.0, 3, &mut state) };
    let here = last_error();
    std::thread::spawn(|| assert!(sr_last_error_message().is_null()))
        .join()
        .unwrap();
    assert_eq!(last_error(), here);
}
