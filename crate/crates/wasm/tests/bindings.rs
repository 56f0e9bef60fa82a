use taulink_wasm::{derivation_exp_text, fh_text, preset_coeffs, series_text};

#[test]
fn series_by_name() {
    assert!(series_text("f", 3).unwrap().starts_with("z + 2/3 - 1/12 z^-1"));
    assert!(series_text("nope", 3).is_err());
    assert!(series_text("f", 0).is_err());
}

#[test]
fn preset_reproduces_f() {
    let a = preset_coeffs("a", 4).unwrap();
    assert!(a.starts_with("2/3, -1/12"));
    let f = derivation_exp_text(false, &a, 1, 5).unwrap();
    assert_eq!(f, series_text("f", 3).unwrap());
}

#[test]
fn derivation_exp_parses_input() {
    // e^{z^2 d/dz} z = z/(1 - z)
    let s = derivation_exp_text(true, "1, 0, 0", 1, 4).unwrap();
    assert!(s.starts_with("z^4 + z^3 + z^2 + z"), "{s}");
    assert!(derivation_exp_text(true, "1, x, 0", 1, 4).is_err());
}

#[test]
fn fh_window() {
    let t = fh_text(2, 5, false).unwrap();
    assert!(t.contains("-1/24\tu^2 t0"));
    assert!(fh_text(0, 5, false).is_err());
}
