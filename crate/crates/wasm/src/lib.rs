//! Browser bindings. Every export returns plain text; errors surface as JS exceptions.

use taulink::exact::parse_rational;
use taulink::series::{
    apply_derivation_exp, series_eta1, series_f, series_h, series_psi, series_stirling, series_theta,
    series_theta_of_f, series_v, series_w, virasoro_a, virasoro_e, DerivationCoeffs, Direction, LaurentSeries,
};
use taulink::ops::{GradedPoly, TruncationSpec};
use taulink::tau::{build_fh, solve_fk};
use wasm_bindgen::prelude::*;

const MAX_ORDER: usize = 40;
const MAX_WEIGHT: i64 = 11;

fn named(name: &str, order: usize) -> Result<LaurentSeries, String> {
    if order == 0 || order > MAX_ORDER {
        return Err(format!("order must be between 1 and {MAX_ORDER}"));
    }
    let s = match name {
        "f" => series_f(order),
        "h" => series_h(order),
        "w" => Ok(series_w(order)),
        "v" => Ok(series_v(order)),
        "psi" => Ok(series_psi(order)),
        "eta1" => series_eta1(order),
        "theta" => series_theta(order),
        "theta-of-f" => series_theta_of_f(order),
        "stirling" => series_stirling(order),
        other => return Err(format!("unknown series '{other}'")),
    };
    s.map_err(|e| e.to_string())
}

pub fn series_text(name: &str, order: usize) -> Result<String, String> {
    named(name, order).map(|s| s.to_string())
}

/// Comma-separated derivation coefficients a_1.. or e_1.. for prefilling the explorer.
pub fn preset_coeffs(name: &str, count: usize) -> Result<String, String> {
    let d = match name {
        "a" => virasoro_a(count),
        "e" => virasoro_e(count),
        other => return Err(format!("unknown preset '{other}'")),
    }
    .map_err(|e| e.to_string())?;
    Ok(d.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))
}

/// e^Φ z^n where Φ = Σ d_k z^{1∓k} ∂_z and `coeffs` lists d_1, d_2, ...
pub fn derivation_exp_text(raising: bool, coeffs: &str, n: i64, terms: usize) -> Result<String, String> {
    if terms == 0 || terms > MAX_ORDER {
        return Err(format!("terms must be between 1 and {MAX_ORDER}"));
    }
    let parsed = coeffs
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_rational)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let direction = if raising { Direction::Raising } else { Direction::Lowering };
    apply_derivation_exp(&DerivationCoeffs::new(direction, parsed), n, terms)
        .map(|s| s.to_string())
        .map_err(|e| e.to_string())
}

fn poly_lines(p: &GradedPoly) -> String {
    p.terms()
        .map(|(m, c)| if m.is_one() { c.to_string() } else { format!("{c}\t{}", m.display(p.alphabet())) })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Coefficients of F_H(u,t) or F_H(u,q) on the window u <= u_max, weight <= weight_max.
pub fn fh_text(u_max: u32, weight_max: i64, in_q: bool) -> Result<String, String> {
    if u_max == 0 || !(1..=MAX_WEIGHT).contains(&weight_max) {
        return Err(format!("need u_max >= 1 and 1 <= weight_max <= {MAX_WEIGHT}"));
    }
    let trunc = TruncationSpec::for_window(u_max, weight_max, 0);
    let table = solve_fk(trunc.weight_max).map_err(|e| e.to_string())?;
    let (t, q) = build_fh(&table, trunc).map_err(|e| e.to_string())?;
    let fh = if in_q { q } else { t };
    Ok(poly_lines(&fh.log_part.window(u_max, weight_max)))
}

#[wasm_bindgen]
pub fn series(name: &str, order: usize) -> Result<String, JsError> {
    series_text(name, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn preset(name: &str, count: usize) -> Result<String, JsError> {
    preset_coeffs(name, count).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn derivation_exp(raising: bool, coeffs: &str, n: i32, terms: usize) -> Result<String, JsError> {
    derivation_exp_text(raising, coeffs, n as i64, terms).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fh(u_max: u32, weight_max: i32, in_q: bool) -> Result<String, JsError> {
    fh_text(u_max, weight_max as i64, in_q).map_err(|e| JsError::new(&e))
}
