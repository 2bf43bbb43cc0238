//! WebAssembly bindings for the static demo page in `www/`.
//!
//! The `*_impl` functions hold the logic and are tested natively; the
//! exported wrappers only translate errors into JS exceptions.

use born_hierarchy::hierarchy::{curve, phase_grid, vanishing_check};
use born_hierarchy::optics::DetectorPreset;
use born_hierarchy::sensitivity::sensitivity_ratio;
use wasm_bindgen::prelude::*;

/// Larger inputs would freeze the page.
pub const MAX_SLITS: usize = 12;
pub const MAX_POINTS: usize = 4096;
pub const MAX_TRIALS: usize = 10_000;

fn check_slits(n: usize) -> Result<(), String> {
    if n > MAX_SLITS {
        return Err(format!("at most {MAX_SLITS} slits in the browser, got {n}"));
    }
    Ok(())
}

/// Interleaved `[δ0, v0, δ1, v1, ...]` samples of the M-th order term.
pub fn interference_curve_impl(
    m: usize,
    n: usize,
    preset: &str,
    start: f64,
    end: f64,
    points: usize,
    normalize: bool,
) -> Result<Vec<f64>, String> {
    check_slits(n)?;
    if points > MAX_POINTS {
        return Err(format!("at most {MAX_POINTS} points, got {points}"));
    }
    let preset: DetectorPreset = preset.parse().map_err(|e| format!("{e}"))?;
    let grid = phase_grid(start, end, points).map_err(|e| e.to_string())?;
    let samples = curve(m, n, preset, &grid, normalize).map_err(|e| e.to_string())?;
    Ok(samples.into_iter().flat_map(|(d, v)| [d, v]).collect())
}

pub fn vanishing_report_impl(
    m: usize,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<String, String> {
    check_slits(n)?;
    if trials > MAX_TRIALS {
        return Err(format!("at most {MAX_TRIALS} trials, got {trials}"));
    }
    let report = vanishing_check(m, n, trials, seed).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// Sensitivity ratio for M = 1..=m_max.
pub fn sensitivity_ratios_impl(m_max: usize) -> Result<Vec<f64>, String> {
    (1..=m_max)
        .map(|m| sensitivity_ratio(m).map_err(|e| e.to_string()))
        .collect()
}

#[wasm_bindgen(js_name = interferenceCurve)]
pub fn interference_curve(
    m: usize,
    n: usize,
    preset: &str,
    start: f64,
    end: f64,
    points: usize,
    normalize: bool,
) -> Result<Vec<f64>, JsError> {
    interference_curve_impl(m, n, preset, start, end, points, normalize)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = vanishingReport)]
pub fn vanishing_report(m: usize, n: usize, trials: usize, seed: u32) -> Result<String, JsError> {
    vanishing_report_impl(m, n, trials, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sensitivityRatios)]
pub fn sensitivity_ratios(m_max: usize) -> Result<Vec<f64>, JsError> {
    sensitivity_ratios_impl(m_max).map_err(|e| JsError::new(&e))
}
