//! Quantum and classical M-particle correlation signals.
//!
//! In the coherent-over-slits, single-mode picture the M-fold coincidence
//! signal factorizes over detectors: `G(δ₁..δ_M) = ∏ᵢ |f_S(δᵢ)|²` with
//! `f_S(δ) = Σ_{s∈S} w_s e^{i s δ}`. The state-dependent prefactor is 1.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optics::{DetectorPhases, SlitSet};

/// Largest slit count accepted by the exclusive-classical induction.
pub const DEFAULT_MAX_EXCLUSIVE_SLITS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationValue {
    pub value: f64,
    pub m: usize,
    pub slits: SlitSet,
    pub phases: DetectorPhases,
}

/// Signed correlation term (exclusive classical sums and hierarchy partials).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignedCorrelation {
    pub value: f64,
    pub order: usize,
    pub m: usize,
}

/// Single-detector coherent sum over the grating.
pub fn grating_amplitude(slits: &SlitSet, delta: f64) -> Complex64 {
    slits
        .iter()
        .map(|(label, w)| w * Complex64::from_polar(1.0, label as f64 * delta))
        .sum()
}

/// `G⁽ᴹ⁾` with every detector seeing the full grating.
pub fn quantum_correlation(slits: &SlitSet, phases: &DetectorPhases) -> CorrelationValue {
    let value = phases
        .as_slice()
        .iter()
        .map(|&d| grating_amplitude(slits, d).norm_sqr())
        .product();
    CorrelationValue {
        value,
        m: phases.m(),
        slits: slits.clone(),
        phases: phases.clone(),
    }
}

/// Single-slit far-field intensity: flat, `|w|²`.
pub(crate) fn single_slit_intensity(weight: Complex64) -> f64 {
    weight.norm_sqr()
}

/// Incoherent sum over all `N^M` classical paths.
pub fn classical_correlation(slits: &SlitSet, phases: &DetectorPhases) -> CorrelationValue {
    let per_detector: f64 = slits
        .weights()
        .iter()
        .map(|&w| single_slit_intensity(w))
        .sum();
    CorrelationValue {
        value: per_detector.powi(phases.m() as i32),
        m: phases.m(),
        slits: slits.clone(),
        phases: phases.clone(),
    }
}

/// Memo of exclusive-classical terms for every sub-combination of a grating,
/// keyed by position bitmask.
pub(crate) struct ExclusiveClassicalTable {
    values: Vec<f64>,
}

impl ExclusiveClassicalTable {
    /// `single[i][p]` is the single-slit intensity of position `p` at detector `i`.
    pub(crate) fn build(single: &[Vec<f64>], n: usize, max_slits: usize) -> Result<Self> {
        if n > max_slits || n >= 31 {
            return Err(Error::RecursionBudget {
                n,
                max: max_slits.min(30),
            });
        }
        let size = 1usize << n;
        let mut values = vec![0.0f64; size];
        // submasks precede their supersets in numeric order
        for mask in 1..size {
            let classical: f64 = single
                .iter()
                .map(|row| {
                    (0..n)
                        .filter(|p| mask & (1 << p) != 0)
                        .map(|p| row[p])
                        .sum::<f64>()
                })
                .product();
            let mut lower = crate::summation::CompensatedSum::new();
            let mut sub = (mask - 1) & mask;
            while sub != 0 {
                lower += values[sub];
                sub = (sub - 1) & mask;
            }
            values[mask] = classical - lower.value();
        }
        Ok(Self { values })
    }

    pub(crate) fn full(&self) -> f64 {
        *self.values.last().unwrap_or(&0.0)
    }
}

/// Classical signal from paths that use exactly all slits of the grating,
/// defined inductively from the full classical sums of all sub-combinations.
pub fn exclusive_classical(slits: &SlitSet, phases: &DetectorPhases) -> Result<SignedCorrelation> {
    exclusive_classical_with_limit(slits, phases, DEFAULT_MAX_EXCLUSIVE_SLITS)
}

pub fn exclusive_classical_with_limit(
    slits: &SlitSet,
    phases: &DetectorPhases,
    max_slits: usize,
) -> Result<SignedCorrelation> {
    let row: Vec<f64> = slits
        .weights()
        .iter()
        .map(|&w| single_slit_intensity(w))
        .collect();
    let single = vec![row; phases.m()];
    let table = ExclusiveClassicalTable::build(&single, slits.len(), max_slits)?;
    Ok(SignedCorrelation {
        value: table.full(),
        order: slits.len(),
        m: phases.m(),
    })
}

/// Quantum correlation with all M detectors on the optical axis.
pub fn central_peak(slits: &SlitSet, m: usize) -> Result<CorrelationValue> {
    Ok(quantum_correlation(slits, &DetectorPhases::central(m)?))
}
