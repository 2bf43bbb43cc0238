//! Nth-order M-particle interference terms.
//!
//! `I⁽ᴹ⁾_N` is the full N-slit signal, minus the signals of all (N-1)-slit
//! sub-combinations, plus those of all (N-2)-slit ones, and so on down to
//! single slits, minus the classical paths that use exactly N slits. The
//! alternating sum is accumulated with compensated summation: it cancels
//! exactly for N > 2M while its addends grow like N^{2M}.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::Combinations;
use crate::correlation::{
    central_peak, single_slit_intensity, ExclusiveClassicalTable, DEFAULT_MAX_EXCLUSIVE_SLITS,
};
use crate::error::{Error, Result};
use crate::optics::{DetectorPhases, DetectorPreset, SlitSet};
use crate::paths::{PairFilter, PairOracle, DEFAULT_BUDGET};
use crate::summation::CompensatedSum;

/// Seed used when a caller does not supply one.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    InclusionExclusion,
    PairOracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterferenceValue {
    pub value: f64,
    pub m: usize,
    pub order: usize,
    pub slits: SlitSet,
    pub phases: DetectorPhases,
    pub method: Method,
}

/// How detection probabilities relate to squared amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbabilityLaw {
    /// `P = |ψ|²`.
    Born,
    /// `P = |ψ|^{2+ε}`, applied to every correlation signal.
    Exponent(f64),
}

impl ProbabilityLaw {
    fn apply(self, born: f64) -> f64 {
        match self {
            ProbabilityLaw::Born => born,
            ProbabilityLaw::Exponent(eps) => born.powf(1.0 + 0.5 * eps),
        }
    }
}

fn validate(m: usize, phases: &DetectorPhases) -> Result<()> {
    if m == 0 {
        return Err(Error::Domain("M must be at least 1".into()));
    }
    if phases.m() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            actual: phases.m(),
        });
    }
    Ok(())
}

/// `Σ_{∅≠U⊆S} (-1)^{N-|U|} g(U)`, walking sub-combinations from size N down
/// to 1 in lexicographic order. `g` receives the member positions of `U`.
pub(crate) fn alternating_subset_sum(n: usize, mut g: impl FnMut(&[usize]) -> f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for l in 0..n {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        for combo in Combinations::new(n, n - l) {
            acc += sign * g(&combo);
        }
    }
    acc.value()
}

/// Interference term by inclusion-exclusion over slit sub-combinations.
pub fn interference(
    m: usize,
    slits: &SlitSet,
    phases: &DetectorPhases,
) -> Result<InterferenceValue> {
    interference_under(ProbabilityLaw::Born, m, slits, phases)
}

/// Same as [`interference`], with every correlation signal passed through
/// the given probability law.
pub fn interference_under(
    law: ProbabilityLaw,
    m: usize,
    slits: &SlitSet,
    phases: &DetectorPhases,
) -> Result<InterferenceValue> {
    validate(m, phases)?;
    let n = slits.len();
    if n > DEFAULT_MAX_EXCLUSIVE_SLITS {
        return Err(Error::EnumerationLimit {
            n,
            m,
            terms: 1u128 << n.min(127),
            budget: 1u128 << DEFAULT_MAX_EXCLUSIVE_SLITS,
        });
    }
    // terms[i][p] = w_p e^{i s_p δ_i}
    let terms: Vec<Vec<Complex64>> = phases
        .as_slice()
        .iter()
        .map(|&d| {
            slits
                .iter()
                .map(|(label, w)| w * Complex64::from_polar(1.0, label as f64 * d))
                .collect()
        })
        .collect();
    let quantum = |positions: &[usize]| -> f64 {
        let born: f64 = terms
            .iter()
            .map(|row| {
                positions
                    .iter()
                    .map(|&p| row[p])
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .product();
        law.apply(born)
    };
    let alternating = alternating_subset_sum(n, quantum);

    let singles: Vec<f64> = slits
        .weights()
        .iter()
        .map(|&w| law.apply(single_slit_intensity(w)))
        .collect();
    let exclusive =
        ExclusiveClassicalTable::build(&vec![singles; m], n, DEFAULT_MAX_EXCLUSIVE_SLITS)?.full();

    Ok(InterferenceValue {
        value: alternating - exclusive,
        m,
        order: n,
        slits: slits.clone(),
        phases: phases.clone(),
        method: Method::InclusionExclusion,
    })
}

/// Interference term as the sum of cross path pairs that use every slit.
pub fn interference_oracle(
    m: usize,
    slits: &SlitSet,
    phases: &DetectorPhases,
) -> Result<InterferenceValue> {
    interference_oracle_with_budget(m, slits, phases, DEFAULT_BUDGET)
}

pub fn interference_oracle_with_budget(
    m: usize,
    slits: &SlitSet,
    phases: &DetectorPhases,
    budget: u128,
) -> Result<InterferenceValue> {
    validate(m, phases)?;
    let oracle = PairOracle::new(slits, phases, budget)?;
    let sum = oracle.reduce(PairFilter::CrossFullSupport)?;
    Ok(InterferenceValue {
        value: sum.re,
        m,
        order: slits.len(),
        slits: slits.clone(),
        phases: phases.clone(),
        method: Method::PairOracle,
    })
}

/// Seeded uniform draws of M phases on `[0, 2π)`.
pub fn random_phases(m: usize, trials: usize, seed: u64) -> Result<Vec<DetectorPhases>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| DetectorPhases::new((0..m).map(|_| rng.random_range(0.0..TAU)).collect()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingReport {
    pub m: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// True when `n ≥ 2m + 1`, i.e. the term must vanish under Born's rule.
    pub vanishing_expected: bool,
    pub central_peak: f64,
    pub max_abs: f64,
    pub max_normalized: f64,
    pub worst_phases: Option<DetectorPhases>,
}

/// Evaluates `I⁽ᴹ⁾_N` of a contiguous N-slit grating at seeded random phases.
pub fn vanishing_check(m: usize, n: usize, trials: usize, seed: u64) -> Result<VanishingReport> {
    let slits = SlitSet::contiguous(n)?;
    let peak = central_peak(&slits, m)?.value;
    let mut max_abs = 0.0f64;
    let mut worst = None;
    for phases in random_phases(m, trials, seed)? {
        let v = interference(m, &slits, &phases)?.value.abs();
        if v > max_abs || worst.is_none() {
            max_abs = v;
            worst = Some(phases);
        }
    }
    Ok(VanishingReport {
        m,
        n,
        trials,
        seed,
        vanishing_expected: n > 2 * m,
        central_peak: peak,
        max_abs,
        max_normalized: max_abs / peak,
        worst_phases: worst,
    })
}

/// `points` evenly spaced phases from `start` to `end`, endpoints included.
pub fn phase_grid(start: f64, end: f64, points: usize) -> Result<Vec<f64>> {
    if !(start.is_finite() && end.is_finite()) {
        return Err(Error::Domain("grid bounds must be finite".into()));
    }
    match points {
        0 => Err(Error::Domain("grid needs at least one point".into())),
        1 => Ok(vec![start]),
        _ => {
            let step = (end - start) / (points - 1) as f64;
            Ok((0..points)
                .map(|i| {
                    if i == points - 1 {
                        end
                    } else {
                        start + step * i as f64
                    }
                })
                .collect())
        }
    }
}

/// `I⁽ᴹ⁾_N` of a contiguous N-slit grating along a detector scan.
pub fn curve(
    m: usize,
    n: usize,
    preset: DetectorPreset,
    grid: &[f64],
    normalize: bool,
) -> Result<Vec<(f64, f64)>> {
    if grid.is_empty() {
        return Err(Error::Domain("phase grid is empty".into()));
    }
    let slits = SlitSet::contiguous(n)?;
    let scale = if normalize {
        central_peak(&slits, m)?.value
    } else {
        1.0
    };
    grid.iter()
        .map(|&delta| {
            let phases = preset.phases(m, delta)?;
            Ok((delta, interference(m, &slits, &phases)?.value / scale))
        })
        .collect()
}
