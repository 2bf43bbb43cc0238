//! Generalized Sorkin parameters and their sensitivity to Born-rule deviations.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::correlation::{central_peak, exclusive_classical};
use crate::error::{Error, Result};
use crate::hierarchy::{alternating_subset_sum, interference_under, ProbabilityLaw};
use crate::optics::{DetectorPhases, SlitSet};
use crate::summation::compensated_sum;

/// `κ⁽ᴹ⁾ = I⁽ᴹ⁾_{2M+1}(δ) / G⁽ᴹ⁾_{2M+1}(0)`.
pub fn sorkin(m: usize, phases: &DetectorPhases, total_slits: &SlitSet) -> Result<f64> {
    sorkin_under(ProbabilityLaw::Born, m, phases, total_slits)
}

/// Sorkin parameter when every correlation signal obeys `law`. The
/// normalization is always the Born-rule central peak.
pub fn sorkin_under(
    law: ProbabilityLaw,
    m: usize,
    phases: &DetectorPhases,
    total_slits: &SlitSet,
) -> Result<f64> {
    if total_slits.len() != 2 * m + 1 {
        return Err(Error::Domain(format!(
            "the M = {m} Sorkin parameter needs {} slits, got {}",
            2 * m + 1,
            total_slits.len()
        )));
    }
    let peak = central_peak(total_slits, m)?.value;
    if !(peak.is_finite() && peak > 0.0) {
        return Err(Error::DegenerateNormalization(peak));
    }
    Ok(interference_under(law, m, total_slits, phases)?.value / peak)
}

/// `C(M) = Σ_{k=1}^{2M+1} binom(2M+1, k) (k / (2M+1))^{M-1}`.
pub fn sensitivity_c(m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("M must be at least 1".into()));
    }
    let n = 2 * m + 1;
    if n > 64 {
        return Err(Error::Range(format!(
            "C(M) is supported for M <= 31, got {m}"
        )));
    }
    let terms = (1..=n).map(|k| {
        let b = binomial(n as u64, k as u64).expect("binomial of n <= 64 fits in u128") as f64;
        b * (k as f64 / n as f64).powi(m as i32 - 1)
    });
    Ok(compensated_sum(terms))
}

/// `κ⁽ᴹ⁾(0) / κ⁽¹⁾ = 3M / (2M+1) · sqrt(C(M) / 7)`.
pub fn sensitivity_ratio(m: usize) -> Result<f64> {
    let c = sensitivity_c(m)?;
    Ok(3.0 * m as f64 / (2 * m + 1) as f64 * (c / 7.0).sqrt())
}

fn round_one_decimal(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviationLaw {
    /// Uniform on `[-Δ, Δ]`.
    UniformSymmetric,
    /// Normal with standard deviation `Δ`.
    Gaussian,
}

impl DeviationLaw {
    /// RMS of a single draw of magnitude `delta`.
    pub fn rms(self, delta: f64) -> f64 {
        match self {
            DeviationLaw::UniformSymmetric => delta / 3f64.sqrt(),
            DeviationLaw::Gaussian => delta,
        }
    }
}

impl std::str::FromStr for DeviationLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "uniform" | "uniform_symmetric" => Ok(DeviationLaw::UniformSymmetric),
            "gaussian" | "normal" => Ok(DeviationLaw::Gaussian),
            other => Err(Error::Domain(format!("unknown deviation law `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviationVariant {
    /// One independent deviation per slit combination, added to `G⁽¹⁾_X(0)`.
    PerCombinationIid,
    /// Deterministic `P ∝ |ψ|^{2+ε}`.
    ExponentEpsilon(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationModel {
    pub magnitude: f64,
    pub law: DeviationLaw,
    pub seed: u64,
    pub variant: DeviationVariant,
}

impl DeviationModel {
    pub fn iid(magnitude: f64, law: DeviationLaw, seed: u64) -> Result<Self> {
        Self::new(magnitude, law, seed, DeviationVariant::PerCombinationIid)
    }

    pub fn new(
        magnitude: f64,
        law: DeviationLaw,
        seed: u64,
        variant: DeviationVariant,
    ) -> Result<Self> {
        if !(magnitude.is_finite() && magnitude >= 0.0) {
            return Err(Error::Domain(format!(
                "deviation magnitude {magnitude} must be >= 0"
            )));
        }
        if let DeviationVariant::ExponentEpsilon(eps) = variant {
            if !eps.is_finite() {
                return Err(Error::Domain(format!("exponent {eps} is not finite")));
            }
        }
        Ok(Self {
            magnitude,
            law,
            seed,
            variant,
        })
    }
}

/// Which single-particle central-peak scaling `G⁽¹⁾_N(0)` follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakConvention {
    /// Unit-weight coherent grating: `N²`.
    Coherent,
    /// Per-configuration normalized states: `N`.
    Linear,
}

impl PeakConvention {
    pub fn single_particle_peak(self, n: usize) -> f64 {
        match self {
            PeakConvention::Coherent => (n * n) as f64,
            PeakConvention::Linear => n as f64,
        }
    }
}

/// First-order estimate `M·sqrt(C(M))·Δ / G⁽¹⁾_{2M+1}(0)`.
pub fn deviation_linearized(m: usize, delta: f64, convention: PeakConvention) -> Result<f64> {
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::Domain(format!(
            "deviation magnitude {delta} must be >= 0"
        )));
    }
    let c = sensitivity_c(m)?;
    Ok(m as f64 * c.sqrt() * delta / convention.single_particle_peak(2 * m + 1))
}

/// RMS of `κ⁽ᴹ⁾(0)` under iid per-combination deviations of RMS `delta_rms`,
/// by first-order variance propagation on a unit-weight coherent grating.
/// Each combination of `k` slits enters with weight `M·(k²)^{M-1}`, so the
/// prefactors add in quadrature.
pub fn squared_prefactor_prediction(m: usize, delta_rms: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("M must be at least 1".into()));
    }
    let n = 2 * m + 1;
    if n > 64 {
        return Err(Error::Range(format!(
            "prediction is supported for M <= 31, got {m}"
        )));
    }
    let g_full = (n * n) as f64;
    let variance_weight = compensated_sum((1..=n).map(|k| {
        let b = binomial(n as u64, k as u64).expect("fits in u128") as f64;
        b * ((k * k) as f64 / g_full).powi(2 * (m as i32 - 1))
    }));
    Ok(m as f64 * delta_rms * variance_weight.sqrt() / g_full)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub m: usize,
    pub c_of_m: f64,
    pub ratio: f64,
    pub table_row: f64,
    pub mc_rms: Option<f64>,
    pub mc_prediction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub law: Option<DeviationLaw>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SensitivityReport {
    fn analytic(m: usize) -> Result<Self> {
        let ratio = sensitivity_ratio(m)?;
        Ok(Self {
            m,
            c_of_m: sensitivity_c(m)?,
            ratio,
            table_row: round_one_decimal(ratio),
            mc_rms: None,
            mc_prediction: None,
            trials: None,
            seed: None,
            delta: None,
            law: None,
            warnings: Vec::new(),
        })
    }
}

/// Rows `M = 2..=m_max`.
pub fn sensitivity_table(m_max: usize) -> Result<Vec<SensitivityReport>> {
    if m_max < 2 {
        return Err(Error::Domain(format!(
            "table needs M_max >= 2, got {m_max}"
        )));
    }
    (2..=m_max).map(SensitivityReport::analytic).collect()
}

/// Sample `κ⁽ᴹ⁾(0)` for one trial of iid per-combination deviations.
fn iid_trial(
    m: usize,
    slits: &SlitSet,
    model: &DeviationModel,
    trial: u64,
    exclusive: f64,
    peak: f64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    rng.set_stream(trial);
    let normal = Normal::new(0.0, model.magnitude).ok();
    let weights = slits.weights();
    let mut draw = || -> f64 {
        if model.magnitude == 0.0 {
            return 0.0;
        }
        match model.law {
            DeviationLaw::UniformSymmetric => rng.random_range(-model.magnitude..=model.magnitude),
            DeviationLaw::Gaussian => normal.as_ref().map_or(0.0, |d| d.sample(&mut rng)),
        }
    };
    let alternating = alternating_subset_sum(slits.len(), |positions| {
        let g1 = positions
            .iter()
            .map(|&p| weights[p])
            .sum::<Complex64>()
            .norm_sqr();
        (g1 + draw()).powi(m as i32)
    });
    (alternating - exclusive) / peak
}

/// Monte-Carlo estimate of the central-point Sorkin parameter under
/// Born-rule deviations.
///
/// With the iid variant every slit combination `X` of the `2M+1`-slit grating
/// gets its own deviation, `G⁽ᴹ⁾_X(0) → (G⁽¹⁾_X(0) + Δ_X)^M`, and the RMS of
/// `κ⁽ᴹ⁾(0)` over trials is reported next to the variance-propagation
/// prediction. Trial `t` draws from stream `t` of the seeded generator, so
/// results do not depend on thread count. The exponent variant is
/// deterministic and reports `|κ⁽ᴹ⁾(0)|`.
pub fn deviation_montecarlo(
    m: usize,
    model: &DeviationModel,
    trials: usize,
) -> Result<SensitivityReport> {
    let mut report = SensitivityReport::analytic(m)?;
    if model.magnitude > 0.1 {
        report.warnings.push(format!(
            "deviation magnitude {} is not small against 1",
            model.magnitude
        ));
    }
    if model.magnitude > 1e-2 {
        report
            .warnings
            .push("deviation above 1e-2: first-order propagation may not hold".into());
    }
    let slits = SlitSet::contiguous(2 * m + 1)?;
    let central = DetectorPhases::fixed_scan(m, 0.0)?;
    let peak = central_peak(&slits, m)?.value;

    match model.variant {
        DeviationVariant::PerCombinationIid => {
            if trials == 0 {
                return Err(Error::Domain("at least one trial is required".into()));
            }
            if trials < 1000 {
                report.warnings.push(format!(
                    "{trials} trials is below 1000; RMS estimate is coarse"
                ));
            }
            let exclusive = exclusive_classical(&slits, &central)?.value;
            let run = |t: usize| iid_trial(m, &slits, model, t as u64, exclusive, peak);
            #[cfg(feature = "parallel")]
            let samples: Vec<f64> = (0..trials).into_par_iter().map(run).collect();
            #[cfg(not(feature = "parallel"))]
            let samples: Vec<f64> = (0..trials).map(run).collect();
            let mean_square = compensated_sum(samples.iter().map(|k| k * k)) / trials as f64;
            report.mc_rms = Some(mean_square.sqrt());
            report.mc_prediction = Some(squared_prefactor_prediction(
                m,
                model.law.rms(model.magnitude),
            )?);
            report.trials = Some(trials);
        }
        DeviationVariant::ExponentEpsilon(eps) => {
            let kappa = sorkin_under(ProbabilityLaw::Exponent(eps), m, &central, &slits)?;
            report.mc_rms = Some(kappa.abs());
            report.trials = Some(1);
            report
                .warnings
                .push("exponent variant is deterministic; trials ignored".into());
        }
    }
    report.seed = Some(model.seed);
    report.delta = Some(model.magnitude);
    report.law = Some(model.law);
    Ok(report)
}
