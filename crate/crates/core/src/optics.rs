//! Slit gratings, detector configurations and the far-field phase convention.
//!
//! A slit with label `s` contributes the phase `s * delta` at a detector whose
//! optical phase is `delta`, i.e. `delta` is the phase difference between
//! adjacent slits. Labels are 0-based positions on the grating; a subset keeps
//! the labels of its members so spacing is preserved.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered set of slits with a complex amplitude weight per slit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlitSet {
    labels: Vec<usize>,
    weights: Vec<Complex64>,
}

impl SlitSet {
    /// Unit-weight slits at the given positions.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let weights = vec![Complex64::new(1.0, 0.0); labels.len()];
        Self::with_weights(labels, weights)
    }

    pub fn with_weights(labels: Vec<usize>, weights: Vec<Complex64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidSlitSet(
                "a grating needs at least one slit".into(),
            ));
        }
        if labels.len() != weights.len() {
            return Err(Error::InvalidSlitSet(format!(
                "{} labels but {} weights",
                labels.len(),
                weights.len()
            )));
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSlitSet(
                "labels must be strictly increasing".into(),
            ));
        }
        if weights
            .iter()
            .any(|w| !w.re.is_finite() || !w.im.is_finite())
        {
            return Err(Error::InvalidSlitSet("weights must be finite".into()));
        }
        Ok(Self { labels, weights })
    }

    /// Unit-weight grating with slits `0..n`.
    pub fn contiguous(n: usize) -> Result<Self> {
        Self::new((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn weight_of(&self, label: usize) -> Option<Complex64> {
        self.labels
            .binary_search(&label)
            .ok()
            .map(|i| self.weights[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.labels
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    /// Sub-grating made of the members at the given positions (not labels).
    pub fn select(&self, positions: &[usize]) -> Result<Self> {
        let mut labels = Vec::with_capacity(positions.len());
        let mut weights = Vec::with_capacity(positions.len());
        for &p in positions {
            if p >= self.len() {
                return Err(Error::InvalidSlitSet(format!(
                    "position {p} outside a grating of {} slits",
                    self.len()
                )));
            }
            labels.push(self.labels[p]);
            weights.push(self.weights[p]);
        }
        Self::with_weights(labels, weights)
    }

    /// Same grating shifted by `offset` positions.
    pub fn translated(&self, offset: usize) -> Self {
        Self {
            labels: self.labels.iter().map(|l| l + offset).collect(),
            weights: self.weights.clone(),
        }
    }
}

/// Slit spacing and wavelength, in the same length unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    slit_spacing: f64,
    wavelength: f64,
}

impl Geometry {
    pub fn new(slit_spacing: f64, wavelength: f64) -> Result<Self> {
        if !(slit_spacing.is_finite() && slit_spacing > 0.0) {
            return Err(Error::Domain(format!(
                "slit spacing {slit_spacing} must be > 0"
            )));
        }
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::Domain(format!(
                "wavelength {wavelength} must be > 0"
            )));
        }
        Ok(Self {
            slit_spacing,
            wavelength,
        })
    }

    pub fn slit_spacing(&self) -> f64 {
        self.slit_spacing
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn wavenumber(&self) -> f64 {
        TAU / self.wavelength
    }
}

/// Optical phase `2π d sin(θ) / λ` of a detector at angle `theta`.
pub fn phase_from_angle(geometry: &Geometry, theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::Domain(format!("angle {theta} is not finite")));
    }
    if theta.abs() >= FRAC_PI_2 {
        return Err(Error::Domain(format!(
            "angle {theta} outside the open interval (-π/2, π/2)"
        )));
    }
    Ok(geometry.wavenumber() * geometry.slit_spacing * theta.sin())
}

/// Optical phases of the M detectors of one coincidence measurement.
///
/// Phases are kept raw (no reduction mod 2π).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DetectorPhases(Vec<f64>);

impl DetectorPhases {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::Domain("at least one detector is required".into()));
        }
        if let Some(p) = phases.iter().find(|p| !p.is_finite()) {
            return Err(Error::Domain(format!("detector phase {p} is not finite")));
        }
        Ok(Self(phases))
    }

    /// All M detectors at the optical axis.
    pub fn central(m: usize) -> Result<Self> {
        Self::new(vec![0.0; m])
    }

    /// Detectors `1..M-1` fixed at `(i-1)·2π`, detector M scanning at `delta`.
    pub fn fixed_scan(m: usize, delta: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("at least one detector is required".into()));
        }
        let mut phases: Vec<f64> = (0..m - 1).map(|i| i as f64 * TAU).collect();
        phases.push(delta);
        Self::new(phases)
    }

    /// Two detectors scanned in opposite directions, `(delta, -delta)`.
    pub fn opposite_scan(delta: f64) -> Result<Self> {
        Self::new(vec![delta, -delta])
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Detector presets used for scanned curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectorPreset {
    FixedScan,
    OppositeScan,
}

impl DetectorPreset {
    pub fn phases(self, m: usize, delta: f64) -> Result<DetectorPhases> {
        match self {
            DetectorPreset::FixedScan => DetectorPhases::fixed_scan(m, delta),
            DetectorPreset::OppositeScan if m == 2 => DetectorPhases::opposite_scan(delta),
            DetectorPreset::OppositeScan => Err(Error::Domain(format!(
                "opposite-scan preset needs exactly 2 detectors, got {m}"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DetectorPreset::FixedScan => "fixed-scan",
            DetectorPreset::OppositeScan => "opposite-scan",
        }
    }
}

impl std::str::FromStr for DetectorPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "fixed-scan" | "fixed" => Ok(DetectorPreset::FixedScan),
            "opposite-scan" | "opposite" => Ok(DetectorPreset::OppositeScan),
            other => Err(Error::Domain(format!("unknown detector preset `{other}`"))),
        }
    }
}
