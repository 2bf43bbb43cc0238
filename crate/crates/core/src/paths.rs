//! M-particle paths, path pairs, and the brute-force path-pair oracle.
//!
//! Everything here works by explicit enumeration: a path assigns a source
//! slit to each detector, a pair is a ket/bra couple of paths, and the
//! correlation signal is the sum of `amp(ket) * conj(amp(bra))` over pairs.
//! Nothing in this module uses the inclusion-exclusion machinery, so it can
//! serve as an independent check of it.

use std::collections::BTreeSet;

use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optics::{DetectorPhases, SlitSet};
use crate::summation::CompensatedComplexSum;

/// Default cap on the number of enumerated terms (paths or pairs).
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// Outer-path chunk length used by pair reductions.
pub const DEFAULT_CHUNK_LEN: usize = 64;

/// Slit labels feeding detectors `1..=M`, in detector order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MultiPath(Vec<usize>);

impl MultiPath {
    pub fn new(assignment: Vec<usize>) -> Self {
        Self(assignment)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn slits(&self) -> &[usize] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathPair {
    pub ket: MultiPath,
    pub bra: MultiPath,
}

impl PathPair {
    pub fn new(ket: MultiPath, bra: MultiPath) -> Result<Self> {
        if ket.len() != bra.len() {
            return Err(Error::LengthMismatch {
                expected: ket.len(),
                actual: bra.len(),
            });
        }
        Ok(Self { ket, bra })
    }
}

fn check_budget(n: usize, m: usize, exponent: usize, budget: u128) -> Result<u128> {
    let terms = crate::combinatorics::checked_pow(n, exponent).unwrap_or(u128::MAX);
    if terms > budget {
        return Err(Error::EnumerationLimit {
            n,
            m,
            terms,
            budget,
        });
    }
    Ok(terms)
}

/// Lexicographic iterator over all `N^M` paths of a slit set.
#[derive(Debug, Clone)]
pub struct Paths {
    labels: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for Paths {
    type Item = MultiPath;

    fn next(&mut self) -> Option<MultiPath> {
        if self.done {
            return None;
        }
        let out = MultiPath(self.digits.iter().map(|&d| self.labels[d]).collect());
        // odometer increment, last detector fastest
        let n = self.labels.len();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < n {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

/// All `N^M` paths over `slits`, each once, in lexicographic order.
pub fn enumerate_paths(slits: &SlitSet, m: usize, budget: u128) -> Result<Paths> {
    if m == 0 {
        return Err(Error::Domain("M must be at least 1".into()));
    }
    check_budget(slits.len(), m, m, budget)?;
    Ok(Paths {
        labels: slits.labels().to_vec(),
        digits: vec![0; m],
        done: false,
    })
}

/// `∏ᵢ w(σᵢ)·exp(i·σᵢ·δᵢ)`.
pub fn path_amplitude(
    slits: &SlitSet,
    path: &MultiPath,
    phases: &DetectorPhases,
) -> Result<Complex64> {
    if path.len() != phases.m() {
        return Err(Error::LengthMismatch {
            expected: path.len(),
            actual: phases.m(),
        });
    }
    path.slits().iter().zip(phases.as_slice()).try_fold(
        Complex64::new(1.0, 0.0),
        |acc, (&label, &delta)| {
            let w = slits.weight_of(label).ok_or_else(|| {
                Error::InvalidSlitSet(format!("slit {label} is not part of the grating"))
            })?;
            Ok(acc * w * Complex64::from_polar(1.0, label as f64 * delta))
        },
    )
}

/// Distinct slits used by either side of the pair.
pub fn joint_support(pair: &PathPair) -> BTreeSet<usize> {
    pair.ket
        .slits()
        .iter()
        .chain(pair.bra.slits())
        .copied()
        .collect()
}

/// A pair is diagonal (classical) when bra and ket coincide.
pub fn is_diagonal(pair: &PathPair) -> bool {
    pair.ket == pair.bra
}

/// Which pair terms a reduction keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairFilter {
    /// Every pair: the full quantum signal.
    All,
    /// Diagonal pairs: the classical signal.
    Diagonal,
    /// Diagonal pairs whose support is the whole slit set.
    DiagonalFullSupport,
    /// Non-diagonal pairs whose support is the whole slit set.
    CrossFullSupport,
}

/// Tabulated amplitudes and supports of all paths for one detector setting.
#[derive(Debug, Clone)]
pub struct PairOracle {
    n: usize,
    m: usize,
    full_mask: u64,
    amplitudes: Vec<Complex64>,
    masks: Vec<u64>,
    budget: u128,
}

impl PairOracle {
    pub fn new(slits: &SlitSet, phases: &DetectorPhases, budget: u128) -> Result<Self> {
        let n = slits.len();
        let m = phases.m();
        if n > 64 {
            return Err(Error::Range(format!(
                "pair oracle supports at most 64 slits, got {n}"
            )));
        }
        check_budget(n, m, m, budget)?;
        // per detector, per slit position: w_s * exp(i s δ)
        let factors: Vec<Vec<Complex64>> = phases
            .as_slice()
            .iter()
            .map(|&delta| {
                slits
                    .iter()
                    .map(|(label, w)| w * Complex64::from_polar(1.0, label as f64 * delta))
                    .collect()
            })
            .collect();
        let count = n.pow(m as u32);
        let mut amplitudes = Vec::with_capacity(count);
        let mut masks = Vec::with_capacity(count);
        let mut digits = vec![0usize; m];
        for _ in 0..count {
            let mut amp = Complex64::new(1.0, 0.0);
            let mut mask = 0u64;
            for (detector, &d) in digits.iter().enumerate() {
                amp *= factors[detector][d];
                mask |= 1u64 << d;
            }
            amplitudes.push(amp);
            masks.push(mask);
            for i in (0..m).rev() {
                digits[i] += 1;
                if digits[i] < n {
                    break;
                }
                digits[i] = 0;
            }
        }
        let full_mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Ok(Self {
            n,
            m,
            full_mask,
            amplitudes,
            masks,
            budget,
        })
    }

    pub fn path_count(&self) -> usize {
        self.amplitudes.len()
    }

    /// Sums the selected pair terms with the default chunking.
    pub fn reduce(&self, filter: PairFilter) -> Result<Complex64> {
        self.reduce_chunked(filter, DEFAULT_CHUNK_LEN)
    }

    /// Sums the selected pair terms, splitting the outer (ket) index into
    /// chunks of `chunk_len` paths. Chunk sums are combined in chunk order,
    /// so the result does not depend on the number of worker threads.
    pub fn reduce_chunked(&self, filter: PairFilter, chunk_len: usize) -> Result<Complex64> {
        let chunk_len = chunk_len.max(1);
        match filter {
            PairFilter::Diagonal | PairFilter::DiagonalFullSupport => {
                let mut acc = CompensatedComplexSum::new();
                for (amp, &mask) in self.amplitudes.iter().zip(&self.masks) {
                    if filter == PairFilter::Diagonal || mask == self.full_mask {
                        acc += Complex64::new(amp.norm_sqr(), 0.0);
                    }
                }
                Ok(acc.value())
            }
            PairFilter::All | PairFilter::CrossFullSupport => {
                check_budget(self.n, self.m, 2 * self.m, self.budget)?;
                let cross_only = filter == PairFilter::CrossFullSupport;
                let chunk_sum = |start: usize| -> CompensatedComplexSum {
                    let end = (start + chunk_len).min(self.amplitudes.len());
                    let mut acc = CompensatedComplexSum::new();
                    for k in start..end {
                        let ket = self.amplitudes[k];
                        let ket_mask = self.masks[k];
                        for (b, (bra, &bra_mask)) in
                            self.amplitudes.iter().zip(&self.masks).enumerate()
                        {
                            if cross_only && (b == k || (ket_mask | bra_mask) != self.full_mask) {
                                continue;
                            }
                            acc += ket * bra.conj();
                        }
                    }
                    acc
                };
                let starts: Vec<usize> = (0..self.amplitudes.len()).step_by(chunk_len).collect();
                #[cfg(feature = "parallel")]
                let partials: Vec<CompensatedComplexSum> =
                    starts.par_iter().map(|&s| chunk_sum(s)).collect();
                #[cfg(not(feature = "parallel"))]
                let partials: Vec<CompensatedComplexSum> =
                    starts.iter().map(|&s| chunk_sum(s)).collect();
                let mut total = CompensatedComplexSum::new();
                for p in &partials {
                    total.merge(p);
                }
                Ok(total.value())
            }
        }
    }
}
