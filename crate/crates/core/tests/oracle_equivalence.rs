//! Inclusion-exclusion results against the brute-force path-pair oracle.

use born_hierarchy::correlation::{central_peak, exclusive_classical};
use born_hierarchy::hierarchy::{interference, interference_oracle, random_phases};
use born_hierarchy::optics::{DetectorPhases, SlitSet};
use born_hierarchy::paths::{PairFilter, PairOracle, DEFAULT_BUDGET};
use num_complex::Complex64;

#[test]
fn interference_matches_cross_pair_oracle() {
    for m in 1..=3usize {
        for n in 1..=(2 * m + 2).min(7) {
            let slits = SlitSet::contiguous(n).unwrap();
            let peak = central_peak(&slits, m).unwrap().value;
            for phases in random_phases(m, 8, 100 + (10 * m + n) as u64).unwrap() {
                let ie = interference(m, &slits, &phases).unwrap().value;
                let oracle = interference_oracle(m, &slits, &phases).unwrap().value;
                assert!(
                    (ie - oracle).abs() <= 1e-9 * peak,
                    "M={m} N={n} {phases:?}: {ie} vs {oracle}"
                );
            }
        }
    }
}

#[test]
fn weighted_and_gapped_gratings_agree_with_oracle() {
    let weights = vec![
        Complex64::new(1.0, 0.0),
        Complex64::from_polar(0.7, 0.4),
        Complex64::from_polar(1.3, -2.0),
        Complex64::new(0.2, 0.9),
    ];
    let slits = SlitSet::with_weights(vec![0, 2, 3, 7], weights).unwrap();
    for m in 1..=2 {
        let peak = central_peak(&slits, m).unwrap().value;
        for phases in random_phases(m, 10, 5).unwrap() {
            let ie = interference(m, &slits, &phases).unwrap().value;
            let oracle = interference_oracle(m, &slits, &phases).unwrap().value;
            assert!(
                (ie - oracle).abs() <= 1e-9 * peak,
                "M={m}: {ie} vs {oracle}"
            );
        }
    }
}

#[test]
fn exclusive_classical_matches_diagonal_pairs() {
    for m in 1..=4usize {
        for n in 1..=6usize {
            let slits = SlitSet::contiguous(n).unwrap();
            let phases = DetectorPhases::new(vec![0.9; m]).unwrap();
            let oracle = PairOracle::new(&slits, &phases, DEFAULT_BUDGET).unwrap();
            let diag = oracle.reduce(PairFilter::DiagonalFullSupport).unwrap();
            let excl = exclusive_classical(&slits, &phases).unwrap().value;
            assert!(
                (excl - diag.re).abs() < 1e-9,
                "M={m} N={n}: {excl} vs {}",
                diag.re
            );
            if n > m {
                assert!(excl.abs() < 1e-9);
            }
        }
    }
}

#[test]
fn oracle_imaginary_residue_is_negligible() {
    for (m, n) in [(1, 3), (2, 4), (2, 5), (3, 5)] {
        let slits = SlitSet::contiguous(n).unwrap();
        for phases in random_phases(m, 5, 17).unwrap() {
            let oracle = PairOracle::new(&slits, &phases, DEFAULT_BUDGET).unwrap();
            let v = oracle.reduce(PairFilter::CrossFullSupport).unwrap();
            assert!(v.im.abs() < 1e-10, "M={m} N={n}: {}", v.im);
        }
    }
}
