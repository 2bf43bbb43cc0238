use born_hierarchy::correlation::central_peak;
use born_hierarchy::hierarchy::{curve, interference, phase_grid, random_phases, vanishing_check};
use born_hierarchy::optics::{DetectorPreset, SlitSet};

#[test]
fn orders_above_twice_the_particle_number_vanish() {
    for m in 1..=3usize {
        for n in 2 * m + 1..=2 * m + 3 {
            let trials = if m == 3 { 10 } else { 40 };
            let report = vanishing_check(m, n, trials, 2024).unwrap();
            assert!(report.vanishing_expected);
            assert!(report.max_normalized < 1e-10, "M={m} N={n}: {report:?}");
        }
    }
}

#[test]
fn orders_up_to_twice_the_particle_number_survive() {
    let grid = phase_grid(0.0, std::f64::consts::TAU, 100).unwrap();
    for n in 2..=4 {
        let c = curve(2, n, DetectorPreset::FixedScan, &grid, true).unwrap();
        let max = c.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
        assert!(max > 1e-3, "N={n}: {max}");
    }
    // at random phases, the top surviving order 2M is nonzero for M = 1..3
    for m in 1..=3usize {
        let slits = SlitSet::contiguous(2 * m).unwrap();
        let peak = central_peak(&slits, m).unwrap().value;
        let max = random_phases(m, 20, 9)
            .unwrap()
            .iter()
            .map(|p| interference(m, &slits, p).unwrap().value.abs())
            .fold(0.0, f64::max);
        assert!(max / peak > 1e-6, "M={m}: {max}");
    }
}

#[test]
fn curves_are_periodic() {
    let grid = phase_grid(0.0, std::f64::consts::TAU, 33).unwrap();
    for preset in [DetectorPreset::FixedScan, DetectorPreset::OppositeScan] {
        for n in 2..=4 {
            let c = curve(2, n, preset, &grid, true).unwrap();
            assert!((c[0].1 - c[32].1).abs() < 1e-10);
        }
    }
}
