//! Acceptance criteria. Run with `--nocapture` to see one line per criterion.

use std::f64::consts::TAU;
use std::process::Command;
use std::time::{Duration, Instant};

use born_hierarchy::correlation::{central_peak, exclusive_classical};
use born_hierarchy::hierarchy::{
    curve, interference, interference_oracle, phase_grid, random_phases,
};
use born_hierarchy::optics::{DetectorPhases, DetectorPreset, SlitSet};
use born_hierarchy::paths::{PairFilter, PairOracle, DEFAULT_BUDGET};
use born_hierarchy::sensitivity::{
    deviation_montecarlo, sensitivity_c, DeviationLaw, DeviationModel,
};

const PUBLISHED_RATIOS: [f64; 10] = [1.8, 2.9, 4.7, 7.3, 11.4, 17.7, 27.6, 42.7, 66.2, 102.5];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_born-hierarchy"))
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = bin().args(args).output().map_err(|e| e.to_string())?;
    Ok((
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).map_err(|e| e.to_string())?,
    ))
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> Result<f64, String> {
    s.parse().map_err(|_| format!("not a number: {s}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn max_normalized(m: usize, slits: &SlitSet, draws: &[DetectorPhases]) -> f64 {
    let peak = central_peak(slits, m).unwrap().value;
    draws
        .iter()
        .map(|p| interference(m, slits, p).unwrap().value.abs() / peak)
        .fold(0.0, f64::max)
}

fn ac1_table() -> Outcome {
    let (code, out) = run_cli(&["table", "--m-max", "11"])?;
    ensure(code == 0, || format!("exit code {code}"))?;
    let rows = csv_rows(&out);
    ensure(rows.len() == 10, || format!("{} rows", rows.len()))?;
    let mut worst = 0.0f64;
    for (row, target) in rows.iter().zip(PUBLISHED_RATIOS) {
        let ratio = num(&row[2])?;
        let rounded = num(&row[3])?;
        ensure(rounded == target, || {
            format!("M={} rounds to {rounded}, want {target}", row[0])
        })?;
        worst = worst.max((ratio - target).abs());
    }
    ensure(worst <= 0.05, || format!("max |ratio - target| = {worst}"))?;
    Ok(format!(
        "all 10 rows match, max |ratio - target| = {worst:.4}"
    ))
}

fn ac2_single_particle_null() -> Outcome {
    let slits = SlitSet::contiguous(3).unwrap();
    let draws = random_phases(1, 1000, 1).unwrap();
    let worst = max_normalized(1, &slits, &draws);
    ensure(worst < 1e-12, || format!("residue {worst:e}"))?;
    Ok(format!(
        "max normalized |I(1)_3| = {worst:.2e} over 1000 draws"
    ))
}

fn ac3_two_particle_fifth_order() -> Outcome {
    let slits = SlitSet::contiguous(5).unwrap();
    let peak = central_peak(&slits, 2).unwrap().value;
    let grid = phase_grid(0.0, TAU, 257).unwrap();
    let mut worst = 0.0f64;
    for preset in [DetectorPreset::FixedScan, DetectorPreset::OppositeScan] {
        for &delta in &grid {
            let p = preset.phases(2, delta).unwrap();
            worst = worst.max(interference(2, &slits, &p).unwrap().value.abs() / peak);
        }
    }
    let draws = random_phases(2, 100, 3).unwrap();
    worst = worst.max(max_normalized(2, &slits, &draws));
    ensure(worst < 1e-10, || format!("residue {worst:e}"))?;
    Ok(format!(
        "max normalized |I(2)_5| = {worst:.2e} (both presets + 100 random pairs)"
    ))
}

fn ac4_three_particles() -> Outcome {
    let draws = random_phases(3, 20, 4).unwrap();
    let mut worst = 0.0f64;
    for n in [7, 8] {
        let slits = SlitSet::contiguous(n).unwrap();
        worst = worst.max(max_normalized(3, &slits, &draws));
    }
    let seven = SlitSet::contiguous(7).unwrap();
    let peak = central_peak(&seven, 3).unwrap().value;
    for p in &draws {
        let v = interference_oracle(3, &seven, p).unwrap().value;
        worst = worst.max(v.abs() / peak);
    }
    ensure(worst < 1e-9, || format!("residue {worst:e}"))?;
    Ok(format!(
        "max normalized |I(3)_7|, |I(3)_8| = {worst:.2e} (oracle at N=7)"
    ))
}

fn ac5_non_vanishing() -> Outcome {
    let grid = phase_grid(0.0, TAU, 100).unwrap();
    let mut summary = Vec::new();
    for n in 2..=4 {
        let c = curve(2, n, DetectorPreset::FixedScan, &grid, true).unwrap();
        let max = c.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
        ensure(max > 1e-3, || format!("N={n}: max {max:e}"))?;
        summary.push(format!("N={n}: {max:.3}"));
    }
    Ok(format!("max normalized |I(2)_N|: {}", summary.join(", ")))
}

fn ac6_oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for m in 1..=3usize {
        for n in 1..=(2 * m + 2).min(7) {
            let slits = SlitSet::contiguous(n).unwrap();
            let peak = central_peak(&slits, m).unwrap().value;
            for p in random_phases(m, 50, (m * 100 + n) as u64).unwrap() {
                let a = interference(m, &slits, &p).unwrap().value;
                let b = interference_oracle(m, &slits, &p).unwrap().value;
                worst = worst.max((a - b).abs() / peak);
                cases += 1;
            }
        }
    }
    ensure(worst <= 1e-9, || {
        format!("max |IE - oracle| / peak = {worst:e}")
    })?;
    Ok(format!(
        "{cases} evaluations, max |IE - oracle| / peak = {worst:.2e}"
    ))
}

fn ac7_classical_bookkeeping() -> Outcome {
    let mut worst = 0.0f64;
    for m in 1..=4usize {
        for n in 1..=6usize {
            let slits = SlitSet::contiguous(n).unwrap();
            for p in random_phases(m, 3, (m * 10 + n) as u64).unwrap() {
                let excl = exclusive_classical(&slits, &p).unwrap().value;
                let oracle = PairOracle::new(&slits, &p, DEFAULT_BUDGET)
                    .unwrap()
                    .reduce(PairFilter::DiagonalFullSupport)
                    .unwrap()
                    .re;
                worst = worst.max((excl - oracle).abs());
                if n > m {
                    ensure(excl.abs() < 1e-9, || {
                        format!("M={m} N={n}: exclusive {excl}")
                    })?;
                }
            }
        }
    }
    ensure(worst < 1e-9, || {
        format!("max |exclusive - oracle| = {worst:e}")
    })?;
    Ok(format!(
        "max |exclusive - diagonal oracle| = {worst:.2e}; zero for N > M"
    ))
}

fn ac8_c_anchors() -> Outcome {
    let c1 = sensitivity_c(1).unwrap();
    let c2 = sensitivity_c(2).unwrap();
    ensure(c1 == 7.0 && c2 == 16.0, || {
        format!("C(1) = {c1}, C(2) = {c2}")
    })?;
    Ok("C(1) = 7, C(2) = 16".into())
}

fn r_squared(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    sxy * sxy / (sxx * syy)
}

fn ac9_montecarlo() -> Outcome {
    let law = DeviationLaw::UniformSymmetric;
    let model = DeviationModel::iid(1e-3, law, 12345).unwrap();
    let report = deviation_montecarlo(1, &model, 100_000).unwrap();
    let normalized = report.mc_rms.unwrap() * 9.0 / law.rms(1e-3);
    let rel = (normalized / 7f64.sqrt() - 1.0).abs();
    ensure(rel <= 0.03, || {
        format!("rms * G(0) / Δ_rms = {normalized}, off by {rel:.3}")
    })?;

    let deltas = [1e-4, 1e-3, 1e-2];
    let mut fits = Vec::new();
    for m in [1usize, 2] {
        let rms: Vec<f64> = deltas
            .iter()
            .map(|&d| {
                let model = DeviationModel::iid(d, law, 777).unwrap();
                deviation_montecarlo(m, &model, 100_000)
                    .unwrap()
                    .mc_rms
                    .unwrap()
            })
            .collect();
        let r2 = r_squared(&deltas, &rms);
        ensure(r2 > 0.999, || format!("M={m}: R² = {r2}"))?;
        fits.push(format!("M={m} R²={r2:.6}"));
    }
    Ok(format!(
        "rms·G(0)/Δ_rms = {normalized:.4} (√7 = {:.4}); {}",
        7f64.sqrt(),
        fits.join(", ")
    ))
}

fn ac10_figures() -> Outcome {
    let mut checked = 0;
    for preset in ["fixed-scan", "opposite-scan"] {
        for n in ["2", "3", "4"] {
            let args = [
                "curve",
                "--m",
                "2",
                "--n",
                n,
                "--preset",
                preset,
                "--grid",
                "0:2pi:257",
                "--normalize",
            ];
            let (code, out) = run_cli(&args)?;
            ensure(code == 0, || format!("{preset} N={n}: exit {code}"))?;
            let rows = csv_rows(&out);
            ensure(rows.len() == 257, || {
                format!("{preset} N={n}: {} rows", rows.len())
            })?;
            let golden = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
                .join(format!("tests/golden/curve_m2_n{n}_{preset}.csv"));
            let golden = std::fs::read_to_string(&golden).map_err(|e| e.to_string())?;
            let pinned = csv_rows(&golden);
            ensure(pinned.len() == rows.len(), || {
                format!("{preset} N={n}: golden length")
            })?;
            for (a, b) in rows.iter().zip(&pinned) {
                let (x, y) = (num(&a[1])?, num(&b[1])?);
                ensure((x - y).abs() < 1e-10, || {
                    format!("{preset} N={n}: {x} vs golden {y}")
                })?;
            }
            let first = num(&rows[0][1])?;
            let last = num(&rows[256][1])?;
            ensure((first - last).abs() < 1e-10, || {
                format!("{preset} N={n}: endpoints {first} vs {last}")
            })?;
            if preset == "opposite-scan" {
                let args = [
                    "curve",
                    "--m",
                    "2",
                    "--n",
                    n,
                    "--preset",
                    preset,
                    "--grid",
                    "-2pi:2pi:257",
                    "--normalize",
                ];
                let (_, out) = run_cli(&args)?;
                let values: Vec<f64> = csv_rows(&out)
                    .iter()
                    .map(|r| num(&r[1]))
                    .collect::<Result<_, _>>()?;
                for i in 0..values.len() / 2 {
                    let (a, b) = (values[i], values[values.len() - 1 - i]);
                    ensure((a - b).abs() < 1e-10, || {
                        format!("{preset} N={n}: not even at index {i}: {a} vs {b}")
                    })?;
                }
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} curves match golden files and are periodic; opposite-scan curves even"
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("AC1 sensitivity table", ac1_table, Duration::from_secs(1)),
        (
            "AC2 single-particle Sorkin null",
            ac2_single_particle_null,
            Duration::from_secs(1),
        ),
        (
            "AC3 two-particle fifth-order null",
            ac3_two_particle_fifth_order,
            Duration::from_secs(10),
        ),
        (
            "AC4 vanishing theorem at M=3",
            ac4_three_particles,
            Duration::from_secs(300),
        ),
        (
            "AC5 non-vanishing orders",
            ac5_non_vanishing,
            Duration::from_secs(5),
        ),
        (
            "AC6 oracle equivalence",
            ac6_oracle_equivalence,
            Duration::from_secs(120),
        ),
        (
            "AC7 classical bookkeeping",
            ac7_classical_bookkeeping,
            Duration::from_secs(30),
        ),
        ("AC8 C(M) anchors", ac8_c_anchors, Duration::from_secs(1)),
        (
            "AC9 Monte-Carlo propagation",
            ac9_montecarlo,
            Duration::from_secs(30),
        ),
        (
            "AC10 figure regeneration",
            ac10_figures,
            Duration::from_secs(60),
        ),
    ];
    let mut failures = Vec::new();
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= limit {
                Ok(detail)
            } else {
                Err(format!("took {elapsed:?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("[PASS] {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                println!("[FAIL] {name} ({elapsed:.2?}): {detail}");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
