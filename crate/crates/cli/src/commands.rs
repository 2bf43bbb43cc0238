//! Subcommand implementations. Each returns the text to emit plus an exit code.

use std::io::Write;

use born_hierarchy::hierarchy::{
    curve, phase_grid, vanishing_check, ProbabilityLaw, VanishingReport,
};
use born_hierarchy::optics::SlitSet;
use born_hierarchy::sensitivity::{
    deviation_linearized, deviation_montecarlo, sensitivity_table, sorkin_under, DeviationModel,
    DeviationVariant, PeakConvention, SensitivityReport,
};
use serde::Serialize;

use crate::config::{Cli, CommandKind, ExperimentConfig, OutputFormat};
use crate::error::{CliError, CliResult, EXIT_ASSERTION, EXIT_OK};
use crate::format::{csv, format_sig};

/// Largest normalized residue accepted by `vanish`.
pub const VANISH_THRESHOLD: f64 = 1e-9;

/// Environment variable selecting the worker-thread count.
pub const THREADS_ENV: &str = "BORN_HIERARCHY_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct Emission {
    pub body: String,
    /// Secondary file (path, contents), e.g. the sensitivity curve of `table`.
    pub extra: Option<(String, String)>,
    pub exit_code: i32,
}

impl Emission {
    fn ok(body: String) -> Self {
        Self {
            body,
            extra: None,
            exit_code: EXIT_OK,
        }
    }
}

fn finite(x: f64, what: &str) -> CliResult<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(born_hierarchy::Error::Range(format!("{what} is not finite ({x})")).into())
    }
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Usage(format!("cannot serialize report: {e}")))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct Point {
    delta: f64,
    value: f64,
}

#[derive(Serialize)]
struct CurveReport<'a> {
    config: &'a ExperimentConfig,
    points: Vec<Point>,
}

fn emit_points(config: &ExperimentConfig, points: Vec<(f64, f64)>) -> CliResult<String> {
    for &(d, v) in &points {
        finite(v, &format!("value at delta = {d}"))?;
    }
    match config.format {
        OutputFormat::Csv => Ok(csv(
            &["delta", "value"],
            points
                .iter()
                .map(|&(d, v)| vec![format_sig(d), format_sig(v)]),
        )),
        OutputFormat::Json => to_json(&CurveReport {
            config,
            points: points
                .into_iter()
                .map(|(delta, value)| Point { delta, value })
                .collect(),
        }),
    }
}

fn grid_of(config: &ExperimentConfig) -> CliResult<Vec<f64>> {
    Ok(phase_grid(
        config.grid.start,
        config.grid.end,
        config.grid.points,
    )?)
}

pub fn run_curve(config: &ExperimentConfig) -> CliResult<Emission> {
    let grid = grid_of(config)?;
    let points = curve(config.m, config.n, config.preset, &grid, config.normalize)?;
    Ok(Emission::ok(emit_points(config, points)?))
}

pub fn run_sorkin(config: &ExperimentConfig) -> CliResult<Emission> {
    let grid = grid_of(config)?;
    let slits = SlitSet::contiguous(2 * config.m + 1)?;
    let law = config
        .epsilon
        .map_or(ProbabilityLaw::Born, ProbabilityLaw::Exponent);
    let points = grid
        .iter()
        .map(|&delta| {
            let phases = config.preset.phases(config.m, delta)?;
            Ok((delta, sorkin_under(law, config.m, &phases, &slits)?))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Emission::ok(emit_points(config, points)?))
}

#[derive(Serialize)]
struct VanishOutput<'a> {
    config: &'a ExperimentConfig,
    threshold: f64,
    passed: bool,
    report: VanishingReport,
}

pub fn run_vanish(config: &ExperimentConfig) -> CliResult<Emission> {
    let report = vanishing_check(config.m, config.n, config.trials, config.seed)?;
    finite(report.max_normalized, "max normalized residue")?;
    let passed = report.max_normalized < VANISH_THRESHOLD;
    let body = to_json(&VanishOutput {
        config,
        threshold: VANISH_THRESHOLD,
        passed,
        report,
    })?;
    Ok(Emission {
        body,
        extra: None,
        exit_code: if passed { EXIT_OK } else { EXIT_ASSERTION },
    })
}

#[derive(Serialize)]
struct TableOutput<'a> {
    config: &'a ExperimentConfig,
    rows: Vec<SensitivityReport>,
    fig2: Vec<(usize, f64)>,
}

pub fn run_table(config: &ExperimentConfig) -> CliResult<Emission> {
    let rows = sensitivity_table(config.m_max)?;
    let fig2: Vec<(usize, f64)> = rows.iter().map(|r| (r.m, r.ratio)).collect();
    let body = match config.format {
        OutputFormat::Csv => csv(
            &["m", "c_of_m", "ratio", "ratio_rounded"],
            rows.iter().map(|r| {
                vec![
                    r.m.to_string(),
                    format_sig(r.c_of_m),
                    format_sig(r.ratio),
                    format!("{:.1}", r.table_row),
                ]
            }),
        ),
        OutputFormat::Json => to_json(&TableOutput {
            config,
            rows: rows.clone(),
            fig2: fig2.clone(),
        })?,
    };
    let extra = config.fig2_path.as_ref().map(|path| {
        let curve = csv(
            &["m", "ratio"],
            fig2.iter()
                .map(|&(m, r)| vec![m.to_string(), format_sig(r)]),
        );
        (path.clone(), curve)
    });
    Ok(Emission {
        body,
        extra,
        exit_code: EXIT_OK,
    })
}

#[derive(Serialize)]
struct Linearized {
    coherent: f64,
    linear: f64,
}

#[derive(Serialize)]
struct MonteCarloOutput<'a> {
    config: &'a ExperimentConfig,
    #[serde(flatten)]
    report: SensitivityReport,
    /// First-order `M·sqrt(C(M))·Δ/G(1)(0)` under both peak conventions.
    linearized: Linearized,
}

pub fn run_montecarlo(config: &ExperimentConfig) -> CliResult<Emission> {
    let variant = config.epsilon.map_or(
        DeviationVariant::PerCombinationIid,
        DeviationVariant::ExponentEpsilon,
    );
    let model = DeviationModel::new(config.delta, config.law, config.seed, variant)?;
    let report = deviation_montecarlo(config.m, &model, config.trials)?;
    for v in [report.mc_rms, report.mc_prediction].into_iter().flatten() {
        finite(v, "Monte-Carlo estimate")?;
    }
    let linearized = Linearized {
        coherent: deviation_linearized(config.m, config.delta, PeakConvention::Coherent)?,
        linear: deviation_linearized(config.m, config.delta, PeakConvention::Linear)?,
    };
    Ok(Emission::ok(to_json(&MonteCarloOutput {
        config,
        report,
        linearized,
    })?))
}

pub fn execute(config: &ExperimentConfig) -> CliResult<Emission> {
    match config.command {
        CommandKind::Curve => run_curve(config),
        CommandKind::Vanish => run_vanish(config),
        CommandKind::Sorkin => run_sorkin(config),
        CommandKind::Table => run_table(config),
        CommandKind::Montecarlo => run_montecarlo(config),
    }
}

fn write_to(path: Option<&str>, contents: &str) -> CliResult<()> {
    match path {
        Some(path) => std::fs::write(path, contents)
            .map_err(|e| CliError::Io(format!("cannot write {path}: {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value.parse().map_err(|_| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got `{value}`"
        ))
    })?;
    // a pool may already exist when called twice in one process; keep it
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

/// Resolves configuration, runs the command, and writes its output.
pub fn run(cli: Cli) -> CliResult<i32> {
    configure_threads()?;
    let kind = cli.command.kind();
    let mut flags = cli.command.flags().clone();
    if let Some(path) = &cli.config {
        flags = flags.or(crate::config::load_config_file(path)?);
    }
    let config = ExperimentConfig::resolve(kind, flags)?;
    let emission = execute(&config)?;
    write_to(config.output_path.as_deref(), &emission.body)?;
    if let Some((path, contents)) = &emission.extra {
        write_to(Some(path), contents)?;
    }
    if emission.exit_code == EXIT_ASSERTION {
        eprintln!("assertion failed: normalized residue above {VANISH_THRESHOLD:e}");
    }
    Ok(emission.exit_code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Flags;

    fn config(kind: CommandKind, flags: Flags) -> ExperimentConfig {
        ExperimentConfig::resolve(kind, flags).unwrap()
    }

    #[test]
    fn single_particle_curve_values() {
        let c = config(
            CommandKind::Curve,
            Flags {
                m: Some(1),
                n: Some(2),
                grid: Some("0:2pi:5".into()),
                normalize: Some(true),
                ..Flags::default()
            },
        );
        let out = run_curve(&c).unwrap().body;
        let values: Vec<f64> = out
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        let expected = [0.5, 0.0, -0.5, 0.0, 0.5];
        for (v, e) in values.iter().zip(expected) {
            assert!((v - e).abs() < 1e-12, "{values:?}");
        }
    }

    #[test]
    fn vanish_exit_codes() {
        let pass = config(
            CommandKind::Vanish,
            Flags {
                m: Some(2),
                n: Some(5),
                seed: Some(7),
                ..Flags::default()
            },
        );
        assert_eq!(run_vanish(&pass).unwrap().exit_code, EXIT_OK);
        let fail = config(
            CommandKind::Vanish,
            Flags {
                m: Some(2),
                n: Some(4),
                ..Flags::default()
            },
        );
        let e = run_vanish(&fail).unwrap();
        assert_eq!(e.exit_code, EXIT_ASSERTION);
        let json: serde_json::Value = serde_json::from_str(&e.body).unwrap();
        assert!(json["report"]["max_normalized"].as_f64().unwrap() > 1e-3);
        assert_eq!(json["config"]["n"], 4);
    }

    #[test]
    fn table_json_carries_the_curve() {
        let c = config(
            CommandKind::Table,
            Flags {
                m_max: Some(3),
                format: Some(OutputFormat::Json),
                fig2: Some("unused.csv".into()),
                ..Flags::default()
            },
        );
        let e = run_table(&c).unwrap();
        let json: serde_json::Value = serde_json::from_str(&e.body).unwrap();
        assert_eq!(json["rows"].as_array().unwrap().len(), 2);
        assert_eq!(json["fig2"][0][0], 2);
        let (path, curve) = e.extra.unwrap();
        assert_eq!(path, "unused.csv");
        assert!(curve.starts_with("m,ratio\n2,1.81422947044\n"));
    }

    #[test]
    fn sorkin_curve_with_exponent_deviation_is_nonzero() {
        let c = config(
            CommandKind::Sorkin,
            Flags {
                m: Some(1),
                grid: Some("0:pi:3".into()),
                epsilon: Some(1e-3),
                ..Flags::default()
            },
        );
        let out = run_sorkin(&c).unwrap().body;
        let first: f64 = out
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap();
        assert!(first.abs() > 1e-8);
    }
}
