//! Command-line flags, config files, and the merged experiment configuration.
//!
//! Precedence: command-line flags, then the `--config` TOML file (keys are the
//! long flag names), then built-in defaults.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use born_hierarchy::optics::DetectorPreset;
use born_hierarchy::sensitivity::DeviationLaw;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "born-hierarchy",
    version,
    about = "Many-particle interference hierarchies and generalized Sorkin parameters"
)]
pub struct Cli {
    /// TOML file with default values for any flag (keys = long flag names).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interference term I(M)_N along a detector scan (CSV `delta,value`).
    Curve(Flags),
    /// Check that I(M)_N vanishes at random detector phases (JSON, exit 3 on failure).
    Vanish(Flags),
    /// Generalized Sorkin parameter along a detector scan (CSV `delta,value`).
    Sorkin(Flags),
    /// Sensitivity ratio table for M = 2..=M_max (CSV `m,c_of_m,ratio,ratio_rounded`).
    Table(Flags),
    /// Monte-Carlo Born-rule deviation experiment (JSON report).
    Montecarlo(Flags),
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Curve(_) => CommandKind::Curve,
            Command::Vanish(_) => CommandKind::Vanish,
            Command::Sorkin(_) => CommandKind::Sorkin,
            Command::Table(_) => CommandKind::Table,
            Command::Montecarlo(_) => CommandKind::Montecarlo,
        }
    }

    pub fn flags(&self) -> &Flags {
        match self {
            Command::Curve(f)
            | Command::Vanish(f)
            | Command::Sorkin(f)
            | Command::Table(f)
            | Command::Montecarlo(f) => f,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Curve,
    Vanish,
    Sorkin,
    Table,
    Montecarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Every flag is optional so that config-file values can fill the gaps.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Flags {
    /// Number of particles (= detectors).
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of slits (interference order).
    #[arg(long)]
    pub n: Option<usize>,
    /// Largest M of the sensitivity table.
    #[arg(long = "m-max")]
    pub m_max: Option<usize>,
    /// Detector preset: fixed-scan or opposite-scan.
    #[arg(long)]
    pub preset: Option<String>,
    /// Phase grid `start:end:points` in radians; bounds accept a `pi` suffix (`2pi`).
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Divide by the central peak of the N-slit grating.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub normalize: Option<bool>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Deviation magnitude for `montecarlo`.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Deviation law: uniform or gaussian.
    #[arg(long)]
    pub law: Option<String>,
    /// Exponent deviation `P ∝ |ψ|^(2+ε)` for `sorkin` and `montecarlo`.
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, short = 'o')]
    pub output: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Extra `m,ratio` CSV for the sensitivity curve (`table` only).
    #[arg(long)]
    pub fig2: Option<String>,
}

impl Flags {
    /// Fills every unset field from `fallback`.
    pub fn or(self, fallback: Flags) -> Flags {
        Flags {
            m: self.m.or(fallback.m),
            n: self.n.or(fallback.n),
            m_max: self.m_max.or(fallback.m_max),
            preset: self.preset.or(fallback.preset),
            grid: self.grid.or(fallback.grid),
            normalize: self.normalize.or(fallback.normalize),
            seed: self.seed.or(fallback.seed),
            trials: self.trials.or(fallback.trials),
            delta: self.delta.or(fallback.delta),
            law: self.law.or(fallback.law),
            epsilon: self.epsilon.or(fallback.epsilon),
            output: self.output.or(fallback.output),
            format: self.format.or(fallback.format),
            fig2: self.fig2.or(fallback.fig2),
        }
    }
}

pub fn load_config_file(path: &Path) -> CliResult<Flags> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

fn parse_phase(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some(k) = s.strip_suffix("pi") {
        let k = k.trim().trim_end_matches('*');
        return match k {
            "" | "+" => Some(PI),
            "-" => Some(-PI),
            _ => k.parse::<f64>().ok().map(|k| k * PI),
        };
    }
    s.parse().ok()
}

impl FromStr for Grid {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let bad = || CliError::Usage(format!("grid `{s}` must look like start:end:points"));
        let parts: Vec<&str> = s.split(':').collect();
        let [start, end, points] = parts.as_slice() else {
            return Err(bad());
        };
        let start = parse_phase(start).ok_or_else(bad)?;
        let end = parse_phase(end).ok_or_else(bad)?;
        let points: usize = points.trim().parse().map_err(|_| bad())?;
        if !(start.is_finite() && end.is_finite()) {
            return Err(bad());
        }
        Ok(Grid { start, end, points })
    }
}

/// Fully resolved configuration, echoed into every JSON report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub m: usize,
    pub n: usize,
    pub m_max: usize,
    pub preset: DetectorPreset,
    pub grid: Grid,
    pub normalize: bool,
    pub seed: u64,
    pub trials: usize,
    pub delta: f64,
    pub law: DeviationLaw,
    pub epsilon: Option<f64>,
    pub output_path: Option<String>,
    pub format: OutputFormat,
    pub fig2_path: Option<String>,
}

pub const DEFAULT_GRID: &str = "0:2pi:257";

impl ExperimentConfig {
    pub fn resolve(command: CommandKind, flags: Flags) -> CliResult<Self> {
        let usage = |e: born_hierarchy::Error| CliError::Usage(e.to_string());
        let preset = match flags.preset.as_deref() {
            Some(p) => p.parse().map_err(usage)?,
            None => DetectorPreset::FixedScan,
        };
        let law = match flags.law.as_deref() {
            Some(l) => l.parse().map_err(usage)?,
            None => DeviationLaw::UniformSymmetric,
        };
        let grid: Grid = flags.grid.as_deref().unwrap_or(DEFAULT_GRID).parse()?;
        let default_trials = match command {
            CommandKind::Montecarlo => 100_000,
            _ => 100,
        };
        let default_format = match command {
            CommandKind::Vanish | CommandKind::Montecarlo => OutputFormat::Json,
            _ => OutputFormat::Csv,
        };
        let config = ExperimentConfig {
            command,
            m: flags.m.unwrap_or(2),
            n: flags.n.unwrap_or(2),
            m_max: flags.m_max.unwrap_or(11),
            preset,
            grid,
            normalize: flags.normalize.unwrap_or(false),
            seed: flags
                .seed
                .unwrap_or(born_hierarchy::hierarchy::DEFAULT_SEED),
            trials: flags.trials.unwrap_or(default_trials),
            delta: flags.delta.unwrap_or(1e-3),
            law,
            epsilon: flags.epsilon,
            output_path: flags.output,
            format: flags.format.unwrap_or(default_format),
            fig2_path: flags.fig2,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> CliResult<()> {
        let fail = |msg: String| Err(CliError::Usage(msg));
        match self.command {
            CommandKind::Curve | CommandKind::Sorkin => {
                if self.m == 0 {
                    return fail("--m must be at least 1".into());
                }
                if self.command == CommandKind::Curve && self.n == 0 {
                    return fail("--n must be at least 1".into());
                }
                if self.grid.points < 2 {
                    return fail(format!(
                        "grid needs at least 2 points, got {}",
                        self.grid.points
                    ));
                }
                if self.grid.start == self.grid.end {
                    return fail("grid is degenerate: start equals end".into());
                }
                if self.preset == DetectorPreset::OppositeScan && self.m != 2 {
                    return fail(format!(
                        "opposite-scan preset requires --m 2, got {}",
                        self.m
                    ));
                }
            }
            CommandKind::Vanish => {
                if self.m == 0 || self.n == 0 {
                    return fail("--m and --n must be at least 1".into());
                }
                if self.trials == 0 {
                    return fail("--trials must be at least 1".into());
                }
            }
            CommandKind::Table => {
                if self.m_max < 2 {
                    return fail(format!("--m-max must be at least 2, got {}", self.m_max));
                }
            }
            CommandKind::Montecarlo => {
                if self.m == 0 || self.trials == 0 {
                    return fail("--m and --trials must be at least 1".into());
                }
                if !(self.delta.is_finite() && self.delta >= 0.0) {
                    return fail(format!("--delta must be >= 0, got {}", self.delta));
                }
            }
        }
        if let Some(eps) = self.epsilon {
            if !eps.is_finite() {
                return fail("--epsilon must be finite".into());
            }
        }
        Ok(())
    }
}
