//! Command-line flags, the optional JSON config file, and their merge.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use covspin::dirac::EnergySign;
use covspin::experiment::SpinModel;
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "covspin",
    version,
    about = "Relativistic vs Dirac spin in a moving Stern-Gerlach apparatus"
)]
pub struct Cli {
    /// Flat JSON file with default values; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    CheckAlgebra,
    Run,
    Sweep,
    VerifyPaper,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spin-algebra residuals of both spin operators over a speed grid.
    CheckAlgebra(Flags),
    /// One experiment at a single speed and angle.
    Run(Flags),
    /// Experiments over a (phi, beta) grid.
    Sweep(Flags),
    /// Every closed-form and two-route check, with pass/fail per check.
    VerifyPaper(Flags),
}

impl Command {
    fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::CheckAlgebra(f) => (CommandKind::CheckAlgebra, f),
            Command::Run(f) => (CommandKind::Run, f),
            Command::Sweep(f) => (CommandKind::Sweep, f),
            Command::VerifyPaper(f) => (CommandKind::VerifyPaper, f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    Relativistic,
    Dirac,
    Both,
}

impl ModelChoice {
    pub fn models(self) -> Vec<SpinModel> {
        match self {
            ModelChoice::Relativistic => vec![SpinModel::Relativistic],
            ModelChoice::Dirac => vec![SpinModel::Dirac],
            ModelChoice::Both => vec![SpinModel::Relativistic, SpinModel::Dirac],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

impl From<Sign> for EnergySign {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Positive => EnergySign::Positive,
            Sign::Negative => EnergySign::Negative,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Particle speed as a fraction of c, in [0, 1).
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Flight azimuth from the x-axis, in degrees.
    #[arg(long = "phi-deg", allow_negative_numbers = true)]
    pub phi_deg: Option<f64>,
    /// Lab magnetic field strength along +y.
    #[arg(long = "b-field", visible_alias = "B", allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Dipole-to-spin ratio.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum)]
    pub model: Option<ModelChoice>,
    #[arg(long = "energy-sign", value_enum)]
    pub energy_sign: Option<Sign>,
    /// Comma-separated speeds for sweeps and algebra checks.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub betas: Option<Vec<f64>>,
    /// Comma-separated azimuths in degrees for sweeps.
    #[arg(long = "phis-deg", value_delimiter = ',', allow_hyphen_values = true)]
    pub phis_deg: Option<Vec<f64>>,
    /// Write output here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, allow_negative_numbers = true)]
    pub tolerance: Option<f64>,
}

/// Keys accepted in the config file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub subcommand: Option<String>,
    pub beta: Option<f64>,
    pub phi_deg: Option<f64>,
    #[serde(rename = "B", alias = "b", alias = "b_field")]
    pub b: Option<f64>,
    pub alpha: Option<f64>,
    pub model: Option<ModelChoice>,
    pub energy_sign: Option<Sign>,
    pub betas: Option<Vec<f64>>,
    pub phis_deg: Option<Vec<f64>>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub tolerance: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

fn parse_subcommand(name: &str) -> Result<CommandKind, String> {
    match name {
        "check-algebra" => Ok(CommandKind::CheckAlgebra),
        "run" => Ok(CommandKind::Run),
        "sweep" => Ok(CommandKind::Sweep),
        "verify-paper" => Ok(CommandKind::VerifyPaper),
        other => Err(format!("unknown subcommand '{other}' in config")),
    }
}

/// Fully resolved settings. Grid lists stay optional because each
/// subcommand has its own default grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub command: CommandKind,
    pub beta: f64,
    pub phi_deg: f64,
    pub b: f64,
    pub alpha: f64,
    pub model: ModelChoice,
    pub energy_sign: EnergySign,
    pub betas: Option<Vec<f64>>,
    pub phis_deg: Option<Vec<f64>>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub tolerance: f64,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// What the parse produced: either settings or a request to show help.
#[derive(Debug)]
pub enum Parsed {
    Config(CliConfig),
    MissingCommand,
}

pub fn resolve(cli: Cli) -> Result<Parsed, String> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let (command, flags) = match cli.command {
        Some(c) => c.split(),
        None => match &file.subcommand {
            Some(name) => (parse_subcommand(name)?, Flags::default()),
            None => return Ok(Parsed::MissingCommand),
        },
    };
    let cfg = CliConfig {
        command,
        beta: flags.beta.or(file.beta).unwrap_or(0.0),
        phi_deg: flags.phi_deg.or(file.phi_deg).unwrap_or(0.0),
        b: flags.b.or(file.b).unwrap_or(1.0),
        alpha: flags.alpha.or(file.alpha).unwrap_or(1.0),
        model: flags.model.or(file.model).unwrap_or(ModelChoice::Dirac),
        energy_sign: flags
            .energy_sign
            .or(file.energy_sign)
            .unwrap_or(Sign::Positive)
            .into(),
        betas: flags.betas.or(file.betas),
        phis_deg: flags.phis_deg.or(file.phis_deg),
        output: flags.output.or(file.output),
        format: flags.format.or(file.format).unwrap_or(Format::Json),
        tolerance: flags.tolerance.or(file.tolerance).unwrap_or(DEFAULT_TOLERANCE),
    };
    cfg.validate()?;
    Ok(Parsed::Config(cfg))
}

fn check_speed(beta: f64) -> Result<(), String> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(format!("speed must be a finite number in [0, 1), got {beta}"));
    }
    if beta >= 1.0 {
        return Err(format!("superluminal speed {beta}: beta must be below 1"));
    }
    Ok(())
}

impl CliConfig {
    pub fn validate(&self) -> Result<(), String> {
        check_speed(self.beta)?;
        if let Some(betas) = &self.betas {
            if betas.is_empty() {
                return Err("speed grid is empty".into());
            }
            betas.iter().try_for_each(|&b| check_speed(b))?;
        }
        if let Some(phis) = &self.phis_deg {
            if phis.is_empty() {
                return Err("angle grid is empty".into());
            }
            if phis.iter().any(|p| !p.is_finite()) {
                return Err("angles must be finite".into());
            }
        }
        if !self.phi_deg.is_finite() {
            return Err("angle must be finite".into());
        }
        if !self.b.is_finite() {
            return Err("field strength must be finite".into());
        }
        if !self.alpha.is_finite() || self.alpha == 0.0 {
            return Err("alpha must be finite and nonzero".into());
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if self.model == ModelChoice::Both && self.command == CommandKind::Run {
            return Err("model 'both' is only available for sweep".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn parse(args: &[&str]) -> Result<Parsed, String> {
        let cli = Cli::try_parse_from(std::iter::once("covspin").chain(args.iter().copied()))
            .map_err(|e| e.to_string())?;
        resolve(cli)
    }

    fn config(args: &[&str]) -> CliConfig {
        match parse(args).unwrap() {
            Parsed::Config(c) => c,
            Parsed::MissingCommand => panic!("no command"),
        }
    }

    #[test]
    fn defaults() {
        let c = config(&["run"]);
        assert_eq!(c.command, CommandKind::Run);
        assert_eq!((c.alpha, c.b, c.tolerance), (1.0, 1.0, 1e-8));
        assert_eq!(c.model, ModelChoice::Dirac);
        assert_eq!(c.format, Format::Json);
        assert_eq!(c.energy_sign, EnergySign::Positive);
    }

    #[test]
    fn run_flags() {
        let c = config(&["run", "--model", "relativistic", "--beta", "0.866", "--phi-deg", "45"]);
        assert_eq!(c.model, ModelChoice::Relativistic);
        assert_eq!(c.beta, 0.866);
        assert_eq!(c.phi_deg, 45.0);
        let c = config(&["sweep", "--betas", "0,0.5", "--phis-deg", "-15,30", "--B", "2"]);
        assert_eq!(c.betas, Some(vec![0.0, 0.5]));
        assert_eq!(c.phis_deg, Some(vec![-15.0, 30.0]));
        assert_eq!(c.b, 2.0);
    }

    #[test]
    fn usage_errors() {
        assert!(parse(&["run", "--beta", "1.2"]).unwrap_err().contains("superluminal"));
        assert!(parse(&["run", "--beta", "-0.2"]).is_err());
        assert!(parse(&["run", "--bogus"]).is_err());
        assert!(parse(&["run", "--model", "both"]).is_err());
        assert!(parse(&["run", "--tolerance", "0"]).is_err());
        assert!(parse(&["run", "--alpha", "0"]).is_err());
        assert!(parse(&["sweep", "--betas", "0.2,1.0"]).is_err());
        assert!(parse(&["run", "--format", "xml"]).is_err());
    }

    #[test]
    fn missing_subcommand() {
        assert!(matches!(parse(&[]).unwrap(), Parsed::MissingCommand));
    }

    #[test]
    fn flags_override_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, r#"{{"beta": 0.5, "B": 3.0, "alpha": 2.0, "model": "relativistic"}}"#).unwrap();
        let path = f.path().to_str().unwrap();
        let c = config(&["--config", path, "run", "--beta", "0.6"]);
        assert_eq!(c.beta, 0.6);
        assert_eq!(c.b, 3.0);
        assert_eq!(c.alpha, 2.0);
        assert_eq!(c.model, ModelChoice::Relativistic);
        let c = config(&["run", "--config", path]);
        assert_eq!(c.beta, 0.5);
    }

    #[test]
    fn file_errors() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, r#"{{"speed": 0.5}}"#).unwrap();
        let path = f.path().to_str().unwrap();
        assert!(parse(&["--config", path, "run"]).is_err());
        assert!(parse(&["--config", "/nonexistent/covspin.json", "run"]).is_err());
    }

    #[test]
    fn subcommand_from_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, r#"{{"subcommand": "verify-paper", "format": "csv"}}"#).unwrap();
        let c = config(&["--config", f.path().to_str().unwrap()]);
        assert_eq!(c.command, CommandKind::VerifyPaper);
        assert_eq!(c.format, Format::Csv);
    }
}
