use covspin::classical_spin::relativistic_spin_vector;
use covspin::dirac::dirac_spin_vector;
use covspin::experiment::{angular_gap, run_experiment, ExperimentConfig, ExperimentReport, SpinModel};
use covspin::operators::spin_algebra_residual;
use covspin::verify::verify_all;
use covspin::SpinError;
use nalgebra::Vector3;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{CliConfig, CommandKind, Format};
use crate::output::{csv_string, float_cell, json_string, to_value};

pub const ALGEBRA_BETAS: [f64; 5] = [0.0, 0.1, 0.3, 0.6, 0.9];
pub const SWEEP_HEADER: [&str; 8] = [
    "gamma",
    "phi_deg",
    "theta_deg",
    "xi_deg",
    "angular_gap",
    "sx_expectation",
    "paradox",
    "model",
];

/// Speeds for γ = 1, 1.25, 2, 5.
pub fn default_sweep_betas() -> Vec<f64> {
    vec![0.0, 0.6, 0.75f64.sqrt(), 0.96f64.sqrt()]
}

pub fn default_sweep_phis() -> Vec<f64> {
    (0..=6).map(|k| 15.0 * k as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    CheckFailed,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub status: Status,
}

pub fn execute(cfg: &CliConfig) -> Result<Outcome, SpinError> {
    match cfg.command {
        CommandKind::CheckAlgebra => check_algebra(cfg),
        CommandKind::Run => run(cfg),
        CommandKind::Sweep => sweep(cfg),
        CommandKind::VerifyPaper => verify_paper(cfg),
    }
}

fn experiment_config(cfg: &CliConfig, model: SpinModel, beta: f64, phi_deg: f64) -> ExperimentConfig {
    ExperimentConfig {
        beta_magnitude: beta,
        phi: phi_deg.to_radians(),
        b_magnitude: cfg.b,
        alpha: cfg.alpha,
        model,
        energy_sign: cfg.energy_sign,
        tolerance: cfg.tolerance,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraRow {
    pub beta: f64,
    pub dirac_residual: f64,
    pub relativistic_residual: f64,
}

pub fn algebra_rows(betas: &[f64], phi_deg: f64) -> Result<Vec<AlgebraRow>, SpinError> {
    let phi = phi_deg.to_radians();
    let direction = Vector3::new(phi.cos(), phi.sin(), 0.0);
    betas
        .iter()
        .map(|&beta| {
            let v = direction * beta;
            Ok(AlgebraRow {
                beta,
                dirac_residual: spin_algebra_residual(&dirac_spin_vector(&v)?),
                relativistic_residual: spin_algebra_residual(&relativistic_spin_vector(&v)?),
            })
        })
        .collect()
}

fn check_algebra(cfg: &CliConfig) -> Result<Outcome, SpinError> {
    let betas = cfg.betas.clone().unwrap_or_else(|| ALGEBRA_BETAS.to_vec());
    let rows = algebra_rows(&betas, cfg.phi_deg)?;
    let passed = rows.iter().all(|r| {
        r.dirac_residual < cfg.tolerance && (r.beta == 0.0 || r.relativistic_residual > cfg.tolerance)
    });
    let text = match cfg.format {
        Format::Json => json_string(&json!({
            "phi_deg": to_value(&cfg.phi_deg),
            "tolerance": cfg.tolerance,
            "rows": to_value(&rows),
            "passed": passed,
        })),
        Format::Csv => csv_string(
            &["beta", "dirac_residual", "relativistic_residual"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        float_cell(r.beta),
                        float_cell(r.dirac_residual),
                        float_cell(r.relativistic_residual),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Outcome {
        text,
        status: if passed { Status::Ok } else { Status::CheckFailed },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub phi_deg: f64,
    pub theta_deg: f64,
    pub xi_deg: f64,
    pub angular_gap: f64,
    pub sx_expectation: f64,
    pub paradox: bool,
    pub model: SpinModel,
}

impl SweepRow {
    /// For the relativistic spin ξ is the consistency angle; for the Dirac
    /// spin it is the rest-frame azimuth of the prepared state's spin.
    pub fn from_report(report: &ExperimentReport, phi_deg: f64) -> Self {
        let xi = match report.model {
            SpinModel::Relativistic => report.xi_consistency,
            SpinModel::Dirac => report.branches[0].rest_azimuth,
        };
        Self {
            gamma: report.gamma,
            phi_deg,
            theta_deg: report.theta.to_degrees(),
            xi_deg: xi.to_degrees(),
            angular_gap: angular_gap(report.theta, xi).to_degrees(),
            sx_expectation: report.sx_lab_expectation,
            paradox: report.paradox,
            model: report.model,
        }
    }

    fn cells(&self) -> Vec<String> {
        vec![
            float_cell(self.gamma),
            float_cell(self.phi_deg),
            float_cell(self.theta_deg),
            float_cell(self.xi_deg),
            float_cell(self.angular_gap),
            float_cell(self.sx_expectation),
            self.paradox.to_string(),
            self.model.name().to_string(),
        ]
    }
}

/// Rows ordered by φ, then β, then model, whatever order they finish in.
pub fn sweep_rows(cfg: &CliConfig) -> Result<Vec<SweepRow>, SpinError> {
    let betas = cfg.betas.clone().unwrap_or_else(default_sweep_betas);
    let phis = cfg.phis_deg.clone().unwrap_or_else(default_sweep_phis);
    let models = cfg.model.models();
    let points: Vec<(f64, f64, SpinModel)> = phis
        .iter()
        .flat_map(|&phi| {
            let models = &models;
            betas
                .iter()
                .flat_map(move |&beta| models.iter().map(move |&m| (phi, beta, m)))
        })
        .collect();
    points
        .par_iter()
        .map(|&(phi, beta, model)| {
            let report = run_experiment(&experiment_config(cfg, model, beta, phi))?;
            Ok(SweepRow::from_report(&report, phi))
        })
        .collect()
}

fn sweep_text(rows: &[SweepRow], format: Format) -> String {
    match format {
        Format::Json => json_string(&to_value(&rows)),
        Format::Csv => csv_string(
            &SWEEP_HEADER,
            &rows.iter().map(SweepRow::cells).collect::<Vec<_>>(),
        ),
    }
}

fn sweep(cfg: &CliConfig) -> Result<Outcome, SpinError> {
    let rows = sweep_rows(cfg)?;
    Ok(Outcome {
        text: sweep_text(&rows, cfg.format),
        status: Status::Ok,
    })
}

fn run(cfg: &CliConfig) -> Result<Outcome, SpinError> {
    let model = cfg.model.models()[0];
    let report = run_experiment(&experiment_config(cfg, model, cfg.beta, cfg.phi_deg))?;
    let text = match cfg.format {
        Format::Csv => sweep_text(&[SweepRow::from_report(&report, cfg.phi_deg)], Format::Csv),
        Format::Json => {
            let mut v = to_value(&report);
            let extra = to_value(&json!({
                "phi_deg": cfg.phi_deg,
                "theta_deg": report.theta.to_degrees(),
                "xi_deg": report.xi_consistency.to_degrees(),
                "config": {
                    "beta": cfg.beta,
                    "phi_deg": cfg.phi_deg,
                    "B": cfg.b,
                    "alpha": cfg.alpha,
                    "model": model,
                    "energy_sign": cfg.energy_sign,
                    "tolerance": cfg.tolerance,
                },
            }));
            if let (Value::Object(map), Value::Object(add)) = (&mut v, extra) {
                map.extend(add);
            }
            json_string(&v)
        }
    };
    Ok(Outcome {
        text,
        status: Status::Ok,
    })
}

fn verify_paper(cfg: &CliConfig) -> Result<Outcome, SpinError> {
    let report = verify_all()?;
    let text = match cfg.format {
        Format::Json => json_string(&to_value(&report)),
        Format::Csv => csv_string(
            &["name", "max_error", "tolerance", "bound", "passed", "informational", "detail"],
            &report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        float_cell(c.max_error),
                        float_cell(c.tolerance),
                        format!("{:?}", c.bound).to_lowercase(),
                        c.passed.to_string(),
                        c.informational.to_string(),
                        c.detail.clone(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Outcome {
        text,
        status: if report.all_passed {
            Status::Ok
        } else {
            Status::CheckFailed
        },
    })
}
