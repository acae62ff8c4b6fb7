//! The covariant Stern-Gerlach experiment.
//!
//! Lab frame: uniform field B ŷ, particle moving at speed β and azimuth φ
//! in the x–y plane. Rest frame: the boosted fields Ẽ, B̃. For each spin
//! model the lab observer prepares the state with spin along +y, and the
//! two observers must agree on it:
//!
//! * consistency: the lab expectations of the spin components orthogonal to
//!   B (x and z) vanish;
//! * covariance: the prepared state is an eigenstate of the rest-frame
//!   Hamiltonian as well.
//!
//! For the relativistic spin both candidate states |u_θ⟩ (covariant) and
//! |u_ξ⟩ (consistent) are evaluated; when no candidate satisfies both
//! conditions the report flags a paradox.

use nalgebra::{SMatrix, SVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::classical_spin::{
    classical_sg_lab, classical_sg_rest, planar_eigenstates, relativistic_spin_vector, rest_spin,
    theta_angle, xi_consistency_angle, PlanarState,
};
use crate::dirac::{
    boost_spinor, covariant_expectation, dirac_spin_vector, gamma_matrices, rest_spin_operators,
    rest_spinor, DiracSpinor, EnergySign, SpinProjection,
};
use crate::error::{Result, SpinError};
use crate::fields::{rest_frame_fields, FieldConfig};
use crate::operators::{re, to_rows, Mat4, C64, I};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinModel {
    Relativistic,
    Dirac,
}

impl SpinModel {
    pub fn name(self) -> &'static str {
        match self {
            SpinModel::Relativistic => "relativistic",
            SpinModel::Dirac => "dirac",
        }
    }
}

impl std::str::FromStr for SpinModel {
    type Err = SpinError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "relativistic" => Ok(SpinModel::Relativistic),
            "dirac" => Ok(SpinModel::Dirac),
            other => Err(SpinError::InvalidConfig(format!(
                "unknown model '{other}' (expected relativistic or dirac)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub beta_magnitude: f64,
    /// Flight azimuth in radians.
    pub phi: f64,
    pub b_magnitude: f64,
    pub alpha: f64,
    pub model: SpinModel,
    pub energy_sign: EnergySign,
    pub tolerance: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            beta_magnitude: 0.0,
            phi: 0.0,
            b_magnitude: 1.0,
            alpha: 1.0,
            model: SpinModel::Dirac,
            energy_sign: EnergySign::Positive,
            tolerance: 1e-8,
        }
    }
}

impl ExperimentConfig {
    pub fn new(model: SpinModel, beta_magnitude: f64, phi: f64) -> Self {
        Self {
            model,
            beta_magnitude,
            phi,
            ..Self::default()
        }
    }

    /// Speed chosen from a Lorentz factor.
    pub fn with_gamma(model: SpinModel, gamma: f64, phi: f64) -> Self {
        Self::new(model, (1.0 - 1.0 / (gamma * gamma)).sqrt(), phi)
    }

    pub fn validate(&self) -> Result<()> {
        self.field_config().map(|_| ())?;
        if self.tolerance <= 0.0 || !self.tolerance.is_finite() {
            return Err(SpinError::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if !self.alpha.is_finite() || self.alpha == 0.0 {
            return Err(SpinError::InvalidRatio);
        }
        Ok(())
    }

    pub fn field_config(&self) -> Result<FieldConfig> {
        FieldConfig::new(self.b_magnitude, self.phi, self.beta_magnitude)
    }

    fn require(&self, model: SpinModel) -> Result<FieldConfig> {
        if self.model != model {
            return Err(SpinError::WrongModel {
                expected: model.name(),
            });
        }
        self.validate()?;
        self.field_config()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Detector {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RestFields {
    pub electric: [f64; 3],
    pub magnetic: [f64; 3],
}

/// One candidate initial state and how it fares against both conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub label: String,
    /// Rest-frame azimuth of the state's spin expectation.
    pub rest_azimuth: f64,
    pub sx_lab: f64,
    pub sy_lab: f64,
    pub sz_lab: f64,
    pub rest_eigenvalue: C64,
    pub rest_eigen_residual: f64,
    pub consistency_ok: bool,
    pub covariance_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub model: SpinModel,
    pub beta: f64,
    pub phi: f64,
    pub gamma: f64,
    pub rest_fields: RestFields,
    pub theta: f64,
    pub xi_consistency: f64,
    pub hamiltonian_lab: Vec<Vec<C64>>,
    pub hamiltonian_rest: Vec<Vec<C64>>,
    pub initial_state: Vec<C64>,
    pub detector: Detector,
    pub sx_lab_expectation: f64,
    pub rest_expectations: [f64; 3],
    pub lab_energy: f64,
    pub rest_eigenvalue: C64,
    pub rest_eigen_residual: f64,
    pub consistency_ok: bool,
    pub covariance_ok: bool,
    pub paradox: bool,
    pub electric_dipole_expectation: Option<f64>,
    pub branches: Vec<BranchReport>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "paradox")]
    Paradox,
    #[serde(rename = "none")]
    NoParadox,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParadoxReport {
    pub theta: f64,
    pub xi_consistency: f64,
    pub angular_gap: f64,
    pub verdict: Verdict,
}

/// |a − b| reduced modulo π, in [0, π/2]. Spin axes are rays, so θ and θ+π
/// describe the same axis.
pub fn angular_gap(a: f64, b: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let d = (a - b).rem_euclid(pi);
    d.min(pi - d)
}

/// ‖Hv − λv‖/‖v‖ with λ the Rayleigh quotient.
fn eigen_residual<const N: usize>(
    h: &SMatrix<C64, N, N>,
    v: &SVector<C64, N>,
) -> (C64, f64) {
    let hv = h * v;
    let lambda = v.dotc(&hv) / v.dotc(v);
    (lambda, (hv - v * lambda).norm() / v.norm())
}

/// ℋ = −(α/γ) 𝒮ʸ B.
pub fn quantum_sg_lab(cfg: &ExperimentConfig) -> Result<Mat4> {
    let fields = cfg.require(SpinModel::Dirac)?;
    let spin = dirac_spin_vector(&fields.beta())?;
    Ok(spin.y() * re(-cfg.alpha * cfg.b_magnitude / fields.gamma()))
}

/// ℋ̃ = −α 𝒮̃·B̃ + iα γ₅ 𝒮̃·Ẽ.
pub fn quantum_sg_rest(cfg: &ExperimentConfig) -> Result<Mat4> {
    let fields = cfg.require(SpinModel::Dirac)?;
    let (e, b) = rest_frame_fields(&fields);
    let rest = rest_spin_operators();
    let g5 = gamma_matrices().gamma5;
    Ok(rest.dot(&b) * re(-cfg.alpha) + g5 * rest.dot(&e) * (I * cfg.alpha))
}

/// |p, +y⟩: the +y rest spinor boosted to the particle's lab momentum.
pub fn lab_initial_spinor(cfg: &ExperimentConfig) -> Result<DiracSpinor> {
    let fields = cfg.require(SpinModel::Dirac)?;
    initial_spinor(&fields, cfg.energy_sign)
}

fn initial_spinor(fields: &FieldConfig, sign: EnergySign) -> Result<DiracSpinor> {
    let rest = rest_spinor(&Vector3::y(), SpinProjection::Up, sign)?;
    boost_spinor(&rest, &fields.beta())
}

/// Covariant expectations of (𝒮̃ˣ, 𝒮̃ʸ, 𝒮̃ᶻ) in |p, +y⟩.
pub fn rest_frame_dirac_expectations(cfg: &ExperimentConfig) -> Result<[f64; 3]> {
    let psi = lab_initial_spinor(cfg)?;
    Ok(rest_spin_operators()
        .ops
        .map(|s| covariant_expectation(&s, &psi).re()))
}

/// Electric-dipole energy ⟨iαγ₅𝒮̃ᶻẼᶻ⟩ in |p, +y⟩ next to the α-free
/// closed form (γ² − 1) cos²φ B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectricDipoleComparison {
    pub matrix_value: f64,
    pub alpha_free_value: f64,
    /// matrix/α-free, absent where the α-free form vanishes.
    pub ratio: Option<f64>,
}

pub fn electric_dipole_expectation(cfg: &ExperimentConfig) -> Result<ElectricDipoleComparison> {
    let fields = cfg.require(SpinModel::Dirac)?;
    let psi = initial_spinor(&fields, cfg.energy_sign)?;
    let (e, _) = rest_frame_fields(&fields);
    let g5 = gamma_matrices().gamma5;
    let op = g5 * rest_spin_operators().ops[2] * (I * cfg.alpha * e.z);
    let matrix_value = covariant_expectation(&op, &psi).re();
    let gamma = fields.gamma();
    let c = cfg.phi.cos();
    let alpha_free_value = (gamma * gamma - 1.0) * c * c * cfg.b_magnitude;
    let ratio = (alpha_free_value.abs() > 1e-12).then(|| matrix_value / alpha_free_value);
    Ok(ElectricDipoleComparison {
        matrix_value,
        alpha_free_value,
        ratio,
    })
}

pub fn paradox_check(cfg: &ExperimentConfig) -> Result<ParadoxReport> {
    let fields = cfg.require(SpinModel::Relativistic)?;
    let gamma = fields.gamma();
    let theta = theta_angle(cfg.phi, gamma);
    let xi = xi_consistency_angle(cfg.phi, gamma);
    let gap = angular_gap(theta, xi);
    Ok(ParadoxReport {
        theta,
        xi_consistency: xi,
        angular_gap: gap,
        verdict: if gap > cfg.tolerance {
            Verdict::Paradox
        } else {
            Verdict::NoParadox
        },
    })
}

fn detector_for(sy_lab: f64) -> Detector {
    if sy_lab >= 0.0 {
        Detector::Upper
    } else {
        Detector::Lower
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let fields = cfg.field_config()?;
    match cfg.model {
        SpinModel::Relativistic => relativistic_report(cfg, &fields),
        SpinModel::Dirac => {
            let psi = initial_spinor(&fields, cfg.energy_sign)?;
            dirac_report(cfg, &fields, &psi)
        }
    }
}

struct Common {
    gamma: f64,
    rest_fields: RestFields,
    theta: f64,
    xi: f64,
}

fn common(cfg: &ExperimentConfig, fields: &FieldConfig) -> Common {
    let gamma = fields.gamma();
    let (e, b) = rest_frame_fields(fields);
    Common {
        gamma,
        rest_fields: RestFields {
            electric: [e.x, e.y, e.z],
            magnetic: [b.x, b.y, b.z],
        },
        theta: theta_angle(cfg.phi, gamma),
        xi: xi_consistency_angle(cfg.phi, gamma),
    }
}

fn relativistic_report(cfg: &ExperimentConfig, fields: &FieldConfig) -> Result<ExperimentReport> {
    let c = common(cfg, fields);
    let tol = cfg.tolerance;
    let spin = relativistic_spin_vector(&fields.beta())?;
    let h_lab = classical_sg_lab(fields, cfg.alpha);
    let h_rest = classical_sg_rest(fields, cfg.alpha);
    let rest = rest_spin();

    let branch = |label: &str, state: &PlanarState| {
        let (sx, sy, sz) = (
            state.expectation(spin.x()),
            state.expectation(spin.y()),
            state.expectation(spin.z()),
        );
        let (lambda, resid) = eigen_residual(&h_rest, &state.vector());
        BranchReport {
            label: label.to_string(),
            rest_azimuth: state
                .expectation(rest.y())
                .atan2(state.expectation(rest.x())),
            sx_lab: sx,
            sy_lab: sy,
            sz_lab: sz,
            rest_eigenvalue: lambda,
            rest_eigen_residual: resid,
            consistency_ok: sx.abs() < tol && sz.abs() < tol,
            covariance_ok: resid < tol,
        }
    };
    let (u_theta, _) = planar_eigenstates(c.theta);
    let (u_xi, _) = planar_eigenstates(c.xi);
    let branches = vec![branch("u_theta", &u_theta), branch("u_xi", &u_xi)];
    let primary = &branches[0];
    let paradox = !branches.iter().any(|b| b.consistency_ok && b.covariance_ok);

    let mut notes = Vec::new();
    if paradox {
        notes.push(format!(
            "u_theta keeps covariance but has lab <Sx> = {:.6e}; u_xi is consistent but \
             not an eigenstate of the rest Hamiltonian (residual {:.6e})",
            branches[0].sx_lab, branches[1].rest_eigen_residual
        ));
    }

    Ok(ExperimentReport {
        model: SpinModel::Relativistic,
        beta: cfg.beta_magnitude,
        phi: cfg.phi,
        gamma: c.gamma,
        rest_fields: c.rest_fields,
        theta: c.theta,
        xi_consistency: c.xi,
        hamiltonian_lab: to_rows(&h_lab),
        hamiltonian_rest: to_rows(&h_rest),
        initial_state: u_theta.amplitudes.to_vec(),
        detector: detector_for(primary.sy_lab),
        sx_lab_expectation: primary.sx_lab,
        rest_expectations: rest.ops.map(|s| u_theta.expectation(&s)),
        lab_energy: u_theta.expectation(&h_lab),
        rest_eigenvalue: primary.rest_eigenvalue,
        rest_eigen_residual: primary.rest_eigen_residual,
        consistency_ok: primary.consistency_ok,
        covariance_ok: primary.covariance_ok,
        paradox,
        electric_dipole_expectation: None,
        branches,
        notes,
    })
}

fn dirac_report(
    cfg: &ExperimentConfig,
    fields: &FieldConfig,
    psi: &DiracSpinor,
) -> Result<ExperimentReport> {
    let c = common(cfg, fields);
    let tol = cfg.tolerance;
    let spin = dirac_spin_vector(&fields.beta())?;
    let h_lab = quantum_sg_lab(cfg)?;
    let h_rest = quantum_sg_rest(cfg)?;
    let rest = rest_spin_operators();

    let lab = spin.ops.map(|s| covariant_expectation(&s, psi).re());
    let rest_exp = rest.ops.map(|s| covariant_expectation(&s, psi).re());
    let (lambda, resid) = eigen_residual(&h_rest, &psi.components);
    let consistency_ok = lab[0].abs() < tol && lab[2].abs() < tol;
    let covariance_ok = resid < tol;
    let branch = BranchReport {
        label: "p_plus_y".to_string(),
        rest_azimuth: rest_exp[1].atan2(rest_exp[0]),
        sx_lab: lab[0],
        sy_lab: lab[1],
        sz_lab: lab[2],
        rest_eigenvalue: lambda,
        rest_eigen_residual: resid,
        consistency_ok,
        covariance_ok,
    };
    let electric = electric_dipole_expectation(cfg)?;
    let mut notes = Vec::new();
    if let Some(ratio) = electric.ratio {
        notes.push(format!(
            "electric dipole term: matrix value {:.12} vs alpha-free (gamma^2-1)cos^2(phi)B = {:.12} \
             (ratio {:.12}, equal to alpha)",
            electric.matrix_value, electric.alpha_free_value, ratio
        ));
    }

    Ok(ExperimentReport {
        model: SpinModel::Dirac,
        beta: cfg.beta_magnitude,
        phi: cfg.phi,
        gamma: c.gamma,
        rest_fields: c.rest_fields,
        theta: c.theta,
        xi_consistency: c.xi,
        hamiltonian_lab: to_rows(&h_lab),
        hamiltonian_rest: to_rows(&h_rest),
        initial_state: psi.components.iter().copied().collect(),
        detector: detector_for(lab[1]),
        sx_lab_expectation: lab[0],
        rest_expectations: rest_exp,
        lab_energy: covariant_expectation(&h_lab, psi).re(),
        rest_eigenvalue: lambda,
        rest_eigen_residual: resid,
        consistency_ok,
        covariance_ok,
        paradox: !(consistency_ok && covariance_ok),
        electric_dipole_expectation: Some(electric.matrix_value),
        branches: vec![branch],
        notes,
    })
}
