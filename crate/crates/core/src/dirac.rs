//! Dirac spin in the standard (Dirac) representation.
//!
//! The rest-frame spin is 𝒮̃ = ½ diag(σ, σ). Boosting with the spinor
//! representation 𝒟(L) gives the moving-frame spin
//! 𝒮 = γ𝒮̃ − γ²β(β·𝒮̃)/(γ+1) + iγγ₅(𝒮̃×β),
//! which still closes the spin algebra. The same operator comes out of the
//! rest spin tensor (i/4)[γ_α, γ_κ] transformed as a covariant tensor with
//! the inverse boost, and of 𝒟 𝒮̃ 𝒟⁻¹; the tests pin all three together.

use nalgebra::{Vector2, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::classical_spin::{extract_dipoles, spin_vector_from_tensor};
use crate::error::{Result, SpinError};
use crate::operators::{
    anti_hermitian_part, block_diag, commutator, pauli, re, Mat2, Mat4, OperatorTriple,
    OperatorTriple4, C64, I,
};
use crate::tensor::{
    lorentz_factor, pure_boost, transform_rank2, BoostParams, FourVector, Rank2Tensor, Variance,
    METRIC_DIAG,
};
use crate::{COVARIANT_NORM, MASS};

pub type Spinor4 = Vector4<C64>;

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    /// Upper-index γ^μ.
    pub gamma: [Mat4; 4],
    pub gamma5: Mat4,
}

impl GammaSet {
    /// γ_μ = g_μν γ^ν.
    pub fn lower(&self, mu: usize) -> Mat4 {
        self.gamma[mu] * re(METRIC_DIAG[mu])
    }

    /// p^μ γ_μ = p⁰γ⁰ − p·γ.
    pub fn slash(&self, p: &FourVector) -> Mat4 {
        (0..4).fold(Mat4::zeros(), |acc, mu| acc + self.lower(mu) * re(p.0[mu]))
    }
}

fn blocks(a: &Mat2, b: &Mat2, c: &Mat2, d: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

/// γ⁰ = diag(I, −I), γⁱ = ((0, σⁱ), (−σⁱ, 0)), γ₅ = iγ⁰γ¹γ²γ³.
pub fn gamma_matrices() -> GammaSet {
    let id = Mat2::identity();
    let zero = Mat2::zeros();
    let [sx, sy, sz] = pauli();
    let gamma = [
        blocks(&id, &zero, &zero, &(-id)),
        blocks(&zero, &sx, &(-sx), &zero),
        blocks(&zero, &sy, &(-sy), &zero),
        blocks(&zero, &sz, &(-sz), &zero),
    ];
    let gamma5 = gamma[0] * gamma[1] * gamma[2] * gamma[3] * I;
    GammaSet { gamma, gamma5 }
}

/// 𝒮̃ = ½ diag(σ, σ).
pub fn rest_spin_operators() -> OperatorTriple4 {
    OperatorTriple::new(pauli().map(|s| block_diag(&(s * re(0.5)))))
}

/// Spinor representation 𝒟(L) of a pure boost:
/// ((cosh ξ/2, σ·p̂ sinh ξ/2), (σ·p̂ sinh ξ/2, cosh ξ/2)).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorBoost {
    matrix: Mat4,
    beta: Vector3<f64>,
}

impl SpinorBoost {
    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    pub fn beta(&self) -> Vector3<f64> {
        self.beta
    }

    /// 𝒟⁻¹ = γ⁰ 𝒟 γ⁰.
    pub fn inverse(&self) -> Mat4 {
        let g0 = gamma_matrices().gamma[0];
        g0 * self.matrix * g0
    }

    /// 𝒟 A 𝒟⁻¹.
    pub fn conjugate(&self, a: &Mat4) -> Mat4 {
        self.matrix * a * self.inverse()
    }
}

pub fn spinor_boost(beta: &Vector3<f64>) -> Result<SpinorBoost> {
    let params = BoostParams::new(*beta)?;
    let half = params.rapidity / 2.0;
    let n = params.direction;
    let [sx, sy, sz] = pauli();
    let sigma_n = sx * re(n.x) + sy * re(n.y) + sz * re(n.z);
    let ch = Mat2::identity() * re(half.cosh());
    let sh = sigma_n * re(half.sinh());
    Ok(SpinorBoost {
        matrix: blocks(&ch, &sh, &sh, &ch),
        beta: *beta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergySign {
    Positive,
    Negative,
}

impl EnergySign {
    pub fn value(self) -> f64 {
        match self {
            EnergySign::Positive => 1.0,
            EnergySign::Negative => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinProjection {
    Up,
    Down,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiracSpinor {
    pub components: Spinor4,
    pub energy_sign: EnergySign,
    pub momentum: FourVector,
}

impl DiracSpinor {
    pub fn with_phase(&self, chi: f64) -> Self {
        Self {
            components: self.components * C64::from_polar(1.0, chi),
            ..self.clone()
        }
    }

    /// ψ†γ⁰ψ.
    pub fn covariant_norm(&self) -> f64 {
        let g0 = gamma_matrices().gamma[0];
        self.components.dotc(&(g0 * self.components)).re
    }
}

/// Multiplies by a phase so the first nonzero entry is real and positive.
fn fix_phase(v: Vector2<C64>) -> Vector2<C64> {
    match v.iter().find(|z| z.norm() > 1e-12) {
        Some(z) => v * (z.conj() / z.norm()),
        None => v,
    }
}

/// Unit eigenvector of σ·n with eigenvalue ±1.
fn pauli_eigenvector(n: &Vector3<f64>, projection: SpinProjection) -> Vector2<C64> {
    let polar = n.z.clamp(-1.0, 1.0).acos();
    let azimuth = n.y.atan2(n.x);
    let (c, s) = ((polar / 2.0).cos(), (polar / 2.0).sin());
    let v = match projection {
        SpinProjection::Up => Vector2::new(re(c), C64::from_polar(s, azimuth)),
        SpinProjection::Down => Vector2::new(-C64::from_polar(s, -azimuth), re(c)),
    };
    fix_phase(v)
}

/// Rest spinor polarized along `direction`, normalized to ψ†γ⁰ψ = ±2m.
pub fn rest_spinor(
    direction: &Vector3<f64>,
    projection: SpinProjection,
    energy_sign: EnergySign,
) -> Result<DiracSpinor> {
    let len = direction.norm();
    if len <= 0.0 || !len.is_finite() {
        return Err(SpinError::ZeroDirection);
    }
    let chi = pauli_eigenvector(&(direction / len), projection) * re(COVARIANT_NORM.sqrt());
    let zero = re(0.0);
    let components = match energy_sign {
        EnergySign::Positive => Spinor4::new(chi[0], chi[1], zero, zero),
        EnergySign::Negative => Spinor4::new(zero, zero, chi[0], chi[1]),
    };
    Ok(DiracSpinor {
        components,
        energy_sign,
        momentum: FourVector::at_rest(MASS),
    })
}

/// ψ = 𝒟(L) ψ̃, with momentum L p.
pub fn boost_spinor(psi: &DiracSpinor, beta: &Vector3<f64>) -> Result<DiracSpinor> {
    let d = spinor_boost(beta)?;
    let l = pure_boost(*beta)?;
    Ok(DiracSpinor {
        components: d.matrix() * psi.components,
        energy_sign: psi.energy_sign,
        momentum: l.apply(&psi.momentum),
    })
}

/// ‖(p^μγ_μ − s·m)ψ‖₂ with s the energy sign.
pub fn dirac_residual(psi: &DiracSpinor) -> f64 {
    let g = gamma_matrices();
    let op = g.slash(&psi.momentum) - Mat4::identity() * re(psi.energy_sign.value() * MASS);
    (op * psi.components).norm()
}

/// Closed form 𝒮 = γ𝒮̃ − γ²β(β·𝒮̃)/(γ+1) + iγγ₅(𝒮̃×β).
pub fn dirac_spin_vector(beta: &Vector3<f64>) -> Result<OperatorTriple4> {
    let gamma = lorentz_factor(beta)?;
    let g5 = gamma_matrices().gamma5;
    let rest = rest_spin_operators();
    let along = rest.dot(beta) * re(gamma * gamma / (gamma + 1.0));
    let cross = rest.cross(beta);
    Ok(OperatorTriple::new(std::array::from_fn(|i| {
        rest.ops[i] * re(gamma) - along * re(beta[i]) + g5 * cross.ops[i] * (I * gamma)
    })))
}

/// 𝒟(L) 𝒮̃ⁱ 𝒟(L)⁻¹.
pub fn dirac_spin_vector_by_conjugation(beta: &Vector3<f64>) -> Result<OperatorTriple4> {
    let d = spinor_boost(beta)?;
    Ok(rest_spin_operators().map(|s| d.conjugate(s)))
}

/// 𝕊_ακ = (i/4)[γ_α, γ_κ], whose spatial dual is 𝒮̃.
pub fn rest_spin_tensor() -> Rank2Tensor<Mat4> {
    let g = gamma_matrices();
    Rank2Tensor::from_fn(Variance::Covariant, |a, k| {
        commutator(&g.lower(a), &g.lower(k)) * (I * 0.25)
    })
}

/// 𝒮_ακ = L^ρ_α L^λ_κ 𝕊_ρλ, the covariant rest tensor carried with L⁻¹.
pub fn dirac_spin_tensor(beta: &Vector3<f64>) -> Result<Rank2Tensor<Mat4>> {
    let boost = pure_boost(*beta)?;
    Ok(transform_rank2(&boost, &rest_spin_tensor(), true))
}

/// Spin vector read off the boosted tensor with Sⁱ = ½ εⁱʲᵏ 𝒮_jk.
pub fn dirac_spin_vector_by_tensor(beta: &Vector3<f64>) -> Result<OperatorTriple4> {
    Ok(spin_vector_from_tensor(&dirac_spin_tensor(beta)?))
}

/// Electric and magnetic dipole operators (d_D, μ_D) of the Dirac spin:
///
/// d_D = −α(β×𝒮̃) − iαγ₅[𝒮̃ − γβ(β·𝒮̃)/(γ+1)],
/// μ_D = α[𝒮̃ − γβ(β·𝒮̃)/(γ+1)] + iαγ₅(𝒮̃×β).
///
/// The sign of the β×𝒮̃ term is the one produced by the spin tensor
/// transformation above (it is opposite to the classical β×μ̃ term).
pub fn dirac_dipole_operators(
    beta: &Vector3<f64>,
    alpha: f64,
) -> Result<(OperatorTriple4, OperatorTriple4)> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(SpinError::InvalidRatio);
    }
    let gamma = lorentz_factor(beta)?;
    let g5 = gamma_matrices().gamma5;
    let rest = rest_spin_operators();
    let along = rest.dot(beta) * re(gamma / (gamma + 1.0));
    let transverse = OperatorTriple::new(std::array::from_fn(|i| rest.ops[i] - along * re(beta[i])));
    let s_cross_b = rest.cross(beta);
    let electric = OperatorTriple::new(std::array::from_fn(|i| {
        (s_cross_b.ops[i] - g5 * transverse.ops[i] * I) * re(alpha)
    }));
    let magnetic = OperatorTriple::new(std::array::from_fn(|i| {
        (transverse.ops[i] + g5 * s_cross_b.ops[i] * I) * re(alpha)
    }));
    Ok((electric, magnetic))
}

/// Dipole operators read from α𝒮_ακ through dⁱ = D₀ᵢ/γ, μⁱ = (1/2γ)εD_jk.
pub fn dirac_dipoles_by_tensor(
    beta: &Vector3<f64>,
    alpha: f64,
) -> Result<(OperatorTriple4, OperatorTriple4)> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(SpinError::InvalidRatio);
    }
    let gamma = lorentz_factor(beta)?;
    let tensor = dirac_spin_tensor(beta)?.scale(alpha);
    let (d, mu) = extract_dipoles(&tensor, gamma)?;
    Ok((OperatorTriple::new(d), OperatorTriple::new(mu)))
}

/// Covariant expectation value s·ψ†γ⁰Oψ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation {
    pub value: C64,
    /// γ⁰O is Hermitian, so the value is real up to rounding.
    pub guaranteed_real: bool,
}

impl Expectation {
    pub fn re(&self) -> f64 {
        self.value.re
    }
}

pub fn covariant_expectation(op: &Mat4, psi: &DiracSpinor) -> Expectation {
    let g0 = gamma_matrices().gamma[0];
    let weighted = g0 * op;
    let value = psi.components.dotc(&(weighted * psi.components)) * psi.energy_sign.value();
    let scale = crate::operators::max_abs(&weighted).max(1.0);
    Expectation {
        value,
        guaranteed_real: anti_hermitian_part(&weighted) <= 1e-12 * scale,
    }
}
