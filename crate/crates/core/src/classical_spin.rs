//! Relativistic spin built from the classical dipole-moment tensor, and the
//! classical Stern-Gerlach Hamiltonians in the lab and rest frames.
//!
//! In the rest frame the spin is S̃ = σ/2, the magnetic moment is μ̃ = αS̃
//! and there is no intrinsic electric dipole. The moving-frame spin follows
//! from S_μν = D_μν/α and Sⁱ = ½ εⁱʲᵏ S_jk.

use nalgebra::{Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::fields::{rest_frame_fields, FieldConfig};
use crate::operators::{pauli, re, Mat2, OperatorTriple, OperatorTriple2, TensorEntry, C64};
use crate::tensor::{
    lorentz_factor, pure_boost, spatial_dual, transform_rank2, LorentzBoost, Rank2Tensor,
    Variance,
};
use crate::COVARIANT_NORM;

pub const ANTISYMMETRY_TOL: f64 = 1e-12;

/// Covariant dipole tensor D_ακ = γ (0, d; −d, ε μ).
#[derive(Debug, Clone, PartialEq)]
pub struct DipoleTensor<T> {
    tensor: Rank2Tensor<T>,
    gamma: f64,
}

impl<T: TensorEntry> DipoleTensor<T> {
    pub fn tensor(&self) -> &Rank2Tensor<T> {
        &self.tensor
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The tensor as seen from a frame in which the particle moves with the
    /// boost's velocity. `self` must be the rest-frame tensor.
    pub fn boosted(&self, boost: &LorentzBoost) -> Result<Self> {
        if (self.gamma - 1.0).abs() > 1e-15 {
            return Err(SpinError::InvalidFactor { gamma: self.gamma });
        }
        Ok(Self {
            tensor: transform_rank2(boost, &self.tensor, false),
            gamma: boost.gamma(),
        })
    }

    pub fn dipoles(&self) -> Result<([T; 3], [T; 3])> {
        extract_dipoles(&self.tensor, self.gamma)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma >= 1.0 {
        Ok(())
    } else {
        Err(SpinError::InvalidFactor { gamma })
    }
}

pub fn dipole_tensor<T: TensorEntry>(d: &[T; 3], mu: &[T; 3], gamma: f64) -> Result<DipoleTensor<T>> {
    check_gamma(gamma)?;
    let z = T::zero;
    let [d1, d2, d3] = d.clone().map(|x| x.scale(gamma));
    let [m1, m2, m3] = mu.clone().map(|x| x.scale(gamma));
    let entries = [
        [z(), d1.clone(), d2.clone(), d3.clone()],
        [-d1, z(), m3.clone(), -m2.clone()],
        [-d2, -m3, z(), m1.clone()],
        [-d3, m2, -m1, z()],
    ];
    Ok(DipoleTensor {
        tensor: Rank2Tensor::new(entries, Variance::Covariant),
        gamma,
    })
}

/// dⁱ = D₀ᵢ/γ and μⁱ = (1/2γ) εᵢⱼₖ Dⱼₖ.
pub fn extract_dipoles<T: TensorEntry>(d: &Rank2Tensor<T>, gamma: f64) -> Result<([T; 3], [T; 3])> {
    check_gamma(gamma)?;
    if d.variance() != Variance::Covariant {
        return Err(SpinError::MalformedTensor(
            "dipole tensor must be covariant".into(),
        ));
    }
    let defect = d.antisymmetry_defect();
    if defect > ANTISYMMETRY_TOL {
        return Err(SpinError::MalformedTensor(format!(
            "dipole tensor not antisymmetric (defect {defect:e})"
        )));
    }
    let e = d.entries();
    let electric = std::array::from_fn(|i| e[0][i + 1].scale(1.0 / gamma));
    let magnetic = spatial_dual(d).map(|m| m.scale(1.0 / gamma));
    Ok((electric, magnetic))
}

/// Closed-form moving-frame dipoles:
/// d = d̃ + β×μ̃ − γβ(β·d̃)/(γ+1),
/// μ = μ̃ − β×d̃ − γβ(β·μ̃)/(γ+1).
pub fn transform_dipoles(
    d_rest: &Vector3<f64>,
    mu_rest: &Vector3<f64>,
    beta: &Vector3<f64>,
) -> Result<(Vector3<f64>, Vector3<f64>)> {
    let gamma = lorentz_factor(beta)?;
    let k = gamma / (gamma + 1.0);
    let d = d_rest + beta.cross(mu_rest) - beta * (k * beta.dot(d_rest));
    let mu = mu_rest - beta.cross(d_rest) - beta * (k * beta.dot(mu_rest));
    Ok((d, mu))
}

/// Same transformation through the tensor: build D̃, boost it, read d and μ.
pub fn transform_dipoles_by_tensor(
    d_rest: &Vector3<f64>,
    mu_rest: &Vector3<f64>,
    beta: &Vector3<f64>,
) -> Result<(Vector3<f64>, Vector3<f64>)> {
    let boost = pure_boost(*beta)?;
    let rest = dipole_tensor(&array(d_rest), &array(mu_rest), 1.0)?;
    let (d, mu) = rest.boosted(&boost)?.dipoles()?;
    Ok((Vector3::from(d), Vector3::from(mu)))
}

fn array(v: &Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// S̃ = σ/2.
pub fn rest_spin() -> OperatorTriple2 {
    OperatorTriple::new(pauli()).map(|s| s * re(0.5))
}

/// S_μν = D_μν/α with d̃ = 0 and μ̃ = αS̃, boosted to velocity β.
pub fn relativistic_spin_tensor(beta: &Vector3<f64>, alpha: f64) -> Result<Rank2Tensor<Mat2>> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(SpinError::InvalidRatio);
    }
    let boost = pure_boost(*beta)?;
    let mu_rest = rest_spin().ops.map(|s| s * re(alpha));
    let rest = dipole_tensor(&[Mat2::zeros(); 3], &mu_rest, 1.0)?;
    Ok(rest.boosted(&boost)?.tensor().scale(1.0 / alpha))
}

/// Sⁱ = ½ εⁱʲᵏ S_jk.
pub fn spin_vector_from_tensor<const N: usize>(
    t: &Rank2Tensor<nalgebra::SMatrix<C64, N, N>>,
) -> OperatorTriple<N> {
    OperatorTriple::new(spatial_dual(t))
}

/// S = γS̃ − γ²β(β·S̃)/(γ+1), in the 2×2 representation.
pub fn relativistic_spin_vector(beta: &Vector3<f64>) -> Result<OperatorTriple2> {
    let gamma = lorentz_factor(beta)?;
    let rest = rest_spin();
    let along = rest.dot(beta) * re(gamma * gamma / (gamma + 1.0));
    Ok(OperatorTriple::new(std::array::from_fn(|i| {
        rest.ops[i] * re(gamma) - along * re(beta[i])
    })))
}

/// H = −(α/γ) Sʸ B.
pub fn classical_sg_lab(cfg: &FieldConfig, alpha: f64) -> Mat2 {
    let spin = relativistic_spin_vector(&cfg.beta()).expect("validated speed");
    spin.y() * re(-alpha * cfg.b_magnitude / cfg.gamma())
}

/// H̃ = −α B̃^θ S̃^θ with S̃^θ = S̃ˣcosθ + S̃ʸsinθ.
pub fn classical_sg_rest(cfg: &FieldConfig, alpha: f64) -> Mat2 {
    let (_, b) = rest_frame_fields(cfg);
    let b_theta = b.x.hypot(b.y);
    let theta = b.y.atan2(b.x);
    let rest = rest_spin();
    let s_theta = rest.x() * re(theta.cos()) + rest.y() * re(theta.sin());
    s_theta * re(-alpha * b_theta)
}

/// Azimuth of the rest-frame magnetic field:
/// tanθ = (sin²φ + γcos²φ) / ((1−γ) sinφ cosφ).
pub fn theta_angle(phi: f64, gamma: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    (s * s + gamma * c * c).atan2((1.0 - gamma) * s * c)
}

/// Rest-frame azimuth a state must have for the lab ⟨Sˣ⟩ to vanish:
/// tanξ = (cos²φ + γsin²φ) / ((γ−1) cosφ sinφ).
pub fn xi_consistency_angle(phi: f64, gamma: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    (c * c + gamma * s * s).atan2((gamma - 1.0) * c * s)
}

/// Two-component spin state in the x–y plane of the rest frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarState {
    pub amplitudes: [C64; 2],
    pub theta: f64,
}

impl PlanarState {
    pub fn vector(&self) -> Vector2<C64> {
        Vector2::new(self.amplitudes[0], self.amplitudes[1])
    }

    pub fn norm(&self) -> f64 {
        self.vector().norm()
    }

    pub fn inner(&self, other: &PlanarState) -> C64 {
        self.vector().dotc(&other.vector())
    }

    pub fn with_phase(&self, chi: f64) -> Self {
        let p = C64::from_polar(1.0, chi);
        Self {
            amplitudes: self.amplitudes.map(|a| a * p),
            theta: self.theta,
        }
    }

    /// 2⟨u|O|u⟩, the covariant-norm expectation (real part).
    pub fn expectation(&self, op: &Mat2) -> f64 {
        let v = self.vector();
        COVARIANT_NORM * v.dotc(&(op * v)).re
    }

    /// ‖O u − λ u‖ with λ the Rayleigh quotient ⟨u|O|u⟩/⟨u|u⟩.
    pub fn eigen_residual(&self, op: &Mat2) -> (C64, f64) {
        let v = self.vector();
        let ov = op * v;
        let lambda = v.dotc(&ov) / v.dotc(&v);
        (lambda, (ov - v * lambda).norm() / v.norm())
    }
}

/// |u_θ⟩ = (e^{−iθ/2}, e^{iθ/2})/√2 and |d_θ⟩ = (e^{−iθ/2}, −e^{iθ/2})/√2,
/// the ±½ eigenstates of S̃^θ.
pub fn planar_eigenstates(theta: f64) -> (PlanarState, PlanarState) {
    let k = std::f64::consts::FRAC_1_SQRT_2;
    let a = C64::from_polar(k, -theta / 2.0);
    let b = C64::from_polar(k, theta / 2.0);
    (
        PlanarState {
            amplitudes: [a, b],
            theta,
        },
        PlanarState {
            amplitudes: [a, -b],
            theta,
        },
    )
}

fn in_plane_beta(phi: f64, gamma: f64) -> Result<Vector3<f64>> {
    check_gamma(gamma)?;
    let speed = (1.0 - 1.0 / (gamma * gamma)).sqrt();
    Ok(speed * Vector3::new(phi.cos(), phi.sin(), 0.0))
}

/// Lab ⟨Sˣ⟩ in |u_θ⟩, computed with matrices.
pub fn lab_sx_expectation(phi: f64, gamma: f64) -> Result<f64> {
    let spin = relativistic_spin_vector(&in_plane_beta(phi, gamma)?)?;
    let (up, _) = planar_eigenstates(theta_angle(phi, gamma));
    Ok(up.expectation(spin.x()))
}

/// (1−γ²) sinφ cosφ / √(sin²φ + γ²cos²φ).
pub fn lab_sx_expectation_closed_form(phi: f64, gamma: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    (1.0 - gamma * gamma) * s * c / (s * s + gamma * gamma * c * c).sqrt()
}

/// Eigenvalue of the lab Sʸ on |u_θ⟩: Sʸ = S̃·B̃/B, so it is |B̃|/(2B).
pub fn lab_sy_eigenvalue(phi: f64, gamma: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    0.5 * (s * s + gamma * gamma * c * c).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{max_abs, spin_algebra_residual};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn gamma2_pi4() -> FieldConfig {
        FieldConfig::with_gamma(1.0, FRAC_PI_4, 2.0).unwrap()
    }

    #[test]
    fn zero_dipoles_zero_tensor() {
        let d = dipole_tensor(&[0.0; 3], &[0.0; 3], 1.3).unwrap();
        assert_eq!(d.tensor().max_diff(&Rank2Tensor::zero(Variance::Covariant)), 0.0);
    }

    #[test]
    fn magnetic_z_layout() {
        let d = dipole_tensor(&[0.0; 3], &[0.0, 0.0, 0.7], 1.0).unwrap();
        let e = d.tensor().entries();
        for a in 0..4 {
            for b in 0..4 {
                let expect = match (a, b) {
                    (1, 2) => 0.7,
                    (2, 1) => -0.7,
                    _ => 0.0,
                };
                assert_eq!(e[a][b], expect);
            }
        }
    }

    #[test]
    fn invalid_gamma_and_ratio() {
        assert!(matches!(
            dipole_tensor(&[0.0; 3], &[0.0; 3], 0.9),
            Err(SpinError::InvalidFactor { .. })
        ));
        assert!(matches!(
            relativistic_spin_tensor(&Vector3::x(), 1.0),
            Err(SpinError::Superluminal { .. })
        ));
        assert!(matches!(
            relativistic_spin_tensor(&(Vector3::x() * 0.3), 0.0),
            Err(SpinError::InvalidRatio)
        ));
    }

    #[test]
    fn dipoles_round_trip() {
        let cases = [
            ([0.1, -0.2, 0.3], [1.0, 2.0, -3.0], 1.0),
            ([4.0, 0.5, -0.5], [0.0, -1.5, 0.25], 2.7),
            ([-1e-3, 7.0, 2.0], [3.3, 0.0, 0.1], 11.0),
        ];
        for (d, mu, g) in cases {
            let (d2, mu2) = dipole_tensor(&d, &mu, g).unwrap().dipoles().unwrap();
            for i in 0..3 {
                assert!((d[i] - d2[i]).abs() < 1e-14);
                assert!((mu[i] - mu2[i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn malformed_dipole_tensor_rejected() {
        let mut e = *dipole_tensor(&[1.0; 3], &[1.0; 3], 1.0).unwrap().tensor().entries();
        e[0][2] = 3.0;
        let t = Rank2Tensor::new(e, Variance::Covariant);
        assert!(matches!(extract_dipoles(&t, 1.0), Err(SpinError::MalformedTensor(_))));
    }

    #[test]
    fn transform_dipoles_examples() {
        let d = Vector3::new(0.2, 0.0, -0.4);
        let m = Vector3::new(1.0, 0.5, 0.0);
        let (d2, m2) = transform_dipoles(&d, &m, &Vector3::zeros()).unwrap();
        assert_eq!((d2, m2), (d, m));

        // β x̂ × μ ŷ = +βμ ẑ
        let (beta, mu) = (0.6, 1.7);
        let (d2, m2) =
            transform_dipoles(&Vector3::zeros(), &Vector3::new(0.0, mu, 0.0), &(Vector3::x() * beta))
                .unwrap();
        assert!((d2 - Vector3::new(0.0, 0.0, beta * mu)).amax() < 1e-15);
        assert!((m2 - Vector3::new(0.0, mu, 0.0)).amax() < 1e-15);

        // μ̃ ∥ β: μ = μ̃/γ
        let beta = Vector3::new(0.3, 0.4, 0.0);
        let mu_rest = beta * 2.0;
        let gamma = lorentz_factor(&beta).unwrap();
        let (_, m2) = transform_dipoles(&Vector3::zeros(), &mu_rest, &beta).unwrap();
        assert!((m2 - mu_rest / gamma).amax() < 1e-15);
    }

    #[test]
    fn spin_vector_at_rest_is_half_pauli() {
        let s = relativistic_spin_vector(&Vector3::zeros()).unwrap();
        assert!(s.max_diff(&rest_spin()) == 0.0);
        let t = relativistic_spin_tensor(&Vector3::zeros(), 1.0).unwrap();
        assert!(spin_vector_from_tensor(&t).max_diff(&rest_spin()) < 1e-15);
    }

    #[test]
    fn collinear_boost_keeps_parallel_component() {
        let beta = 0.6;
        let gamma = 1.25;
        let s = relativistic_spin_vector(&(Vector3::x() * beta)).unwrap();
        let half = rest_spin();
        assert!(max_abs(&(s.x() - half.x())) < 1e-15);
        assert!(max_abs(&(s.y() - half.y() * re(gamma))) < 1e-15);
        assert!(max_abs(&(s.z() - half.z() * re(gamma))) < 1e-15);
    }

    #[test]
    fn spin_tensor_matches_closed_form() {
        for beta in [
            Vector3::new(0.6, 0.0, 0.0),
            Vector3::new(0.1, -0.5, 0.7),
            Vector3::new(0.61237, 0.61237, 0.0),
        ] {
            let t = relativistic_spin_tensor(&beta, 2.3).unwrap();
            assert!(t.is_antisymmetric(1e-14));
            let via_tensor = spin_vector_from_tensor(&t);
            let closed = relativistic_spin_vector(&beta).unwrap();
            assert!(via_tensor.max_diff(&closed) < 1e-12);
            assert!(closed.max_trace() < 1e-14);
        }
    }

    #[test]
    fn algebra_residual_regression() {
        // S = (σx/2, γσy/2, γσz/2) for β along x. [Sʸ, Sᶻ] = iγ²σˣ/2 while
        // iSˣ = iσˣ/2, so the residual is (γ² − 1)/2 = 0.28125 at γ = 1.25.
        let s = relativistic_spin_vector(&Vector3::new(0.6, 0.0, 0.0)).unwrap();
        let r = spin_algebra_residual(&s);
        assert!(r > 1e-3);
        assert!((r - 0.28125).abs() < 1e-14);
    }

    #[test]
    fn hamiltonian_examples() {
        let rest = FieldConfig::new(1.0, 0.3, 0.0).unwrap();
        let h = classical_sg_lab(&rest, 1.0);
        assert!(max_abs(&(h - pauli()[1] * re(-0.5))) < 1e-15);

        // motion along B: Sʸ = σʸ/2, eigenvalues ∓αB/2γ·... reduce to ∓αB/(2γ)
        let along = FieldConfig::new(2.0, FRAC_PI_2, 0.8).unwrap();
        let h = classical_sg_lab(&along, 1.5);
        let eig = h.symmetric_eigenvalues();
        let expect = 1.5 * 2.0 / (2.0 * along.gamma());
        let mut e: Vec<f64> = eig.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        assert!((e[0] + expect).abs() < 1e-12 && (e[1] - expect).abs() < 1e-12);

        let h_rest = classical_sg_rest(&along, 1.5);
        assert!(max_abs(&(h_rest - pauli()[1] * re(-1.5 * 2.0 / 2.0))) < 1e-12);
    }

    #[test]
    fn rest_hamiltonian_field_magnitude() {
        let cfg = gamma2_pi4();
        let h = classical_sg_rest(&cfg, 1.0);
        // eigenvalues ±B̃^θ/2 with B̃^θ = √(0.25 + 2.25)
        let e = h.symmetric_eigenvalues();
        let b_theta = 2.5_f64.sqrt();
        assert!((b_theta - 1.5811388).abs() < 1e-7);
        assert!((e.amax() - b_theta / 2.0).abs() < 1e-12);
        assert!(max_abs(&(classical_sg_lab(&cfg, 1.0) * re(cfg.gamma()) - h)) < 1e-12);
    }

    #[test]
    fn angle_examples() {
        for phi in [0.0, 0.4, 1.0, 2.0] {
            assert!((theta_angle(phi, 1.0) - FRAC_PI_2).abs() < 1e-15);
            assert!((xi_consistency_angle(phi, 1.0) - FRAC_PI_2).abs() < 1e-15);
        }
        assert!((theta_angle(FRAC_PI_4, 2.0).tan() + 3.0).abs() < 1e-12);
        assert!((xi_consistency_angle(FRAC_PI_4, 2.0).tan() - 3.0).abs() < 1e-12);
        assert!((theta_angle(0.0, 3.0) - FRAC_PI_2).abs() < 1e-15);
        assert!((xi_consistency_angle(FRAC_PI_2, 3.0) - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn planar_eigenstate_examples() {
        let (u, d) = planar_eigenstates(0.0);
        let k = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u.amplitudes[0] - re(k)).norm() < 1e-15);
        assert!((u.amplitudes[1] - re(k)).norm() < 1e-15);
        let (_, resid) = u.eigen_residual(&pauli()[0]);
        assert!(resid < 1e-15);
        assert!(u.inner(&d).norm() < 1e-15);

        let theta = 1.2;
        let (u, d) = planar_eigenstates(theta);
        let rest = rest_spin();
        let ratio = u.expectation(rest.y()) / u.expectation(rest.x());
        assert!((ratio - theta.tan()).abs() < 1e-12);
        assert!((u.norm() - 1.0).abs() < 1e-15);
        let s_theta = rest.x() * re(theta.cos()) + rest.y() * re(theta.sin());
        let (lu, ru) = u.eigen_residual(&s_theta);
        let (ld, rd) = d.eigen_residual(&s_theta);
        assert!(ru < 1e-15 && rd < 1e-15);
        assert!((lu - re(0.5)).norm() < 1e-15 && (ld + re(0.5)).norm() < 1e-15);
    }

    #[test]
    fn lab_sx_examples() {
        for phi in [0.0, 0.3, 1.1] {
            assert!(lab_sx_expectation(phi, 1.0).unwrap().abs() < 1e-15);
        }
        assert!(lab_sx_expectation(FRAC_PI_2, 4.0).unwrap().abs() < 1e-12);
        let v = lab_sx_expectation(FRAC_PI_4, 2.0).unwrap();
        // −1.5/√2.5
        assert!((v + 0.9486833).abs() < 1e-7);
        assert!((v - lab_sx_expectation_closed_form(FRAC_PI_4, 2.0)).abs() < 1e-12);
    }

    #[test]
    fn up_state_is_lab_sy_eigenvector() {
        for (phi, gamma) in [(FRAC_PI_4, 2.0), (0.2, 1.25), (1.3, 5.0), (0.0, 3.0)] {
            let beta = in_plane_beta(phi, gamma).unwrap();
            let s = relativistic_spin_vector(&beta).unwrap();
            let (u, _) = planar_eigenstates(theta_angle(phi, gamma));
            let (lambda, resid) = u.eigen_residual(s.y());
            assert!(resid < 1e-10);
            assert!((lambda - re(lab_sy_eigenvalue(phi, gamma))).norm() < 1e-12);
        }
        // only motion along B gives the eigenvalue ½
        assert!((lab_sy_eigenvalue(FRAC_PI_2, 7.0) - 0.5).abs() < 1e-15);
    }
}
