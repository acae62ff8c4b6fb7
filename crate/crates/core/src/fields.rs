//! Electromagnetic field tensor and the uniform Stern-Gerlach field.
//!
//! Layout of Fᵅᵏ: F⁰ⁱ = −Eⁱ, F¹² = −B³, F¹³ = B², F²³ = −B¹.

use nalgebra::Vector3;

use crate::error::{Result, SpinError};
use crate::tensor::{pure_boost, transform_rank2, LorentzBoost, Rank2Tensor, Variance};

/// Tolerance used when accepting a raw tensor as antisymmetric.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldTensor {
    tensor: Rank2Tensor<f64>,
}

impl FieldTensor {
    pub fn try_from_tensor(tensor: Rank2Tensor<f64>) -> Result<Self> {
        if tensor.variance() != Variance::Contravariant {
            return Err(SpinError::MalformedTensor(
                "field tensor must be contravariant".into(),
            ));
        }
        let defect = tensor.antisymmetry_defect();
        if defect > ANTISYMMETRY_TOL {
            return Err(SpinError::MalformedTensor(format!(
                "field tensor not antisymmetric (defect {defect:e})"
            )));
        }
        Ok(Self { tensor })
    }

    pub fn tensor(&self) -> &Rank2Tensor<f64> {
        &self.tensor
    }

    pub fn electric(&self) -> Vector3<f64> {
        let t = self.tensor.entries();
        Vector3::new(-t[0][1], -t[0][2], -t[0][3])
    }

    pub fn magnetic(&self) -> Vector3<f64> {
        let t = self.tensor.entries();
        Vector3::new(-t[2][3], t[1][3], -t[1][2])
    }
}

pub fn field_tensor_from_eb(e: &Vector3<f64>, b: &Vector3<f64>) -> FieldTensor {
    let entries = [
        [0.0, -e.x, -e.y, -e.z],
        [e.x, 0.0, -b.z, b.y],
        [e.y, b.z, 0.0, -b.x],
        [e.z, -b.y, b.x, 0.0],
    ];
    FieldTensor {
        tensor: Rank2Tensor::new(entries, Variance::Contravariant),
    }
}

/// Reads (E, B) back out of a raw contravariant tensor.
pub fn extract_eb(tensor: &Rank2Tensor<f64>) -> Result<(Vector3<f64>, Vector3<f64>)> {
    let f = FieldTensor::try_from_tensor(tensor.clone())?;
    Ok((f.electric(), f.magnetic()))
}

/// F' = L F Lᵀ (or with L⁻¹).
pub fn boost_fields(f: &FieldTensor, boost: &LorentzBoost, inverse: bool) -> FieldTensor {
    FieldTensor {
        tensor: transform_rank2(boost, &f.tensor, inverse),
    }
}

/// Lorentz invariants (B² − E², E·B).
pub fn field_invariants(f: &FieldTensor) -> (f64, f64) {
    let e = f.electric();
    let b = f.magnetic();
    (b.norm_squared() - e.norm_squared(), e.dot(&b))
}

/// Laboratory setup: uniform field B along +y, particle moving in the x–y
/// plane at azimuth φ from the x-axis with speed β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    pub b_magnitude: f64,
    pub phi: f64,
    pub beta_magnitude: f64,
}

impl FieldConfig {
    pub fn new(b_magnitude: f64, phi: f64, beta_magnitude: f64) -> Result<Self> {
        let cfg = Self {
            b_magnitude,
            phi,
            beta_magnitude,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_gamma(b_magnitude: f64, phi: f64, gamma: f64) -> Result<Self> {
        if gamma < 1.0 || !gamma.is_finite() {
            return Err(SpinError::InvalidFactor { gamma });
        }
        Self::new(b_magnitude, phi, (1.0 - 1.0 / (gamma * gamma)).sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        if !self.b_magnitude.is_finite() || !self.phi.is_finite() {
            return Err(SpinError::NonFinite("field configuration"));
        }
        if !self.beta_magnitude.is_finite() || self.beta_magnitude < 0.0 {
            return Err(SpinError::InvalidConfig(format!(
                "speed must be a finite non-negative number, got {}",
                self.beta_magnitude
            )));
        }
        if self.beta_magnitude >= 1.0 {
            return Err(SpinError::Superluminal {
                speed: self.beta_magnitude,
            });
        }
        Ok(())
    }

    pub fn beta(&self) -> Vector3<f64> {
        self.beta_magnitude * Vector3::new(self.phi.cos(), self.phi.sin(), 0.0)
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.beta_magnitude * self.beta_magnitude).sqrt()
    }

    pub fn boost(&self) -> LorentzBoost {
        pure_boost(self.beta()).expect("validated speed")
    }

    pub fn lab_magnetic(&self) -> Vector3<f64> {
        Vector3::new(0.0, self.b_magnitude, 0.0)
    }

    pub fn lab_tensor(&self) -> FieldTensor {
        field_tensor_from_eb(&Vector3::zeros(), &self.lab_magnetic())
    }
}

/// Rest-frame fields in closed form:
/// Ẽ = −γβ cosφ B ẑ,
/// B̃ = ((1−γ) sinφ cosφ B, (sin²φ + γ cos²φ) B, 0).
pub fn rest_frame_fields(cfg: &FieldConfig) -> (Vector3<f64>, Vector3<f64>) {
    let gamma = cfg.gamma();
    let b = cfg.b_magnitude;
    let (s, c) = cfg.phi.sin_cos();
    let e = Vector3::new(0.0, 0.0, -gamma * cfg.beta_magnitude * c * b);
    let m = Vector3::new((1.0 - gamma) * s * c * b, (s * s + gamma * c * c) * b, 0.0);
    (e, m)
}

/// Rest-frame fields through the tensor congruence. The lab tensor is
/// carried with L(+β) directly, which is the direction that reproduces
/// [`rest_frame_fields`] including the sign of Ẽ.
pub fn rest_frame_tensor(cfg: &FieldConfig) -> FieldTensor {
    boost_fields(&cfg.lab_tensor(), &cfg.boost(), false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn zero_fields_give_zero_tensor() {
        let f = field_tensor_from_eb(&Vector3::zeros(), &Vector3::zeros());
        assert_eq!(f.tensor().max_diff(&Rank2Tensor::zero(Variance::Contravariant)), 0.0);
    }

    #[test]
    fn magnetic_y_layout() {
        let f = field_tensor_from_eb(&Vector3::zeros(), &Vector3::new(0.0, 2.5, 0.0));
        let t = f.tensor().entries();
        for a in 0..4 {
            for b in 0..4 {
                let expect = match (a, b) {
                    (1, 3) => 2.5,
                    (3, 1) => -2.5,
                    _ => 0.0,
                };
                assert_eq!(t[a][b], expect, "entry ({a},{b})");
            }
        }
    }

    #[test]
    fn round_trip_eb() {
        let cases = [
            (Vector3::new(0.3, -1.2, 0.8), Vector3::new(-0.4, 0.1, 2.2)),
            (Vector3::new(5.0, 0.0, -3.0), Vector3::new(1e-3, -7.0, 0.5)),
            (Vector3::new(-0.01, 0.02, 0.03), Vector3::new(9.0, 8.0, -7.0)),
        ];
        for (e, b) in cases {
            let (e2, b2) = extract_eb(field_tensor_from_eb(&e, &b).tensor()).unwrap();
            assert!((e - e2).amax() < 1e-14);
            assert!((b - b2).amax() < 1e-14);
        }
    }

    #[test]
    fn non_antisymmetric_rejected() {
        let mut entries = *field_tensor_from_eb(&Vector3::x(), &Vector3::y()).tensor().entries();
        entries[1][2] += 0.5;
        let t = Rank2Tensor::new(entries, Variance::Contravariant);
        assert!(matches!(extract_eb(&t), Err(SpinError::MalformedTensor(_))));
        let cov = Rank2Tensor::new([[0.0; 4]; 4], Variance::Covariant);
        assert!(matches!(extract_eb(&cov), Err(SpinError::MalformedTensor(_))));
    }

    #[test]
    fn parallel_boost_leaves_pure_b_unchanged() {
        let f = field_tensor_from_eb(&Vector3::zeros(), &Vector3::new(0.0, 1.3, 0.0));
        let l = pure_boost(Vector3::new(0.0, 0.9, 0.0)).unwrap();
        let out = boost_fields(&f, &l, false);
        assert!(out.tensor().max_diff(f.tensor()) < 1e-14);
    }

    #[test]
    fn oblique_boost_example() {
        let cfg = FieldConfig::new(1.0, FRAC_PI_4, 0.8660254).unwrap();
        let rest = rest_frame_tensor(&cfg);
        let e = rest.electric();
        let b = rest.magnetic();
        assert!((e - Vector3::new(0.0, 0.0, -1.2247449)).amax() < 1e-6);
        assert!((b - Vector3::new(-0.5, 1.5, 0.0)).amax() < 1e-6);
    }

    #[test]
    fn closed_form_examples() {
        let cfg = FieldConfig::new(1.0, FRAC_PI_2, 0.7).unwrap();
        let (e, b) = rest_frame_fields(&cfg);
        assert!(e.amax() < 1e-15);
        assert!((b - Vector3::new(0.0, 1.0, 0.0)).amax() < 1e-15);

        let cfg = FieldConfig::with_gamma(1.0, FRAC_PI_4, 2.0).unwrap();
        let (e, b) = rest_frame_fields(&cfg);
        // −γβcosφ = −2·(√3/2)·(1/√2) = −√1.5
        assert!((e.z + 1.5_f64.sqrt()).abs() < 1e-12);
        assert!((b - Vector3::new(-0.5, 1.5, 0.0)).amax() < 1e-12);
        // 0.25 + 2.25 − 1.5 = 1
        assert!((b.norm_squared() - e.norm_squared() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invariants_examples() {
        let f = field_tensor_from_eb(&Vector3::zeros(), &Vector3::y());
        assert_eq!(field_invariants(&f), (1.0, 0.0));
        let null = field_tensor_from_eb(&Vector3::x(), &Vector3::y());
        assert_eq!(field_invariants(&null), (0.0, 0.0));
    }

    #[test]
    fn config_validation() {
        assert!(matches!(
            FieldConfig::new(1.0, 0.0, 1.0),
            Err(SpinError::Superluminal { .. })
        ));
        assert!(FieldConfig::new(1.0, 0.0, -0.1).is_err());
        assert!(matches!(
            FieldConfig::with_gamma(1.0, 0.0, 0.5),
            Err(SpinError::InvalidFactor { .. })
        ));
    }
}
