//! Minkowski space-time primitives: metric, four-vectors, pure boosts and
//! rank-2 tensor transformation.
//!
//! The metric is diag(+, −, −, −). Every index raise or lower goes through
//! [`lower`] so that the signature lives in one place.

use nalgebra::{Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::operators::TensorEntry;

pub const METRIC_DIAG: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

pub fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::from(METRIC_DIAG))
}

/// g M g, i.e. the index-lowered (or raised) form of a mixed matrix.
pub fn lower(m: &Matrix4<f64>) -> Matrix4<f64> {
    let g = metric();
    g * m * g
}

/// Contravariant four-vector, index 0 is time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self([t, x, y, z])
    }

    /// p̃ = (m, 0, 0, 0).
    pub fn at_rest(mass: f64) -> Self {
        Self([mass, 0.0, 0.0, 0.0])
    }

    pub fn time(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> Vector3<f64> {
        Vector3::new(self.0[1], self.0[2], self.0[3])
    }

    pub fn as_vector(&self) -> Vector4<f64> {
        Vector4::from(self.0)
    }
}

/// u⁰v⁰ − u·v.
pub fn minkowski_inner(u: &FourVector, v: &FourVector) -> f64 {
    (0..4).map(|a| METRIC_DIAG[a] * u.0[a] * v.0[a]).sum()
}

fn check_velocity(beta: &Vector3<f64>) -> Result<f64> {
    if !beta.iter().all(|b| b.is_finite()) {
        return Err(SpinError::NonFinite("velocity"));
    }
    let speed = beta.norm();
    if speed >= 1.0 {
        return Err(SpinError::Superluminal { speed });
    }
    Ok(speed)
}

/// γ = 1/√(1 − β²).
pub fn lorentz_factor(beta: &Vector3<f64>) -> Result<f64> {
    let speed = check_velocity(beta)?;
    Ok(1.0 / (1.0 - speed * speed).sqrt())
}

/// Derived parameters of a velocity β (in units of c).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostParams {
    pub beta: Vector3<f64>,
    pub gamma: f64,
    pub rapidity: f64,
    /// β/‖β‖, or the zero vector at rest.
    pub direction: Vector3<f64>,
}

impl BoostParams {
    pub fn new(beta: Vector3<f64>) -> Result<Self> {
        let speed = check_velocity(&beta)?;
        let direction = if speed > 0.0 {
            beta / speed
        } else {
            Vector3::zeros()
        };
        Ok(Self {
            beta,
            gamma: 1.0 / (1.0 - speed * speed).sqrt(),
            rapidity: speed.atanh(),
            direction,
        })
    }

    pub fn speed(&self) -> f64 {
        self.beta.norm()
    }
}

/// Pure boost Lᵅ_ρ mapping rest-frame components to those of a frame in
/// which the particle moves with velocity β: p = L p̃.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzBoost {
    matrix: Matrix4<f64>,
    params: BoostParams,
}

impl LorentzBoost {
    pub fn new(beta: Vector3<f64>) -> Result<Self> {
        let params = BoostParams::new(beta)?;
        let gamma = params.gamma;
        let speed2 = beta.norm_squared();
        let mut m = Matrix4::identity();
        m[(0, 0)] = gamma;
        for i in 0..3 {
            m[(0, i + 1)] = gamma * beta[i];
            m[(i + 1, 0)] = gamma * beta[i];
            if speed2 > 0.0 {
                for j in 0..3 {
                    m[(i + 1, j + 1)] += (gamma - 1.0) * beta[i] * beta[j] / speed2;
                }
            }
        }
        Ok(Self { matrix: m, params })
    }

    pub fn identity() -> Self {
        Self::new(Vector3::zeros()).expect("rest frame is admissible")
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.matrix
    }

    pub fn params(&self) -> &BoostParams {
        &self.params
    }

    pub fn gamma(&self) -> f64 {
        self.params.gamma
    }

    pub fn beta(&self) -> Vector3<f64> {
        self.params.beta
    }

    /// The boost with velocity −β, which is L⁻¹ for a pure boost.
    pub fn inverse(&self) -> Self {
        Self::new(-self.params.beta).expect("negated admissible velocity is admissible")
    }

    pub fn apply(&self, v: &FourVector) -> FourVector {
        let out = self.matrix * v.as_vector();
        FourVector([out[0], out[1], out[2], out[3]])
    }
}

pub fn pure_boost(beta: Vector3<f64>) -> Result<LorentzBoost> {
    LorentzBoost::new(beta)
}

/// Position of the indices of a rank-2 tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    /// Tᵅᵏ
    Contravariant,
    /// Tₐₖ
    Covariant,
    /// Tᵅ_ₖ
    Mixed,
}

/// 4×4 array of tensor entries with an index-position tag. Entries are
/// scalars for field tensors and complex matrices for operator-valued spin
/// tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank2Tensor<T> {
    entries: [[T; 4]; 4],
    variance: Variance,
}

impl<T: TensorEntry> Rank2Tensor<T> {
    pub fn new(entries: [[T; 4]; 4], variance: Variance) -> Self {
        Self { entries, variance }
    }

    pub fn zero(variance: Variance) -> Self {
        Self::from_fn(variance, |_, _| T::zero())
    }

    pub fn from_fn(variance: Variance, f: impl Fn(usize, usize) -> T) -> Self {
        let entries = std::array::from_fn(|a| std::array::from_fn(|b| f(a, b)));
        Self { entries, variance }
    }

    pub fn get(&self, a: usize, b: usize) -> &T {
        &self.entries[a][b]
    }

    pub fn entries(&self) -> &[[T; 4]; 4] {
        &self.entries
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_fn(self.variance, |a, b| self.entries[a][b].scale(k))
    }

    /// max |T_ab + T_ba|.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for a in 0..4 {
            for b in a..4 {
                let s = self.entries[a][b].clone() + self.entries[b][a].clone();
                worst = worst.max(s.magnitude());
            }
        }
        worst
    }

    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        self.antisymmetry_defect() <= tol
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for a in 0..4 {
            for b in 0..4 {
                let d = self.entries[a][b].clone() - other.entries[a][b].clone();
                worst = worst.max(d.magnitude());
            }
        }
        worst
    }

    /// Relabels the index positions by contracting with the metric:
    /// every time-space entry flips sign when exactly one index moves.
    pub fn with_variance(&self, target: Variance) -> Self {
        let sign_first = |v: Variance| match v {
            Variance::Contravariant | Variance::Mixed => 0,
            Variance::Covariant => 1,
        };
        let sign_second = |v: Variance| match v {
            Variance::Contravariant => 0,
            Variance::Covariant | Variance::Mixed => 1,
        };
        let flip1 = sign_first(self.variance) != sign_first(target);
        let flip2 = sign_second(self.variance) != sign_second(target);
        Self::from_fn(target, |a, b| {
            let mut k = 1.0;
            if flip1 {
                k *= METRIC_DIAG[a];
            }
            if flip2 {
                k *= METRIC_DIAG[b];
            }
            self.entries[a][b].scale(k)
        })
    }
}

/// Spatial dual ½ εⁱʲᵏ T_jk of the space-space block.
pub fn spatial_dual<T: TensorEntry>(t: &Rank2Tensor<T>) -> [T; 3] {
    let e = t.entries();
    std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        (e[j + 1][k + 1].clone() - e[k + 1][j + 1].clone()).scale(0.5)
    })
}

/// T'[a][b] = Σ A[a][r] B[b][s] T[r][s].
fn congruence<T: TensorEntry>(
    first: &Matrix4<f64>,
    second: &Matrix4<f64>,
    t: &Rank2Tensor<T>,
) -> Rank2Tensor<T> {
    Rank2Tensor::from_fn(t.variance, |a, b| {
        let mut acc = T::zero();
        for r in 0..4 {
            for s in 0..4 {
                let k = first[(a, r)] * second[(b, s)];
                if k != 0.0 {
                    acc = acc + t.entries[r][s].scale(k);
                }
            }
        }
        acc
    })
}

/// Transforms a rank-2 tensor with the boost (or with its inverse).
///
/// Upper indices transform with L, lower ones with g L g, so a
/// contravariant tensor maps to L T Lᵀ.
pub fn transform_rank2<T: TensorEntry>(
    boost: &LorentzBoost,
    t: &Rank2Tensor<T>,
    inverse: bool,
) -> Rank2Tensor<T> {
    let l = if inverse {
        *boost.inverse().matrix()
    } else {
        *boost.matrix()
    };
    let l_low = lower(&l);
    match t.variance {
        Variance::Contravariant => congruence(&l, &l, t),
        Variance::Covariant => congruence(&l_low, &l_low, t),
        Variance::Mixed => congruence(&l, &l_low, t),
    }
}
