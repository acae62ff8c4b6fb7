//! Small dense complex matrices and spin three-vector operators.

use std::ops::{Add, Neg, Sub};

use nalgebra::{SMatrix, Vector3};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat2 = SMatrix<C64, 2, 2>;
pub type Mat4 = SMatrix<C64, 4, 4>;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Pauli matrices (σˣ, σʸ, σᶻ).
pub fn pauli() -> [Mat2; 3] {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    [
        Mat2::new(o, l, l, o),
        Mat2::new(o, -I, I, o),
        Mat2::new(l, o, o, -l),
    ]
}

/// εᵢⱼₖ for zero-based spatial indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

pub fn commutator<const N: usize>(
    a: &SMatrix<C64, N, N>,
    b: &SMatrix<C64, N, N>,
) -> SMatrix<C64, N, N> {
    a * b - b * a
}

pub fn anticommutator<const N: usize>(
    a: &SMatrix<C64, N, N>,
    b: &SMatrix<C64, N, N>,
) -> SMatrix<C64, N, N> {
    a * b + b * a
}

/// Largest entry modulus, ‖M‖_max.
pub fn max_abs<const N: usize>(m: &SMatrix<C64, N, N>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// ‖M − M†‖_max / 2, zero for Hermitian matrices.
pub fn anti_hermitian_part<const N: usize>(m: &SMatrix<C64, N, N>) -> f64 {
    max_abs(&(m - m.adjoint())) / 2.0
}

/// Entry type that a rank-2 tensor can hold: real scalars for fields,
/// complex matrices for operator-valued spin tensors. Lorentz transforms only
/// need real linear combinations of entries.
pub trait TensorEntry:
    Clone + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn scale(&self, k: f64) -> Self;
    fn magnitude(&self) -> f64;
}

impl TensorEntry for f64 {
    fn zero() -> Self {
        0.0
    }
    fn scale(&self, k: f64) -> Self {
        self * k
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl TensorEntry for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn scale(&self, k: f64) -> Self {
        self * k
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl<const N: usize> TensorEntry for SMatrix<C64, N, N> {
    fn zero() -> Self {
        SMatrix::zeros()
    }
    fn scale(&self, k: f64) -> Self {
        self * re(k)
    }
    fn magnitude(&self) -> f64 {
        max_abs(self)
    }
}

/// Three components of a spin three-vector operator.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTriple<const N: usize> {
    pub ops: [SMatrix<C64, N, N>; 3],
}

pub type OperatorTriple2 = OperatorTriple<2>;
pub type OperatorTriple4 = OperatorTriple<4>;

impl<const N: usize> OperatorTriple<N> {
    pub fn new(ops: [SMatrix<C64, N, N>; 3]) -> Self {
        Self { ops }
    }

    pub fn x(&self) -> &SMatrix<C64, N, N> {
        &self.ops[0]
    }

    pub fn y(&self) -> &SMatrix<C64, N, N> {
        &self.ops[1]
    }

    pub fn z(&self) -> &SMatrix<C64, N, N> {
        &self.ops[2]
    }

    /// n·S for a real direction (not normalized).
    pub fn dot(&self, n: &Vector3<f64>) -> SMatrix<C64, N, N> {
        self.ops[0] * re(n.x) + self.ops[1] * re(n.y) + self.ops[2] * re(n.z)
    }

    /// S × v, componentwise with operator entries on the left.
    pub fn cross(&self, v: &Vector3<f64>) -> Self {
        let [sx, sy, sz] = &self.ops;
        Self::new([
            sy * re(v.z) - sz * re(v.y),
            sz * re(v.x) - sx * re(v.z),
            sx * re(v.y) - sy * re(v.x),
        ])
    }

    pub fn map(&self, f: impl Fn(&SMatrix<C64, N, N>) -> SMatrix<C64, N, N>) -> Self {
        Self::new([f(&self.ops[0]), f(&self.ops[1]), f(&self.ops[2])])
    }

    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&SMatrix<C64, N, N>, &SMatrix<C64, N, N>) -> SMatrix<C64, N, N>,
    ) -> Self {
        Self::new([
            f(&self.ops[0], &other.ops[0]),
            f(&self.ops[1], &other.ops[1]),
            f(&self.ops[2], &other.ops[2]),
        ])
    }

    /// Entrywise max distance between two triples.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.ops
            .iter()
            .zip(&other.ops)
            .map(|(a, b)| max_abs(&(a - b)))
            .fold(0.0, f64::max)
    }

    pub fn max_trace(&self) -> f64 {
        self.ops.iter().map(|m| m.trace().norm()).fold(0.0, f64::max)
    }
}

/// max over (i, j) of ‖[Sⁱ, Sʲ] − i εⁱʲᵏ Sᵏ‖_max.
///
/// Zero exactly when the triple closes the su(2) spin algebra. The operator
/// size is fixed by the type, so mismatched dimensions cannot be passed.
pub fn spin_algebra_residual<const N: usize>(triple: &OperatorTriple<N>) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            let mut rhs = SMatrix::<C64, N, N>::zeros();
            for k in 0..3 {
                let e = levi_civita(i, j, k);
                if e != 0.0 {
                    rhs += triple.ops[k] * (I * e);
                }
            }
            let lhs = commutator(&triple.ops[i], &triple.ops[j]);
            worst = worst.max(max_abs(&(lhs - rhs)));
        }
    }
    worst
}

/// Lifts a 2×2 operator to diag(A, A).
pub fn block_diag(a: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(a);
    m
}

/// Upper-left and lower-right 2×2 blocks.
pub fn diagonal_blocks(m: &Mat4) -> (Mat2, Mat2) {
    (
        m.fixed_view::<2, 2>(0, 0).into_owned(),
        m.fixed_view::<2, 2>(2, 2).into_owned(),
    )
}

/// Converts a matrix into row-major nested vectors for reporting.
pub fn to_rows<const N: usize>(m: &SMatrix<C64, N, N>) -> Vec<Vec<C64>> {
    (0..N).map(|r| (0..N).map(|c| m[(r, c)]).collect()).collect()
}
