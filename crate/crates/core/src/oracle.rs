//! Rigid motions as 4×4 homogeneous matrices `[R t; 0 1]`.
//!
//! This is a second, independent SE(3) implementation used to check the
//! dual-quaternion code. Nothing here calls into the dual-quaternion modules;
//! quaternions are only read component-wise to build rotation matrices.

use nalgebra::{Matrix3, Matrix4, Vector3};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Tolerance for orthogonality, determinant and bottom-row checks.
pub const RIGID_TOLERANCE: f64 = 1e-9;

/// A rigid motion `r ↦ Rr + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4Pose {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl Matrix4Pose {
    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn from_translation(t: Vector3<f64>) -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: t,
        }
    }

    /// Domain error unless `rotation` is orthogonal with determinant 1.
    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self> {
        check_rotation(&rotation)?;
        Ok(Self { rotation, translation })
    }

    pub fn from_matrix(m: &Matrix4<f64>) -> Result<Self> {
        let bottom = [m[(3, 0)], m[(3, 1)], m[(3, 2)], m[(3, 3)] - 1.0];
        if bottom.iter().any(|x| x.abs() > RIGID_TOLERANCE) {
            return Err(Error::domain("last row of a rigid motion must be (0, 0, 0, 1)"));
        }
        Self::new(
            m.fixed_view::<3, 3>(0, 0).into_owned(),
            m.fixed_view::<3, 1>(0, 3).into_owned(),
        )
    }

    pub fn to_matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rotation);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        m
    }

    pub fn inverse(&self) -> Self {
        let rt = self.rotation.transpose();
        Self {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }
}

/// `(R₁, t₁) ∘ (R₂, t₂) = (R₁R₂, t₁ + R₁t₂)`.
pub fn m_compose(a: &Matrix4Pose, b: &Matrix4Pose) -> Matrix4Pose {
    Matrix4Pose {
        rotation: a.rotation * b.rotation,
        translation: a.translation + a.rotation * b.translation,
    }
}

/// `r ↦ Rr + t`.
pub fn m_act(p: &Matrix4Pose, r: &Vector3<f64>) -> Vector3<f64> {
    p.rotation * r + p.translation
}

/// The rotation matrix of a unit quaternion `w + xi + yj + zk`.
pub fn m_from_quat(q: &Quaternion) -> Result<Matrix3<f64>> {
    let n = (q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z).sqrt();
    if (n - 1.0).abs() > RIGID_TOLERANCE {
        return Err(Error::domain(format!("expected unit quaternion, |Q| = {n}")));
    }
    let (w, x, y, z) = (q.w, q.x, q.y, q.z);
    Ok(Matrix3::new(
        1.0 - 2.0 * (y * y + z * z),
        2.0 * (x * y - w * z),
        2.0 * (x * z + w * y),
        2.0 * (x * y + w * z),
        1.0 - 2.0 * (x * x + z * z),
        2.0 * (y * z - w * x),
        2.0 * (x * z - w * y),
        2.0 * (y * z + w * x),
        1.0 - 2.0 * (x * x + y * y),
    ))
}

/// Pose from a unit quaternion and translation.
pub fn m_from_quat_translation(q: &Quaternion, t: Vector3<f64>) -> Result<Matrix4Pose> {
    Ok(Matrix4Pose {
        rotation: m_from_quat(q)?,
        translation: t,
    })
}

/// The antisymmetric matrix with `star(w) r = w × r`.
pub fn star(w: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

/// Reads `w` from the antisymmetric part of `m`.
pub fn vee(m: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    )
}

/// Body-frame twist `(w, v)` from `d/dt [R t; 0 1] = [R t; 0 1][star(w) v; 0 0]`:
/// `star(w) = R⁻¹Ṙ` and `v = R⁻¹ṫ`.
pub fn m_twist(
    rotation: &Matrix3<f64>,
    _translation: &Vector3<f64>,
    rotation_dot: &Matrix3<f64>,
    translation_dot: &Vector3<f64>,
) -> Result<(Vector3<f64>, Vector3<f64>)> {
    check_rotation(rotation)?;
    let rt = rotation.transpose();
    let omega = rt * rotation_dot;
    Ok((vee(&omega), rt * translation_dot))
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn expm4(a: &Matrix4<f64>) -> Matrix4<f64> {
    let norm = a.abs().row_sum().max();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings);
    let mut term = Matrix4::identity();
    let mut sum = Matrix4::identity();
    for k in 1..=20 {
        term = term * scaled / k as f64;
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// `exp` of the 4×4 twist matrix `[star(w) v; 0 0]` scaled by `t`: the pose
/// reached from the identity under the constant body twist `(w, v)`.
pub fn m_screw_motion(w: &Vector3<f64>, v: &Vector3<f64>, t: f64) -> Matrix4Pose {
    let mut x = Matrix4::zeros();
    x.fixed_view_mut::<3, 3>(0, 0).copy_from(&(star(w) * t));
    x.fixed_view_mut::<3, 1>(0, 3).copy_from(&(v * t));
    let e = expm4(&x);
    Matrix4Pose {
        rotation: e.fixed_view::<3, 3>(0, 0).into_owned(),
        translation: e.fixed_view::<3, 1>(0, 3).into_owned(),
    }
}

pub(crate) fn check_rotation(r: &Matrix3<f64>) -> Result<()> {
    let orth = (r.transpose() * r - Matrix3::identity()).abs().max();
    if orth > RIGID_TOLERANCE {
        return Err(Error::domain(format!(
            "rotation block is not orthogonal (max |RᵀR - I| = {orth:e})"
        )));
    }
    let det = r.determinant();
    if (det - 1.0).abs() > RIGID_TOLERANCE {
        return Err(Error::domain(format!("rotation block has determinant {det}")));
    }
    Ok(())
}
