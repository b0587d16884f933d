//! Rigid motions encoded as unit dual quaternions `η = Q + ½εtQ`.
//!
//! Composition of poses is the dual-quaternion product and the inverse of a
//! pose is its conjugate. `η` and `-η` represent the same pose.

use std::ops::Mul;

use nalgebra::{Matrix3, Matrix4};
use serde::{Deserialize, Serialize};

use crate::dual::{DualQuaternion, VectorDualQuaternion};
use crate::error::{Error, Result};
use crate::oracle::check_rotation;
use crate::quat::{Quaternion, Vector3, UNIT_TOLERANCE};

/// A rotation quaternion together with a translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuatTranslation {
    pub rotation: Quaternion,
    pub translation: Vector3,
}

/// A rigid motion, stored as a unit dual quaternion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PoseRepr", into = "PoseRepr")]
pub struct Pose(DualQuaternion);

impl Pose {
    pub const IDENTITY: Self = Pose(DualQuaternion::ONE);

    /// Wraps a dual quaternion that is unit within [`UNIT_TOLERANCE`].
    pub fn from_dual_quaternion(d: DualQuaternion) -> Result<Self> {
        d.check_unit("pose")?;
        Ok(Pose(d))
    }

    /// Projects an arbitrary dual quaternion (with nonzero real part) onto the
    /// unit dual quaternions.
    pub fn normalized(d: &DualQuaternion) -> Result<Self> {
        Ok(Pose(d.normalize()?))
    }

    /// Caller guarantees the unit property.
    pub(crate) fn new_unchecked(d: DualQuaternion) -> Self {
        Pose(d)
    }

    /// `η = Q + ½εtQ`.
    pub fn from_quat_translation(rotation: Quaternion, translation: Vector3) -> Result<Self> {
        rotation.check_unit("pose rotation")?;
        Ok(Pose(DualQuaternion::new(
            rotation,
            translation.to_quaternion() * rotation * 0.5,
        )))
    }

    pub fn from_rotation(rotation: Quaternion) -> Result<Self> {
        Self::from_quat_translation(rotation, Vector3::ZERO)
    }

    pub fn from_translation(translation: Vector3) -> Self {
        Pose(DualQuaternion::new(
            Quaternion::ONE,
            translation.to_quaternion() * 0.5,
        ))
    }

    #[inline]
    pub fn dual_quaternion(&self) -> &DualQuaternion {
        &self.0
    }

    #[inline]
    pub fn into_dual_quaternion(self) -> DualQuaternion {
        self.0
    }

    #[inline]
    pub fn rotation(&self) -> Quaternion {
        self.0.real
    }

    /// `t = 2BQ*`.
    pub fn translation(&self) -> Vector3 {
        (self.0.dual * self.0.real.conj() * 2.0).vector()
    }

    /// Inverse of [`Pose::from_quat_translation`]; keeps the stored sign of `Q`.
    pub fn to_quat_translation(&self) -> QuatTranslation {
        QuatTranslation {
            rotation: self.rotation(),
            translation: self.translation(),
        }
    }

    /// `η⁻¹ = η*` for unit `η`.
    #[inline]
    pub fn inverse(&self) -> Self {
        Pose(self.0.conj())
    }

    /// Composition `self ∘ other` (apply `other` first).
    #[inline]
    pub fn compose(&self, other: &Self) -> Self {
        Pose(self.0 * other.0)
    }

    /// Image of the point `r`: `s = (Qr + 2B)Q*`.
    pub fn act(&self, r: Vector3) -> Vector3 {
        let (q, b) = (self.0.real, self.0.dual);
        ((q * r.to_quaternion() + b * 2.0) * q.conj()).vector()
    }

    /// Image of `r` through the sandwich `1 + εs = η(1 + εr)η̄*`.
    pub fn act_sandwich(&self, r: Vector3) -> Vector3 {
        (self.0 * DualQuaternion::from_point(r) * self.0.bar().conj())
            .dual
            .vector()
    }

    /// The representative of `±η` whose rotation has `w > 0`, or when
    /// `w = 0` whose first nonzero component is positive.
    pub fn canonical(&self) -> Self {
        if canonical_sign(&self.0.real) < 0.0 {
            Pose(-self.0)
        } else {
            *self
        }
    }

    /// `[R t; 0 1]`.
    pub fn to_matrix(&self) -> Matrix4<f64> {
        let q = self.0.real;
        let (w, x, y, z) = (q.w, q.x, q.y, q.z);
        let t = self.translation();
        Matrix4::new(
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            t.x,
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
            t.y,
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
            t.z,
            0.0,
            0.0,
            0.0,
            1.0,
        )
    }

    /// Pose of a rigid homogeneous matrix. The rotation is extracted with the
    /// largest-diagonal branch method and returned in canonical sign.
    pub fn from_matrix(m: &Matrix4<f64>) -> Result<Self> {
        let bottom = [m[(3, 0)], m[(3, 1)], m[(3, 2)], m[(3, 3)] - 1.0];
        if bottom.iter().any(|x| x.abs() > UNIT_TOLERANCE) {
            return Err(Error::domain("last row of a rigid motion must be (0, 0, 0, 1)"));
        }
        let r: Matrix3<f64> = m.fixed_view::<3, 3>(0, 0).into_owned();
        check_rotation(&r)?;
        let q = quaternion_from_rotation(&r);
        let q = if canonical_sign(&q) < 0.0 { -q } else { q };
        // The extraction is exact only up to rounding; re-project before the
        // unit check in `from_quat_translation`.
        let q = q.normalize()?;
        Self::from_quat_translation(q, Vector3::new(m[(0, 3)], m[(1, 3)], m[(2, 3)]))
    }

    /// The Lie difference `self △ reference = ½(η_r*η - η*η_r) = Im(η_r*η)`,
    /// approximately `θ` when `self = reference·normalized(1 + θ)`.
    pub fn lie_difference(&self, reference: &Pose) -> VectorDualQuaternion {
        (reference.0.conj() * self.0).im()
    }

    /// `η_r · normalized(1 + θ)`.
    pub fn perturb(&self, theta: &VectorDualQuaternion) -> Self {
        let step = (DualQuaternion::ONE + theta.to_dual_quaternion())
            .normalize()
            .expect("1 + θ has unit real part");
        Pose(self.0 * step)
    }
}

/// `-1`, `0` or `1` according to the canonical-sign rule.
fn canonical_sign(q: &Quaternion) -> f64 {
    q.to_array()
        .into_iter()
        .find(|c| *c != 0.0)
        .map_or(0.0, f64::signum)
}

fn quaternion_from_rotation(m: &Matrix3<f64>) -> Quaternion {
    let trace = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
    if trace > 0.0 {
        let s = (trace + 1.0).sqrt() * 2.0;
        Quaternion::new(
            0.25 * s,
            (m[(2, 1)] - m[(1, 2)]) / s,
            (m[(0, 2)] - m[(2, 0)]) / s,
            (m[(1, 0)] - m[(0, 1)]) / s,
        )
    } else if m[(0, 0)] >= m[(1, 1)] && m[(0, 0)] >= m[(2, 2)] {
        let s = (1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]).sqrt() * 2.0;
        Quaternion::new(
            (m[(2, 1)] - m[(1, 2)]) / s,
            0.25 * s,
            (m[(0, 1)] + m[(1, 0)]) / s,
            (m[(0, 2)] + m[(2, 0)]) / s,
        )
    } else if m[(1, 1)] >= m[(2, 2)] {
        let s = (1.0 - m[(0, 0)] + m[(1, 1)] - m[(2, 2)]).sqrt() * 2.0;
        Quaternion::new(
            (m[(0, 2)] - m[(2, 0)]) / s,
            (m[(0, 1)] + m[(1, 0)]) / s,
            0.25 * s,
            (m[(1, 2)] + m[(2, 1)]) / s,
        )
    } else {
        let s = (1.0 - m[(0, 0)] - m[(1, 1)] + m[(2, 2)]).sqrt() * 2.0;
        Quaternion::new(
            (m[(1, 0)] - m[(0, 1)]) / s,
            (m[(0, 2)] + m[(2, 0)]) / s,
            (m[(1, 2)] + m[(2, 1)]) / s,
            0.25 * s,
        )
    }
}

impl Mul for Pose {
    type Output = Pose;
    #[inline]
    fn mul(self, rhs: Pose) -> Pose {
        self.compose(&rhs)
    }
}

impl TryFrom<DualQuaternion> for Pose {
    type Error = Error;
    fn try_from(d: DualQuaternion) -> Result<Self> {
        Pose::from_dual_quaternion(d)
    }
}

impl From<Pose> for DualQuaternion {
    fn from(p: Pose) -> Self {
        p.0
    }
}

/// JSON form: `{"dq": [8]}` or `{"q": [4], "t": [3]}`.
#[derive(Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum PoseRepr {
    Dual { dq: DualQuaternion },
    QuatTranslation { q: Quaternion, t: Vector3 },
}

impl TryFrom<PoseRepr> for Pose {
    type Error = Error;
    fn try_from(r: PoseRepr) -> Result<Self> {
        match r {
            PoseRepr::Dual { dq } => Pose::from_dual_quaternion(dq),
            PoseRepr::QuatTranslation { q, t } => Pose::from_quat_translation(q, t),
        }
    }
}

impl From<Pose> for PoseRepr {
    fn from(p: Pose) -> Self {
        PoseRepr::Dual { dq: p.0 }
    }
}
