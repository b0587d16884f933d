//! Closed-form exponential and principal logarithm of vector dual
//! quaternions, screw decomposition of poses, and dual-quaternion slerp.
//!
//! For orthonormal `a`, `b` and `w ≠ 0`,
//!
//! ```text
//! exp(½wt a + ε(½v₁t a + ½v₂t b))
//!     = (cos ½wt + sin ½wt a)(1 + ½εv₁t a) + ε(v₂/w) sin(½wt) b
//! ```
//!
//! which rotates about `a` while translating `v₁t` along it and sweeping a
//! circle of radius `v₂/w` around it. The logarithm inverts this for unit
//! `η = c + sa + ε(x + y₁a + y₂b)` with `t = atan2(s, c)`:
//!
//! ```text
//! log η = t a + ε(cy₁ - sx) a + ε(ty₂/s) b
//! ```
//!
//! Both are evaluated here in a form without the explicit axis so the
//! small-angle limit is continuous (see [`screw_exp`] and [`screw_log`]).

use crate::dual::{DualQuaternion, VectorDualQuaternion};
use crate::error::{Error, Result};
use crate::pose::Pose;
use crate::quat::{Quaternion, Vector3};

/// `screw_log` rejects `c <= -1 + LOG_NEG_ONE_TOLERANCE`.
pub const LOG_NEG_ONE_TOLERANCE: f64 = 1e-9;
/// `screw_log` rejects rotation half-angles within this distance of `π`.
pub const LOG_HALF_TURN_TOLERANCE: f64 = 1e-9;

/// Below this half-angle the series forms of the angle functions are used.
const SMALL_ANGLE: f64 = 1e-4;

/// `η = c + sa + ε(x + y₁a + y₂b)` with `a ⟂ b` unit vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScrewDecomposition {
    pub c: f64,
    pub s: f64,
    pub a: Vector3,
    pub x: f64,
    pub y1: f64,
    pub y2: f64,
    pub b: Vector3,
}

impl ScrewDecomposition {
    pub fn reconstruct(&self) -> DualQuaternion {
        DualQuaternion::new(
            Quaternion::from_parts(self.c, self.a * self.s),
            Quaternion::from_parts(self.x, self.a * self.y1 + self.b * self.y2),
        )
    }
}

/// Decomposes a pose into screw coordinates.
///
/// The rotation axis `a` is chosen with `s >= 0`. Without rotation (`s = 0`)
/// `a` is taken along the translation part (or `x̂` if there is none), so
/// `y₂ = 0` and `b` is the Gram-Schmidt completion of the first basis vector
/// not parallel to `a`.
pub fn decompose(eta: &Pose) -> ScrewDecomposition {
    let d = eta.dual_quaternion();
    let (c, u) = (d.real.w, d.real.vector());
    let (x, y) = (d.dual.w, d.dual.vector());
    let s = u.norm();
    if s == 0.0 {
        let a = y.normalize().unwrap_or(Vector3::X);
        return ScrewDecomposition {
            c,
            s,
            a,
            x,
            y1: y.dot(&a),
            y2: 0.0,
            b: perpendicular_to(&a),
        };
    }
    let a = u / s;
    let y1 = y.dot(&a);
    let perp = y - a * y1;
    let y2 = perp.norm();
    let b = if y2 > 0.0 { perp / y2 } else { perpendicular_to(&a) };
    ScrewDecomposition { c, s, a, x, y1, y2, b }
}

/// Unit vector perpendicular to the unit vector `a`, from the first standard
/// basis vector that is not parallel to it.
fn perpendicular_to(a: &Vector3) -> Vector3 {
    for e in [Vector3::X, Vector3::Y, Vector3::Z] {
        let p = e - *a * a.dot(&e);
        let n = p.norm();
        if n > 1e-6 {
            return p / n;
        }
    }
    unreachable!("a unit vector is parallel to at most one basis vector")
}

/// `sin φ / φ`.
fn sinc(phi: f64) -> f64 {
    if phi.abs() < SMALL_ANGLE {
        let p2 = phi * phi;
        1.0 - p2 / 6.0 + p2 * p2 / 120.0
    } else {
        phi.sin() / phi
    }
}

/// `(cos φ - sin φ/φ) / φ²`.
fn cos_minus_sinc_over_sq(phi: f64) -> f64 {
    if phi.abs() < SMALL_ANGLE {
        let p2 = phi * phi;
        -1.0 / 3.0 + p2 / 30.0 - p2 * p2 / 840.0
    } else {
        (phi.cos() - phi.sin() / phi) / (phi * phi)
    }
}

/// Exponential of a vector dual quaternion `θ = r + εd`.
///
/// With `φ = |r|` this evaluates to
///
/// ```text
/// cos φ + sinc φ r + ε( sinc φ (d - r·d) + (cos φ - sinc φ)/φ² (r·d) r )
/// ```
///
/// which equals the axis form above for `φ > 0` and reduces to `1 + εd` at
/// `φ = 0`.
pub fn screw_exp(theta: &VectorDualQuaternion) -> Pose {
    let (r, d) = (theta.real, theta.dual);
    let phi = r.norm();
    let sc = sinc(phi);
    let rd = r.dot(&d);
    let real = Quaternion::from_parts(phi.cos(), r * sc);
    let dual = Quaternion::from_parts(-sc * rd, d * sc + r * (cos_minus_sinc_over_sq(phi) * rd));
    Pose::new_unchecked(DualQuaternion::new(real, dual))
}

/// Principal logarithm of a pose: the `θ` with `exp θ = η` whose rotation
/// part has the smallest norm (`|r| = t ∈ [0, π)`).
///
/// Fails at `η ≈ -1 + ε(…)`, where no canonical axis exists, and at half
/// turns where the axis coefficient `t/s` is unbounded.
pub fn screw_log(eta: &Pose) -> Result<VectorDualQuaternion> {
    let d = eta.dual_quaternion();
    let (c, u) = (d.real.w, d.real.vector());
    let (x, y) = (d.dual.w, d.dual.vector());
    if c <= -1.0 + LOG_NEG_ONE_TOLERANCE {
        return Err(Error::domain("log undefined at η = -1"));
    }
    let s = u.norm();
    let t = s.atan2(c);
    if std::f64::consts::PI - t <= LOG_HALF_TURN_TOLERANCE {
        return Err(Error::domain(
            "screw axis ill-conditioned at half-turn with translation",
        ));
    }
    // t/s and (c - t/s)/s², both smooth through s = 0 for c > 0.
    let (t_over_s, k) = if s < SMALL_ANGLE && c > 0.0 {
        let r2 = (s / c) * (s / c);
        let t_over_s = (1.0 - r2 / 3.0 + r2 * r2 / 5.0) / c;
        let c3 = c * c * c;
        let k = -1.0 / c + 1.0 / (3.0 * c3) - s * s / (5.0 * c3 * c * c);
        (t_over_s, k)
    } else {
        let t_over_s = t / s;
        (t_over_s, (c - t_over_s) / (s * s))
    };
    let yu = y.dot(&u);
    Ok(VectorDualQuaternion::new(
        u * t_over_s,
        y * t_over_s - u * x + u * (k * yu),
    ))
}

/// Flips the sign of `η₂` if needed so that `Re(real(η₁η₂*)) >= 0`.
/// Both outputs represent the same poses as the inputs.
pub fn shortest_path_precondition(eta1: &Pose, eta2: &Pose) -> (Pose, Pose) {
    let (a, b) = (eta1.dual_quaternion(), eta2.dual_quaternion());
    if (a.real * b.real.conj()).re() < 0.0 {
        (*eta1, Pose::new_unchecked(-*b))
    } else {
        (*eta1, *eta2)
    }
}

/// Constant-twist interpolation `η₁ exp(t log(η₁*η₂))`.
pub fn slerp(eta1: &Pose, eta2: &Pose, t: f64) -> Result<Pose> {
    let rel = eta1.inverse().compose(eta2);
    let theta = screw_log(&rel)?;
    Ok(eta1.compose(&screw_exp(&(theta * t))))
}

/// The right-handed form `exp(t log(η₂η₁*)) η₁`; equal to [`slerp`].
pub fn slerp_right(eta1: &Pose, eta2: &Pose, t: f64) -> Result<Pose> {
    let rel = eta2.compose(&eta1.inverse());
    let theta = screw_log(&rel)?;
    Ok(screw_exp(&(theta * t)).compose(eta1))
}

/// A reusable slerp between two fixed poses; the logarithm is taken once.
#[derive(Debug, Clone, Copy)]
pub struct Slerp {
    start: Pose,
    twist: VectorDualQuaternion,
}

impl Slerp {
    pub fn new(eta1: &Pose, eta2: &Pose) -> Result<Self> {
        let twist = screw_log(&eta1.inverse().compose(eta2))?;
        Ok(Self { start: *eta1, twist })
    }

    /// The constant body twist `log(η₁*η₂)` of the interpolation.
    pub fn twist(&self) -> VectorDualQuaternion {
        self.twist
    }

    pub fn at(&self, t: f64) -> Pose {
        self.start.compose(&screw_exp(&(self.twist * t)))
    }
}
