//! Twists and wrenches as vector dual quaternions.
//!
//! A body-frame twist `(w, v)` is `φ = ½w + ½εv` and satisfies `η̇ = ηφ`.
//! A wrench (torque `q`, force `p`) is `τ = 2q + 2εp`, scaled so that the
//! rate of work is the plain 8-dimensional dot product `τ·φ = q·w + p·v`.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::dual::{DualQuaternion, VectorDualQuaternion};
use crate::error::{Error, Result};
use crate::oracle::check_rotation;
use crate::pose::Pose;
use crate::quat::Vector3;

/// `η*η̇` must be a vector dual quaternion within this tolerance.
pub const TANGENT_TOLERANCE: f64 = 1e-6;

/// Angular velocity `w` (rad/s) and linear velocity `v` (m/s).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "TwistRepr", into = "TwistRepr")]
pub struct Twist(VectorDualQuaternion);

impl Twist {
    pub const ZERO: Self = Twist(VectorDualQuaternion::ZERO);

    pub fn new(w: Vector3, v: Vector3) -> Self {
        Twist(VectorDualQuaternion::new(w * 0.5, v * 0.5))
    }

    /// From the encoded form `φ = ½w + ½εv`.
    pub fn from_encoded(phi: VectorDualQuaternion) -> Self {
        Twist(phi)
    }

    pub fn encoded(&self) -> VectorDualQuaternion {
        self.0
    }

    pub fn to_dual_quaternion(&self) -> DualQuaternion {
        self.0.to_dual_quaternion()
    }

    pub fn angular(&self) -> Vector3 {
        self.0.real * 2.0
    }

    pub fn linear(&self) -> Vector3 {
        self.0.dual * 2.0
    }

    /// `[w, v]`.
    pub fn to_array(&self) -> [f64; 6] {
        let (w, v) = (self.angular(), self.linear());
        [w.x, w.y, w.z, v.x, v.y, v.z]
    }
}

/// Torque `q` (N·m) and force `p` (N) applied at the body-frame origin.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "WrenchRepr", into = "WrenchRepr")]
pub struct Wrench(VectorDualQuaternion);

impl Wrench {
    pub const ZERO: Self = Wrench(VectorDualQuaternion::ZERO);

    pub fn new(torque: Vector3, force: Vector3) -> Self {
        Wrench(VectorDualQuaternion::new(torque * 2.0, force * 2.0))
    }

    /// From the encoded form `τ = 2q + 2εp`.
    pub fn from_encoded(tau: VectorDualQuaternion) -> Self {
        Wrench(tau)
    }

    pub fn encoded(&self) -> VectorDualQuaternion {
        self.0
    }

    pub fn torque(&self) -> Vector3 {
        self.0.real * 0.5
    }

    pub fn force(&self) -> Vector3 {
        self.0.dual * 0.5
    }
}

#[derive(Serialize, Deserialize)]
struct TwistRepr {
    w: Vector3,
    v: Vector3,
}

impl From<TwistRepr> for Twist {
    fn from(r: TwistRepr) -> Self {
        Twist::new(r.w, r.v)
    }
}

impl From<Twist> for TwistRepr {
    fn from(t: Twist) -> Self {
        TwistRepr {
            w: t.angular(),
            v: t.linear(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WrenchRepr {
    q: Vector3,
    p: Vector3,
}

impl From<WrenchRepr> for Wrench {
    fn from(r: WrenchRepr) -> Self {
        Wrench::new(r.q, r.p)
    }
}

impl From<Wrench> for WrenchRepr {
    fn from(w: Wrench) -> Self {
        WrenchRepr {
            q: w.torque(),
            p: w.force(),
        }
    }
}

fn tangent_part(d: DualQuaternion, what: &str) -> Result<VectorDualQuaternion> {
    if !d.is_vector_within(TANGENT_TOLERANCE) {
        return Err(Error::domain(format!(
            "{what}: derivative is not tangent to the unit dual quaternions \
             (scalar parts {:e}, {:e})",
            d.real.w, d.dual.w
        )));
    }
    Ok(d.im())
}

/// Body-frame twist `φ = η⁻¹η̇`.
pub fn body_twist(eta: &Pose, eta_dot: &DualQuaternion) -> Result<Twist> {
    let phi = eta.dual_quaternion().conj() * *eta_dot;
    tangent_part(phi, "body_twist").map(Twist)
}

/// Fixed-frame twist `η̇η⁻¹`.
pub fn spatial_twist(eta: &Pose, eta_dot: &DualQuaternion) -> Result<Twist> {
    let phi = *eta_dot * eta.dual_quaternion().conj();
    tangent_part(phi, "spatial_twist").map(Twist)
}

/// `η̇ = ηφ`.
pub fn pose_derivative(eta: &Pose, phi: &Twist) -> DualQuaternion {
    *eta.dual_quaternion() * phi.to_dual_quaternion()
}

/// Integrates `η̇ = ηφ(t)` from `t_span.0` to `t_span.1` with classical RK4,
/// projecting back onto the unit dual quaternions after every step.
///
/// Returns `(t, η(t))` samples including both endpoints; the final step is
/// shortened to land exactly on `t_span.1`.
pub fn integrate_twist<F>(
    eta0: &Pose,
    twist: F,
    t_span: (f64, f64),
    dt: f64,
) -> Result<Vec<(f64, Pose)>>
where
    F: Fn(f64) -> Twist,
{
    let (t0, t1) = t_span;
    if !dt.is_finite() || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::numeric(format!("non-finite time step or span ({dt}, [{t0}, {t1}])")));
    }
    if !(dt > 0.0) {
        return Err(Error::input(format!("time step must be positive, got {dt}")));
    }
    if t1 < t0 {
        return Err(Error::input(format!("invalid time span [{t0}, {t1}]")));
    }
    let steps = ((t1 - t0) / dt - 1e-9).ceil().max(0.0) as usize;
    let f = |t: f64, y: &DualQuaternion| *y * twist(t).to_dual_quaternion();

    let mut out = Vec::with_capacity(steps + 1);
    let mut y = *eta0.dual_quaternion();
    out.push((t0, *eta0));
    for i in 0..steps {
        let t = t0 + i as f64 * dt;
        let h = if i + 1 == steps { t1 - t } else { dt };
        let k1 = f(t, &y);
        let k2 = f(t + 0.5 * h, &(y + k1 * (0.5 * h)));
        let k3 = f(t + 0.5 * h, &(y + k2 * (0.5 * h)));
        let k4 = f(t + h, &(y + k3 * h));
        let next = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        if !next.is_finite() {
            return Err(Error::numeric(format!("integration diverged at t = {t}")));
        }
        y = next.normalize()?;
        out.push((t + h, Pose::new_unchecked(y)));
    }
    Ok(out)
}

/// Twist of the point `r0` (e.g. the center of mass): `φ₀ = φ + ½ε w×r₀`.
pub fn twist_about_com(phi: &Twist, r0: Vector3) -> Twist {
    Twist::new(phi.angular(), phi.linear() + phi.angular().cross(&r0))
}

/// Wrench moved to the point `r0`: `τ₀ = τ + 2 p×r₀` on the torque part.
pub fn wrench_about_com(tau: &Wrench, r0: Vector3) -> Wrench {
    Wrench::new(tau.torque() + tau.force().cross(&r0), tau.force())
}

/// Rate of work `τ·φ = q·w + p·v` (W).
pub fn work_rate(tau: &Wrench, phi: &Twist) -> f64 {
    tau.encoded().dot(&phi.encoded())
}

/// The antisymmetric matrix with `star(w) r = w × r`.
pub fn hodge_star(w: Vector3) -> Matrix3<f64> {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

/// Body angular velocity from `Ṙ = R star(w)`.
pub fn angular_velocity_from_rotation(r: &Matrix3<f64>, r_dot: &Matrix3<f64>) -> Result<Vector3> {
    check_rotation(r)?;
    let m = r.transpose() * r_dot;
    let sym = (m + m.transpose()).abs().max();
    if sym > TANGENT_TOLERANCE {
        return Err(Error::domain(format!(
            "R⁻¹Ṙ is not antisymmetric (max |M + Mᵀ| = {sym:e})"
        )));
    }
    Ok(Vector3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    ))
}
