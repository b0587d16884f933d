#![allow(dead_code)]

use dualquat::{DualQuaternion, Pose, Quaternion, Vector3, VectorDualQuaternion};
use nalgebra::{Matrix3, Vector3 as NVector3};
use rand::Rng;

pub fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

pub fn vector(rng: &mut impl Rng, scale: f64) -> Vector3 {
    Vector3::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

pub fn unit_vector(rng: &mut impl Rng) -> Vector3 {
    loop {
        let v = vector(rng, 1.0);
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Uniformly distributed unit quaternion.
pub fn unit_quaternion(rng: &mut impl Rng) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = q.norm();
        if n > 0.1 && n <= 1.0 {
            return q / n;
        }
    }
}

pub fn dual_quaternion(rng: &mut impl Rng) -> DualQuaternion {
    let a: [f64; 8] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    DualQuaternion::from(a)
}

pub fn pose(rng: &mut impl Rng, reach: f64) -> Pose {
    Pose::from_quat_translation(unit_quaternion(rng), vector(rng, reach)).unwrap()
}

/// `θ = r + εd` with `|r| <= max_angle`.
pub fn screw(rng: &mut impl Rng, max_angle: f64, max_dual: f64) -> VectorDualQuaternion {
    let r = unit_vector(rng) * rng.gen_range(0.0..max_angle);
    VectorDualQuaternion::new(r, vector(rng, max_dual))
}

pub fn max_abs(d: DualQuaternion) -> f64 {
    d.to_array().iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn dq_diff(a: &DualQuaternion, b: &DualQuaternion) -> f64 {
    max_abs(*a - *b)
}

pub fn pose_diff(a: &Pose, b: &Pose) -> f64 {
    dq_diff(a.dual_quaternion(), b.dual_quaternion())
}

pub fn up_to_sign(a: &Pose, b: &Pose) -> f64 {
    let (a, b) = (*a.dual_quaternion(), *b.dual_quaternion());
    max_abs(a - b).min(max_abs(a + b))
}

pub fn to_na(v: Vector3) -> NVector3<f64> {
    NVector3::new(v.x, v.y, v.z)
}

pub fn from_na(v: &NVector3<f64>) -> Vector3 {
    Vector3::new(v.x, v.y, v.z)
}

pub fn vec_diff(a: Vector3, b: Vector3) -> f64 {
    let d = a - b;
    d.x.abs().max(d.y.abs()).max(d.z.abs())
}

pub fn mat_diff(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    (a - b).abs().max()
}
