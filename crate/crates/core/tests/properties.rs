mod common;

use common::{dq_diff, max_abs, mat_diff, to_na, vec_diff};
use dualquat::oracle::{m_act, m_compose, m_from_quat_translation, Matrix4Pose};
use dualquat::*;
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -2.0..2.0f64
}

fn vector3() -> impl Strategy<Value = Vector3> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| Vector3::new(x, y, z))
}

fn quaternion() -> impl Strategy<Value = Quaternion> {
    (coord(), coord(), coord(), coord()).prop_map(|(w, x, y, z)| Quaternion::new(w, x, y, z))
}

fn unit_quaternion() -> impl Strategy<Value = Quaternion> {
    quaternion()
        .prop_filter("away from zero", |q| q.norm() > 0.1)
        .prop_map(|q| q / q.norm())
}

fn dual_quaternion() -> impl Strategy<Value = DualQuaternion> {
    (quaternion(), quaternion()).prop_map(|(a, b)| DualQuaternion::new(a, b))
}

fn invertible() -> impl Strategy<Value = DualQuaternion> {
    dual_quaternion().prop_filter("invertible", |d| d.real.norm() > 0.2)
}

fn pose() -> impl Strategy<Value = Pose> {
    (unit_quaternion(), vector3()).prop_map(|(q, t)| Pose::from_quat_translation(q, t).unwrap())
}

fn principal_screw() -> impl Strategy<Value = VectorDualQuaternion> {
    (vector3(), 0.0..3.0f64, vector3())
        .prop_filter("nonzero axis", |(a, _, _)| a.norm() > 0.1)
        .prop_map(|(a, angle, d)| VectorDualQuaternion::new(a / a.norm() * angle, d))
}

fn oracle(p: &Pose) -> Matrix4Pose {
    m_from_quat_translation(&p.rotation(), to_na(p.translation())).unwrap()
}

fn quat_diff(a: Quaternion, b: Quaternion) -> f64 {
    (a - b).to_array().iter().fold(0.0, |m, x| m.max(x.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn quaternion_product_is_associative(a in quaternion(), b in quaternion(), c in quaternion()) {
        prop_assert!(quat_diff((a * b) * c, a * (b * c)) < 1e-12);
    }

    #[test]
    fn quaternion_norm_is_multiplicative(a in quaternion(), b in quaternion()) {
        prop_assert!(((a * b).norm() - a.norm() * b.norm()).abs() < 1e-12);
    }

    #[test]
    fn conjugation_reverses_products(a in dual_quaternion(), b in dual_quaternion()) {
        prop_assert!(dq_diff(&(a * b).conj(), &(b.conj() * a.conj())) < 1e-12);
        prop_assert!(dq_diff(&(a * b).bar(), &(a.bar() * b.bar())) < 1e-12);
    }

    #[test]
    fn dual_product_is_associative(a in dual_quaternion(), b in dual_quaternion(), c in dual_quaternion()) {
        prop_assert!(dq_diff(&((a * b) * c), &(a * (b * c))) < 1e-11);
    }

    #[test]
    fn inverse_is_two_sided(a in invertible()) {
        let inv = a.inverse().unwrap();
        prop_assert!(max_abs(a * inv - DualQuaternion::ONE) < 1e-10);
        prop_assert!(max_abs(inv * a - DualQuaternion::ONE) < 1e-10);
    }

    #[test]
    fn normalize_gives_unit(a in invertible()) {
        let n = a.normalize().unwrap().norm().unwrap();
        prop_assert!((n.a - 1.0).abs() < 1e-12 && n.b.abs() < 1e-12);
    }

    #[test]
    fn pose_matrix_homomorphism(a in pose(), b in pose(), r in vector3()) {
        let composed = oracle(&a.compose(&b));
        let expect = m_compose(&oracle(&a), &oracle(&b));
        prop_assert!(mat_diff(&composed.rotation, &expect.rotation) < 1e-12);
        prop_assert!((composed.translation - expect.translation).abs().max() < 1e-12);
        let lhs = a.compose(&b).act(r);
        prop_assert!(vec_diff(lhs, a.act(b.act(r))) < 1e-12);
        let m = m_act(&oracle(&a), &to_na(r));
        prop_assert!(vec_diff(a.act(r), Vector3::new(m.x, m.y, m.z)) < 1e-12);
    }

    #[test]
    fn inverse_pose_undoes_action(a in pose(), r in vector3()) {
        prop_assert!(vec_diff(a.inverse().act(a.act(r)), r) < 1e-12);
    }

    #[test]
    fn matrix_round_trip(a in pose()) {
        let back = Pose::from_matrix(&a.to_matrix()).unwrap();
        prop_assert!(common::up_to_sign(&back, &a) < 1e-12);
    }

    #[test]
    fn log_inverts_exp(theta in principal_screw()) {
        let back = screw_log(&screw_exp(&theta)).unwrap();
        prop_assert!((back - theta).norm() < 1e-10);
    }

    #[test]
    fn exp_of_negation_is_inverse(theta in principal_screw()) {
        let a = screw_exp(&theta);
        let b = screw_exp(&(-theta));
        prop_assert!(dq_diff(a.compose(&b).dual_quaternion(), &DualQuaternion::ONE) < 1e-12);
    }

    #[test]
    fn lie_difference_recovers_small_perturbation(a in pose(), d in vector3(), e in vector3()) {
        let theta = VectorDualQuaternion::new(d * 1e-5, e * 1e-5);
        let got = a.perturb(&theta).lie_difference(&a);
        prop_assert!((got - theta).norm() < 1e-9);
    }

    #[test]
    fn slerp_forms_agree(a in pose(), b in pose(), t in 0.0..1.0f64) {
        let left = slerp(&a, &b, t).unwrap();
        let right = dualquat::screw::slerp_right(&a, &b, t).unwrap();
        prop_assert!(dq_diff(left.dual_quaternion(), right.dual_quaternion()) < 1e-12);
    }
}
