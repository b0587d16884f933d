//! Serial-chain forward kinematics and damped Newton inverse kinematics.
//!
//! A chain is `η(q) = base · exp(q₁φ₁) ⋯ exp(qₙφₙ) · tool`, each joint screw
//! `φᵢ` given in the frame left by the joints before it. The IK residual is
//! the Lie difference between the reached pose and the target.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dual::VectorDualQuaternion;
use crate::error::{ConvergenceFailure, Error, Result};
use crate::kinematics::Twist;
use crate::pose::Pose;
use crate::quat::Vector3;
use crate::screw::screw_exp;

/// Tolerance on the unit-speed joint invariants.
pub const AXIS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JointKind {
    Revolute,
    Prismatic,
}

/// A unit-speed joint screw. Revolute joints have `|w| = 1`; prismatic
/// joints have `w = 0` and `|v| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JointRepr", into = "JointRepr")]
pub struct JointAxis {
    kind: JointKind,
    screw: Twist,
}

impl JointAxis {
    pub fn new(kind: JointKind, screw: Twist) -> Result<Self> {
        let (w, v) = (screw.angular(), screw.linear());
        if !screw.encoded().is_finite() {
            return Err(Error::input("joint screw must be finite"));
        }
        match kind {
            JointKind::Revolute if (w.norm() - 1.0).abs() > AXIS_TOLERANCE => Err(Error::input(
                format!("revolute joint needs |w| = 1, got {}", w.norm()),
            )),
            JointKind::Prismatic if w.norm() > AXIS_TOLERANCE => {
                Err(Error::input("prismatic joint needs w = 0"))
            }
            JointKind::Prismatic if (v.norm() - 1.0).abs() > AXIS_TOLERANCE => Err(Error::input(
                format!("prismatic joint needs |v| = 1, got {}", v.norm()),
            )),
            _ => Ok(Self { kind, screw }),
        }
    }

    /// Rotation about the unit axis `axis` through `point`.
    pub fn revolute(axis: Vector3, point: Vector3) -> Result<Self> {
        Self::new(JointKind::Revolute, Twist::new(axis, point.cross(&axis)))
    }

    /// Translation along the unit direction `axis`.
    pub fn prismatic(axis: Vector3) -> Result<Self> {
        Self::new(JointKind::Prismatic, Twist::new(Vector3::ZERO, axis))
    }

    pub fn kind(&self) -> JointKind {
        self.kind
    }

    pub fn screw(&self) -> Twist {
        self.screw
    }

    /// `exp(θφ)`.
    pub fn motion(&self, value: f64) -> Pose {
        screw_exp(&(self.screw.encoded() * value))
    }
}

#[derive(Serialize, Deserialize)]
struct JointRepr {
    kind: JointKind,
    screw: Twist,
}

impl TryFrom<JointRepr> for JointAxis {
    type Error = Error;

    fn try_from(r: JointRepr) -> Result<Self> {
        JointAxis::new(r.kind, r.screw)
    }
}

impl From<JointAxis> for JointRepr {
    fn from(j: JointAxis) -> Self {
        JointRepr {
            kind: j.kind,
            screw: j.screw,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChainRepr", into = "ChainRepr")]
pub struct SerialChain {
    base: Pose,
    joints: Vec<JointAxis>,
    tool: Pose,
}

#[derive(Serialize, Deserialize)]
struct ChainRepr {
    #[serde(default = "identity")]
    base: Pose,
    joints: Vec<JointAxis>,
    #[serde(default = "identity")]
    tool: Pose,
}

fn identity() -> Pose {
    Pose::IDENTITY
}

impl TryFrom<ChainRepr> for SerialChain {
    type Error = Error;

    fn try_from(r: ChainRepr) -> Result<Self> {
        SerialChain::new(r.base, r.joints, r.tool)
    }
}

impl From<SerialChain> for ChainRepr {
    fn from(c: SerialChain) -> Self {
        ChainRepr {
            base: c.base,
            joints: c.joints,
            tool: c.tool,
        }
    }
}

/// Damped least-squares settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IkOptions {
    /// Stop once the residual norm is at most this.
    pub tol: f64,
    /// Maximum number of linear solves.
    pub max_iter: usize,
    /// Initial damping `λ` in `(JᵀJ + λI)δ = -Jᵀr`.
    pub damping: f64,
}

impl Default for IkOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50,
            damping: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IkSolution {
    pub joints: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

impl SerialChain {
    pub fn new(base: Pose, joints: Vec<JointAxis>, tool: Pose) -> Result<Self> {
        if joints.is_empty() {
            return Err(Error::input("chain needs at least one joint"));
        }
        Ok(Self { base, joints, tool })
    }

    /// Planar arm in the xy-plane: revolute joints about z at the origin and
    /// at `(l1, 0, 0)`, tool at `(l2, 0, 0)` past the second joint.
    pub fn two_link_planar(l1: f64, l2: f64) -> Self {
        let joints = vec![
            JointAxis::revolute(Vector3::Z, Vector3::ZERO).unwrap(),
            JointAxis::revolute(Vector3::Z, Vector3::new(l1, 0.0, 0.0)).unwrap(),
        ];
        Self {
            base: Pose::IDENTITY,
            joints,
            tool: Pose::from_translation(Vector3::new(l1 + l2, 0.0, 0.0)),
        }
    }

    pub fn base(&self) -> &Pose {
        &self.base
    }

    pub fn tool(&self) -> &Pose {
        &self.tool
    }

    pub fn joints(&self) -> &[JointAxis] {
        &self.joints
    }

    pub fn dof(&self) -> usize {
        self.joints.len()
    }

    fn check_len(&self, q: &[f64]) -> Result<()> {
        if q.len() != self.joints.len() {
            return Err(Error::input(format!(
                "chain has {} joints but {} joint values were given",
                self.joints.len(),
                q.len()
            )));
        }
        if q.iter().any(|x| !x.is_finite()) {
            return Err(Error::input("joint values must be finite"));
        }
        Ok(())
    }

    /// `base · ∏ exp(qᵢφᵢ) · tool`, normalized once at the end.
    pub fn forward(&self, q: &[f64]) -> Result<Pose> {
        self.check_len(q)?;
        let mut d = *self.base.dual_quaternion();
        for (j, &x) in self.joints.iter().zip(q) {
            d = d * *j.motion(x).dual_quaternion();
        }
        Pose::normalized(&(d * *self.tool.dual_quaternion()))
    }

    /// Encoded body twists `η⁻¹ ∂η/∂qᵢ` together with `η(q)`.
    fn body_columns(&self, q: &[f64]) -> Result<(Pose, Vec<VectorDualQuaternion>)> {
        let eta = self.forward(q)?;
        let mut suffix = *self.tool.dual_quaternion();
        let mut cols = vec![VectorDualQuaternion::ZERO; q.len()];
        for i in (0..q.len()).rev() {
            let phi = self.joints[i].screw.encoded().to_dual_quaternion();
            cols[i] = (suffix.conj() * phi * suffix).im();
            suffix = *self.joints[i].motion(q[i]).dual_quaternion() * suffix;
        }
        Ok((eta, cols))
    }

    /// The 6×n body Jacobian: column `i` is `(w, v)` of `η⁻¹ ∂η/∂qᵢ`.
    pub fn jacobian(&self, q: &[f64]) -> Result<DMatrix<f64>> {
        let (_, cols) = self.body_columns(q)?;
        Ok(DMatrix::from_fn(6, q.len(), |r, c| 2.0 * cols[c].to_array()[r]))
    }

    /// `2·(self △ target)` as six reals.
    pub fn residual(&self, q: &[f64], target: &Pose) -> Result<DVector<f64>> {
        let eta = self.forward(q)?;
        Ok(residual_of(&eta, target))
    }

    /// Damped least squares from `q0`. The damping adapts: it shrinks after
    /// a step that lowers the residual and grows after one that does not, so
    /// the accepted residuals never increase.
    pub fn solve_ik(&self, target: &Pose, q0: &[f64], opts: &IkOptions) -> Result<IkSolution> {
        self.check_len(q0)?;
        if !(opts.tol > 0.0) {
            return Err(Error::input("tolerance must be positive"));
        }
        if !(opts.damping >= 0.0) {
            return Err(Error::input("damping must be non-negative"));
        }
        let n = q0.len();
        let mut q = q0.to_vec();
        let mut r = self.residual(&q, target)?;
        let mut norm = r.norm();
        let mut history = vec![norm];
        let mut lambda = opts.damping;
        let mut iterations = 0;
        while norm > opts.tol {
            if iterations == opts.max_iter {
                return Err(Error::Convergence(Box::new(ConvergenceFailure {
                    iterations,
                    best: q,
                    residual: norm,
                    history,
                })));
            }
            iterations += 1;
            let (eta, cols) = self.body_columns(&q)?;
            let offset = target.dual_quaternion().conj() * *eta.dual_quaternion();
            let jr = DMatrix::from_fn(6, n, |row, c| {
                2.0 * (offset * cols[c].to_dual_quaternion()).im().to_array()[row]
            });
            let jt = jr.transpose();
            let mut normal = &jt * &jr;
            for k in 0..n {
                normal[(k, k)] += lambda;
            }
            let rhs = -(&jt * &r);
            let step = normal
                .clone()
                .cholesky()
                .map(|c| c.solve(&rhs))
                .or_else(|| normal.lu().solve(&rhs))
                .ok_or_else(|| Error::numeric("damped normal equations are singular"))?;
            let trial: Vec<f64> = q.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let r_trial = self.residual(&trial, target)?;
            let n_trial = r_trial.norm();
            if n_trial < norm {
                q = trial;
                r = r_trial;
                norm = n_trial;
                lambda = (lambda * 0.1).max(opts.damping * 1e-6);
            } else {
                lambda = (lambda * 10.0).max(1e-9);
            }
            history.push(norm);
        }
        Ok(IkSolution {
            joints: q,
            iterations,
            residual: norm,
        })
    }
}

fn residual_of(eta: &Pose, target: &Pose) -> DVector<f64> {
    let d = eta.lie_difference(target).to_array();
    DVector::from_iterator(6, d.iter().map(|x| 2.0 * x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quaternion;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn random_unit(rng: &mut impl Rng) -> Vector3 {
        loop {
            let v = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if v.norm() > 0.1 && v.norm() < 1.0 {
                return v.normalize().unwrap();
            }
        }
    }

    fn random_chain(rng: &mut impl Rng, n: usize) -> SerialChain {
        let joints = (0..n)
            .map(|_| {
                if rng.gen_bool(0.8) {
                    let p = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    JointAxis::revolute(random_unit(rng), p).unwrap()
                } else {
                    JointAxis::prismatic(random_unit(rng)).unwrap()
                }
            })
            .collect();
        let tool = Pose::from_translation(Vector3::new(0.3, 0.1, 0.5));
        SerialChain::new(Pose::IDENTITY, joints, tool).unwrap()
    }

    #[test]
    fn joint_invariants() {
        assert!(JointAxis::new(JointKind::Revolute, Twist::new(Vector3::new(0.0, 0.0, 2.0), Vector3::ZERO)).is_err());
        assert!(JointAxis::new(JointKind::Prismatic, Twist::new(Vector3::Z, Vector3::X)).is_err());
        assert!(JointAxis::new(JointKind::Prismatic, Twist::new(Vector3::ZERO, Vector3::X * 0.5)).is_err());
        assert!(JointAxis::prismatic(Vector3::Y).is_ok());
        assert!(SerialChain::new(Pose::IDENTITY, vec![], Pose::IDENTITY).is_err());
    }

    #[test]
    fn zero_config_is_base_times_tool() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let mut chain = random_chain(&mut rng, 4);
        chain.base = Pose::from_quat_translation(
            Quaternion::from_axis_angle(Vector3::X, 0.4).unwrap(),
            Vector3::new(1.0, 2.0, 3.0),
        )
        .unwrap();
        let eta = chain.forward(&[0.0; 4]).unwrap();
        let expect = chain.base.compose(&chain.tool);
        let diff = *eta.dual_quaternion() - *expect.dual_quaternion();
        assert!(diff.euclidean_norm() < 1e-15);
    }

    #[test]
    fn single_revolute_half_turn() {
        let base = Pose::from_translation(Vector3::new(0.0, 1.0, 0.0));
        let tool = Pose::from_translation(Vector3::new(2.0, 0.0, 0.0));
        let chain = SerialChain::new(base, vec![JointAxis::revolute(Vector3::Z, Vector3::ZERO).unwrap()], tool).unwrap();
        let eta = chain.forward(&[PI]).unwrap();
        let k = Pose::from_rotation(Quaternion::K).unwrap();
        let expect = base.compose(&k).compose(&tool);
        let diff = *eta.dual_quaternion() - *expect.dual_quaternion();
        assert!(diff.euclidean_norm() < 1e-15);
        assert!((eta.act(Vector3::ZERO) - Vector3::new(-2.0, 1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn length_mismatch() {
        let chain = SerialChain::two_link_planar(1.0, 1.0);
        assert!(matches!(chain.forward(&[0.0]), Err(Error::Input(_))));
        assert!(matches!(chain.jacobian(&[0.0; 3]), Err(Error::Input(_))));
    }

    #[test]
    fn two_link_geometry() {
        let chain = SerialChain::two_link_planar(1.0, 1.0);
        // plane geometry: (cos a + cos(a+b), sin a + sin(a+b))
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for _ in 0..100 {
            let (a, b) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
            let p = chain.forward(&[a, b]).unwrap().act(Vector3::ZERO);
            let expect = Vector3::new(a.cos() + (a + b).cos(), a.sin() + (a + b).sin(), 0.0);
            assert!((p - expect).norm() < 1e-14);
        }
        let p = chain.forward(&[FRAC_PI_2, -FRAC_PI_2]).unwrap().act(Vector3::ZERO);
        assert!((p - Vector3::new(1.0, 1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn forward_is_unit_for_long_chains() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        for _ in 0..50 {
            let chain = random_chain(&mut rng, 20);
            let q: Vec<f64> = (0..20).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let n = chain.forward(&q).unwrap().dual_quaternion().norm().unwrap();
            assert!((n.a - 1.0).abs() <= 1e-12 && n.b.abs() <= 1e-12);
        }
    }

    #[test]
    fn prismatic_column() {
        let chain = SerialChain::new(
            Pose::IDENTITY,
            vec![JointAxis::prismatic(Vector3::new(0.0, 0.6, 0.8)).unwrap()],
            Pose::IDENTITY,
        )
        .unwrap();
        let j = chain.jacobian(&[0.7]).unwrap();
        let expect = [0.0, 0.0, 0.0, 0.0, 0.6, 0.8];
        for r in 0..6 {
            assert!((j[(r, 0)] - expect[r]).abs() < 1e-15);
        }
    }

    fn fd_jacobian(chain: &SerialChain, q: &[f64], h: f64) -> DMatrix<f64> {
        DMatrix::from_fn(6, q.len(), |r, c| {
            let (mut qp, mut qm) = (q.to_vec(), q.to_vec());
            qp[c] += h;
            qm[c] -= h;
            let base = chain.forward(q).unwrap();
            let p = chain.forward(&qp).unwrap().lie_difference(&base).to_array()[r];
            let m = chain.forward(&qm).unwrap().lie_difference(&base).to_array()[r];
            (p - m) / h
        })
    }

    #[test]
    fn revolute_column_at_zero() {
        let chain = SerialChain::new(
            Pose::IDENTITY,
            vec![JointAxis::revolute(Vector3::Y, Vector3::new(1.0, 0.0, 2.0)).unwrap()],
            Pose::IDENTITY,
        )
        .unwrap();
        let j = chain.jacobian(&[0.0]).unwrap();
        // w = axis, v = point × axis
        let expect = [0.0, 1.0, 0.0, -2.0, 0.0, 1.0];
        for r in 0..6 {
            assert!((j[(r, 0)] - expect[r]).abs() < 1e-15);
        }
        let fd = fd_jacobian(&chain, &[0.0], 1e-6);
        assert!((j - fd).abs().max() < 1e-6);
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        for _ in 0..50 {
            let n = rng.gen_range(1..8);
            let chain = random_chain(&mut rng, n);
            let q: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let j = chain.jacobian(&q).unwrap();
            let fd = fd_jacobian(&chain, &q, 1e-6);
            let err = (&j - &fd).abs().max();
            assert!(err < 1e-6, "{err}");
        }
    }

    #[test]
    fn ik_at_solution_takes_no_iterations() {
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        let chain = random_chain(&mut rng, 6);
        let q0 = [0.1, -0.2, 0.3, 0.4, -0.5, 0.6];
        let target = chain.forward(&q0).unwrap();
        let sol = chain.solve_ik(&target, &q0, &IkOptions::default()).unwrap();
        assert_eq!(sol.iterations, 0);
        assert_eq!(sol.joints, q0);
    }

    #[test]
    fn ik_two_link() {
        let chain = SerialChain::two_link_planar(1.0, 1.0);
        let q = [FRAC_PI_2, -FRAC_PI_2];
        let target = chain.forward(&q).unwrap();
        let sol = chain.solve_ik(&target, &[1.0, -1.0], &IkOptions::default()).unwrap();
        assert!((sol.joints[0] - FRAC_PI_2).abs() < 1e-9);
        assert!((sol.joints[1] + FRAC_PI_2).abs() < 1e-9);
        let reached = chain.forward(&sol.joints).unwrap().act(Vector3::ZERO);
        assert!((reached - Vector3::new(1.0, 1.0, 0.0)).norm() < 1e-10);
        assert!(sol.residual <= 1e-10);
    }

    #[test]
    fn ik_random_reachable() {
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        for _ in 0..20 {
            let chain = random_chain(&mut rng, 6);
            let q: Vec<f64> = (0..6).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let target = chain.forward(&q).unwrap();
            let q0: Vec<f64> = q.iter().map(|x| x + rng.gen_range(-0.3..0.3)).collect();
            let sol = chain.solve_ik(&target, &q0, &IkOptions::default()).unwrap();
            assert!(sol.residual <= 1e-10 && sol.iterations <= 50);
        }
    }

    #[test]
    fn ik_unreachable_reports_best() {
        let chain = SerialChain::two_link_planar(1.0, 1.0);
        let target = Pose::from_translation(Vector3::new(10.0, 0.0, 0.0));
        let opts = IkOptions {
            max_iter: 40,
            ..IkOptions::default()
        };
        match chain.solve_ik(&target, &[0.3, 0.2], &opts) {
            Err(Error::Convergence(f)) => {
                assert_eq!(f.iterations, 40);
                assert_eq!(f.history.len(), 41);
                assert!(f.history.windows(2).all(|w| w[1] <= w[0]));
                assert_eq!(f.residual, *f.history.last().unwrap());
                assert!(f.residual > 1.0);
                // fully stretched toward +x
                let p = chain.forward(&f.best).unwrap().act(Vector3::ZERO);
                assert!((p - Vector3::new(2.0, 0.0, 0.0)).norm() < 1e-2, "{p:?}");
            }
            other => panic!("expected convergence failure, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_options() {
        let chain = SerialChain::two_link_planar(1.0, 1.0);
        let opts = IkOptions {
            tol: 0.0,
            ..IkOptions::default()
        };
        assert!(matches!(chain.solve_ik(&Pose::IDENTITY, &[0.0, 0.0], &opts), Err(Error::Input(_))));
    }

    #[test]
    fn chain_json() {
        let json = r#"{"base":{"dq":[1,0,0,0,0,0,0,0]},"tool":{"q":[1,0,0,0],"t":[2,0,0]},
            "joints":[{"kind":"revolute","screw":{"w":[0,0,1],"v":[0,0,0]}},
                      {"kind":"revolute","screw":{"w":[0,0,1],"v":[0,-1,0]}}]}"#;
        let chain: SerialChain = serde_json::from_str(json).unwrap();
        assert_eq!(chain, SerialChain::two_link_planar(1.0, 1.0));
        let back: SerialChain = serde_json::from_str(&serde_json::to_string(&chain).unwrap()).unwrap();
        assert_eq!(back, chain);
        let bad = r#"{"joints":[{"kind":"revolute","screw":{"w":[0,0,2],"v":[0,0,0]}}]}"#;
        assert!(serde_json::from_str::<SerialChain>(bad).is_err());
        assert!(serde_json::from_str::<SerialChain>(r#"{"joints":[]}"#).is_err());
    }
}
