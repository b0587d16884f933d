//! Rigid-body kinematics with dual quaternions.
//!
//! A pose is a unit dual quaternion `η = Q + ½εtQ` acting on points by
//! `r ↦ QrQ* + t`. On top of the algebra ([`quat`], [`dual`]) sit poses
//! ([`pose`]), twists and wrenches ([`kinematics`]), the screw exponential and
//! logarithm with slerp ([`screw`]), spline trajectories ([`interp`]) and
//! serial-chain kinematics ([`solver`]). [`oracle`] is an independent 4×4
//! matrix implementation used for cross-checking.

pub mod dual;
pub mod error;
pub mod interp;
pub mod kinematics;
pub mod oracle;
pub mod pose;
pub mod quat;
pub mod screw;
pub mod solver;

pub use dual::{DualNumber, DualQuaternion, VectorDualQuaternion};
pub use error::{ConvergenceFailure, Error, Result};
pub use interp::{
    interpolate, interpolate_poses, interpolate_ramped, interpolate_split, InterpOptions,
    KnotSequence, PoseTrajectory,
};
pub use kinematics::{Twist, Wrench};
pub use pose::{Pose, QuatTranslation};
pub use quat::{Quaternion, Vector3};
pub use screw::{screw_exp, screw_log, slerp, Slerp};
pub use solver::{JointAxis, JointKind, SerialChain};
