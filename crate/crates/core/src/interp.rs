//! Low-jerk pose trajectories through timed knots.
//!
//! The knots are splined component-wise with natural cubic splines (in the
//! 8-dimensional dual-quaternion space, or separately in rotation-quaternion
//! space and translation space) and every sample is normalized back onto the
//! unit dual quaternions. An optional ramp reparameterization `s(t)` makes the
//! trajectory start and end at rest with bounded jerk.

use crate::dual::DualQuaternion;
use crate::error::{Error, Result};
use crate::pose::Pose;
use crate::quat::{Quaternion, Vector3};

/// Samples whose (rotation) quaternion norm falls below this are rejected.
pub const NEAR_ZERO_QUATERNION: f64 = 1e-9;

// ── Natural cubic spline ─────────────────────────────────────────────

/// A natural ("free") cubic spline through `N`-dimensional knots: `C²`, with
/// zero second derivative at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline<const N: usize> {
    times: Vec<f64>,
    values: Vec<[f64; N]>,
    /// Second derivatives at the knots.
    second: Vec<[f64; N]>,
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.len() < 2 {
        return Err(Error::input(format!("need at least 2 knots, got {}", times.len())));
    }
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::input(format!("knot time {t} is not finite")));
    }
    if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::input(format!(
            "knot times must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

impl<const N: usize> CubicSpline<N> {
    pub fn new(times: &[f64], values: &[[f64; N]]) -> Result<Self> {
        check_times(times)?;
        if times.len() != values.len() {
            return Err(Error::input(format!(
                "{} knot times but {} knot values",
                times.len(),
                values.len()
            )));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::input("knot values must be finite"));
        }
        let n = times.len() - 1;
        let mut second = vec![[0.0; N]; n + 1];
        if n >= 2 {
            // Tridiagonal system for the interior second derivatives,
            // solved by forward elimination and back substitution.
            let h: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
            let m = n - 1;
            let mut diag = vec![0.0; m];
            let mut rhs = vec![[0.0; N]; m];
            for i in 0..m {
                let k = i + 1;
                diag[i] = 2.0 * (h[k - 1] + h[k]);
                for d in 0..N {
                    rhs[i][d] = 6.0
                        * ((values[k + 1][d] - values[k][d]) / h[k]
                            - (values[k][d] - values[k - 1][d]) / h[k - 1]);
                }
            }
            for i in 1..m {
                let w = h[i] / diag[i - 1];
                diag[i] -= w * h[i];
                for d in 0..N {
                    rhs[i][d] -= w * rhs[i - 1][d];
                }
            }
            for i in (0..m).rev() {
                for d in 0..N {
                    let upper = if i + 1 < m { h[i + 1] * second[i + 2][d] } else { 0.0 };
                    second[i + 1][d] = (rhs[i][d] - upper) / diag[i];
                }
            }
        }
        Ok(Self {
            times: times.to_vec(),
            values: values.to_vec(),
            second,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.times[0], *self.times.last().unwrap())
    }

    /// Second derivatives at the knots.
    pub fn knot_second_derivatives(&self) -> &[[f64; N]] {
        &self.second
    }

    fn segment(&self, t: f64) -> usize {
        let last = self.times.len() - 2;
        match self.times.partition_point(|&k| k <= t) {
            0 => 0,
            i => (i - 1).min(last),
        }
    }

    /// Value at `t`. Outside the knot range the end cubics are extended.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let i = self.segment(t);
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let (a, b) = (t1 - t, t - t0);
        let (y0, y1) = (&self.values[i], &self.values[i + 1]);
        let (m0, m1) = (&self.second[i], &self.second[i + 1]);
        std::array::from_fn(|d| {
            (m0[d] * a * a * a + m1[d] * b * b * b) / (6.0 * h)
                + (y0[d] / h - m0[d] * h / 6.0) * a
                + (y1[d] / h - m1[d] * h / 6.0) * b
        })
    }

    /// First derivative at `t`.
    pub fn derivative(&self, t: f64) -> [f64; N] {
        let i = self.segment(t);
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let (a, b) = (t1 - t, t - t0);
        let (y0, y1) = (&self.values[i], &self.values[i + 1]);
        let (m0, m1) = (&self.second[i], &self.second[i + 1]);
        std::array::from_fn(|d| {
            (-m0[d] * a * a + m1[d] * b * b) / (2.0 * h) + (y1[d] - y0[d]) / h
                - (m1[d] - m0[d]) * h / 6.0
        })
    }

    /// Second derivative at `t`.
    pub fn second_derivative(&self, t: f64) -> [f64; N] {
        let i = self.segment(t);
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let (m0, m1) = (&self.second[i], &self.second[i + 1]);
        std::array::from_fn(|d| (m0[d] * (t1 - t) + m1[d] * (t - t0)) / h)
    }
}

// ── Ramp reparameterization ──────────────────────────────────────────

/// `f(u) = ½ + ½(2 - u)u³`: `f(0) = ½`, `f(1) = f'(1) = 1`,
/// `f'(0) = f''(0) = f''(1) = 0`.
pub fn ramp_f(u: f64) -> f64 {
    0.5 + 0.5 * (2.0 - u) * u * u * u
}

/// The time map that holds still before `t₀`, ramps up on `[t₀, t₁)`, is the
/// identity on `[t₁, t_{n-1})`, ramps down on `[t_{n-1}, t_n)` and holds
/// still after `t_n`. Its range is `[½(t₀+t₁), ½(t_{n-1}+t_n)]` and
/// `s(t_k) = t_k` for `1 <= k <= n-1`.
pub fn ramp_s(t: f64, times: &[f64]) -> Result<f64> {
    check_times(times)?;
    if times.len() < 3 {
        return Err(Error::input("ramp needs at least 3 knot times"));
    }
    Ok(ramp_s_unchecked(t, times))
}

fn ramp_s_unchecked(t: f64, times: &[f64]) -> f64 {
    let n = times.len() - 1;
    let (t0, t1) = (times[0], times[1]);
    let (tm, tn) = (times[n - 1], times[n]);
    if t < t0 {
        0.5 * (t0 + t1)
    } else if t < t1 {
        t0 + (t1 - t0) * ramp_f((t - t0) / (t1 - t0))
    } else if t < tm {
        t
    } else if t < tn {
        tn - (tn - tm) * ramp_f((tn - t) / (tn - tm))
    } else {
        0.5 * (tm + tn)
    }
}

/// Spline times for the ramped trajectory: the knot times with the two end
/// times pulled in to the midpoints `½(t₀+t₁)` and `½(t_{n-1}+t_n)`.
fn ramp_schedule(times: &[f64]) -> Vec<f64> {
    let n = times.len() - 1;
    let mut s = times.to_vec();
    s[0] = 0.5 * (times[0] + times[1]);
    s[n] = 0.5 * (times[n - 1] + times[n]);
    s
}

// ── Pose trajectories ────────────────────────────────────────────────

/// Strictly increasing times with one unit pose each.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotSequence {
    times: Vec<f64>,
    poses: Vec<Pose>,
}

impl KnotSequence {
    pub fn new(times: Vec<f64>, poses: Vec<Pose>) -> Result<Self> {
        check_times(&times)?;
        if times.len() != poses.len() {
            return Err(Error::input(format!(
                "{} knot times but {} poses",
                times.len(),
                poses.len()
            )));
        }
        Ok(Self { times, poses })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn poses(&self) -> &[Pose] {
        &self.poses
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Flips signs so that consecutive knots have a non-negative 8-dimensional
    /// dot product. Every knot still represents the same pose.
    pub fn sign_aligned(&self) -> Vec<DualQuaternion> {
        let mut out: Vec<DualQuaternion> = Vec::with_capacity(self.poses.len());
        for p in &self.poses {
            let d = *p.dual_quaternion();
            match out.last() {
                Some(prev) if prev.dot(&d) < 0.0 => out.push(-d),
                _ => out.push(d),
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Curve {
    Dual(CubicSpline<8>),
    Split {
        rotation: CubicSpline<4>,
        translation: CubicSpline<3>,
    },
}

/// How the trajectory is built from the knots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InterpOptions {
    /// Spline rotation quaternions and translations separately.
    pub split: bool,
    /// Ramp up from rest at `t₀` and down to rest at `t_n`.
    pub ramped: bool,
}

/// `η(t) = normalized γ(s(t))`, evaluated lazily.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseTrajectory {
    curve: Curve,
    /// Knot times; `Some` when the ramp map is applied.
    ramp: Option<Vec<f64>>,
    domain: (f64, f64),
    min_norm: f64,
}

/// Splines the 8-dimensional dual quaternions and normalizes.
pub fn interpolate_poses(knots: &KnotSequence) -> Result<PoseTrajectory> {
    interpolate(knots, InterpOptions::default())
}

/// Splines rotation quaternions and translations separately, so the
/// translation follows the plain cubic spline of the knot translations.
pub fn interpolate_split(knots: &KnotSequence) -> Result<PoseTrajectory> {
    interpolate(
        knots,
        InterpOptions {
            split: true,
            ramped: false,
        },
    )
}

/// The ramped trajectory `normalized γ(s(t))`, defined for all real `t` and
/// constant outside `[t₀, t_n]`.
///
/// `t₁ - t₀` and `t_n - t_{n-1}` must be long enough for the ramps to be
/// gentle; this is not checked.
pub fn interpolate_ramped(knots: &KnotSequence) -> Result<PoseTrajectory> {
    interpolate(
        knots,
        InterpOptions {
            split: false,
            ramped: true,
        },
    )
}

pub fn interpolate(knots: &KnotSequence, opts: InterpOptions) -> Result<PoseTrajectory> {
    let times = knots.times();
    if opts.ramped && times.len() < 3 {
        return Err(Error::input("ramped interpolation needs at least 3 knots"));
    }
    let spline_times = if opts.ramped {
        ramp_schedule(times)
    } else {
        times.to_vec()
    };
    let aligned = knots.sign_aligned();
    let curve = if opts.split {
        let rot: Vec<[f64; 4]> = aligned.iter().map(|d| d.real.to_array()).collect();
        let trans: Vec<[f64; 3]> = knots
            .poses()
            .iter()
            .map(|p| p.translation().to_array())
            .collect();
        Curve::Split {
            rotation: CubicSpline::new(&spline_times, &rot)?,
            translation: CubicSpline::new(&spline_times, &trans)?,
        }
    } else {
        let vals: Vec<[f64; 8]> = aligned.iter().map(|d| d.to_array()).collect();
        Curve::Dual(CubicSpline::new(&spline_times, &vals)?)
    };
    Ok(PoseTrajectory {
        curve,
        ramp: opts.ramped.then(|| times.to_vec()),
        domain: (times[0], *times.last().unwrap()),
        min_norm: NEAR_ZERO_QUATERNION,
    })
}

impl PoseTrajectory {
    /// First and last knot time.
    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Replaces the [`NEAR_ZERO_QUATERNION`] threshold.
    pub fn with_min_norm(mut self, min_norm: f64) -> Self {
        self.min_norm = min_norm;
        self
    }

    pub fn is_ramped(&self) -> bool {
        self.ramp.is_some()
    }

    /// Spline parameter for time `t`: `s(t)` when ramped, else `t`.
    pub fn parameter(&self, t: f64) -> f64 {
        match &self.ramp {
            Some(times) => ramp_s_unchecked(t, times),
            None => t,
        }
    }

    /// The raw spline value `γ(s(t))` before normalization.
    pub fn raw(&self, t: f64) -> DualQuaternion {
        let s = self.parameter(t);
        match &self.curve {
            Curve::Dual(sp) => sp.eval(s).into(),
            Curve::Split {
                rotation,
                translation,
            } => {
                let q = Quaternion::from(rotation.eval(s));
                let tr = Vector3::from(translation.eval(s));
                DualQuaternion::new(q, tr.to_quaternion() * q * 0.5)
            }
        }
    }

    /// The pose at time `t`.
    pub fn eval(&self, t: f64) -> Result<Pose> {
        if !t.is_finite() {
            return Err(Error::numeric(format!("time {t} is not finite")));
        }
        let s = self.parameter(t);
        match &self.curve {
            Curve::Dual(sp) => {
                let g = DualQuaternion::from(sp.eval(s));
                check_away_from_zero(g.real.norm(), self.min_norm, t)?;
                Pose::normalized(&g)
            }
            Curve::Split {
                rotation,
                translation,
            } => {
                let q = Quaternion::from(rotation.eval(s));
                let n = q.norm();
                check_away_from_zero(n, self.min_norm, t)?;
                Pose::from_quat_translation(q / n, Vector3::from(translation.eval(s)))
            }
        }
    }

    /// `count` evenly spaced samples over `[t_start, t_end]`.
    pub fn sample_range(&self, t_start: f64, t_end: f64, count: usize) -> Result<Vec<(f64, Pose)>> {
        if count < 2 {
            return Err(Error::input("need at least 2 samples"));
        }
        (0..count)
            .map(|i| {
                let t = if i + 1 == count {
                    t_end
                } else {
                    t_start + (t_end - t_start) * i as f64 / (count - 1) as f64
                };
                self.eval(t).map(|p| (t, p))
            })
            .collect()
    }

    /// `count` evenly spaced samples over the knot range.
    pub fn sample(&self, count: usize) -> Result<Vec<(f64, Pose)>> {
        self.sample_range(self.domain.0, self.domain.1, count)
    }
}

fn check_away_from_zero(norm: f64, min_norm: f64, t: f64) -> Result<()> {
    if !(norm >= min_norm) {
        return Err(Error::numeric(format!(
            "spline passes near quaternion zero at t = {t} (|Q| = {norm:e})"
        )));
    }
    Ok(())
}
