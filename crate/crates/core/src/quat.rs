//! Plain quaternion algebra and the rotation action `r ↦ QrQ*`.
//!
//! Quaternions are stored scalar-first, `w + xi + yj + zk`. Three-vectors are
//! identified with vector quaternions (zero real part), so `Vector3` converts
//! losslessly into a `Quaternion` and back.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs declared "unit" are accepted when `| |Q| - 1 | <= UNIT_TOLERANCE`.
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// A three-vector (positions, angular and linear velocities, torques, forces).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vector3 {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);
    pub const X: Self = Self::new(1.0, 0.0, 0.0);
    pub const Y: Self = Self::new(0.0, 1.0, 0.0);
    pub const Z: Self = Self::new(0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn cross(&self, other: &Self) -> Self {
        Self {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    #[inline]
    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Unit vector in the same direction, or a domain error for the zero vector.
    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::domain("zero vector has no direction"));
        }
        Ok(*self / n)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// The vector quaternion `xi + yj + zk`.
    #[inline]
    pub fn to_quaternion(self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vector3 {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<Vector3> for [f64; 3] {
    fn from(v: Vector3) -> Self {
        v.to_array()
    }
}

impl Index<usize> for Vector3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vector3 index {i} out of range"),
        }
    }
}

impl Add for Vector3 {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Vector3 {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for Vector3 {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl SubAssign for Vector3 {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Neg for Vector3 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vector3 {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vector3> for f64 {
    type Output = Vector3;
    #[inline]
    fn mul(self, v: Vector3) -> Vector3 {
        v * self
    }
}

impl Div<f64> for Vector3 {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.x / s, self.y / s, self.z / s)
    }
}

/// A quaternion `w + xi + yj + zk`.
///
/// Serializes as the JSON array `[w, x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

// ── Constructors ─────────────────────────────────────────────────────

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// Real quaternion `s + 0i + 0j + 0k`.
    #[inline]
    pub const fn from_real(s: f64) -> Self {
        Self::new(s, 0.0, 0.0, 0.0)
    }

    /// Quaternion with scalar part `w` and vector part `v`.
    #[inline]
    pub const fn from_parts(w: f64, v: Vector3) -> Self {
        Self::new(w, v.x, v.y, v.z)
    }

    /// `cos(angle/2) + axis sin(angle/2)`, the rotation by `angle` radians
    /// counterclockwise about `axis`. The negation represents the same rotation.
    pub fn from_axis_angle(axis: Vector3, angle: f64) -> Result<Self> {
        let n = axis.norm();
        if (n - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::domain(format!(
                "rotation axis must be a unit vector (|axis| = {n})"
            )));
        }
        let (s, c) = (0.5 * angle).sin_cos();
        Ok(Self::from_parts(c, axis * s))
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<Vector3> for Quaternion {
    fn from(v: Vector3) -> Self {
        v.to_quaternion()
    }
}

// ── Core operations ──────────────────────────────────────────────────

impl Quaternion {
    /// `A* = w - xi - yj - zk`.
    #[inline]
    pub fn conj(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_squared(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Four-dimensional inner product, `A·B = Re(AB*) = Re(A*B)`.
    #[inline]
    pub fn dot(&self, other: &Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// `Re(A) = ½(A + A*)`.
    #[inline]
    pub fn re(&self) -> f64 {
        self.w
    }

    /// `Im(A) = ½(A - A*)`, returned as a vector quaternion.
    #[inline]
    pub fn im(&self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    /// The vector part as a three-vector.
    #[inline]
    pub fn vector(&self) -> Vector3 {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::domain("zero quaternion"));
        }
        Ok(*self / n)
    }

    /// `A⁻¹ = A*/|A|²`.
    pub fn inverse(&self) -> Result<Self> {
        let n2 = self.norm_squared();
        if n2 == 0.0 {
            return Err(Error::domain("zero quaternion"));
        }
        Ok(self.conj() / n2)
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOLERANCE
    }

    pub fn is_finite(&self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Domain error unless `| |Q| - 1 | <= UNIT_TOLERANCE`.
    pub fn check_unit(&self, what: &str) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::domain(format!("{what}: expected unit quaternion, |Q| = {n}")));
        }
        Ok(())
    }

    /// Apply the rotation `r ↦ QrQ*`. `self` must be unit; it is not renormalized.
    pub fn rotate(&self, r: Vector3) -> Result<Vector3> {
        self.check_unit("rotate")?;
        Ok(self.rotate_unchecked(r))
    }

    /// `QrQ*` without the unit check.
    #[inline]
    pub fn rotate_unchecked(&self, r: Vector3) -> Vector3 {
        (*self * r.to_quaternion() * self.conj()).vector()
    }
}

// ── Operators ────────────────────────────────────────────────────────

impl Mul for Quaternion {
    type Output = Self;
    /// Hamilton product with `i² = j² = k² = ijk = -1`.
    #[inline]
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self {
            w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        }
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        Self::new(self.w + b.w, self.x + b.x, self.y + b.y, self.z + b.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        Self::new(self.w - b.w, self.x - b.x, self.y - b.y, self.z - b.z)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    /// Left-multiplication matrix of `a`, built independently of `Mul`.
    fn left_matrix(a: Quaternion) -> [[f64; 4]; 4] {
        [
            [a.w, -a.x, -a.y, -a.z],
            [a.x, a.w, -a.z, a.y],
            [a.y, a.z, a.w, -a.x],
            [a.z, -a.y, a.x, a.w],
        ]
    }

    fn apply(m: [[f64; 4]; 4], b: Quaternion) -> Quaternion {
        let v = b.to_array();
        let mut out = [0.0; 4];
        for (o, row) in out.iter_mut().zip(m.iter()) {
            *o = row.iter().zip(v.iter()).map(|(m, v)| m * v).sum();
        }
        out.into()
    }

    #[test]
    fn basis_products() {
        use Quaternion as Q;
        assert_eq!(Q::I * Q::I, -Q::ONE);
        assert_eq!(Q::J * Q::J, -Q::ONE);
        assert_eq!(Q::K * Q::K, -Q::ONE);
        assert_eq!(Q::I * Q::J * Q::K, -Q::ONE);
        assert_eq!(Q::I * Q::J, Q::K);
        assert_eq!(Q::J * Q::K, Q::I);
        assert_eq!(Q::K * Q::I, Q::J);
        assert_eq!(Q::J * Q::I, -Q::K);
    }

    #[test]
    fn product_examples() {
        let a = Quaternion::new(0.3, -1.2, 2.0, 0.5);
        assert_eq!(a * Quaternion::ONE, a);
        let p = Quaternion::new(1.0, 1.0, 0.0, 0.0) * Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(p, Quaternion::new(1.0, 1.0, 1.0, 1.0));
        let oracle = apply(
            left_matrix(Quaternion::new(1.0, 1.0, 0.0, 0.0)),
            Quaternion::new(1.0, 0.0, 1.0, 0.0),
        );
        assert_eq!(p, oracle);
    }

    #[test]
    fn conj_norm_inverse() {
        assert_eq!(
            Quaternion::new(1.0, 2.0, 0.0, 0.0).conj(),
            Quaternion::new(1.0, -2.0, 0.0, 0.0)
        );
        assert_eq!(Quaternion::new(1.0, 1.0, 1.0, 1.0).norm(), 2.0);
        let inv = Quaternion::new(0.0, 2.0, 0.0, 0.0).inverse().unwrap();
        assert_eq!(inv, Quaternion::new(0.0, -0.5, 0.0, 0.0));
        assert_eq!(Quaternion::new(0.0, 2.0, 0.0, 0.0) * inv, Quaternion::ONE);
    }

    #[test]
    fn zero_quaternion_errors() {
        assert!(matches!(Quaternion::ZERO.normalize(), Err(Error::Domain(_))));
        assert!(matches!(Quaternion::ZERO.inverse(), Err(Error::Domain(_))));
    }

    #[test]
    fn re_im_dot() {
        let a = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let b = Quaternion::new(-0.5, 0.25, 1.0, 2.0);
        assert_eq!(a.re(), 1.0);
        assert_eq!(a.im(), Quaternion::new(0.0, 2.0, 3.0, 4.0));
        assert!((a.dot(&b) - (a * b.conj()).re()).abs() < 1e-14);
        assert!((a.dot(&b) - (a.conj() * b).re()).abs() < 1e-14);
    }

    #[test]
    fn rotate_examples() {
        let r = Vector3::new(0.3, -0.7, 2.0);
        assert_eq!(Quaternion::ONE.rotate(r).unwrap(), r);
        let s = Quaternion::K.rotate(Vector3::X).unwrap();
        assert!((s - Vector3::new(-1.0, 0.0, 0.0)).norm() < 1e-15);
        let q = Quaternion::new(FRAC_PI_4.cos(), 0.0, 0.0, FRAC_PI_4.sin());
        let s = q.rotate(Vector3::X).unwrap();
        assert!((s - Vector3::Y).norm() < 1e-15);
    }

    #[test]
    fn rotate_rejects_non_unit() {
        let q = Quaternion::new(1.0, 0.0, 0.0, 1e-4);
        assert!(matches!(q.rotate(Vector3::X), Err(Error::Domain(_))));
        let q = Quaternion::new(1.0 + 5e-10, 0.0, 0.0, 0.0);
        assert!(q.rotate(Vector3::X).is_ok());
    }

    #[test]
    fn axis_angle_examples() {
        let q = Quaternion::from_axis_angle(Vector3::Z, PI).unwrap();
        assert!(close(q, Quaternion::K, 1e-15));
        let q = Quaternion::from_axis_angle(Vector3::new(0.6, 0.8, 0.0), 0.0).unwrap();
        assert_eq!(q, Quaternion::ONE);
        let q = Quaternion::from_axis_angle(Vector3::X, FRAC_PI_2).unwrap();
        assert!(close(q, Quaternion::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0), 1e-15));
        // 90° about x takes y to z.
        assert!((q.rotate(Vector3::Y).unwrap() - Vector3::Z).norm() < 1e-15);
        assert!(Quaternion::from_axis_angle(Vector3::new(1.0, 1.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn serde_scalar_first() {
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(serde_json::to_string(&q).unwrap(), "[1.0,2.0,3.0,4.0]");
        let back: Quaternion = serde_json::from_str("[1.0,2.0,3.0,4.0]").unwrap();
        assert_eq!(back, q);
    }
}
