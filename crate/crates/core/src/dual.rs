//! Dual numbers and dual quaternions.
//!
//! A dual quaternion `η = A + εB` is a pair of quaternions with `ε² = 0`.
//! Its norm is a dual number `a + εb`, so dual numbers get their own small
//! algebra here: product, inverse and square root.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::{Quaternion, Vector3, UNIT_TOLERANCE};

/// Absolute tolerance on the scalar parts for [`DualQuaternion::is_vector`].
pub const VECTOR_TOLERANCE: f64 = 1e-9;

// ── Dual numbers ─────────────────────────────────────────────────────

/// A dual number `a + εb`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DualNumber {
    pub a: f64,
    pub b: f64,
}

impl DualNumber {
    pub const ONE: Self = Self::new(1.0, 0.0);
    pub const ZERO: Self = Self::new(0.0, 0.0);

    #[inline]
    pub const fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    /// `1/(a + εb) = 1/a - εb/a²`.
    pub fn inverse(&self) -> Result<Self> {
        if self.a == 0.0 {
            return Err(Error::domain("dual number with zero real part has no inverse"));
        }
        let inv = 1.0 / self.a;
        Ok(Self::new(inv, -self.b * inv * inv))
    }

    /// `√(a + εb) = √a + εb/(2√a)`, defined for `a > 0`.
    pub fn sqrt(&self) -> Result<Self> {
        if !(self.a > 0.0) {
            return Err(Error::domain(format!(
                "square root of dual number requires a positive real part (a = {})",
                self.a
            )));
        }
        let r = self.a.sqrt();
        Ok(Self::new(r, self.b / (2.0 * r)))
    }
}

impl Add for DualNumber {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for DualNumber {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl Mul for DualNumber {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.a * o.a, self.a * o.b + self.b * o.a)
    }
}

impl Neg for DualNumber {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl fmt::Display for DualNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ε{}", self.a, self.b)
    }
}

// ── Dual quaternions ─────────────────────────────────────────────────

/// A dual quaternion `A + εB`.
///
/// Serializes as the JSON array `[aw, ax, ay, az, bw, bx, by, bz]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 8]", into = "[f64; 8]")]
pub struct DualQuaternion {
    pub real: Quaternion,
    pub dual: Quaternion,
}

impl DualQuaternion {
    pub const ZERO: Self = Self::new(Quaternion::ZERO, Quaternion::ZERO);
    pub const ONE: Self = Self::new(Quaternion::ONE, Quaternion::ZERO);

    #[inline]
    pub const fn new(real: Quaternion, dual: Quaternion) -> Self {
        Self { real, dual }
    }

    /// `1 + εr` for a point `r`.
    pub fn from_point(r: Vector3) -> Self {
        Self::new(Quaternion::ONE, r.to_quaternion())
    }

    pub fn to_array(self) -> [f64; 8] {
        let [a0, a1, a2, a3] = self.real.to_array();
        let [b0, b1, b2, b3] = self.dual.to_array();
        [a0, a1, a2, a3, b0, b1, b2, b3]
    }

    pub fn from_slice(s: &[f64]) -> Result<Self> {
        let arr: [f64; 8] = s
            .try_into()
            .map_err(|_| Error::input(format!("dual quaternion needs 8 components, got {}", s.len())))?;
        Ok(arr.into())
    }

    /// `η* = A* + εB*`. Reverses products: `(η₁η₂)* = η₂*η₁*`.
    #[inline]
    pub fn conj(&self) -> Self {
        Self::new(self.real.conj(), self.dual.conj())
    }

    /// The other conjugation, `A - εB`. Only used by the sandwich form of the
    /// point action, `1 + εs = η(1 + εr)η̄*`.
    #[inline]
    pub fn bar(&self) -> Self {
        Self::new(self.real, -self.dual)
    }

    /// `|η|² = η*η = |A|² + 2ε(B·A)`. Defined for every dual quaternion.
    pub fn norm_squared(&self) -> DualNumber {
        DualNumber::new(self.real.norm_squared(), 2.0 * self.dual.dot(&self.real))
    }

    /// `|η| = |A| + ε(B·A)/|A|`.
    pub fn norm(&self) -> Result<DualNumber> {
        let n = self.real.norm();
        if n == 0.0 {
            return Err(Error::domain("norm undefined for pure-dual quaternion"));
        }
        Ok(DualNumber::new(n, self.dual.dot(&self.real) / n))
    }

    /// `η⁻¹ = A⁻¹ - εA⁻¹BA⁻¹`.
    pub fn inverse(&self) -> Result<Self> {
        let ai = self
            .real
            .inverse()
            .map_err(|_| Error::domain("inverse undefined for pure-dual quaternion"))?;
        Ok(Self::new(ai, -(ai * self.dual * ai)))
    }

    /// Projection onto the unit dual quaternions, `η|η|⁻¹`.
    ///
    /// Evaluated with dual-number arithmetic, which expands to
    /// `A/|A| + ε(B/|A| - (B·A)A/|A|³)`.
    pub fn normalize(&self) -> Result<Self> {
        let inv = self
            .norm()
            .map_err(|_| Error::domain("normalization undefined for pure-dual quaternion"))?
            .inverse()?;
        Ok(*self * inv)
    }

    /// Eight-dimensional Euclidean inner product.
    #[inline]
    pub fn dot(&self, other: &Self) -> f64 {
        self.real.dot(&other.real) + self.dual.dot(&other.dual)
    }

    /// Euclidean length of the 8-vector (not the dual-number norm).
    pub fn euclidean_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// `Re(η) = Re(A) + εRe(B)`.
    pub fn re(&self) -> DualNumber {
        DualNumber::new(self.real.w, self.dual.w)
    }

    /// `Im(η) = ½(η - η*)`.
    pub fn im(&self) -> VectorDualQuaternion {
        VectorDualQuaternion::new(self.real.vector(), self.dual.vector())
    }

    /// `|A| = 1` and `B·A = 0`, each within [`UNIT_TOLERANCE`].
    pub fn is_unit(&self) -> bool {
        (self.real.norm() - 1.0).abs() <= UNIT_TOLERANCE
            && self.dual.dot(&self.real).abs() <= UNIT_TOLERANCE
    }

    /// Both scalar parts vanish within [`VECTOR_TOLERANCE`].
    pub fn is_vector(&self) -> bool {
        self.is_vector_within(VECTOR_TOLERANCE)
    }

    pub fn is_vector_within(&self, tol: f64) -> bool {
        self.real.w.abs() <= tol && self.dual.w.abs() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.real.is_finite() && self.dual.is_finite()
    }

    pub(crate) fn check_unit(&self, what: &str) -> Result<()> {
        if !self.is_unit() {
            return Err(Error::domain(format!(
                "{what}: expected unit dual quaternion (|A| = {}, B·A = {})",
                self.real.norm(),
                self.dual.dot(&self.real)
            )));
        }
        Ok(())
    }
}

impl From<[f64; 8]> for DualQuaternion {
    fn from(a: [f64; 8]) -> Self {
        Self::new(
            Quaternion::new(a[0], a[1], a[2], a[3]),
            Quaternion::new(a[4], a[5], a[6], a[7]),
        )
    }
}

impl From<DualQuaternion> for [f64; 8] {
    fn from(d: DualQuaternion) -> Self {
        d.to_array()
    }
}

impl From<Quaternion> for DualQuaternion {
    fn from(q: Quaternion) -> Self {
        Self::new(q, Quaternion::ZERO)
    }
}

impl From<DualNumber> for DualQuaternion {
    fn from(d: DualNumber) -> Self {
        Self::new(Quaternion::from_real(d.a), Quaternion::from_real(d.b))
    }
}

impl Mul for DualQuaternion {
    type Output = Self;
    /// `(A₁ + εB₁)(A₂ + εB₂) = A₁A₂ + ε(A₁B₂ + B₁A₂)`.
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(self.real * o.real, self.real * o.dual + self.dual * o.real)
    }
}

impl Mul<DualNumber> for DualQuaternion {
    type Output = Self;
    /// Dual numbers commute with every dual quaternion.
    #[inline]
    fn mul(self, d: DualNumber) -> Self {
        Self::new(self.real * d.a, self.dual * d.a + self.real * d.b)
    }
}

impl Mul<DualQuaternion> for DualNumber {
    type Output = DualQuaternion;
    #[inline]
    fn mul(self, q: DualQuaternion) -> DualQuaternion {
        q * self
    }
}

impl Mul<f64> for DualQuaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.real * s, self.dual * s)
    }
}

impl Mul<DualQuaternion> for f64 {
    type Output = DualQuaternion;
    #[inline]
    fn mul(self, q: DualQuaternion) -> DualQuaternion {
        q * self
    }
}

impl Div<f64> for DualQuaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.real / s, self.dual / s)
    }
}

impl Add for DualQuaternion {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.real + o.real, self.dual + o.dual)
    }
}

impl Sub for DualQuaternion {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.real - o.real, self.dual - o.dual)
    }
}

impl Neg for DualQuaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.real, -self.dual)
    }
}

// ── Vector dual quaternions ──────────────────────────────────────────

/// A dual quaternion whose real and dual parts are both vector quaternions,
/// `a + εb` with `a, b` three-vectors. Satisfies `θ + θ* = 0`.
///
/// Twists, wrenches, Lie differences and screw logarithms all live here.
/// Serializes as `{"real": [3], "dual": [3]}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorDualQuaternion {
    pub real: Vector3,
    pub dual: Vector3,
}

impl VectorDualQuaternion {
    pub const ZERO: Self = Self::new(Vector3::ZERO, Vector3::ZERO);

    #[inline]
    pub const fn new(real: Vector3, dual: Vector3) -> Self {
        Self { real, dual }
    }

    #[inline]
    pub fn to_dual_quaternion(self) -> DualQuaternion {
        DualQuaternion::new(self.real.to_quaternion(), self.dual.to_quaternion())
    }

    /// The six coordinates `[real, dual]`.
    pub fn to_array(self) -> [f64; 6] {
        [
            self.real.x, self.real.y, self.real.z, self.dual.x, self.dual.y, self.dual.z,
        ]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self::new(Vector3::new(a[0], a[1], a[2]), Vector3::new(a[3], a[4], a[5]))
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.real.dot(&other.real) + self.dual.dot(&other.dual)
    }

    /// Euclidean length of the 6-vector.
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.real.is_finite() && self.dual.is_finite()
    }
}

impl TryFrom<DualQuaternion> for VectorDualQuaternion {
    type Error = Error;

    /// Accepts dual quaternions whose scalar parts are within
    /// [`VECTOR_TOLERANCE`] of zero; those residual scalars are dropped.
    fn try_from(d: DualQuaternion) -> Result<Self> {
        if !d.is_vector() {
            return Err(Error::domain(format!(
                "expected vector dual quaternion (scalar parts {}, {})",
                d.real.w, d.dual.w
            )));
        }
        Ok(d.im())
    }
}

impl From<VectorDualQuaternion> for DualQuaternion {
    fn from(v: VectorDualQuaternion) -> Self {
        v.to_dual_quaternion()
    }
}

impl Add for VectorDualQuaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.real + o.real, self.dual + o.dual)
    }
}

impl Sub for VectorDualQuaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.real - o.real, self.dual - o.dual)
    }
}

impl Neg for VectorDualQuaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.real, -self.dual)
    }
}

impl Mul<f64> for VectorDualQuaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.real * s, self.dual * s)
    }
}

impl Mul<VectorDualQuaternion> for f64 {
    type Output = VectorDualQuaternion;
    fn mul(self, v: VectorDualQuaternion) -> VectorDualQuaternion {
        v * self
    }
}
