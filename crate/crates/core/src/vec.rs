//! Small fixed-size vectors.
//!
//! Only what the kinematics code needs: arithmetic, dot/cross products,
//! normalization with an explicit degeneracy check, and projection onto the
//! span of two vectors.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Norms at or below this are treated as zero.
pub const EPS_NORM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Operations shared by [`Vec2`] and [`Vec3`], so curves and finite
/// differences can be written once for both dimensions.
pub trait Vector:
    Copy
    + std::fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + Send
    + Sync
    + 'static
{
    const DIM: usize;
    fn zero() -> Self;
    fn dot(self, other: Self) -> f64;
    fn components(self) -> Vec<f64>;

    fn norm_sq(self) -> f64 {
        self.dot(self)
    }
    fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }
    fn is_finite(self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0)
    }

    /// Scalar cross product `x1*y2 - y1*x2`.
    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    /// Counter-clockwise rotation by 90°: `(-y, x)`.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn unit(self) -> Result<Self> {
        unit_vector(self)
    }

    /// Rotate counter-clockwise by `angle` radians.
    pub fn rotated(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Embed in 3-space with the given `z`.
    pub fn extend(self, z: f64) -> Vec3 {
        Vec3::new(self.x, self.y, z)
    }
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub const fn ex() -> Self {
        Self::new(1.0, 0.0, 0.0)
    }
    pub const fn ey() -> Self {
        Self::new(0.0, 1.0, 0.0)
    }
    pub const fn ez() -> Self {
        Self::new(0.0, 0.0, 1.0)
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn unit(self) -> Result<Self> {
        unit_vector(self)
    }

    /// Projections onto the coordinate planes xOy, xOz and yOz.
    pub fn xy(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }
    pub fn xz(self) -> Vec2 {
        Vec2::new(self.x, self.z)
    }
    pub fn yz(self) -> Vec2 {
        Vec2::new(self.y, self.z)
    }

    pub fn as_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

macro_rules! impl_ops {
    ($t:ident, $($f:ident),+) => {
        impl Add for $t {
            type Output = Self;
            fn add(self, o: Self) -> Self { Self { $($f: self.$f + o.$f),+ } }
        }
        impl Sub for $t {
            type Output = Self;
            fn sub(self, o: Self) -> Self { Self { $($f: self.$f - o.$f),+ } }
        }
        impl Neg for $t {
            type Output = Self;
            fn neg(self) -> Self { Self { $($f: -self.$f),+ } }
        }
        impl Mul<f64> for $t {
            type Output = Self;
            fn mul(self, s: f64) -> Self { Self { $($f: self.$f * s),+ } }
        }
        impl Mul<$t> for f64 {
            type Output = $t;
            fn mul(self, v: $t) -> $t { v * self }
        }
        impl Div<f64> for $t {
            type Output = Self;
            fn div(self, s: f64) -> Self { Self { $($f: self.$f / s),+ } }
        }
        impl AddAssign for $t {
            fn add_assign(&mut self, o: Self) { $(self.$f += o.$f;)+ }
        }
        impl SubAssign for $t {
            fn sub_assign(&mut self, o: Self) { $(self.$f -= o.$f;)+ }
        }
    };
}

impl_ops!(Vec2, x, y);
impl_ops!(Vec3, x, y, z);

impl Vector for Vec2 {
    const DIM: usize = 2;
    fn zero() -> Self {
        Self::default()
    }
    fn dot(self, o: Self) -> f64 {
        Vec2::dot(self, o)
    }
    fn components(self) -> Vec<f64> {
        vec![self.x, self.y]
    }
    fn norm(self) -> f64 {
        Vec2::norm(self)
    }
}

impl Vector for Vec3 {
    const DIM: usize = 3;
    fn zero() -> Self {
        Self::default()
    }
    fn dot(self, o: Self) -> f64 {
        Vec3::dot(self, o)
    }
    fn components(self) -> Vec<f64> {
        vec![self.x, self.y, self.z]
    }
}

/// `v / |v|`, failing with [`Error::DegenerateVector`] when `|v| <= EPS_NORM`.
pub fn unit_vector<V: Vector>(v: V) -> Result<V> {
    unit_vector_eps(v, EPS_NORM)
}

/// [`unit_vector`] with a caller-chosen degeneracy threshold.
pub fn unit_vector_eps<V: Vector>(v: V, eps: f64) -> Result<V> {
    let n = v.norm();
    if !(n > eps) || !n.is_finite() {
        return Err(Error::DegenerateVector { norm: n });
    }
    Ok(v / n)
}

/// Orthogonal projection of `v` onto `span{a, b}`.
///
/// Solves the 2×2 normal equations; fails with [`Error::DegenerateSpan`]
/// when `|a ∧ b| <= EPS_NORM`.
pub fn project_onto_span(v: Vec3, a: Vec3, b: Vec3) -> Result<Vec3> {
    let axb = a.cross(b).norm();
    if !(axb > EPS_NORM) {
        return Err(Error::DegenerateSpan { cross_norm: axb });
    }
    let (aa, ab, bb) = (a.dot(a), a.dot(b), b.dot(b));
    let (va, vb) = (v.dot(a), v.dot(b));
    // Gram determinant equals |a ∧ b|², computed the stable way.
    let det = axb * axb;
    let alpha = (va * bb - vb * ab) / det;
    let beta = (vb * aa - va * ab) / det;
    Ok(a * alpha + b * beta)
}

/// `a ∧ b · c`.
pub fn triple_product(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    a.cross(b).dot(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_examples() {
        let u = unit_vector(Vec2::new(3.0, 4.0)).unwrap();
        assert_eq!(u, Vec2::new(0.6, 0.8));
        assert!(matches!(
            unit_vector(Vec2::new(0.0, 0.0)),
            Err(Error::DegenerateVector { .. })
        ));
        let u = unit_vector(Vec3::new(1.0, 1.0, 1.0)).unwrap();
        let s = 1.0 / 3f64.sqrt();
        for c in u.as_array() {
            assert!((c - s).abs() < 1e-15);
        }
    }

    #[test]
    fn projection_examples() {
        let p = project_onto_span(Vec3::new(1., 2., 3.), Vec3::ex(), Vec3::ey()).unwrap();
        assert_eq!(p, Vec3::new(1., 2., 0.));
        let p = project_onto_span(Vec3::new(0., 0., 5.), Vec3::ex(), Vec3::ey()).unwrap();
        assert_eq!(p, Vec3::zero());
        let p = project_onto_span(
            Vec3::new(1., 1., 1.),
            Vec3::new(1., 1., 0.),
            Vec3::new(1., -1., 0.),
        )
        .unwrap();
        assert!((p - Vec3::new(1., 1., 0.)).norm() < 1e-15);
        assert!(matches!(
            project_onto_span(Vec3::ex(), Vec3::ex(), Vec3::ex() * 2.0),
            Err(Error::DegenerateSpan { .. })
        ));
    }

    #[test]
    fn triple_examples() {
        assert_eq!(triple_product(Vec3::ex(), Vec3::ey(), Vec3::ez()), 1.0);
        let a = Vec3::new(0.3, -1.2, 2.0);
        assert_eq!(triple_product(a, a, Vec3::new(1., 5., 2.)), 0.0);
        let t = triple_product(
            Vec3::new(1., 2., 3.),
            Vec3::new(4., 5., 6.),
            Vec3::new(7., 8., 10.),
        );
        assert!((t + 3.0).abs() < 1e-12);
    }
}
