//! Points, contact forms and the measurement layer.
//!
//! `alpha3 = dz - y dx` on `R^3` and `beta5 = dz - y dx - p dq` on `R^5`.
//! Both are evaluated pointwise on tangent vectors; a curve or surface is
//! Legendrian when its tangents are annihilated, and the largest absolute
//! value over a grid is its *Legendrian defect*.

mod measure;
mod param;

pub use measure::{
    c0_distance, c0_distance_scan, form_range, legendrian_defect, legendrian_defect_scan,
    transverse_check,
};
pub use param::{central_partial, DerivativeMode, Domain, FnMap, GridSpec, ParamMap, Slice2};

use serde::{Deserialize, Serialize};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Point of `(R^3, ker(dz - y dx))`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Point of `(R^5, ker(dz - y dx - p dq))`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point5 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub q: f64,
    pub p: f64,
}

/// Tangent vectors share the point layout: components along `d/dx, d/dy, d/dz`.
pub type Tangent3 = Point3;
/// Components along `d/dx, d/dy, d/dz, d/dq, d/dp`.
pub type Tangent5 = Point5;

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    /// `(self, q, p)` in `R^5`.
    pub fn extend(self, q: f64, p: f64) -> Point5 {
        Point5::new(self.x, self.y, self.z, q, p)
    }
}

impl Point5 {
    pub const fn new(x: f64, y: f64, z: f64, q: f64, p: f64) -> Self {
        Self { x, y, z, q, p }
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.x, self.y, self.z, self.q, self.p]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    /// Projection to the `(x, y, z)` factor.
    pub fn xyz(self) -> Point3 {
        Point3::new(self.x, self.y, self.z)
    }
}

/// `dz - y dx` at `pt` applied to `v`.
#[inline]
pub fn alpha3(pt: Point3, v: Tangent3) -> f64 {
    v.z - pt.y * v.x
}

/// `dz - y dx - p dq` at `pt` applied to `v`.
#[inline]
pub fn beta5(pt: Point5, v: Tangent5) -> f64 {
    v.z - pt.y * v.x - pt.p * v.q
}

/// Shared interface of [`Point3`] and [`Point5`]: vector-space operations,
/// Euclidean norm and the standard contact form of the ambient space.
pub trait ContactPoint:
    Copy
    + Debug
    + Send
    + Sync
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
{
    const DIM: usize;

    /// The standard contact form at `self` applied to `v`.
    fn contact_form(&self, v: &Self) -> f64;

    fn components(&self) -> Vec<f64>;

    fn from_components(c: &[f64]) -> Self;

    fn norm(&self) -> f64 {
        self.components().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    fn dist(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    fn max_abs(&self) -> f64 {
        self.components().iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }
}

macro_rules! impl_point_ops {
    ($t:ident, $($f:ident),+) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t { $t { $($f: self.$f + o.$f),+ } }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t { $t { $($f: self.$f - o.$f),+ } }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t { $t { $($f: -self.$f),+ } }
        }
        impl Mul<f64> for $t {
            type Output = $t;
            fn mul(self, k: f64) -> $t { $t { $($f: self.$f * k),+ } }
        }
    };
}

impl_point_ops!(Point3, x, y, z);
impl_point_ops!(Point5, x, y, z, q, p);

impl ContactPoint for Point3 {
    const DIM: usize = 3;

    fn contact_form(&self, v: &Self) -> f64 {
        alpha3(*self, *v)
    }

    fn components(&self) -> Vec<f64> {
        self.to_array().to_vec()
    }

    fn from_components(c: &[f64]) -> Self {
        Self::new(c[0], c[1], c[2])
    }

    fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl ContactPoint for Point5 {
    const DIM: usize = 5;

    fn contact_form(&self, v: &Self) -> f64 {
        beta5(*self, *v)
    }

    fn components(&self) -> Vec<f64> {
        self.to_array().to_vec()
    }

    fn from_components(c: &[f64]) -> Self {
        Self::new(c[0], c[1], c[2], c[3], c[4])
    }

    fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z + self.q * self.q + self.p * self.p)
            .sqrt()
    }

    fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }
}
