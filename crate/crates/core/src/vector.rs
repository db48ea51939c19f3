//! Small fixed-size vectors shared by the 2D and 3D code paths.
//!
//! Planar data is stored with a zero third component, so one set of
//! arithmetic routines serves both dimensions. Adding the zero term does not
//! change any floating-point result.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ambient dimension of a boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn get(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub fn from_usize(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            _ => Err(Error::BadDimension(n)),
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vector(pub [f64; 3]);

impl Vector {
    pub const ZERO: Vector = Vector([0.0; 3]);

    pub const fn new2(x: f64, y: f64) -> Self {
        Vector([x, y, 0.0])
    }

    pub const fn new3(x: f64, y: f64, z: f64) -> Self {
        Vector([x, y, z])
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.0[0]
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.0[1]
    }

    #[inline]
    pub fn z(&self) -> f64 {
        self.0[2]
    }

    #[inline]
    pub fn dot(&self, o: &Vector) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    #[inline]
    pub fn cross(&self, o: &Vector) -> Vector {
        Vector([
            self.0[1] * o.0[2] - self.0[2] * o.0[1],
            self.0[2] * o.0[0] - self.0[0] * o.0[2],
            self.0[0] * o.0[1] - self.0[1] * o.0[0],
        ])
    }

    /// z-component of the planar cross product.
    #[inline]
    pub fn perp_dot(&self, o: &Vector) -> f64 {
        self.0[0] * o.0[1] - self.0[1] * o.0[0]
    }

    #[inline]
    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn normalized(&self) -> Vector {
        *self * (1.0 / self.norm())
    }

    pub fn distance(&self, o: &Vector) -> f64 {
        (*self - *o).norm()
    }

    /// Planar rotation by -90 degrees: `(x, y) -> (y, -x)`.
    ///
    /// For a counterclockwise polygon this maps an edge tangent to its
    /// outward normal.
    #[inline]
    pub fn rot_cw(&self) -> Vector {
        Vector([self.0[1], -self.0[0], 0.0])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn coords(&self, dim: Dim) -> &[f64] {
        &self.0[..dim.get()]
    }
}

impl Add for Vector {
    type Output = Vector;
    #[inline]
    fn add(self, o: Vector) -> Vector {
        Vector([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vector {
    #[inline]
    fn add_assign(&mut self, o: Vector) {
        *self = *self + o;
    }
}

impl Sub for Vector {
    type Output = Vector;
    #[inline]
    fn sub(self, o: Vector) -> Vector {
        Vector([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl SubAssign for Vector {
    #[inline]
    fn sub_assign(&mut self, o: Vector) {
        *self = *self - o;
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    #[inline]
    fn mul(self, s: f64) -> Vector {
        Vector([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Neg for Vector {
    type Output = Vector;
    #[inline]
    fn neg(self) -> Vector {
        Vector([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Orthonormal pair spanning the plane orthogonal to the unit vector `n`.
///
/// Branchless construction of Duff et al. (2017).
pub fn orthonormal_basis(n: &Vector) -> (Vector, Vector) {
    let sign = 1.0f64.copysign(n.z());
    let a = -1.0 / (sign + n.z());
    let b = n.x() * n.y() * a;
    (
        Vector::new3(1.0 + sign * n.x() * n.x() * a, sign * b, -sign * n.x()),
        Vector::new3(b, sign + n.y() * n.y() * a, -n.y()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_orthonormal() {
        for n in [
            Vector::new3(0.0, 0.0, 1.0),
            Vector::new3(0.0, 0.0, -1.0),
            Vector::new3(1.0, 2.0, -3.0).normalized(),
            Vector::new3(-0.3, 0.1, 0.2).normalized(),
        ] {
            let (u, v) = orthonormal_basis(&n);
            assert!((u.norm() - 1.0).abs() < 1e-14);
            assert!((v.norm() - 1.0).abs() < 1e-14);
            assert!(u.dot(&v).abs() < 1e-14);
            assert!(u.dot(&n).abs() < 1e-14);
            assert!(v.dot(&n).abs() < 1e-14);
        }
    }

    #[test]
    fn rot_cw_of_ccw_tangent_points_outward() {
        // bottom edge of the unit square, traversed left to right
        let t = Vector::new2(1.0, 0.0);
        assert_eq!(t.rot_cw(), Vector::new2(0.0, -1.0));
    }
}
