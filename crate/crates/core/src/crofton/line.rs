use std::f64::consts::{PI, TAU};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::energy::{unit_ball_volume, unit_sphere_area};
use crate::error::{Error, Result};
use crate::geometry::Shape;
use crate::vector::{orthonormal_basis, Dim, Vector};

/// Margin of the default sampling ball over the shape's circumradius.
pub const DEFAULT_RADIUS_MARGIN: f64 = 1.1;

/// An unoriented line. The direction is a unit vector whose first nonzero
/// component is positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Line {
    point: Vector,
    direction: Vector,
}

impl Line {
    pub fn new(point: Vector, direction: Vector) -> Result<Self> {
        let len = direction.norm();
        if !(len > 0.0 && len.is_finite()) || !point.is_finite() {
            return Err(Error::BadParams("line needs a finite point and nonzero direction".into()));
        }
        Ok(Line { point, direction: canonical(direction * (1.0 / len)) })
    }

    pub fn point(&self) -> Vector {
        self.point
    }

    pub fn direction(&self) -> Vector {
        self.direction
    }
}

fn canonical(d: Vector) -> Vector {
    let first = d.0.iter().copied().find(|&c| c != 0.0).unwrap_or(0.0);
    if first < 0.0 {
        -d
    } else {
        d
    }
}

/// Kinematic line measure restricted to lines meeting a ball.
///
/// A draw picks a direction uniformly on the sphere (then canonicalized) and
/// an offset uniformly on the disk of radius `radius` orthogonal to it,
/// centered at `center`. The total measure of the sampled set is
/// [`measure`](Self::measure).
///
/// Draws are a pure function of `(seed, index)`: index `i` reads ChaCha8
/// stream `i` under a key derived from the seed.
#[derive(Clone, Debug)]
pub struct LineSampler {
    dim: Dim,
    center: Vector,
    radius: f64,
    seed: u64,
    base: ChaCha8Rng,
}

impl LineSampler {
    pub fn new(dim: Dim, center: Vector, radius: f64, seed: u64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::BadParams(format!("sampling radius {radius}")));
        }
        if dim == Dim::Two && center.z() != 0.0 {
            return Err(Error::BadParams("planar sampler needs a planar center".into()));
        }
        Ok(LineSampler { dim, center, radius, seed, base: ChaCha8Rng::seed_from_u64(seed) })
    }

    /// Ball centered at the vertex centroid with radius
    /// `DEFAULT_RADIUS_MARGIN` times the circumradius about it.
    pub fn enclosing(shape: &Shape, seed: u64) -> Result<Self> {
        let center = shape.vertex_centroid();
        Self::new(shape.dim(), center, DEFAULT_RADIUS_MARGIN * shape.radius_about(&center), seed)
    }

    /// Ball of the given radius about the vertex centroid.
    pub fn with_radius(shape: &Shape, radius: f64, seed: u64) -> Result<Self> {
        Self::new(shape.dim(), shape.vertex_centroid(), radius, seed)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self::new(self.dim, self.center, self.radius, seed).expect("validated already")
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn center(&self) -> Vector {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Kinematic measure of all lines meeting the ball: half the sphere of
    /// directions times the cross-sectional disk, `|S^{n-1}|/2 · ω_{n-1} R^{n-1}`.
    pub fn measure(&self) -> f64 {
        let n = self.dim.get();
        0.5 * unit_sphere_area(n) * unit_ball_volume(n - 1) * self.radius.powi(n as i32 - 1)
    }

    /// Fails with `BallTooSmall` unless every vertex lies in the ball.
    pub fn check_encloses(&self, shape: &Shape) -> Result<()> {
        if shape.dim() != self.dim {
            return Err(Error::BadParams(format!(
                "sampler is {}-dimensional, shape is {}-dimensional",
                self.dim,
                shape.dim()
            )));
        }
        let required = shape.radius_about(&self.center);
        if required > self.radius {
            return Err(Error::BallTooSmall { radius: self.radius, required });
        }
        Ok(())
    }

    /// The line with the given draw index.
    pub fn sample(&self, index: u64) -> Line {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        let mut u = || (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        match self.dim {
            Dim::Two => {
                let theta = PI * u();
                let dir = Vector::new2(theta.cos(), theta.sin());
                let offset = self.radius * (2.0 * u() - 1.0);
                let normal = Vector::new2(-dir.y(), dir.x());
                Line { point: self.center + normal * offset, direction: canonical(dir) }
            }
            Dim::Three => {
                let z = 2.0 * u() - 1.0;
                let phi = TAU * u();
                let s = (1.0 - z * z).max(0.0).sqrt();
                let dir = canonical(Vector::new3(s * phi.cos(), s * phi.sin(), z));
                let (e1, e2) = orthonormal_basis(&dir);
                let r = self.radius * u().sqrt();
                let psi = TAU * u();
                Line {
                    point: self.center + e1 * (r * psi.cos()) + e2 * (r * psi.sin()),
                    direction: dir,
                }
            }
        }
    }
}
