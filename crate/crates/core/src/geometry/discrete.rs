use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Shape;
use crate::sum::pairwise_sum;
use crate::vector::{Dim, Vector};

const UNIT_TOL: f64 = 1e-12;

/// One flat boundary patch: an edge in 2D, a triangle in 3D.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryElement {
    pub centroid: Vector,
    /// Outward unit normal.
    pub normal: Vector,
    /// Length (2D) or area (3D).
    pub measure: f64,
}

/// A boundary split into flat elements, each carrying its centroid, outward
/// unit normal and measure.
#[derive(Clone, Debug)]
pub struct DiscreteBoundary {
    dim: Dim,
    elements: Vec<BoundaryElement>,
    source: Option<Shape>,
}

impl DiscreteBoundary {
    /// Assembles a boundary from raw elements with no originating shape.
    pub fn from_elements(dim: Dim, elements: Vec<BoundaryElement>) -> Result<Self> {
        for (i, e) in elements.iter().enumerate() {
            if !(e.measure > 0.0 && e.measure.is_finite()) {
                return Err(Error::BadParams(format!("element {i} has measure {}", e.measure)));
            }
            if (e.normal.norm() - 1.0).abs() > UNIT_TOL {
                return Err(Error::BadParams(format!("element {i} normal is not unit")));
            }
            if dim == Dim::Two && (e.centroid.z() != 0.0 || e.normal.z() != 0.0) {
                return Err(Error::BadParams(format!("element {i} leaves the plane")));
            }
        }
        Ok(DiscreteBoundary { dim, elements, source: None })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn elements(&self) -> &[BoundaryElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn source(&self) -> Option<&Shape> {
        self.source.as_ref()
    }

    pub fn total_measure(&self) -> f64 {
        pairwise_sum(&self.elements.iter().map(|e| e.measure).collect::<Vec<_>>())
    }
}

/// One element per edge (midpoint, outward normal, length) or per triangle
/// (centroid, outward normal, area).
pub fn discretize(shape: &Shape) -> DiscreteBoundary {
    let elements = match shape {
        Shape::Polygon(p) => (0..p.len())
            .map(|i| {
                let (a, b) = p.edge(i);
                let t = b - a;
                let m = t.norm();
                BoundaryElement { centroid: (a + b) * 0.5, normal: t.rot_cw() * (1.0 / m), measure: m }
            })
            .collect(),
        Shape::Mesh(m) => (0..m.len())
            .map(|i| {
                let [a, b, c] = m.triangle(i);
                let cr = (b - a).cross(&(c - a));
                let len = cr.norm();
                BoundaryElement {
                    centroid: (a + b + c) * (1.0 / 3.0),
                    normal: cr * (1.0 / len),
                    measure: 0.5 * len,
                }
            })
            .collect(),
    };
    DiscreteBoundary { dim: shape.dim(), elements, source: Some(shape.clone()) }
}
