//! Discrete boundaries of bounded domains in the plane and in space.

pub mod convex;
pub mod discrete;
pub mod io;
pub mod mesh;
pub mod polygon;
pub mod shapes;

pub use convex::{convex_hull_2d, mesh_is_convex, polygon_hull, polygon_is_convex};
pub use discrete::{discretize, BoundaryElement, DiscreteBoundary};
pub use mesh::TriangleMeshBoundary;
pub use polygon::PolygonBoundary;
pub use shapes::{make_shape, make_sphere_mesh, resample, ShapeKind};

use crate::error::Result;
use crate::vector::{Dim, Vector};

/// A validated closed boundary of either dimension.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Polygon(PolygonBoundary),
    Mesh(TriangleMeshBoundary),
}

impl Shape {
    pub fn dim(&self) -> Dim {
        match self {
            Shape::Polygon(_) => Dim::Two,
            Shape::Mesh(_) => Dim::Three,
        }
    }

    pub fn vertices(&self) -> &[Vector] {
        match self {
            Shape::Polygon(p) => p.vertices(),
            Shape::Mesh(m) => m.vertices(),
        }
    }

    /// Number of boundary elements (edges or triangles).
    pub fn element_count(&self) -> usize {
        match self {
            Shape::Polygon(p) => p.len(),
            Shape::Mesh(m) => m.len(),
        }
    }

    pub fn element_diameter(&self, i: usize) -> f64 {
        match self {
            Shape::Polygon(p) => {
                let (a, b) = p.edge(i);
                a.distance(&b)
            }
            Shape::Mesh(m) => m.triangle_diameter(i),
        }
    }

    pub fn max_element_diameter(&self) -> f64 {
        match self {
            Shape::Polygon(p) => p.max_edge_length(),
            Shape::Mesh(m) => m.max_triangle_diameter(),
        }
    }

    /// Perimeter or surface area.
    pub fn measure(&self) -> f64 {
        match self {
            Shape::Polygon(p) => p.perimeter(),
            Shape::Mesh(m) => m.area(),
        }
    }

    pub fn extent(&self) -> f64 {
        match self {
            Shape::Polygon(p) => p.extent(),
            Shape::Mesh(m) => m.extent(),
        }
    }

    pub fn refine(&self, factor: usize) -> Result<Shape> {
        Ok(match self {
            Shape::Polygon(p) => Shape::Polygon(p.refine(factor)?),
            Shape::Mesh(m) => Shape::Mesh(m.refine(factor)?),
        })
    }

    /// Convexity decided directly from the vertex geometry.
    pub fn is_convex(&self) -> bool {
        match self {
            Shape::Polygon(p) => polygon_is_convex(p),
            Shape::Mesh(m) => mesh_is_convex(m),
        }
    }

    pub fn contains(&self, x: &Vector) -> bool {
        match self {
            Shape::Polygon(p) => p.contains(x),
            Shape::Mesh(m) => m.contains(x),
        }
    }

    pub fn distance_to_boundary(&self, x: &Vector) -> f64 {
        match self {
            Shape::Polygon(p) => p.distance_to_boundary(x),
            Shape::Mesh(m) => m.distance_to_boundary(x),
        }
    }

    pub fn map_vertices<F: Fn(Vector) -> Vector>(&self, f: F) -> Result<Shape> {
        Ok(match self {
            Shape::Polygon(p) => Shape::Polygon(p.map_vertices(f)?),
            Shape::Mesh(m) => Shape::Mesh(m.map_vertices(f)?),
        })
    }

    /// Mean of the vertices.
    pub fn vertex_centroid(&self) -> Vector {
        let vs = self.vertices();
        let mut acc = [0.0; 3];
        for k in 0..3 {
            let coords: Vec<f64> = vs.iter().map(|v| v[k]).collect();
            acc[k] = crate::sum::pairwise_sum(&coords) / vs.len() as f64;
        }
        Vector(acc)
    }

    /// Largest distance from `center` to any vertex.
    pub fn radius_about(&self, center: &Vector) -> f64 {
        self.vertices().iter().map(|v| v.distance(center)).fold(0.0, f64::max)
    }

    pub fn discretize(&self) -> DiscreteBoundary {
        discretize(self)
    }
}

impl From<PolygonBoundary> for Shape {
    fn from(p: PolygonBoundary) -> Self {
        Shape::Polygon(p)
    }
}

impl From<TriangleMeshBoundary> for Shape {
    fn from(m: TriangleMeshBoundary) -> Self {
        Shape::Mesh(m)
    }
}
