//! Fixtures shared by the benchmarks.

use convexity_core::{make_shape, make_sphere_mesh, DiscreteBoundary, Shape, ShapeKind};

pub fn circle(n: usize) -> Shape {
    Shape::Polygon(make_shape(&ShapeKind::UNIT_CIRCLE, n).expect("valid circle"))
}

pub fn star(n: usize) -> Shape {
    Shape::Polygon(make_shape(&ShapeKind::STAR, n).expect("valid star"))
}

pub fn sphere(subdivisions: usize) -> Shape {
    Shape::Mesh(make_sphere_mesh(subdivisions).expect("valid icosphere"))
}

pub fn boundary(shape: &Shape) -> DiscreteBoundary {
    shape.discretize()
}
