//! Direct geometric convexity checks, independent of any energy or line
//! statistics.

use rayon::prelude::*;

use crate::error::Result;
use crate::geometry::{mesh::TriangleMeshBoundary, polygon::PolygonBoundary};
use crate::vector::Vector;

/// Relative slack of the convexity predicates.
pub const CONVEXITY_TOL: f64 = 1e-9;

/// Every turn of the (simple, counterclockwise) polygon is a left turn,
/// up to `CONVEXITY_TOL * extent^2`.
pub fn polygon_is_convex(p: &PolygonBoundary) -> bool {
    let scale = p.extent();
    let tol = CONVEXITY_TOL * scale * scale;
    let n = p.len();
    let vs = p.vertices();
    (0..n).all(|i| {
        let a = vs[i];
        let b = vs[(i + 1) % n];
        let c = vs[(i + 2) % n];
        (b - a).perp_dot(&(c - b)) >= -tol
    })
}

/// No vertex lies more than `CONVEXITY_TOL * extent` outside the supporting
/// plane of any face, i.e. the mesh bounds its own convex hull.
pub fn mesh_is_convex(m: &TriangleMeshBoundary) -> bool {
    let tol = CONVEXITY_TOL * m.extent();
    let vs = m.vertices();
    (0..m.len()).into_par_iter().all(|t| {
        let [a, b, c] = m.triangle(t);
        let n = (b - a).cross(&(c - a)).normalized();
        vs.iter().all(|v| n.dot(&(*v - a)) <= tol)
    })
}

/// Convex hull of planar points (Andrew's monotone chain), counterclockwise,
/// with collinear points dropped.
pub fn convex_hull_2d(points: &[Vector]) -> Vec<Vector> {
    let mut pts: Vec<Vector> = points.to_vec();
    pts.sort_by(|a, b| a.x().total_cmp(&b.x()).then(a.y().total_cmp(&b.y())));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &Vector, a: &Vector, b: &Vector| (*a - *o).perp_dot(&(*b - *o));
    let mut hull: Vec<Vector> = Vec::with_capacity(2 * pts.len());
    for p in pts.iter() {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    hull
}

pub fn polygon_hull(p: &PolygonBoundary) -> Result<PolygonBoundary> {
    PolygonBoundary::new(convex_hull_2d(p.vertices()))
}
