//! Boundary interaction energy and the convexity defect.
//!
//! For a boundary `∂Ω ⊂ R^n` the energy is
//!
//! ```text
//! E = ∫∫ |<n(x), y-x> <y-x, n(y)>| / |x-y|^(n+1) dσ(x) dσ(y)
//! ```
//!
//! and `E >= c_n |∂Ω|` with equality exactly for convex domains, where
//! `c_n` is the volume of the unit `(n-1)`-ball. The discrete energy uses
//! one centroid sample per element pair. Diagonal pairs vanish identically
//! for flat elements and are skipped; nothing is added to compensate.
//! Polygons additionally have a closed form without quadrature error, see
//! [`polygon`].

pub mod polygon;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryElement, DiscreteBoundary};
use crate::sum::pairwise_sum;
use crate::vector::{Dim, Vector};

/// Slope of the convexity threshold in the relative mesh size `h`, see
/// [`defect_tolerance`].
pub const DEFECT_TOLERANCE_SLOPE: f64 = 1.0;
/// Floor of the convexity threshold.
pub const DEFECT_TOLERANCE_FLOOR: f64 = 1e-3;

#[inline]
fn kernel_denominator(r2: f64, dim: Dim) -> f64 {
    match dim {
        Dim::Two => r2 * r2.sqrt(),
        Dim::Three => r2 * r2,
    }
}

#[inline]
fn kernel_raw(x: &Vector, nx: &Vector, y: &Vector, ny: &Vector, dim: Dim) -> (f64, f64) {
    let d = *y - *x;
    let r2 = d.norm_squared();
    let a = nx.dot(&d);
    let b = ny.dot(&d);
    ((a * b).abs() / kernel_denominator(r2, dim), r2)
}

/// `|<nx, y-x> <y-x, ny>| / |x-y|^(n+1)`.
///
/// Symmetric under `(x, nx) <-> (y, ny)` bit for bit.
pub fn kernel(x: &Vector, nx: &Vector, y: &Vector, ny: &Vector, dim: Dim) -> Result<f64> {
    let dist = x.distance(y);
    let scale = x.norm().max(y.norm());
    if dist == 0.0 || dist <= 1e-14 * scale {
        return Err(Error::CoincidentPoints(dist));
    }
    Ok(kernel_raw(x, nx, y, ny, dim).0)
}

/// Volume of the unit `k`-ball.
pub fn unit_ball_volume(k: usize) -> f64 {
    let (mut v, start) = if k % 2 == 0 { (1.0, 2) } else { (2.0, 3) };
    let mut j = start;
    while j <= k {
        v *= 2.0 * std::f64::consts::PI / j as f64;
        j += 2;
    }
    v
}

/// `c_n = (1/2) ∫_{S^{n-1}} |w_1| dσ(w)`, which equals the volume of the
/// unit `(n-1)`-ball: 2 for `n = 2`, π for `n = 3`.
pub fn c_constant(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::BadDimension(n));
    }
    Ok(unit_ball_volume(n - 1))
}

/// Surface area of the unit sphere `S^{n-1}`.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    pub energy: f64,
    pub boundary_measure: f64,
    pub c_n: f64,
    /// `energy / boundary_measure - c_n`.
    pub defect: f64,
    pub dimension: usize,
    pub element_count: usize,
    /// Discretization tolerance for the defect at this resolution.
    pub tolerance: f64,
}

fn row_sums(elements: &[BoundaryElement], dim: Dim) -> Result<Vec<f64>> {
    elements
        .par_iter()
        .enumerate()
        .map_init(Vec::new, |buf: &mut Vec<f64>, (i, ei)| {
            buf.clear();
            for (j, ej) in elements.iter().enumerate() {
                if i == j {
                    continue;
                }
                let (k, r2) = kernel_raw(&ei.centroid, &ei.normal, &ej.centroid, &ej.normal, dim);
                if r2 == 0.0 {
                    return Err(Error::CoincidentPoints(0.0));
                }
                buf.push(k * ej.measure);
            }
            Ok(pairwise_sum(buf))
        })
        .collect()
}

/// `Σ_{j≠i} K(c_i, n_i, c_j, n_j) m_j` for every element `i`.
///
/// Each entry approximates `∫ K(x_i, ·) dσ`, which equals `c_n` at every
/// boundary point of a convex domain.
pub fn pointwise_boundary_all(boundary: &DiscreteBoundary) -> Result<Vec<f64>> {
    row_sums(boundary.elements(), boundary.dim())
}

pub fn pointwise_boundary(boundary: &DiscreteBoundary, element_index: usize) -> Result<f64> {
    let els = boundary.elements();
    let ei = els.get(element_index).ok_or(Error::IndexOutOfRange {
        index: element_index,
        len: els.len(),
    })?;
    let mut terms = Vec::with_capacity(els.len());
    for (j, ej) in els.iter().enumerate() {
        if j == element_index {
            continue;
        }
        let (k, r2) = kernel_raw(&ei.centroid, &ei.normal, &ej.centroid, &ej.normal, boundary.dim());
        if r2 == 0.0 {
            return Err(Error::CoincidentPoints(0.0));
        }
        terms.push(k * ej.measure);
    }
    Ok(pairwise_sum(&terms))
}

/// Relative mesh size: largest element diameter over the shape extent.
pub fn relative_mesh_size(boundary: &DiscreteBoundary) -> f64 {
    match boundary.source() {
        Some(shape) => shape.max_element_diameter() / shape.extent(),
        None => {
            // without vertices, estimate element size from the measures
            let els = boundary.elements();
            let size = |e: &BoundaryElement| match boundary.dim() {
                Dim::Two => e.measure,
                Dim::Three => (4.0 * e.measure / 3f64.sqrt()).sqrt(),
            };
            let hmax = els.iter().map(size).fold(0.0, f64::max);
            let c = els.iter().map(|e| e.centroid).collect::<Vec<_>>();
            let extent = crate::geometry::polygon::bbox_diagonal(&c);
            hmax / extent
        }
    }
}

/// `max(DEFECT_TOLERANCE_FLOOR, DEFECT_TOLERANCE_SLOPE * h)` with `h` the
/// relative mesh size. Corners of convex polygons leave an O(h) quadrature
/// error in the defect; the slope bounds it on the convex generator suite.
pub fn defect_tolerance(boundary: &DiscreteBoundary) -> f64 {
    DEFECT_TOLERANCE_FLOOR.max(DEFECT_TOLERANCE_SLOPE * relative_mesh_size(boundary))
}

/// Total interaction energy by centroid quadrature over ordered pairs.
///
/// Row sums run in parallel; every reduction has a fixed combination tree,
/// so the result does not depend on the number of threads.
pub fn total_energy(boundary: &DiscreteBoundary) -> Result<EnergyReport> {
    if boundary.len() < 2 {
        return Err(Error::BadParams(format!(
            "energy needs at least 2 elements, got {}",
            boundary.len()
        )));
    }
    let rows = pointwise_boundary_all(boundary)?;
    Ok(report_from_rows(boundary, &rows))
}

/// Assembles the report from precomputed [`pointwise_boundary_all`] rows.
pub fn report_from_rows(boundary: &DiscreteBoundary, rows: &[f64]) -> EnergyReport {
    let weighted: Vec<f64> = boundary
        .elements()
        .iter()
        .zip(rows)
        .map(|(e, r)| e.measure * r)
        .collect();
    let energy = pairwise_sum(&weighted);
    let measure = boundary.total_measure();
    let n = boundary.dim().get();
    let c_n = unit_ball_volume(n - 1);
    EnergyReport {
        energy,
        boundary_measure: measure,
        c_n,
        defect: energy / measure - c_n,
        dimension: n,
        element_count: boundary.len(),
        tolerance: defect_tolerance(boundary),
    }
}

/// `E / |∂Ω| - c_n`: zero in the refinement limit exactly for convex
/// domains, positive otherwise.
pub fn defect(boundary: &DiscreteBoundary) -> Result<f64> {
    total_energy(boundary).map(|r| r.defect)
}

/// `Σ_j |<w, c_j - x> <c_j - x, n_j>| / |c_j - x|^(n+1) m_j` for an interior
/// point `x` and unit direction `w`; tends to `2 c_n` for convex domains.
pub fn pointwise_interior(boundary: &DiscreteBoundary, x: &Vector, w: &Vector) -> Result<f64> {
    let dim = boundary.dim();
    if dim == Dim::Two && (x.z() != 0.0 || w.z() != 0.0) {
        return Err(Error::BadParams("planar boundary needs planar point and direction".into()));
    }
    if (w.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::BadParams(format!("direction has norm {}", w.norm())));
    }
    let shape = boundary.source().ok_or(Error::MissingSource)?;
    if !shape.contains(x) {
        return Err(Error::PointOutside);
    }
    let distance = shape.distance_to_boundary(x);
    let required = 2.0 * shape.max_element_diameter();
    if distance <= required {
        return Err(Error::PointTooCloseToBoundary { distance, required });
    }
    let terms: Vec<f64> = boundary
        .elements()
        .iter()
        .map(|e| kernel_raw(x, w, &e.centroid, &e.normal, dim).0 * e.measure)
        .collect();
    Ok(pairwise_sum(&terms))
}
