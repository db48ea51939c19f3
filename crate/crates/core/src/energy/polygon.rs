//! Closed-form energy of a polygon.
//!
//! For two straight edges the double integral of the kernel equals the
//! measure of the set of lines meeting both (lines parametrized by angle in
//! `[0, π)` and signed offset). For segments `AB` and `CD` with no common
//! point that measure is
//!
//! ```text
//! 2(|AB| + |CD|) + |AC| + |BD| + |AD| + |BC| - 2 · perimeter(hull{A, B, C, D})
//! ```
//!
//! and for edges `AB`, `BD` sharing `B` it is `|AB| + |BD| - |AD|`. Summing
//! over ordered pairs gives the energy of the polygon as a curve, with no
//! quadrature error: every convex polygon has energy exactly twice its
//! perimeter.

use rayon::prelude::*;

use crate::energy::c_constant;
use crate::error::Result;
use crate::geometry::PolygonBoundary;
use crate::sum::pairwise_sum;
use crate::vector::Vector;

fn unit(v: Vector) -> Vector {
    v * (1.0 / v.norm())
}

fn cycle_length(p: &[Vector; 4], c: &[usize]) -> f64 {
    (0..c.len()).map(|k| p[c[k]].distance(&p[c[(k + 1) % c.len()]])).sum()
}

/// Hull of four points as a cycle of indices. Its perimeter lies between the
/// largest triangle perimeter and the shortest closed tour: the first when a
/// point is inside the triangle of the other three, the second when the
/// points are in convex position. The two agree as the points become
/// collinear, so a misjudged orientation only costs rounding accuracy.
fn hull4(p: &[Vector; 4]) -> ([usize; 4], usize) {
    let orient = |a: usize, b: usize, c: usize| (p[b] - p[a]).perp_dot(&(p[c] - p[a]));
    let omit = |k: usize| [(k + 1) % 4, (k + 2) % 4, (k + 3) % 4];
    let nested = (0..4).any(|k| {
        let [q, r, s] = omit(k);
        let (o1, o2, o3) = (orient(q, r, k), orient(r, s, k), orient(s, q, k));
        (o1 > 0.0 && o2 > 0.0 && o3 > 0.0) || (o1 < 0.0 && o2 < 0.0 && o3 < 0.0)
    });
    if nested {
        let k = (0..4)
            .max_by(|&a, &b| cycle_length(p, &omit(a)).total_cmp(&cycle_length(p, &omit(b))))
            .expect("four triangles");
        let [q, r, s] = omit(k);
        return ([q, r, s, 0], 3);
    }
    let tours = [[0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3]];
    let best = tours
        .iter()
        .min_by(|a, b| cycle_length(p, &a[..]).total_cmp(&cycle_length(p, &b[..])))
        .expect("three tours");
    (*best, 4)
}

/// Measure of the lines meeting both segments `ab` and `cd`, which must be
/// disjoint.
pub fn segment_pair_measure(a: Vector, b: Vector, c: Vector, d: Vector) -> f64 {
    pair(a, b, c, d).0
}

/// Measure of the lines meeting both `ab` and `bd`.
pub fn adjacent_pair_measure(a: Vector, b: Vector, d: Vector) -> f64 {
    a.distance(&b) + b.distance(&d) - a.distance(&d)
}

/// Value and gradient with respect to `a` and `b`. The measure is an integer
/// combination of the six pairwise distances; distances whose coefficient
/// cancels against the hull are never evaluated.
fn pair(a: Vector, b: Vector, c: Vector, d: Vector) -> (f64, Vector, Vector) {
    let pts = [a, b, c, d];
    let mut coef = [[0i32; 4]; 4];
    coef[0][1] = 2;
    coef[2][3] = 2;
    coef[0][2] = 1;
    coef[1][3] = 1;
    coef[0][3] = 1;
    coef[1][2] = 1;
    let (h, len) = hull4(&pts);
    for k in 0..len {
        let (i, j) = (h[k], h[(k + 1) % len]);
        coef[i.min(j)][i.max(j)] -= 2;
    }
    let mut value = 0.0;
    let (mut ga, mut gb) = (Vector::ZERO, Vector::ZERO);
    for i in 0..4 {
        for j in i + 1..4 {
            let w = coef[i][j];
            if w == 0 {
                continue;
            }
            let e = pts[i] - pts[j];
            value += w as f64 * e.norm();
            let u = unit(e) * w as f64;
            match i {
                0 => ga += u,
                1 => gb += u,
                _ => {}
            }
            match j {
                1 => gb -= u,
                _ => {}
            }
        }
    }
    (value, ga, gb)
}

/// Row `i`: `Σ_{j≠i} μ_ij` and its gradient with respect to the endpoints
/// of edge `i`.
fn row(vs: &[Vector], i: usize) -> (f64, Vector, Vector) {
    let n = vs.len();
    let (a, b) = (vs[i], vs[(i + 1) % n]);
    let mut values = Vec::with_capacity(n - 1);
    let (mut ga, mut gb) = (Vector::ZERO, Vector::ZERO);
    for j in 0..n {
        if j == i {
            continue;
        }
        let (c, d) = (vs[j], vs[(j + 1) % n]);
        let (v, da, db) = if j == (i + 1) % n {
            // d is the far end of the next edge; the shared vertex b also
            // belongs to row j, which supplies the other half of its term
            (adjacent_pair_measure(a, b, d), unit(a - b) - unit(a - d), (unit(b - a) + unit(b - d)) * 0.5)
        } else if (j + 1) % n == i {
            // c is the far end of the previous edge, a is shared
            (adjacent_pair_measure(c, a, b), (unit(a - c) + unit(a - b)) * 0.5, unit(b - a) - unit(b - c))
        } else {
            pair(a, b, c, d)
        };
        values.push(v);
        ga += da;
        gb += db;
    }
    (pairwise_sum(&values), ga, gb)
}

/// Exact energy of the polygon as a curve.
pub fn exact_energy(p: &PolygonBoundary) -> f64 {
    let vs = p.vertices();
    let rows: Vec<f64> = (0..vs.len()).into_par_iter().map(|i| row(vs, i).0).collect();
    pairwise_sum(&rows)
}

/// `exact_energy / perimeter - c_2`; zero up to rounding exactly when the
/// polygon is convex.
pub fn exact_defect(p: &PolygonBoundary) -> Result<f64> {
    Ok(exact_energy(p) / p.perimeter() - c_constant(2)?)
}

/// Exact defect and its gradient with respect to every vertex.
pub fn exact_defect_gradient(p: &PolygonBoundary) -> Result<(f64, Vec<Vector>)> {
    exact_defect_gradient_of(p.vertices())
}

/// Same as [`exact_defect_gradient`] on an unvalidated vertex list.
pub(crate) fn exact_defect_gradient_of(vs: &[Vector]) -> Result<(f64, Vec<Vector>)> {
    let n = vs.len();
    let rows: Vec<(f64, Vector, Vector)> = (0..n).into_par_iter().map(|i| row(vs, i)).collect();
    let energy = pairwise_sum(&rows.iter().map(|r| r.0).collect::<Vec<_>>());
    let lengths: Vec<f64> = (0..n).map(|i| vs[i].distance(&vs[(i + 1) % n])).collect();
    let perimeter = pairwise_sum(&lengths);
    let mut ge = vec![Vector::ZERO; n];
    let mut gp = vec![Vector::ZERO; n];
    for i in 0..n {
        let k = (i + 1) % n;
        // μ_ij = μ_ji, so each row's own-endpoint gradient counts twice
        ge[i] += rows[i].1 * 2.0;
        ge[k] += rows[i].2 * 2.0;
        let t = unit(vs[k] - vs[i]);
        gp[k] += t;
        gp[i] -= t;
    }
    let d = energy / perimeter - c_constant(2)?;
    let g = (0..n).map(|i| ge[i] * (1.0 / perimeter) - gp[i] * (energy / (perimeter * perimeter))).collect();
    Ok((d, g))
}

/// Exact defect of an unvalidated vertex list.
pub(crate) fn exact_defect_of(vs: &[Vector]) -> Result<f64> {
    let n = vs.len();
    let rows: Vec<f64> = (0..n).into_par_iter().map(|i| row(vs, i).0).collect();
    let lengths: Vec<f64> = (0..n).map(|i| vs[i].distance(&vs[(i + 1) % n])).collect();
    Ok(pairwise_sum(&rows) / pairwise_sum(&lengths) - c_constant(2)?)
}
