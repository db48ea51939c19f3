//! Parametric test shapes.
//!
//! All planar generators return counterclockwise polygons whose vertices lie
//! on the ideal curve:
//!
//! * circle: `r (cos t, sin t)`, `t = 2πk/N`
//! * ellipse: `(a cos t, b sin t)`, `t = 2πk/N`
//! * star: `points` tips at radius `outer` (first tip at angle π/2) alternating
//!   with notches at radius `inner`; every straight side is split evenly
//! * kidney: limaçon `r(t) = 1 + d cos t` with `1/2 < d < 1`, which is a
//!   smooth simple curve with a concave dimple around `t = π`
//! * square: side `side`, centered at the origin, edges split evenly

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::{mesh::TriangleMeshBoundary, polygon::PolygonBoundary};
use crate::vector::Vector;

pub const MAX_SPHERE_SUBDIVISIONS: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ShapeKind {
    Circle { radius: f64 },
    Ellipse { a: f64, b: f64 },
    Star { outer: f64, inner: f64, points: usize },
    Kidney { dimple: f64 },
    Square { side: f64 },
}

impl ShapeKind {
    pub const UNIT_CIRCLE: ShapeKind = ShapeKind::Circle { radius: 1.0 };
    pub const STAR: ShapeKind = ShapeKind::Star { outer: 1.0, inner: 0.4, points: 5 };
    pub const KIDNEY: ShapeKind = ShapeKind::Kidney { dimple: 0.9 };

    pub fn name(&self) -> &'static str {
        match self {
            ShapeKind::Circle { .. } => "circle",
            ShapeKind::Ellipse { .. } => "ellipse",
            ShapeKind::Star { .. } => "star",
            ShapeKind::Kidney { .. } => "kidney",
            ShapeKind::Square { .. } => "square",
        }
    }

    /// Whether the ideal (continuous) shape is convex.
    pub fn is_convex(&self) -> bool {
        matches!(
            self,
            ShapeKind::Circle { .. } | ShapeKind::Ellipse { .. } | ShapeKind::Square { .. }
        )
    }

    fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BadParams(m));
        match *self {
            ShapeKind::Circle { radius } if !(radius > 0.0 && radius.is_finite()) => {
                bad(format!("circle radius {radius}"))
            }
            ShapeKind::Ellipse { a, b } if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) => {
                bad(format!("ellipse semi-axes {a}, {b}"))
            }
            ShapeKind::Star { outer, inner, points } => {
                if !(inner > 0.0 && inner < outer && outer.is_finite()) {
                    bad(format!("star needs 0 < inner ({inner}) < outer ({outer})"))
                } else if points < 2 {
                    bad(format!("star needs at least 2 points, got {points}"))
                } else {
                    Ok(())
                }
            }
            ShapeKind::Kidney { dimple } if !(dimple > 0.5 && dimple < 1.0) => {
                bad(format!("kidney dimple {dimple} outside (0.5, 1)"))
            }
            ShapeKind::Square { side } if !(side > 0.0 && side.is_finite()) => {
                bad(format!("square side {side}"))
            }
            _ => Ok(()),
        }
    }

    /// Smallest resolution the generator accepts.
    pub fn min_resolution(&self) -> usize {
        match *self {
            ShapeKind::Star { points, .. } => 2 * points,
            ShapeKind::Square { .. } => 4,
            _ => 3,
        }
    }

    /// Point on the ideal curve closest in parameter to `p`, for projecting
    /// refined vertices back onto smooth shapes. `None` for shapes with
    /// straight sides.
    pub fn project(&self, p: Vector) -> Option<Vector> {
        let t = p.y().atan2(p.x());
        match *self {
            ShapeKind::Circle { radius } => Some(p.normalized() * radius),
            ShapeKind::Ellipse { a, b } => {
                let s = (p.y() / b).atan2(p.x() / a);
                Some(Vector::new2(a * s.cos(), b * s.sin()))
            }
            ShapeKind::Kidney { dimple } => {
                let r = 1.0 + dimple * t.cos();
                Some(Vector::new2(r * t.cos(), r * t.sin()))
            }
            _ => None,
        }
    }
}

/// Builds a closed polygon with `resolution` vertices on the given curve.
pub fn make_shape(kind: &ShapeKind, resolution: usize) -> Result<PolygonBoundary> {
    kind.check()?;
    if resolution < kind.min_resolution() {
        return Err(Error::BadParams(format!(
            "{} needs resolution >= {}, got {resolution}",
            kind.name(),
            kind.min_resolution()
        )));
    }
    let n = resolution;
    let angle = |k: usize| TAU * k as f64 / n as f64;
    let vertices: Vec<Vector> = match *kind {
        ShapeKind::Circle { radius } => (0..n)
            .map(|k| Vector::new2(radius * angle(k).cos(), radius * angle(k).sin()))
            .collect(),
        ShapeKind::Ellipse { a, b } => (0..n)
            .map(|k| Vector::new2(a * angle(k).cos(), b * angle(k).sin()))
            .collect(),
        ShapeKind::Kidney { dimple } => (0..n)
            .map(|k| {
                let t = angle(k);
                let r = 1.0 + dimple * t.cos();
                Vector::new2(r * t.cos(), r * t.sin())
            })
            .collect(),
        ShapeKind::Star { outer, inner, points } => {
            let corners: Vec<Vector> = (0..2 * points)
                .map(|k| {
                    let r = if k % 2 == 0 { outer } else { inner };
                    let t = FRAC_PI_2 + PI * k as f64 / points as f64;
                    Vector::new2(r * t.cos(), r * t.sin())
                })
                .collect();
            split_sides(&corners, n)
        }
        ShapeKind::Square { side } => {
            let h = side / 2.0;
            let corners = [
                Vector::new2(-h, -h),
                Vector::new2(h, -h),
                Vector::new2(h, h),
                Vector::new2(-h, h),
            ];
            split_sides(&corners, n)
        }
    };
    PolygonBoundary::new(vertices)
}

/// Distributes `total` edges over the sides of the closed corner loop,
/// `total / sides` each with the remainder going to the first sides.
pub(crate) fn split_sides(corners: &[Vector], total: usize) -> Vec<Vector> {
    let sides = corners.len();
    let base = total / sides;
    let extra = total % sides;
    let mut out = Vec::with_capacity(total);
    for s in 0..sides {
        let a = corners[s];
        let b = corners[(s + 1) % sides];
        let pieces = base + usize::from(s < extra);
        for k in 0..pieces {
            out.push(a + (b - a) * (k as f64 / pieces as f64));
        }
    }
    out
}

/// Resamples a polygon to `total` edges, spreading sub-edges over the
/// original sides in proportion to their lengths (at least one per side).
pub fn resample(poly: &PolygonBoundary, total: usize) -> Result<PolygonBoundary> {
    let n = poly.len();
    if total < n {
        return Err(Error::BadParams(format!("cannot resample {n} sides into {total} edges")));
    }
    let lengths = poly.edge_lengths();
    let perimeter: f64 = lengths.iter().sum();
    // largest-remainder apportionment
    let quotas: Vec<f64> = lengths.iter().map(|l| l / perimeter * total as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| (q.floor() as usize).max(1)).collect();
    let mut assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let ri = quotas[i] - counts[i] as f64;
        let rj = quotas[j] - counts[j] as f64;
        rj.total_cmp(&ri).then(i.cmp(&j))
    });
    let mut k = 0;
    while assigned < total {
        counts[order[k % n]] += 1;
        assigned += 1;
        k += 1;
    }
    while assigned > total {
        let i = (0..n).filter(|&i| counts[i] > 1).max_by(|&i, &j| counts[i].cmp(&counts[j])).unwrap();
        counts[i] -= 1;
        assigned -= 1;
    }
    let mut out = Vec::with_capacity(total);
    for (i, &c) in counts.iter().enumerate() {
        let (a, b) = poly.edge(i);
        for s in 0..c {
            out.push(a + (b - a) * (s as f64 / c as f64));
        }
    }
    PolygonBoundary::new(out)
}

/// Unit icosphere: a regular icosahedron inscribed in the unit sphere,
/// midpoint-subdivided `subdivisions` times with every new vertex projected
/// onto the sphere.
pub fn make_sphere_mesh(subdivisions: usize) -> Result<TriangleMeshBoundary> {
    if subdivisions > MAX_SPHERE_SUBDIVISIONS {
        return Err(Error::BadParams(format!(
            "sphere subdivisions {subdivisions} > {MAX_SPHERE_SUBDIVISIONS}"
        )));
    }
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let vertices: Vec<Vector> = raw.iter().map(|&c| Vector(c).normalized()).collect();
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    let ico = TriangleMeshBoundary::new(vertices, faces)?;
    if subdivisions == 0 {
        return Ok(ico);
    }
    ico.refine_with(1 << subdivisions, |v| v.normalized())
}
