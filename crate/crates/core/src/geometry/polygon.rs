use crate::error::{Error, Result};
use crate::sum::pairwise_sum;
use crate::vector::Vector;

/// Relative tolerance of the incidence predicates used during validation.
const PREDICATE_TOL: f64 = 1e-12;

/// A closed, simple, counterclockwise polygon in the plane.
///
/// The closing edge from the last vertex back to the first is implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonBoundary {
    vertices: Vec<Vector>,
}

impl PolygonBoundary {
    /// Validates `vertices` and builds a polygon.
    ///
    /// A clockwise vertex order is reversed, so the stored polygon always has
    /// positive signed area.
    pub fn new(vertices: Vec<Vector>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::TooFewVertices(vertices.len()));
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(Error::BadParams(format!("vertex {i} is not finite")));
        }
        let mut vertices: Vec<Vector> = vertices
            .into_iter()
            .map(|v| Vector::new2(v.x(), v.y()))
            .collect();
        let scale = bbox_diagonal(&vertices);
        if scale == 0.0 {
            return Err(Error::DegenerateEdge(0));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i].distance(&vertices[(i + 1) % n]) <= PREDICATE_TOL * scale {
                return Err(Error::DegenerateEdge(i));
            }
        }
        if let Some((i, j)) = find_self_intersection(&vertices) {
            return Err(Error::SelfIntersecting(i, j));
        }
        let area = signed_area(&vertices);
        if area < 0.0 {
            vertices.reverse();
        } else if area == 0.0 {
            return Err(Error::BadParams("polygon has zero area".into()));
        }
        Ok(PolygonBoundary { vertices })
    }

    pub fn from_xy(points: &[[f64; 2]]) -> Result<Self> {
        Self::new(points.iter().map(|p| Vector::new2(p[0], p[1])).collect())
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vector> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Endpoints of edge `i`, running from vertex `i` to vertex `i + 1`.
    #[inline]
    pub fn edge(&self, i: usize) -> (Vector, Vector) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                (b - a).norm()
            })
            .collect()
    }

    pub fn perimeter(&self) -> f64 {
        pairwise_sum(&self.edge_lengths())
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Diagonal of the axis-aligned bounding box; the length scale used by
    /// all relative tolerances.
    pub fn extent(&self) -> f64 {
        bbox_diagonal(&self.vertices)
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edge_lengths().into_iter().fold(0.0, f64::max)
    }

    /// Splits every edge into `factor` equal sub-edges.
    ///
    /// The original vertices are kept, so the represented curve and its
    /// length do not change.
    pub fn refine(&self, factor: usize) -> Result<Self> {
        self.refine_with(factor, |v| v)
    }

    /// As [`refine`](Self::refine), then moves every inserted vertex through
    /// `project` (e.g. back onto an analytic curve).
    pub fn refine_with<F: Fn(Vector) -> Vector>(&self, factor: usize, project: F) -> Result<Self> {
        if factor < 2 {
            return Err(Error::BadParams(format!("refinement factor {factor} < 2")));
        }
        let mut out = Vec::with_capacity(self.len() * factor);
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            out.push(a);
            for k in 1..factor {
                let t = k as f64 / factor as f64;
                out.push(project(a + (b - a) * t));
            }
        }
        PolygonBoundary::new(out)
    }

    /// Winding number of the polygon around `p` (1 inside, 0 outside).
    pub fn winding_number(&self, p: &Vector) -> i32 {
        let mut wn = 0;
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            let side = (b - a).perp_dot(&(*p - a));
            if a.y() <= p.y() {
                if b.y() > p.y() && side > 0.0 {
                    wn += 1;
                }
            } else if b.y() <= p.y() && side < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    pub fn contains(&self, p: &Vector) -> bool {
        self.winding_number(p) != 0
    }

    pub fn distance_to_boundary(&self, p: &Vector) -> f64 {
        (0..self.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                point_segment_distance(p, &a, &b)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn centroid_of_vertices(&self) -> Vector {
        let n = self.len() as f64;
        let sx = pairwise_sum(&self.vertices.iter().map(|v| v.x()).collect::<Vec<_>>());
        let sy = pairwise_sum(&self.vertices.iter().map(|v| v.y()).collect::<Vec<_>>());
        Vector::new2(sx / n, sy / n)
    }

    /// Applies `f` to every vertex and re-validates.
    pub fn map_vertices<F: Fn(Vector) -> Vector>(&self, f: F) -> Result<Self> {
        PolygonBoundary::new(self.vertices.iter().map(|&v| f(v)).collect())
    }
}

pub(crate) fn signed_area(vs: &[Vector]) -> f64 {
    let n = vs.len();
    let terms: Vec<f64> = (0..n).map(|i| vs[i].perp_dot(&vs[(i + 1) % n])).collect();
    0.5 * pairwise_sum(&terms)
}

pub(crate) fn bbox_diagonal(vs: &[Vector]) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for v in vs {
        for k in 0..3 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    Vector(hi).distance(&Vector(lo))
}

pub(crate) fn point_segment_distance(p: &Vector, a: &Vector, b: &Vector) -> f64 {
    let ab = *b - *a;
    let t = ((*p - *a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
    p.distance(&(*a + ab * t))
}

fn orient(a: &Vector, b: &Vector, c: &Vector) -> f64 {
    (*b - *a).perp_dot(&(*c - *a))
}

fn on_segment_box(a: &Vector, b: &Vector, p: &Vector, eps: f64) -> bool {
    p.x() >= a.x().min(b.x()) - eps
        && p.x() <= a.x().max(b.x()) + eps
        && p.y() >= a.y().min(b.y()) - eps
        && p.y() <= a.y().max(b.y()) + eps
}

/// Closed-segment intersection test with a tolerance band of width
/// `eps_area` on the orientation predicates.
fn segments_touch(p1: &Vector, p2: &Vector, q1: &Vector, q2: &Vector, eps_len: f64, eps_area: f64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    let s = |d: f64| {
        if d > eps_area {
            1
        } else if d < -eps_area {
            -1
        } else {
            0
        }
    };
    let (s1, s2, s3, s4) = (s(d1), s(d2), s(d3), s(d4));
    if s1 * s2 < 0 && s3 * s4 < 0 {
        return true;
    }
    (s1 == 0 && on_segment_box(q1, q2, p1, eps_len))
        || (s2 == 0 && on_segment_box(q1, q2, p2, eps_len))
        || (s3 == 0 && on_segment_box(p1, p2, q1, eps_len))
        || (s4 == 0 && on_segment_box(p1, p2, q2, eps_len))
}

/// Returns a pair of offending edge indices if the closed polyline through
/// `vs` is not simple. Sort-and-sweep over the edges' x-intervals.
pub(crate) fn find_self_intersection(vs: &[Vector]) -> Option<(usize, usize)> {
    let n = vs.len();
    let scale = bbox_diagonal(vs);
    let eps_len = PREDICATE_TOL * scale;
    let eps_area = PREDICATE_TOL * scale * scale;
    let edge = |i: usize| (vs[i], vs[(i + 1) % n]);

    // Adjacent edges may only share their common vertex: reject fold-backs.
    for i in 0..n {
        let (a, b) = edge(i);
        let c = vs[(i + 2) % n];
        let t1 = b - a;
        let t2 = c - b;
        if t1.perp_dot(&t2).abs() <= eps_area && t1.dot(&t2) < 0.0 {
            return Some((i, (i + 1) % n));
        }
    }
    if n == 3 {
        return None;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let xmin = |i: usize| {
        let (a, b) = edge(i);
        a.x().min(b.x())
    };
    order.sort_by(|&i, &j| xmin(i).total_cmp(&xmin(j)).then(i.cmp(&j)));
    for (k, &i) in order.iter().enumerate() {
        let (a, b) = edge(i);
        let xmax = a.x().max(b.x()) + eps_len;
        for &j in &order[k + 1..] {
            if xmin(j) > xmax {
                break;
            }
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if adjacent {
                continue;
            }
            let (c, d) = edge(j);
            if segments_touch(&a, &b, &c, &d, eps_len, eps_area) {
                return Some((i.min(j), i.max(j)));
            }
        }
    }
    None
}
