//! Line/boundary crossing counts.
//!
//! Predicates are evaluated on vertices, not on elements, so that adjacent
//! elements see identical signs for a shared vertex or edge. In the plane a
//! vertex lies on the nonnegative side of the line when its signed offset,
//! snapped to zero within `1e-12 · extent`, is `>= 0`, and an edge crosses
//! iff its endpoints sit on different sides. In space the triangle is
//! projected along the line and each directed edge gets an exactly
//! antisymmetric edge function; exact zeros are resolved by a symbolic
//! shift of the line, so a shared edge or vertex belongs to exactly one of
//! the triangles the line passes between.

use crate::geometry::Shape;
use crate::vector::{orthonormal_basis, Vector};

use super::line::Line;

/// Relative tolerance of the crossing predicates.
pub const PREDICATE_TOL: f64 = 1e-12;

const LEAF_SIZE: usize = 4;

/// Brute-force crossing count over every element.
pub fn count_intersections(line: &Line, shape: &Shape) -> usize {
    let q = Query::new(line, shape.extent());
    (0..shape.element_count()).filter(|&i| q.crosses(shape, i)).count()
}

/// Whether the line crosses element `i` of the shape.
pub fn crosses_element(line: &Line, shape: &Shape, i: usize) -> bool {
    Query::new(line, shape.extent()).crosses(shape, i)
}

struct Query {
    p: Vector,
    u: Vector,
    e1: Vector,
    e2: Vector,
    tol: f64,
    tol_area: f64,
}

impl Query {
    fn new(line: &Line, scale: f64) -> Self {
        let u = line.direction();
        let (e1, e2) = orthonormal_basis(&u);
        let tol = PREDICATE_TOL * scale;
        Query { p: line.point(), u, e1, e2, tol, tol_area: PREDICATE_TOL * scale * scale }
    }

    fn side(&self, v: &Vector) -> bool {
        let s = self.u.perp_dot(&(*v - self.p));
        s.abs() <= self.tol || s >= 0.0
    }

    fn project(&self, v: &Vector) -> [f64; 2] {
        let d = *v - self.p;
        [self.e1.dot(&d), self.e2.dot(&d)]
    }

    fn edge_sign(&self, a: &[f64; 2], b: &[f64; 2]) -> bool {
        let f = a[0] * b[1] - a[1] * b[0];
        if f.abs() > self.tol_area {
            return f > 0.0;
        }
        // tie: evaluate at the line shifted by (δ, δ²) in the projection
        // plane, which flips with the edge direction and stays consistent
        // around a shared vertex
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        dy < 0.0 || (dy == 0.0 && dx > 0.0)
    }

    fn crosses(&self, shape: &Shape, i: usize) -> bool {
        match shape {
            Shape::Polygon(p) => {
                let (a, b) = p.edge(i);
                self.side(&a) != self.side(&b)
            }
            Shape::Mesh(m) => {
                let [a, b, c] = m.triangle(i);
                let (pa, pb, pc) = (self.project(&a), self.project(&b), self.project(&c));
                let s0 = self.edge_sign(&pa, &pb);
                let s1 = self.edge_sign(&pb, &pc);
                let s2 = self.edge_sign(&pc, &pa);
                s0 == s1 && s1 == s2
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Aabb {
    lo: Vector,
    hi: Vector,
}

impl Aabb {
    fn empty() -> Self {
        Aabb { lo: Vector([f64::INFINITY; 3]), hi: Vector([f64::NEG_INFINITY; 3]) }
    }

    fn grow(&mut self, v: &Vector) {
        for k in 0..3 {
            self.lo.0[k] = self.lo.0[k].min(v[k]);
            self.hi.0[k] = self.hi.0[k].max(v[k]);
        }
    }

    fn merge(&mut self, o: &Aabb) {
        self.grow(&o.lo);
        self.grow(&o.hi);
    }

    fn pad(&mut self, r: f64) {
        for k in 0..3 {
            self.lo.0[k] -= r;
            self.hi.0[k] += r;
        }
    }

    fn hit(&self, p: &Vector, u: &Vector) -> bool {
        let mut t0 = f64::NEG_INFINITY;
        let mut t1 = f64::INFINITY;
        for k in 0..3 {
            if u[k] == 0.0 {
                if p[k] < self.lo[k] || p[k] > self.hi[k] {
                    return false;
                }
                continue;
            }
            let inv = 1.0 / u[k];
            let (a, b) = ((self.lo[k] - p[k]) * inv, (self.hi[k] - p[k]) * inv);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
        t0 <= t1
    }
}

#[derive(Clone, Debug)]
enum Node {
    Leaf { bounds: Aabb, start: usize, end: usize },
    Inner { bounds: Aabb, left: usize, right: usize },
}

impl Node {
    fn bounds(&self) -> &Aabb {
        match self {
            Node::Leaf { bounds, .. } | Node::Inner { bounds, .. } => bounds,
        }
    }
}

/// Crossing counter backed by a bounding volume hierarchy over the elements.
/// Returns exactly what [`count_intersections`] returns.
#[derive(Clone, Debug)]
pub struct LineCounter<'a> {
    shape: &'a Shape,
    order: Vec<usize>,
    nodes: Vec<Node>,
    scale: f64,
}

impl<'a> LineCounter<'a> {
    pub fn new(shape: &'a Shape) -> Self {
        let scale = shape.extent();
        let pad = 1e-7 * scale;
        let count = shape.element_count();
        let boxes: Vec<Aabb> = (0..count)
            .map(|i| {
                let mut b = Aabb::empty();
                match shape {
                    Shape::Polygon(p) => {
                        let (a, c) = p.edge(i);
                        b.grow(&a);
                        b.grow(&c);
                    }
                    Shape::Mesh(m) => m.triangle(i).iter().for_each(|v| b.grow(v)),
                }
                b.pad(pad);
                b
            })
            .collect();
        let centers: Vec<Vector> = boxes.iter().map(|b| (b.lo + b.hi) * 0.5).collect();
        let mut order: Vec<usize> = (0..count).collect();
        let mut nodes = Vec::with_capacity(2 * count / LEAF_SIZE + 1);
        build(&mut nodes, &mut order, 0, count, &boxes, &centers);
        LineCounter { shape, order, nodes, scale }
    }

    pub fn shape(&self) -> &Shape {
        self.shape
    }

    pub fn count(&self, line: &Line) -> usize {
        let q = Query::new(line, self.scale);
        let mut n = 0;
        let mut stack = vec![0usize];
        while let Some(k) = stack.pop() {
            let node = &self.nodes[k];
            if !node.bounds().hit(&q.p, &q.u) {
                continue;
            }
            match node {
                Node::Leaf { start, end, .. } => {
                    n += self.order[*start..*end].iter().filter(|&&i| q.crosses(self.shape, i)).count();
                }
                Node::Inner { left, right, .. } => {
                    stack.push(*right);
                    stack.push(*left);
                }
            }
        }
        n
    }
}

fn build(nodes: &mut Vec<Node>, order: &mut [usize], start: usize, end: usize, boxes: &[Aabb], centers: &[Vector]) -> usize {
    let mut bounds = Aabb::empty();
    let mut cb = Aabb::empty();
    for &i in &order[start..end] {
        bounds.merge(&boxes[i]);
        cb.grow(&centers[i]);
    }
    let id = nodes.len();
    if end - start <= LEAF_SIZE {
        nodes.push(Node::Leaf { bounds, start, end });
        return id;
    }
    let span = cb.hi - cb.lo;
    let axis = (0..3).max_by(|&a, &b| span[a].total_cmp(&span[b])).unwrap_or(0);
    let mid = (start + end) / 2;
    order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
        centers[a][axis].total_cmp(&centers[b][axis]).then(a.cmp(&b))
    });
    nodes.push(Node::Leaf { bounds, start, end });
    let left = build(nodes, order, start, mid, boxes, centers);
    let right = build(nodes, order, mid, end, boxes, centers);
    nodes[id] = Node::Inner { bounds, left, right };
    id
}
