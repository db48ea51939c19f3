use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::polygon::bbox_diagonal;
use crate::sum::pairwise_sum;
use crate::vector::Vector;

/// A closed, watertight, outward-oriented triangle mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleMeshBoundary {
    vertices: Vec<Vector>,
    triangles: Vec<[usize; 3]>,
}

impl TriangleMeshBoundary {
    /// Validates the mesh. Consistently inward-oriented meshes are flipped.
    pub fn new(vertices: Vec<Vector>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.len() < 4 {
            return Err(Error::NotWatertight(format!("only {} triangles", triangles.len())));
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(Error::BadParams(format!("vertex {i} is not finite")));
        }
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(&bad) = tri.iter().find(|&&i| i >= vertices.len()) {
                return Err(Error::IndexOutOfRange { index: bad, len: vertices.len() });
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::BadParams(format!("triangle {t} repeats a vertex")));
            }
            let [a, b, c] = tri.map(|i| vertices[i]);
            if (b - a).cross(&(c - a)).norm() == 0.0 {
                return Err(Error::BadParams(format!("triangle {t} has zero area")));
            }
        }
        check_watertight(&triangles)?;
        let mut mesh = TriangleMeshBoundary { vertices, triangles };
        let vol = mesh.volume();
        if vol < 0.0 {
            for t in &mut mesh.triangles {
                t.swap(1, 2);
            }
        } else if vol == 0.0 {
            return Err(Error::ZeroVolume);
        }
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, i: usize) -> [Vector; 3] {
        self.triangles[i].map(|k| self.vertices[k])
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn triangle_area(&self, i: usize) -> f64 {
        let [a, b, c] = self.triangle(i);
        0.5 * (b - a).cross(&(c - a)).norm()
    }

    pub fn area(&self) -> f64 {
        let areas: Vec<f64> = (0..self.len()).map(|i| self.triangle_area(i)).collect();
        pairwise_sum(&areas)
    }

    /// Enclosed volume via the divergence theorem.
    pub fn volume(&self) -> f64 {
        let terms: Vec<f64> = (0..self.len())
            .map(|i| {
                let [a, b, c] = self.triangle(i);
                a.dot(&b.cross(&c)) / 6.0
            })
            .collect();
        pairwise_sum(&terms)
    }

    pub fn extent(&self) -> f64 {
        bbox_diagonal(&self.vertices)
    }

    pub fn triangle_diameter(&self, i: usize) -> f64 {
        let [a, b, c] = self.triangle(i);
        a.distance(&b).max(b.distance(&c)).max(c.distance(&a))
    }

    pub fn max_triangle_diameter(&self) -> f64 {
        (0..self.len()).map(|i| self.triangle_diameter(i)).fold(0.0, f64::max)
    }

    /// Four-way midpoint subdivision, repeated log2(`factor`) times so that
    /// every edge ends up split into `factor` pieces.
    pub fn refine(&self, factor: usize) -> Result<Self> {
        self.refine_with(factor, |v| v)
    }

    /// As [`refine`](Self::refine), projecting each inserted midpoint
    /// through `project` (e.g. onto the unit sphere).
    pub fn refine_with<F: Fn(Vector) -> Vector>(&self, factor: usize, project: F) -> Result<Self> {
        if factor < 2 || !factor.is_power_of_two() {
            return Err(Error::BadParams(format!(
                "mesh refinement factor must be a power of two >= 2, got {factor}"
            )));
        }
        let mut vertices = self.vertices.clone();
        let mut triangles = self.triangles.clone();
        for _ in 0..factor.trailing_zeros() {
            (vertices, triangles) = subdivide(&vertices, &triangles, &project);
        }
        TriangleMeshBoundary::new(vertices, triangles)
    }

    /// Generalized winding number: total signed solid angle / 4π.
    pub fn winding_number(&self, p: &Vector) -> f64 {
        let angles: Vec<f64> = self
            .triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|k| self.vertices[k] - *p);
                let (la, lb, lc) = (a.norm(), b.norm(), c.norm());
                let num = a.dot(&b.cross(&c));
                let den = la * lb * lc + a.dot(&b) * lc + b.dot(&c) * la + c.dot(&a) * lb;
                2.0 * num.atan2(den)
            })
            .collect();
        pairwise_sum(&angles) / (4.0 * std::f64::consts::PI)
    }

    pub fn contains(&self, p: &Vector) -> bool {
        self.winding_number(p) > 0.5
    }

    pub fn distance_to_boundary(&self, p: &Vector) -> f64 {
        (0..self.len())
            .map(|i| {
                let [a, b, c] = self.triangle(i);
                point_triangle_distance(p, &a, &b, &c)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn map_vertices<F: Fn(Vector) -> Vector>(&self, f: F) -> Result<Self> {
        TriangleMeshBoundary::new(self.vertices.iter().map(|&v| f(v)).collect(), self.triangles.clone())
    }
}

fn check_watertight(triangles: &[[usize; 3]]) -> Result<()> {
    let mut directed: HashMap<(usize, usize), usize> = HashMap::with_capacity(triangles.len() * 3);
    for tri in triangles {
        for k in 0..3 {
            let e = (tri[k], tri[(k + 1) % 3]);
            *directed.entry(e).or_insert(0) += 1;
        }
    }
    for (&(a, b), &count) in &directed {
        if count != 1 {
            return Err(Error::NotWatertight(format!(
                "edge ({a}, {b}) used {count} times in the same direction"
            )));
        }
        if directed.get(&(b, a)) != Some(&1) {
            return Err(Error::NotWatertight(format!("edge ({a}, {b}) has no opposite twin")));
        }
    }
    Ok(())
}

fn subdivide<F: Fn(Vector) -> Vector>(
    vertices: &[Vector],
    triangles: &[[usize; 3]],
    project: &F,
) -> (Vec<Vector>, Vec<[usize; 3]>) {
    let mut verts = vertices.to_vec();
    let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
    let mut midpoint = |i: usize, j: usize, verts: &mut Vec<Vector>| -> usize {
        let key = (i.min(j), i.max(j));
        *cache.entry(key).or_insert_with(|| {
            verts.push(project((verts[i] + verts[j]) * 0.5));
            verts.len() - 1
        })
    };
    let mut out = Vec::with_capacity(triangles.len() * 4);
    for &[a, b, c] in triangles {
        let ab = midpoint(a, b, &mut verts);
        let bc = midpoint(b, c, &mut verts);
        let ca = midpoint(c, a, &mut verts);
        out.push([a, ab, ca]);
        out.push([ab, b, bc]);
        out.push([ca, bc, c]);
        out.push([ab, bc, ca]);
    }
    (verts, out)
}

/// Ericson, Real-Time Collision Detection, 5.1.5.
pub(crate) fn point_triangle_distance(p: &Vector, a: &Vector, b: &Vector, c: &Vector) -> f64 {
    let ab = *b - *a;
    let ac = *c - *a;
    let ap = *p - *a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return p.distance(a);
    }
    let bp = *p - *b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return p.distance(b);
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return p.distance(&(*a + ab * v));
    }
    let cp = *p - *c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return p.distance(c);
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return p.distance(&(*a + ac * w));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return p.distance(&(*b + (*c - *b) * w));
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    p.distance(&(*a + ab * v + ac * w))
}
