//! Shape file formats.
//!
//! Polygons are JSON objects `{"dim": 2, "vertices": [[x, y], ...]}`,
//! closed implicitly. Meshes use the triangle subset of Wavefront OBJ
//! (`v` and `f` records, 1-based indices). Numbers are written in the
//! shortest form that parses back to the identical `f64`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{PolygonBoundary, Shape, TriangleMeshBoundary};
use crate::vector::Vector;

#[derive(Serialize, Deserialize)]
struct PolygonFile {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

pub fn polygon_from_json(text: &str) -> Result<PolygonBoundary> {
    let file: PolygonFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    if file.dim != 2 {
        return Err(Error::DimensionUnsupported(file.dim));
    }
    let mut vs = Vec::with_capacity(file.vertices.len());
    for (i, v) in file.vertices.iter().enumerate() {
        if v.len() != 2 {
            return Err(Error::Parse { line: 0, msg: format!("vertex {i} has {} coordinates", v.len()) });
        }
        vs.push(Vector::new2(v[0], v[1]));
    }
    PolygonBoundary::new(vs)
}

pub fn polygon_to_json(p: &PolygonBoundary) -> String {
    let file = PolygonFile {
        dim: 2,
        vertices: p.vertices().iter().map(|v| vec![v.x(), v.y()]).collect(),
    };
    let mut s = serde_json::to_string(&file).expect("finite coordinates serialize");
    s.push('\n');
    s
}

pub fn mesh_from_obj(text: &str) -> Result<TriangleMeshBoundary> {
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut parts = content.split_whitespace();
        match parts.next() {
            Some("v") => {
                let coords: Vec<f64> = parts
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::Parse { line, msg: format!("bad vertex: {e}") })?;
                // an optional fourth (w) component is ignored
                if coords.len() < 3 || coords.len() > 4 {
                    return Err(Error::Parse { line, msg: format!("vertex has {} coordinates", coords.len()) });
                }
                vertices.push(Vector::new3(coords[0], coords[1], coords[2]));
            }
            Some("f") => {
                let idx: Vec<&str> = parts.collect();
                if idx.len() != 3 {
                    return Err(Error::Parse {
                        line,
                        msg: format!("only triangles are supported, face has {} vertices", idx.len()),
                    });
                }
                let mut tri = [0usize; 3];
                for (k, tok) in idx.iter().enumerate() {
                    let first = tok.split('/').next().unwrap_or("");
                    let i: usize = first
                        .parse()
                        .map_err(|_| Error::Parse { line, msg: format!("bad face index {tok:?}") })?;
                    if i == 0 {
                        return Err(Error::Parse { line, msg: "face indices are 1-based".into() });
                    }
                    tri[k] = i - 1;
                }
                triangles.push(tri);
            }
            _ => {}
        }
    }
    TriangleMeshBoundary::new(vertices, triangles)
}

pub fn mesh_to_obj(m: &TriangleMeshBoundary) -> String {
    let mut s = String::new();
    for v in m.vertices() {
        let _ = writeln!(s, "v {:?} {:?} {:?}", v.x(), v.y(), v.z());
    }
    for t in m.triangles() {
        let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    s
}

/// Parses either format, deciding by the first non-blank character.
pub fn shape_from_str(text: &str) -> Result<Shape> {
    if text.trim_start().starts_with('{') {
        polygon_from_json(text).map(Shape::Polygon)
    } else {
        mesh_from_obj(text).map(Shape::Mesh)
    }
}

pub fn shape_to_string(shape: &Shape) -> String {
    match shape {
        Shape::Polygon(p) => polygon_to_json(p),
        Shape::Mesh(m) => mesh_to_obj(m),
    }
}

/// Reads a shape file: `.json` as a polygon, `.obj` as a mesh, anything
/// else by content.
pub fn read_shape(path: &std::path::Path) -> Result<Shape> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("json") => polygon_from_json(&text).map(Shape::Polygon),
        Some("obj") => mesh_from_obj(&text).map(Shape::Mesh),
        _ => shape_from_str(&text),
    }
}
