//! Prints the convexity defect of the generator suite across resolutions.
//!
//! `cargo run --release -p convexity-core --example refinement_study`

use convexity_core::energy::relative_mesh_size;
use convexity_core::geometry::{polygon_hull, resample};
use convexity_core::{make_shape, make_sphere_mesh, total_energy, PolygonBoundary, Shape, ShapeKind};

fn row(name: &str, poly: PolygonBoundary) {
    let n = poly.len();
    let b = Shape::Polygon(poly).discretize();
    let r = total_energy(&b).expect("energy");
    println!(
        "{name:<14} N={n:<5} h={:.3e} defect={:+.6e} tol={:.3e}",
        relative_mesh_size(&b),
        r.defect,
        r.tolerance
    );
}

fn main() {
    let star_hull = polygon_hull(&make_shape(&ShapeKind::STAR, 10).unwrap()).unwrap();
    for n in [64, 100, 128, 200, 256, 400, 512, 800, 1024, 1600, 2048, 3200] {
        row("circle", make_shape(&ShapeKind::UNIT_CIRCLE, n).unwrap());
        row("ellipse(2,1)", make_shape(&ShapeKind::Ellipse { a: 2.0, b: 1.0 }, n).unwrap());
        row("square", make_shape(&ShapeKind::Square { side: 1.0 }, n).unwrap());
        row("hull(star)", resample(&star_hull, n).unwrap());
        row("star", make_shape(&ShapeKind::STAR, n).unwrap());
        row("kidney", make_shape(&ShapeKind::KIDNEY, n).unwrap());
    }
    for s in 0..=5 {
        let m = make_sphere_mesh(s).unwrap();
        let area = m.area();
        let b = Shape::Mesh(m).discretize();
        let r = total_energy(&b).unwrap();
        println!(
            "icosphere s={s} M={:<6} E={:.6} pi*A={:.6} rel={:+.3e} defect={:+.3e}",
            b.len(),
            r.energy,
            std::f64::consts::PI * area,
            r.energy / (std::f64::consts::PI * area) - 1.0,
            r.defect
        );
    }
}
