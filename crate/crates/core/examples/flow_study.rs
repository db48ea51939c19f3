//! Reference run of the convexifying flow on the nonconvex generators with
//! default parameters. Prints every 100th record and writes the full traces
//! as CSV next to the working directory (`flow_<shape>.csv`).

use convexity_core::flow::{convexify, FlowParams};
use convexity_core::geometry::{make_shape, polygon_is_convex, ShapeKind};

fn main() {
    let params = FlowParams::default();
    for (kind, n) in [(ShapeKind::STAR, 100), (ShapeKind::KIDNEY, 128)] {
        let p = make_shape(&kind, n).unwrap();
        let t = convexify(&p, &params).unwrap();
        println!("{} N={n}: halving events {}", kind.name(), t.halving_events);
        for r in t.iterations.iter().filter(|r| r.iteration % 100 == 0) {
            println!("  {:5} defect {:.6e} perimeter {:.6} move {:.3e}", r.iteration, r.defect, r.perimeter, r.max_displacement);
        }
        let last = t.iterations.last().unwrap();
        println!(
            "  final {} defect {:.6e} converged {} convex {}",
            last.iteration,
            last.defect,
            t.converged,
            polygon_is_convex(&t.final_shape)
        );
        std::fs::write(format!("flow_{}.csv", kind.name()), t.to_csv()).unwrap();
    }
}
