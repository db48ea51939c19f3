//! Descent of the convexity defect over polygon vertex positions.
//!
//! The objective is the exact defect of the polygon as a curve,
//! [`exact_defect`]. It is scale invariant and vanishes exactly on convex
//! polygons, so descending it pushes a polygon toward convexity without
//! shrinking it. The centroid quadrature is not used here: its O(h) error is
//! itself minimized by slightly concave polygons. Only planar polygons are
//! supported.
//!
//! Each iteration moves vertex `i` by `-τ g_i / ℓ_i`, where `g_i` is the
//! defect gradient and `ℓ_i` the mean length of the two incident edges, so
//! the step does not depend on the local vertex density. The step is halved
//! (up to 20 times) while it would make the polygon self-intersect or raise
//! the defect.

use std::fmt::Write as _;

use serde::Serialize;

use crate::energy::polygon::{exact_defect, exact_defect_gradient, exact_defect_of};
use crate::error::{Error, Result};
use crate::geometry::PolygonBoundary;
use crate::vector::Vector;

pub const MAX_HALVINGS: usize = 20;
/// Fraction of the offset to the neighbors' midpoint removed by one
/// tangential redistribution pass.
pub const REDISTRIBUTION_RATE: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMode {
    FiniteDifference,
    Analytic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlowParams {
    pub step_size: f64,
    pub max_iterations: usize,
    pub gradient_mode: GradientMode,
    /// Finite-difference step relative to the polygon's extent.
    pub fd_epsilon: f64,
    pub tangential_redistribution: bool,
    pub stop_defect: f64,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams {
            step_size: 1e-2,
            max_iterations: 2000,
            gradient_mode: GradientMode::Analytic,
            fd_epsilon: 1e-6,
            tangential_redistribution: true,
            stop_defect: 1e-13,
        }
    }
}

impl FlowParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(Error::BadParams(format!("step size {}", self.step_size)));
        }
        if !(self.fd_epsilon > 0.0 && self.fd_epsilon.is_finite()) {
            return Err(Error::BadParams(format!("fd epsilon {}", self.fd_epsilon)));
        }
        if self.max_iterations < 1 {
            return Err(Error::BadParams("at least one iteration".into()));
        }
        if !(self.stop_defect > 0.0) {
            return Err(Error::BadParams(format!("stop defect {}", self.stop_defect)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlowRecord {
    pub iteration: usize,
    pub defect: f64,
    pub perimeter: f64,
    /// Largest vertex move since the previous record.
    pub max_displacement: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowTrace {
    pub iterations: Vec<FlowRecord>,
    pub final_shape: PolygonBoundary,
    pub converged: bool,
    /// Iterations whose step had to be halved at least once.
    pub halving_events: usize,
}

impl FlowTrace {
    pub fn final_defect(&self) -> f64 {
        self.iterations.last().map(|r| r.defect).unwrap_or(f64::NAN)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("iteration,defect,perimeter,max_displacement\n");
        for r in &self.iterations {
            let _ = writeln!(s, "{},{:?},{:?},{:?}", r.iteration, r.defect, r.perimeter, r.max_displacement);
        }
        s
    }
}

/// Gradient of the exact defect with respect to each vertex.
pub fn defect_gradient(p: &PolygonBoundary, mode: GradientMode, fd_epsilon: f64) -> Result<Vec<Vector>> {
    let g = match mode {
        GradientMode::Analytic => exact_defect_gradient(p)?.1,
        GradientMode::FiniteDifference => fd_gradient(p, fd_epsilon)?,
    };
    if let Some(i) = g.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteGradient(i));
    }
    Ok(g)
}

/// Central differences with step `fd_epsilon · extent`. Perturbed polygons
/// are evaluated without re-validation.
fn fd_gradient(p: &PolygonBoundary, fd_epsilon: f64) -> Result<Vec<Vector>> {
    let h = fd_epsilon * p.extent();
    let base = p.vertices();
    (0..base.len())
        .map(|i| {
            let mut g = [0.0; 2];
            for (k, gk) in g.iter_mut().enumerate() {
                let mut plus = base.to_vec();
                plus[i].0[k] += h;
                let mut minus = base.to_vec();
                minus[i].0[k] -= h;
                *gk = (exact_defect_of(&plus)? - exact_defect_of(&minus)?) / (2.0 * h);
            }
            Ok(Vector::new2(g[0], g[1]))
        })
        .collect()
}

fn redistribute(vs: &[Vector]) -> Vec<Vector> {
    let n = vs.len();
    (0..n)
        .map(|i| {
            let (a, b) = (vs[(i + n - 1) % n], vs[(i + 1) % n]);
            let chord = b - a;
            let len = chord.norm();
            if len == 0.0 {
                return vs[i];
            }
            let t = chord * (1.0 / len);
            let shift = ((a + b) * 0.5 - vs[i]).dot(&t);
            vs[i] + t * (REDISTRIBUTION_RATE * shift)
        })
        .collect()
}

fn max_displacement(a: &[Vector], b: &[Vector]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.distance(y)).fold(0.0, f64::max)
}

/// Runs the descent until the defect drops below `stop_defect`, no step can
/// lower it any more, or the iteration budget is spent.
pub fn convexify(shape: &PolygonBoundary, params: &FlowParams) -> Result<FlowTrace> {
    params.validate()?;
    let mut current = shape.clone();
    let mut d = exact_defect(&current)?;
    let mut records =
        vec![FlowRecord { iteration: 0, defect: d, perimeter: current.perimeter(), max_displacement: 0.0 }];
    let mut halving_events = 0;
    let mut iteration = 0;
    while d >= params.stop_defect && iteration < params.max_iterations {
        iteration += 1;
        let g = defect_gradient(&current, params.gradient_mode, params.fd_epsilon)?;
        let vs = current.vertices();
        let n = vs.len();
        let lumped: Vec<f64> = (0..n)
            .map(|i| 0.5 * (vs[i].distance(&vs[(i + 1) % n]) + vs[i].distance(&vs[(i + n - 1) % n])))
            .collect();
        let mut tau = params.step_size;
        let mut accepted = None;
        let mut last_err = None;
        for halving in 0..=MAX_HALVINGS {
            let moved: Vec<Vector> = (0..n).map(|i| vs[i] - g[i] * (tau / lumped[i])).collect();
            match PolygonBoundary::new(moved) {
                Ok(p) => {
                    let dp = exact_defect(&p)?;
                    if dp <= d {
                        if halving > 0 {
                            halving_events += 1;
                        }
                        accepted = Some((p, dp));
                        break;
                    }
                    last_err = None;
                }
                Err(e) => last_err = Some(e),
            }
            tau *= 0.5;
        }
        let Some((mut next, mut dn)) = accepted else {
            if last_err.is_some() {
                return Err(Error::SelfIntersectionUnrecoverable(iteration));
            }
            // no step lowers the defect: stationary at this resolution
            break;
        };
        if params.tangential_redistribution {
            if let Ok(p) = PolygonBoundary::new(redistribute(next.vertices())) {
                let dr = exact_defect(&p)?;
                if dr <= d {
                    next = p;
                    dn = dr;
                }
            }
        }
        records.push(FlowRecord {
            iteration,
            defect: dn,
            perimeter: next.perimeter(),
            max_displacement: max_displacement(current.vertices(), next.vertices()),
        });
        current = next;
        d = dn;
    }
    Ok(FlowTrace { iterations: records, final_shape: current, converged: d < params.stop_defect, halving_events })
}
