//! Convexity through boundary interaction energy.
//!
//! For a bounded domain `Ω ⊂ R^n` with `C^1` boundary,
//!
//! ```text
//! ∫∫_{∂Ω×∂Ω} |<n(x), y-x> <y-x, n(y)>| / |x-y|^(n+1) dσ(x) dσ(y) >= c_n |∂Ω|
//! ```
//!
//! with equality exactly when `Ω` is convex. This crate evaluates the left
//! side on discretized boundaries ([`energy`]), checks the underlying line
//! statistics by Monte Carlo sampling of the kinematic measure
//! ([`crofton`]), and drives nonconvex polygons toward convexity by descending
//! the normalized gap ([`flow`]).

pub mod crofton;
pub mod energy;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod sum;
pub mod vector;

pub use crofton::{
    convexity_test, cross_validate_energy, direction_density_test, estimate, ConvexityReport, CroftonEstimate,
    CrossValidation, DensityTest, LineSampler, Verdict,
};
pub use energy::{
    c_constant, defect, kernel, pointwise_boundary, pointwise_boundary_all, pointwise_interior, total_energy,
    EnergyReport,
};
pub use error::{Error, Result};
pub use flow::{convexify, FlowParams, FlowTrace, GradientMode};
pub use geometry::{
    discretize, make_shape, make_sphere_mesh, BoundaryElement, DiscreteBoundary, PolygonBoundary, Shape, ShapeKind,
    TriangleMeshBoundary,
};
pub use vector::{Dim, Vector};
