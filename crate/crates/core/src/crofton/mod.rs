//! Monte Carlo sampling of the kinematic measure on lines.
//!
//! Lines meeting a ball are drawn with a uniformly random direction and a
//! uniformly random offset in the perpendicular disk. Crossing counts
//! against a boundary then estimate its measure (Crofton's formula), the
//! second moment behind the energy, and the zero-or-two crossing property
//! of convex domains.
//!
//! The sampled set carries the measure `|S^{n-1}|/2 · ω_{n-1} R^{n-1}`
//! ([`LineSampler::measure`]). The Crofton constant α is not hardcoded: it
//! is recovered by [`calibrate_alpha`] from a sphere of known area.

mod count;
mod density;
mod estimate;
mod line;

pub use count::{count_intersections, crosses_element, LineCounter, PREDICATE_TOL};
pub use density::{direction_density_test, incidence_angle, DensityTest, DENSITY_BINS, MIN_DENSITY_HITS};
pub use estimate::{
    calibrate_alpha, calibration_shape, classify_excess, convexity_test, count_histogram, cross_validate_energy,
    estimate, estimate_with, Calibration, ConvexityReport, CroftonEstimate, CrossValidation, Verdict, ARTIFACT_RATE,
    CALIBRATION_POLYGON_RESOLUTION, CALIBRATION_SAMPLES, CALIBRATION_SEED, CALIBRATION_SPHERE_SUBDIVISIONS,
    DEFAULT_SIGNIFICANCE, FIVE_SIGMA, MIN_CONVEXITY_SAMPLES, MIN_ESTIMATE_SAMPLES,
};
pub use line::{Line, LineSampler, DEFAULT_RADIUS_MARGIN};
