use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::geometry::Shape;
use crate::vector::{Dim, Vector};

use super::count::crosses_element;
use super::line::LineSampler;

pub const DENSITY_BINS: usize = 16;
pub const MIN_DENSITY_HITS: usize = 1000;

/// Goodness of fit of the incidence angles of lines hitting one element.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityTest {
    pub element_index: usize,
    pub samples: u64,
    pub hits: usize,
    /// Angle range `[lo, hi]` covered by the equal-width bins.
    pub range: [f64; 2],
    pub observed: Vec<u64>,
    /// Cosine-law bin probabilities.
    pub expected: Vec<f64>,
    pub degrees_of_freedom: usize,
    pub chi_square: f64,
    pub p_value: f64,
    /// The same counts tested against the law of uniformly random
    /// directions, which a correct sampler should reject.
    pub uniform_chi_square: f64,
    pub uniform_p_value: f64,
}

/// Incidence angle between a line direction and a unit normal: the signed
/// angle in `[-π/2, π/2]` in the plane, the polar angle in `[0, π/2]` in
/// space.
pub fn incidence_angle(direction: &Vector, normal: &Vector, dim: Dim) -> f64 {
    let c = direction.dot(normal);
    let phi = if c < 0.0 { -*direction } else { *direction };
    match dim {
        Dim::Two => {
            let t = normal.rot_cw();
            phi.dot(&t).atan2(phi.dot(normal))
        }
        Dim::Three => phi.dot(normal).clamp(-1.0, 1.0).acos(),
    }
}

fn bin_edges(dim: Dim) -> Vec<f64> {
    let (lo, hi) = match dim {
        Dim::Two => (-FRAC_PI_2, FRAC_PI_2),
        Dim::Three => (0.0, FRAC_PI_2),
    };
    (0..=DENSITY_BINS).map(|k| lo + (hi - lo) * k as f64 / DENSITY_BINS as f64).collect()
}

/// Closed-form bin masses. Cosine law: `∫ cos θ / 2` on `[-π/2, π/2]`, or
/// `∫ 2 cos θ sin θ` on `[0, π/2]`. Uniform directions: `1/π` flat, or
/// `∫ sin θ`.
fn bin_masses(dim: Dim, cosine: bool) -> Vec<f64> {
    let e = bin_edges(dim);
    e.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            match (dim, cosine) {
                (Dim::Two, true) => 0.5 * (b.sin() - a.sin()),
                (Dim::Two, false) => (b - a) / PI,
                (Dim::Three, true) => b.sin().powi(2) - a.sin().powi(2),
                (Dim::Three, false) => a.cos() - b.cos(),
            }
        })
        .collect()
}

fn chi_square(observed: &[u64], probs: &[f64]) -> f64 {
    let n: u64 = observed.iter().sum();
    observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let e = p * n as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum()
}

/// Samples lines from a ball around the element, keeps those crossing it,
/// and compares the histogram of incidence angles with the cosine law.
pub fn direction_density_test(shape: &Shape, element_index: usize, samples: u64, seed: u64) -> Result<DensityTest> {
    let count = shape.element_count();
    if element_index >= count {
        return Err(Error::IndexOutOfRange { index: element_index, len: count });
    }
    let dim = shape.dim();
    let el = shape.discretize().elements()[element_index];
    let verts: Vec<Vector> = match shape {
        Shape::Polygon(p) => {
            let (a, b) = p.edge(element_index);
            vec![a, b]
        }
        Shape::Mesh(m) => m.triangle(element_index).to_vec(),
    };
    let radius = verts.iter().map(|v| v.distance(&el.centroid)).fold(0.0, f64::max);
    let sampler = LineSampler::new(dim, el.centroid, radius, seed)?;
    let edges = bin_edges(dim);
    let (lo, hi) = (edges[0], edges[DENSITY_BINS]);
    let width = (hi - lo) / DENSITY_BINS as f64;
    let mut observed = vec![0u64; DENSITY_BINS];
    let mut hits = 0usize;
    for i in 0..samples {
        let line = sampler.sample(i);
        if !crosses_element(&line, shape, element_index) {
            continue;
        }
        hits += 1;
        let theta = incidence_angle(&line.direction(), &el.normal, dim);
        let k = (((theta - lo) / width) as usize).min(DENSITY_BINS - 1);
        observed[k] += 1;
    }
    if hits < MIN_DENSITY_HITS {
        return Err(Error::TooFewHits { hits, required: MIN_DENSITY_HITS });
    }
    let expected = bin_masses(dim, true);
    let dof = DENSITY_BINS - 1;
    let chi = ChiSquared::new(dof as f64).map_err(|e| Error::BadParams(e.to_string()))?;
    let stat = chi_square(&observed, &expected);
    let ustat = chi_square(&observed, &bin_masses(dim, false));
    Ok(DensityTest {
        element_index,
        samples,
        hits,
        range: [lo, hi],
        observed,
        expected,
        degrees_of_freedom: dof,
        chi_square: stat,
        p_value: chi.sf(stat),
        uniform_chi_square: ustat,
        uniform_p_value: chi.sf(ustat),
    })
}
