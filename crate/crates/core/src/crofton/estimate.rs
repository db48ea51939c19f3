use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{Binomial, DiscreteCDF};

use crate::energy::{c_constant, total_energy};
use crate::error::{Error, Result};
use crate::geometry::{make_shape, make_sphere_mesh, Shape, ShapeKind};
use crate::vector::{Dim, Vector};

use super::count::LineCounter;
use super::line::LineSampler;

pub const MIN_ESTIMATE_SAMPLES: u64 = 1000;
pub const MIN_CONVEXITY_SAMPLES: u64 = 10_000;

/// Lines drawn when [`estimate`] calibrates on its own.
pub const CALIBRATION_SAMPLES: u64 = 1_000_000;
pub const CALIBRATION_SEED: u64 = 0x5eed_ca1b;
/// Resolution of the calibration circle and subdivision level of the
/// calibration icosphere.
pub const CALIBRATION_POLYGON_RESOLUTION: usize = 4096;
pub const CALIBRATION_SPHERE_SUBDIVISIONS: usize = 5;

/// Rate at which tangencies and predicate tolerance may produce lines with
/// three or more crossings on a convex boundary.
pub const ARTIFACT_RATE: f64 = 1e-4;
pub const DEFAULT_SIGNIFICANCE: f64 = 1e-3;
/// One-sided tail probability of a five standard deviation event.
pub const FIVE_SIGMA: f64 = 2.866_515_718_791_939e-7;

const CHUNK: u64 = 4096;

/// Histogram of crossing counts over draws `0..samples`. Integer sums make
/// the result independent of how the draws are scheduled.
pub fn count_histogram(sampler: &LineSampler, counter: &LineCounter<'_>, samples: u64) -> Vec<u64> {
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut h = Vec::new();
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let n = counter.count(&sampler.sample(i));
                if n >= h.len() {
                    h.resize(n + 1, 0u64);
                }
                h[n] += 1;
            }
            h
        })
        .reduce(Vec::new, merge_histograms)
}

fn merge_histograms(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    if b.len() > a.len() {
        a.resize(b.len(), 0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Calibrated Crofton constant with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Calibration {
    pub alpha: f64,
    pub std_error: f64,
}

/// Monte Carlo moments of the crossing count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CroftonEstimate {
    pub samples: u64,
    pub seed: u64,
    pub radius: f64,
    /// Total measure of the sampled line set.
    pub sampled_measure: f64,
    pub mean_n: f64,
    pub mean_n2: f64,
    pub mean_n_n_minus_1: f64,
    pub std_error_n: f64,
    pub std_error_n2: f64,
    pub std_error_n_n_minus_1: f64,
    /// `histogram[k]` lines crossed the boundary exactly `k` times.
    pub histogram: Vec<u64>,
    pub alpha_calibration: f64,
    pub alpha_std_error: f64,
    pub area_estimate: f64,
    pub area_std_error: f64,
}

impl CroftonEstimate {
    pub fn from_histogram(sampler: &LineSampler, histogram: Vec<u64>, cal: Calibration) -> Self {
        let samples: u64 = histogram.iter().sum();
        let s = samples as f64;
        let moment = |f: &dyn Fn(f64) -> f64| -> (f64, f64) {
            let mean = histogram.iter().enumerate().map(|(k, &c)| c as f64 * f(k as f64)).sum::<f64>() / s;
            let second = histogram.iter().enumerate().map(|(k, &c)| c as f64 * f(k as f64).powi(2)).sum::<f64>() / s;
            let var = (second - mean * mean).max(0.0) * s / (s - 1.0).max(1.0);
            (mean, (var / s).sqrt())
        };
        let (mean_n, se_n) = moment(&|k| k);
        let (mean_n2, se_n2) = moment(&|k| k * k);
        let (mean_nn1, se_nn1) = moment(&|k| k * (k - 1.0));
        let m = sampler.measure();
        let area = cal.alpha * mean_n * m;
        let area_se = area * ((se_n / mean_n).powi(2) + (cal.std_error / cal.alpha).powi(2)).sqrt();
        CroftonEstimate {
            samples,
            seed: sampler.seed(),
            radius: sampler.radius(),
            sampled_measure: m,
            mean_n,
            mean_n2,
            mean_n_n_minus_1: mean_nn1,
            std_error_n: se_n,
            std_error_n2: se_n2,
            std_error_n_n_minus_1: se_nn1,
            histogram,
            alpha_calibration: cal.alpha,
            alpha_std_error: cal.std_error,
            area_estimate: area,
            area_std_error: if area_se.is_finite() { area_se } else { f64::INFINITY },
        }
    }

    pub fn fraction(&self, pred: impl Fn(usize) -> bool) -> f64 {
        let hits: u64 = self.histogram.iter().enumerate().filter(|(k, _)| pred(*k)).map(|(_, c)| c).sum();
        hits as f64 / self.samples as f64
    }

    /// Lines with at least three crossings.
    pub fn excess_count(&self) -> u64 {
        self.histogram.iter().skip(3).sum()
    }
}

/// Monte Carlo moments, calibrated against the default calibration run for
/// this dimension and radius.
pub fn estimate(sampler: &LineSampler, shape: &Shape, samples: u64) -> Result<CroftonEstimate> {
    let cal = calibrate_alpha(sampler.dim(), sampler.radius(), CALIBRATION_SAMPLES, CALIBRATION_SEED)?;
    estimate_with(sampler, shape, samples, cal)
}

pub fn estimate_with(sampler: &LineSampler, shape: &Shape, samples: u64, cal: Calibration) -> Result<CroftonEstimate> {
    if samples < MIN_ESTIMATE_SAMPLES {
        return Err(Error::BadParams(format!("need at least {MIN_ESTIMATE_SAMPLES} lines, got {samples}")));
    }
    sampler.check_encloses(shape)?;
    let counter = LineCounter::new(shape);
    Ok(CroftonEstimate::from_histogram(sampler, count_histogram(sampler, &counter, samples), cal))
}

/// The shape whose known boundary measure fixes α: a circle (4096 vertices)
/// or icosphere (subdivision 5) of radius `radius / 2`.
pub fn calibration_shape(dim: Dim, radius: f64) -> Result<Shape> {
    let r = 0.5 * radius;
    Ok(match dim {
        Dim::Two => make_shape(&ShapeKind::Circle { radius: r }, CALIBRATION_POLYGON_RESOLUTION)?.into(),
        Dim::Three => make_sphere_mesh(CALIBRATION_SPHERE_SUBDIVISIONS)?.map_vertices(|v| v * r)?.into(),
    })
}

type CacheKey = (usize, u64, u64, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, Calibration>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Calibration>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Solves `α · mean_n · measure = |∂S|` on the calibration shape, sampled
/// with a concentric ball of the given radius. Results are cached per
/// dimension, radius, sample count and seed.
pub fn calibrate_alpha(dim: Dim, radius: f64, samples: u64, seed: u64) -> Result<Calibration> {
    let key = (dim.get(), radius.to_bits(), samples, seed);
    if let Some(c) = cache().lock().map_err(|_| Error::BadParams("calibration cache poisoned".into()))?.get(&key) {
        return Ok(*c);
    }
    if samples < MIN_ESTIMATE_SAMPLES {
        return Err(Error::BadParams(format!("need at least {MIN_ESTIMATE_SAMPLES} lines, got {samples}")));
    }
    let shape = calibration_shape(dim, radius)?;
    let sampler = LineSampler::new(dim, Vector::ZERO, radius, seed)?;
    let counter = LineCounter::new(&shape);
    let raw = CroftonEstimate::from_histogram(
        &sampler,
        count_histogram(&sampler, &counter, samples),
        Calibration { alpha: 1.0, std_error: 0.0 },
    );
    let alpha = shape.measure() / raw.area_estimate;
    let cal = Calibration { alpha, std_error: alpha * raw.std_error_n / raw.mean_n };
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::TooFewHits { hits: 0, required: 1 });
    }
    if let Ok(mut c) = cache().lock() {
        c.insert(key, cal);
    }
    Ok(cal)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Convex,
    Nonconvex,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Convex => "convex",
            Verdict::Nonconvex => "nonconvex",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub verdict: Verdict,
    pub samples: u64,
    /// Lines crossing the boundary three or more times.
    pub excess_lines: u64,
    pub artifact_rate: f64,
    /// `P(K >= excess_lines)` under the artifact-rate binomial.
    pub p_nonconvex: f64,
    /// `P(K <= excess_lines)` under the artifact-rate binomial.
    pub p_convex: f64,
    pub significance: f64,
}

/// Decides between the artifact-rate null and its two one-sided alternatives.
pub fn classify_excess(excess: u64, samples: u64, significance: f64) -> Result<ConvexityReport> {
    if !(significance > 0.0 && significance < 1.0) {
        return Err(Error::BadParams(format!("significance {significance} outside (0, 1)")));
    }
    let null = Binomial::new(ARTIFACT_RATE, samples).map_err(|e| Error::BadParams(e.to_string()))?;
    let p_nonconvex = if excess == 0 { 1.0 } else { null.sf(excess - 1) };
    let p_convex = null.cdf(excess);
    let verdict = if p_nonconvex < significance {
        Verdict::Nonconvex
    } else if p_convex < significance {
        Verdict::Convex
    } else {
        Verdict::Inconclusive
    };
    Ok(ConvexityReport {
        verdict,
        samples,
        excess_lines: excess,
        artifact_rate: ARTIFACT_RATE,
        p_nonconvex,
        p_convex,
        significance,
    })
}

/// Counts lines with three or more crossings and tests them against the
/// artifact rate.
pub fn convexity_test(sampler: &LineSampler, shape: &Shape, samples: u64, significance: f64) -> Result<ConvexityReport> {
    if samples < MIN_CONVEXITY_SAMPLES {
        return Err(Error::BadParams(format!("need at least {MIN_CONVEXITY_SAMPLES} lines, got {samples}")));
    }
    sampler.check_encloses(shape)?;
    let counter = LineCounter::new(shape);
    let h = count_histogram(sampler, &counter, samples);
    classify_excess(h.iter().skip(3).sum(), samples, significance)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossValidation {
    pub mc_energy_estimate: f64,
    pub mc_std_error: f64,
    pub quadrature_energy: f64,
    pub relative_gap: f64,
    /// Gap measured in standard errors of the line-sampling side.
    pub gap_in_std_errors: f64,
    pub estimate: CroftonEstimate,
}

/// Compares `c_n · α · ∫ n(n-1) dμ` from line sampling with the pair-sum
/// quadrature of the energy on the same boundary.
pub fn cross_validate_energy(sampler: &LineSampler, shape: &Shape, samples: u64) -> Result<CrossValidation> {
    let est = estimate(sampler, shape, samples)?;
    let quadrature = total_energy(&shape.discretize())?.energy;
    let c = c_constant(shape.dim().get())?;
    let mc = c * est.alpha_calibration * est.mean_n_n_minus_1 * est.sampled_measure;
    let rel_se = ((est.std_error_n_n_minus_1 / est.mean_n_n_minus_1).powi(2)
        + (est.alpha_std_error / est.alpha_calibration).powi(2))
    .sqrt();
    let se = mc * rel_se;
    Ok(CrossValidation {
        mc_energy_estimate: mc,
        mc_std_error: se,
        quadrature_energy: quadrature,
        relative_gap: (mc - quadrature).abs() / quadrature,
        gap_in_std_errors: (mc - quadrature).abs() / se,
        estimate: est,
    })
}
