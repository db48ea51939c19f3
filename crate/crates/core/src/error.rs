use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// [`Error::kind`] gives a stable snake_case tag used by the command-line
/// front end for machine-parsable diagnostics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edge {0} is degenerate (consecutive vertices coincide)")]
    DegenerateEdge(usize),
    #[error("boundary self-intersects between edges {0} and {1}")]
    SelfIntersecting(usize, usize),
    #[error("mesh is not watertight: {0}")]
    NotWatertight(String),
    #[error("mesh encloses zero volume")]
    ZeroVolume,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("dimension {0} is not supported here")]
    BadDimension(usize),
    #[error("points coincide (distance {0:e})")]
    CoincidentPoints(f64),
    #[error("index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("point is within {distance:e} of the boundary (need > {required:e})")]
    PointTooCloseToBoundary { distance: f64, required: f64 },
    #[error("point lies outside the domain")]
    PointOutside,
    #[error("discrete boundary has no source shape attached")]
    MissingSource,
    #[error("sampling ball of radius {radius} does not enclose the boundary (needs {required})")]
    BallTooSmall { radius: f64, required: f64 },
    #[error("only {hits} lines hit the element (need {required})")]
    TooFewHits { hits: usize, required: usize },
    #[error("step still self-intersects after {0} halvings")]
    SelfIntersectionUnrecoverable(usize),
    #[error("gradient is not finite at vertex {0}")]
    NonFiniteGradient(usize),
    #[error("{0}-dimensional input is not supported by this operation")]
    DimensionUnsupported(usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::TooFewVertices(_) => "too_few_vertices",
            Error::DegenerateEdge(_) => "degenerate_edge",
            Error::SelfIntersecting(..) => "self_intersecting",
            Error::NotWatertight(_) => "not_watertight",
            Error::ZeroVolume => "zero_volume",
            Error::BadParams(_) => "bad_params",
            Error::BadDimension(_) => "bad_dimension",
            Error::CoincidentPoints(_) => "coincident_points",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::PointTooCloseToBoundary { .. } => "point_too_close_to_boundary",
            Error::PointOutside => "point_outside",
            Error::MissingSource => "missing_source",
            Error::BallTooSmall { .. } => "ball_too_small",
            Error::TooFewHits { .. } => "too_few_hits",
            Error::SelfIntersectionUnrecoverable(_) => "self_intersection_unrecoverable",
            Error::NonFiniteGradient(_) => "non_finite_gradient",
            Error::DimensionUnsupported(_) => "dimension_unsupported",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }

    /// True for failures of a numerical procedure on otherwise valid input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::TooFewHits { .. }
                | Error::SelfIntersectionUnrecoverable(_)
                | Error::NonFiniteGradient(_)
                | Error::CoincidentPoints(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
