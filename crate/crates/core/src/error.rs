use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything the library can reject. All variants describe a violated
/// precondition or malformed input; none of them indicate a bug.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid space spec: {0}")]
    InvalidSpec(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path} at row {row}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        column: usize,
        message: String,
    },

    #[error("metric axiom violated ({kind}) at points {ids:?}")]
    MetricAxiom { kind: &'static str, ids: Vec<usize> },

    #[error("points outside window radius {window_radius}: {offenders:?}")]
    WindowViolation {
        window_radius: f64,
        offenders: Vec<usize>,
    },

    #[error("unknown point id {0}")]
    UnknownPoint(usize),

    #[error("radius {radius} is outside [0, {limit}]")]
    RadiusOutOfRange { radius: f64, limit: f64 },

    #[error("chain constant K must be positive, got {0}")]
    InvalidK(f64),

    #[error("point {0} is not in the subset")]
    NotInSubset(usize),

    #[error("{0}")]
    InvalidGrid(String),

    #[error("sequences live in different samples")]
    MismatchedSamples,

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid subsequence witness: {0}")]
    InvalidWitness(String),

    #[error("chain entries {index} and {next} are not related by subsequence", next = .index + 1)]
    NoSubsequenceRelation { index: usize },

    #[error("invalid stitch {index}: {reason}")]
    InvalidStitch { index: usize, reason: String },

    #[error("ray subdivision exceeded depth {depth} on [{from}, {to}]; is the ray continuous?")]
    SubdivisionDepth { depth: u32, from: f64, to: f64 },

    #[error("ray point at parameter {param} is {distance} from the nearest sample point (resolution {resolution})")]
    RayOutsideSample {
        param: f64,
        distance: f64,
        resolution: f64,
    },

    #[error("operation needs point coordinates, but the sample uses an explicit distance matrix")]
    NeedsCoordinates,

    #[error("sequence is not coarse: {0}")]
    NotCoarse(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("basepoint {id} is too far from the window center: {reason}")]
    BasepointTooFar { id: usize, reason: String },
}
