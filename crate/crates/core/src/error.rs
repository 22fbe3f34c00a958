use thiserror::Error;

use crate::parrondo::ConstraintViolation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coin amplitudes have squared norm {norm_sqr}, too far from 1 to renormalize")]
    NotNormalized { norm_sqr: f64 },

    #[error("{what} = {value} is outside {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("unknown coin state name `{0}` (expected one of 0, 1, h, v, d, a, f)")]
    UnknownState(String),

    #[error("cannot parse {what} from `{input}`: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("steps {index} and {next} are not daisy-chained: coin of step {index} differs from shift state of step {next}")]
    ChainingViolation { index: usize, next: usize },

    #[error("a walk needs at least one step")]
    EmptyWalk,

    #[error("spectral observable vectors {i} and {j} overlap by {overlap:.3e}")]
    NonOrthogonalSpectral { i: usize, j: usize, overlap: f64 },

    #[error("mixture weights must be non-negative and sum to 1 (got {0})")]
    BadWeights(f64),

    #[error("step-size constraints violated: {}", list_violations(.0))]
    Constraints(Vec<ConstraintViolation>),

    #[error("the daisy-chain construction needs an even number of steps (m >= 2), got m = {0}")]
    OddStepCount(usize),

    #[error("design for m = {m} steps needs {expected} intermediate coin states, got {got}")]
    IntermediateCount {
        m: usize,
        expected: usize,
        got: usize,
    },

    #[error("region grid must be at least 2x2, got {0}x{1}")]
    GridTooSmall(usize, usize),

    #[error("cycle range is empty")]
    EmptyRange,
}

fn list_violations(v: &[ConstraintViolation]) -> String {
    v.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
