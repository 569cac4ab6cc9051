use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised while building groups, schemes and coupling plans.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("group order {order} exceeds the configured limit {limit}")]
    SizeLimit { order: usize, limit: usize },
    #[error("malformed Cayley table: {0}")]
    MalformedTable(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("eigenvalue collision persisted after reseeding (seeds tried: {seeds:?})")]
    DegeneracyFailure { seeds: Vec<u64> },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("class {0} is not a singleton class")]
    NoSingletonClass(usize),
    #[error("no perfect-state-transfer target: {0}")]
    NoPstTarget(String),
    #[error("synthesized couplings are not real (max imaginary part {max_imag:e})")]
    GaugeInconsistency { max_imag: f64 },
    #[error("no feasible plan in the gauge search box |l_i| <= {bound}")]
    SearchExhausted { bound: i64 },
    #[error("incompatible plans: {0}")]
    IncompatiblePlans(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = core::result::Result<T, Error>;
