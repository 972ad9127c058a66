use thiserror::Error;

use crate::registers::SlotId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("slot {0} appears more than once")]
    DuplicateSlot(SlotId),
    #[error("unknown slot {0}")]
    UnknownSlot(SlotId),
    #[error("no slot belongs to site {0:?}")]
    UnknownSite(String),
    #[error("slot {0} has unsupported local dimension {1} (expected 2 or 3)")]
    BadDimension(SlotId, usize),
    #[error("cycle index overflow while shifting site {0:?}")]
    CycleOverflow(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("matrix is not hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    TraceNotOne(f64),
    #[error("eigenvalue {0:e} is below the positivity tolerance")]
    NegativeEigenvalue(f64),
    #[error("malformed permutation {0:?}")]
    BadPermutation(Vec<usize>),
    #[error("gate {gate} expects {expected} targets, got {found}")]
    ArityMismatch {
        gate: String,
        expected: usize,
        found: usize,
    },
    #[error("gate {0} is not unitary")]
    NotUnitary(String),
    #[error("cycle misalignment: gate targets span cycles {0:?}")]
    CycleMisalignment(Vec<i64>),
    #[error("target slots must be distinct")]
    RepeatedTarget,
    #[error("outcome {0} has zero probability")]
    ZeroProbability(String),
    #[error("no slot lives at cycle {0}")]
    EmptyCycle(i64),
    #[error("state spans several cycles {0:?}; expected a single-cycle state")]
    NotSingleCycle(Vec<i64>),
    #[error("cycle list must be non-empty and strictly increasing: {0:?}")]
    BadCycleList(Vec<i64>),
    #[error("ensemble is empty")]
    EmptyEnsemble,
    #[error("ensemble probabilities sum to {0}, expected 1")]
    BadProbabilities(f64),
    #[error("ensemble branches live on different registers")]
    MixedRegisters,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
