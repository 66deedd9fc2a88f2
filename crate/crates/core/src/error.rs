// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: invalid character {ch:?} in input field")]
    InvalidLiteral { line: usize, ch: char },
    #[error("line {line}: invalid character {ch:?} in output field")]
    InvalidOutput { line: usize, ch: char },
    #[error("line {line}: cube has width {found}, expected {expected}")]
    WidthMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("cover has zero inputs")]
    ZeroInputs,
    #[error("duplicate input name {0:?}")]
    DuplicateInput(String),
    #[error("expected a single-output PLA, found {0} outputs")]
    MultiOutput(usize),
    #[error("{n} inputs exceeds the exact-expansion cap of {cap}")]
    Capacity { n: usize, cap: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("exhaustive search over {n} inputs exceeds the limit of {max}")]
    ExhaustiveTooLarge { n: usize, max: usize },
    #[error("candidate list is empty")]
    EmptyCandidates,
    #[error("recursion depth guard of {0} exceeded")]
    RecursionDepth(usize),
    #[error("symmetry invariant violated: {0}")]
    SymmetryViolation(String),
    #[error("SYM node of arity {arity} exceeds library max arity {max}")]
    ArityExceedsLibrary { arity: usize, max: usize },
    #[error("no pitch cost for cell {0}")]
    MissingPitch(String),
    #[error("unknown input {0:?}")]
    UnknownInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
