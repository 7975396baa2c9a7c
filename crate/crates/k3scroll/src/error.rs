use thiserror::Error;

use crate::lattice::DivisorClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("classes of length {0} and {1} do not live in the same lattice")]
    LatticeMismatch(usize, usize),
    #[error("class {0} has square {1}, not -2")]
    NotARoot(DivisorClass, i64),
    #[error("class {0} has odd square {1}")]
    OddSquare(DivisorClass, i64),
    #[error("height class {0} has square {1} <= 0")]
    HeightNotBig(DivisorClass, i64),
    #[error("lattice is not hyperbolic with respect to {0}")]
    NotHyperbolic(DivisorClass),
    #[error("malformed lattice data: {0}")]
    Malformed(String),
    #[error("polarization is not nef: {0}")]
    PolarizationNotNef(String),
    #[error("degree-0 root {0} is not oriented by the declared effective roots")]
    UnorientedRoot(DivisorClass),
    #[error("reflection walk did not terminate within {0} steps")]
    ReductionBudgetExceeded(usize),
    #[error("class {0} is not in the positive cone of L")]
    NotInPositiveCone(DivisorClass),
    #[error("class {0} is not nef (meets {1} negatively)")]
    NotNef(DivisorClass, DivisorClass),
    #[error("h0 undecided for candidate {0}")]
    AbstainedCandidate(DivisorClass),
    #[error("h0 undecided for {0}")]
    Abstained(DivisorClass),
    #[error("case evidence conflicts: {0} vs {1}")]
    CaseConflict(String, String),
    #[error("not a free Clifford divisor: {0}")]
    NotCliffordDivisor(String),
    #[error("dual invariant undecided at h0({0})")]
    AbstainedInvariant(DivisorClass),
    #[error("dual invariants not monotone: {0:?}")]
    MonotonicityViolation(Vec<i64>),
    #[error("empty dual invariant sequence")]
    EmptyInvariants,
    #[error("scroll numerics mismatch: {0}")]
    NumericsMismatch(String),
    #[error("subscroll type {0:?} is not (1,...,1)")]
    UnsupportedSubscroll(Vec<i64>),
    #[error("Betti table for c={c}, D^2={dsq} is underdetermined: {detail}")]
    BettiIndeterminate { c: i64, dsq: i64, detail: String },
    #[error("Betti constraints for c={c}, D^2={dsq} conflict: {detail}")]
    BettiConflict { c: i64, dsq: i64, detail: String },
    #[error("b-sum system is singular: {0}")]
    SumIndeterminate(String),
    #[error("enumeration visited more than {0} candidates")]
    EnumerationBudget(usize),
    #[error("filter {0} removed every candidate")]
    FilterTooStrong(String),
    #[error("scroll type {0} is impossible (delta1 {1} < delta2 {2})")]
    ImpossibleType(String, i64, i64),
    #[error("contracted curves do not form an ADE diagram: {0}")]
    SingularityNotADE(String),
    #[error("no fixture for row {0}")]
    FixtureGap(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}
