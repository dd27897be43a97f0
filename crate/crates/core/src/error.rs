use alloc::string::String;

use crate::report::ValidationReport;

/// Errors shared across the crate. Validation-style operations return a
/// [`ValidationReport`] instead; an `Error` means an operation could not
/// produce its result at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Matrix/vector dimensions do not match the operation's contract.
    Dimension(String),
    /// A vector that must be renormalized has zero total mass.
    ZeroMass,
    /// A probability vector is negative somewhere or does not sum to one.
    NotDistribution(String),
    /// An assignment is missing a value for the named variable.
    MissingValue(String),
    /// The input instance or game fails its validator.
    InvalidInstance(ValidationReport),
    /// An `eps` or `delta` argument is outside the regime of the operation.
    Threshold(String),
    /// A profile claimed to be a delta-WSNE is not one.
    NotAWsne(String),
    /// A structural precondition (e.g. balanced sides) is violated.
    Precondition(String),
    /// A primary index carries zero probability, so the back-translation
    /// ratio is undefined; the caller's WSNE precondition was violated.
    DegenerateMass(usize),
    /// The matrix mixes payoffs 8 and 4; the scale cannot be detected.
    MixedScale,
    /// A column (or column pair / row) does not match any encode pattern.
    Pattern(String),
    /// A stage validator failed mid-chain (an implementation bug, not bad
    /// input); carries the step index and the validator's report.
    Stage(usize, ValidationReport),
    /// A configured work budget (pivots, support pairs) was exceeded.
    Budget(String),
    /// A persisted trace violates its structural invariants.
    Validation(String),
    /// The eps passed to a translate-back differs from the one recorded at
    /// build time.
    EpsMismatch,
    /// An internal invariant that the theorems guarantee was violated;
    /// indicates a bug in this crate.
    Invariant(String),
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::Dimension(s) => write!(f, "dimension mismatch: {s}"),
            Error::ZeroMass => write!(f, "cannot renormalize a zero-mass vector"),
            Error::NotDistribution(s) => write!(f, "not a probability vector: {s}"),
            Error::MissingValue(v) => write!(f, "no value assigned to variable {v:?}"),
            Error::InvalidInstance(r) => write!(f, "invalid instance: {r}"),
            Error::Threshold(s) => write!(f, "threshold violated: {s}"),
            Error::NotAWsne(s) => write!(f, "profile is not a WSNE at the required delta: {s}"),
            Error::Precondition(s) => write!(f, "precondition violated: {s}"),
            Error::DegenerateMass(i) => {
                write!(f, "primary index {i} has zero probability mass")
            }
            Error::MixedScale => write!(f, "matrix contains both 8 and 4 payoffs"),
            Error::Pattern(s) => write!(f, "encode pattern mismatch: {s}"),
            Error::Stage(step, r) => write!(f, "stage validator failed at step {step}: {r}"),
            Error::Budget(s) => write!(f, "budget exceeded: {s}"),
            Error::Validation(s) => write!(f, "invalid trace: {s}"),
            Error::EpsMismatch => write!(
                f,
                "eps differs from the value recorded when the simulation was built"
            ),
            Error::Invariant(s) => write!(f, "internal invariant violated: {s}"),
        }
    }
}

impl core::error::Error for Error {}
