//! Error type shared across the toolkit.

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix or vector dimension does not match what the operation needs.
    DimensionMismatch { expected: usize, got: usize },
    /// Operation requires a square matrix.
    NotSquare { rows: usize, cols: usize },
    /// A NaN or infinite entry was encountered at construction.
    NonFinite,
    /// Partition dimensions must all be at least 2.
    InvalidPartition { dim: usize },
    /// Matrix deviates from hermiticity beyond the allowed tolerance.
    NonHermitian { deviation: f64 },
    /// Matrix deviates from unitarity beyond the allowed tolerance.
    NonUnitary { deviation: f64 },
    /// The operation is undefined for a zero vector.
    ZeroVector,
    /// A vector or coefficient list must be normalized.
    NotNormalized { norm: f64 },
    /// Matrix fails the density-matrix invariants.
    InvalidDensity {
        hermiticity: f64,
        trace_deviation: f64,
        min_eigenvalue: f64,
    },
    /// Partial trace requires a nonempty set of kept factors.
    EmptyKeepSet,
    /// A subsystem or basis index is out of range.
    IndexOutOfRange { index: usize, bound: usize },
    /// The operation requires a bipartite (two-factor) partition.
    RequiresTwoFactors { got: usize },
    /// Relative state undefined: overlap with the conditioning state is
    /// below threshold.
    RelativeStateUndefined { overlap: f64 },
    /// Conditional undefined: the conditioning outcome has (near-)zero
    /// probability.
    ConditionalUndefined { probability: f64 },
    /// A probability fell below the numerical-noise clamp band.
    NegativeProbability { value: f64 },
    /// Probabilities do not sum to one.
    UnnormalizedDistribution { sum: f64 },
    /// Projectors of a measurement axis do not resolve the identity.
    IncompleteProjectors { deviation: f64 },
    /// Triviality is only defined for two or more axes.
    SingleAxis,
    /// Basis index invariants violated (needs mu <= nu, imaginary part
    /// needs mu < nu).
    InvalidBasisIndex { mu: usize, nu: usize },
    /// Hermitian operator basis needs dimension >= 2.
    DimensionTooSmall { dim: usize },
    /// Correlation table does not have one entry per basis-operator tuple.
    IncompleteTable { expected: usize, got: usize },
    /// A projector-type table entry lies outside [0, 1] beyond tolerance.
    TableEntryOutOfRange { index: usize, value: f64 },
    /// Reconstructed trace deviates from 1 beyond 1e-6: inconsistent input
    /// correlations.
    InconsistentTable { trace: f64 },
    /// Hardy construction rejects angles where the two eigenbases per side
    /// coincide or are orthogonal.
    DegenerateAngle { theta: f64 },
    /// Cross correlations need two distinct specimen levels.
    IdenticalIndices { index: usize },
    /// Apparatus must have at least as many levels as the specimen.
    ApparatusTooSmall { specimen: usize, apparatus: usize },
    /// A scalar parameter is outside its admissible range.
    ParameterOutOfRange { name: &'static str, value: f64 },
    /// Internal verification of a constructed witness failed.
    WitnessVerificationFailed { deviation: f64 },
    /// Mean value carries an imaginary residue beyond tolerance: the
    /// observable tuple was not Hermitian.
    ImaginaryResidue { residue: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            Error::NonFinite => write!(f, "non-finite entry"),
            Error::InvalidPartition { dim } => {
                write!(f, "invalid partition: factor dimension {dim} < 2")
            }
            Error::NonHermitian { deviation } => {
                write!(f, "matrix is not hermitian (deviation {deviation:e})")
            }
            Error::NonUnitary { deviation } => {
                write!(f, "matrix is not unitary (deviation {deviation:e})")
            }
            Error::ZeroVector => write!(f, "operation undefined for the zero vector"),
            Error::NotNormalized { norm } => {
                write!(f, "vector must be normalized, norm is {norm}")
            }
            Error::InvalidDensity {
                hermiticity,
                trace_deviation,
                min_eigenvalue,
            } => write!(
                f,
                "not a density matrix: hermiticity {hermiticity:e}, trace deviation \
                 {trace_deviation:e}, min eigenvalue {min_eigenvalue:e}"
            ),
            Error::EmptyKeepSet => write!(f, "partial trace needs a nonempty keep set"),
            Error::IndexOutOfRange { index, bound } => {
                write!(f, "index {index} out of range (bound {bound})")
            }
            Error::RequiresTwoFactors { got } => {
                write!(f, "operation requires exactly two factors, got {got}")
            }
            Error::RelativeStateUndefined { overlap } => {
                write!(f, "relative state undefined: overlap {overlap:e} below threshold")
            }
            Error::ConditionalUndefined { probability } => {
                write!(
                    f,
                    "conditional undefined: conditioning outcome has probability {probability:e}"
                )
            }
            Error::NegativeProbability { value } => {
                write!(f, "probability {value:e} below the noise clamp band")
            }
            Error::UnnormalizedDistribution { sum } => {
                write!(f, "probabilities sum to {sum}, expected 1")
            }
            Error::IncompleteProjectors { deviation } => {
                write!(f, "axis projectors do not resolve the identity (deviation {deviation:e})")
            }
            Error::SingleAxis => write!(f, "need two or more axes"),
            Error::InvalidBasisIndex { mu, nu } => {
                write!(f, "invalid basis index (mu={mu}, nu={nu})")
            }
            Error::DimensionTooSmall { dim } => {
                write!(f, "dimension {dim} too small, need at least 2")
            }
            Error::IncompleteTable { expected, got } => {
                write!(f, "incomplete table: expected {expected} entries, got {got}")
            }
            Error::TableEntryOutOfRange { index, value } => {
                write!(f, "table entry {index} out of range: {value}")
            }
            Error::InconsistentTable { trace } => {
                write!(f, "inconsistent correlation table: reconstructed trace {trace}")
            }
            Error::DegenerateAngle { theta } => {
                write!(f, "degenerate angle {theta}: bases identical or orthogonal")
            }
            Error::IdenticalIndices { index } => {
                write!(f, "indices must be distinct, both are {index}")
            }
            Error::ApparatusTooSmall { specimen, apparatus } => {
                write!(
                    f,
                    "apparatus dimension {apparatus} smaller than specimen dimension {specimen}"
                )
            }
            Error::ParameterOutOfRange { name, value } => {
                write!(f, "parameter {name} out of range: {value}")
            }
            Error::WitnessVerificationFailed { deviation } => {
                write!(f, "witness verification failed (deviation {deviation:e})")
            }
            Error::ImaginaryResidue { residue } => {
                write!(f, "mean value has imaginary residue {residue:e}")
            }
        }
    }
}

impl core::error::Error for Error {}
