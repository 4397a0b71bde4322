//! Error type shared by every module of the crate.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Division by an exact zero.
    DivisionByZero,
    /// Binary operation between elements of Q(w) with different w^2.
    MixedExtensions { lhs: String, rhs: String },
    /// Inversion of the zero element of a field.
    ZeroInverse,
    /// An operation that requires a square matrix got a rectangular one.
    NonSquare { rows: usize, cols: usize },
    /// Matrix/vector dimensions do not line up.
    DimensionMismatch { expected: usize, found: usize },
    /// Matrix sizes must be at least 1x1.
    EmptySize,
    /// Combinatorial algorithm refused a size beyond its configured limit.
    SizeLimit {
        op: &'static str,
        limit: usize,
        requested: usize,
    },
    /// Family string did not parse.
    UnknownFamily(String),
    /// T / T~ factor indices out of range or equal.
    BadFactorIndex { j0: usize, k0: usize, n: usize },
    /// Operation is not defined for the requested family.
    UnsupportedFamily { op: &'static str, family: String },
    /// Modulus must be at least 2.
    BadModulus(u64),
    /// Unknown conjecture identifier.
    UnknownConjecture(String),
    /// Eigenstructure closed forms only exist for n >= 3.
    SpectrumUndefined { n: usize },
    /// A computed matrix does not match its expected entry pattern.
    PatternMismatch {
        what: &'static str,
        row: usize,
        col: usize,
        found: String,
        expected: String,
    },
    /// A structural assertion of the reduction pipeline failed.
    StageAssertion { stage: usize, detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::MixedExtensions { lhs, rhs } => {
                write!(f, "mixed quadratic extensions: w^2 = {lhs} vs w^2 = {rhs}")
            }
            Error::ZeroInverse => write!(f, "inverse of zero"),
            Error::NonSquare { rows, cols } => {
                write!(f, "expected a square matrix, got {rows}x{cols}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::EmptySize => write!(f, "matrix size must be at least 1"),
            Error::SizeLimit { op, limit, requested } => {
                write!(f, "{op}: n = {requested} exceeds the limit {limit}")
            }
            Error::UnknownFamily(s) => write!(
                f,
                "unknown family {s:?} (expected a1, a2, b, absdiff, t:j0,k0, ttilde:j0,k0 or hankel)"
            ),
            Error::BadFactorIndex { j0, k0, n } => {
                write!(f, "factor indices ({j0},{k0}) invalid for size {n}: need 1 <= j0,k0 <= n and j0 != k0")
            }
            Error::UnsupportedFamily { op, family } => {
                write!(f, "{op} is not defined for family {family}")
            }
            Error::BadModulus(m) => write!(f, "modulus must be >= 2, got {m}"),
            Error::UnknownConjecture(s) => write!(
                f,
                "unknown conjecture id {s:?} (expected 4.1i, 4.1ii, 4.2 or s11.23)"
            ),
            Error::SpectrumUndefined { n } => {
                write!(f, "eigenstructure closed forms require n >= 3, got {n}")
            }
            Error::PatternMismatch { what, row, col, found, expected } => {
                write!(
                    f,
                    "{what}: entry ({row},{col}) is {found}, expected {expected}"
                )
            }
            Error::StageAssertion { stage, detail } => {
                write!(f, "reduction stage {stage}: {detail}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
