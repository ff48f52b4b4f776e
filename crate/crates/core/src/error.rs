//! Error type shared by every module of the crate.

use std::fmt;

/// Everything that can go wrong while building shapes, evaluating matrix
/// families, or running the estimators.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The polynomial-spec document could not be parsed at all.
    Malformed(String),
    /// `r` must be a positive integer.
    ZeroVariables,
    /// The document contained no monomials.
    EmptyMonomialList,
    /// Monomial `index` has a different length than `r`.
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    /// Monomial `index` repeats an earlier monomial verbatim.
    DuplicateMonomial { index: usize },
    /// Monomial `index` has total degree zero.
    ZeroDegreeMonomial { index: usize },
    /// Two exponent vectors of different lengths were compared.
    CompareLengthMismatch { left: usize, right: usize },
    /// Two shapes over different variable counts were combined.
    VariableCountMismatch { left: usize, right: usize },
    /// A matrix row was identically zero where a nonzero row is required.
    ZeroRow { row: usize },
    /// The two-variable grid requires `n >= m >= 1`.
    BadGrid { n: u32, m: u32 },
    /// An evaluation point had a zero coordinate where the matrix family
    /// carries an inverse-coordinate factor.
    ZeroCoordinate { index: usize },
    /// Derivative level outside `1..=max`.
    LevelOutOfRange { level: usize, max: usize },
    /// Wrong number of evaluation points or wrong point dimension.
    BadPoints { expected: usize, found: usize },
    /// Hessian verification needs more than one variable.
    NeedsTwoVariables,
    /// Hessian verification rejects zero exponents.
    ZeroExponent { index: usize },
    /// Exact verification mode only supports small variable counts.
    ExactModeTooLarge { r: usize, max: usize },
    /// A variable subset passed to the completeness test was invalid.
    BadSubset(String),
    /// Exhaustive subset search refuses to run on this many variables.
    TooManyVariables { r: usize, max: usize },
    /// The configured quadrature cap cannot resolve the requested frequency.
    ResolutionInsufficient { required: usize, allowed: usize },
    /// Only even moments `2k` exist for the special integral.
    OddMoment { two_k: u64 },
    /// Decay fitting needs at least this many shells.
    TooFewShells { found: usize, needed: usize },
    /// A shell with `a_lo >= a_hi` or a non-positive bound.
    BadShell { a_lo: f64, a_hi: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Malformed(msg) => write!(f, "malformed polynomial document: {msg}"),
            Error::ZeroVariables => write!(f, "the number of variables r must be positive"),
            Error::EmptyMonomialList => write!(f, "the monomial list is empty"),
            Error::LengthMismatch { index, expected, found } => write!(
                f,
                "monomial {index} has {found} exponents, expected r = {expected}"
            ),
            Error::DuplicateMonomial { index } => {
                write!(f, "monomial {index} duplicates an earlier monomial")
            }
            Error::ZeroDegreeMonomial { index } => {
                write!(f, "monomial {index} has degree zero")
            }
            Error::CompareLengthMismatch { left, right } => {
                write!(f, "cannot compare exponent vectors of lengths {left} and {right}")
            }
            Error::VariableCountMismatch { left, right } => {
                write!(f, "shapes have different variable counts {left} and {right}")
            }
            Error::ZeroRow { row } => write!(f, "row {row} of the exponent matrix is zero"),
            Error::BadGrid { n, m } => write!(f, "grid requires n >= m >= 1, got n = {n}, m = {m}"),
            Error::ZeroCoordinate { index } => {
                write!(f, "evaluation point has a zero coordinate at index {index}")
            }
            Error::LevelOutOfRange { level, max } => {
                write!(f, "derivative level {level} outside 1..={max}")
            }
            Error::BadPoints { expected, found } => {
                write!(f, "expected {expected} point coordinates, found {found}")
            }
            Error::NeedsTwoVariables => write!(f, "the Hessian identity requires r > 1"),
            Error::ZeroExponent { index } => {
                write!(f, "exponent {index} is zero; the identity requires all k_i >= 1")
            }
            Error::ExactModeTooLarge { r, max } => {
                write!(f, "exact verification supports r <= {max}, got r = {r}")
            }
            Error::BadSubset(msg) => write!(f, "invalid variable subset: {msg}"),
            Error::TooManyVariables { r, max } => {
                write!(f, "exhaustive subset search supports r <= {max}, got r = {r}")
            }
            Error::ResolutionInsufficient { required, allowed } => write!(
                f,
                "quadrature needs {required} points to resolve the integrand but only {allowed} are allowed"
            ),
            Error::OddMoment { two_k } => {
                write!(f, "moment order 2k must be even and positive, got {two_k}")
            }
            Error::TooFewShells { found, needed } => {
                write!(f, "decay fit needs at least {needed} shells, got {found}")
            }
            Error::BadShell { a_lo, a_hi } => {
                write!(f, "invalid shell bounds [{a_lo}, {a_hi})")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
