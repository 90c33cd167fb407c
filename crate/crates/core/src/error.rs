use alloc::string::String;
use core::fmt;

use crate::report::Report;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operands have incompatible shapes.
    Dimension { expected: String, found: String },
    /// A value is outside its domain (bad index, non-finite entry, empty table...).
    InvalidInput(String),
    /// A structure failed its axioms; the report lists every violation.
    Invalid { what: &'static str, report: Report },
    /// `s(X) != t(Y)` or the middle automorphisms of two N(A) elements differ.
    Composition(String),
    /// A carrier subset is not closed under the 2-group operations.
    Closure(String),
    /// The operation is only defined for trace-preserving automorphisms.
    UnsupportedAutomorphism(String),
    /// A unitary does not implement any pair of automorphisms.
    NotImplementing { residual: f64 },
    /// Middle algebras or twists of a fusion do not match.
    Fusion(String),
    /// Tensor product of bundles over different 2-groups or bases.
    Tensor(String),
    /// A quotient-level map is not constant on equivalence classes.
    IllDefined { what: String, residual: f64 },
    /// Anchors of a bundle morphism do not agree.
    AnchorMismatch(String),
}

impl Error {
    pub(crate) fn dimension(expected: impl fmt::Display, found: impl fmt::Display) -> Self {
        use alloc::string::ToString;
        Error::Dimension {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    pub(crate) fn invalid(what: &'static str, report: Report) -> Self {
        Error::Invalid { what, report }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Invalid { what, report } => {
                write!(
                    f,
                    "invalid {what}: {} violation(s)",
                    report.violations.len()
                )?;
                if let Some(v) = report.violations.first() {
                    write!(f, ", first: {} at {}", v.equation, v.location)?;
                }
                Ok(())
            }
            Error::Composition(msg) => write!(f, "composition error: {msg}"),
            Error::Closure(msg) => write!(f, "closure error: {msg}"),
            Error::UnsupportedAutomorphism(msg) => write!(f, "unsupported automorphism: {msg}"),
            Error::NotImplementing { residual } => {
                write!(
                    f,
                    "unitary does not implement automorphisms (residual {residual:.3e})"
                )
            }
            Error::Fusion(msg) => write!(f, "fusion error: {msg}"),
            Error::Tensor(msg) => write!(f, "tensor error: {msg}"),
            Error::IllDefined { what, residual } => {
                write!(
                    f,
                    "{what} is not well defined on classes (residual {residual:.3e})"
                )
            }
            Error::AnchorMismatch(msg) => write!(f, "anchor mismatch: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
