use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Which factor of a class member vanished at an evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleFactor {
    Z,
    W,
    OneMinusZW,
}

impl fmt::Display for PoleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoleFactor::Z => write!(f, "z"),
            PoleFactor::W => write!(f, "w"),
            PoleFactor::OneMinusZW => write!(f, "1-z*w"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PmError {
    #[error("syntax error at position {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("denominator has factors other than z, w and (1-z*w): {0}")]
    UnrepresentableDenominator(String),
    #[error("pole at point: factor {0} vanishes")]
    PoleAtPoint(PoleFactor),
    #[error("no finite limit at the point at infinity")]
    NoFiniteLimit,
    #[error("the zero function has no homogeneity degree")]
    ZeroFunction,
    #[error("pullback leaves the closed function class")]
    NotClassPreserving,
    #[error("decomposition base point is not finite")]
    DecompositionOutOfChart,
    #[error("invariance prefactor is singular at the point")]
    SingularPrefactor,
    #[error("method not applicable: {0}")]
    MethodNotApplicable(String),
    #[error("function with (1-z*w) denominator has no polynomial restriction")]
    NonPolynomialRestriction,
    #[error("hbar lies outside the deformation domain")]
    OutsideDeformationDomain,
    #[error("series budget of {terms} terms exhausted (partial value {value}, tail {tail})")]
    BudgetExhausted { value: Complex64, tail: f64, terms: usize },
    #[error("domain pairing violation: {0}")]
    DomainPairingViolation(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("tail certification unavailable: {0}")]
    CertificationUnavailable(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, PmError>;

impl PmError {
    /// Stable identifier for structured error reports.
    pub fn code(&self) -> &'static str {
        match self {
            PmError::SyntaxError { .. } => "syntax_error",
            PmError::UnrepresentableDenominator(_) => "unrepresentable_denominator",
            PmError::PoleAtPoint(_) => "pole_at_point",
            PmError::NoFiniteLimit => "no_finite_limit",
            PmError::ZeroFunction => "zero_function",
            PmError::NotClassPreserving => "not_class_preserving",
            PmError::DecompositionOutOfChart => "decomposition_out_of_chart",
            PmError::SingularPrefactor => "singular_prefactor",
            PmError::MethodNotApplicable(_) => "method_not_applicable",
            PmError::NonPolynomialRestriction => "non_polynomial_restriction",
            PmError::OutsideDeformationDomain => "outside_deformation_domain",
            PmError::BudgetExhausted { .. } => "budget_exhausted",
            PmError::DomainPairingViolation(_) => "domain_pairing_violation",
            PmError::InvalidParams(_) => "invalid_params",
            PmError::CertificationUnavailable(_) => "certification_unavailable",
            PmError::InvalidPoint(_) => "invalid_point",
            PmError::UnknownSuite(_) => "unknown_suite",
        }
    }
}
