use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FmError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("leading z-coefficient is zero; use the symmetric-cancellation path")]
    ZeroLeadingCoefficient,
    #[error("input is not symmetric: {0}")]
    NotSymmetric(String),
    #[error("invalid flag data: {0}")]
    InvalidFlag(String),
    #[error("basis size {0} exceeds the guard of 10000")]
    BasisOverflow(usize),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("expected a polynomial: {0}")]
    NotPolynomial(String),
    #[error("denominator vanishes at {0}")]
    VanishingDenominator(String),
    #[error("not Weyl-invariant: {0}")]
    NotWeylInvariant(String),
    #[error("line bundle of positive degree supplied: {0}")]
    PositiveLineBundle(String),
    #[error("truncation: {0}")]
    Truncation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("missing data: {0}")]
    Missing(String),
    #[error("t-convention flag is not set")]
    TConventionUnset,
    #[error("incompatible series: {0}")]
    Incompatible(String),
}

pub type Result<T> = std::result::Result<T, FmError>;

impl FmError {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            FmError::ZeroDenominator => "zero_denominator",
            FmError::ZeroLeadingCoefficient => "zero_leading_coefficient",
            FmError::NotSymmetric(_) => "not_symmetric",
            FmError::InvalidFlag(_) => "invalid_flag",
            FmError::BasisOverflow(_) => "basis_overflow",
            FmError::RingMismatch(_) => "ring_mismatch",
            FmError::NotPolynomial(_) => "not_polynomial",
            FmError::VanishingDenominator(_) => "vanishing_denominator",
            FmError::NotWeylInvariant(_) => "not_weyl_invariant",
            FmError::PositiveLineBundle(_) => "positive_line_bundle",
            FmError::Truncation(_) => "truncation",
            FmError::Parse(_) => "parse",
            FmError::Unsupported(_) => "unsupported",
            FmError::Missing(_) => "missing",
            FmError::TConventionUnset => "t_convention_unset",
            FmError::Incompatible(_) => "incompatible",
        }
    }
}
