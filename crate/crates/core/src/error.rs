use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lowest tracked coefficient vanishes; series is not invertible")]
    ZeroLeadingCoefficient,

    #[error("C12({d}) computed as {computed}, reference table has {expected}")]
    ConstructionMismatch {
        d: u64,
        expected: i64,
        computed: String,
    },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("{0} is not a fundamental discriminant (or 1)")]
    NotFundamental(i64),

    #[error("{0} is not integral")]
    NonIntegral(String),

    #[error("{0} is not a discriminant (must be nonzero and congruent to 0 or 1 mod 4)")]
    NotDiscriminant(i64),

    #[error("local factor has a pole at s = {0}")]
    PoleAtS(String),

    #[error("pole at s = 1")]
    PoleAtOne,

    #[error("signature ({0},2) is not wired to explicit Eisenstein data")]
    UnsupportedSignature(u32),

    #[error("J-integral requires t > 0, got {0}")]
    NonPositiveT(String),

    #[error("m < 0 coefficient needs a caller-supplied L(2, chi_m) value")]
    MissingLFactor,

    #[error("principal-part coefficient c_{mu}({exp}) = {coeff} is not an integer")]
    NonIntegralPrincipalPart { mu: u8, exp: String, coeff: String },

    #[error("weight/degree identity violated: lhs {lhs} != rhs {rhs}")]
    DegreeIdentityViolation { lhs: String, rhs: String },

    #[error("invalid input form: {0}")]
    InvalidForm(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Variant name, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroLeadingCoefficient => "ZeroLeadingCoefficient",
            Error::ConstructionMismatch { .. } => "ConstructionMismatch",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::NotFundamental(_) => "NotFundamental",
            Error::NonIntegral(_) => "NonIntegral",
            Error::NotDiscriminant(_) => "NotDiscriminant",
            Error::PoleAtS(_) => "PoleAtS",
            Error::PoleAtOne => "PoleAtOne",
            Error::UnsupportedSignature(_) => "UnsupportedSignature",
            Error::NonPositiveT(_) => "NonPositiveT",
            Error::MissingLFactor => "MissingLFactor",
            Error::NonIntegralPrincipalPart { .. } => "NonIntegralPrincipalPart",
            Error::DegreeIdentityViolation { .. } => "DegreeIdentityViolation",
            Error::InvalidForm(_) => "InvalidForm",
            Error::Domain(_) => "Domain",
            Error::Parse(_) => "Parse",
        }
    }
}
