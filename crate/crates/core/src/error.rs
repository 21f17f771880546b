use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^62")]
    InvalidModulus(u64),
    #[error("2-adic valuation of 0 is undefined")]
    ZeroValuation,
    #[error("{value} is not a quadratic residue modulo {p}")]
    NonResidue { value: u64, p: u64 },
    #[error("element is not a square in the extension field")]
    NotSquare,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live over different moduli")]
    ModulusMismatch,
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("polynomial {0} must have positive degree")]
    ConstantPolynomial(String),
    #[error("polynomial {0} has zero constant term")]
    ZeroConstantTerm(String),
    #[error("polynomial {0} is excluded here (x+1, x-1 and, for tilde, x are not allowed)")]
    Excluded(String),
    #[error("polynomial {0} is reducible")]
    Reducible(String),
    #[error("parse error at byte {position} near {token:?}: {reason}")]
    Parse {
        position: usize,
        token: String,
        reason: String,
    },
    #[error("field of size {p}^{n} exceeds the enumeration limit of {limit}")]
    FieldTooLarge { p: u64, n: usize, limit: u64 },
    #[error("integer overflow computing {0}")]
    Overflow(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
