//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // field construction
    #[error("sigma image of generator `{0}` is constant")]
    ConstantSigmaImage(String),
    #[error("sigma images are algebraically dependent (Jacobian rank {rank} < {expected})")]
    DependentSigmaImages { rank: usize, expected: usize },
    #[error("malformed expression: {0}")]
    MalformedExpression(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no usable rational point found after {0} attempts")]
    PointSearchExhausted(usize),

    // parsing
    #[error("syntax error at position {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("division is not allowed in equations (only in field-element expressions)")]
    DivisionInEquation,
    #[error("negative exponent at position {0}")]
    NegativeExponent(usize),

    // system validation
    #[error("system involves no transform of positive order (e = 0); not a difference system")]
    SystemNotDifference,
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    // matrices
    #[error("index i = {i} is too small; the family requires i >= e-1 = {min}")]
    IndexTooSmall { i: usize, min: usize },

    // specialization
    #[error("assigned point is not a solution: {}", format_residuals(.0))]
    NotASolution(Vec<(usize, String)>),
    #[error("coefficient field does not embed into the target field: {0}")]
    EmbeddingMismatch(String),

    // profiles
    #[error(
        "rank profile tail is not affine at kmax = {kmax}: last differences {d1} and {d2} disagree"
    )]
    TailNotLinear { kmax: usize, d1: i64, d2: i64 },
    #[error("mu tail slope {found} differs from d + r - n = {expected}")]
    SlopeMismatch { found: i64, expected: i64 },
    #[error("membership hypothesis unmet: omega + max(0, ord_f - e + 1) = {lhs} < rho = {rho}; only the fallback bound applies")]
    HypothesisUnmet { lhs: i64, rho: usize },
    #[error("rank profile onset {onset} exceeds the guaranteed bound {bound}\n{artifact}")]
    OnsetExceedsBound {
        onset: usize,
        bound: usize,
        artifact: String,
    },
    #[error("standing hypothesis violated: {0}")]
    HypothesisViolation(String),

    // oracle
    #[error("oracle problem has {nvars} variables, above the soft limit {limit} (use --force or DINDEX_ORACLE_VAR_LIMIT to override)")]
    OracleTooLarge { nvars: usize, limit: usize },
    #[error("elimination ideals did not stabilize for h <= {0}")]
    NoStabilizationWithinBudget(usize),
    #[error("the oracle requires coefficient field Q, but the system is defined over a proper extension")]
    OracleFieldUnsupported,

    #[error("{0}")]
    Io(String),
}

fn format_residuals(rs: &[(usize, String)]) -> String {
    rs.iter()
        .map(|(i, r)| format!("f{} evaluates to {}", i + 1, r))
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    /// Process exit code contract: 1 validation, 2 bad specialization,
    /// 3 standing-hypothesis violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotASolution(_) | Error::EmbeddingMismatch(_) => 2,
            Error::TailNotLinear { .. }
            | Error::SlopeMismatch { .. }
            | Error::HypothesisViolation(_) => 3,
            _ => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_contract() {
        assert_eq!(
            Error::NotASolution(vec![(2, "t^2 - 1".into())]).exit_code(),
            2
        );
        assert_eq!(Error::EmbeddingMismatch("x".into()).exit_code(), 2);
        assert_eq!(
            Error::TailNotLinear {
                kmax: 5,
                d1: 1,
                d2: 2
            }
            .exit_code(),
            3
        );
        assert_eq!(
            Error::SlopeMismatch {
                found: 0,
                expected: 1
            }
            .exit_code(),
            3
        );
        assert_eq!(Error::HypothesisViolation("a < 0".into()).exit_code(), 3);
        assert_eq!(Error::SystemNotDifference.exit_code(), 1);
        assert_eq!(Error::DivisionInEquation.exit_code(), 1);
        assert_eq!(
            Error::OracleTooLarge {
                nvars: 20,
                limit: 14
            }
            .exit_code(),
            1
        );
    }
}
