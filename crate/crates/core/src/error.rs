use thiserror::Error;

use crate::qcore::HalfInt;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid deformation parameter: {0}")]
    InvalidParam(String),

    #[error("q is degenerate: |[{n}]_q| <= {eps:e} (root of unity within the working range)")]
    RootOfUnity { n: i64, eps: f64 },

    #[error("invalid half-integer {0:?}")]
    InvalidHalfInt(String),

    #[error("invalid label triple (J, M, N) = ({j}, {m}, {n}): {reason}")]
    InvalidTriple {
        j: HalfInt,
        m: HalfInt,
        n: HalfInt,
        reason: &'static str,
    },

    #[error("negative q-factorial argument {0}")]
    NegativeFactorial(i64),

    #[error("pole of the finite product at k = {k}")]
    Pole { k: i64 },

    #[error("infinite product did not converge after {factors} factors")]
    ProductNonConvergence { factors: usize },

    #[error("quadrature did not converge: last correction {last_delta:e} > tolerance {tol:e}")]
    QuadratureNonConvergence { last_delta: f64, tol: f64 },

    #[error("argument {arg} lies within 1e-6 of the logarithm branch cut")]
    BranchCut { arg: f64 },

    #[error("negative radicand {value:e} in {context}")]
    NegativeRadicand { value: f64, context: &'static str },

    #[error("method {method} is not available for {reason}")]
    IncompatibleMethod {
        method: &'static str,
        reason: String,
    },

    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    #[error("stencil evaluated on the excluded line {0} = 0")]
    SingularPoint(&'static str),

    #[error("q-dilation operators need q != 1; the classical regime requires derivatives")]
    ClassicalOperator,
}

pub type Result<T> = std::result::Result<T, Error>;
