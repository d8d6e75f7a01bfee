use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("point {0} outside the admissible domain: {1}")]
    Domain(Complex64, &'static str),

    #[error("indeterminate value at {0} (0/0)")]
    Indeterminate(Complex64),

    #[error("pole of the map at {0}")]
    Pole(Complex64),

    #[error("no branch of the inverse lies in the open disk at {0}")]
    Branch(Complex64),

    #[error("argument {value} outside the supported range {range}")]
    Range { value: f64, range: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("map is not univalent: f({z1}) ≈ f({z2})")]
    NotUnivalent { z1: Complex64, z2: Complex64 },

    #[error("weight bound violated: {which} = {value} at {at} (bound a = {bound})")]
    WeightBound {
        which: &'static str,
        value: f64,
        at: Complex64,
        bound: f64,
    },

    #[error("factorization failed at pivot {pivot}: matrix is not positive definite")]
    Factorization { pivot: usize },

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("zero denominator in Rayleigh quotient")]
    ZeroDenominator,

    #[error("search failed: {0}")]
    SearchFailure(String),

    #[error("winding number needs refinement: argument jump {jump} at sample {index}")]
    Refinement { index: usize, jump: f64 },

    #[error("root bracket failure: {0}")]
    Bracket(String),

    #[error("gallery error: {0}")]
    Gallery(String),
}
