use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {0} is not in the upper half-plane")]
    NotInUpperHalfPlane(Complex64),
    #[error("matrix sends the point to infinity")]
    Pole,
    #[error("determinant must be 1, got {0}")]
    BadDeterminant(i128),
    #[error("weight {0} is not an even integer >= 4")]
    InvalidWeight(i32),
    #[error("matrix {0} is not hyperbolic")]
    NotHyperbolic(String),
    #[error("{0} is not an elliptic point of {1}")]
    NotEllipticPoint(Complex64, String),
    #[error("matrix {0} is not in {1}")]
    NotInGroup(String, String),
    #[error("Im(z) = {y} is below the evaluation floor {floor}")]
    BelowHeightFloor { y: f64, floor: f64 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(i64),
    #[error("derivative order {order} exceeds the cap {cap}")]
    DerivativeCap { order: u32, cap: u32 },
    #[error("seed is attached to a {seed} point but cosets are {cosets}")]
    StabilizerMismatch { seed: String, cosets: String },
    #[error("homomorphism is nonzero on the stabilizer generator (|L| = {0:e})")]
    TwistOnStabilizer(f64),
    #[error("non-finite value at {0}")]
    NonFinite(Complex64),
    #[error("tolerance not reached: {0}")]
    Tolerance(String),
    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
