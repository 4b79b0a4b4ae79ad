use thiserror::Error;

use crate::divchain::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} is out of the supported range [2, 65535]")]
    ModulusOutOfRange(u64),
    #[error("operation requires an odd prime, got ell = 2")]
    EvenPrime,
    #[error("mixed moduli: {0} and {1}")]
    MixedModuli(u64, u64),
    #[error("matrix is singular mod {0}")]
    Singular(u64),
    #[error("residue {0} is zero mod {1}, expected a unit")]
    ZeroUnit(u64, u64),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("group is not upper triangular")]
    NotUpperTriangular,
    #[error("group is not diagonal")]
    NotDiagonal,
    #[error("claimed subgroup is not contained in the ambient group")]
    NotSubgroup,
    #[error("the zero vector is not a point of V•")]
    ZeroVector,
    #[error("order {order} does not divide ell - 1 = {bound}")]
    OrderDoesNotDivide { order: u64, bound: u64 },
    #[error("unit group order must be 2, 4 or 6, got {0}")]
    InvalidUnitCount(u64),
    #[error("prime {ell} exceeds the bound {bound}")]
    PrimeAboveBound { ell: u64, bound: u64 },
    #[error("invalid scenario: {0}")]
    InvalidScenario(ValidationReport),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
