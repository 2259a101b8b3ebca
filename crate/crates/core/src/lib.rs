//! Exact arithmetic on cyclotomic integers, their house and Cassels height,
//! and the finite searches used to classify cyclotomic integers of small house.

pub mod arith;
pub mod combinatorics;
pub mod cyclo;
pub mod exhaust;
pub mod interval;
mod level;
pub mod measures;
pub mod splitting;
pub mod tables;

pub use cyclo::{parse_sparse, CyclotomicInt, PDecomposition, RootOfUnity};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("level must be positive")]
    ZeroLevel,
    #[error("cannot move an element from level {from} to level {to}")]
    BadLevel { from: u32, to: u32 },
    #[error("{k} is not a unit modulo {level}")]
    NotCoprime { k: i64, level: u32 },
    #[error("{p} is not a prime dividing the level {level}")]
    PrimeNotDividing { p: u32, level: u32 },
    #[error("target is not totally real")]
    NotTotallyReal,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("trig table certification failed at index {index}")]
    TrigCertification { index: usize },
}
