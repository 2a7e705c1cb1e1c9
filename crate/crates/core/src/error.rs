use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("a lens space needs at least one rotation parameter")]
    EmptyParameters,
    #[error("parameter {s} is not coprime to q = {q}; the action is not free")]
    NonCoprimeParameter { q: u64, s: i64 },
    #[error("cannot parse lens space from {0:?}")]
    Parse(String),
    #[error("ranks differ ({0} vs {1})")]
    RankMismatch(usize, usize),
    #[error("moduli differ ({0} vs {1})")]
    ModulusMismatch(u64, u64),
    #[error("lens space is not in the family with parameters distinct up to sign")]
    NotInL0,
    #[error("dual lens space would have no parameters (2m = phi(q))")]
    DualEmpty,
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("no weight of rank {m} has one-norm {norm} and {zeros} zero coordinates")]
    NoSuchWeightShape { m: usize, norm: u64, zeros: usize },
    #[error("degree p = {p} out of range for rank m = {m}")]
    InvalidP { p: usize, m: usize },
    #[error("rank m = {0} unsupported (SO(2m) needs m >= 2)")]
    UnsupportedRank(usize),
    #[error("q = {0} is not an odd prime")]
    NotPrime(u64),
    #[error("shape violated: q - 1 = {q_minus_1} but 2m + 4 = {two_m_plus_4}")]
    WrongShape { q_minus_1: u64, two_m_plus_4: u64 },
    #[error("invalid w-power specification: {0}")]
    InvalidSpec(String),
    #[error("r = {0} must exceed 1 and not be divisible by 3")]
    BadR(u64),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("integer overflow in exact arithmetic ({0})")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
