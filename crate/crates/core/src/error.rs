use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid vertex pair ({u}, {v}) for n = {n}: need 1 <= u < v <= n")]
    InvalidPair { u: u32, v: u32, n: u32 },

    #[error("vertex {v} out of range 1..={n}")]
    InvalidVertex { v: u32, n: u32 },

    #[error("edge slot {slot} out of range for {m} slots")]
    SlotOutOfRange { slot: u64, m: u64 },

    #[error("{name} = {value} is not a probability in [0, 1]")]
    Probability { name: &'static str, value: f64 },

    #[error("flip of edge slot {slot} to state {state} does not change the configuration")]
    NoOpFlip { slot: u64, state: bool },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("table with {m} bits exceeds the limit of {max}")]
    TooManyBits { m: u32, max: u32 },

    #[error("dimension mismatch: {0}")]
    Mismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(&'static str),

    #[error("vertex {0} was not probed in this trajectory")]
    NotProbed(u32),

    #[error("G'_lambda(A) = {derivative} <= 0 at lambda = {lambda}, A = {a}")]
    NonPositiveDerivative { lambda: f64, a: f64, derivative: f64 },

    #[error("oracle failure: {0}")]
    Oracle(String),
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Probability { name, value })
    }
}
