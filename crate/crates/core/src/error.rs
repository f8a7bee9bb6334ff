use thiserror::Error;

use crate::domain::Value;
use crate::state::{SetVarId, VarId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown variable {0}")]
    UnknownVariable(VarId),
    #[error("unknown set variable {0}")]
    UnknownSetVariable(SetVarId),
    #[error("variable {0} is not fixed")]
    NotFixed(VarId),
    #[error("value {0} is outside the supported range")]
    ValueOutOfRange(Value),
    #[error("empty domain for {0}")]
    EmptyDomain(String),
    #[error("parameter {parameter} = {value} exceeds the cap of {cap}")]
    ParameterTooLarge {
        parameter: &'static str,
        value: u64,
        cap: u64,
    },
    #[error("oracle refused: {estimate} assignments exceed the cap of {cap}")]
    OracleCapExceeded { estimate: u128, cap: u128 },
    #[error("propagator `{propagator}` added value {value} to variable {var}")]
    ContractViolation {
        propagator: String,
        var: VarId,
        value: Value,
    },
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
