use thiserror::Error;

use crate::syntax::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("resource limit exceeded: {0}")]
    ResourceExceeded(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown logic `{0}`")]
    UnknownLogic(String),
    #[error("set is separable, witness {0}")]
    Separable(String),
    #[error("undecided: {0}")]
    Undecided(String),
}
