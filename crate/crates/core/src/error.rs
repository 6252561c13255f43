use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("reserved byte 0x{byte:02x} at offset {offset}")]
    ReservedByte { offset: usize, byte: u8 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("malformed BWT: {0}")]
    MalformedBwt(String),

    #[error("bit vector has {zeros} zeros and {ones} ones, inputs have lengths {n0} and {n1}")]
    CountMismatch {
        zeros: usize,
        ones: usize,
        n0: usize,
        n1: usize,
    },

    #[error("merge did not converge after {phases} phases (corrupt input?)")]
    NonConvergence { phases: usize },

    #[error("active blocks remain, merge has not converged")]
    NotConverged,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
