use alloc::string::String;

/// Errors raised by constructors and algorithms of this crate.
///
/// Search failures that are legitimate outcomes (no tiling, timeouts, unserved
/// embedding tasks) are reported through result types, not through this enum.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("generation failed: {0}")]
    GenerationFailure(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
