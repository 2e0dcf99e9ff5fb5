pub mod error;
pub mod partition;
pub mod puzzle;
pub mod tableau;

pub use error::{Error, Result};
pub mod cli;
pub mod criterion;
pub mod permgroup;
pub mod report;
pub mod tree;

// Recursion over puzzle cells and games can run thousands of frames deep.
pub(crate) fn deep<R>(f: impl FnOnce() -> R) -> R {
    stacker::maybe_grow(128 * 1024, 8 * 1024 * 1024, f)
}
