//! File formats and command-line plumbing on top of `charvar-core`.

pub mod family;
pub mod format;
