//! File formats, threshold scans and the command line around `cliquetile-core`.

pub mod format;
pub mod scan;
