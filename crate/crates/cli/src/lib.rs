//! File format and rendering support for the `sfselect` binary.

pub mod dot;
pub mod instance;
