//! Support library of the `lamperti` binary: parameter-file handling and
//! round-trip-stable CSV schemas, kept as a library so tests can drive the
//! exact code paths the binary prints.

pub mod config;
pub mod output;
