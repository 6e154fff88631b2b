//! File formats, verification harness and command-line front end for
//! `tardos-core`.

pub mod cli;
pub mod format;
pub mod harness;

pub use format::{parse_instance, serialize_instance, ParseError};
pub use harness::{verify_instance, Check, RunRecord};
