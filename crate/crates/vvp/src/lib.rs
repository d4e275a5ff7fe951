//! File formats, HTTP service and command line for interactive vision
//! videos, built on `vvp-core`.

pub mod bundle;
pub mod cli;
pub mod document;
pub mod logfile;
pub mod report;
pub mod server;
pub mod time;
pub mod wire;
