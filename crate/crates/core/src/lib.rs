//! Core model for interactive vision videos.
//!
//! Everything in this crate is pure computation over owned data: the
//! branching project graph and its structural checks, the per-viewer playback
//! state machine with its event log, and the statistics used to compare
//! groups of viewing sessions. File formats, HTTP and the command line live
//! in the `vvp` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytics;
pub mod graph;
mod ids;
pub mod sample;
pub mod session;
pub mod stats;

pub use ids::{AnnotationId, MediaId, NodeId, OptionId, SessionId, Timestamp};
