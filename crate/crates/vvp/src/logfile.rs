//! The `.vvlog` session log: one JSON event record per line, fields in the
//! order `seq, wall_time, node, offset_ms, kind, payload`.

use std::io::{self, Write};

use vvp_core::session::{SessionEvent, SessionLog};

use crate::wire::EventRecord;

pub const EXTENSION: &str = "vvlog";

#[derive(Debug, thiserror::Error)]
pub enum LogError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn format_event(event: &SessionEvent) -> String {
    serde_json::to_string(&EventRecord::from(event)).expect("records always serialize")
}

pub fn parse_event(line: &str) -> Result<SessionEvent, serde_json::Error> {
    let record: EventRecord = serde_json::from_str(line)?;
    Ok((&record).into())
}

pub fn write_log(events: &[SessionEvent]) -> String {
    let mut out = String::new();
    for event in events {
        out.push_str(&format_event(event));
        out.push('\n');
    }
    out
}

/// Parses a log. Blank lines are skipped; sequence numbers are not checked
/// here (replay does that).
pub fn parse_log(text: &str) -> Result<SessionLog, LogError> {
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let event = parse_event(line).map_err(|e| LogError::Malformed {
            line: i + 1,
            message: e.to_string(),
        })?;
        events.push(event);
    }
    Ok(SessionLog::new(events))
}

pub fn read_log(path: &std::path::Path) -> Result<SessionLog, LogError> {
    parse_log(&std::fs::read_to_string(path)?)
}

/// Appends events and flushes them to stable storage.
pub fn append_events(file: &mut std::fs::File, events: &[SessionEvent]) -> io::Result<()> {
    file.write_all(write_log(events).as_bytes())?;
    file.sync_data()
}
