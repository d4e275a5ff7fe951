use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{AnchorRange, BodyItem};
use crate::session::{EventKind, SessionLog};
use crate::{NodeId, Timestamp};

/// One viewer-authored note. Comments appear with the title "comment" and a
/// single text body, anchored at the playhead where they were written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigestEntry {
    pub anchor: AnchorRange,
    pub session_id: String,
    pub viewer_id: String,
    pub title: String,
    pub body: Vec<BodyItem>,
    pub created_at: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigestGroup {
    pub node: NodeId,
    pub entries: Vec<DigestEntry>,
}

pub fn annotation_digest(logs: &[SessionLog]) -> Vec<DigestGroup> {
    let mut entries = Vec::new();
    for log in logs {
        let session_id = log.session_id().unwrap_or_default();
        let viewer_id = log.viewer_id().unwrap_or_default();
        for event in &log.events {
            let (anchor, title, body) = match &event.kind {
                EventKind::ViewerAnnotationAdded(a) => {
                    (a.anchor.clone(), a.title.clone(), a.body.clone())
                }
                EventKind::CommentAdded(text) => (
                    AnchorRange {
                        node: event.playhead.node.clone(),
                        start_ms: event.playhead.offset_ms,
                        end_ms: event.playhead.offset_ms,
                    },
                    String::from("comment"),
                    vec![BodyItem::Text(text.clone())],
                ),
                _ => continue,
            };
            entries.push((
                event.seq,
                DigestEntry {
                    anchor,
                    session_id: session_id.into(),
                    viewer_id: viewer_id.into(),
                    title,
                    body,
                    created_at: event.wall_time,
                },
            ));
        }
    }
    entries.sort_by(|(seq_a, a), (seq_b, b)| {
        (&a.anchor.node, a.created_at, &a.session_id, seq_a)
            .cmp(&(&b.anchor.node, b.created_at, &b.session_id, seq_b))
    });

    let mut groups: Vec<DigestGroup> = Vec::new();
    for (_, entry) in entries {
        match groups.last_mut() {
            Some(g) if g.node == entry.anchor.node => g.entries.push(entry),
            _ => groups.push(DigestGroup {
                node: entry.anchor.node.clone(),
                entries: vec![entry],
            }),
        }
    }
    groups
}
