//! JSON shapes shared by project documents, session logs, bundles and the
//! HTTP API, with conversions to and from the core types.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use vvp_core::graph::{AnchorRange, Annotation, AuthorKind, BodyItem};
use vvp_core::session::{EventKind, Playhead, SessionEvent};
use vvp_core::Timestamp;

use crate::time::rfc3339;

/// Fields not in the schema, kept so strict parsing can report them.
pub(crate) type Extra = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorDto {
    pub node: String,
    pub start_ms: u64,
    pub end_ms: u64,
    #[serde(flatten, default, skip_serializing)]
    pub(crate) extra: Extra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyType {
    Text,
    Link,
    Image,
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyItemDto {
    #[serde(rename = "type")]
    pub kind: BodyType,
    pub value: String,
    #[serde(flatten, default, skip_serializing)]
    pub(crate) extra: Extra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuthorKindDto {
    Creator,
    Viewer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationDto {
    pub annotation_id: String,
    pub author_kind: AuthorKindDto,
    pub anchor: AnchorDto,
    pub title: String,
    #[serde(default)]
    pub body: Vec<BodyItemDto>,
    #[serde(
        default,
        with = "rfc3339::option",
        skip_serializing_if = "Option::is_none"
    )]
    pub created_at: Option<Timestamp>,
    #[serde(flatten, default, skip_serializing)]
    pub(crate) extra: Extra,
}

impl From<&AnchorRange> for AnchorDto {
    fn from(a: &AnchorRange) -> Self {
        Self {
            node: a.node.to_string(),
            start_ms: a.start_ms,
            end_ms: a.end_ms,
            extra: Extra::new(),
        }
    }
}

impl From<&AnchorDto> for AnchorRange {
    fn from(a: &AnchorDto) -> Self {
        Self {
            node: a.node.as_str().into(),
            start_ms: a.start_ms,
            end_ms: a.end_ms,
        }
    }
}

impl From<&BodyItem> for BodyItemDto {
    fn from(item: &BodyItem) -> Self {
        let (kind, value) = match item {
            BodyItem::Text(v) => (BodyType::Text, v),
            BodyItem::Link(v) => (BodyType::Link, v),
            BodyItem::Image(v) => (BodyType::Image, v),
            BodyItem::File(v) => (BodyType::File, v),
        };
        Self {
            kind,
            value: value.clone(),
            extra: Extra::new(),
        }
    }
}

impl From<&BodyItemDto> for BodyItem {
    fn from(item: &BodyItemDto) -> Self {
        let value = item.value.clone();
        match item.kind {
            BodyType::Text => BodyItem::Text(value),
            BodyType::Link => BodyItem::Link(value),
            BodyType::Image => BodyItem::Image(value),
            BodyType::File => BodyItem::File(value),
        }
    }
}

impl From<&Annotation> for AnnotationDto {
    fn from(a: &Annotation) -> Self {
        Self {
            annotation_id: a.annotation_id.to_string(),
            author_kind: match a.author_kind {
                AuthorKind::Creator => AuthorKindDto::Creator,
                AuthorKind::Viewer => AuthorKindDto::Viewer,
            },
            anchor: (&a.anchor).into(),
            title: a.title.clone(),
            body: a.body.iter().map(Into::into).collect(),
            created_at: a.created_at,
            extra: Extra::new(),
        }
    }
}

impl From<&AnnotationDto> for Annotation {
    fn from(a: &AnnotationDto) -> Self {
        Self {
            annotation_id: a.annotation_id.as_str().into(),
            author_kind: match a.author_kind {
                AuthorKindDto::Creator => AuthorKind::Creator,
                AuthorKindDto::Viewer => AuthorKind::Viewer,
            },
            anchor: (&a.anchor).into(),
            title: a.title.clone(),
            body: a.body.iter().map(Into::into).collect(),
            created_at: a.created_at,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayheadDto {
    pub node: String,
    pub offset_ms: u64,
}

impl From<&Playhead> for PlayheadDto {
    fn from(p: &Playhead) -> Self {
        Self {
            node: p.node.to_string(),
            offset_ms: p.offset_ms,
        }
    }
}

impl From<&PlayheadDto> for Playhead {
    fn from(p: &PlayheadDto) -> Self {
        Playhead::new(p.node.as_str(), p.offset_ms)
    }
}

/// Event kind and its payload, serialized as `"kind": ..., "payload": {...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum EventBody {
    SessionStarted {
        session_id: String,
        project_id: String,
        viewer_id: String,
    },
    PlaybackResumed {},
    PlaybackPaused {},
    SceneEntered {
        node: String,
    },
    QuestionPresented {
        node: String,
    },
    QuestionAnswered {
        node: String,
        chosen_index: usize,
        correct: bool,
    },
    ForkPresented {
        node: String,
    },
    ChoosePath {
        node: String,
        option: String,
    },
    OverviewOpened {},
    OverviewNavigated {
        target: String,
    },
    OverviewClosed {},
    AnnotationsShown {},
    AnnotationsHidden {},
    AnnotationExpanded {
        annotation_id: String,
    },
    AnnotationCollapsed {
        annotation_id: String,
    },
    ViewerAnnotationAdded(AnnotationDto),
    CommentAdded {
        text: String,
    },
    Seeked {
        from: PlayheadDto,
        to: PlayheadDto,
    },
    SessionEnded {},
}

/// One line of a session log. Field order is the canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub seq: u64,
    #[serde(with = "rfc3339")]
    pub wall_time: Timestamp,
    pub node: String,
    pub offset_ms: u64,
    #[serde(flatten)]
    pub body: EventBody,
}

impl From<&EventKind> for EventBody {
    fn from(kind: &EventKind) -> Self {
        let s = |id: &dyn std::fmt::Display| id.to_string();
        match kind {
            EventKind::SessionStarted {
                session_id,
                project_id,
                viewer_id,
            } => EventBody::SessionStarted {
                session_id: session_id.clone(),
                project_id: project_id.clone(),
                viewer_id: viewer_id.clone(),
            },
            EventKind::PlaybackResumed => EventBody::PlaybackResumed {},
            EventKind::PlaybackPaused => EventBody::PlaybackPaused {},
            EventKind::SceneEntered(n) => EventBody::SceneEntered { node: s(n) },
            EventKind::QuestionPresented(n) => EventBody::QuestionPresented { node: s(n) },
            EventKind::QuestionAnswered {
                node,
                chosen_index,
                correct,
            } => EventBody::QuestionAnswered {
                node: s(node),
                chosen_index: *chosen_index,
                correct: *correct,
            },
            EventKind::ForkPresented(n) => EventBody::ForkPresented { node: s(n) },
            EventKind::ChoosePath { node, option } => EventBody::ChoosePath {
                node: s(node),
                option: s(option),
            },
            EventKind::OverviewOpened => EventBody::OverviewOpened {},
            EventKind::OverviewNavigated(n) => EventBody::OverviewNavigated { target: s(n) },
            EventKind::OverviewClosed => EventBody::OverviewClosed {},
            EventKind::AnnotationsShown => EventBody::AnnotationsShown {},
            EventKind::AnnotationsHidden => EventBody::AnnotationsHidden {},
            EventKind::AnnotationExpanded(a) => EventBody::AnnotationExpanded {
                annotation_id: s(a),
            },
            EventKind::AnnotationCollapsed(a) => EventBody::AnnotationCollapsed {
                annotation_id: s(a),
            },
            EventKind::ViewerAnnotationAdded(a) => EventBody::ViewerAnnotationAdded(a.into()),
            EventKind::CommentAdded(text) => EventBody::CommentAdded { text: text.clone() },
            EventKind::Seeked { from, to } => EventBody::Seeked {
                from: from.into(),
                to: to.into(),
            },
            EventKind::SessionEnded => EventBody::SessionEnded {},
        }
    }
}

impl From<&EventBody> for EventKind {
    fn from(body: &EventBody) -> Self {
        let n = |id: &String| id.as_str().into();
        match body {
            EventBody::SessionStarted {
                session_id,
                project_id,
                viewer_id,
            } => EventKind::SessionStarted {
                session_id: session_id.clone(),
                project_id: project_id.clone(),
                viewer_id: viewer_id.clone(),
            },
            EventBody::PlaybackResumed {} => EventKind::PlaybackResumed,
            EventBody::PlaybackPaused {} => EventKind::PlaybackPaused,
            EventBody::SceneEntered { node } => EventKind::SceneEntered(n(node)),
            EventBody::QuestionPresented { node } => EventKind::QuestionPresented(n(node)),
            EventBody::QuestionAnswered {
                node,
                chosen_index,
                correct,
            } => EventKind::QuestionAnswered {
                node: n(node),
                chosen_index: *chosen_index,
                correct: *correct,
            },
            EventBody::ForkPresented { node } => EventKind::ForkPresented(n(node)),
            EventBody::ChoosePath { node, option } => EventKind::ChoosePath {
                node: n(node),
                option: option.as_str().into(),
            },
            EventBody::OverviewOpened {} => EventKind::OverviewOpened,
            EventBody::OverviewNavigated { target } => EventKind::OverviewNavigated(n(target)),
            EventBody::OverviewClosed {} => EventKind::OverviewClosed,
            EventBody::AnnotationsShown {} => EventKind::AnnotationsShown,
            EventBody::AnnotationsHidden {} => EventKind::AnnotationsHidden,
            EventBody::AnnotationExpanded { annotation_id } => {
                EventKind::AnnotationExpanded(annotation_id.as_str().into())
            }
            EventBody::AnnotationCollapsed { annotation_id } => {
                EventKind::AnnotationCollapsed(annotation_id.as_str().into())
            }
            EventBody::ViewerAnnotationAdded(a) => EventKind::ViewerAnnotationAdded(a.into()),
            EventBody::CommentAdded { text } => EventKind::CommentAdded(text.clone()),
            EventBody::Seeked { from, to } => EventKind::Seeked {
                from: from.into(),
                to: to.into(),
            },
            EventBody::SessionEnded {} => EventKind::SessionEnded,
        }
    }
}

impl From<&SessionEvent> for EventRecord {
    fn from(e: &SessionEvent) -> Self {
        Self {
            seq: e.seq,
            wall_time: e.wall_time,
            node: e.playhead.node.to_string(),
            offset_ms: e.playhead.offset_ms,
            body: (&e.kind).into(),
        }
    }
}

impl From<&EventRecord> for SessionEvent {
    fn from(r: &EventRecord) -> Self {
        Self {
            seq: r.seq,
            wall_time: r.wall_time,
            playhead: Playhead::new(r.node.as_str(), r.offset_ms),
            kind: (&r.body).into(),
        }
    }
}
