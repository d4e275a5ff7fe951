//! The `.vvp` project document: a single JSON file holding media
//! descriptors, the node graph and creator annotations.
//!
//! Serialization is canonical: object keys sorted, nodes ordered by id,
//! media ordered by id, two-space indentation and a trailing newline.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use vvp_core::graph::{
    validate_graph, ForkNode, ForkOption, Issue, IssueCode, MediaDescriptor, Node, QuestionNode,
    SceneNode, ValidationReport, VideoProject,
};
use vvp_core::{MediaId, NodeId};

use crate::wire::{AnnotationDto, Extra};

pub const FORMAT_VERSION: u64 = 1;
pub const EXTENSION: &str = "vvp";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format_version {0} (expected {FORMAT_VERSION})")]
    UnsupportedVersion(u64),
    #[error("unknown field(s): {}", .0.join(", "))]
    UnknownFields(Vec<String>),
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        DocumentError::Syntax {
            line: e.line(),
            column: e.column(),
            message: strip_position(&e),
        }
    }
}

/// serde_json appends " at line L column C" to its messages; the position
/// is reported separately.
fn strip_position(e: &serde_json::Error) -> String {
    let full = e.to_string();
    match full.rfind(" at line ") {
        Some(i) => full[..i].to_string(),
        None => full,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    /// Unknown fields are errors.
    #[default]
    Strict,
    /// Unknown fields are reported and ignored.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedProject {
    pub project: VideoProject,
    /// Graph validation, including duplicate ids found in the document.
    pub report: ValidationReport,
    /// Paths of ignored unknown fields (lenient parsing only).
    pub unknown_fields: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DocumentDto {
    format_version: u64,
    id: String,
    title: String,
    start_node: String,
    #[serde(default)]
    media: Vec<MediaDto>,
    nodes: Vec<NodeDto>,
    #[serde(default)]
    annotations: Vec<AnnotationDto>,
    #[serde(flatten, default, skip_serializing)]
    extra: Extra,
}

#[derive(Debug, Serialize, Deserialize)]
struct MediaDto {
    media_id: String,
    uri: String,
    duration_ms: u64,
    #[serde(default)]
    mime_hint: String,
    #[serde(flatten, default, skip_serializing)]
    extra: Extra,
}

#[derive(Debug, Serialize, Deserialize)]
struct OptionDto {
    option_id: String,
    label: String,
    target: String,
    #[serde(flatten, default, skip_serializing)]
    extra: Extra,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum NodeDto {
    Scene {
        node_id: String,
        media: String,
        title: String,
        #[serde(default)]
        nav_point: bool,
        next: String,
        #[serde(flatten, default, skip_serializing)]
        extra: Extra,
    },
    Fork {
        node_id: String,
        prompt: String,
        #[serde(default)]
        nav_point: bool,
        options: Vec<OptionDto>,
        #[serde(flatten, default, skip_serializing)]
        extra: Extra,
    },
    Question {
        node_id: String,
        prompt: String,
        choices: Vec<String>,
        correct_index: usize,
        #[serde(default)]
        nav_point: bool,
        next: String,
        #[serde(flatten, default, skip_serializing)]
        extra: Extra,
    },
    End {
        node_id: String,
        #[serde(flatten, default, skip_serializing)]
        extra: Extra,
    },
}

impl NodeDto {
    fn node_id(&self) -> &str {
        match self {
            NodeDto::Scene { node_id, .. }
            | NodeDto::Fork { node_id, .. }
            | NodeDto::Question { node_id, .. }
            | NodeDto::End { node_id, .. } => node_id,
        }
    }
}

fn unknown(extra: &Extra, path: &str, out: &mut Vec<String>) {
    out.extend(extra.keys().map(|k| format!("{path}.{k}")));
}

impl DocumentDto {
    fn unknown_fields(&self) -> Vec<String> {
        let mut out = Vec::new();
        out.extend(self.extra.keys().cloned());
        for m in &self.media {
            unknown(&m.extra, &format!("media[{}]", m.media_id), &mut out);
        }
        for n in &self.nodes {
            let path = format!("nodes[{}]", n.node_id());
            match n {
                NodeDto::Fork { options, extra, .. } => {
                    unknown(extra, &path, &mut out);
                    for o in options {
                        unknown(&o.extra, &format!("{path}.options[{}]", o.option_id), &mut out);
                    }
                }
                NodeDto::Scene { extra, .. }
                | NodeDto::Question { extra, .. }
                | NodeDto::End { extra, .. } => unknown(extra, &path, &mut out),
            }
        }
        for a in &self.annotations {
            let path = format!("annotations[{}]", a.annotation_id);
            unknown(&a.extra, &path, &mut out);
            unknown(&a.anchor.extra, &format!("{path}.anchor"), &mut out);
            for (i, b) in a.body.iter().enumerate() {
                unknown(&b.extra, &format!("{path}.body[{i}]"), &mut out);
            }
        }
        out
    }

    /// Builds the project; ids that occur twice keep their first
    /// definition and are reported.
    fn into_project(self) -> (VideoProject, Vec<Issue>) {
        let mut duplicates = Vec::new();
        let mut media_assets = BTreeMap::new();
        for m in self.media {
            let id = MediaId::new(m.media_id);
            if media_assets.contains_key(&id) {
                duplicates.push(Issue::new(
                    IssueCode::DuplicateId,
                    None,
                    format!("media id {id} defined twice"),
                ));
                continue;
            }
            media_assets.insert(
                id.clone(),
                MediaDescriptor {
                    media_id: id,
                    uri: m.uri,
                    duration_ms: m.duration_ms,
                    mime_hint: m.mime_hint,
                },
            );
        }

        let mut nodes = BTreeMap::new();
        for n in self.nodes {
            let id = NodeId::new(n.node_id());
            if nodes.contains_key(&id) {
                duplicates.push(Issue::new(
                    IssueCode::DuplicateId,
                    Some(&id),
                    format!("node id {id} defined twice"),
                ));
                continue;
            }
            let node = match n {
                NodeDto::Scene {
                    media,
                    title,
                    nav_point,
                    next,
                    ..
                } => {
                    let media = MediaId::new(media);
                    Node::Scene(SceneNode {
                        duration_ms: media_assets.get(&media).map_or(0, |m| m.duration_ms),
                        media,
                        title,
                        is_nav_point: nav_point,
                        next: next.into(),
                    })
                }
                NodeDto::Fork {
                    prompt,
                    nav_point,
                    options,
                    ..
                } => Node::Fork(ForkNode {
                    prompt,
                    options: options
                        .into_iter()
                        .map(|o| ForkOption {
                            option_id: o.option_id.into(),
                            label: o.label,
                            target: o.target.into(),
                        })
                        .collect(),
                    is_nav_point: nav_point,
                }),
                NodeDto::Question {
                    prompt,
                    choices,
                    correct_index,
                    nav_point,
                    next,
                    ..
                } => Node::Question(QuestionNode {
                    prompt,
                    choices,
                    correct_index,
                    is_nav_point: nav_point,
                    next: next.into(),
                }),
                NodeDto::End { .. } => Node::End,
            };
            nodes.insert(id, node);
        }

        let project = VideoProject {
            id: self.id,
            title: self.title,
            start_node: self.start_node.into(),
            nodes,
            annotations: self.annotations.iter().map(Into::into).collect(),
            media_assets,
        };
        (project, duplicates)
    }

    fn from_project(project: &VideoProject) -> Self {
        let media = project
            .media_assets
            .values()
            .map(|m| MediaDto {
                media_id: m.media_id.to_string(),
                uri: m.uri.clone(),
                duration_ms: m.duration_ms,
                mime_hint: m.mime_hint.clone(),
                extra: Extra::new(),
            })
            .collect();
        let nodes = project
            .nodes
            .iter()
            .map(|(id, node)| {
                let node_id = id.to_string();
                let extra = Extra::new();
                match node {
                    Node::Scene(s) => NodeDto::Scene {
                        node_id,
                        media: s.media.to_string(),
                        title: s.title.clone(),
                        nav_point: s.is_nav_point,
                        next: s.next.to_string(),
                        extra,
                    },
                    Node::Fork(f) => NodeDto::Fork {
                        node_id,
                        prompt: f.prompt.clone(),
                        nav_point: f.is_nav_point,
                        options: f
                            .options
                            .iter()
                            .map(|o| OptionDto {
                                option_id: o.option_id.to_string(),
                                label: o.label.clone(),
                                target: o.target.to_string(),
                                extra: Extra::new(),
                            })
                            .collect(),
                        extra,
                    },
                    Node::Question(q) => NodeDto::Question {
                        node_id,
                        prompt: q.prompt.clone(),
                        choices: q.choices.clone(),
                        correct_index: q.correct_index,
                        nav_point: q.is_nav_point,
                        next: q.next.to_string(),
                        extra,
                    },
                    Node::End => NodeDto::End { node_id, extra },
                }
            })
            .collect();
        DocumentDto {
            format_version: FORMAT_VERSION,
            id: project.id.clone(),
            title: project.title.clone(),
            start_node: project.start_node.to_string(),
            media,
            nodes,
            annotations: project.annotations.iter().map(Into::into).collect(),
            extra: Extra::new(),
        }
    }
}

/// Parses a document, rejecting unknown fields.
pub fn parse_project(bytes: &[u8]) -> Result<ParsedProject, DocumentError> {
    parse_project_with(bytes, Strictness::Strict)
}

/// Parses a document. Graph problems are returned in the report; only
/// malformed JSON, schema violations, unknown versions and (when strict)
/// unknown fields fail.
pub fn parse_project_with(
    bytes: &[u8],
    strictness: Strictness,
) -> Result<ParsedProject, DocumentError> {
    let value: Value = serde_json::from_slice(bytes)?;
    if let Some(version) = value.get("format_version").and_then(Value::as_u64) {
        if version != FORMAT_VERSION {
            return Err(DocumentError::UnsupportedVersion(version));
        }
    }
    // Parse the bytes again rather than the value so schema errors carry
    // positions.
    let dto: DocumentDto = serde_json::from_slice(bytes)?;
    let unknown_fields = dto.unknown_fields();
    if strictness == Strictness::Strict && !unknown_fields.is_empty() {
        return Err(DocumentError::UnknownFields(unknown_fields));
    }
    let (project, duplicates) = dto.into_project();
    let mut report = validate_graph(&project);
    report.merge(duplicates, Vec::new());
    Ok(ParsedProject {
        project,
        report,
        unknown_fields,
    })
}

/// Canonical document bytes. Scene durations are not written; they come
/// from the scene's media descriptor.
pub fn serialize_project(project: &VideoProject) -> String {
    let value = serde_json::to_value(DocumentDto::from_project(project))
        .expect("document contains only strings, numbers and lists");
    to_canonical(&value)
}

/// Pretty-printed JSON with sorted keys and a trailing newline.
pub(crate) fn to_canonical(value: &Value) -> String {
    // serde_json's default map is ordered by key.
    let mut out = serde_json::to_string_pretty(value).expect("Value always serializes");
    out.push('\n');
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MediaRefKind {
    /// A relative path not among the available files.
    Missing,
    /// A URL; not checked.
    Remote,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MediaRefIssue {
    pub media_id: MediaId,
    pub uri: String,
    pub kind: MediaRefKind,
}

/// Checks every media descriptor against a set of available relative file
/// paths (using `/` separators).
pub fn check_media_refs(project: &VideoProject, available: &BTreeSet<String>) -> Vec<MediaRefIssue> {
    project
        .media_assets
        .values()
        .filter_map(|m| {
            let kind = if m.is_url() {
                MediaRefKind::Remote
            } else if available.contains(normalize(&m.uri).as_str()) {
                return None;
            } else {
                MediaRefKind::Missing
            };
            Some(MediaRefIssue {
                media_id: m.media_id.clone(),
                uri: m.uri.clone(),
                kind,
            })
        })
        .collect()
}

fn normalize(uri: &str) -> String {
    uri.trim_start_matches("./").replace('\\', "/")
}

/// [`check_media_refs`] against the files that exist relative to `base`.
pub fn check_media_files(project: &VideoProject, base: &Path) -> Vec<MediaRefIssue> {
    let available = project
        .media_assets
        .values()
        .filter(|m| !m.is_url() && base.join(&m.uri).is_file())
        .map(|m| normalize(&m.uri))
        .collect();
    check_media_refs(project, &available)
}
