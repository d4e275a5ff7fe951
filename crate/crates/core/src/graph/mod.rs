//! The branching project graph: scenes, forks, questions and end nodes,
//! plus the annotations and navigation points layered on top of it.

mod traverse;
mod validate;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{AnnotationId, MediaId, NodeId, OptionId, Timestamp};

pub use traverse::{
    enumerate_branch_paths, navigation_points, reachable_nodes, BranchPath, BranchPaths,
    GraphError,
};
pub use validate::{validate_graph, Issue, IssueCode, ValidationReport};

/// A complete interactive vision video.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VideoProject {
    pub id: String,
    pub title: String,
    pub start_node: NodeId,
    pub nodes: BTreeMap<NodeId, Node>,
    /// Creator annotations. Viewer annotations live in session logs.
    pub annotations: Vec<Annotation>,
    pub media_assets: BTreeMap<MediaId, MediaDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Scene(SceneNode),
    Fork(ForkNode),
    Question(QuestionNode),
    End,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneNode {
    pub media: MediaId,
    pub duration_ms: u64,
    pub title: String,
    pub is_nav_point: bool,
    pub next: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForkNode {
    pub prompt: String,
    /// Author order, which is also display order.
    pub options: Vec<ForkOption>,
    pub is_nav_point: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionNode {
    pub prompt: String,
    pub choices: Vec<String>,
    pub correct_index: usize,
    pub is_nav_point: bool,
    pub next: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForkOption {
    pub option_id: OptionId,
    pub label: String,
    pub target: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AuthorKind {
    Creator,
    Viewer,
}

/// A span of a node's media, in milliseconds from the start of that node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AnchorRange {
    pub node: NodeId,
    pub start_ms: u64,
    pub end_ms: u64,
}

impl AnchorRange {
    pub fn contains(&self, node: &NodeId, offset_ms: u64) -> bool {
        &self.node == node && self.start_ms <= offset_ms && offset_ms <= self.end_ms
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BodyItem {
    Text(String),
    Link(String),
    Image(String),
    File(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub annotation_id: AnnotationId,
    pub author_kind: AuthorKind,
    pub anchor: AnchorRange,
    pub title: String,
    pub body: Vec<BodyItem>,
    /// Set for viewer annotations only.
    pub created_at: Option<Timestamp>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MediaDescriptor {
    pub media_id: MediaId,
    /// Relative file path or absolute URL.
    pub uri: String,
    pub duration_ms: u64,
    pub mime_hint: String,
}

impl MediaDescriptor {
    pub fn is_url(&self) -> bool {
        self.uri.contains("://")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NavCategory {
    Scene,
    Path,
    Question,
}

impl NavCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            NavCategory::Scene => "scene",
            NavCategory::Path => "path",
            NavCategory::Question => "question",
        }
    }
}

/// An entry of the scene overview.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NavigationPoint {
    pub node: NodeId,
    pub timeline_position_ms: u64,
    pub title: String,
    pub category: NavCategory,
}

impl Node {
    /// Outgoing edges in author order.
    pub fn successors(&self) -> impl Iterator<Item = &NodeId> + '_ {
        let (single, options): (Option<&NodeId>, &[ForkOption]) = match self {
            Node::Scene(s) => (Some(&s.next), &[]),
            Node::Question(q) => (Some(&q.next), &[]),
            Node::Fork(f) => (None, &f.options),
            Node::End => (None, &[]),
        };
        single.into_iter().chain(options.iter().map(|o| &o.target))
    }

    /// Playback length; zero for everything that is not a scene.
    pub fn duration_ms(&self) -> u64 {
        match self {
            Node::Scene(s) => s.duration_ms,
            _ => 0,
        }
    }

    pub fn is_nav_point(&self) -> bool {
        match self {
            Node::Scene(s) => s.is_nav_point,
            Node::Fork(f) => f.is_nav_point,
            Node::Question(q) => q.is_nav_point,
            Node::End => false,
        }
    }

    pub fn nav_category(&self) -> Option<NavCategory> {
        match self {
            Node::Scene(_) => Some(NavCategory::Scene),
            Node::Fork(_) => Some(NavCategory::Path),
            Node::Question(_) => Some(NavCategory::Question),
            Node::End => None,
        }
    }

    /// Human-readable label used in listings and the overview.
    pub fn label(&self) -> &str {
        match self {
            Node::Scene(s) => &s.title,
            Node::Fork(f) => &f.prompt,
            Node::Question(q) => &q.prompt,
            Node::End => "end",
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Node::Scene(_) => "scene",
            Node::Fork(_) => "fork",
            Node::Question(_) => "question",
            Node::End => "end",
        }
    }
}

impl VideoProject {
    pub fn node(&self, id: &NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn question_count(&self) -> usize {
        self.nodes
            .values()
            .filter(|n| matches!(n, Node::Question(_)))
            .count()
    }

    pub fn fork(&self, id: &NodeId) -> Option<&ForkNode> {
        match self.nodes.get(id) {
            Some(Node::Fork(f)) => Some(f),
            _ => None,
        }
    }

    pub fn question(&self, id: &NodeId) -> Option<&QuestionNode> {
        match self.nodes.get(id) {
            Some(Node::Question(q)) => Some(q),
            _ => None,
        }
    }

    pub fn annotation(&self, id: &AnnotationId) -> Option<&Annotation> {
        self.annotations.iter().find(|a| &a.annotation_id == id)
    }
}
