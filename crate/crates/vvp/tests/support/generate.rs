//! Proptest strategies for arbitrary (not necessarily valid) projects.

use std::collections::BTreeMap;

use proptest::collection::{btree_map, vec};
use proptest::option;
use proptest::prelude::*;
use vvp_core::graph::{
    AnchorRange, Annotation, AuthorKind, BodyItem, ForkNode, ForkOption, MediaDescriptor, Node,
    QuestionNode, SceneNode, VideoProject,
};
use vvp_core::{MediaId, NodeId, Timestamp};

fn text() -> impl Strategy<Value = String> {
    "\\PC{0,12}"
}

fn node_ref() -> impl Strategy<Value = NodeId> {
    "n[0-9]|end|x".prop_map(NodeId::from)
}

fn media() -> impl Strategy<Value = BTreeMap<MediaId, MediaDescriptor>> {
    btree_map(
        "m[0-5]",
        (
            prop_oneof!["media/[a-z]{1,6}\\.mp4", "https://example\\.org/[a-z]{1,6}"],
            0u64..200_000,
            prop_oneof![Just(String::new()), Just("video/mp4".to_string())],
        ),
        0..4,
    )
    .prop_map(|m| {
        m.into_iter()
            .map(|(id, (uri, duration_ms, mime_hint))| {
                let media_id = MediaId::from(id);
                (
                    media_id.clone(),
                    MediaDescriptor {
                        media_id,
                        uri,
                        duration_ms,
                        mime_hint,
                    },
                )
            })
            .collect()
    })
}

#[derive(Debug, Clone)]
enum Shape {
    Scene(String, String, bool, NodeId),
    Fork(String, bool, Vec<(String, String, NodeId)>),
    Question(String, Vec<String>, usize, bool, NodeId),
    End,
}

fn shape() -> impl Strategy<Value = Shape> {
    prop_oneof![
        ("m[0-6]", text(), any::<bool>(), node_ref())
            .prop_map(|(m, t, nav, next)| Shape::Scene(m, t, nav, next)),
        (text(), any::<bool>(), vec(("[a-z]{1,5}", text(), node_ref()), 0..4))
            .prop_map(|(p, nav, o)| Shape::Fork(p, nav, o)),
        (text(), vec(text(), 0..5), 0usize..6, any::<bool>(), node_ref())
            .prop_map(|(p, c, i, nav, next)| Shape::Question(p, c, i, nav, next)),
        Just(Shape::End),
    ]
}

fn body_item() -> impl Strategy<Value = BodyItem> {
    (0..4, text()).prop_map(|(k, v)| match k {
        0 => BodyItem::Text(v),
        1 => BodyItem::Link(v),
        2 => BodyItem::Image(v),
        _ => BodyItem::File(v),
    })
}

fn annotation() -> impl Strategy<Value = Annotation> {
    (
        "a[0-9]{1,2}",
        any::<bool>(),
        node_ref(),
        0u64..100_000,
        0u64..100_000,
        text(),
        vec(body_item(), 0..3),
        option::of(0i64..4_000_000_000_000),
    )
        .prop_map(|(id, creator, node, start_ms, end_ms, title, body, created)| Annotation {
            annotation_id: id.into(),
            author_kind: if creator {
                AuthorKind::Creator
            } else {
                AuthorKind::Viewer
            },
            anchor: AnchorRange {
                node,
                start_ms,
                end_ms,
            },
            title,
            body,
            created_at: created.map(Timestamp),
        })
}

/// Projects whose scene durations agree with their media descriptors, the
/// only constraint the document format imposes on the in-memory model.
pub fn project() -> impl Strategy<Value = VideoProject> {
    (
        "[a-z0-9-]{1,10}",
        text(),
        node_ref(),
        media(),
        btree_map(node_ref(), shape(), 1..8),
        vec(annotation(), 0..4),
    )
        .prop_map(|(id, title, start_node, media_assets, shapes, annotations)| {
            let nodes = shapes
                .into_iter()
                .map(|(nid, s)| {
                    let node = match s {
                        Shape::Scene(m, title, is_nav_point, next) => {
                            let media = MediaId::from(m);
                            Node::Scene(SceneNode {
                                duration_ms: media_assets.get(&media).map_or(0, |d| d.duration_ms),
                                media,
                                title,
                                is_nav_point,
                                next,
                            })
                        }
                        Shape::Fork(prompt, is_nav_point, options) => Node::Fork(ForkNode {
                            prompt,
                            options: options
                                .into_iter()
                                .map(|(o, label, target)| ForkOption {
                                    option_id: o.into(),
                                    label,
                                    target,
                                })
                                .collect(),
                            is_nav_point,
                        }),
                        Shape::Question(prompt, choices, correct_index, is_nav_point, next) => {
                            Node::Question(QuestionNode {
                                prompt,
                                choices,
                                correct_index,
                                is_nav_point,
                                next,
                            })
                        }
                        Shape::End => Node::End,
                    };
                    (nid, node)
                })
                .collect();
            VideoProject {
                id,
                title,
                start_node,
                nodes,
                annotations,
                media_assets,
            }
        })
}
