//! The bundled sample project: rural product ordering and delivery, told as
//! two sets of three alternative variants with six comprehension questions.
//!
//! ```text
//! s_intro -> q_intro -> s_village -> q_village -> f_order
//!   f_order: app    -> s_order_app -> q_order_app -> s_order_confirm
//!            button -> s_order_button -> s_order_confirm
//!            auto   -> s_order_auto -> s_order_confirm
//! s_order_confirm -> q_order -> f_delivery
//!   f_delivery: neighbor -> s_deliv_neighbor -> s_outro
//!               drone    -> s_deliv_drone -> q_drone -> s_outro
//!               trunk    -> s_deliv_trunk -> s_outro
//! s_outro -> q_outro -> end
//! ```
//!
//! Every scene and both forks are navigation points; `q_order_app` and
//! `q_drone` are only reachable through one specific option.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{
    AnchorRange, Annotation, AuthorKind, BodyItem, ForkNode, ForkOption, MediaDescriptor, Node,
    QuestionNode, SceneNode, VideoProject,
};
use crate::{MediaId, NodeId};

const SCENES: &[(&str, &str, u64, &str)] = &[
    ("s_intro", "A village far from the city", 45_000, "q_intro"),
    ("s_village", "Running out of supplies", 30_000, "q_village"),
    ("s_order_app", "Ordering by photo in the app", 40_000, "q_order_app"),
    ("s_order_button", "Ordering with a dedicated button", 35_000, "s_order_confirm"),
    ("s_order_auto", "Automatic order from the fill level", 38_000, "s_order_confirm"),
    ("s_order_confirm", "The order is confirmed", 20_000, "q_order"),
    ("s_deliv_neighbor", "Pickup from a neighbour", 50_000, "s_outro"),
    ("s_deliv_drone", "Delivery by drone", 42_000, "q_drone"),
    ("s_deliv_trunk", "Drop into the car trunk", 47_000, "s_outro"),
    ("s_outro", "Supplies restocked", 25_000, "q_outro"),
];

fn question(prompt: &str, choices: &[&str], correct_index: usize, next: &str) -> Node {
    Node::Question(QuestionNode {
        prompt: prompt.into(),
        choices: choices.iter().map(|c| String::from(*c)).collect(),
        correct_index,
        is_nav_point: false,
        next: next.into(),
    })
}

fn fork(prompt: &str, options: &[(&str, &str, &str)]) -> Node {
    Node::Fork(ForkNode {
        prompt: prompt.into(),
        options: options
            .iter()
            .map(|(id, label, target)| ForkOption {
                option_id: (*id).into(),
                label: (*label).into(),
                target: (*target).into(),
            })
            .collect(),
        is_nav_point: true,
    })
}

pub fn delivery_project() -> VideoProject {
    let mut nodes: BTreeMap<NodeId, Node> = BTreeMap::new();
    let mut media_assets = BTreeMap::new();
    for &(id, title, duration_ms, next) in SCENES {
        let media = MediaId::from(format!("m_{id}"));
        media_assets.insert(
            media.clone(),
            MediaDescriptor {
                media_id: media.clone(),
                uri: format!("media/{id}.mp4"),
                duration_ms,
                mime_hint: "video/mp4".into(),
            },
        );
        nodes.insert(
            id.into(),
            Node::Scene(SceneNode {
                media,
                duration_ms,
                title: title.into(),
                is_nav_point: true,
                next: next.into(),
            }),
        );
    }

    let questions: Vec<(&str, Node)> = vec![
        (
            "q_intro",
            question(
                "Why is shopping difficult for the villagers?",
                &["The next store is far away", "Stores are too expensive", "There is no internet"],
                0,
                "s_village",
            ),
        ),
        (
            "q_village",
            question(
                "What does the customer run out of?",
                &["Coffee", "Printer paper", "Garden seeds"],
                0,
                "f_order",
            ),
        ),
        (
            "q_order_app",
            question(
                "What does the app need to place an order?",
                &["A photo of the product", "The product's barcode number", "A voice message"],
                0,
                "s_order_confirm",
            ),
        ),
        (
            "q_order",
            question(
                "How is the customer informed about the order?",
                &["A confirmation on the phone", "A letter", "A phone call"],
                0,
                "f_delivery",
            ),
        ),
        (
            "q_drone",
            question(
                "Where does the drone leave the package?",
                &["On the roof", "In the garden", "At the post office"],
                1,
                "s_outro",
            ),
        ),
        (
            "q_outro",
            question(
                "Who benefits most from the envisioned system?",
                &["Villagers without a car", "City retailers", "Parcel services"],
                0,
                "end",
            ),
        ),
    ];
    nodes.extend(questions.into_iter().map(|(id, node)| (NodeId::from(id), node)));

    nodes.insert(
        "f_order".into(),
        fork(
            "How should the product be ordered?",
            &[
                ("app", "Take a photo in the app", "s_order_app"),
                ("button", "Press the order button", "s_order_button"),
                ("auto", "Order automatically by fill level", "s_order_auto"),
            ],
        ),
    );
    nodes.insert(
        "f_delivery".into(),
        fork(
            "How should the package be delivered?",
            &[
                ("neighbor", "A neighbour brings it from the city", "s_deliv_neighbor"),
                ("drone", "A drone delivers it", "s_deliv_drone"),
                ("trunk", "The postman uses the car trunk", "s_deliv_trunk"),
            ],
        ),
    );
    nodes.insert("end".into(), Node::End);

    let annotations = vec![
        Annotation {
            annotation_id: "a_fill_sensor".into(),
            author_kind: AuthorKind::Creator,
            anchor: AnchorRange {
                node: "s_order_auto".into(),
                start_ms: 5_000,
                end_ms: 30_000,
            },
            title: "Fill-level sensor".into(),
            body: vec![
                BodyItem::Text("A scale under the shelf reports the remaining amount.".into()),
                BodyItem::Image("images/fill_sensor.png".into()),
            ],
            created_at: None,
        },
        Annotation {
            annotation_id: "a_drone_specs".into(),
            author_kind: AuthorKind::Creator,
            anchor: AnchorRange {
                node: "s_deliv_drone".into(),
                start_ms: 0,
                end_ms: 42_000,
            },
            title: "Drone properties".into(),
            body: vec![
                BodyItem::Text("Range 20 km, payload up to 2 kg.".into()),
                BodyItem::Link("https://example.org/drone-delivery".into()),
                BodyItem::File("docs/drone_regulations.pdf".into()),
            ],
            created_at: None,
        },
    ];

    VideoProject {
        id: "rural-delivery".into(),
        title: "Ordering and delivery in rural areas".into(),
        start_node: "s_intro".into(),
        nodes,
        annotations,
        media_assets,
    }
}
