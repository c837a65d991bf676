//! Whitehead graphs, Whitehead moves, and separability tests.

mod free;
mod graph;
mod labeled;
mod moves;

pub use free::{is_separable_free, is_separable_free_with_budget, minimize, SeparabilityCertificate, DEFAULT_LEVEL_BUDGET};
pub use graph::{whitehead_graph, WhiteheadGraph};
pub use labeled::{
    classify_graph, classify_labeled, has_strong_cutpoint, is_strongly_connected, labeled_whitehead_graph, DiscSide,
    LabeledEdge, LabeledVerdict, LabeledWhiteheadGraph, CUTPOINT_PARTITION_BUDGET,
};
pub use moves::{Action, WhiteheadMove};
