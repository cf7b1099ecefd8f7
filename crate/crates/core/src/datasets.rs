//! Small reference networks compiled into the library.

use crate::graph::{load_edge_list, load_ground_truth, Graph, GroundTruth};

const KARATE_EDGES: &str = include_str!("../data/karate.edges");
const KARATE_FACTIONS: &str = include_str!("../data/karate.truth");

/// Zachary's karate club (34 nodes, 78 edges) with the two post-split
/// factions as ground truth. External ids are the usual 1-based numbers.
pub fn karate() -> (Graph, GroundTruth) {
    let (graph, _) = load_edge_list(KARATE_EDGES.as_bytes()).expect("bundled karate edges");
    let truth = load_ground_truth(KARATE_FACTIONS.as_bytes(), &graph).expect("bundled karate factions");
    (graph, truth)
}
