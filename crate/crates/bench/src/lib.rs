//! Fixed benchmark inputs, shared by the criterion targets.

use ililpa::{datasets, generate, Graph, PlantedPartitionSpec};

/// Planted-partition graph with `n` nodes, 20 communities, average degree 10.
pub fn planted(n: usize, mu: f64) -> Graph {
    let spec = PlantedPartitionSpec {
        n,
        communities: 20,
        avg_degree: 10.0,
        mu,
        seed: 1,
    };
    generate(&spec).expect("valid benchmark spec").0
}

pub fn karate() -> Graph {
    datasets::karate().0
}
