//! Planted-partition benchmark graphs with a mixing parameter `mu`, and
//! ingestion of externally generated LFR edge/community files.
//!
//! Each node is expected to have `(1 - mu) * avg_degree` edges inside its
//! community and `mu * avg_degree` edges leaving it. Edges are sampled
//! independently per node pair with geometric skipping, so generation is
//! linear in the number of edges produced.

use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{load_edge_list, load_ground_truth, Graph, GroundTruth, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedPartitionSpec {
    pub n: usize,
    pub communities: usize,
    pub avg_degree: f64,
    pub mu: f64,
    pub seed: u64,
}

impl PlantedPartitionSpec {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidSpec(msg));
        if self.communities < 2 {
            return fail(format!("need at least 2 communities, got {}", self.communities));
        }
        if self.n < 3 * self.communities {
            return fail(format!(
                "{} nodes cannot hold {} communities of at least 3 nodes",
                self.n, self.communities
            ));
        }
        if !self.avg_degree.is_finite() || self.avg_degree < 1.0 {
            return fail(format!("avg_degree must be >= 1, got {}", self.avg_degree));
        }
        if !(0.0..1.0).contains(&self.mu) {
            return fail(format!("mu must lie in [0, 1), got {}", self.mu));
        }
        let smallest = self.n / self.communities;
        let internal = (1.0 - self.mu) * self.avg_degree;
        if internal > (smallest - 1) as f64 {
            return fail(format!(
                "communities of {smallest} nodes cannot supply internal degree {internal:.2}"
            ));
        }
        let external = self.mu * self.avg_degree;
        if external > (self.n - smallest - 1) as f64 {
            return fail(format!("external degree {external:.2} exceeds available peers"));
        }
        Ok(())
    }

    /// Community sizes: `n / k`, with the first `n % k` one larger.
    fn sizes(&self) -> Vec<usize> {
        let (base, extra) = (self.n / self.communities, self.n % self.communities);
        (0..self.communities)
            .map(|c| base + usize::from(c < extra))
            .collect()
    }
}

/// Samples a planted-partition graph and its ground truth.
///
/// Nodes are assigned to communities by a seeded shuffle, so community
/// structure is not visible in node ids. Nodes left isolated after sampling
/// are attached to a random member of their own community.
pub fn generate(spec: &PlantedPartitionSpec) -> Result<(Graph, GroundTruth)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let sizes = spec.sizes();
    let mut slots: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect();
    slots.shuffle(&mut rng);
    let membership = slots;

    let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); spec.communities];
    for (u, &c) in membership.iter().enumerate() {
        members[c].push(u);
    }

    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let internal = (1.0 - spec.mu) * spec.avg_degree;
    for block in &members {
        let p = internal / (block.len() - 1) as f64;
        sample_within(block, p, &mut rng, &mut edges);
    }

    let external = spec.mu * spec.avg_degree;
    let mean_size = spec.n as f64 / spec.communities as f64;
    let p_out = external / (spec.n as f64 - mean_size);
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            sample_between(&members[a], &members[b], p_out, &mut rng, &mut edges);
        }
    }

    let mut degree = vec![0usize; spec.n];
    for &(u, v) in &edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    for u in 0..spec.n {
        if degree[u] == 0 {
            let block = &members[membership[u]];
            let peer = loop {
                let v = block[rng.gen_range(0..block.len())];
                if v != u {
                    break v;
                }
            };
            edges.push((u, peer));
            degree[u] += 1;
            degree[peer] += 1;
        }
    }

    let graph = Graph::from_edges(spec.n, edges);
    Ok((graph, GroundTruth::from_membership(membership)))
}

/// Number of trials until the next success, minus one, for success rate `p`.
fn skip<R: Rng>(rng: &mut R, log_q: f64) -> usize {
    let r: f64 = rng.gen();
    ((1.0 - r).ln() / log_q).floor() as usize
}

/// Erdős–Rényi pairs inside one block.
fn sample_within<R: Rng>(block: &[NodeId], p: f64, rng: &mut R, out: &mut Vec<(NodeId, NodeId)>) {
    let s = block.len();
    if p <= 0.0 || s < 2 {
        return;
    }
    if p >= 1.0 {
        for i in 1..s {
            for j in 0..i {
                out.push((block[j], block[i]));
            }
        }
        return;
    }
    // pairs (i, j), j < i, enumerated row by row
    let log_q = (1.0 - p).ln();
    let (mut i, mut j) = (1usize, 0usize);
    let mut first = true;
    loop {
        let step = skip(rng, log_q);
        let mut advance = if first { step } else { step + 1 };
        first = false;
        while i < s && j + advance >= i {
            advance -= i - j;
            i += 1;
            j = 0;
        }
        if i >= s {
            return;
        }
        j += advance;
        out.push((block[j], block[i]));
    }
}

/// Bipartite pairs between two blocks.
fn sample_between<R: Rng>(
    left: &[NodeId],
    right: &[NodeId],
    p: f64,
    rng: &mut R,
    out: &mut Vec<(NodeId, NodeId)>,
) {
    if p <= 0.0 {
        return;
    }
    let total = left.len() * right.len();
    if p >= 1.0 {
        for &u in left {
            for &v in right {
                out.push((u, v));
            }
        }
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut index = skip(rng, log_q);
    while index < total {
        out.push((left[index / right.len()], right[index % right.len()]));
        index += 1 + skip(rng, log_q);
    }
}

/// Loads an LFR-style `network.dat` / `community.dat` pair.
///
/// Both files use the whitespace-separated formats of [`load_edge_list`] and
/// [`load_ground_truth`]; every node of the network must have a community.
pub fn ingest_lfr<E: BufRead, C: BufRead>(edges: E, communities: C) -> Result<(Graph, GroundTruth)> {
    let (graph, _) = load_edge_list(edges)?;
    let truth = load_ground_truth(communities, &graph)?;
    Ok((graph, truth))
}

/// Fraction of edges whose endpoints lie in different ground-truth communities.
pub fn mixing_fraction(g: &Graph, truth: &GroundTruth) -> f64 {
    let m = g.edge_count();
    if m == 0 {
        return 0.0;
    }
    let crossing = g
        .edges()
        .filter(|&(u, v)| truth.community_of(u) != truth.community_of(v))
        .count();
    crossing as f64 / m as f64
}
