//! Asynchronous label propagation with two initializations: one unique label
//! per node (plain LPA), or identical labels seeded along strongly similar
//! links (ILI-LPA).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::metrics::Partition;
use crate::similarity::{compute_tsi_table, Beta, TsiTable};

pub const DEFAULT_MAX_ITER: usize = 100;

/// Label per node. Label values are always ids of nodes in the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labeling {
    labels: Vec<NodeId>,
    generation: usize,
}

impl Labeling {
    pub fn from_labels(labels: Vec<NodeId>) -> Self {
        Labeling {
            labels,
            generation: 0,
        }
    }

    pub fn labels(&self) -> &[NodeId] {
        &self.labels
    }

    pub fn label(&self, u: NodeId) -> NodeId {
        self.labels[u]
    }

    /// Number of propagation passes applied since initialization.
    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn distinct_labels(&self) -> usize {
        let mut seen = vec![false; self.labels.len()];
        self.labels
            .iter()
            .filter(|&&l| !std::mem::replace(&mut seen[l], true))
            .count()
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_labels(&self.labels)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub labeling: Labeling,
    pub iterations: usize,
    pub converged: bool,
    pub seed: u64,
}

impl RunReport {
    pub fn partition(&self) -> Partition {
        self.labeling.to_partition()
    }
}

/// How a node weighs its neighbors' labels.
#[derive(Clone, Copy, Debug, Default)]
pub enum Vote<'a> {
    /// Plain neighbor majority.
    #[default]
    Unweighted,
    /// Experimental: neighbor `j` votes for node `i` with weight `tsi(j, i)`.
    TsiWeighted(&'a TsiTable),
}

/// Every node starts in its own community.
pub fn init_unique(g: &Graph) -> Labeling {
    Labeling::from_labels(g.nodes().collect())
}

/// Identical-label initialization.
///
/// Starting from unique labels, nodes `i` are visited in ascending id and,
/// for each neighbor `j` in ascending id, `j` takes the current label of `i`
/// when `tsi(i, j) >= tsi(j, i)` and `tsi(i, j) >= beta`. Labels assigned
/// earlier in the pass are read back, so seeds chain transitively.
pub fn init_identical(g: &Graph, table: &TsiTable, beta: Beta) -> Labeling {
    let mut labels: Vec<NodeId> = g.nodes().collect();
    for i in g.nodes() {
        let row = table.row(g, i);
        for (&j, &forward) in g.neighbors(i).iter().zip(row) {
            let backward = table.get(g, j, i).expect("adjacency is symmetric");
            if forward >= backward && forward.at_least(beta) {
                labels[j] = labels[i];
            }
        }
    }
    Labeling::from_labels(labels)
}

/// Runs asynchronous propagation from `start` until a full pass changes
/// nothing and every node holds a majority label, or `max_iter` passes.
///
/// Each pass visits the nodes in a fresh seeded random order. A node adopts
/// the most frequent label among its neighbors; among several equally
/// frequent labels it keeps its own if present, otherwise picks one
/// uniformly at random.
pub fn propagate(g: &Graph, start: Labeling, seed: u64, max_iter: usize) -> Result<RunReport> {
    propagate_with(g, start, seed, max_iter, Vote::Unweighted)
}

pub fn propagate_with(
    g: &Graph,
    start: Labeling,
    seed: u64,
    max_iter: usize,
    vote: Vote<'_>,
) -> Result<RunReport> {
    if max_iter == 0 {
        return Err(Error::InvalidMaxIter);
    }
    assert_eq!(start.len(), g.node_count(), "labeling does not match graph");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels = start.labels;
    let mut order: Vec<NodeId> = g.nodes().collect();
    let mut tally = Tally::new(g.node_count());
    let mut best = Vec::new();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        order.shuffle(&mut rng);
        let mut changes = 0usize;
        for &u in &order {
            match vote {
                Vote::Unweighted => tally.majority(g, u, &labels, &mut best),
                Vote::TsiWeighted(table) => tally.weighted_majority(g, u, &labels, table, &mut best),
            }
            let chosen = match best.len() {
                0 => continue,
                1 => best[0],
                // a label already among the maxima is kept
                _ if best.contains(&labels[u]) => labels[u],
                k => best[rng.gen_range(0..k)],
            };
            if chosen != labels[u] {
                labels[u] = chosen;
                changes += 1;
            }
        }
        if changes == 0 && is_majority_fixed_point(g, &labels) {
            converged = true;
            break;
        }
    }

    Ok(RunReport {
        labeling: Labeling {
            labels,
            generation: start.generation + iterations,
        },
        iterations,
        converged,
        seed,
    })
}

/// Scratch space for counting neighbor labels without reallocating.
struct Tally {
    counts: Vec<u32>,
    weights: Vec<f64>,
    touched: Vec<NodeId>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            counts: vec![0; n],
            weights: Vec::new(),
            touched: Vec::new(),
        }
    }

    /// Fills `best` with the maximal-frequency labels among `N(u)`, in
    /// order of first occurrence along the sorted adjacency list.
    fn majority(&mut self, g: &Graph, u: NodeId, labels: &[NodeId], best: &mut Vec<NodeId>) {
        best.clear();
        self.touched.clear();
        let mut top = 0;
        for &v in g.neighbors(u) {
            let l = labels[v];
            let c = &mut self.counts[l];
            if *c == 0 {
                self.touched.push(l);
            }
            *c += 1;
            top = top.max(*c);
        }
        for &l in &self.touched {
            if self.counts[l] == top {
                best.push(l);
            }
            self.counts[l] = 0;
        }
    }

    fn weighted_majority(
        &mut self,
        g: &Graph,
        u: NodeId,
        labels: &[NodeId],
        table: &TsiTable,
        best: &mut Vec<NodeId>,
    ) {
        if self.weights.len() != self.counts.len() {
            self.weights = vec![0.0; self.counts.len()];
        }
        best.clear();
        self.touched.clear();
        for &v in g.neighbors(u) {
            let l = labels[v];
            let w = table.get(g, v, u).expect("adjacency is symmetric").to_f64();
            if self.counts[l] == 0 {
                self.touched.push(l);
            }
            self.counts[l] += 1;
            self.weights[l] += w;
        }
        let top = self
            .touched
            .iter()
            .map(|&l| self.weights[l])
            .fold(f64::NEG_INFINITY, f64::max);
        for &l in &self.touched {
            if self.weights[l] == top {
                best.push(l);
            }
            self.counts[l] = 0;
            self.weights[l] = 0.0;
        }
    }
}

/// True when every non-isolated node's label attains the maximal label
/// frequency in its neighborhood.
pub fn is_majority_fixed_point(g: &Graph, labels: &[NodeId]) -> bool {
    let mut counts = vec![0u32; g.node_count()];
    g.nodes().all(|u| {
        let nbrs = g.neighbors(u);
        if nbrs.is_empty() {
            return true;
        }
        let mut top = 0;
        for &v in nbrs {
            counts[labels[v]] += 1;
            top = top.max(counts[labels[v]]);
        }
        let own = counts[labels[u]];
        for &v in nbrs {
            counts[labels[v]] = 0;
        }
        own == top
    })
}

/// Plain LPA: unique labels, then propagation.
pub fn run_lpa(g: &Graph, seed: u64, max_iter: usize) -> Result<RunReport> {
    propagate(g, init_unique(g), seed, max_iter)
}

/// ILI-LPA: tsi table, identical-label initialization, then propagation.
pub fn run_ili_lpa(g: &Graph, beta: Beta, seed: u64, max_iter: usize) -> Result<RunReport> {
    let table = compute_tsi_table(g);
    propagate(g, init_identical(g, &table, beta), seed, max_iter)
}
