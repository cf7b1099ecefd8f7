//! Partition quality: Newman modularity and normalized mutual information.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GroundTruth, NodeId};

/// Disjoint cover of the nodes `0..n` by non-empty blocks.
///
/// Block ids are dense and numbered by smallest member, so two partitions
/// with the same blocks compare equal regardless of the labels they came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    membership: Vec<usize>,
    blocks: usize,
}

impl Partition {
    /// Groups nodes by equal label. Labels can be arbitrary values.
    pub fn from_labels<L>(labels: &[L]) -> Self
    where
        L: Copy + Eq + std::hash::Hash,
    {
        let mut renumber: HashMap<L, usize> = HashMap::new();
        let membership = labels
            .iter()
            .map(|l| {
                let next = renumber.len();
                *renumber.entry(*l).or_insert(next)
            })
            .collect();
        Partition {
            membership,
            blocks: renumber.len(),
        }
    }

    pub fn from_ground_truth(truth: &GroundTruth) -> Self {
        Self::from_labels(truth.membership())
    }

    pub fn single_block(n: usize) -> Self {
        Partition {
            membership: vec![0; n],
            blocks: usize::from(n > 0),
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            membership: (0..n).collect(),
            blocks: n,
        }
    }

    pub fn node_count(&self) -> usize {
        self.membership.len()
    }

    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    pub fn block_of(&self, u: NodeId) -> usize {
        self.membership[u]
    }

    pub fn community_count(&self) -> usize {
        self.blocks
    }

    /// Member lists, each ascending, ordered by smallest member.
    pub fn blocks(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (u, &b) in self.membership.iter().enumerate() {
            out[b].push(u);
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.blocks];
        for &b in &self.membership {
            sizes[b] += 1;
        }
        sizes
    }

    /// `node community` per line, in internal node order.
    pub fn write<W: Write>(&self, g: &Graph, mut out: W) -> Result<()> {
        for u in g.nodes() {
            writeln!(out, "{} {}", g.external_id(u), self.membership[u])?;
        }
        Ok(())
    }
}

/// Number of blocks.
pub fn community_count(p: &Partition) -> usize {
    p.community_count()
}

/// Newman modularity `Q = Σ_c [e_c / m − (d_c / 2m)²]`.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    if p.node_count() != g.node_count() {
        return Err(Error::PartitionMismatch {
            expected: g.node_count(),
            found: p.node_count(),
        });
    }
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::NoEdges);
    }

    let mut internal = vec![0usize; p.community_count()];
    let mut degree = vec![0usize; p.community_count()];
    for u in g.nodes() {
        let b = p.block_of(u);
        degree[b] += g.degree(u);
    }
    for (u, v) in g.edges() {
        if p.block_of(u) == p.block_of(v) {
            internal[p.block_of(u)] += 1;
        }
    }

    let m = m as f64;
    let q = internal
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| {
            let share = d as f64 / (2.0 * m);
            e as f64 / m - share * share
        })
        .sum();
    Ok(q)
}

/// `2 I(X;Y) / (H(X) + H(Y))` with natural logarithms.
///
/// Two single-block partitions of the same nodes score 1. When exactly one
/// side has zero entropy the mutual information vanishes and the score is 0.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    if a.node_count() != b.node_count() {
        return Err(Error::PartitionMismatch {
            expected: a.node_count(),
            found: b.node_count(),
        });
    }
    let n = a.node_count();
    if n == 0 {
        return Ok(1.0);
    }

    let mut joint: HashMap<(usize, usize), usize> = HashMap::new();
    for (&x, &y) in a.membership().iter().zip(b.membership()) {
        *joint.entry((x, y)).or_default() += 1;
    }
    let size_a = a.block_sizes();
    let size_b = b.block_sizes();

    let nf = n as f64;
    let entropy = |sizes: &[usize]| -> f64 {
        sizes
            .iter()
            .map(|&s| {
                let p = s as f64 / nf;
                -p * p.ln()
            })
            .sum()
    };
    let h_a = entropy(&size_a);
    let h_b = entropy(&size_b);
    if h_a + h_b == 0.0 {
        return Ok(1.0);
    }

    let mut pairs: Vec<_> = joint.into_iter().collect();
    pairs.sort_unstable();
    let mutual: f64 = pairs
        .iter()
        .map(|&((x, y), c)| {
            let c = c as f64;
            c / nf * (nf * c / (size_a[x] as f64 * size_b[y] as f64)).ln()
        })
        .sum();

    Ok((2.0 * mutual / (h_a + h_b)).clamp(0.0, 1.0))
}
