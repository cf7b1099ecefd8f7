//! Undirected simple graphs in compressed sparse row form.
//!
//! Nodes carry dense internal ids `0..n`. External ids read from files are
//! kept alongside and mapped in first-appearance order, so the internal
//! numbering of a loaded graph depends only on the file contents.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Immutable undirected simple graph.
///
/// Adjacency lists are strictly ascending, symmetric and free of self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<String>,
    index: HashMap<String, NodeId>,
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

/// What was discarded while building a [`Graph`] from raw pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub self_loops: usize,
    pub duplicates: usize,
}

impl Graph {
    /// Builds a graph on `ids.len()` nodes from arbitrary index pairs.
    /// Self-loops are dropped and parallel edges collapsed.
    pub fn from_pairs<I>(ids: Vec<String>, pairs: I) -> (Self, IngestStats)
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let n = ids.len();
        let mut stats = IngestStats::default();
        let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (u, v) in pairs {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
            if u == v {
                stats.self_loops += 1;
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }

        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        let mut raw_half_edges = 0;
        for list in &mut adjacency {
            raw_half_edges += list.len();
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        stats.duplicates = (raw_half_edges - targets.len()) / 2;

        let index = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        let graph = Graph {
            ids,
            index,
            offsets,
            targets,
        };
        (graph, stats)
    }

    /// Graph whose external ids are the decimal internal ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let ids = (0..n).map(|i| i.to_string()).collect();
        Self::from_pairs(ids, edges).0
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Sorted neighbor list of `u`.
    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Position of `v` in the flattened adjacency array, if `(u, v)` is an edge.
    #[inline]
    pub fn edge_slot(&self, u: NodeId, v: NodeId) -> Option<usize> {
        self.neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|k| self.offsets[u] + k)
    }

    /// Start of `u`'s block in the flattened adjacency array.
    #[inline]
    pub fn slot_offset(&self, u: NodeId) -> usize {
        self.offsets[u]
    }

    /// Length of the flattened adjacency array (twice the edge count).
    pub fn slot_count(&self) -> usize {
        self.targets.len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Undirected edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn external_id(&self, u: NodeId) -> &str {
        &self.ids[u]
    }

    pub fn node_index(&self, id: &str) -> Option<NodeId> {
        self.index.get(id).copied()
    }

    /// Writes the graph in edge-list form such that reading it back
    /// reproduces the same internal numbering.
    ///
    /// Edges `(w, u)` with `w < u` are emitted grouped by `u`. A node with no
    /// lower-numbered neighbor is first declared by a self-loop line `u u`,
    /// which the reader drops after registering the id.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for u in self.nodes() {
            let id = self.external_id(u);
            let lower = self.neighbors(u).iter().take_while(|&&w| w < u);
            let mut any = false;
            for &w in lower {
                writeln!(out, "{} {}", self.external_id(w), id)?;
                any = true;
            }
            if !any {
                writeln!(out, "{id} {id}")?;
            }
        }
        Ok(())
    }
}

/// Reads a whitespace-separated edge list.
///
/// Lines starting with `#` or `%` and blank lines are skipped. Every other
/// line must hold exactly two tokens. Self-loops are dropped (the node is
/// still registered) and repeated edges collapsed.
/// Buffered reader over `path`; open failures name the file.
pub fn open_input(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

pub fn load_edge_list<R: BufRead>(source: R) -> Result<(Graph, IngestStats)> {
    let mut ids: Vec<String> = Vec::new();
    let mut index: HashMap<String, NodeId> = HashMap::new();
    let mut pairs = Vec::new();

    let mut intern = |token: &str| -> NodeId {
        if let Some(&i) = index.get(token) {
            return i;
        }
        let i = ids.len();
        ids.push(token.to_owned());
        index.insert(token.to_owned(), i);
        i
    };

    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let Some(tokens) = data_tokens(&line) else {
            continue;
        };
        match tokens.as_slice() {
            [a, b] => {
                let u = intern(a);
                let v = intern(b);
                pairs.push((u, v));
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected 2 tokens, found {}", tokens.len()),
                })
            }
        }
    }

    if ids.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let (graph, stats) = Graph::from_pairs(ids, pairs);
    if stats.self_loops > 0 {
        log::warn!("dropped {} self-loop(s)", stats.self_loops);
    }
    Ok((graph, stats))
}

fn data_tokens(line: &str) -> Option<Vec<&str>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
        return None;
    }
    Some(trimmed.split_whitespace().collect())
}

/// Known community assignment, total over the nodes of one graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruth {
    membership: Vec<usize>,
    names: Vec<String>,
}

impl GroundTruth {
    /// `membership[u]` is a dense community index; names default to the index.
    pub fn from_membership(membership: Vec<usize>) -> Self {
        let k = membership.iter().copied().max().map_or(0, |m| m + 1);
        GroundTruth {
            membership,
            names: (0..k).map(|c| c.to_string()).collect(),
        }
    }

    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    pub fn community_of(&self, u: NodeId) -> usize {
        self.membership[u]
    }

    /// Original community token for dense index `c`.
    pub fn community_name(&self, c: usize) -> &str {
        &self.names[c]
    }

    pub fn community_count(&self) -> usize {
        self.names.len()
    }

    pub fn write<W: Write>(&self, g: &Graph, mut out: W) -> Result<()> {
        for u in g.nodes() {
            writeln!(
                out,
                "{} {}",
                g.external_id(u),
                self.community_name(self.membership[u])
            )?;
        }
        Ok(())
    }
}

/// Reads `node community` lines for the nodes of `g`.
pub fn load_ground_truth<R: BufRead>(source: R, g: &Graph) -> Result<GroundTruth> {
    const UNSET: usize = usize::MAX;
    let mut membership = vec![UNSET; g.node_count()];
    let mut names: Vec<String> = Vec::new();
    let mut name_index: HashMap<String, usize> = HashMap::new();

    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let Some(tokens) = data_tokens(&line) else {
            continue;
        };
        let [node, community] = tokens.as_slice() else {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected 2 tokens, found {}", tokens.len()),
            });
        };
        let u = g.node_index(node).ok_or_else(|| Error::UnknownNode {
            line: lineno + 1,
            id: (*node).to_owned(),
        })?;
        if membership[u] != UNSET {
            return Err(Error::DuplicateAssignment {
                line: lineno + 1,
                id: (*node).to_owned(),
            });
        }
        let next = names.len();
        let c = *name_index.entry((*community).to_owned()).or_insert(next);
        if c == next {
            names.push((*community).to_owned());
        }
        membership[u] = c;
    }

    let missing: Vec<String> = g
        .nodes()
        .filter(|&u| membership[u] == UNSET)
        .map(|u| g.external_id(u).to_owned())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingNodes(missing));
    }
    Ok(GroundTruth { membership, names })
}

/// `|N(i) ∩ N(j)|` by merging the two sorted neighbor lists.
pub fn common_neighbors(g: &Graph, i: NodeId, j: NodeId) -> usize {
    let (a, b) = (g.neighbors(i), g.neighbors(j));
    let (mut x, mut y, mut count) = (0, 0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                x += 1;
                y += 1;
            }
        }
    }
    count
}
