//! Directed link similarity `tsi(i, j) = (1 + |N(i) ∩ N(j)|) / |N(j)|`.
//!
//! Values are kept as exact fractions so that comparisons between two tsi
//! values never depend on floating-point rounding.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{common_neighbors, Graph, NodeId};

/// Exact tsi value `numerator / denominator`.
///
/// `numerator` is one plus the common-neighbor count, `denominator` the
/// degree of the target node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Tsi {
    numerator: u32,
    denominator: u32,
}

impl Tsi {
    pub fn new(common: usize, target_degree: usize) -> Self {
        debug_assert!(target_degree >= 1);
        Tsi {
            numerator: (common + 1) as u32,
            denominator: target_degree as u32,
        }
    }

    pub fn numerator(self) -> u32 {
        self.numerator
    }

    pub fn denominator(self) -> u32 {
        self.denominator
    }

    /// Common-neighbor count this value was built from.
    pub fn common(self) -> u32 {
        self.numerator - 1
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.numerator) / f64::from(self.denominator)
    }

    /// `self >= beta`, with the fraction rounded once to the nearest double.
    ///
    /// A fraction equal to the decimal value of `beta` rounds to the same
    /// double as the literal, so boundary cases such as `7/20 >= 0.35` hold.
    pub fn at_least(self, beta: Beta) -> bool {
        self.to_f64() >= beta.get()
    }
}

impl Ord for Tsi {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = u64::from(self.numerator) * u64::from(other.denominator);
        let rhs = u64::from(other.numerator) * u64::from(self.denominator);
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Tsi {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Tsi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Initialization threshold, validated to lie in `(0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Beta(f64);

impl Beta {
    pub const DEFAULT: Beta = Beta(0.35);

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Beta(value))
        } else {
            Err(Error::InvalidBeta(value))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Beta {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Beta::new(value)
    }
}

impl From<Beta> for f64 {
    fn from(beta: Beta) -> f64 {
        beta.0
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Default for Beta {
    fn default() -> Self {
        Beta::DEFAULT
    }
}

/// tsi of the edge `(i, j)`; the denominator is the degree of `j`.
pub fn tsi(g: &Graph, i: NodeId, j: NodeId) -> Result<Tsi> {
    if i == j || !g.has_edge(i, j) {
        return Err(Error::NotAnEdge { i, j });
    }
    Ok(Tsi::new(common_neighbors(g, i, j), g.degree(j)))
}

/// Both directed tsi values for every edge, laid out parallel to the graph's
/// flattened adjacency: the entry at the slot of `j` in `N(i)` is `tsi(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsiTable {
    values: Vec<Tsi>,
}

impl TsiTable {
    /// `tsi(i, j)`, or `None` when `(i, j)` is not an edge of `g`.
    pub fn get(&self, g: &Graph, i: NodeId, j: NodeId) -> Option<Tsi> {
        g.edge_slot(i, j).map(|s| self.values[s])
    }

    /// `tsi(i, j)` for each `j` in `N(i)`, in neighbor order.
    pub fn row(&self, g: &Graph, i: NodeId) -> &[Tsi] {
        let start = g.slot_offset(i);
        &self.values[start..start + g.degree(i)]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest directed value in the table.
    pub fn max(&self) -> Option<Tsi> {
        self.values.iter().copied().max()
    }

    /// One line per undirected edge: `i j tsi_ij tsi_ji`, six decimals.
    pub fn write<W: Write>(&self, g: &Graph, mut out: W) -> Result<()> {
        for (i, j) in g.edges() {
            let forward = self.get(g, i, j).expect("edge present");
            let backward = self.get(g, j, i).expect("edge present");
            writeln!(
                out,
                "{} {} {:.6} {:.6}",
                g.external_id(i),
                g.external_id(j),
                forward.to_f64(),
                backward.to_f64()
            )?;
        }
        Ok(())
    }
}

/// Computes the table with one neighbor-list intersection per undirected edge.
pub fn compute_tsi_table(g: &Graph) -> TsiTable {
    let placeholder = Tsi {
        numerator: 0,
        denominator: 1,
    };
    let mut values = vec![placeholder; g.slot_count()];
    for i in g.nodes() {
        let base = g.slot_offset(i);
        for (k, &j) in g.neighbors(i).iter().enumerate() {
            if j < i {
                continue;
            }
            let common = common_neighbors(g, i, j);
            values[base + k] = Tsi::new(common, g.degree(j));
            let back = g.edge_slot(j, i).expect("adjacency is symmetric");
            values[back] = Tsi::new(common, g.degree(i));
        }
    }
    TsiTable { values }
}
