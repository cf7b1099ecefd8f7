//! Brute-force reference implementations used by the integration tests.
//!
//! Nothing here calls into the algorithm paths it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use ililpa::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// G(n, p) with a seeded ChaCha stream.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

pub fn random_labels(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(0..k.max(1))).collect()
}

/// Dense adjacency matrix.
pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Neighbor set of `u`, rebuilt from the dense matrix.
pub fn neighbor_set(a: &[Vec<bool>], u: usize) -> BTreeSet<usize> {
    (0..a.len()).filter(|&v| a[u][v]).collect()
}

/// Common neighbors by a double loop over both neighbor lists.
pub fn naive_common(a: &[Vec<bool>], i: usize, j: usize) -> usize {
    let ni: Vec<usize> = neighbor_set(a, i).into_iter().collect();
    let nj: Vec<usize> = neighbor_set(a, j).into_iter().collect();
    let mut count = 0;
    for x in &ni {
        for y in &nj {
            if x == y {
                count += 1;
            }
        }
    }
    count
}

/// tsi(i, j) as an unreduced fraction `(1 + common, |N(j)|)`.
pub fn naive_tsi(a: &[Vec<bool>], i: usize, j: usize) -> (u32, u32) {
    (
        1 + naive_common(a, i, j) as u32,
        neighbor_set(a, j).len() as u32,
    )
}

/// `(1/2m) Σ_ij (A_ij − k_i k_j / 2m) δ(c_i, c_j)` over all ordered pairs.
pub fn double_sum_modularity(g: &Graph, labels: &[usize]) -> f64 {
    let a = adjacency(g);
    let n = g.node_count();
    let k: Vec<f64> = (0..n).map(|u| a[u].iter().filter(|&&x| x).count() as f64).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                let aij = if a[i][j] { 1.0 } else { 0.0 };
                q += aij - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// NMI through `H(X) + H(Y) − H(X, Y)`, from a dense contingency table.
pub fn contingency_nmi(x: &[usize], y: &[usize]) -> f64 {
    let n = x.len() as f64;
    let rx = dense(x);
    let ry = dense(y);
    let kx = rx.iter().max().map_or(0, |m| m + 1);
    let ky = ry.iter().max().map_or(0, |m| m + 1);
    let mut table = vec![vec![0usize; ky]; kx];
    for (&a, &b) in rx.iter().zip(&ry) {
        table[a][b] += 1;
    }
    let h = |counts: &mut dyn Iterator<Item = usize>| -> f64 {
        counts
            .filter(|&c| c > 0)
            .map(|c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let hx = h(&mut table.iter().map(|row| row.iter().sum::<usize>()));
    let hy = h(&mut (0..ky).map(|b| table.iter().map(|row| row[b]).sum::<usize>()));
    let hxy = h(&mut table.iter().flat_map(|row| row.iter().copied()));
    if hx + hy == 0.0 {
        return 1.0;
    }
    2.0 * (hx + hy - hxy) / (hx + hy)
}

fn dense(labels: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

/// Every non-isolated node's label attains the top neighbor-label count.
pub fn certificate_holds(a: &[Vec<bool>], labels: &[usize]) -> bool {
    (0..a.len()).all(|u| {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for v in neighbor_set(a, u) {
            *counts.entry(labels[v]).or_default() += 1;
        }
        match counts.values().max() {
            None => true,
            Some(&top) => counts.get(&labels[u]).copied().unwrap_or(0) == top,
        }
    })
}

/// Two disjoint 5-cliques joined by the single edge (4, 5).
pub fn two_cliques_bridge() -> Graph {
    let mut edges = Vec::new();
    for base in [0, 5] {
        for a in 0..5 {
            for b in a + 1..5 {
                edges.push((base + a, base + b));
            }
        }
    }
    edges.push((4, 5));
    Graph::from_edges(10, edges)
}

pub fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.into_iter().collect();
    v.iter().sum::<f64>() / v.len() as f64
}
