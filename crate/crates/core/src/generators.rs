//! Seeded instance generators.
//!
//! All randomness comes from `Xoshiro256PlusPlus::seed_from_u64(seed)`
//! (SplitMix64 seed expansion). Bounded integers are drawn by the
//! multiply-shift reduction `(x * bound) >> 64` on one 64-bit output, so
//! every instance is reproducible from its parameters in any language.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::graph::{EdgeList, NodeId, RootedTree, NONE};

pub fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Uniform value in `[0, bound)`; `bound` must be positive.
pub fn uniform_below<R: Rng + ?Sized>(rng: &mut R, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    ((rng.next_u64() as u128 * bound as u128) >> 64) as u64
}

/// How far back a node may pick its parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Grasp {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Grasp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grasp::Finite(g) => write!(f, "{g}"),
            Grasp::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Grasp {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "inf" | "infinity" | "INF" | "-1" => Ok(Grasp::Infinite),
            _ => match s.parse::<u64>() {
                Ok(0) => Err("grasp must be at least 1".into()),
                Ok(g) => Ok(Grasp::Finite(g)),
                Err(_) => Err(format!("invalid grasp {s:?}: expected a positive integer or 'inf'")),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraspParams {
    pub n: usize,
    pub gamma: Grasp,
    pub seed: u64,
}

/// Node 0 is the root; node `i` picks its parent uniformly from
/// `[max(i - gamma, 0), i - 1]`.
pub fn grasp_tree(p: GraspParams) -> Result<RootedTree> {
    check_tree_size(p.n)?;
    let mut rng = rng(p.seed);
    let mut parent = Vec::with_capacity(p.n);
    parent.push(NONE);
    for i in 1..p.n as u64 {
        let window = match p.gamma {
            Grasp::Finite(g) => g.min(i),
            Grasp::Infinite => i,
        };
        parent.push((i - window + uniform_below(&mut rng, window)) as NodeId);
    }
    Ok(RootedTree::from_trusted(0, parent))
}

fn check_tree_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidTree("tree must have at least one node".into()));
    }
    if n >= NONE as usize {
        return Err(Error::TooLarge { n, max: NONE as usize - 1 });
    }
    Ok(())
}

/// Preferential-attachment tree: the parent of node `i >= 2` is a uniform
/// entry of the flat list of all edge endpoints so far, i.e. a node chosen
/// with probability proportional to its degree.
pub fn barabasi_tree(n: usize, seed: u64) -> Result<RootedTree> {
    check_tree_size(n)?;
    let mut rng = rng(seed);
    let mut parent = Vec::with_capacity(n);
    parent.push(NONE);
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * n);
    for i in 1..n as NodeId {
        let p = if endpoints.is_empty() {
            0
        } else {
            endpoints[uniform_below(&mut rng, endpoints.len() as u64) as usize]
        };
        parent.push(p);
        endpoints.push(p);
        endpoints.push(i);
    }
    Ok(RootedTree::from_trusted(0, parent))
}

/// Uniform permutation of `[0, n)` by Fisher-Yates, walking `i` downwards
/// and swapping with a uniform index in `[0, i]`.
pub fn random_permutation(n: usize, seed: u64) -> Vec<NodeId> {
    let mut rng = rng(seed);
    let mut perm: Vec<NodeId> = (0..n as NodeId).collect();
    for i in (1..n).rev() {
        let j = uniform_below(&mut rng, i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    perm
}

/// Relabels node `v` as `perm[v]`; returns the new tree and the permutation.
pub fn permute_labels(tree: &RootedTree, seed: u64) -> (RootedTree, Vec<NodeId>) {
    let perm = random_permutation(tree.len(), seed);
    let mut parent = vec![NONE; tree.len()];
    for (v, &p) in tree.parents().iter().enumerate() {
        parent[perm[v] as usize] = if p == NONE { NONE } else { perm[p as usize] };
    }
    let root = perm[tree.root() as usize];
    (RootedTree::from_trusted(root, parent), perm)
}

/// `q` independent uniform ordered pairs from `[0, n)^2`.
pub fn sample_queries(n: usize, q: usize, seed: u64) -> Vec<(NodeId, NodeId)> {
    assert!(n >= 1 || q == 0, "cannot sample queries from an empty tree");
    let mut rng = rng(seed);
    (0..q)
        .map(|_| {
            let x = uniform_below(&mut rng, n as u64) as NodeId;
            let y = uniform_below(&mut rng, n as u64) as NodeId;
            (x, y)
        })
        .collect()
}

/// grasp(inf) spanning tree plus `m - (n - 1)` distinct uniform extra edges.
/// Edges `0..n-1` are the tree edges `(parent(i), i)` for `i = 1..n`.
pub fn random_connected_graph(n: usize, m: usize, seed: u64) -> Result<EdgeList> {
    let max_edges = n.saturating_mul(n.saturating_sub(1)) / 2;
    if n == 0 || m + 1 < n || m > max_edges {
        return Err(Error::InfeasibleEdgeCount { n, m });
    }
    let tree = grasp_tree(GraspParams { n, gamma: Grasp::Infinite, seed })?;
    let mut edges = tree.to_edge_list().edges().to_vec();
    let key = |u: NodeId, v: NodeId| if u < v { (u, v) } else { (v, u) };
    let mut present: HashSet<(NodeId, NodeId)> = edges.iter().map(|&(u, v)| key(u, v)).collect();
    let extra = m - (n - 1);
    // Separate stream so the tree does not shift when m changes.
    let mut rng = rng(seed ^ 0x9e37_79b9_7f4a_7c15);

    if extra * 2 <= max_edges - (n - 1) {
        while edges.len() < m {
            let u = uniform_below(&mut rng, n as u64) as NodeId;
            let v = uniform_below(&mut rng, n as u64) as NodeId;
            if u != v && present.insert(key(u, v)) {
                edges.push(key(u, v));
            }
        }
    } else {
        // Dense request: partial Fisher-Yates over the missing pairs.
        let mut missing: Vec<(NodeId, NodeId)> = (0..n as NodeId)
            .flat_map(|u| (u + 1..n as NodeId).map(move |v| (u, v)))
            .filter(|p| !present.contains(p))
            .collect();
        for i in 0..extra {
            let j = i + uniform_below(&mut rng, (missing.len() - i) as u64) as usize;
            missing.swap(i, j);
            present.insert(missing[i]);
            edges.push(missing[i]);
        }
    }
    Ok(EdgeList::from_trusted(n, edges))
}
