//! Lowest common ancestor engines.
//!
//! - [`InlabelIndex`]: inlabel numbers over the preorder intervals, O(n)
//!   build and O(1) bit-arithmetic queries.
//! - [`NaiveIndex`]: levels by pointer doubling, queries walk both nodes up.
//! - [`RmqLcaIndex`]: depth minimum over the Euler tour node sequence.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering};

use rayon::prelude::*;

use crate::error::Result;
use crate::euler;
use crate::graph::{NodeId, RootedTree, NONE};
use crate::par::{self, RangeIndex};

pub trait LcaEngine: Send + Sync {
    fn name(&self) -> &'static str;

    fn num_nodes(&self) -> usize;

    fn lca(&self, x: NodeId, y: NodeId) -> NodeId;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LcaAlgorithm {
    Inlabel,
    Naive,
    Rmq,
}

impl LcaAlgorithm {
    pub const ALL: [LcaAlgorithm; 3] = [LcaAlgorithm::Inlabel, LcaAlgorithm::Naive, LcaAlgorithm::Rmq];

    pub fn name(self) -> &'static str {
        match self {
            LcaAlgorithm::Inlabel => "inlabel",
            LcaAlgorithm::Naive => "naive",
            LcaAlgorithm::Rmq => "rmq",
        }
    }

    pub fn build(self, tree: &RootedTree) -> Result<Box<dyn LcaEngine>> {
        Ok(match self {
            LcaAlgorithm::Inlabel => Box::new(InlabelIndex::build(tree)?),
            LcaAlgorithm::Naive => Box::new(NaiveIndex::build(tree)),
            LcaAlgorithm::Rmq => Box::new(RmqLcaIndex::build(tree)?),
        })
    }
}

impl fmt::Display for LcaAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LcaAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown LCA engine {s:?} (expected inlabel, naive or rmq)"))
    }
}

#[inline]
fn highest_bit(x: u64) -> u32 {
    63 - x.leading_zeros()
}

/// Inlabel of the preorder interval `[l, r]`: the member with the most
/// trailing zeros, i.e. `r` with every bit below the highest set bit of
/// `(l - 1) ^ r` cleared.
#[inline]
pub fn interval_inlabel(l: u32, r: u32) -> u32 {
    debug_assert!(1 <= l && l <= r);
    let k = highest_bit(((l - 1) ^ r) as u64);
    (r >> k) << k
}

/// Schieber-Vishkin style LCA index.
#[derive(Clone, Debug)]
pub struct InlabelIndex {
    inlabel: Vec<u32>,
    ascendant: Vec<u64>,
    /// Topmost node of each inlabel path, indexed by inlabel value.
    head: Vec<NodeId>,
    level: Vec<u32>,
    parent: Vec<NodeId>,
}

impl InlabelIndex {
    pub fn build(tree: &RootedTree) -> Result<Self> {
        let (_, stats) = euler::root_tree(&tree.to_edge_list(), tree.root())?;
        Ok(Self::from_stats(stats))
    }

    pub fn from_stats(stats: euler::NodeStats) -> Self {
        let n = stats.len();
        let euler::NodeStats { preorder, size, level, parent } = stats;

        let inlabel: Vec<u32> = preorder
            .par_iter()
            .zip(size.par_iter())
            .map(|(&l, &s)| interval_inlabel(l, l + s - 1))
            .collect();

        // Bucket nodes by inlabel, then take the minimum-level node of each
        // bucket as the path head.
        let counts: Vec<AtomicU32> = (0..=n + 1).map(|_| AtomicU32::new(0)).collect();
        inlabel.par_iter().for_each(|&b| {
            counts[b as usize].fetch_add(1, Ordering::Relaxed);
        });
        let counts: Vec<usize> = counts.into_iter().map(|c| c.into_inner() as usize).collect();
        let offsets = par::exclusive_scan(&counts, 0usize, |a, b| a + b);
        let mut cursor = offsets.clone();
        let mut by_label = vec![0 as NodeId; n];
        for (v, &b) in inlabel.iter().enumerate() {
            by_label[cursor[b as usize]] = v as NodeId;
            cursor[b as usize] += 1;
        }
        let keys: Vec<u64> = by_label
            .par_iter()
            .map(|&v| (level[v as usize] as u64) << 32 | v as u64)
            .collect();
        let head: Vec<NodeId> = par::segmented_reduce(&keys, &offsets, u64::MAX, u64::min)
            .into_par_iter()
            .map(|k| if k == u64::MAX { NONE } else { k as NodeId })
            .collect();

        // Each path inherits the mask of the path above it plus its own
        // height bit. The path above always has a strictly greater height,
        // so filling labels one height at a time, top down, sees every
        // parent mask already final.
        let mut mask = vec![0u64; n + 1];
        let top = usize::BITS - n.leading_zeros();
        for t in (0..top).rev() {
            let (first, step) = (1usize << t, 1usize << (t + 1));
            let count = if first > n { 0 } else { (n - first) / step + 1 };
            let filled: Vec<(usize, u64)> = (0..count)
                .into_par_iter()
                .map(|k| first + k * step)
                .filter(|&b| head[b] != NONE)
                .map(|b| {
                    let p = parent[head[b] as usize];
                    let above = if p == NONE { 0 } else { mask[inlabel[p as usize] as usize] };
                    (b, above | 1u64 << t)
                })
                .collect();
            for (b, m) in filled {
                mask[b] = m;
            }
        }
        let ascendant = inlabel.par_iter().map(|&b| mask[b as usize]).collect();

        Self { inlabel, ascendant, head, level, parent }
    }

    pub fn inlabel(&self, v: NodeId) -> u32 {
        self.inlabel[v as usize]
    }

    pub fn ascendant(&self, v: NodeId) -> u64 {
        self.ascendant[v as usize]
    }

    /// `NONE` when no node carries `label`.
    pub fn head(&self, label: u32) -> NodeId {
        self.head.get(label as usize).copied().unwrap_or(NONE)
    }

    pub fn level(&self, v: NodeId) -> u32 {
        self.level[v as usize]
    }

    pub fn parent(&self, v: NodeId) -> NodeId {
        self.parent[v as usize]
    }

    /// Lifts `v` to its deepest ancestor on the path labelled `target`,
    /// whose height in the binary tree is `j`.
    #[inline]
    fn climb(&self, v: NodeId, target: u32, j: u32) -> NodeId {
        let label = self.inlabel[v as usize];
        if label == target {
            return v;
        }
        let below = self.ascendant[v as usize] & ((1u64 << j) - 1);
        let k = highest_bit(below);
        let w = ((label >> k) | 1) << k;
        self.parent[self.head[w as usize] as usize]
    }

    #[inline]
    fn shallower(&self, x: NodeId, y: NodeId) -> NodeId {
        if self.level[x as usize] <= self.level[y as usize] {
            x
        } else {
            y
        }
    }
}

impl LcaEngine for InlabelIndex {
    fn name(&self) -> &'static str {
        "inlabel"
    }

    fn num_nodes(&self) -> usize {
        self.inlabel.len()
    }

    #[inline]
    fn lca(&self, x: NodeId, y: NodeId) -> NodeId {
        let (ix, iy) = (self.inlabel[x as usize], self.inlabel[y as usize]);
        if ix == iy {
            return self.shallower(x, y);
        }
        let i = highest_bit((ix ^ iy) as u64);
        let common = self.ascendant[x as usize] & self.ascendant[y as usize] & (u64::MAX << i);
        let j = common.trailing_zeros();
        let target = ((ix >> j) | 1) << j;
        let xh = self.climb(x, target, j);
        let yh = self.climb(y, target, j);
        self.shallower(xh, yh)
    }
}

/// Parent pointers plus levels; queries walk up one node at a time and use
/// no memory beyond two cursors.
#[derive(Clone, Debug)]
pub struct NaiveIndex {
    parent: Vec<NodeId>,
    level: Vec<u32>,
}

impl NaiveIndex {
    pub fn build(tree: &RootedTree) -> Self {
        Self {
            parent: tree.parents().to_vec(),
            level: par::ancestor_doubling_levels(tree),
        }
    }

    pub fn level(&self, v: NodeId) -> u32 {
        self.level[v as usize]
    }

    /// LCA together with the number of upward steps taken.
    pub fn lca_with_steps(&self, mut x: NodeId, mut y: NodeId) -> (NodeId, usize) {
        let mut steps = 0;
        while self.level[x as usize] > self.level[y as usize] {
            x = self.parent[x as usize];
            steps += 1;
        }
        while self.level[y as usize] > self.level[x as usize] {
            y = self.parent[y as usize];
            steps += 1;
        }
        while x != y {
            x = self.parent[x as usize];
            y = self.parent[y as usize];
            steps += 2;
        }
        (x, steps)
    }
}

impl LcaEngine for NaiveIndex {
    fn name(&self) -> &'static str {
        "naive"
    }

    fn num_nodes(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn lca(&self, x: NodeId, y: NodeId) -> NodeId {
        self.lca_with_steps(x, y).0
    }
}

/// LCA as the shallowest node of the tour segment between first visits.
#[derive(Clone, Debug)]
pub struct RmqLcaIndex {
    first: Vec<u32>,
    /// `level << 32 | node` for every tour step, root prepended.
    index: RangeIndex,
}

impl RmqLcaIndex {
    pub fn build(tree: &RootedTree) -> Result<Self> {
        let (tour, stats) = euler::root_tree(&tree.to_edge_list(), tree.root())?;
        let h = tour.half_edges();
        let root = tour.root();
        let key = |v: NodeId| (stats.level[v as usize] as i64) << 32 | v as i64;

        let mut keys = Vec::with_capacity(tour.len() + 1);
        keys.push(key(root));
        keys.par_extend(tour.order().par_iter().map(|&e| key(h.dst(e))));

        let mut first = vec![0u32; tree.len()];
        for (t, &e) in tour.order().iter().enumerate() {
            if tour.is_down(e) {
                first[h.dst(e) as usize] = t as u32 + 1;
            }
        }
        Ok(Self { first, index: RangeIndex::build(&keys) })
    }
}

impl LcaEngine for RmqLcaIndex {
    fn name(&self) -> &'static str {
        "rmq"
    }

    fn num_nodes(&self) -> usize {
        self.first.len()
    }

    #[inline]
    fn lca(&self, x: NodeId, y: NodeId) -> NodeId {
        let (a, b) = (self.first[x as usize] as usize, self.first[y as usize] as usize);
        let (l, r) = if a <= b { (a, b) } else { (b, a) };
        self.index.min_unchecked(l, r) as u32
    }
}

/// Answers `queries` in consecutive batches of `batch_size`, each batch in
/// one parallel pass. Output order matches query order.
pub fn answer_batch<E>(engine: &E, queries: &[(NodeId, NodeId)], batch_size: usize) -> Vec<NodeId>
where
    E: LcaEngine + ?Sized,
{
    assert!(batch_size >= 1, "batch size must be positive");
    let mut out = vec![NONE; queries.len()];
    for (dst, batch) in out.chunks_mut(batch_size).zip(queries.chunks(batch_size)) {
        dst.par_iter_mut()
            .zip(batch.par_iter())
            .for_each(|(slot, &(x, y))| *slot = engine.lca(x, y));
    }
    out
}
