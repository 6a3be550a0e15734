//! Euler tours of trees: the half-edge structure with twin and next links,
//! tour linearization by list ranking, and scan-derived node statistics.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{build_adjacency, EdgeList, NodeId, NONE};
use crate::par::{self, ListArray, TAIL};
use crate::union_find::DisjointSets;

/// Half-edge id: index into the storage array where the two directions of
/// input edge `i` sit at `2i` and `2i + 1`, so `twin(e) = e ^ 1`.
pub type HalfEdgeId = u32;

/// Directed half-edges of a tree with twin links and per-vertex circular
/// next links.
#[derive(Clone, Debug)]
pub struct HalfEdges {
    n: usize,
    src: Vec<NodeId>,
    dst: Vec<NodeId>,
    next: Vec<HalfEdgeId>,
    first: Vec<HalfEdgeId>,
    /// Half-edge ids in lexicographic `(src, dst)` order.
    sorted: Vec<HalfEdgeId>,
    /// Inverse of `sorted`.
    sorted_pos: Vec<u32>,
}

/// Builds the half-edge structure of a tree given as an unordered edge list.
pub fn build_half_edges(tree_edges: &EdgeList) -> Result<HalfEdges> {
    let n = tree_edges.num_nodes();
    let m = tree_edges.num_edges();
    if n == 0 || m != n - 1 {
        return Err(Error::NotATree { nodes: n, edges: m });
    }
    let mut ds = DisjointSets::new(n);
    if !tree_edges.edges().iter().all(|&(u, v)| ds.union(u, v)) {
        return Err(Error::NotATree { nodes: n, edges: m });
    }

    let (src, dst): (Vec<NodeId>, Vec<NodeId>) = tree_edges
        .edges()
        .par_iter()
        .flat_map_iter(|&(u, v)| [(u, v), (v, u)])
        .unzip();

    // The adjacency index already holds each vertex's neighbours in
    // ascending order, which is exactly the (src, dst) order of B.
    let adj = build_adjacency(tree_edges);
    let offsets = adj.offsets();
    let mut sorted = vec![0 as HalfEdgeId; 2 * m];
    par::split_segments_mut(&mut sorted, offsets)
        .into_par_iter()
        .enumerate()
        .for_each(|(x, seg)| {
            for (slot, (_, id)) in seg.iter_mut().zip(adj.incident(x as NodeId)) {
                *slot = 2 * id + (src[2 * id as usize] != x as NodeId) as u32;
            }
        });

    let mut sorted_pos = vec![0u32; 2 * m];
    let mut next = vec![0 as HalfEdgeId; 2 * m];
    for x in 0..n {
        let seg = &sorted[offsets[x]..offsets[x + 1]];
        for (k, &e) in seg.iter().enumerate() {
            sorted_pos[e as usize] = (offsets[x] + k) as u32;
            next[e as usize] = seg[(k + 1) % seg.len()];
        }
    }
    let first: Vec<HalfEdgeId> = (0..n).map(|x| sorted.get(offsets[x]).copied().filter(|_| offsets[x] < offsets[x + 1]).unwrap_or(NONE)).collect();

    Ok(HalfEdges { n, src, dst, next, first, sorted, sorted_pos })
}

impl HalfEdges {
    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.src.len()
    }

    pub fn is_empty(&self) -> bool {
        self.src.is_empty()
    }

    pub fn src(&self, e: HalfEdgeId) -> NodeId {
        self.src[e as usize]
    }

    pub fn dst(&self, e: HalfEdgeId) -> NodeId {
        self.dst[e as usize]
    }

    pub fn endpoints(&self, e: HalfEdgeId) -> (NodeId, NodeId) {
        (self.src(e), self.dst(e))
    }

    pub fn twin(&self, e: HalfEdgeId) -> HalfEdgeId {
        e ^ 1
    }

    pub fn next(&self, e: HalfEdgeId) -> HalfEdgeId {
        self.next[e as usize]
    }

    /// First half-edge leaving `x` in sorted order, `NONE` for an isolated
    /// vertex (only possible when n = 1).
    pub fn first(&self, x: NodeId) -> HalfEdgeId {
        self.first[x as usize]
    }

    /// Half-edge ids in lexicographic order of `(src, dst)`.
    pub fn sorted(&self) -> &[HalfEdgeId] {
        &self.sorted
    }

    pub fn sorted_position(&self, e: HalfEdgeId) -> usize {
        self.sorted_pos[e as usize] as usize
    }

    /// Half-edge with the given endpoints, by binary search in sorted order.
    pub fn find(&self, src: NodeId, dst: NodeId) -> Option<HalfEdgeId> {
        self.sorted
            .binary_search_by_key(&(src, dst), |&e| self.endpoints(e))
            .ok()
            .map(|i| self.sorted[i])
    }
}

/// Next half-edge of the Euler tour after `e`: `next(twin(e))`.
pub fn tour_successor(h: &HalfEdges, e: HalfEdgeId) -> HalfEdgeId {
    h.next(h.twin(e))
}

/// Euler tour cut open at the first half-edge leaving the root.
#[derive(Clone, Debug)]
pub struct EulerTour {
    half_edges: HalfEdges,
    root: NodeId,
    order: Vec<HalfEdgeId>,
    pos: Vec<u32>,
}

impl EulerTour {
    pub fn half_edges(&self) -> &HalfEdges {
        &self.half_edges
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Half-edges in tour order.
    pub fn order(&self) -> &[HalfEdgeId] {
        &self.order
    }

    /// Tour position of a half-edge; inverse of `order`.
    pub fn position(&self, e: HalfEdgeId) -> usize {
        self.pos[e as usize] as usize
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// An edge goes down iff it appears before its twin.
    pub fn is_down(&self, e: HalfEdgeId) -> bool {
        self.pos[e as usize] < self.pos[(e ^ 1) as usize]
    }
}

/// Cuts the cyclic successor list just before `first[root]` and ranks it.
pub fn linearize(h: HalfEdges, root: NodeId) -> Result<EulerTour> {
    if root as usize >= h.num_nodes() {
        return Err(Error::InvalidTree(format!("root {root} outside [0, {})", h.num_nodes())));
    }
    if h.is_empty() {
        return Ok(EulerTour { half_edges: h, root, order: Vec::new(), pos: Vec::new() });
    }
    let head = h.first(root);
    let succ: Vec<u32> = (0..h.len() as HalfEdgeId)
        .into_par_iter()
        .map(|e| {
            let s = tour_successor(&h, e);
            if s == head {
                TAIL
            } else {
                s
            }
        })
        .collect();
    let pos = par::list_rank(&ListArray::new(succ, head))?;
    let mut order = vec![0; h.len()];
    for (e, &p) in pos.iter().enumerate() {
        order[p as usize] = e as HalfEdgeId;
    }
    Ok(EulerTour { half_edges: h, root, order, pos })
}

/// Per-node statistics of a rooted tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeStats {
    /// 1-based preorder number.
    pub preorder: Vec<u32>,
    /// Subtree node count.
    pub size: Vec<u32>,
    /// Depth, root = 0.
    pub level: Vec<u32>,
    /// `NONE` for the root.
    pub parent: Vec<NodeId>,
}

impl NodeStats {
    pub fn len(&self) -> usize {
        self.preorder.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preorder.is_empty()
    }
}

/// Preorder, subtree size, level and parent from array scans over the
/// linearized tour.
pub fn node_stats(t: &EulerTour) -> NodeStats {
    let h = &t.half_edges;
    let n = h.num_nodes();
    let root = t.root as usize;

    let down: Vec<bool> = t.order.par_iter().map(|&e| t.is_down(e)).collect();
    let pre_weight: Vec<u32> = down.par_iter().map(|&d| d as u32).collect();
    let level_weight: Vec<i64> = down.par_iter().map(|&d| if d { 1 } else { -1 }).collect();
    let pre_scan = par::exclusive_scan(&pre_weight, 0u32, |a, b| a + b);
    let level_scan = par::exclusive_scan(&level_weight, 0i64, |a, b| a + b);

    let mut preorder = vec![0u32; n];
    let mut size = vec![0u32; n];
    let mut level = vec![0u32; n];
    let mut parent = vec![NONE; n];
    preorder[root] = 1;
    size[root] = n as u32;

    // (node, preorder, size, level, parent) for every down edge
    let entries: Vec<(NodeId, u32, u32, u32, NodeId)> = t
        .order
        .par_iter()
        .enumerate()
        .filter(|&(p, _)| down[p])
        .map(|(p, &e)| {
            let q = t.pos[(e ^ 1) as usize] as usize;
            let v = h.dst(e);
            let pre = pre_scan[p] + 2;
            let lvl = (level_scan[p] + 1) as u32;
            (v, pre, ((q - p + 1) / 2) as u32, lvl, h.src(e))
        })
        .collect();
    for (v, pre, sz, lvl, par_) in entries {
        let v = v as usize;
        preorder[v] = pre;
        size[v] = sz;
        level[v] = lvl;
        parent[v] = par_;
    }
    NodeStats { preorder, size, level, parent }
}

/// Convenience pipeline: half-edges, tour rooted at `root`, node stats.
pub fn root_tree(tree_edges: &EdgeList, root: NodeId) -> Result<(EulerTour, NodeStats)> {
    let tour = linearize(build_half_edges(tree_edges)?, root)?;
    let stats = node_stats(&tour);
    Ok((tour, stats))
}
