//! Bridge finding on connected undirected graphs.
//!
//! Engines:
//! - `tv`: hooking spanning tree, Euler tour rooting, low/high over
//!   preorder intervals with a range index.
//! - `ck`: BFS tree, then every non-tree edge marks the tree path between
//!   its endpoints; unmarked tree edges are bridges.
//! - `hybrid`: the `ck` marking phase on the hooking tree rooted through
//!   the Euler tour.
//! - `dfs`: sequential DFS low-point baseline.
//! - `brute-force`: delete each edge and test connectivity.
//!
//! The marking phase does O(m d) work for tree depth d.

mod spanning;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

pub use spanning::{bfs_tree, hooking_forest, root_with_euler_tour, spanning_tree_hooking, SpanningTree};

use crate::error::{Error, Result};
use crate::euler::{self, NodeStats};
use crate::graph::{EdgeList, Graph, NodeId, NONE};
use crate::par::{self, RangeIndex};

/// Per-edge bridge flags, indexed like the input edge list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BridgeMask {
    pub is_bridge: Vec<bool>,
}

impl BridgeMask {
    pub fn count(&self) -> usize {
        self.is_bridge.iter().filter(|&&b| b).count()
    }

    pub fn bridge_ids(&self) -> Vec<u32> {
        (0..self.is_bridge.len() as u32).filter(|&e| self.is_bridge[e as usize]).collect()
    }

    /// First edge on which the masks disagree.
    pub fn first_difference(&self, other: &BridgeMask) -> Option<u32> {
        self.is_bridge
            .iter()
            .zip(&other.is_bridge)
            .position(|(a, b)| a != b)
            .map(|e| e as u32)
    }
}

/// Subtree minimum and maximum preorder reachable over one non-tree edge,
/// seeded with each node's own preorder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowHigh {
    pub low: Vec<u32>,
    pub high: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BridgeAlgorithm {
    Tv,
    Ck,
    Hybrid,
    Dfs,
    BruteForce,
}

impl BridgeAlgorithm {
    pub const ALL: [BridgeAlgorithm; 5] = [
        BridgeAlgorithm::Tv,
        BridgeAlgorithm::Ck,
        BridgeAlgorithm::Hybrid,
        BridgeAlgorithm::Dfs,
        BridgeAlgorithm::BruteForce,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BridgeAlgorithm::Tv => "tv",
            BridgeAlgorithm::Ck => "ck",
            BridgeAlgorithm::Hybrid => "hybrid",
            BridgeAlgorithm::Dfs => "dfs",
            BridgeAlgorithm::BruteForce => "brute-force",
        }
    }

    pub fn run(self, g: &Graph) -> Result<BridgeMask> {
        Ok(self.run_profiled(g)?.mask)
    }

    /// Runs the engine and reports the wall time of each phase.
    pub fn run_profiled(self, g: &Graph) -> Result<BridgeRun> {
        match self {
            BridgeAlgorithm::Tv => tv_profiled(g),
            BridgeAlgorithm::Ck => ck_profiled(g),
            BridgeAlgorithm::Hybrid => hybrid_profiled(g),
            BridgeAlgorithm::Dfs => {
                let start = Instant::now();
                let mask = dfs_bridges(g)?;
                Ok(BridgeRun { mask, phases: vec![("dfs", start.elapsed())] })
            }
            BridgeAlgorithm::BruteForce => {
                let start = Instant::now();
                let mask = brute_force_bridges(g)?;
                Ok(BridgeRun { mask, phases: vec![("brute_force", start.elapsed())] })
            }
        }
    }
}

impl fmt::Display for BridgeAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BridgeAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown bridge engine {s:?} (expected tv, ck, hybrid, dfs or brute-force)"))
    }
}

/// Engine output plus per-phase wall times, in execution order.
#[derive(Clone, Debug)]
pub struct BridgeRun {
    pub mask: BridgeMask,
    pub phases: Vec<(&'static str, Duration)>,
}

struct Phases(Vec<(&'static str, Duration)>);

impl Phases {
    fn time<T>(&mut self, name: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.push((name, start.elapsed()));
        out
    }
}

fn check_nonempty(g: &Graph) -> Result<()> {
    if g.num_nodes() == 0 {
        return Err(Error::InvalidEdgeList("graph has no nodes".into()));
    }
    Ok(())
}

/// Low/high per node. The per-node extremes over non-tree neighbours come
/// from a segmented reduction over adjacency slices; subtree aggregation is
/// a range query over the preorder-ordered array.
pub fn low_high(g: &Graph, st: &SpanningTree, stats: &NodeStats) -> LowHigh {
    let n = g.num_nodes();
    let adj = g.adjacency();
    let pre = &stats.preorder;

    let mut values = vec![0i64; adj.neighbors().len()];
    par::split_segments_mut(&mut values, adj.offsets())
        .into_par_iter()
        .enumerate()
        .for_each(|(v, seg)| {
            for (slot, (w, e)) in seg.iter_mut().zip(adj.incident(v as NodeId)) {
                let end = if st.is_tree_edge[e as usize] { v } else { w as usize };
                *slot = pre[end] as i64;
            }
        });
    let local_min = par::segmented_reduce(&values, adj.offsets(), i64::MAX, i64::min);
    let local_max = par::segmented_reduce(&values, adj.offsets(), i64::MIN, i64::max);

    let mut by_pre_min = vec![0i64; n];
    let mut by_pre_max = vec![0i64; n];
    for v in 0..n {
        let own = pre[v] as i64;
        by_pre_min[pre[v] as usize - 1] = local_min[v].min(own);
        by_pre_max[pre[v] as usize - 1] = local_max[v].max(own);
    }
    let min_index = RangeIndex::build(&by_pre_min);
    let max_index = RangeIndex::build(&by_pre_max);

    let (low, high) = (0..n)
        .into_par_iter()
        .map(|v| {
            let l = pre[v] as usize - 1;
            let r = l + stats.size[v] as usize - 1;
            (min_index.min_unchecked(l, r) as u32, max_index.max_unchecked(l, r) as u32)
        })
        .unzip();
    LowHigh { low, high }
}

fn child_edges_to_mask(m: usize, st: &SpanningTree, is_bridge_child: impl Fn(usize) -> bool + Sync) -> BridgeMask {
    let bridges: Vec<u32> = (0..st.parent_edge.len())
        .into_par_iter()
        .filter(|&v| st.parent_edge[v] != NONE && is_bridge_child(v))
        .map(|v| st.parent_edge[v])
        .collect();
    let mut is_bridge = vec![false; m];
    for e in bridges {
        is_bridge[e as usize] = true;
    }
    BridgeMask { is_bridge }
}

/// Tree edge `{u, parent(u)}` is a bridge iff both low(u) and high(u) stay
/// inside `[preorder(u), preorder(u) + size(u))`.
fn tv_criterion(g: &Graph, st: &SpanningTree, stats: &NodeStats) -> BridgeMask {
    let lh = low_high(g, st, stats);
    child_edges_to_mask(g.num_edges(), st, |v| {
        let start = stats.preorder[v];
        lh.low[v] >= start && lh.high[v] < start + stats.size[v]
    })
}

fn tv_profiled(g: &Graph) -> Result<BridgeRun> {
    check_nonempty(g)?;
    let mut phases = Phases(Vec::new());
    let forest = phases.time("spanning_tree", || hooking_forest(g));
    let st = phases.time("euler_tour", || root_with_euler_tour(g, forest, 0))?;
    let stats = st.stats.as_ref().expect("euler-rooted tree carries stats");
    let mask = phases.time("low_high", || tv_criterion(g, &st, stats));
    Ok(BridgeRun { mask, phases: phases.0 })
}

pub fn tv_bridges(g: &Graph) -> Result<BridgeMask> {
    Ok(tv_profiled(g)?.mask)
}

/// TV criterion on a caller-supplied spanning tree. Trees without Euler
/// statistics (BFS trees) are re-rooted through the tour first.
pub fn tv_bridges_on(g: &Graph, st: &SpanningTree) -> Result<BridgeMask> {
    let owned;
    let stats = match &st.stats {
        Some(s) => s,
        None => {
            let tree_edges = EdgeList::from_trusted(
                g.num_nodes(),
                (0..g.num_edges() as u32)
                    .filter(|&e| st.is_tree_edge[e as usize])
                    .map(|e| g.edge(e))
                    .collect(),
            );
            owned = euler::root_tree(&tree_edges, st.root())?.1;
            &owned
        }
    };
    Ok(tv_criterion(g, st, stats))
}

/// Marks the tree path between the endpoints of every non-tree edge. The
/// deeper walker advances first; at equal levels both advance. Marks are
/// idempotent stores, so interleaving does not affect the result.
pub fn ck_marking(g: &Graph, st: &SpanningTree) -> BridgeMask {
    let n = g.num_nodes();
    let parent = st.rooted.parents();
    let level = &st.level;
    let marked: Vec<AtomicBool> = (0..n).map(|_| AtomicBool::new(false)).collect();
    g.edge_list()
        .edges()
        .par_iter()
        .enumerate()
        .filter(|&(e, _)| !st.is_tree_edge[e])
        .for_each(|(_, &(mut u, mut v))| {
            while u != v {
                let (lu, lv) = (level[u as usize], level[v as usize]);
                if lu >= lv {
                    marked[u as usize].store(true, Ordering::Relaxed);
                    u = parent[u as usize];
                }
                if lv >= lu {
                    marked[v as usize].store(true, Ordering::Relaxed);
                    v = parent[v as usize];
                }
            }
        });
    child_edges_to_mask(g.num_edges(), st, |v| !marked[v].load(Ordering::Relaxed))
}

fn ck_profiled(g: &Graph) -> Result<BridgeRun> {
    check_nonempty(g)?;
    let mut phases = Phases(Vec::new());
    let st = phases.time("spanning_tree", || bfs_tree(g, 0))?;
    let mask = phases.time("marking", || ck_marking(g, &st));
    Ok(BridgeRun { mask, phases: phases.0 })
}

pub fn ck_bridges(g: &Graph) -> Result<BridgeMask> {
    Ok(ck_profiled(g)?.mask)
}

fn hybrid_profiled(g: &Graph) -> Result<BridgeRun> {
    check_nonempty(g)?;
    let mut phases = Phases(Vec::new());
    let forest = phases.time("spanning_tree", || hooking_forest(g));
    let st = phases.time("euler_tour", || root_with_euler_tour(g, forest, 0))?;
    let mask = phases.time("marking", || ck_marking(g, &st));
    Ok(BridgeRun { mask, phases: phases.0 })
}

pub fn hybrid_bridges(g: &Graph) -> Result<BridgeMask> {
    Ok(hybrid_profiled(g)?.mask)
}

/// Iterative DFS from node 0; tree edge `{u, parent(u)}` is a bridge iff
/// `low(u) >= preorder(u)`.
pub fn dfs_bridges(g: &Graph) -> Result<BridgeMask> {
    check_nonempty(g)?;
    let n = g.num_nodes();
    let adj = g.adjacency();
    let mut pre = vec![0u32; n];
    let mut low = vec![0u32; n];
    let mut is_bridge = vec![false; g.num_edges()];
    // (node, edge to parent, next adjacency slot)
    let mut stack: Vec<(NodeId, u32, usize)> = vec![(0, NONE, adj.offsets()[0])];
    let mut counter = 1;
    pre[0] = 1;
    low[0] = 1;
    while let Some(&mut (v, via, ref mut slot)) = stack.last_mut() {
        let v = v as usize;
        if *slot < adj.offsets()[v + 1] {
            let (w, e) = (adj.neighbors()[*slot] as usize, adj.edge_ids()[*slot]);
            *slot += 1;
            if e == via {
                continue;
            }
            if pre[w] == 0 {
                counter += 1;
                pre[w] = counter;
                low[w] = counter;
                stack.push((w as NodeId, e, adj.offsets()[w]));
            } else {
                low[v] = low[v].min(pre[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                let p = p as usize;
                low[p] = low[p].min(low[v]);
                if low[v] >= pre[v] {
                    is_bridge[via as usize] = true;
                }
            }
        }
    }
    let reached = counter as usize;
    if reached != n {
        return Err(Error::Disconnected { reached, n });
    }
    Ok(BridgeMask { is_bridge })
}

/// Definitional oracle: an edge is a bridge iff removing it disconnects
/// the graph. O(m (n + m)).
pub fn brute_force_bridges(g: &Graph) -> Result<BridgeMask> {
    check_nonempty(g)?;
    let n = g.num_nodes();
    let adj = g.adjacency();
    let reach = |skip: u32| {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0 as NodeId]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for (v, e) in adj.incident(u) {
                if e != skip && !seen[v as usize] {
                    seen[v as usize] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count
    };
    let reached = reach(NONE);
    if reached != n {
        return Err(Error::Disconnected { reached, n });
    }
    let is_bridge = (0..g.num_edges() as u32)
        .into_par_iter()
        .map(|e| reach(e) != n)
        .collect();
    Ok(BridgeMask { is_bridge })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(NodeId, NodeId)]) -> Graph {
        Graph::new(EdgeList::new(n, edges.to_vec()).unwrap())
    }

    fn triangle_pendant() -> Graph {
        graph(4, &[(0, 1), (1, 2), (0, 2), (2, 3)])
    }

    #[test]
    fn low_high_tree_input() {
        let g = graph(5, &[(0, 1), (1, 2), (1, 3), (0, 4)]);
        let st = spanning_tree_hooking(&g).unwrap();
        let stats = st.stats.clone().unwrap();
        let lh = low_high(&g, &st, &stats);
        for v in 0..5 {
            assert_eq!(lh.low[v], stats.preorder[v]);
            assert_eq!(lh.high[v], stats.preorder[v] + stats.size[v] - 1);
        }
    }

    #[test]
    fn low_high_hand_example() {
        // tree {0,1},{1,2},{2,3} rooted at 0; non-tree edge {0,2}
        let el = EdgeList::new(4, vec![(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let g = Graph::new(el);
        let is_tree = vec![true, true, false, true];
        let st = root_with_euler_tour(&g, is_tree, 0).unwrap();
        let stats = st.stats.clone().unwrap();
        assert_eq!(stats.preorder, vec![1, 2, 3, 4]);
        let lh = low_high(&g, &st, &stats);
        assert_eq!(lh.low[1], 1);
        assert_eq!(lh.low[2], 1);
        assert_eq!(lh.low[3], 4);
        assert_eq!(lh.high[3], 4);
        assert_eq!(lh.high[0], 4);
    }

    #[test]
    fn canonical_cases_all_engines() {
        let tree = graph(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (0, 5)]);
        let cycle = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let twin_triangles = graph(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]);
        let pendant = triangle_pendant();
        for algo in BridgeAlgorithm::ALL {
            assert_eq!(algo.run(&tree).unwrap().count(), 5, "{algo}");
            assert_eq!(algo.run(&cycle).unwrap().count(), 0, "{algo}");
            assert_eq!(algo.run(&k4).unwrap().count(), 0, "{algo}");
            assert_eq!(algo.run(&twin_triangles).unwrap().bridge_ids(), vec![3], "{algo}");
            assert_eq!(algo.run(&pendant).unwrap().bridge_ids(), vec![3], "{algo}");
        }
    }

    #[test]
    fn trivial_graphs() {
        let single = graph(1, &[]);
        let edge = graph(2, &[(0, 1)]);
        for algo in BridgeAlgorithm::ALL {
            assert_eq!(algo.run(&single).unwrap().count(), 0);
            assert_eq!(algo.run(&edge).unwrap().bridge_ids(), vec![0]);
            assert!(algo.run(&Graph::new(EdgeList::default())).is_err());
        }
    }

    #[test]
    fn disconnected_rejected_everywhere() {
        let g = graph(5, &[(0, 1), (1, 2), (3, 4)]);
        for algo in BridgeAlgorithm::ALL {
            assert!(matches!(algo.run(&g), Err(Error::Disconnected { .. })), "{algo}");
        }
    }

    #[test]
    fn tv_is_tree_independent() {
        for seed in 0..30 {
            let g = Graph::new(crate::generators::random_connected_graph(80, 120, seed).unwrap());
            let hooked = spanning_tree_hooking(&g).unwrap();
            let bfs = bfs_tree(&g, 0).unwrap();
            let a = tv_bridges_on(&g, &hooked).unwrap();
            let b = tv_bridges_on(&g, &bfs).unwrap();
            assert_eq!(a, b);
            assert_eq!(a, tv_bridges(&g).unwrap());
        }
    }

    #[test]
    fn profiled_phases() {
        let g = triangle_pendant();
        let names = |a: BridgeAlgorithm| -> Vec<&str> {
            a.run_profiled(&g).unwrap().phases.iter().map(|p| p.0).collect()
        };
        assert_eq!(names(BridgeAlgorithm::Tv), vec!["spanning_tree", "euler_tour", "low_high"]);
        assert_eq!(names(BridgeAlgorithm::Ck), vec!["spanning_tree", "marking"]);
        assert_eq!(names(BridgeAlgorithm::Hybrid), vec!["spanning_tree", "euler_tour", "marking"]);
    }

    #[test]
    fn names_parse() {
        for a in BridgeAlgorithm::ALL {
            assert_eq!(a.name().parse::<BridgeAlgorithm>().unwrap(), a);
        }
        assert!("bfs".parse::<BridgeAlgorithm>().is_err());
    }
}
