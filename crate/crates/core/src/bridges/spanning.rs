//! Spanning trees for the bridge engines: a parallel hooking forest rooted
//! through the Euler tour, and a level-synchronous BFS tree.

use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::euler::{self, NodeStats};
use crate::graph::{EdgeList, Graph, NodeId, RootedTree, NONE};

/// Rooted spanning tree of a connected graph.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    /// Indexed by edge id of the input graph.
    pub is_tree_edge: Vec<bool>,
    pub rooted: RootedTree,
    /// Id of the edge `{v, parent(v)}`; `NONE` for the root.
    pub parent_edge: Vec<u32>,
    pub level: Vec<u32>,
    /// Present when the tree was rooted through the Euler tour.
    pub stats: Option<NodeStats>,
}

impl SpanningTree {
    pub fn root(&self) -> NodeId {
        self.rooted.root()
    }

    pub fn tree_edge_count(&self) -> usize {
        self.is_tree_edge.iter().filter(|&&t| t).count()
    }
}

const NO_EDGE: u32 = u32::MAX;

/// Spanning forest by parallel Boruvka-style hooking. Edges are ranked by
/// their canonical `(min, max)` endpoint pair; in every round each
/// component claims its lowest-ranked outgoing edge with an atomic
/// `fetch_min`, then hooks onto the component at the other end. Two
/// components that claimed the same edge form the only possible cycle; the
/// fix-up pass keeps the smaller representative as root. The selected set
/// is the minimum spanning forest under the rank order, so it does not
/// depend on scheduling.
pub fn hooking_forest(g: &Graph) -> Vec<bool> {
    let n = g.num_nodes();
    let m = g.num_edges();
    let edges = g.edge_list().edges();

    let mut by_rank: Vec<u32> = (0..m as u32).collect();
    by_rank.par_sort_unstable_by_key(|&e| {
        let (u, v) = edges[e as usize];
        (u.min(v), u.max(v))
    });
    let mut rank = vec![0u32; m];
    for (r, &e) in by_rank.iter().enumerate() {
        rank[e as usize] = r as u32;
    }

    let is_tree: Vec<AtomicBool> = (0..m).map(|_| AtomicBool::new(false)).collect();
    let mut comp: Vec<NodeId> = (0..n as NodeId).collect();
    let mut active: Vec<u32> = (0..m as u32).collect();
    let best: Vec<AtomicU32> = (0..n).map(|_| AtomicU32::new(NO_EDGE)).collect();

    while !active.is_empty() {
        active.par_iter().for_each(|&e| {
            let (u, v) = edges[e as usize];
            let r = rank[e as usize];
            best[comp[u as usize] as usize].fetch_min(r, Ordering::Relaxed);
            best[comp[v as usize] as usize].fetch_min(r, Ordering::Relaxed);
        });

        let mut link: Vec<NodeId> = (0..n)
            .into_par_iter()
            .map(|c| {
                let r = best[c].load(Ordering::Relaxed);
                if r == NO_EDGE {
                    return c as NodeId;
                }
                let e = by_rank[r as usize];
                let (u, v) = edges[e as usize];
                let (cu, cv) = (comp[u as usize], comp[v as usize]);
                let other = if cu == c as NodeId { cv } else { cu };
                let mutual = best[other as usize].load(Ordering::Relaxed) == r;
                if mutual && (c as NodeId) < other {
                    c as NodeId
                } else {
                    is_tree[e as usize].store(true, Ordering::Relaxed);
                    other
                }
            })
            .collect();

        // Hooks form a forest of stars-to-be; flatten it by pointer jumping.
        loop {
            let next: Vec<NodeId> = link.par_iter().map(|&p| link[p as usize]).collect();
            if next == link {
                break;
            }
            link = next;
        }
        comp.par_iter_mut().for_each(|c| *c = link[*c as usize]);
        best.par_iter().for_each(|b| b.store(NO_EDGE, Ordering::Relaxed));
        active = active
            .into_par_iter()
            .filter(|&e| {
                let (u, v) = edges[e as usize];
                comp[u as usize] != comp[v as usize]
            })
            .collect();
    }
    is_tree.into_iter().map(AtomicBool::into_inner).collect()
}

fn check_forest_spans(g: &Graph, is_tree: &[bool]) -> Result<()> {
    let n = g.num_nodes();
    let count = is_tree.par_iter().filter(|&&t| t).count();
    if n > 0 && count != n - 1 {
        return Err(Error::Disconnected { reached: count + 1, n });
    }
    Ok(())
}

/// Roots a spanning tree given as an edge mask with the Euler tour and
/// derives parents, levels and the other node statistics from it.
pub fn root_with_euler_tour(g: &Graph, is_tree_edge: Vec<bool>, root: NodeId) -> Result<SpanningTree> {
    check_forest_spans(g, &is_tree_edge)?;
    let n = g.num_nodes();
    let tree_ids: Vec<u32> = (0..g.num_edges() as u32)
        .into_par_iter()
        .filter(|&e| is_tree_edge[e as usize])
        .collect();
    let tree_edges = EdgeList::from_trusted(n, tree_ids.par_iter().map(|&e| g.edge(e)).collect());
    let (tour, stats) = euler::root_tree(&tree_edges, root)?;

    let mut parent_edge = vec![NONE; n];
    let h = tour.half_edges();
    for &e in tour.order() {
        if tour.is_down(e) {
            parent_edge[h.dst(e) as usize] = tree_ids[(e >> 1) as usize];
        }
    }
    let rooted = RootedTree::from_trusted(root, stats.parent.clone());
    Ok(SpanningTree {
        is_tree_edge,
        rooted,
        parent_edge,
        level: stats.level.clone(),
        stats: Some(stats),
    })
}

/// Hooking forest rooted at node 0.
pub fn spanning_tree_hooking(g: &Graph) -> Result<SpanningTree> {
    if g.num_nodes() == 0 {
        return Err(Error::InvalidEdgeList("graph has no nodes".into()));
    }
    root_with_euler_tour(g, hooking_forest(g), 0)
}

const UNVISITED: u32 = u32::MAX;

/// Level-synchronous BFS. Every newly reached node takes the smallest id
/// among its frontier neighbours as parent.
pub fn bfs_tree(g: &Graph, root: NodeId) -> Result<SpanningTree> {
    let n = g.num_nodes();
    if root as usize >= n {
        return Err(Error::InvalidTree(format!("root {root} outside [0, {n})")));
    }
    let adj = g.adjacency();
    let level: Vec<AtomicU32> = (0..n).map(|_| AtomicU32::new(UNVISITED)).collect();
    // parent << 32 | edge id, so fetch_min picks the smallest parent.
    let link: Vec<AtomicU64> = (0..n).map(|_| AtomicU64::new(u64::MAX)).collect();
    level[root as usize].store(0, Ordering::Relaxed);

    let mut frontier = vec![root];
    let mut depth = 0u32;
    let mut reached = 1usize;
    while !frontier.is_empty() {
        let mut next: Vec<NodeId> = frontier
            .par_iter()
            .flat_map_iter(|&u| {
                let level = &level;
                let link = &link;
                adj.incident(u).filter_map(move |(v, e)| {
                    let lv = level[v as usize].load(Ordering::Relaxed);
                    if lv != UNVISITED && lv != depth + 1 {
                        return None;
                    }
                    link[v as usize].fetch_min((u as u64) << 32 | e as u64, Ordering::Relaxed);
                    level[v as usize]
                        .compare_exchange(UNVISITED, depth + 1, Ordering::Relaxed, Ordering::Relaxed)
                        .ok()
                        .map(|_| v)
                })
            })
            .collect();
        next.par_sort_unstable();
        reached += next.len();
        frontier = next;
        depth += 1;
    }
    if reached != n {
        return Err(Error::Disconnected { reached, n });
    }

    let mut parent = vec![NONE; n];
    let mut parent_edge = vec![NONE; n];
    let mut is_tree_edge = vec![false; g.num_edges()];
    for v in 0..n {
        if v == root as usize {
            continue;
        }
        let l = link[v].load(Ordering::Relaxed);
        parent[v] = (l >> 32) as NodeId;
        parent_edge[v] = l as u32;
        is_tree_edge[l as u32 as usize] = true;
    }
    let level = level.into_iter().map(AtomicU32::into_inner).collect();
    Ok(SpanningTree {
        is_tree_edge,
        rooted: RootedTree::from_trusted(root, parent),
        parent_edge,
        level,
        stats: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::union_find::DisjointSets;

    fn graph(n: usize, edges: &[(NodeId, NodeId)]) -> Graph {
        Graph::new(EdgeList::new(n, edges.to_vec()).unwrap())
    }

    fn selected(g: &Graph, mask: &[bool]) -> Vec<(NodeId, NodeId)> {
        (0..g.num_edges() as u32).filter(|&e| mask[e as usize]).map(|e| g.edge(e)).collect()
    }

    /// Sequential Kruskal over the canonical edge order.
    fn kruskal(g: &Graph) -> Vec<bool> {
        let mut ids: Vec<u32> = (0..g.num_edges() as u32).collect();
        ids.sort_by_key(|&e| {
            let (u, v) = g.edge(e);
            (u.min(v), u.max(v))
        });
        let mut ds = DisjointSets::new(g.num_nodes());
        let mut mask = vec![false; g.num_edges()];
        for e in ids {
            let (u, v) = g.edge(e);
            if ds.union(u, v) {
                mask[e as usize] = true;
            }
        }
        mask
    }

    #[test]
    fn hooking_examples() {
        let path = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(hooking_forest(&path), vec![true; 3]);

        let tri = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(selected(&tri, &hooking_forest(&tri)), vec![(0, 1), (0, 2)]);

        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(selected(&c4, &hooking_forest(&c4)), vec![(0, 1), (1, 2), (3, 0)]);
    }

    #[test]
    fn hooking_matches_kruskal_on_random_graphs() {
        for seed in 0..40 {
            let el = crate::generators::random_connected_graph(120, 300, seed).unwrap();
            let g = Graph::new(el);
            assert_eq!(hooking_forest(&g), kruskal(&g), "seed {seed}");
        }
    }

    #[test]
    fn hooking_tree_is_rooted() {
        let tri = graph(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        let st = spanning_tree_hooking(&tri).unwrap();
        assert_eq!(st.tree_edge_count(), 3);
        assert_eq!(st.rooted.parents(), &[NONE, 0, 0, 2]);
        assert_eq!(st.level, vec![0, 1, 1, 2]);
        assert_eq!(st.parent_edge, vec![NONE, 0, 2, 3]);
    }

    #[test]
    fn disconnected_rejected() {
        let g = graph(4, &[(0, 1), (2, 3)]);
        assert!(matches!(spanning_tree_hooking(&g), Err(Error::Disconnected { .. })));
        assert!(matches!(bfs_tree(&g, 0), Err(Error::Disconnected { reached: 2, n: 4 })));
    }

    #[test]
    fn bfs_examples() {
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(bfs_tree(&star, 0).unwrap().level, vec![0, 1, 1, 1, 1]);

        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let t = bfs_tree(&c5, 0).unwrap();
        assert_eq!(t.level, vec![0, 1, 2, 2, 1]);
        assert_eq!(t.rooted.parents(), &[NONE, 0, 1, 4, 0]);

        let path = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let t = bfs_tree(&path, 3).unwrap();
        assert_eq!(t.is_tree_edge, vec![true; 3]);
        assert_eq!(t.rooted.parents(), &[1, 2, 3, NONE]);
    }

    #[test]
    fn bfs_prefers_smallest_parent() {
        // 0 - {1, 2}, both adjacent to 3
        let g = graph(4, &[(0, 2), (0, 1), (2, 3), (1, 3)]);
        let t = bfs_tree(&g, 0).unwrap();
        assert_eq!(t.rooted.parent(3), 1);
        assert_eq!(t.parent_edge[3], 3);
    }
}
