use etgraph::bridges::{self, bfs_tree, low_high, spanning_tree_hooking};
use etgraph::generators;
use etgraph::{BridgeAlgorithm, BridgeMask, Graph, NodeId, NONE};
use proptest::prelude::*;

mod common;

fn oracle(g: &Graph) -> BridgeMask {
    BridgeMask { is_bridge: (0..g.num_edges()).map(|e| !common::is_connected_without(g, e)).collect() }
}

#[test]
fn engines_match_oracle_on_suite() {
    let mut cases: Vec<(String, Graph)> =
        common::canonical_bridge_cases().into_iter().map(|(name, g)| (name.to_string(), g)).collect();
    cases.extend((0..200).map(common::bridge_suite_graph));
    for (name, g) in &cases {
        let want = oracle(g);
        for algo in BridgeAlgorithm::ALL {
            assert_eq!(algo.run(g).unwrap(), want, "{algo} on {name}");
        }
    }
}

#[test]
fn low_high_matches_subtree_aggregation() {
    for i in 0..60 {
        let (name, g) = common::bridge_suite_graph(i);
        let st = spanning_tree_hooking(&g).unwrap();
        let stats = st.stats.clone().unwrap();
        let lh = low_high(&g, &st, &stats);

        let n = g.num_nodes();
        let mut low: Vec<u32> = stats.preorder.clone();
        let mut high = low.clone();
        for (e, &(u, v)) in g.edge_list().edges().iter().enumerate() {
            if !st.is_tree_edge[e] {
                let (pu, pv) = (stats.preorder[u as usize], stats.preorder[v as usize]);
                low[u as usize] = low[u as usize].min(pv);
                high[u as usize] = high[u as usize].max(pv);
                low[v as usize] = low[v as usize].min(pu);
                high[v as usize] = high[v as usize].max(pu);
            }
        }
        let mut by_pre: Vec<NodeId> = (0..n as NodeId).collect();
        by_pre.sort_by_key(|&v| std::cmp::Reverse(stats.preorder[v as usize]));
        for v in by_pre {
            let p = stats.parent[v as usize];
            if p != NONE {
                low[p as usize] = low[p as usize].min(low[v as usize]);
                high[p as usize] = high[p as usize].max(high[v as usize]);
            }
        }
        assert_eq!(lh.low, low, "{name}");
        assert_eq!(lh.high, high, "{name}");
        for v in 0..n {
            assert!(lh.low[v] <= stats.preorder[v] && stats.preorder[v] <= lh.high[v]);
        }
    }
}

#[test]
fn tv_independent_of_spanning_tree() {
    for i in 0..100 {
        let (name, g) = common::bridge_suite_graph(i);
        let hooked = bridges::tv_bridges_on(&g, &spanning_tree_hooking(&g).unwrap()).unwrap();
        for root in [0, (g.num_nodes() / 2) as NodeId, (g.num_nodes() - 1) as NodeId] {
            let bfs = bridges::tv_bridges_on(&g, &bfs_tree(&g, root).unwrap()).unwrap();
            assert_eq!(bfs, hooked, "{name} root {root}");
        }
    }
}

#[test]
fn spanning_trees_are_valid() {
    for i in 0..100 {
        let (name, g) = common::bridge_suite_graph(i);
        for st in [spanning_tree_hooking(&g).unwrap(), bfs_tree(&g, 0).unwrap()] {
            assert_eq!(st.tree_edge_count(), g.num_nodes() - 1, "{name}");
            assert_eq!(st.level, common::levels_by_walk(&st.rooted), "{name}");
            for v in 0..g.num_nodes() {
                let p = st.rooted.parent(v as NodeId);
                if p == NONE {
                    assert_eq!(st.parent_edge[v], NONE);
                    continue;
                }
                let e = st.parent_edge[v];
                assert!(st.is_tree_edge[e as usize]);
                let (a, b) = g.edge(e);
                assert!((a, b) == (p, v as NodeId) || (b, a) == (p, v as NodeId), "{name}");
            }
        }
        // BFS levels are shortest distances
        let bfs = bfs_tree(&g, 0).unwrap();
        for &(u, v) in g.edge_list().edges() {
            assert!(bfs.level[u as usize].abs_diff(bfs.level[v as usize]) <= 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bridge_counts_on_structured_inputs(n in 2usize..300, seed in any::<u64>()) {
        let tree = generators::random_connected_graph(n, n - 1, seed).unwrap();
        let g = Graph::new(tree);
        for algo in [BridgeAlgorithm::Tv, BridgeAlgorithm::Ck, BridgeAlgorithm::Hybrid, BridgeAlgorithm::Dfs] {
            prop_assert_eq!(algo.run(&g).unwrap().count(), n - 1);
        }
        // a ring is 2-edge-connected
        if n >= 3 {
            let ring: Vec<(NodeId, NodeId)> = (0..n as NodeId).map(|v| (v, (v + 1) % n as NodeId)).collect();
            let ring = common::graph(n, &ring);
            for algo in [BridgeAlgorithm::Tv, BridgeAlgorithm::Ck, BridgeAlgorithm::Hybrid, BridgeAlgorithm::Dfs] {
                prop_assert_eq!(algo.run(&ring).unwrap().count(), 0);
            }
        }
    }

    #[test]
    fn non_tree_edges_never_bridges(i in 0u64..10_000) {
        let (_, g) = common::bridge_suite_graph(i);
        let mask = bridges::tv_bridges(&g).unwrap();
        for st in [spanning_tree_hooking(&g).unwrap(), bfs_tree(&g, 0).unwrap()] {
            for e in 0..g.num_edges() {
                prop_assert!(!(mask.is_bridge[e] && !st.is_tree_edge[e]));
            }
        }
    }
}
