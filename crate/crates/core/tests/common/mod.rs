//! Sequential oracles shared by the integration suites.

#![allow(dead_code)]

use std::collections::VecDeque;

use etgraph::euler::{self, NodeStats};
use etgraph::lca::InlabelIndex;
use etgraph::generators::{self, Grasp, GraspParams};
use etgraph::{EdgeList, Graph, NodeId, RootedTree, NONE};

pub fn levels_by_walk(t: &RootedTree) -> Vec<u32> {
    (0..t.len() as NodeId)
        .map(|mut v| {
            let mut d = 0;
            while t.parent(v) != NONE {
                v = t.parent(v);
                d += 1;
            }
            d
        })
        .collect()
}

pub fn walk_up_lca(t: &RootedTree, level: &[u32], mut x: NodeId, mut y: NodeId) -> NodeId {
    while level[x as usize] > level[y as usize] {
        x = t.parent(x);
    }
    while level[y as usize] > level[x as usize] {
        y = t.parent(y);
    }
    while x != y {
        x = t.parent(x);
        y = t.parent(y);
    }
    x
}

/// Iterative DFS over an unrooted tree that, on entering `v` from `p`,
/// visits the remaining neighbours in ascending circular order after `p`.
/// The root starts from its smallest neighbour.
pub fn dcel_order_stats(edges: &EdgeList, root: NodeId) -> NodeStats {
    let n = edges.num_nodes();
    let mut nbrs = vec![Vec::new(); n];
    for &(u, v) in edges.edges() {
        nbrs[u as usize].push(v);
        nbrs[v as usize].push(u);
    }
    for list in &mut nbrs {
        list.sort_unstable();
    }
    let mut stats = NodeStats {
        preorder: vec![0; n],
        size: vec![1; n],
        level: vec![0; n],
        parent: vec![NONE; n],
    };
    let mut counter = 0;
    let mut order = Vec::with_capacity(n);
    // (node, rotated neighbour list, cursor)
    let mut stack: Vec<(NodeId, Vec<NodeId>, usize)> = Vec::new();
    let enter = |v: NodeId, from: NodeId, nbrs: &[Vec<NodeId>]| -> Vec<NodeId> {
        let list = &nbrs[v as usize];
        if from == NONE {
            return list.clone();
        }
        let at = list.iter().position(|&w| w == from).unwrap();
        list[at + 1..].iter().chain(&list[..at]).copied().collect()
    };
    counter += 1;
    stats.preorder[root as usize] = counter;
    order.push(root);
    stack.push((root, enter(root, NONE, &nbrs), 0));
    while let Some((v, list, cursor)) = stack.last_mut() {
        if *cursor == list.len() {
            stack.pop();
            continue;
        }
        let w = list[*cursor];
        *cursor += 1;
        let v = *v;
        stats.parent[w as usize] = v;
        stats.level[w as usize] = stats.level[v as usize] + 1;
        counter += 1;
        stats.preorder[w as usize] = counter;
        order.push(w);
        let rotated = enter(w, v, &nbrs);
        stack.push((w, rotated, 0));
    }
    for &v in order.iter().rev() {
        let p = stats.parent[v as usize];
        if p != NONE {
            stats.size[p as usize] += stats.size[v as usize];
        }
    }
    stats
}

/// Inorder interval of node `b` in the infinite complete binary tree.
pub fn b_subtree(b: u32) -> (u64, u64) {
    let half = 1u64 << b.trailing_zeros();
    (b as u64 + 1 - half, b as u64 + half - 1)
}

/// Tree catalogue of the LCA suite: grasp with gamma in {1, 4, inf} and
/// Barabasi trees, sizes in [1, 512], every third one relabeled.
pub fn lca_suite_trees(count: usize, seed: u64) -> Vec<(String, RootedTree)> {
    let mut rng = generators::rng(seed);
    (0..count)
        .map(|i| {
            let n = 1 + if i % 2 == 0 {
                generators::uniform_below(&mut rng, 128)
            } else {
                generators::uniform_below(&mut rng, 512)
            } as usize;
            let tree_seed = seed.wrapping_mul(1000).wrapping_add(i as u64);
            let (label, tree) = match i % 4 {
                0 => ("grasp1", grasp(n, Grasp::Finite(1), tree_seed)),
                1 => ("grasp4", grasp(n, Grasp::Finite(4), tree_seed)),
                2 => ("grasp-inf", grasp(n, Grasp::Infinite, tree_seed)),
                _ => ("barabasi", generators::barabasi_tree(n, tree_seed).unwrap()),
            };
            let tree = if i % 3 == 0 { generators::permute_labels(&tree, tree_seed).0 } else { tree };
            (format!("{label} n={n} seed={tree_seed}"), tree)
        })
        .collect()
}

fn grasp(n: usize, gamma: Grasp, seed: u64) -> RootedTree {
    generators::grasp_tree(GraspParams { n, gamma, seed }).unwrap()
}

/// Query set: every ordered pair for small trees, 10^4 samples otherwise.
pub fn lca_suite_queries(n: usize, seed: u64) -> Vec<(NodeId, NodeId)> {
    if n <= 128 {
        let n = n as NodeId;
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect()
    } else {
        generators::sample_queries(n, 10_000, seed)
    }
}

pub fn graph(n: usize, edges: &[(NodeId, NodeId)]) -> Graph {
    Graph::new(EdgeList::new(n, edges.to_vec()).unwrap())
}

pub fn canonical_bridge_cases() -> Vec<(&'static str, Graph)> {
    vec![
        ("tree", graph(7, &[(0, 1), (1, 2), (1, 3), (3, 4), (0, 5), (5, 6)])),
        ("cycle", graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])),
        ("k4", graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])),
        ("triangle+pendant", graph(4, &[(0, 1), (1, 2), (0, 2), (2, 3)])),
        ("two-triangles", graph(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])),
    ]
}

/// Bridge-suite graph `i`: sizes up to 256 nodes and 1024 edges with the
/// density cycling through sparse, medium and dense.
pub fn bridge_suite_graph(i: u64) -> (String, Graph) {
    let mut rng = generators::rng(0xb41d_9e00 + i);
    let n = 2 + generators::uniform_below(&mut rng, 255) as usize;
    let max_m = (n * (n - 1) / 2).min(1024);
    let lo = n - 1;
    let span = (max_m - lo) as u64;
    let m = lo + match i % 3 {
        0 => generators::uniform_below(&mut rng, (span / 8).max(1)),
        1 => generators::uniform_below(&mut rng, (span / 2).max(1)),
        _ => generators::uniform_below(&mut rng, span + 1),
    } as usize;
    let m = m.min(max_m);
    let el = generators::random_connected_graph(n, m, i).unwrap();
    (format!("random n={n} m={m} seed={i}"), Graph::new(el))
}

pub fn is_connected_without(g: &Graph, skip: usize) -> bool {
    let n = g.num_nodes();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0 as NodeId]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for (v, e) in g.adjacency().incident(u) {
            if e as usize != skip && !seen[v as usize] {
                seen[v as usize] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}

/// Path partition, inorder, interval and head predicates.
pub fn inlabel_violations(tree: &RootedTree) -> Vec<String> {
    let n = tree.len();
    let idx = InlabelIndex::build(tree).unwrap();
    let (_, stats) = euler::root_tree(&tree.to_edge_list(), tree.root()).unwrap();
    let mut bad = Vec::new();
    let mut by_label: Vec<Vec<NodeId>> = vec![Vec::new(); n + 1];
    for v in 0..n as NodeId {
        let label = idx.inlabel(v);
        let (l, r) = (stats.preorder[v as usize], stats.preorder[v as usize] + stats.size[v as usize] - 1);
        if !(l..=r).contains(&label) {
            bad.push(format!("inlabel({v}) = {label} outside [{l}, {r}]"));
        }
        if n <= 512 && (l..=r).any(|x| x != label && x.trailing_zeros() >= label.trailing_zeros()) {
            bad.push(format!("inlabel({v}) = {label} not the unique max-trailing-zeros value"));
        }
        by_label[label as usize].push(v);
        let p = tree.parent(v);
        if p != NONE {
            let (lo, hi) = b_subtree(idx.inlabel(p));
            if !(lo..=hi).contains(&(label as u64)) {
                bad.push(format!("inlabel({v}) = {label} not below inlabel({p}) in B"));
            }
        }
    }
    for (label, nodes) in by_label.iter_mut().enumerate() {
        if nodes.is_empty() {
            continue;
        }
        nodes.sort_by_key(|&v| idx.level(v));
        let head = nodes[0];
        if idx.head(label as u32) != head {
            bad.push(format!("head({label}) = {} but minimum-level node is {head}", idx.head(label as u32)));
        }
        for w in nodes.windows(2) {
            if tree.parent(w[1]) != w[0] {
                bad.push(format!("label {label}: {} is not the child of {}", w[1], w[0]));
            }
        }
    }
    bad
}

fn bytes_u32(values: impl IntoIterator<Item = u32>) -> Vec<u8> {
    values.into_iter().flat_map(u32::to_le_bytes).collect()
}

fn bytes_bool(values: &[bool]) -> Vec<u8> {
    values.iter().map(|&b| b as u8).collect()
}

/// Serialized output of every generator and engine on fixed inputs. Run
/// it under different pool sizes and compare.
pub fn determinism_snapshot() -> Vec<(String, Vec<u8>)> {
    use etgraph::bridges::{bfs_tree, hooking_forest};
    use etgraph::lca::answer_batch;
    use etgraph::par::{self, ListArray, TAIL};
    use etgraph::{BridgeAlgorithm, LcaAlgorithm};

    let mut out = Vec::new();
    let mut push = |name: &str, bytes: Vec<u8>| out.push((name.to_string(), bytes));

    let wide = grasp(200_000, Grasp::Infinite, 1);
    let deep = grasp(100_000, Grasp::Finite(10), 2);
    let scale_free = generators::barabasi_tree(100_000, 3).unwrap();
    let (permuted, perm) = generators::permute_labels(&wide, 4);
    for (name, t) in [("grasp-inf", &wide), ("grasp-10", &deep), ("barabasi", &scale_free), ("permuted", &permuted)] {
        push(&format!("gen {name}"), bytes_u32(t.parents().iter().copied()));
    }
    push("gen permutation", bytes_u32(perm));
    let queries = generators::sample_queries(permuted.len(), 3000, 5);
    push("gen queries", bytes_u32(queries.iter().flat_map(|&(x, y)| [x, y])));
    let graph_edges = generators::random_connected_graph(5000, 20_000, 6).unwrap();
    push("gen graph", bytes_u32(graph_edges.edges().iter().flat_map(|&(u, v)| [u, v])));

    let order = generators::random_permutation(300_000, 7);
    let mut succ = vec![TAIL; order.len()];
    for w in order.windows(2) {
        succ[w[0] as usize] = w[1];
    }
    let list = ListArray::new(succ, order[0]);
    push("list_rank", bytes_u32(par::list_rank(&list).unwrap()));
    let values: Vec<i64> = (0..300_000).map(|i| (i % 7) - 3).collect();
    let scan = par::exclusive_scan(&values, 0, |a, b| a + b);
    push("exclusive_scan", scan.iter().flat_map(|v| v.to_le_bytes()).collect());
    push("doubling levels", bytes_u32(par::ancestor_doubling_levels(&deep)));

    let (tour, stats) = euler::root_tree(&permuted.to_edge_list(), permuted.root()).unwrap();
    push("tour", bytes_u32(tour.order().iter().copied()));
    for (name, v) in [("preorder", &stats.preorder), ("size", &stats.size), ("level", &stats.level), ("parent", &stats.parent)] {
        push(&format!("stats {name}"), bytes_u32(v.iter().copied()));
    }
    let idx = InlabelIndex::build(&permuted).unwrap();
    let n = permuted.len() as NodeId;
    push("inlabel", bytes_u32((0..n).map(|v| idx.inlabel(v))));
    push("ascendant", (0..n).flat_map(|v| idx.ascendant(v).to_le_bytes()).collect());

    for algo in LcaAlgorithm::ALL {
        let engine = algo.build(&permuted).unwrap();
        for batch in [1, 37, queries.len()] {
            push(&format!("lca {algo} batch={batch}"), bytes_u32(answer_batch(engine.as_ref(), &queries, batch)));
        }
    }

    let g = Graph::new(graph_edges);
    push("hooking forest", bytes_bool(&hooking_forest(&g)));
    push("bfs parents", bytes_u32(bfs_tree(&g, 0).unwrap().rooted.parents().iter().copied()));
    for algo in BridgeAlgorithm::ALL {
        let input = if algo == BridgeAlgorithm::BruteForce { Graph::new(generators::random_connected_graph(300, 400, 8).unwrap()) } else { g.clone() };
        push(&format!("bridges {algo}"), bytes_bool(&algo.run(&input).unwrap().is_bridge));
    }
    out
}

pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap().install(f)
}
