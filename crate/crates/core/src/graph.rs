//! Graph and tree representations, text formats, and component extraction.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU32, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::par;
use crate::union_find::DisjointSets;

/// Dense 0-based node identifier.
pub type NodeId = u32;

/// Sentinel for "no node" (the root's parent, unset entries).
pub const NONE: NodeId = NodeId::MAX;

/// Undirected simple graph as a flat array of edges.
///
/// Edge `i` is `edges()[i]`; the orientation of each pair is whatever the
/// producer supplied.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EdgeList {
    n: usize,
    edges: Vec<(NodeId, NodeId)>,
}

fn edge_key(u: NodeId, v: NodeId) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    (a as u64) << 32 | b as u64
}

impl EdgeList {
    /// Builds an edge list, rejecting self-loops, duplicates, and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: Vec<(NodeId, NodeId)>) -> Result<Self> {
        if n > NONE as usize {
            return Err(Error::TooLarge { n, max: NONE as usize });
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidEdgeList(format!(
                    "edge {i} = ({u}, {v}) has an endpoint >= n = {n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidEdgeList(format!("edge {i} is a self-loop on {u}")));
            }
            if !seen.insert(edge_key(u, v)) {
                return Err(Error::InvalidEdgeList(format!("edge {i} = ({u}, {v}) is a duplicate")));
            }
        }
        Ok(Self { n, edges })
    }

    /// Keeps the first occurrence of every unordered pair and drops
    /// self-loops. Returns the list and the number of dropped entries.
    pub fn from_pairs_lossy(n: usize, pairs: Vec<(NodeId, NodeId)>) -> (Self, usize) {
        let mut seen = HashSet::with_capacity(pairs.len());
        let total = pairs.len();
        let edges: Vec<_> = pairs
            .into_iter()
            .filter(|&(u, v)| u != v && seen.insert(edge_key(u, v)))
            .collect();
        let removed = total - edges.len();
        (Self { n, edges }, removed)
    }

    pub(crate) fn from_trusted(n: usize, edges: Vec<(NodeId, NodeId)>) -> Self {
        Self { n, edges }
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// Number of connected components is 1 (or the graph is empty).
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut ds = DisjointSets::new(self.n);
        let mut merged = 0;
        for &(u, v) in &self.edges {
            if ds.union(u, v) {
                merged += 1;
            }
        }
        merged == self.n - 1
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}")?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Result of parsing a graph file: the cleaned edge list plus the count of
/// self-loops and duplicate pairs that were dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed {
    pub graph: EdgeList,
    pub removed: usize,
}

fn parse_id(tok: &str, line: usize) -> Result<u64> {
    tok.parse::<u64>().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a non-negative integer, found {tok:?}"),
    })
}

fn check_id(id: u64, line: usize) -> Result<NodeId> {
    if id >= NONE as u64 {
        return Err(Error::Parse { line, msg: format!("node id {id} too large") });
    }
    Ok(id as NodeId)
}

/// Plain whitespace-separated edge list. Lines starting with `#` or `%` are
/// comments; tokens after the first two on a line are ignored.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Parsed> {
    let mut pairs = Vec::new();
    let mut max_id: Option<NodeId> = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
            continue;
        }
        let mut toks = t.split_whitespace();
        let (a, b) = match (toks.next(), toks.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Parse { line: lineno, msg: "expected two node ids".into() });
            }
        };
        let u = check_id(parse_id(a, lineno)?, lineno)?;
        let v = check_id(parse_id(b, lineno)?, lineno)?;
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        pairs.push((u, v));
    }
    let n = max_id.map_or(0, |m| m as usize + 1);
    let (graph, removed) = EdgeList::from_pairs_lossy(n, pairs);
    Ok(Parsed { graph, removed })
}

/// DIMACS shortest-path (`p sp n m` / `a u v w`) or edge (`p edge n m` /
/// `e u v`) format with 1-based ids. Both arc directions collapse onto one
/// undirected edge.
pub fn parse_dimacs_gr<R: BufRead>(reader: R) -> Result<Parsed> {
    let mut n: Option<usize> = None;
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let mut toks = line.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                let _format = toks.next();
                let nodes = toks
                    .next()
                    .ok_or_else(|| Error::Parse { line: lineno, msg: "problem line lacks node count".into() })?;
                let nodes = parse_id(nodes, lineno)? as usize;
                if nodes > NONE as usize {
                    return Err(Error::TooLarge { n: nodes, max: NONE as usize });
                }
                n = Some(nodes);
            }
            Some("a") | Some("e") => {
                let n = n.ok_or(Error::MissingProblemLine { line: lineno })?;
                let mut endpoint = || -> Result<NodeId> {
                    let tok = toks
                        .next()
                        .ok_or_else(|| Error::Parse { line: lineno, msg: "arc line needs two endpoints".into() })?;
                    let id = parse_id(tok, lineno)?;
                    if id == 0 || id > n as u64 {
                        return Err(Error::NodeOutOfRange { line: lineno, id, n });
                    }
                    Ok((id - 1) as NodeId)
                };
                let u = endpoint()?;
                let v = endpoint()?;
                pairs.push((u, v));
            }
            Some(other) => {
                return Err(Error::Parse { line: lineno, msg: format!("unknown line type {other:?}") });
            }
        }
    }
    let n = n.ok_or(Error::MissingProblemLine { line: 0 })?;
    let (graph, removed) = EdgeList::from_pairs_lossy(n, pairs);
    Ok(Parsed { graph, removed })
}

/// MatrixMarket coordinate file treated as an undirected pattern: the first
/// non-comment line is the size header, every later line a 1-based entry.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<Parsed> {
    let mut n: Option<usize> = None;
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let mut toks = t.split_whitespace();
        let mut next = || -> Result<u64> {
            let tok = toks
                .next()
                .ok_or_else(|| Error::Parse { line: lineno, msg: "expected two integers".into() })?;
            parse_id(tok, lineno)
        };
        let (a, b) = (next()?, next()?);
        match n {
            None => {
                let rows = a.max(b) as usize;
                if rows > NONE as usize {
                    return Err(Error::TooLarge { n: rows, max: NONE as usize });
                }
                n = Some(rows);
            }
            Some(n) => {
                for id in [a, b] {
                    if id == 0 || id > n as u64 {
                        return Err(Error::NodeOutOfRange { line: lineno, id, n });
                    }
                }
                pairs.push(((a - 1) as NodeId, (b - 1) as NodeId));
            }
        }
    }
    let (graph, removed) = EdgeList::from_pairs_lossy(n.unwrap_or(0), pairs);
    Ok(Parsed { graph, removed })
}

/// Loads a graph, picking the parser from the extension: `.gr`/`.dimacs`
/// for DIMACS, `.mtx` for MatrixMarket, anything else as a plain edge list.
pub fn read_graph_file(path: &Path) -> Result<Parsed> {
    let reader = BufReader::new(File::open(path)?);
    match path.extension().and_then(|e| e.to_str()) {
        Some("gr") | Some("dimacs") => parse_dimacs_gr(reader),
        Some("mtx") => parse_matrix_market(reader),
        _ => parse_edge_list(reader),
    }
}

/// CSR-style neighbor index. Slot `k` in `neighbors` is paired with
/// `edge_ids[k]`, the index of the edge in the source `EdgeList`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    edge_ids: Vec<u32>,
}

impl Adjacency {
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn neighbors(&self) -> &[NodeId] {
        &self.neighbors
    }

    pub fn edge_ids(&self) -> &[u32] {
        &self.edge_ids
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn neighbors_of(&self, v: NodeId) -> &[NodeId] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// `(neighbor, edge id)` pairs of `v`.
    pub fn incident(&self, v: NodeId) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        let range = self.offsets[v as usize]..self.offsets[v as usize + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.edge_ids[range].iter().copied())
    }
}

/// Counting pass, exclusive scan over degrees, then atomic placement
/// followed by a per-slice sort so the layout is scheduling-independent.
pub fn build_adjacency(e: &EdgeList) -> Adjacency {
    let n = e.num_nodes();
    let degree: Vec<AtomicU32> = (0..n).map(|_| AtomicU32::new(0)).collect();
    e.edges().par_iter().for_each(|&(u, v)| {
        degree[u as usize].fetch_add(1, Ordering::Relaxed);
        degree[v as usize].fetch_add(1, Ordering::Relaxed);
    });
    let mut degree: Vec<usize> = degree.into_iter().map(|d| d.into_inner() as usize).collect();
    degree.push(0);
    let offsets = par::exclusive_scan(&degree, 0usize, |a, b| a + b);

    let cursor: Vec<AtomicU32> = (0..n).map(|_| AtomicU32::new(0)).collect();
    let slots: Vec<std::sync::atomic::AtomicU64> =
        (0..2 * e.num_edges()).map(|_| std::sync::atomic::AtomicU64::new(0)).collect();
    e.edges().par_iter().enumerate().for_each(|(id, &(u, v))| {
        for (a, b) in [(u, v), (v, u)] {
            let k = offsets[a as usize] + cursor[a as usize].fetch_add(1, Ordering::Relaxed) as usize;
            slots[k].store((b as u64) << 32 | id as u64, Ordering::Relaxed);
        }
    });
    let mut packed: Vec<u64> = slots.into_iter().map(|s| s.into_inner()).collect();
    par::split_segments_mut(&mut packed, &offsets)
        .into_par_iter()
        .for_each(|seg| seg.sort_unstable());

    let (neighbors, edge_ids) = packed
        .par_iter()
        .map(|&p| ((p >> 32) as NodeId, p as u32))
        .unzip();
    Adjacency { offsets, neighbors, edge_ids }
}

/// Edge list bundled with its adjacency index; the input type of the
/// bridge-finding engines.
#[derive(Clone, Debug)]
pub struct Graph {
    edges: EdgeList,
    adjacency: Adjacency,
}

impl Graph {
    pub fn new(edges: EdgeList) -> Self {
        let adjacency = build_adjacency(&edges);
        Self { edges, adjacency }
    }

    pub fn num_nodes(&self) -> usize {
        self.edges.num_nodes()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.num_edges()
    }

    pub fn edge_list(&self) -> &EdgeList {
        &self.edges
    }

    pub fn edge(&self, id: u32) -> (NodeId, NodeId) {
        self.edges.edges[id as usize]
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }
}

/// Keeps the largest connected component, renumbering its nodes densely in
/// increasing order of original id. Ties go to the component with the
/// smallest minimum id. The mapping holds `NONE` for dropped nodes.
pub fn largest_component(e: &EdgeList) -> (EdgeList, Vec<NodeId>) {
    let n = e.num_nodes();
    if n == 0 {
        return (EdgeList::default(), Vec::new());
    }
    let mut ds = DisjointSets::new(n);
    for &(u, v) in e.edges() {
        ds.union(u, v);
    }
    // Scanning ids in order means the first component reaching the
    // maximum size is also the one with the smallest minimum id.
    let mut best = (0usize, 0u32);
    for v in 0..n as u32 {
        let size = ds.set_size(v);
        if size > best.0 {
            best = (size, ds.find(v));
        }
    }
    let keep = best.1;
    let mut mapping = vec![NONE; n];
    let mut next = 0;
    for v in 0..n as u32 {
        if ds.find(v) == keep {
            mapping[v as usize] = next;
            next += 1;
        }
    }
    let edges = e
        .edges()
        .iter()
        .filter(|&&(u, _)| mapping[u as usize] != NONE)
        .map(|&(u, v)| (mapping[u as usize], mapping[v as usize]))
        .collect();
    (EdgeList::from_trusted(next as usize, edges), mapping)
}

/// Parent-array representation of a rooted tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    root: NodeId,
    parent: Vec<NodeId>,
}

impl RootedTree {
    /// Validates that `parent` has exactly one `NONE` entry and that every
    /// parent chain reaches it without cycles.
    pub fn new(parent: Vec<NodeId>) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::InvalidTree("tree has no nodes".into()));
        }
        if n >= NONE as usize {
            return Err(Error::TooLarge { n, max: NONE as usize - 1 });
        }
        let mut root = None;
        for (v, &p) in parent.iter().enumerate() {
            if p == NONE {
                if let Some(r) = root {
                    return Err(Error::InvalidTree(format!("two roots: {r} and {v}")));
                }
                root = Some(v as NodeId);
            } else if p as usize >= n {
                return Err(Error::InvalidTree(format!("parent of {v} is {p}, outside [0, {n})")));
            }
        }
        let root = root.ok_or_else(|| Error::InvalidTree("no root".into()))?;

        // 0 = unvisited, 1 = on the current chain, 2 = known to reach root
        let mut state = vec![0u8; n];
        state[root as usize] = 2;
        let mut chain = Vec::new();
        for start in 0..n {
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                chain.push(v);
                v = parent[v] as usize;
            }
            if state[v] == 1 {
                return Err(Error::InvalidTree(format!("cycle through node {v}")));
            }
            for &c in &chain {
                state[c] = 2;
            }
            chain.clear();
        }
        Ok(Self { root, parent })
    }

    pub(crate) fn from_trusted(root: NodeId, parent: Vec<NodeId>) -> Self {
        Self { root, parent }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, v: NodeId) -> NodeId {
        self.parent[v as usize]
    }

    pub fn parents(&self) -> &[NodeId] {
        &self.parent
    }

    /// The n-1 edges `(parent(v), v)`, in increasing order of `v`.
    pub fn to_edge_list(&self) -> EdgeList {
        let edges = self
            .parent
            .iter()
            .enumerate()
            .filter(|&(_, &p)| p != NONE)
            .map(|(v, &p)| (p, v as NodeId))
            .collect();
        EdgeList::from_trusted(self.len(), edges)
    }

    /// Tree file: first line `n`, then `n` integers with `-1` for the root.
    pub fn read_from<R: BufRead>(reader: R) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut parent = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            for tok in line.split_whitespace() {
                match n {
                    None => {
                        let count = parse_id(tok, lineno)? as usize;
                        if count >= NONE as usize {
                            return Err(Error::TooLarge { n: count, max: NONE as usize - 1 });
                        }
                        n = Some(count);
                        parent.reserve(count);
                    }
                    Some(_) if tok == "-1" => parent.push(NONE),
                    Some(_) => parent.push(check_id(parse_id(tok, lineno)?, lineno)?),
                }
            }
        }
        let n = n.ok_or_else(|| Error::Parse { line: 1, msg: "missing node count".into() })?;
        if parent.len() != n {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {n} parent entries, found {}", parent.len()),
            });
        }
        Self::new(parent)
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut out = BufWriter::new(out);
        writeln!(out, "{}", self.len())?;
        for (i, &p) in self.parent.iter().enumerate() {
            let sep = if i + 1 == self.len() { "\n" } else { " " };
            if p == NONE {
                write!(out, "-1{sep}")?;
            } else {
                write!(out, "{p}{sep}")?;
            }
        }
        out.flush()?;
        Ok(())
    }
}
