use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("missing DIMACS problem line before line {line}")]
    MissingProblemLine { line: usize },

    #[error("line {line}: node id {id} outside [1, {n}]")]
    NodeOutOfRange { line: usize, id: u64, n: usize },

    #[error("invalid edge list: {0}")]
    InvalidEdgeList(String),

    #[error("invalid rooted tree: {0}")]
    InvalidTree(String),

    #[error("input is not a tree: {nodes} nodes, {edges} edges")]
    NotATree { nodes: usize, edges: usize },

    #[error("graph is disconnected: {reached} of {n} nodes reachable (extract the largest component first)")]
    Disconnected { reached: usize, n: usize },

    #[error("linked list is broken: {0}")]
    BrokenList(String),

    #[error("range [{l}, {r}] out of bounds for length {len}")]
    RangeOutOfBounds { l: usize, r: usize, len: usize },

    #[error("{n} nodes exceeds the supported maximum of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("infeasible edge count m={m} for n={n} (need n-1 <= m <= n(n-1)/2)")]
    InfeasibleEdgeCount { n: usize, m: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}
