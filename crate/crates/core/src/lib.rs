//! Parallel Euler-tour tree primitives: tour linearization, node statistics,
//! lowest common ancestor indexes and bridge finding.

pub mod bridges;
pub mod error;
pub mod euler;
pub mod generators;
pub mod graph;
pub mod lca;
pub mod par;
pub mod union_find;

pub use bridges::{BridgeAlgorithm, BridgeMask};
pub use error::{Error, Result};
pub use graph::{EdgeList, Graph, NodeId, RootedTree, NONE};
pub use lca::{LcaAlgorithm, LcaEngine};
