//! Layers of a graph under a uniformly random vertex order.
//!
//! Every vertex gets an injective age; its layer is one plus the number of
//! younger neighbours, and `T_k` is the subgraph induced by layers `<= k`.
//! The crate covers sampling and exact order oracles on finite graphs, tree
//! path events, the forest structure of `T_2`, monotone walks on `Z^d`, and
//! `T_3` on random regular graphs.

pub mod error;
pub mod experiment;
pub mod graph;
pub mod lattice;
pub mod layers;
pub mod oracle;
pub mod randgraph;
pub mod seed;
pub mod t2_forest;
pub mod tree_paths;
pub mod verify;

pub use error::{LayersError, Result};
pub use graph::{DegreeProfile, DegreeSequence, Graph, LatticePoint, MultiGraph, RootedTree};
pub use layers::{compute_layers, extract_tk, sample_ages, AgeAssignment, LayerResult, LazyAgeSource};
pub use oracle::{permutation_oracle, CorePeripheryOracle, Rational};
