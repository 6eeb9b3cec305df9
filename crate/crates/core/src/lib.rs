//! Edge-disjoint packing of bounded-degree trees into almost-regular host
//! graphs whose bi-independence number is small, together with the oracles
//! and auditors used to check every intermediate construction.

pub mod bitset;
pub mod error;
pub mod graph;
pub mod packing;
pub mod planted;
pub mod regularity;
pub mod scenario;
pub mod seed;
pub mod structure;
pub mod tree;
pub mod verify;

pub use bitset::VertexSet;
pub use error::{Error, Result};
pub use graph::Graph;
