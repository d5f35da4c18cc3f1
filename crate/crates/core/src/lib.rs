//! Product-dimension encodings of graphs.
//!
//! An `l`-encoding of a graph maps every vertex to an `l`-tuple of symbols so
//! that the map is injective and two vertices are adjacent exactly when their
//! tuples differ in every coordinate. The smallest such `l` is the product
//! dimension of the graph.
//!
//! The crate provides:
//!
//! - [`graph`]: the graph type and the colorings/orderings the encoders use,
//! - [`encoding`]: the [`Encoding`] value, its verifier and symbol renaming,
//! - [`exact`]: an exhaustive search that certifies product dimension on small
//!   graphs, plus a greedy fallback encoder,
//! - [`forest`]: split-vertex divide and conquer for forests,
//! - [`latin`]: orthogonal Latin squares and the encoding of three disjoint cliques,
//! - [`treedecomp`]: tree decompositions, normalization and balanced split bags,
//! - [`treewidth`]: divide and conquer for graphs of bounded treewidth,
//! - [`degenerate`]: the randomized encoder for `k`-degenerate graphs,
//! - [`generate`]: seeded random instance families.
//!
//! The crate is `no_std` (it needs `alloc`). Enabling the `std` feature turns
//! on wall-clock deadlines in the exact search.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod degenerate;
pub mod encoding;
pub mod exact;
pub mod forest;
pub mod generate;
pub mod graph;
pub mod latin;
pub mod treedecomp;
pub mod treewidth;

mod clock;

pub use encoding::{verify_encoding, Encoding, Symbol, VerifyReport};
pub use graph::{Graph, GraphError, Vertex};

/// `log2(n)` as used by every dimension bound in this crate.
pub fn log2(n: usize) -> f64 {
    libm::log2(n as f64)
}
