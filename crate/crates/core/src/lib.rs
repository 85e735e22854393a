//! Multi-way spectral graph partitioning.
//!
//! Given a weighted undirected graph and a target k, the pipelines here
//! compute k (or `ceil((1 - delta) k)`) disjoint low-expansion vertex sets:
//! embed the vertices with the bottom eigenfunctions of the normalized
//! Laplacian, partition the embedded points geometrically under the radial
//! projection distance, localize the embedding smoothly on the resulting
//! groups, and round with Cheeger sweeps. Exact brute-force oracles for
//! small instances and the supporting machinery (random partitions,
//! Gaussian dimension reduction, graph generators) are exposed as modules.

pub mod exact;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod localize;
pub mod partition;
pub mod pipeline;
pub mod random;
pub mod rounding;
pub mod spectral;
pub mod vertex_map;

pub use graph::{CutMetrics, GraphError, WeightedGraph};
pub use spectral::{eigenbasis, normalized_laplacian, rayleigh, SpectralEmbedding};
pub use vertex_map::VertexMap;
