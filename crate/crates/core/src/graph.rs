//! Weighted undirected graphs and expansion (Dirichlet conductance) metrics.
//!
//! A graph here is finite, undirected, with strictly positive edge weights,
//! no self-loops and no duplicate edges. Every vertex must have positive
//! weighted degree `w(v) = sum of incident edge weights`; the algorithms in
//! this crate divide by `w(v)` and `w(S)` freely.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has non-positive weight {w}")]
    NonPositiveWeight { u: usize, v: usize, w: f64 },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex {0} is isolated (weighted degree zero)")]
    IsolatedVertex(usize),
    #[error("edge ({u}, {v}) references a vertex >= n = {n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("vertex subset is empty")]
    EmptySet,
    #[error("vertex id {0} out of range")]
    InvalidVertex(usize),
    #[error("n = {n} exceeds the brute-force cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("k = {k} must satisfy 1 <= k <= n = {n}")]
    BadK { k: usize, n: usize },
}

/// One undirected edge, stored once with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub w: f64,
}

/// Immutable weighted undirected graph in CSR form.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adj_offsets: Vec<usize>,
    adj: Vec<(u32, f64)>,
    degree: Vec<f64>,
    total_weight: f64,
}

/// Cut and expansion data for one vertex subset.
#[derive(Debug, Clone, PartialEq)]
pub struct CutMetrics {
    pub set: Vec<usize>,
    pub cut_weight: f64,
    pub set_weight: f64,
    pub expansion: f64,
}

impl WeightedGraph {
    /// Builds a canonical immutable graph from an edge list.
    ///
    /// Edges may be given in either orientation; each unordered pair must
    /// appear exactly once. Rejects self-loops, non-positive weights,
    /// duplicates, and isolated vertices.
    pub fn build(n: usize, edge_list: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(u, v, w) in edge_list {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(GraphError::NonPositiveWeight { u, v, w });
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            edges.push(Edge {
                u: a as u32,
                v: b as u32,
                w,
            });
        }
        edges.sort_by(|e, f| (e.u, e.v).cmp(&(f.u, f.v)));
        for pair in edges.windows(2) {
            if pair[0].u == pair[1].u && pair[0].v == pair[1].v {
                return Err(GraphError::DuplicateEdge {
                    u: pair[0].u as usize,
                    v: pair[0].v as usize,
                });
            }
        }

        let mut degree = vec![0.0; n];
        let mut counts = vec![0usize; n];
        for e in &edges {
            degree[e.u as usize] += e.w;
            degree[e.v as usize] += e.w;
            counts[e.u as usize] += 1;
            counts[e.v as usize] += 1;
        }
        if let Some(v) = degree.iter().position(|&d| d <= 0.0) {
            return Err(GraphError::IsolatedVertex(v));
        }

        let mut adj_offsets = vec![0usize; n + 1];
        for v in 0..n {
            adj_offsets[v + 1] = adj_offsets[v] + counts[v];
        }
        let mut adj = vec![(0u32, 0.0); 2 * edges.len()];
        let mut cursor = adj_offsets.clone();
        for e in &edges {
            adj[cursor[e.u as usize]] = (e.v, e.w);
            cursor[e.u as usize] += 1;
            adj[cursor[e.v as usize]] = (e.u, e.w);
            cursor[e.v as usize] += 1;
        }

        let total_weight = degree.iter().sum();
        Ok(Self {
            n,
            edges,
            adj_offsets,
            adj,
            degree,
            total_weight,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors of `v` with edge weights.
    pub fn neighbors(&self, v: usize) -> &[(u32, f64)] {
        &self.adj[self.adj_offsets[v]..self.adj_offsets[v + 1]]
    }

    /// Weighted degree `w(v)`.
    pub fn degree(&self, v: usize) -> f64 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degree
    }

    /// `w(V) = sum over v of w(v)`.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// `w(S)` for an arbitrary vertex list (duplicates counted once).
    pub fn set_weight(&self, set: &[usize]) -> f64 {
        let mask = self.mask(set);
        mask.iter()
            .enumerate()
            .filter(|&(_, &m)| m)
            .map(|(v, _)| self.degree[v])
            .sum()
    }

    fn mask(&self, set: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for &v in set {
            mask[v] = true;
        }
        mask
    }

    /// Dirichlet conductance `phi(S) = w(E(S, S-bar)) / w(S)`.
    pub fn expansion(&self, set: &[usize]) -> Result<CutMetrics, GraphError> {
        if set.is_empty() {
            return Err(GraphError::EmptySet);
        }
        if let Some(&v) = set.iter().find(|&&v| v >= self.n) {
            return Err(GraphError::InvalidVertex(v));
        }
        let mask = self.mask(set);
        Ok(self.expansion_masked(&mask))
    }

    /// Expansion from a membership mask; assumes a nonempty set.
    pub fn expansion_masked(&self, mask: &[bool]) -> CutMetrics {
        let mut cut_weight = 0.0;
        let mut set_weight = 0.0;
        let mut members = Vec::new();
        for v in 0..self.n {
            if !mask[v] {
                continue;
            }
            members.push(v);
            set_weight += self.degree[v];
            for &(u, w) in self.neighbors(v) {
                if !mask[u as usize] {
                    cut_weight += w;
                }
            }
        }
        CutMetrics {
            set: members,
            cut_weight,
            set_weight,
            expansion: cut_weight / set_weight,
        }
    }

    /// Total weight of edges with both endpoints in `S`, each counted once.
    pub fn internal_weight(&self, set: &[usize]) -> f64 {
        let mask = self.mask(set);
        self.edges
            .iter()
            .filter(|e| mask[e.u as usize] && mask[e.v as usize])
            .map(|e| e.w)
            .sum()
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut components = Vec::new();
        let mut stack = Vec::new();
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            comp[start] = id;
            stack.push(start);
            let mut members = vec![start];
            while let Some(v) = stack.pop() {
                for &(u, _) in self.neighbors(v) {
                    let u = u as usize;
                    if comp[u] == usize::MAX {
                        comp[u] = id;
                        members.push(u);
                        stack.push(u);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> WeightedGraph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
        WeightedGraph::build(n, &edges).unwrap()
    }

    #[test]
    fn single_edge() {
        let g = WeightedGraph::build(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(g.degree(0), 1.0);
        assert_eq!(g.degree(1), 1.0);
        assert_eq!(g.total_weight(), 2.0);
    }

    #[test]
    fn self_loop_rejected() {
        let err = WeightedGraph::build(3, &[(0, 1, 1.0), (1, 1, 1.0)]).unwrap_err();
        assert_eq!(err, GraphError::SelfLoop(1));
    }

    #[test]
    fn isolated_vertex_rejected() {
        let err = WeightedGraph::build(3, &[(0, 1, 1.0)]).unwrap_err();
        assert_eq!(err, GraphError::IsolatedVertex(2));
    }

    #[test]
    fn duplicate_edge_rejected() {
        let err = WeightedGraph::build(3, &[(0, 1, 1.0), (1, 0, 2.0), (1, 2, 1.0)]).unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge { u: 0, v: 1 });
    }

    #[test]
    fn nonpositive_weight_rejected() {
        assert!(matches!(
            WeightedGraph::build(2, &[(0, 1, 0.0)]),
            Err(GraphError::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            WeightedGraph::build(2, &[(0, 1, -1.0)]),
            Err(GraphError::NonPositiveWeight { .. })
        ));
    }

    #[test]
    fn expansion_of_full_set_is_zero() {
        let g = path(5);
        let m = g.expansion(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(m.expansion, 0.0);
        assert_eq!(m.cut_weight, 0.0);
    }

    #[test]
    fn expansion_on_path_prefix() {
        // P4: w({v0,v1}) = 1 + 2 = 3, one crossing edge.
        let g = path(4);
        let m = g.expansion(&[0, 1]).unwrap();
        assert_eq!(m.cut_weight, 1.0);
        assert_eq!(m.set_weight, 3.0);
        assert!((m.expansion - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_set_rejected() {
        let g = path(3);
        assert_eq!(g.expansion(&[]).unwrap_err(), GraphError::EmptySet);
    }

    #[test]
    fn cut_identity() {
        // w(E(S, S-bar)) = w(S) - 2 w(E(S, S))
        let g = WeightedGraph::build(
            5,
            &[
                (0, 1, 0.5),
                (0, 2, 1.5),
                (1, 2, 2.0),
                (2, 3, 0.25),
                (3, 4, 1.0),
                (0, 4, 3.0),
            ],
        )
        .unwrap();
        for set in [vec![0], vec![0, 1], vec![0, 1, 2], vec![1, 3, 4]] {
            let m = g.expansion(&set).unwrap();
            let internal = g.internal_weight(&set);
            assert!((m.cut_weight - (m.set_weight - 2.0 * internal)).abs() < 1e-12);
        }
    }

    #[test]
    fn components_of_two_triangles() {
        let g = WeightedGraph::build(
            6,
            &[
                (0, 1, 1.0),
                (1, 2, 1.0),
                (0, 2, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (3, 5, 1.0),
            ],
        )
        .unwrap();
        let comps = g.connected_components();
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }
}
