//! Graph families for tests and benchmarks, deterministic or seeded.

use rand::Rng;
use thiserror::Error;

use crate::graph::{GraphError, WeightedGraph};
use crate::random::{mix_seed, seeded_rng};

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("hypercube dimension {0} exceeds the dense cap of 14")]
    DimensionTooLarge(usize),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A named family plus its parameters, as accepted by the CLI config.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Path { n: usize },
    Cycle { n: usize },
    Grid { rows: usize, cols: usize },
    Complete { n: usize },
    CliqueUnion { clusters: usize, size: usize, bridge: f64 },
    PlantedPartition { clusters: usize, size: usize, p_in: f64, p_out: f64, seed: u64 },
    Gnp { n: usize, p: f64, seed: u64 },
    NoisyHypercube { dim: usize, eps: f64 },
}

impl FamilySpec {
    /// Builds the graph; planted partitions also return their ground truth.
    pub fn build(&self) -> Result<(WeightedGraph, Option<Vec<Vec<usize>>>), GeneratorError> {
        match *self {
            FamilySpec::Path { n } => Ok((path(n)?, None)),
            FamilySpec::Cycle { n } => Ok((cycle(n)?, None)),
            FamilySpec::Grid { rows, cols } => Ok((grid(rows, cols)?, None)),
            FamilySpec::Complete { n } => Ok((complete(n)?, None)),
            FamilySpec::CliqueUnion { clusters, size, bridge } => {
                Ok((clique_union(clusters, size, bridge)?, None))
            }
            FamilySpec::PlantedPartition { clusters, size, p_in, p_out, seed } => {
                let (g, truth) = planted_partition(clusters, size, p_in, p_out, seed)?;
                Ok((g, Some(truth)))
            }
            FamilySpec::Gnp { n, p, seed } => Ok((gnp(n, p, seed)?, None)),
            FamilySpec::NoisyHypercube { dim, eps } => Ok((noisy_hypercube(dim, eps)?, None)),
        }
    }
}

pub fn path(n: usize) -> Result<WeightedGraph, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::DegenerateParameters(
            "path needs n >= 2".into(),
        ));
    }
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
    Ok(WeightedGraph::build(n, &edges)?)
}

pub fn cycle(n: usize) -> Result<WeightedGraph, GeneratorError> {
    if n < 3 {
        return Err(GeneratorError::DegenerateParameters(
            "cycle needs n >= 3".into(),
        ));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    Ok(WeightedGraph::build(n, &edges)?)
}

/// rows x cols lattice with unit edges; vertex (r, c) has index r*cols + c.
pub fn grid(rows: usize, cols: usize) -> Result<WeightedGraph, GeneratorError> {
    if rows * cols < 2 || rows == 0 || cols == 0 {
        return Err(GeneratorError::DegenerateParameters(
            "grid needs at least 2 vertices".into(),
        ));
    }
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1, 1.0));
            }
            if r + 1 < rows {
                edges.push((v, v + cols, 1.0));
            }
        }
    }
    Ok(WeightedGraph::build(rows * cols, &edges)?)
}

pub fn complete(n: usize) -> Result<WeightedGraph, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::DegenerateParameters(
            "complete graph needs n >= 2".into(),
        ));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, 1.0));
        }
    }
    Ok(WeightedGraph::build(n, &edges)?)
}

/// `clusters` unit-weight cliques of `size` vertices chained by bridge edges
/// of weight `bridge_w` between consecutive cliques.
pub fn clique_union(
    clusters: usize,
    size: usize,
    bridge_w: f64,
) -> Result<WeightedGraph, GeneratorError> {
    if clusters == 0 || size < 2 {
        return Err(GeneratorError::DegenerateParameters(
            "clique union needs clusters >= 1 and size >= 2".into(),
        ));
    }
    if clusters > 1 && !(bridge_w > 0.0) {
        return Err(GeneratorError::DegenerateParameters(
            "bridge weight must be positive".into(),
        ));
    }
    let mut edges = Vec::new();
    for c in 0..clusters {
        let base = c * size;
        for a in 0..size {
            for b in a + 1..size {
                edges.push((base + a, base + b, 1.0));
            }
        }
        if c + 1 < clusters {
            edges.push((base, base + size, bridge_w));
        }
    }
    Ok(WeightedGraph::build(clusters * size, &edges)?)
}

/// Stochastic block model with equal-size blocks and unit edge weights.
///
/// Isolated vertices are reconnected to a seeded random partner in their own
/// cluster so the `w(v) > 0` graph invariant always holds. Returns the graph
/// and the planted blocks.
pub fn planted_partition(
    clusters: usize,
    size: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<(WeightedGraph, Vec<Vec<usize>>), GeneratorError> {
    if clusters == 0 || size == 0 || clusters * size < 2 {
        return Err(GeneratorError::DegenerateParameters(
            "planted partition needs at least 2 vertices".into(),
        ));
    }
    if size < 2 {
        return Err(GeneratorError::DegenerateParameters(
            "cluster size must be >= 2 so isolated vertices can be reconnected in-cluster".into(),
        ));
    }
    for (name, p) in [("p_in", p_in), ("p_out", p_out)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(GeneratorError::DegenerateParameters(format!(
                "{name} = {p} outside [0, 1]"
            )));
        }
    }
    if p_in < p_out {
        return Err(GeneratorError::DegenerateParameters(
            "p_in must be >= p_out".into(),
        ));
    }
    let n = clusters * size;
    let cluster_of = |v: usize| v / size;
    let mut rng = seeded_rng(mix_seed(seed, 0x9b1a));
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if cluster_of(u) == cluster_of(v) {
                p_in
            } else {
                p_out
            };
            if rng.gen::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    // Reconnect isolated vertices inside their own cluster.
    let mut degree = vec![0usize; n];
    for &(u, v, _) in &edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    for v in 0..n {
        if degree[v] == 0 {
            let base = cluster_of(v) * size;
            let mut partner = base + rng.gen_range(0..size);
            if partner == v {
                partner = base + (v - base + 1) % size;
            }
            edges.push((v.min(partner), v.max(partner), 1.0));
            degree[v] += 1;
            degree[partner] += 1;
        }
    }
    let truth: Vec<Vec<usize>> = (0..clusters)
        .map(|c| (c * size..(c + 1) * size).collect())
        .collect();
    Ok((WeightedGraph::build(n, &edges)?, truth))
}

/// Erdos-Renyi G(n, p) with unit weights; isolated vertices get one seeded
/// random partner.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<WeightedGraph, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::DegenerateParameters(
            "gnp needs n >= 2".into(),
        ));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(GeneratorError::DegenerateParameters(format!(
            "p = {p} outside [0, 1]"
        )));
    }
    let mut rng = seeded_rng(mix_seed(seed, 0x6e70));
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    let mut degree = vec![0usize; n];
    for &(u, v, _) in &edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    for v in 0..n {
        if degree[v] == 0 {
            let mut partner = rng.gen_range(0..n - 1);
            if partner >= v {
                partner += 1;
            }
            edges.push((v.min(partner), v.max(partner), 1.0));
            degree[v] += 1;
            degree[partner] += 1;
        }
    }
    Ok(WeightedGraph::build(n, &edges)?)
}

/// The noisy hypercube: vertices are `{0,1}^dim`, and every pair `x != y` is
/// joined by an edge of weight `eps^{hamming(x, y)}`.
///
/// Self-loops are excluded, so the weighted degree of every vertex is
/// `(1 + eps)^dim - 1` exactly.
pub fn noisy_hypercube(dim: usize, eps: f64) -> Result<WeightedGraph, GeneratorError> {
    noisy_hypercube_truncated(dim, eps, 0.0)
}

/// Sparse variant of the noisy hypercube dropping edges lighter than
/// `min_weight`; approximate for `min_weight > 0`, exact otherwise.
pub fn noisy_hypercube_truncated(
    dim: usize,
    eps: f64,
    min_weight: f64,
) -> Result<WeightedGraph, GeneratorError> {
    if dim == 0 || dim > 14 {
        return Err(GeneratorError::DimensionTooLarge(dim));
    }
    if !(0.0 < eps && eps < 1.0) {
        return Err(GeneratorError::DegenerateParameters(format!(
            "eps = {eps} outside (0, 1)"
        )));
    }
    let n = 1usize << dim;
    let pow = eps_powers(dim, eps);
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for x in 0..n {
        for y in x + 1..n {
            let d = (x ^ y).count_ones() as usize;
            if pow[d] >= min_weight {
                edges.push((x, y, pow[d]));
            }
        }
    }
    Ok(WeightedGraph::build(n, &edges)?)
}

/// `eps^d` for `d = 0..=dim`.
pub fn eps_powers(dim: usize, eps: f64) -> Vec<f64> {
    let mut pow = vec![1.0; dim + 1];
    for d in 1..=dim {
        pow[d] = pow[d - 1] * eps;
    }
    pow
}

/// Expansion of a vertex set in the noisy hypercube, computed from pair sums
/// in O(|S|^2) instead of walking the dense adjacency.
///
/// Uses `w(E(S, S-bar)) = w(S) - 2 w(E(S, S))` with the uniform degree
/// `(1 + eps)^dim - 1`.
pub fn noisy_hypercube_expansion(dim: usize, eps: f64, set: &[usize]) -> f64 {
    let pow = eps_powers(dim, eps);
    let degree = libm::pow(1.0 + eps, dim as f64) - 1.0;
    let mut internal = 0.0;
    for (i, &x) in set.iter().enumerate() {
        for &y in &set[i + 1..] {
            internal += pow[(x ^ y).count_ones() as usize];
        }
    }
    let set_weight = set.len() as f64 * degree;
    (set_weight - 2.0 * internal) / set_weight
}

/// The paper-motivated noise level for the hypercube lower bound:
/// `eps = ln 2 / ln(dim / c)`.
pub fn hypercube_eps(dim: usize, c: f64) -> f64 {
    (2.0f64).ln() / ((dim as f64 / c).ln())
}

/// Closed-form normalized-Laplacian spectrum of the noisy hypercube without
/// self-loops: the Walsh character indexed by `S` has eigenvalue
/// `1 - ((1+eps)^dim mu - 1) / ((1+eps)^dim - 1)` with
/// `mu = ((1-eps)/(1+eps))^{|S|}`, multiplicity `C(dim, |S|)`.
pub fn noisy_hypercube_spectrum(dim: usize, eps: f64) -> Vec<(f64, usize)> {
    let total = libm::pow(1.0 + eps, dim as f64);
    let ratio = (1.0 - eps) / (1.0 + eps);
    let mut out = Vec::with_capacity(dim + 1);
    let mut binom = 1usize;
    for s in 0..=dim {
        let mu = libm::pow(ratio, s as f64);
        let lambda = 1.0 - (total * mu - 1.0) / (total - 1.0);
        out.push((lambda, binom));
        binom = binom * (dim - s) / (s + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eigenbasis;

    #[test]
    fn hypercube_dim1() {
        let g = noisy_hypercube(1, 0.5).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges()[0].w, 0.5);
        assert!((g.degree(0) - 0.5).abs() < 1e-15);
        assert!((g.degree(0) - (libm::pow(1.5, 1.0) - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn hypercube_degrees_uniform() {
        let dim = 3;
        let eps = 0.5;
        let g = noisy_hypercube(dim, eps).unwrap();
        let expect = libm::pow(1.0 + eps, dim as f64) - 1.0;
        for v in 0..g.n() {
            assert!((g.degree(v) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn dictator_cut_closed_form() {
        // S = {x : x_0 = 0}; per-vertex crossing weight eps (1+eps)^{dim-1}.
        for dim in [3, 5, 7] {
            let eps = 0.4;
            let g = noisy_hypercube(dim, eps).unwrap();
            let set: Vec<usize> = (0..g.n()).filter(|x| x & 1 == 0).collect();
            let m = g.expansion(&set).unwrap();
            let half = (g.n() / 2) as f64;
            let cut = half * eps * libm::pow(1.0 + eps, (dim - 1) as f64);
            let degree = libm::pow(1.0 + eps, dim as f64) - 1.0;
            assert!((m.cut_weight - cut).abs() < 1e-9 * cut);
            let phi = eps * libm::pow(1.0 + eps, (dim - 1) as f64) / degree;
            assert!((m.expansion - phi).abs() < 1e-12);
            // pair-sum evaluator agrees with the dense adjacency walk
            let fast = noisy_hypercube_expansion(dim, eps, &set);
            assert!((fast - m.expansion).abs() < 1e-12);
        }
    }

    #[test]
    fn hypercube_spectrum_matches_dense_solver() {
        let dim = 4;
        let eps = hypercube_eps(dim, 1.0);
        let g = noisy_hypercube(dim, eps).unwrap();
        let emb = eigenbasis(&g, g.n(), 1e-8).unwrap();
        let mut expect: Vec<f64> = Vec::new();
        for (lambda, mult) in noisy_hypercube_spectrum(dim, eps) {
            for _ in 0..mult {
                expect.push(lambda);
            }
        }
        expect.sort_by(f64::total_cmp);
        for (got, want) in emb.eigenvalues.iter().zip(expect) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn planted_with_zero_pout_disconnects() {
        let (g, truth) = planted_partition(3, 8, 0.9, 0.0, 7).unwrap();
        assert_eq!(g.connected_components().len(), 3);
        assert_eq!(truth.len(), 3);
        let emb = eigenbasis(&g, 3, 1e-8).unwrap();
        assert!(emb.eigenvalues[2] <= 1e-10);
    }

    #[test]
    fn planted_equal_probabilities_is_legal() {
        let (g, _) = planted_partition(2, 6, 0.5, 0.5, 3).unwrap();
        assert_eq!(g.n(), 12);
    }

    #[test]
    fn planted_rejects_inverted_probabilities() {
        assert!(planted_partition(2, 6, 0.1, 0.5, 3).is_err());
    }

    #[test]
    fn generators_produce_valid_graphs() {
        // Validity is enforced by WeightedGraph::build; exercise a spread of
        // parameters for each family.
        path(2).unwrap();
        path(17).unwrap();
        cycle(3).unwrap();
        cycle(32).unwrap();
        grid(1, 5).unwrap();
        grid(4, 4).unwrap();
        complete(2).unwrap();
        complete(9).unwrap();
        clique_union(1, 3, 1.0).unwrap();
        clique_union(5, 4, 0.01).unwrap();
        for seed in 0..5 {
            gnp(12, 0.3, seed).unwrap();
            planted_partition(3, 5, 0.8, 0.05, seed).unwrap();
        }
        noisy_hypercube(4, 0.3).unwrap();
    }

    #[test]
    fn grid_corner_expansion() {
        let g = grid(4, 4).unwrap();
        // 2x2 corner block: vertices 0, 1, 4, 5; degrees 2 + 3 + 3 + 4 = 12,
        // four crossing edges.
        let m = g.expansion(&[0, 1, 4, 5]).unwrap();
        assert!((m.expansion - 4.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn cycle_second_eigenvalue_analytic() {
        for n in [5usize, 8, 12] {
            let g = cycle(n).unwrap();
            let emb = eigenbasis(&g, 2, 1e-9).unwrap();
            let expect = 1.0 - (2.0 * std::f64::consts::PI / n as f64).cos();
            assert!((emb.eigenvalues[1] - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn complete_graph_spectrum() {
        let n = 7;
        let g = complete(n).unwrap();
        let emb = eigenbasis(&g, n, 1e-9).unwrap();
        assert!(emb.eigenvalues[0].abs() < 1e-10);
        for j in 1..n {
            assert!((emb.eigenvalues[j] - n as f64 / (n as f64 - 1.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn truncated_hypercube_drops_light_edges() {
        let dense = noisy_hypercube(5, 0.3).unwrap();
        let sparse = noisy_hypercube_truncated(5, 0.3, 0.01).unwrap();
        assert!(sparse.edge_count() < dense.edge_count());
    }

    #[test]
    fn hypercube_rejects_bad_dims() {
        assert!(matches!(
            noisy_hypercube(15, 0.5),
            Err(GeneratorError::DimensionTooLarge(15))
        ));
        assert!(noisy_hypercube(3, 1.0).is_err());
    }
}
