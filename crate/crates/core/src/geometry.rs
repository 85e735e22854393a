//! The radial projection distance d_F, its induced shortest-path metric,
//! spreading certificates, and Gaussian dimension reduction.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::graph::WeightedGraph;
use crate::random::{fill_standard_normal, mix_seed, seeded_rng, uniform_unit};
use crate::spectral::{rayleigh_parts, SpectralError};
use crate::vertex_map::VertexMap;

#[derive(Debug, Error, Clone)]
pub enum GeometryError {
    #[error("projection expects input dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no projection attempt satisfied the acceptance conditions in {0} retries")]
    RetriesExhausted(usize),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Which metric drives partitioning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// d_F between unit-normalized embedding vectors.
    Radial,
    /// Shortest-path metric with edge lengths d_F(u, v).
    InducedPath,
}

/// Evaluator for d_F and the induced shortest-path metric over one embedding.
///
/// Normalized directions and norms are cached at construction; induced-path
/// single-source runs are memoized per source.
pub struct MetricView<'g> {
    graph: &'g WeightedGraph,
    map: &'g VertexMap,
    dim: usize,
    unit: Vec<f64>,
    norms: Vec<f64>,
    path_cache: Mutex<HashMap<usize, Arc<Vec<f64>>>>,
}

impl<'g> MetricView<'g> {
    pub fn new(graph: &'g WeightedGraph, map: &'g VertexMap) -> Self {
        assert_eq!(graph.n(), map.n());
        let dim = map.dim();
        let norms = map.norms();
        let mut unit = vec![0.0; graph.n() * dim];
        for v in 0..graph.n() {
            if norms[v] > 0.0 {
                for (j, x) in map.row(v).iter().enumerate() {
                    unit[v * dim + j] = x / norms[v];
                }
            }
        }
        Self {
            graph,
            map,
            dim,
            unit,
            norms,
            path_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn graph(&self) -> &WeightedGraph {
        self.graph
    }

    pub fn map(&self) -> &VertexMap {
        self.map
    }

    pub fn norm(&self, v: usize) -> f64 {
        self.norms[v]
    }

    /// The unit direction of `v`, or zeros when `F(v) = 0`.
    pub fn unit(&self, v: usize) -> &[f64] {
        &self.unit[v * self.dim..(v + 1) * self.dim]
    }

    /// Radial projection distance.
    ///
    /// Zero when both vectors vanish, infinite when exactly one does,
    /// otherwise the Euclidean distance between unit directions.
    pub fn radial_distance(&self, u: usize, v: usize) -> f64 {
        match (self.norms[u] > 0.0, self.norms[v] > 0.0) {
            (false, false) => 0.0,
            (true, true) => {
                let (a, b) = (self.unit(u), self.unit(v));
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt()
            }
            _ => f64::INFINITY,
        }
    }

    /// Single-source distances in the induced shortest-path metric; edges of
    /// infinite length are excluded, unreachable vertices report infinity.
    pub fn induced_path_distance(&self, source: usize) -> Arc<Vec<f64>> {
        if let Some(hit) = self.path_cache.lock().unwrap().get(&source) {
            return hit.clone();
        }
        let dist = Arc::new(self.multi_source_distance(&[source]));
        self.path_cache
            .lock()
            .unwrap()
            .insert(source, dist.clone());
        dist
    }

    /// Distances `d-hat(v, S)` from every vertex to the closest source.
    pub fn multi_source_distance(&self, sources: &[usize]) -> Vec<f64> {
        let n = self.graph.n();
        let mut dist = vec![f64::INFINITY; n];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s] = 0.0;
            heap.push(HeapItem { dist: 0.0, v: s });
        }
        while let Some(HeapItem { dist: d, v }) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(u, _) in self.graph.neighbors(v) {
                let u = u as usize;
                let len = self.radial_distance(v, u);
                if !len.is_finite() {
                    continue;
                }
                let nd = d + len;
                if nd < dist[u] {
                    dist[u] = nd;
                    heap.push(HeapItem { dist: nd, v: u });
                }
            }
        }
        dist
    }

    /// Per-vertex distance to the nearest vertex in a different cell of the
    /// given assignment (`usize::MAX` marks unassigned vertices, which are
    /// ignored as sources but still conduct paths).
    ///
    /// A two-label Dijkstra: each vertex keeps its best distance from up to
    /// two distinct cell labels, so one pass serves every cell at once.
    pub fn boundary_distance(&self, assignment: &[usize]) -> Vec<f64> {
        let n = self.graph.n();
        // (label, dist) pairs sorted by distance; at most 2 distinct labels.
        let mut best: Vec<[(usize, f64); 2]> =
            vec![[(usize::MAX, f64::INFINITY), (usize::MAX, f64::INFINITY)]; n];
        let mut heap = BinaryHeap::new();
        for v in 0..n {
            if assignment[v] != usize::MAX {
                best[v][0] = (assignment[v], 0.0);
                heap.push(LabeledItem {
                    dist: 0.0,
                    v,
                    label: assignment[v],
                });
            }
        }
        while let Some(LabeledItem { dist: d, v, label }) = heap.pop() {
            if !best[v].iter().any(|&(l, bd)| l == label && bd == d) {
                continue;
            }
            for &(u, _) in self.graph.neighbors(v) {
                let u = u as usize;
                let len = self.radial_distance(v, u);
                if !len.is_finite() {
                    continue;
                }
                let nd = d + len;
                if try_improve(&mut best[u], label, nd) {
                    heap.push(LabeledItem {
                        dist: nd,
                        v: u,
                        label,
                    });
                }
            }
        }
        (0..n)
            .map(|v| {
                if assignment[v] == usize::MAX {
                    return f64::INFINITY;
                }
                best[v]
                    .iter()
                    .filter(|&&(l, _)| l != assignment[v] && l != usize::MAX)
                    .map(|&(_, d)| d)
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }
}

/// Insert (label, dist) into a two-slot best list; true when it improved.
fn try_improve(slots: &mut [(usize, f64); 2], label: usize, dist: f64) -> bool {
    if let Some(slot) = slots.iter_mut().find(|s| s.0 == label) {
        if dist < slot.1 {
            slot.1 = dist;
            if slots[1].1 < slots[0].1 {
                slots.swap(0, 1);
            }
            return true;
        }
        return false;
    }
    if dist < slots[1].1 {
        slots[1] = (label, dist);
        if slots[1].1 < slots[0].1 {
            slots.swap(0, 1);
        }
        return true;
    }
    false
}

struct HeapItem {
    dist: f64,
    v: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.v == other.v
    }
}
impl Eq for HeapItem {}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.v.cmp(&self.v))
    }
}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct LabeledItem {
    dist: f64,
    v: usize,
    label: usize,
}

impl PartialEq for LabeledItem {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.v == other.v && self.label == other.label
    }
}
impl Eq for LabeledItem {}
impl Ord for LabeledItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.v.cmp(&self.v))
            .then_with(|| other.label.cmp(&self.label))
    }
}
impl PartialOrd for LabeledItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Report from verifying `d_F(u,v) |F(u)| <= 2 |F(u) - F(v)|`.
///
/// Pairs where exactly one endpoint vanishes have infinite d_F and fall
/// outside the inequality's domain; they are skipped (with `F(u) = 0` the
/// left side is taken as zero). `max_slack` is the largest `lhs - rhs`
/// seen; nonpositive means the inequality held everywhere.
#[derive(Debug, Clone)]
pub struct NormLipschitzReport {
    pub checked_pairs: usize,
    pub violations: usize,
    pub max_slack: f64,
}

/// Verifies the norm-Lipschitz inequality on all edges, and on all ordered
/// pairs when `n <= 256`.
pub fn check_norm_lipschitz(mv: &MetricView<'_>) -> NormLipschitzReport {
    let n = mv.graph().n();
    let mut report = NormLipschitzReport {
        checked_pairs: 0,
        violations: 0,
        max_slack: f64::NEG_INFINITY,
    };
    let check = |u: usize, v: usize, report: &mut NormLipschitzReport| {
        let d = mv.radial_distance(u, v);
        let lhs = if mv.norm(u) == 0.0 {
            0.0
        } else {
            d * mv.norm(u)
        };
        if !lhs.is_finite() {
            return;
        }
        let rhs = 2.0 * mv.map().row_dist_sq(u, v).sqrt();
        report.checked_pairs += 1;
        let slack = lhs - rhs;
        report.max_slack = report.max_slack.max(slack);
        if slack > 1e-12 {
            report.violations += 1;
        }
    };
    if n <= 256 {
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    check(u, v, &mut report);
                }
            }
        }
    } else {
        for e in mv.graph().edges() {
            check(e.u as usize, e.v as usize, &mut report);
            check(e.v as usize, e.u as usize, &mut report);
        }
    }
    report
}

/// Certificate that every probed d_F-ball of radius `delta / 2` carries at
/// most an `eta` fraction of the total weighted l2 mass.
#[derive(Debug, Clone)]
pub struct SpreadingCertificate {
    pub delta: f64,
    pub eta: f64,
    pub checked_sets: usize,
    /// (center vertex, mass fraction) for each offending ball.
    pub violations: Vec<(usize, f64)>,
}

impl SpreadingCertificate {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Probes the spreading property of an embedding: balls of d_F-radius
/// `delta / 2` (so of diameter at most `delta`) must not exceed `eta` of the
/// total mass. Exhaustive over all centers when `n <= 4096`, else `probes`
/// seeded random centers.
pub fn spreading_check(
    g: &WeightedGraph,
    mv: &MetricView<'_>,
    delta: f64,
    eta: f64,
    probes: usize,
    seed: u64,
) -> SpreadingCertificate {
    let n = g.n();
    let total: f64 = (0..n).map(|v| g.degree(v) * mv.norm(v) * mv.norm(v)).sum();
    let centers: Vec<usize> = if n <= 4096 {
        (0..n).collect()
    } else {
        let mut rng = seeded_rng(mix_seed(seed, 0x5bead));
        (0..probes)
            .map(|_| ((uniform_unit(&mut rng) * n as f64) as usize).min(n - 1))
            .collect()
    };
    let radius = delta / 2.0;
    let mut violations = Vec::new();
    let checked = centers.len();
    for u in centers {
        let mut mass = 0.0;
        for v in 0..n {
            if mv.radial_distance(u, v) <= radius {
                mass += g.degree(v) * mv.norm(v) * mv.norm(v);
            }
        }
        let fraction = mass / total;
        if fraction > eta + 1e-12 {
            violations.push((u, fraction));
        }
    }
    SpreadingCertificate {
        delta,
        eta,
        checked_sets: checked,
        violations,
    }
}

/// A seeded Gaussian projection `R^k -> R^h`; rows are i.i.d. standard
/// normal vectors scaled by `h^{-1/2}`.
#[derive(Debug, Clone)]
pub struct GaussianProjection {
    pub k: usize,
    pub h: usize,
    pub seed: u64,
    /// h x k row-major, entries N(0, 1) / sqrt(h).
    matrix: Vec<f64>,
}

impl GaussianProjection {
    pub fn sample(k: usize, h: usize, seed: u64) -> Self {
        let mut rng = seeded_rng(seed);
        let mut matrix = vec![0.0; h * k];
        fill_standard_normal(&mut rng, &mut matrix);
        let scale = 1.0 / (h as f64).sqrt();
        for x in &mut matrix {
            *x *= scale;
        }
        Self { k, h, seed, matrix }
    }

    /// Applies the projection to one vector.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, GeometryError> {
        if x.len() != self.k {
            return Err(GeometryError::DimensionMismatch {
                expected: self.k,
                got: x.len(),
            });
        }
        let mut out = vec![0.0; self.h];
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.matrix[i * self.k..(i + 1) * self.k];
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        Ok(out)
    }
}

/// Projects every vertex vector: `F'(v) = Gamma(F(v))`.
pub fn project(gp: &GaussianProjection, f: &VertexMap) -> Result<VertexMap, GeometryError> {
    if f.dim() != gp.k {
        return Err(GeometryError::DimensionMismatch {
            expected: gp.k,
            got: f.dim(),
        });
    }
    let n = f.n();
    let mut data = vec![0.0; n * gp.h];
    for v in 0..n {
        let out = gp.apply(f.row(v))?;
        data[v * gp.h..(v + 1) * gp.h].copy_from_slice(&out);
    }
    Ok(VertexMap::from_data(n, gp.h, data))
}

/// Outcome of a dimension-reduction run.
#[derive(Debug, Clone)]
pub struct ReductionReport {
    /// Output dimension (equals the input dimension when capped).
    pub h: usize,
    /// Whether the formulaic h reached the input dimension, returning F as-is.
    pub capped: bool,
    /// Attempts consumed (0 when capped).
    pub attempts: usize,
    /// Achieved `R(F') / R(F)`.
    pub rayleigh_ratio: f64,
    /// Fraction of vertices whose projected norm left the
    /// `[(1 - delta') |F|^2, (1 + delta') |F|^2]` band, `delta' = Delta/16`.
    pub out_of_band_fraction: f64,
    /// Ratio of projected to original total weighted mass.
    pub mass_ratio: f64,
}

/// Smallest h with `2 exp(-delta'^2 h / 12) <= delta'^2 k^{-3} / 128`,
/// `delta' = Delta / 16`.
pub fn reduction_dimension(k: usize, delta: f64) -> usize {
    let d = delta / 16.0;
    let h = (12.0 / (d * d)) * (256.0 * (k as f64).powi(3) / (d * d)).ln();
    h.ceil() as usize
}

/// Randomly projects an embedding to the formulaic target dimension,
/// retrying until the Rayleigh quotient grows by at most 8x and the total
/// weighted mass stays within `[1 - 2 delta', 1 + 2 delta']` of the
/// original. If the target dimension is at least the input dimension the
/// map is returned unchanged (ratio 1).
pub fn reduce_dimension(
    g: &WeightedGraph,
    f: &VertexMap,
    delta: f64,
    retries: usize,
    seed: u64,
) -> Result<(VertexMap, ReductionReport), GeometryError> {
    let k = f.dim();
    let h = reduction_dimension(k, delta);
    if h >= k {
        return Ok((
            f.clone(),
            ReductionReport {
                h: k,
                capped: true,
                attempts: 0,
                rayleigh_ratio: 1.0,
                out_of_band_fraction: 0.0,
                mass_ratio: 1.0,
            },
        ));
    }
    reduce_dimension_to(g, f, h, delta, retries, seed)
}

/// Projection to an explicit target dimension with the same acceptance test.
pub fn reduce_dimension_to(
    g: &WeightedGraph,
    f: &VertexMap,
    h: usize,
    delta: f64,
    retries: usize,
    seed: u64,
) -> Result<(VertexMap, ReductionReport), GeometryError> {
    let k = f.dim();
    let dprime = delta / 16.0;
    let (num, den) = rayleigh_parts(g, f);
    if den <= 0.0 {
        return Err(GeometryError::Spectral(SpectralError::ZeroFunction));
    }
    let base_rayleigh = num / den;

    for attempt in 0..retries {
        let gp = GaussianProjection::sample(k, h, mix_seed(seed, attempt as u64));
        let projected = project(&gp, f)?;
        let (pnum, pden) = rayleigh_parts(g, &projected);
        if pden <= 0.0 {
            continue;
        }
        let ratio = if base_rayleigh > 0.0 {
            (pnum / pden) / base_rayleigh
        } else if pnum / pden <= 1e-12 {
            1.0
        } else {
            f64::INFINITY
        };
        let mass_ratio = pden / den;
        if ratio <= 8.0 && (mass_ratio - 1.0).abs() <= 2.0 * dprime {
            let mut out_of_band = 0usize;
            for v in 0..f.n() {
                let orig = f.row(v).iter().map(|x| x * x).sum::<f64>();
                let proj = projected.row(v).iter().map(|x| x * x).sum::<f64>();
                if proj < (1.0 - dprime) * orig || proj > (1.0 + dprime) * orig {
                    out_of_band += 1;
                }
            }
            return Ok((
                projected,
                ReductionReport {
                    h,
                    capped: false,
                    attempts: attempt + 1,
                    rayleigh_ratio: ratio,
                    out_of_band_fraction: out_of_band as f64 / f.n() as f64,
                    mass_ratio,
                },
            ));
        }
    }
    Err(GeometryError::RetriesExhausted(retries))
}
