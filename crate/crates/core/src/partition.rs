//! Random geometric partitions of embedded vertices and mass-balanced
//! grouping of their cells.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use thiserror::Error;

use crate::geometry::MetricView;
use crate::random::{fill_standard_normal, seeded_rng, uniform_unit, uniform_unit_open};
use crate::vertex_map::VertexMap;

#[derive(Debug, Error, Clone)]
pub enum PartitionError {
    #[error(
        "cell mass {mass:.6e} exceeds the spreading cap {cap:.6e}; re-randomize the partition"
    )]
    InsufficientMass { mass: f64, cap: f64 },
    #[error("grouping needs k/2 <= r <= k, got k = {k}, r = {r}")]
    BadGroupCount { k: usize, r: usize },
    #[error("only {filled} of {wanted} groups reached the mass threshold; re-randomize")]
    GroupsUnfilled { filled: usize, wanted: usize },
}

/// Vertices carried into a geometric partition: ids, unit-normalized
/// coordinates, and the mass `w(v) |F(v)|^2` of whichever embedding drives
/// the partition. Zero-norm vertices are excluded at construction.
#[derive(Debug, Clone)]
pub struct EmbeddedPointSet {
    pub dim: usize,
    pub ids: Vec<usize>,
    /// Row-major `ids.len() x dim`, rows on the unit sphere.
    pub coords: Vec<f64>,
    pub mass: Vec<f64>,
}

impl EmbeddedPointSet {
    /// Radially normalizes an embedding, dropping vertices with `F(v) = 0`.
    pub fn from_embedding(g: &crate::graph::WeightedGraph, f: &VertexMap) -> Self {
        let dim = f.dim();
        let mut ids = Vec::new();
        let mut coords = Vec::new();
        let mut mass = Vec::new();
        for v in 0..f.n() {
            let norm = f.norm(v);
            if norm > 0.0 {
                ids.push(v);
                coords.extend(f.row(v).iter().map(|x| x / norm));
                mass.push(g.degree(v) * norm * norm);
            }
        }
        Self {
            dim,
            ids,
            coords,
            mass,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }
}

/// How a partition was generated, with enough detail to audit it.
#[derive(Debug, Clone, PartialEq)]
pub enum PartitionScheme {
    /// Greedy carving by balls of the given radius around centers sampled
    /// uniformly from the unit ball.
    BallCarving { radius: f64 },
    /// Axis-aligned cubes of the given side with a uniform offset per axis.
    ShiftedGrid { side: f64, offsets: Vec<f64> },
    /// Ball carving in the induced shortest-path metric: random vertex
    /// permutation, one uniform radius in `[delta/4, delta/2]`.
    MetricCarving { radius: f64 },
}

/// One cell: member vertex ids (sorted) and their total mass.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Cell {
    pub vertices: Vec<usize>,
    pub mass: f64,
}

/// A diameter-bounded random partition of the carved vertices.
#[derive(Debug, Clone)]
pub struct RandomPartition {
    pub scheme: PartitionScheme,
    /// Certified diameter bound for every cell.
    pub delta: f64,
    pub seed: u64,
    pub cells: Vec<Cell>,
}

impl RandomPartition {
    /// Cell index per graph vertex; `usize::MAX` for uncovered vertices.
    pub fn assignment(&self, n: usize) -> Vec<usize> {
        let mut a = vec![usize::MAX; n];
        for (i, cell) in self.cells.iter().enumerate() {
            for &v in &cell.vertices {
                a[v] = i;
            }
        }
        a
    }

    pub fn total_mass(&self) -> f64 {
        self.cells.iter().map(|c| c.mass).sum()
    }

    /// Largest pairwise d_F-diameter over cells, exhaustive per cell up to
    /// 512 members and seeded-sampled beyond.
    pub fn max_cell_diameter(&self, mv: &MetricView<'_>) -> f64 {
        let mut max = 0.0f64;
        let mut rng = seeded_rng(self.seed ^ 0xd1a3);
        for cell in &self.cells {
            let m = cell.vertices.len();
            if m <= 512 {
                for i in 0..m {
                    for j in i + 1..m {
                        max = max.max(mv.radial_distance(cell.vertices[i], cell.vertices[j]));
                    }
                }
            } else {
                for _ in 0..200_000 {
                    let i = (uniform_unit(&mut rng) * m as f64) as usize;
                    let j = (uniform_unit(&mut rng) * m as f64) as usize;
                    max = max.max(
                        mv.radial_distance(cell.vertices[i.min(m - 1)], cell.vertices[j.min(m - 1)]),
                    );
                }
            }
        }
        max
    }
}

/// Carves the point set by Euclidean balls of radius `radius` around centers
/// drawn uniformly from the closed unit ball (Gaussian direction, radius
/// `u^{1/h}` magnitude). Cells have d_F-diameter at most `2 radius`.
///
/// Centers that cover nothing are "dead draws". After `64 * points` dead
/// draws the carving falls back to deterministic sweeps centered at the
/// image of the smallest uncovered vertex id, which terminates
/// unconditionally without changing covered-cell geometry.
pub fn ball_carving(points: &EmbeddedPointSet, radius: f64, seed: u64) -> RandomPartition {
    assert!(radius > 0.0 && radius <= 1.0, "radius must be in (0, 1]");
    let n = points.len();
    let mut rng = seeded_rng(seed);
    let mut covered = vec![false; n];
    let mut remaining = n;
    let mut cells = Vec::new();
    let mut dead_draws = 0usize;
    let dead_budget = 64 * n.max(1);
    let mut center = vec![0.0; points.dim];

    while remaining > 0 {
        if dead_draws < dead_budget {
            fill_standard_normal(&mut rng, &mut center);
            let norm: f64 = center.iter().map(|x| x * x).sum::<f64>().sqrt();
            let mag = libm::pow(uniform_unit_open(&mut rng), 1.0 / points.dim as f64);
            if norm > 0.0 {
                for x in &mut center {
                    *x *= mag / norm;
                }
            }
        } else {
            // Fallback: carve at the smallest uncovered vertex's image.
            let i = (0..n)
                .filter(|&i| !covered[i])
                .min_by_key(|&i| points.ids[i])
                .unwrap();
            center.copy_from_slice(points.point(i));
        }
        let mut members = Vec::new();
        for i in 0..n {
            if covered[i] {
                continue;
            }
            let d2: f64 = points
                .point(i)
                .iter()
                .zip(&center)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if d2.sqrt() <= radius {
                members.push(i);
            }
        }
        if members.is_empty() {
            dead_draws += 1;
            continue;
        }
        remaining -= members.len();
        let mass = members.iter().map(|&i| points.mass[i]).sum();
        let mut vertices: Vec<usize> = members.iter().map(|&i| points.ids[i]).collect();
        vertices.sort_unstable();
        for i in members {
            covered[i] = true;
        }
        cells.push(Cell { vertices, mass });
    }

    RandomPartition {
        scheme: PartitionScheme::BallCarving { radius },
        delta: 2.0 * radius,
        seed,
        cells,
    }
}

/// Partitions by a randomly shifted axis-aligned grid with cube side
/// `delta / sqrt(h)`, so every cell has Euclidean (= d_F) diameter <= delta.
pub fn shifted_grid_partition(
    points: &EmbeddedPointSet,
    delta: f64,
    seed: u64,
) -> RandomPartition {
    assert!(delta > 0.0, "delta must be positive");
    let h = points.dim.max(1);
    let side = delta / (h as f64).sqrt();
    let mut rng = seeded_rng(seed);
    let offsets: Vec<f64> = (0..h).map(|_| uniform_unit(&mut rng) * side).collect();

    let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for i in 0..points.len() {
        let key: Vec<i64> = points
            .point(i)
            .iter()
            .zip(&offsets)
            .map(|(x, o)| ((x + o) / side).floor() as i64)
            .collect();
        buckets.entry(key).or_default().push(i);
    }
    let mut keys: Vec<&Vec<i64>> = buckets.keys().collect();
    keys.sort();
    let cells = keys
        .into_iter()
        .map(|key| {
            let members = &buckets[key];
            let mass = members.iter().map(|&i| points.mass[i]).sum();
            let mut vertices: Vec<usize> = members.iter().map(|&i| points.ids[i]).collect();
            vertices.sort_unstable();
            Cell { vertices, mass }
        })
        .collect();

    RandomPartition {
        scheme: PartitionScheme::ShiftedGrid { side, offsets },
        delta,
        seed,
        cells,
    }
}

/// Whether the Euclidean ball of radius `rho` around `point` stays inside
/// its grid cube; usable only for `ShiftedGrid` partitions.
pub fn grid_ball_padded(scheme: &PartitionScheme, point: &[f64], rho: f64) -> bool {
    let PartitionScheme::ShiftedGrid { side, offsets } = scheme else {
        panic!("padding geometry is defined for shifted grids only");
    };
    point.iter().zip(offsets).all(|(x, o)| {
        let within = (x + o) / side - ((x + o) / side).floor();
        let margin = within.min(1.0 - within) * side;
        margin >= rho
    })
}

/// Ball carving in the induced shortest-path metric: vertices in a random
/// order become centers, each claiming everything uncovered within one
/// shared uniform radius in `[delta/4, delta/2]`. Cells are delta-bounded
/// in the path metric, hence also under d_F. Zero-norm vertices are skipped.
pub fn metric_ball_carving(mv: &MetricView<'_>, delta: f64, seed: u64) -> RandomPartition {
    assert!(delta > 0.0);
    let n = mv.graph().n();
    let mut rng = seeded_rng(seed);
    let radius = delta / 4.0 * (1.0 + uniform_unit(&mut rng));
    let mut order: Vec<usize> = (0..n).filter(|&v| mv.norm(v) > 0.0).collect();
    order.shuffle(&mut rng);

    let mut covered = vec![false; n];
    let mut cells = Vec::new();
    for &c in &order {
        if covered[c] {
            continue;
        }
        let dist = mv.multi_source_distance(&[c]);
        let mut vertices: Vec<usize> = (0..n)
            .filter(|&v| !covered[v] && mv.norm(v) > 0.0 && dist[v] <= radius)
            .collect();
        vertices.sort_unstable();
        for &v in &vertices {
            covered[v] = true;
        }
        let mass = vertices
            .iter()
            .map(|&v| mv.graph().degree(v) * mv.norm(v) * mv.norm(v))
            .sum();
        cells.push(Cell { vertices, mass });
    }

    RandomPartition {
        scheme: PartitionScheme::MetricCarving { radius },
        delta,
        seed,
        cells,
    }
}

/// Groups built as unions of partition cells.
#[derive(Debug, Clone)]
pub struct GroupedPartition {
    pub groups: Vec<Cell>,
    pub k: usize,
    pub target_groups: usize,
}

/// Packs cells into `r` groups, each of mass at least `total_mass / (2k)`.
///
/// Requires `k/2 <= r <= k` and every cell mass at most
/// `(1/k + (k - r + 1) / (8 k r)) * total_mass`. Greedy over cells sorted
/// by mass descending: fill the current group until it reaches the
/// threshold, then advance. Leftover cells are discarded.
pub fn group_cells_lemma(
    cells: &[Cell],
    total_mass: f64,
    k: usize,
    r: usize,
) -> Result<GroupedPartition, PartitionError> {
    if r == 0 || 2 * r < k || r > k {
        return Err(PartitionError::BadGroupCount { k, r });
    }
    let cap = (1.0 / k as f64 + (k - r + 1) as f64 / (8.0 * k as f64 * r as f64)) * total_mass;
    for cell in cells {
        if cell.mass > cap * (1.0 + 1e-12) {
            return Err(PartitionError::InsufficientMass {
                mass: cell.mass,
                cap,
            });
        }
    }
    let threshold = total_mass / (2.0 * k as f64);

    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&a, &b| {
        cells[b]
            .mass
            .total_cmp(&cells[a].mass)
            .then_with(|| cells[a].vertices.cmp(&cells[b].vertices))
    });

    let mut groups: Vec<Cell> = Vec::with_capacity(r);
    let mut current = Cell {
        vertices: Vec::new(),
        mass: 0.0,
    };
    for &i in &order {
        if groups.len() == r {
            break;
        }
        current.vertices.extend_from_slice(&cells[i].vertices);
        current.mass += cells[i].mass;
        if current.mass >= threshold {
            current.vertices.sort_unstable();
            groups.push(std::mem::take(&mut current));
        }
    }
    if groups.len() < r {
        return Err(PartitionError::GroupsUnfilled {
            filled: groups.len(),
            wanted: r,
        });
    }
    Ok(GroupedPartition {
        groups,
        k,
        target_groups: r,
    })
}

/// Balances cells into at most `k_prime` groups by repeated merging into the
/// lightest group: cells sorted by mass descending seed the first `k_prime`
/// groups; every further cell joins the current minimum-mass group (lowest
/// index on ties).
pub fn balance_groups(p: &RandomPartition, k_prime: usize) -> GroupedPartition {
    assert!(k_prime >= 1);
    let mut order: Vec<usize> = (0..p.cells.len()).collect();
    order.sort_by(|&a, &b| {
        p.cells[b]
            .mass
            .total_cmp(&p.cells[a].mass)
            .then_with(|| p.cells[a].vertices.cmp(&p.cells[b].vertices))
    });

    let mut groups: Vec<Cell> = Vec::new();
    for &i in &order {
        if groups.len() < k_prime {
            groups.push(p.cells[i].clone());
            continue;
        }
        let target = (0..groups.len())
            .min_by(|&a, &b| {
                groups[a]
                    .mass
                    .total_cmp(&groups[b].mass)
                    .then_with(|| a.cmp(&b))
            })
            .unwrap();
        groups[target].vertices.extend_from_slice(&p.cells[i].vertices);
        groups[target].mass += p.cells[i].mass;
    }
    for g in &mut groups {
        g.vertices.sort_unstable();
    }
    GroupedPartition {
        groups,
        k: k_prime,
        target_groups: k_prime,
    }
}

/// Shrinks each cell to its padded interior: members whose distance to the
/// nearest vertex of a different cell (in the induced path metric) exceeds
/// `rho`. Empty interiors are dropped.
pub fn padded_interiors(p: &RandomPartition, mv: &MetricView<'_>, rho: f64) -> Vec<Cell> {
    let n = mv.graph().n();
    let assignment = p.assignment(n);
    let boundary = mv.boundary_distance(&assignment);
    p.cells
        .iter()
        .filter_map(|cell| {
            let vertices: Vec<usize> = cell
                .vertices
                .iter()
                .copied()
                .filter(|&v| boundary[v] > rho)
                .collect();
            if vertices.is_empty() {
                return None;
            }
            let mass = vertices
                .iter()
                .map(|&v| mv.graph().degree(v) * mv.norm(v) * mv.norm(v))
                .sum();
            Some(Cell { vertices, mass })
        })
        .collect()
}
