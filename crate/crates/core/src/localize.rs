//! Smooth bump localization: confine an embedding to neighborhoods of given
//! sets with a linear cutoff in the induced path metric, keeping supports
//! disjoint and edge stretch controlled.

use thiserror::Error;

use crate::geometry::MetricView;
use crate::graph::WeightedGraph;
use crate::spectral::{best_coordinate, rayleigh, SpectralError};
use crate::vertex_map::VertexMap;

#[derive(Debug, Error, Clone)]
pub enum LocalizeError {
    #[error("source set is empty")]
    EmptySet,
    #[error(
        "groups {i} and {j} are {dist:.6e} apart in the induced path metric, below the required separation {beta:.6e}"
    )]
    SeparationViolated {
        i: usize,
        j: usize,
        dist: f64,
        beta: f64,
    },
    #[error("group {i} carries mass {mass:.6e}, below the required {required:.6e}")]
    MassTooSmall { i: usize, mass: f64, required: f64 },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// The cutoff product `psi = theta * F` for one source set.
#[derive(Debug, Clone)]
pub struct LocalizedFunction {
    pub psi: VertexMap,
    /// Vertices where `psi` is nonzero, sorted.
    pub support: Vec<usize>,
    pub source_set: Vec<usize>,
    pub epsilon: f64,
    /// `theta(v) = max(0, 1 - d-hat(v, S) / epsilon)`.
    pub theta: Vec<f64>,
}

/// Localizes `F` onto `S`: inside `S` the map is untouched, it decays
/// linearly in `d-hat(., S)` and vanishes outside the open
/// epsilon-neighborhood. Per edge, `|psi(u) - psi(v)|` is at most
/// `(1 + 2/epsilon) |F(u) - F(v)|`.
pub fn bump_localize(
    g: &WeightedGraph,
    f: &VertexMap,
    set: &[usize],
    epsilon: f64,
) -> Result<LocalizedFunction, LocalizeError> {
    let mv = MetricView::new(g, f);
    bump_localize_with(&mv, set, epsilon)
}

/// As `bump_localize`, reusing a caller-held metric view.
pub fn bump_localize_with(
    mv: &MetricView<'_>,
    set: &[usize],
    epsilon: f64,
) -> Result<LocalizedFunction, LocalizeError> {
    if set.is_empty() {
        return Err(LocalizeError::EmptySet);
    }
    assert!(epsilon > 0.0, "epsilon must be positive");
    let f = mv.map();
    let n = f.n();
    let dist = mv.multi_source_distance(set);
    let mut theta = vec![0.0; n];
    let mut psi = VertexMap::zeros(n, f.dim());
    let mut support = Vec::new();
    for v in 0..n {
        let t = if dist[v].is_finite() {
            (1.0 - dist[v] / epsilon).max(0.0)
        } else {
            0.0
        };
        theta[v] = t;
        if t > 0.0 {
            let row = psi.row_mut(v);
            for (out, x) in row.iter_mut().zip(f.row(v)) {
                *out = t * x;
            }
            if row.iter().any(|&x| x != 0.0) {
                support.push(v);
            }
        }
    }
    let mut source_set = set.to_vec();
    source_set.sort_unstable();
    source_set.dedup();
    Ok(LocalizedFunction {
        psi,
        support,
        source_set,
        epsilon,
        theta,
    })
}

/// One scalarized bump, sorted into the output by Rayleigh quotient.
#[derive(Debug, Clone)]
pub struct ScalarBump {
    pub values: VertexMap,
    pub support: Vec<usize>,
    /// Which input group produced it.
    pub group: usize,
    /// Coordinate selected by the mediant rule.
    pub coordinate: usize,
    pub rayleigh: f64,
    /// The certified ceiling `2 / (delta (r - i + 1)) (1 + 4/beta)^2 R(F)`.
    pub averaging_bound: f64,
}

/// Output of `disjoint_bumps`: the vector-valued localizations in group
/// order and the scalarized functions sorted by Rayleigh quotient.
#[derive(Debug, Clone)]
pub struct DisjointBumps {
    pub bumps: Vec<LocalizedFunction>,
    pub functions: Vec<ScalarBump>,
}

/// Localizes each group with `epsilon = beta / 2`, producing disjointly
/// supported scalar functions ordered by ascending Rayleigh quotient.
///
/// Preconditions are verified, not assumed: groups must be pairwise
/// `beta`-separated in the induced path metric and each must carry at least
/// a `delta` fraction of the total weighted l2 mass.
pub fn disjoint_bumps(
    g: &WeightedGraph,
    f: &VertexMap,
    groups: &[Vec<usize>],
    beta: f64,
    delta: f64,
) -> Result<DisjointBumps, LocalizeError> {
    assert!(beta > 0.0 && delta > 0.0);
    let mv = MetricView::new(g, f);
    let r = groups.len();
    let total_mass: f64 = (0..g.n())
        .map(|v| g.degree(v) * mv.norm(v) * mv.norm(v))
        .sum();

    for (i, group) in groups.iter().enumerate() {
        if group.is_empty() {
            return Err(LocalizeError::EmptySet);
        }
        let mass: f64 = group
            .iter()
            .map(|&v| g.degree(v) * mv.norm(v) * mv.norm(v))
            .sum();
        if mass < delta * total_mass * (1.0 - 1e-12) {
            return Err(LocalizeError::MassTooSmall {
                i,
                mass,
                required: delta * total_mass,
            });
        }
    }
    // Pairwise separation from one multi-source pass per group.
    for i in 0..r {
        let dist = mv.multi_source_distance(&groups[i]);
        for j in i + 1..r {
            let closest = groups[j]
                .iter()
                .map(|&v| dist[v])
                .fold(f64::INFINITY, f64::min);
            if closest < beta {
                return Err(LocalizeError::SeparationViolated {
                    i,
                    j,
                    dist: closest,
                    beta,
                });
            }
        }
    }

    let epsilon = beta / 2.0;
    let mut bumps = Vec::with_capacity(r);
    for group in groups {
        bumps.push(bump_localize_with(&mv, group, epsilon)?);
    }

    let base_rayleigh = rayleigh(g, f)?;
    let stretch = (1.0 + 4.0 / beta) * (1.0 + 4.0 / beta);
    let mut functions = Vec::with_capacity(r);
    for (gi, bump) in bumps.iter().enumerate() {
        let (coordinate, scalar) = best_coordinate(g, &bump.psi)?;
        let support: Vec<usize> = (0..g.n())
            .filter(|&v| scalar.row(v)[0] != 0.0)
            .collect();
        let rq = rayleigh(g, &scalar)?;
        functions.push(ScalarBump {
            values: scalar,
            support,
            group: gi,
            coordinate,
            rayleigh: rq,
            averaging_bound: f64::NAN, // filled after sorting
        });
    }
    functions.sort_by(|a, b| {
        a.rayleigh
            .total_cmp(&b.rayleigh)
            .then_with(|| a.group.cmp(&b.group))
    });
    for (i, func) in functions.iter_mut().enumerate() {
        func.averaging_bound =
            2.0 / (delta * (r - i) as f64) * stretch * base_rayleigh.max(0.0);
        debug_assert!(
            func.rayleigh <= func.averaging_bound + 1e-9 * (1.0 + func.averaging_bound),
            "averaging bound violated: {} > {}",
            func.rayleigh,
            func.averaging_bound
        );
    }
    Ok(DisjointBumps { bumps, functions })
}
