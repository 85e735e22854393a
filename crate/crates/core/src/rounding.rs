//! Cheeger sweep rounding: threshold the squared norms of a function at
//! every level and keep the superlevel set of least expansion.

use thiserror::Error;

use crate::graph::WeightedGraph;
use crate::vertex_map::VertexMap;

#[derive(Debug, Error, Clone)]
pub enum RoundingError {
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("group {0} is empty or carries no positive sweep values")]
    EmptyGroup(usize),
    #[error("need at least {wanted} groups, got {got}")]
    TooFewGroups { wanted: usize, got: usize },
    #[error("input sets overlap at vertex {0}")]
    Overlap(usize),
    #[error("no input sets given")]
    EmptyInput,
}

/// One sweep outcome: the winning superlevel set, its threshold, and its
/// expansion. `source` names the function or group that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub set: Vec<usize>,
    pub threshold: f64,
    pub expansion: f64,
    pub source: usize,
}

/// Sweeps all distinct positive thresholds of `|psi(v)|^2` (descending) and
/// returns the minimum-expansion superlevel set, which is guaranteed to
/// satisfy `phi(S) <= sqrt(2 R(psi))`.
///
/// Ties break toward the smaller set weight; since vertex weights are
/// strictly positive this pins a unique prefix.
pub fn cheeger_sweep(g: &WeightedGraph, psi: &VertexMap) -> Result<SweepResult, RoundingError> {
    let values: Vec<f64> = (0..g.n())
        .map(|v| psi.row(v).iter().map(|x| x * x).sum::<f64>())
        .collect();
    let scope: Vec<usize> = (0..g.n()).collect();
    sweep_scoped(g, &values, &scope, 0)
}

/// Sweep restricted to `scope`: candidate sets are the superlevel sets of
/// `values` within the scope, while cut edges are counted graph-wide.
pub fn sweep_scoped(
    g: &WeightedGraph,
    values: &[f64],
    scope: &[usize],
    source: usize,
) -> Result<SweepResult, RoundingError> {
    let mut order: Vec<usize> = scope.iter().copied().filter(|&v| values[v] > 0.0).collect();
    if order.is_empty() {
        return Err(RoundingError::ZeroFunction);
    }
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then_with(|| a.cmp(&b)));

    let mut in_set = vec![false; g.n()];
    let mut cut = 0.0f64;
    let mut weight = 0.0f64;
    let mut best: Option<(f64, f64, usize, f64)> = None; // (phi, weight, prefix_len, tau)

    for (idx, &v) in order.iter().enumerate() {
        in_set[v] = true;
        weight += g.degree(v);
        for &(u, w) in g.neighbors(v) {
            if in_set[u as usize] {
                cut -= w;
            } else {
                cut += w;
            }
        }
        // Candidate thresholds sit at strict value drops (ties enter
        // together) and at the end of the ordering.
        let boundary = idx + 1 == order.len() || values[order[idx + 1]] < values[v];
        if !boundary {
            continue;
        }
        let phi = cut / weight;
        let better = match best {
            None => true,
            Some((bphi, bweight, _, _)) => {
                phi < bphi || (phi == bphi && weight < bweight)
            }
        };
        if better {
            best = Some((phi, weight, idx + 1, values[v]));
        }
    }

    let (phi, _, len, tau) = best.expect("at least one candidate threshold");
    let mut set: Vec<usize> = order[..len].to_vec();
    set.sort_unstable();
    Ok(SweepResult {
        set,
        threshold: tau,
        expansion: phi,
        source,
    })
}

/// Per-group Cheeger sweeps on `|F(v)|^2`, returning the `r` best-expansion
/// results among the groups. Outputs are pairwise disjoint and nonempty.
pub fn multiway_threshold_round(
    g: &WeightedGraph,
    f: &VertexMap,
    groups: &[Vec<usize>],
    r: usize,
) -> Result<Vec<SweepResult>, RoundingError> {
    if groups.len() < r {
        return Err(RoundingError::TooFewGroups {
            wanted: r,
            got: groups.len(),
        });
    }
    let values: Vec<f64> = (0..g.n())
        .map(|v| f.row(v).iter().map(|x| x * x).sum::<f64>())
        .collect();
    let mut results = Vec::with_capacity(groups.len());
    for (i, group) in groups.iter().enumerate() {
        match sweep_scoped(g, &values, group, i) {
            Ok(result) => results.push(result),
            Err(RoundingError::ZeroFunction) => return Err(RoundingError::EmptyGroup(i)),
            Err(e) => return Err(e),
        }
    }
    results.sort_by(|a, b| {
        a.expansion
            .total_cmp(&b.expansion)
            .then_with(|| {
                let wa = g.set_weight(&a.set);
                let wb = g.set_weight(&b.set);
                wa.total_cmp(&wb)
            })
            .then_with(|| a.set.cmp(&b.set))
    });
    results.truncate(r);
    Ok(results)
}

/// A full vertex partition obtained by completing disjoint sets.
#[derive(Debug, Clone)]
pub struct CompletedPartition {
    /// Disjoint sets covering V; the last one is the complement fill.
    pub sets: Vec<Vec<usize>>,
    pub expansions: Vec<f64>,
    /// Certified ceiling on the fill set: `k * max_i phi(S_i)` over the
    /// original sets.
    pub fill_bound: f64,
}

/// Completes disjoint nonempty sets to a partition of V: sort by weight
/// ascending, replace the heaviest with the complement of the rest.
pub fn complete_to_partition(
    g: &WeightedGraph,
    sets: &[Vec<usize>],
) -> Result<CompletedPartition, RoundingError> {
    if sets.is_empty() {
        return Err(RoundingError::EmptyInput);
    }
    let mut seen = vec![false; g.n()];
    for set in sets {
        if set.is_empty() {
            return Err(RoundingError::EmptyInput);
        }
        for &v in set {
            if seen[v] {
                return Err(RoundingError::Overlap(v));
            }
            seen[v] = true;
        }
    }
    let k = sets.len();
    let max_input_phi = sets
        .iter()
        .map(|s| g.expansion(s).map(|m| m.expansion))
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|_| RoundingError::EmptyInput)?
        .into_iter()
        .fold(0.0f64, f64::max);

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        g.set_weight(&sets[a])
            .total_cmp(&g.set_weight(&sets[b]))
            .then_with(|| sets[a].cmp(&sets[b]))
    });
    let mut out: Vec<Vec<usize>> = order[..k - 1]
        .iter()
        .map(|&i| {
            let mut s = sets[i].clone();
            s.sort_unstable();
            s
        })
        .collect();
    let mut covered = vec![false; g.n()];
    for s in &out {
        for &v in s {
            covered[v] = true;
        }
    }
    let fill: Vec<usize> = (0..g.n()).filter(|&v| !covered[v]).collect();
    out.push(fill);

    let expansions: Vec<f64> = out
        .iter()
        .map(|s| {
            if s.len() == g.n() {
                0.0
            } else {
                g.expansion(s).map(|m| m.expansion).unwrap_or(0.0)
            }
        })
        .collect();
    let fill_bound = k as f64 * max_input_phi;
    debug_assert!(
        *expansions.last().unwrap() <= fill_bound + 1e-9,
        "completion bound violated"
    );
    Ok(CompletedPartition {
        sets: out,
        expansions,
        fill_bound,
    })
}
