//! Exact k-way expansion by exhaustive enumeration, for desk-scale graphs.
//!
//! `rho(k)` is the minimum over all collections of k nonempty disjoint vertex
//! subsets of the maximum expansion among them. Enumeration assigns each
//! vertex a label in {unassigned, 1..k}; labels are required to first appear
//! in increasing order, which quotients out the k! label permutations.

use rayon::prelude::*;

use crate::graph::{GraphError, WeightedGraph};

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 12;

/// Exact `rho(k)` with one optimal witness.
#[derive(Debug, Clone, PartialEq)]
pub struct KWayExpansion {
    pub value: f64,
    pub witness: Vec<Vec<usize>>,
}

/// Exhaustive `rho(k)` with the default size cap.
pub fn k_way_expansion_exact(g: &WeightedGraph, k: usize) -> Result<KWayExpansion, GraphError> {
    k_way_expansion_exact_capped(g, k, DEFAULT_BRUTE_FORCE_CAP)
}

/// Exhaustive `rho(k)` with a caller-chosen cap on n.
pub fn k_way_expansion_exact_capped(
    g: &WeightedGraph,
    k: usize,
    cap: usize,
) -> Result<KWayExpansion, GraphError> {
    let n = g.n();
    if n > cap {
        return Err(GraphError::TooLarge { n, cap });
    }
    if k == 0 || k > n {
        return Err(GraphError::BadK { k, n });
    }

    // Enumerate canonical label prefixes for the first few vertices, then
    // finish each branch independently. Deterministic: candidates are merged
    // with a total order (value, witness), so the parallel reduction is
    // order-independent.
    let prefix_len = n.min(5);
    let mut prefixes = Vec::new();
    let mut labels = vec![0u8; n];
    enumerate_prefixes(&mut labels, 0, prefix_len, 0, k, &mut prefixes);

    let best = prefixes
        .into_par_iter()
        .filter_map(|(prefix, used)| {
            let mut labels = prefix;
            let mut best: Option<Candidate> = None;
            complete_assignments(g, &mut labels, prefix_len, used, k, &mut best);
            best
        })
        .reduce_with(|a, b| if b.better_than(&a) { b } else { a });

    let best = best.expect("k <= n guarantees at least one full assignment");
    Ok(KWayExpansion {
        value: best.value,
        witness: best.witness,
    })
}

#[derive(Debug, Clone)]
struct Candidate {
    value: f64,
    witness: Vec<Vec<usize>>,
}

impl Candidate {
    /// Strictly smaller value wins; ties go to the lexicographically
    /// smallest witness (sets sorted by first member, compared elementwise).
    fn better_than(&self, other: &Candidate) -> bool {
        if self.value < other.value {
            return true;
        }
        if self.value > other.value {
            return false;
        }
        self.witness < other.witness
    }
}

fn enumerate_prefixes(
    labels: &mut [u8],
    v: usize,
    prefix_len: usize,
    used: u8,
    k: usize,
    out: &mut Vec<(Vec<u8>, u8)>,
) {
    if v == prefix_len {
        out.push((labels.to_vec(), used));
        return;
    }
    let max_label = (used + 1).min(k as u8);
    for label in 0..=max_label {
        labels[v] = label;
        enumerate_prefixes(labels, v + 1, prefix_len, used.max(label), k, out);
    }
    labels[v] = 0;
}

fn complete_assignments(
    g: &WeightedGraph,
    labels: &mut [u8],
    v: usize,
    used: u8,
    k: usize,
    best: &mut Option<Candidate>,
) {
    let n = g.n();
    // Not enough vertices left to introduce all k labels.
    if (k as u8 - used) as usize > n - v {
        return;
    }
    if v == n {
        if used == k as u8 {
            evaluate(g, labels, k, best);
        }
        return;
    }
    let max_label = (used + 1).min(k as u8);
    for label in 0..=max_label {
        labels[v] = label;
        complete_assignments(g, labels, v + 1, used.max(label), k, best);
    }
    labels[v] = 0;
}

fn evaluate(g: &WeightedGraph, labels: &[u8], k: usize, best: &mut Option<Candidate>) {
    let mut cut = vec![0.0f64; k + 1];
    let mut weight = vec![0.0f64; k + 1];
    for v in 0..g.n() {
        let lv = labels[v] as usize;
        weight[lv] += g.degree(v);
    }
    for e in g.edges() {
        let (a, b) = (labels[e.u as usize] as usize, labels[e.v as usize] as usize);
        if a != b {
            cut[a] += e.w;
            cut[b] += e.w;
        }
    }
    let mut value = 0.0f64;
    for label in 1..=k {
        value = value.max(cut[label] / weight[label]);
    }

    let improves = match best {
        Some(b) => value < b.value || (value == b.value),
        None => true,
    };
    if !improves {
        return;
    }
    let mut witness = vec![Vec::new(); k];
    for v in 0..g.n() {
        if labels[v] > 0 {
            witness[labels[v] as usize - 1].push(v);
        }
    }
    witness.sort();
    let candidate = Candidate { value, witness };
    match best {
        Some(b) if candidate.better_than(b) => *b = candidate,
        None => *best = Some(candidate),
        _ => {}
    }
}
