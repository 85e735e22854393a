//! Shared corpora and oracles for the integration suites.

use specpart::generators::{self, FamilySpec};
use specpart::graph::WeightedGraph;
use specpart::pipeline::{k_sparse_cuts, k_way_partition, PipelineConfig};

/// Every generated graph with at most 10 vertices used by the exact-oracle
/// criteria: paths, cycles, grids, completes, clique unions, and seeded
/// random graphs (some disconnected).
pub fn small_corpus() -> Vec<(String, WeightedGraph)> {
    let mut out: Vec<(String, WeightedGraph)> = Vec::new();
    for n in 2..=10 {
        out.push((format!("path-{n}"), generators::path(n).unwrap()));
    }
    for n in 3..=10 {
        out.push((format!("cycle-{n}"), generators::cycle(n).unwrap()));
    }
    for (r, c) in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 3)] {
        out.push((format!("grid-{r}x{c}"), generators::grid(r, c).unwrap()));
    }
    for n in 2..=8 {
        out.push((format!("complete-{n}"), generators::complete(n).unwrap()));
    }
    for (c, s, w) in [(2, 3, 0.5), (2, 4, 0.1), (3, 3, 0.2), (2, 5, 1.0)] {
        out.push((
            format!("cliques-{c}x{s}-{w}"),
            generators::clique_union(c, s, w).unwrap(),
        ));
    }
    // two disjoint triangles: a disconnected entry
    {
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
        out.push(("two-triangles".into(), g));
    }
    for n in [5usize, 6, 7, 8, 9, 10] {
        for (pi, p) in [(3usize, 0.3), (5, 0.5)] {
            for seed in 0..3u64 {
                let g = generators::gnp(n, p, 100 * n as u64 + 10 * pi as u64 + seed).unwrap();
                out.push((format!("gnp-{n}-{p}-{seed}"), g));
            }
        }
    }
    out
}

/// 50 random graphs with up to 512 vertices for the spreading criterion,
/// skewed toward small sizes to keep the dense eigensolver affordable.
pub fn spreading_corpus() -> Vec<WeightedGraph> {
    let mut out = Vec::new();
    for i in 0..50u64 {
        let n = match i % 10 {
            0 => 384 + 16 * (i as usize % 9),
            1 | 2 => 128 + 11 * (i as usize % 12),
            _ => 16 + 6 * (i as usize % 48),
        };
        let g = match i % 3 {
            0 => generators::gnp(n, (8.0 / n as f64).min(0.5), 900 + i).unwrap(),
            1 => {
                let clusters = 2 + (i as usize % 4);
                let size = (n / clusters).max(2);
                generators::planted_partition(clusters, size, 0.6, 0.05, 900 + i)
                    .unwrap()
                    .0
            }
            _ => {
                let clusters = 2 + (i as usize % 5);
                let size = (n / clusters).max(2);
                generators::clique_union(clusters, size, 0.5).unwrap()
            }
        };
        out.push(g);
    }
    out
}

/// One named benchmark configuration.
pub struct Benchmark {
    pub name: &'static str,
    pub family: FamilySpec,
    pub k: usize,
}

/// The benchmark suite shared by the validity and regression criteria.
pub fn benchmarks() -> Vec<Benchmark> {
    vec![
        Benchmark {
            name: "path-64-k4",
            family: FamilySpec::Path { n: 64 },
            k: 4,
        },
        Benchmark {
            name: "path-16-k4",
            family: FamilySpec::Path { n: 16 },
            k: 4,
        },
        Benchmark {
            name: "cycle-64-k4",
            family: FamilySpec::Cycle { n: 64 },
            k: 4,
        },
        Benchmark {
            name: "cycle-200-k8",
            family: FamilySpec::Cycle { n: 200 },
            k: 8,
        },
        Benchmark {
            name: "grid-8x8-k4",
            family: FamilySpec::Grid { rows: 8, cols: 8 },
            k: 4,
        },
        Benchmark {
            name: "cliques-4x8-k4",
            family: FamilySpec::CliqueUnion {
                clusters: 4,
                size: 8,
                bridge: 0.05,
            },
            k: 4,
        },
        Benchmark {
            name: "cliques-3x10-k3",
            family: FamilySpec::CliqueUnion {
                clusters: 3,
                size: 10,
                bridge: 0.01,
            },
            k: 3,
        },
        Benchmark {
            name: "cliques-16x4-k16",
            family: FamilySpec::CliqueUnion {
                clusters: 16,
                size: 4,
                bridge: 0.1,
            },
            k: 16,
        },
        Benchmark {
            name: "planted-4x32-k4",
            family: FamilySpec::PlantedPartition {
                clusters: 4,
                size: 32,
                p_in: 0.5,
                p_out: 0.01,
                seed: 1,
            },
            k: 4,
        },
        Benchmark {
            name: "hypercube-6-k6",
            family: FamilySpec::NoisyHypercube {
                dim: 6,
                eps: generators::hypercube_eps(6, 1.0),
            },
            k: 6,
        },
    ]
}

/// The two tracked empirical constants of one benchmark run.
pub struct BenchmarkRatios {
    pub cuts_ratio: Option<f64>,
    pub partition_ratio: Option<f64>,
}

/// Runs both pipelines on a benchmark with the suite's fixed seed and
/// returns `max phi / sqrt(lambda_2k log k)` (cuts) and
/// `max phi / sqrt(lambda_k)` (partition).
pub fn benchmark_ratios(bench: &Benchmark) -> BenchmarkRatios {
    let (g, _) = bench.family.build().unwrap();
    let cfg = PipelineConfig::new(bench.k).with_seed(42).with_trials(8);
    let delta = cfg.effective_delta();
    let cuts_ratio = k_sparse_cuts(&g, bench.k, delta, &cfg)
        .ok()
        .and_then(|out| out.phi_over_sqrt_lambda_m_log_k);
    let partition_ratio = k_way_partition(&g, bench.k, &cfg)
        .ok()
        .and_then(|out| out.phi_over_sqrt_lambda_k);
    BenchmarkRatios {
        cuts_ratio,
        partition_ratio,
    }
}

/// Best per-set Jaccard overlap between a reported partition and the ground
/// truth, maximized over assignments (greedy is exact enough for k <= 4,
/// where all permutations are tried).
pub fn best_permutation_jaccard(sets: &[Vec<usize>], truth: &[Vec<usize>]) -> f64 {
    fn jaccard(a: &[usize], b: &[usize]) -> f64 {
        let sa: std::collections::HashSet<usize> = a.iter().copied().collect();
        let sb: std::collections::HashSet<usize> = b.iter().copied().collect();
        let inter = sa.intersection(&sb).count() as f64;
        let union = sa.union(&sb).count() as f64;
        inter / union
    }
    if sets.len() != truth.len() {
        return 0.0;
    }
    let k = sets.len();
    let mut indices: Vec<usize> = (0..k).collect();
    let mut best = 0.0f64;
    permute(&mut indices, 0, &mut |perm| {
        let min = perm
            .iter()
            .enumerate()
            .map(|(i, &j)| jaccard(&sets[i], &truth[j]))
            .fold(f64::INFINITY, f64::min);
        best = best.max(min);
    });
    best
}

fn permute(items: &mut [usize], at: usize, visit: &mut impl FnMut(&[usize])) {
    if at == items.len() {
        visit(items);
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permute(items, at + 1, visit);
        items.swap(at, i);
    }
}
