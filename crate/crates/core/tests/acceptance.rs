//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::time::Instant;

use common::{benchmarks, best_permutation_jaccard, small_corpus, spreading_corpus};
use specpart::exact::k_way_expansion_exact;
use specpart::generators::{
    self, hypercube_eps, noisy_hypercube, noisy_hypercube_expansion,
};
use specpart::geometry::{
    reduce_dimension, reduce_dimension_to, spreading_check, GaussianProjection, MetricView,
};
use specpart::localize::{bump_localize, disjoint_bumps};
use specpart::pipeline::{k_sparse_cuts, k_way_partition, two_way_cuts, PipelineConfig};
use specpart::random::{fill_standard_normal, mix_seed, seeded_rng, uniform_unit};
use specpart::rounding::cheeger_sweep;
use specpart::spectral::{eigenbasis, rayleigh};
use specpart::vertex_map::VertexMap;

fn report(id: u32, name: &str, ok: bool, details: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {id:2} {verdict} - {name} ({details})");
    assert!(ok, "criterion {id} failed: {details}");
}

/// Criterion 1: over 500 random (graph, function) pairs with n <= 200 the
/// sweep satisfies phi(S) <= sqrt(2 R(psi)), zero violations, under 30 s.
#[test]
fn criterion_01_cheeger_sweep_guarantee() {
    let start = Instant::now();
    let mut rng = seeded_rng(0xacce01);
    let mut violations = 0usize;
    let mut worst_margin = f64::NEG_INFINITY;
    for round in 0..500u64 {
        let n = 8 + (mix_seed(round, 1) % 193) as usize; // up to 200
        let p = 0.03 + 0.12 * uniform_unit(&mut rng);
        let g = generators::gnp(n, p, round).unwrap();
        let dim = 1 + (round % 3) as usize;
        let mut data = vec![0.0; n * dim];
        fill_standard_normal(&mut rng, &mut data);
        // most instances get a proper support so the sweep is non-trivial
        if round % 5 != 0 {
            let zeroed = n / 3;
            for v in 0..zeroed {
                for j in 0..dim {
                    data[v * dim + j] = 0.0;
                }
            }
        }
        let psi = VertexMap::from_data(n, dim, data);
        let quotient = rayleigh(&g, &psi).unwrap();
        let sweep = cheeger_sweep(&g, &psi).unwrap();
        let bound = (2.0 * quotient).sqrt();
        if sweep.expansion > bound + 1e-12 {
            violations += 1;
        }
        worst_margin = worst_margin.max(sweep.expansion - bound);
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "Cheeger sweep guarantee",
        violations == 0 && elapsed < 30.0,
        &format!("500 instances, worst phi - sqrt(2R) = {worst_margin:.3e}, {elapsed:.1}s"),
    );
}

/// Criterion 2: lambda_k / 2 <= rho_G(k) for the whole n <= 10 corpus and
/// k in {2, 3}, to 1e-9 slack, under 60 s.
#[test]
fn criterion_02_easy_direction() {
    let start = Instant::now();
    let corpus = small_corpus();
    let mut checked = 0usize;
    let mut violations = Vec::new();
    for (name, g) in &corpus {
        for k in [2usize, 3] {
            if k > g.n() {
                continue;
            }
            let emb = eigenbasis(g, k, 1e-8).unwrap();
            let rho = k_way_expansion_exact(g, k).unwrap().value;
            checked += 1;
            if emb.eigenvalues[k - 1] / 2.0 > rho + 1e-9 {
                violations.push(format!("{name} k={k}"));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        2,
        "easy direction lambda_k/2 <= rho(k)",
        violations.is_empty() && elapsed < 60.0,
        &format!(
            "{checked} (graph, k) pairs over {} graphs, violations {violations:?}, {elapsed:.1}s",
            corpus.len()
        ),
    );
}

/// Criterion 3: the two-way sandwich lambda_2/2 <= rho(2) <= sqrt(2 lambda_2)
/// with the upper bound witnessed by the pipeline's two-way cut.
#[test]
fn criterion_03_two_way_sandwich() {
    let corpus = small_corpus();
    let mut violations = Vec::new();
    for (name, g) in &corpus {
        let emb = eigenbasis(g, 2, 1e-8).unwrap();
        let lambda2 = emb.eigenvalues[1];
        let rho = k_way_expansion_exact(g, 2).unwrap().value;
        let cfg = PipelineConfig::new(2);
        let (sweeps, _) = two_way_cuts(g, &cfg).unwrap();
        let witness = sweeps
            .iter()
            .map(|s| s.expansion)
            .fold(f64::NEG_INFINITY, f64::max);
        // left side, feasibility of the witness, and the sharp upper bound
        if lambda2 / 2.0 > rho + 1e-9 {
            violations.push(format!("{name}: lower"));
        }
        if rho > witness + 1e-9 {
            violations.push(format!("{name}: witness below exact"));
        }
        if witness > (2.0 * lambda2).sqrt() + 1e-9 {
            violations.push(format!(
                "{name}: witness {witness:.6} > sqrt(2 lambda2) {:.6}",
                (2.0 * lambda2).sqrt()
            ));
        }
    }
    report(
        3,
        "two-way Cheeger sandwich",
        violations.is_empty(),
        &format!("{} graphs, violations {violations:?}", corpus.len()),
    );
}

/// Criterion 4: spectral embeddings are (Delta, 1/(k (1 - Delta^2)))-
/// spreading for 50 random graphs (n <= 512, k <= 8), Delta in
/// {0.3, 0.5, 0.7}, zero violations.
#[test]
fn criterion_04_spreading() {
    let corpus = spreading_corpus();
    let mut checked_balls = 0usize;
    let mut violations = 0usize;
    for (i, g) in corpus.iter().enumerate() {
        let k = 2 + (i % 7); // 2..=8
        let emb = eigenbasis(g, k.min(g.n()), 1e-8).unwrap();
        let mv = MetricView::new(g, &emb.f);
        for delta in [0.3, 0.5, 0.7] {
            let eta = 1.0 / (k as f64 * (1.0 - delta * delta));
            let cert = spreading_check(g, &mv, delta, eta, 512, i as u64);
            checked_balls += cert.checked_sets;
            violations += cert.violations.len();
        }
    }
    report(
        4,
        "spreading lemma",
        violations == 0,
        &format!(
            "{} graphs x 3 radii, {checked_balls} balls probed, {violations} violations",
            corpus.len()
        ),
    );
}

/// Criterion 5: localization properties (i)-(iii) on 500 randomized
/// instances within 1e-9, and the averaging bound on every disjoint-bumps
/// run.
#[test]
fn criterion_05_localization() {
    let mut rng = seeded_rng(0xacce05);
    let mut edge_checks = 0usize;
    let mut violations = 0usize;
    for round in 0..500u64 {
        let n = 6 + (round % 40) as usize;
        let g = generators::gnp(n, 0.2, 7_000 + round).unwrap();
        let dim = 1 + (round % 4) as usize;
        let mut data = vec![0.0; n * dim];
        fill_standard_normal(&mut rng, &mut data);
        if round % 4 == 0 {
            for j in 0..dim {
                data[j] = 0.0; // a zero-vector vertex now and then
            }
        }
        let f = VertexMap::from_data(n, dim, data);
        let eps = 0.1 + 1.4 * uniform_unit(&mut rng);
        let set_size = 1 + (round % 3) as usize;
        let set: Vec<usize> = (0..set_size).map(|i| (i * 7 + round as usize) % n).collect();
        let bump = bump_localize(&g, &f, &set, eps).unwrap();

        // (i) psi agrees with F on S
        for &v in &bump.source_set {
            if bump.psi.row(v) != f.row(v) {
                violations += 1;
            }
        }
        // (ii) support within the open eps-neighborhood
        let mv = MetricView::new(&g, &f);
        let dist = mv.multi_source_distance(&set);
        for &v in &bump.support {
            if !(dist[v] < eps) {
                violations += 1;
            }
        }
        // (iii) per-edge stretch
        for e in g.edges() {
            let (u, v) = (e.u as usize, e.v as usize);
            let lhs = bump.psi.row_dist_sq(u, v).sqrt();
            let rhs = (1.0 + 2.0 / eps) * f.row_dist_sq(u, v).sqrt();
            edge_checks += 1;
            if lhs > rhs + 1e-9 {
                violations += 1;
            }
        }
    }

    // averaging bound per disjoint-bumps run on structured instances
    let mut bump_runs = 0usize;
    for clusters in [2usize, 3, 4] {
        let g = generators::clique_union(clusters, 6, 0.002).unwrap();
        let emb = eigenbasis(&g, clusters, 1e-9).unwrap();
        let groups: Vec<Vec<usize>> = (0..clusters)
            .map(|c| (c * 6..(c + 1) * 6).collect())
            .collect();
        let mv = MetricView::new(&g, &emb.f);
        let mut beta = f64::INFINITY;
        for i in 0..clusters {
            let dist = mv.multi_source_distance(&groups[i]);
            for (j, other) in groups.iter().enumerate() {
                if i != j {
                    let d = other.iter().map(|&v| dist[v]).fold(f64::INFINITY, f64::min);
                    beta = beta.min(d);
                }
            }
        }
        let out =
            disjoint_bumps(&g, &emb.f, &groups, beta, 1.0 / (2.0 * clusters as f64)).unwrap();
        for func in &out.functions {
            bump_runs += 1;
            if func.rayleigh > func.averaging_bound + 1e-9 {
                violations += 1;
            }
        }
    }
    report(
        5,
        "localization properties and averaging bound",
        violations == 0,
        &format!("500 instances, {edge_checks} edges, {bump_runs} bump quotients, {violations} violations"),
    );
}

/// Criterion 6: noisy hypercube at dims {6, 8, 10} with eps = ln 2 / ln dim:
/// lambda_dim <= 2 eps, and every small-enough subcube, Hamming ball,
/// pipeline output, and 1e5 random sets have phi >= 1/2; exhaustive over all
/// subsets at dim 4. Under 5 minutes at dim 10.
#[test]
fn criterion_06_noisy_hypercube() {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;

    for dim in [6usize, 8, 10] {
        let eps = hypercube_eps(dim, 1.0);
        let g = noisy_hypercube(dim, eps).unwrap();
        let n = g.n();
        let cap = n / dim; // |S| <= n/k with C = 1

        let emb = eigenbasis(&g, dim, 1e-8).unwrap();
        let lambda_k = emb.eigenvalues[dim - 1];
        if lambda_k > 2.0 * eps + 1e-9 {
            ok = false;
            details.push(format!("dim {dim}: lambda_k {lambda_k:.4} > 2eps"));
        }

        let mut worst = f64::INFINITY;
        let check = |set: &[usize], worst: &mut f64| {
            if set.is_empty() || set.len() > cap {
                return true;
            }
            let phi = noisy_hypercube_expansion(dim, eps, set);
            *worst = worst.min(phi);
            phi >= 0.5 - 1e-9
        };

        // all subcubes of size <= n/dim: fix a coordinate subset and values
        let mut subcube_fails = 0usize;
        for mask in 1u32..(1 << dim) {
            let fixed = mask.count_ones() as usize;
            if (1usize << (dim - fixed)) > cap {
                continue;
            }
            let free_bits: Vec<usize> =
                (0..dim).filter(|b| mask & (1 << b) == 0).collect();
            let mut values = mask;
            loop {
                // enumerate the subcube {x : x & mask == values & mask}
                let base = values & mask;
                let mut set = Vec::with_capacity(1 << free_bits.len());
                for assign in 0..(1u32 << free_bits.len()) {
                    let mut x = base;
                    for (i, b) in free_bits.iter().enumerate() {
                        if assign & (1 << i) != 0 {
                            x |= 1 << b;
                        }
                    }
                    set.push(x as usize);
                }
                if !check(&set, &mut worst) {
                    subcube_fails += 1;
                }
                // next value assignment restricted to the mask
                values = (values.wrapping_sub(mask)) & mask;
                if values == mask {
                    break;
                }
            }
        }

        // Hamming balls of size <= n/dim around every center
        let mut ball_fails = 0usize;
        for center in 0..n {
            for radius in 0..=dim {
                let set: Vec<usize> = (0..n)
                    .filter(|&x| (x ^ center).count_ones() as usize <= radius)
                    .collect();
                if set.len() > cap {
                    break;
                }
                if !check(&set, &mut worst) {
                    ball_fails += 1;
                }
            }
        }

        // pipeline outputs of size <= n/dim
        let cfg = PipelineConfig::new(dim).with_seed(606).with_trials(4);
        let cuts = k_sparse_cuts(&g, dim, 1.0 / (2.0 * dim as f64), &cfg).unwrap();
        let mut pipeline_fails = 0usize;
        for set in &cuts.sets {
            if !check(set, &mut worst) {
                pipeline_fails += 1;
            }
        }

        // 1e5 random sets of size <= n/dim
        let mut rng = seeded_rng(0xacce06 + dim as u64);
        let mut random_fails = 0usize;
        let mut scratch: Vec<usize> = (0..n).collect();
        for _ in 0..100_000 {
            let size = 1 + (uniform_unit(&mut rng) * cap as f64) as usize;
            for i in 0..size.min(cap) {
                let j = i + (uniform_unit(&mut rng) * (n - i) as f64) as usize;
                scratch.swap(i, j.min(n - 1));
            }
            if !check(&scratch[..size.min(cap)], &mut worst) {
                random_fails += 1;
            }
        }

        if subcube_fails + ball_fails + pipeline_fails + random_fails > 0 {
            ok = false;
        }
        details.push(format!(
            "dim {dim}: lambda_k {lambda_k:.4} <= {:.4}, min phi {worst:.4}",
            2.0 * eps
        ));
    }

    // exhaustive over all subsets of size <= n/k at dim 4
    {
        let dim = 4;
        let eps = hypercube_eps(dim, 1.0);
        let n = 1 << dim;
        let cap = n / dim;
        let mut worst = f64::INFINITY;
        let mut fails = 0usize;
        for mask in 1u32..(1 << n) {
            if (mask.count_ones() as usize) > cap {
                continue;
            }
            let set: Vec<usize> = (0..n).filter(|&x| mask & (1 << x) != 0).collect();
            let phi = noisy_hypercube_expansion(dim, eps, &set);
            worst = worst.min(phi);
            if phi < 0.5 - 1e-9 {
                fails += 1;
            }
        }
        if fails > 0 {
            ok = false;
        }
        details.push(format!("dim 4 exhaustive: min phi {worst:.4}"));
    }

    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 300.0 {
        ok = false;
    }
    report(
        6,
        "noisy hypercube bounds",
        ok,
        &format!("{}; {elapsed:.0}s", details.join("; ")),
    );
}

/// Criterion 7: accepted dimension-reduction attempts satisfy
/// R(F') <= 8 R(F), and the norm-concentration failure rate stays within
/// its bound plus 3 binomial standard errors over 1e5 samples.
#[test]
fn criterion_07_dimension_reduction() {
    let mut ok = true;
    let mut details = Vec::new();

    // the formulaic path caps at the input dimension for practical k
    let g = generators::clique_union(4, 8, 0.05).unwrap();
    let emb = eigenbasis(&g, 6, 1e-9).unwrap();
    let (_, rep) = reduce_dimension(&g, &emb.f, 0.4, 8, 1).unwrap();
    if !(rep.rayleigh_ratio <= 8.0) {
        ok = false;
    }
    details.push(format!(
        "formulaic: h {} (capped {}), ratio {:.3}",
        rep.h, rep.capped, rep.rayleigh_ratio
    ));

    // a genuine projection to an explicit target dimension
    let g2 = generators::planted_partition(4, 16, 0.6, 0.02, 5).unwrap().0;
    let emb2 = eigenbasis(&g2, 12, 1e-9).unwrap();
    let mut accepted = 0usize;
    for seed in 0..10u64 {
        if let Ok((_, rep)) = reduce_dimension_to(&g2, &emb2.f, 5, 0.4, 16, seed) {
            accepted += 1;
            if !(rep.rayleigh_ratio <= 8.0)
                || (rep.mass_ratio - 1.0).abs() > 2.0 * 0.4 / 16.0 + 1e-12
            {
                ok = false;
            }
        }
    }
    if accepted == 0 {
        ok = false;
    }
    details.push(format!("explicit h=5: {accepted}/10 seeds accepted"));

    // norm concentration: P[|Gamma x|^2 outside (1 +- delta)] <= 2 e^{-delta^2 h / 12}
    let h = 144;
    let delta = 0.5;
    let x: Vec<f64> = {
        let mut x = vec![0.0; 9];
        let mut rng = seeded_rng(0xacce07);
        fill_standard_normal(&mut rng, &mut x);
        let norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter().map(|v| v / norm).collect()
    };
    let trials = 100_000u64;
    let mut outside = 0usize;
    for seed in 0..trials {
        let gp = GaussianProjection::sample(9, h, mix_seed(0x11, seed));
        let y = gp.apply(&x).unwrap();
        let norm_sq: f64 = y.iter().map(|v| v * v).sum();
        if !((1.0 - delta)..=(1.0 + delta)).contains(&norm_sq) {
            outside += 1;
        }
    }
    let bound = 2.0 * (-delta * delta * h as f64 / 12.0).exp();
    let freq = outside as f64 / trials as f64;
    let se = (bound * (1.0 - bound) / trials as f64).sqrt();
    if freq > bound + 3.0 * se {
        ok = false;
    }
    details.push(format!(
        "concentration: freq {freq:.2e} <= bound {bound:.2e} + 3se"
    ));

    report(7, "dimension reduction", ok, &details.join("; "));
}

/// Criterion 8: every benchmark config returns valid outputs (cuts: enough
/// disjoint nonempty sets; partition: a true partition), reruns are
/// byte-identical, and the planted 4x32 benchmark recovers >= 90% Jaccard
/// per set across 16 seeds.
#[test]
fn criterion_08_end_to_end_validity() {
    let mut ok = true;
    let mut details = Vec::new();

    for bench in &benchmarks() {
        let (g, _) = bench.family.build().unwrap();
        let k = bench.k;
        let cfg = PipelineConfig::new(k).with_seed(42).with_trials(8);
        let delta = cfg.effective_delta();
        let r_needed = ((1.0 - delta) * k as f64).ceil() as usize;

        let cuts = match k_sparse_cuts(&g, k, delta, &cfg) {
            Ok(c) => c,
            Err(e) => {
                ok = false;
                details.push(format!("{}: cuts failed ({e})", bench.name));
                continue;
            }
        };
        if cuts.sets.len() < r_needed {
            ok = false;
            details.push(format!(
                "{}: {} sets < {r_needed}",
                bench.name,
                cuts.sets.len()
            ));
        }
        let mut seen = vec![false; g.n()];
        for set in &cuts.sets {
            if set.is_empty() {
                ok = false;
                details.push(format!("{}: empty set", bench.name));
            }
            for &v in set {
                if seen[v] {
                    ok = false;
                    details.push(format!("{}: overlap at {v}", bench.name));
                }
                seen[v] = true;
            }
        }

        // determinism: identical config, byte-identical serialized output
        let again = k_sparse_cuts(&g, k, delta, &cfg).unwrap();
        if serde_json::to_string(&cuts).unwrap() != serde_json::to_string(&again).unwrap() {
            ok = false;
            details.push(format!("{}: cuts not deterministic", bench.name));
        }

        let part = match k_way_partition(&g, k, &cfg) {
            Ok(p) => p,
            Err(e) => {
                ok = false;
                details.push(format!("{}: partition failed ({e})", bench.name));
                continue;
            }
        };
        let mut count = vec![0usize; g.n()];
        for set in &part.sets {
            if set.is_empty() {
                ok = false;
                details.push(format!("{}: empty partition piece", bench.name));
            }
            for &v in set {
                count[v] += 1;
            }
        }
        if count.iter().any(|&c| c != 1) {
            ok = false;
            details.push(format!("{}: not a partition", bench.name));
        }
    }

    // planted-partition recovery across 16 seeds
    let mut min_jaccard = f64::INFINITY;
    for seed in 0..16u64 {
        let (g, truth) = generators::planted_partition(4, 32, 0.5, 0.01, seed).unwrap();
        let cfg = PipelineConfig::new(4).with_seed(seed).with_trials(16);
        let part = k_way_partition(&g, 4, &cfg).unwrap();
        let jac = best_permutation_jaccard(&part.sets, &truth);
        min_jaccard = min_jaccard.min(jac);
        if jac < 0.9 {
            ok = false;
            details.push(format!("recovery seed {seed}: jaccard {jac:.3}"));
        }
    }
    details.push(format!("min per-set jaccard {min_jaccard:.3}"));

    report(
        8,
        "end-to-end validity and recovery",
        ok,
        &details.join("; "),
    );
}

/// Criterion 9: the empirical constants of both pipelines stay within 25%
/// of their committed baselines.
#[test]
fn criterion_09_empirical_constant_regression() {
    let baselines: serde_json::Value =
        serde_json::from_str(include_str!("data/regression_baselines.json")).unwrap();
    let mut ok = true;
    let mut details = Vec::new();
    for bench in &benchmarks() {
        let fresh = common::benchmark_ratios(bench);
        let base = &baselines[bench.name];
        for (key, fresh_value) in [
            ("cuts_ratio", fresh.cuts_ratio),
            ("partition_ratio", fresh.partition_ratio),
        ] {
            let Some(fresh_value) = fresh_value else {
                continue;
            };
            let Some(base_value) = base[key].as_f64() else {
                ok = false;
                details.push(format!("{}: missing baseline {key}", bench.name));
                continue;
            };
            if fresh_value > base_value * 1.25 {
                ok = false;
                details.push(format!(
                    "{} {key}: {fresh_value:.4} > 1.25 x {base_value:.4}",
                    bench.name
                ));
            }
        }
    }
    if details.is_empty() {
        details.push("all ratios within 25% of committed baselines".into());
    }
    report(9, "empirical constant regression", ok, &details.join("; "));
}

/// Criterion 10: on the n <= 10 corpus the best k = 2 pipeline output over
/// 64 trials lands within a factor 2 of the exact rho(2).
#[test]
fn criterion_10_exact_oracle_agreement() {
    let corpus = small_corpus();
    let mut ok = true;
    let mut worst_ratio = 0.0f64;
    let mut details = Vec::new();
    for (name, g) in &corpus {
        let exact = k_way_expansion_exact(g, 2).unwrap().value;
        let cfg = PipelineConfig::new(2).with_seed(10).with_trials(64);
        let (sweeps, _) = two_way_cuts(g, &cfg).unwrap();
        let mut best = sweeps
            .iter()
            .map(|s| s.expansion)
            .fold(f64::NEG_INFINITY, f64::max);
        if g.n() >= 4 {
            if let Ok(cuts) = k_sparse_cuts(g, 2, 0.25, &cfg) {
                if cuts.sets.len() >= 2 {
                    best = best.min(cuts.max_expansion);
                }
            }
        }
        // feasibility: a witness can never beat the exact optimum
        if best < exact - 1e-9 {
            ok = false;
            details.push(format!("{name}: witness {best:.5} below exact {exact:.5}"));
        }
        if exact == 0.0 {
            if best > 1e-9 {
                ok = false;
                details.push(format!("{name}: disconnected but best {best:.3e}"));
            }
            continue;
        }
        let ratio = best / exact;
        worst_ratio = worst_ratio.max(ratio);
        if ratio > 2.0 {
            ok = false;
            details.push(format!("{name}: ratio {ratio:.3}"));
        }
    }
    details.push(format!("worst pipeline/exact ratio {worst_ratio:.3}"));
    report(
        10,
        "factor-2 agreement with the exact oracle at k = 2",
        ok,
        &details.join("; "),
    );
}

/// Prints fresh benchmark ratios in the baselines-file format. Run with
/// `cargo test --test acceptance print_benchmark_ratios -- --ignored --nocapture`
/// and paste the output into tests/data/regression_baselines.json.
#[test]
#[ignore]
fn print_benchmark_ratios() {
    println!("{{");
    let benches = benchmarks();
    for (i, bench) in benches.iter().enumerate() {
        let ratios = common::benchmark_ratios(bench);
        let fmt = |x: Option<f64>| match x {
            Some(v) => format!("{v:.6}"),
            None => "null".into(),
        };
        let comma = if i + 1 < benches.len() { "," } else { "" };
        println!(
            "  \"{}\": {{ \"cuts_ratio\": {}, \"partition_ratio\": {} }}{comma}",
            bench.name,
            fmt(ratios.cuts_ratio),
            fmt(ratios.partition_ratio)
        );
    }
    println!("}}");
}
