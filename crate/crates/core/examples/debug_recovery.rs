use specpart::generators;
use specpart::geometry::{spreading_check, MetricView};
use specpart::localize::disjoint_bumps;
use specpart::partition::{group_cells_lemma, metric_ball_carving, padded_interiors};
use specpart::random::mix_seed;
use specpart::rounding::{cheeger_sweep, complete_to_partition};
use specpart::spectral::eigenbasis;
use specpart::vertex_map::VertexMap;

fn jac(sets: &[Vec<usize>]) -> f64 {
    let mut min_j = f64::INFINITY;
    for s in sets {
        let mut bestj = 0.0f64;
        for c in 0..4 {
            let truth: std::collections::HashSet<usize> = (c * 32..(c + 1) * 32).collect();
            let sset: std::collections::HashSet<usize> = s.iter().copied().collect();
            let inter = truth.intersection(&sset).count() as f64;
            let uni = truth.union(&sset).count() as f64;
            bestj = bestj.max(inter / uni);
        }
        min_j = min_j.min(bestj);
    }
    min_j
}

fn main() {
    let k = 4usize;
    let delta = 1.0 / 8.0;
    let mut worst = f64::INFINITY;
    for seed in 0..16u64 {
        let (g, _) = generators::planted_partition(4, 32, 0.5, 0.01, seed).unwrap();
        let emb = eigenbasis(&g, k, 1e-8).unwrap();
        let mv = MetricView::new(&g, &emb.f);
        let eta = (1.0 + delta / 48.0) / k as f64;
        let mut part_delta = (delta / (48.0 + delta)).sqrt();
        for cand in [1.0f64, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1] {
            if spreading_check(&g, &mv, cand, eta, 512, 0).valid() {
                part_delta = cand.max(part_delta);
                break;
            }
        }
        let alpha = (8.0 * (g.n() as f64).ln() / (delta / 24.0)).max(2.0);
        let rho = part_delta / alpha;
        let beta = 2.0 * rho;
        let total: f64 = (0..g.n()).map(|v| g.degree(v) * mv.norm(v) * mv.norm(v)).sum();
        let r_groups = ((1.0 - delta / 2.0) * k as f64).ceil() as usize;
        let interior_floor = (1.0 - (k - r_groups + 1) as f64 / (4.0 * r_groups as f64)) * total;

        let mut best: Option<(f64, f64)> = None; // (score, completed_jac)
        let mut fails = 0;
        for trial in 0..16u64 {
            let p = metric_ball_carving(&mv, part_delta, mix_seed(seed, trial));
            let interiors = padded_interiors(&p, &mv, rho);
            let im: f64 = interiors.iter().map(|c| c.mass).sum();
            if im < interior_floor { fails += 1; continue; }
            let Ok(grouped) = group_cells_lemma(&interiors, total, k, r_groups) else { fails += 1; continue; };
            let groups: Vec<Vec<usize>> = grouped.groups.iter().map(|c| c.vertices.clone()).collect();
            let Ok(bumps) = disjoint_bumps(&g, &emb.f, &groups, beta, 1.0 / (2.0 * k as f64)) else { fails += 1; continue; };
            if bumps.functions.len() < k { fails += 1; continue; }
            let score = bumps.functions[..k].iter().map(|f| f.rayleigh).fold(f64::NEG_INFINITY, f64::max);
            let sets: Vec<Vec<usize>> = bumps.functions[..k].iter().map(|f| {
                cheeger_sweep(&g, &VertexMap::from_scalar(f.values.data().to_vec())).unwrap().set
            }).collect();
            let done = complete_to_partition(&g, &sets).unwrap();
            if best.map_or(true, |(s, _)| score < s) {
                best = Some((score, jac(&done.sets)));
            }
        }
        let (score, j) = best.unwrap();
        worst = worst.min(j);
        println!("seed {seed}: delta {part_delta:.2} score {score:.4} fails {fails} completed_jac {j:.3}");
    }
    println!("worst: {worst:.3}");
}
