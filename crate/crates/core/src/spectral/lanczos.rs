//! Lanczos iteration with full reorthogonalization and deflated restarts.
//!
//! A single Krylov sweep cannot expose an eigenvalue's multiplicity, so the
//! driver locks converged Ritz pairs and restarts from a fresh seeded vector
//! kept orthogonal to everything locked. Repeated eigenvalues (disconnected
//! graphs, symmetric generators) surface one copy per sweep.

use nalgebra::DMatrix;

use super::{EigOptions, Laplacian, SpectralError};
use crate::random::{fill_standard_normal, mix_seed, seeded_rng};

pub(super) fn bottom_k(
    lap: &Laplacian<'_>,
    k: usize,
    opts: &EigOptions,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), SpectralError> {
    let n = lap.n();
    let mut locked_vals: Vec<f64> = Vec::new();
    let mut locked_vecs: Vec<Vec<f64>> = Vec::new();
    let mut matvecs = 0usize;
    let mut sweep = 0u64;
    let mut sweep_len = (2 * k + 48).min(n);

    while locked_vals.len() < k {
        let remaining = k - locked_vals.len();
        let m = sweep_len.min(n - locked_vecs.len());
        if m == 0 {
            break;
        }
        let (ritz_vals, ritz_vecs, used) =
            sweep_once(lap, m, &locked_vecs, mix_seed(opts.seed, sweep));
        matvecs += used;
        sweep += 1;

        // Lock converged pairs, smallest eigenvalue first.
        let mut newly = 0usize;
        for (lambda, vec) in ritz_vals.into_iter().zip(ritz_vecs) {
            if locked_vals.len() >= k {
                break;
            }
            let res = lap.residual(&vec, lambda);
            if res <= opts.tol {
                let mut vec = vec;
                orthogonalize_against(&mut vec, &locked_vecs);
                let norm = norm2(&vec);
                // A duplicate of an already-locked vector projects to noise.
                if norm < 1e-8 {
                    continue;
                }
                for x in &mut vec {
                    *x /= norm;
                }
                let res = lap.residual(&vec, lambda);
                if res > opts.tol {
                    continue;
                }
                locked_vals.push(lambda);
                locked_vecs.push(vec);
                newly += 1;
            } else {
                // Ritz values are sorted; later ones are no better.
                break;
            }
        }

        if newly == 0 {
            sweep_len = (sweep_len * 2).min(n);
        } else if remaining > 0 {
            sweep_len = (2 * (k - locked_vals.len()) + 48).max(sweep_len / 2).min(n);
        }

        if matvecs > opts.max_matvecs {
            let worst = lap.residual(
                locked_vecs.last().map(|v| v.as_slice()).unwrap_or(&[]),
                *locked_vals.last().unwrap_or(&0.0),
            );
            return Err(SpectralError::ConvergenceFailure {
                worst,
                achieved: locked_vals.len(),
            });
        }
    }

    // Sweeps can lock eigenvalues out of global order; sort the collection.
    let mut order: Vec<usize> = (0..locked_vals.len()).collect();
    order.sort_by(|&a, &b| locked_vals[a].total_cmp(&locked_vals[b]));
    let vals = order.iter().map(|&i| locked_vals[i]).collect();
    let vecs = order.iter().map(|&i| locked_vecs[i].clone()).collect();
    Ok((vals, vecs))
}

/// One Lanczos sweep of length `m`, deflated against `locked`.
/// Returns Ritz pairs sorted ascending and the matvec count.
fn sweep_once(
    lap: &Laplacian<'_>,
    m: usize,
    locked: &[Vec<f64>],
    seed: u64,
) -> (Vec<f64>, Vec<Vec<f64>>, usize) {
    let n = lap.n();
    let mut rng = seeded_rng(seed);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut alpha = Vec::with_capacity(m);
    let mut beta = Vec::with_capacity(m);

    let mut v = vec![0.0; n];
    fill_standard_normal(&mut rng, &mut v);
    orthogonalize_against(&mut v, locked);
    normalize(&mut v);
    basis.push(v);

    let mut matvecs = 0usize;
    for j in 0..m {
        let mut w = vec![0.0; n];
        lap.apply(&basis[j], &mut w);
        matvecs += 1;
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        for (wi, vi) in w.iter_mut().zip(&basis[j]) {
            *wi -= a * vi;
        }
        if j > 0 {
            let b = beta[j - 1];
            for (wi, vi) in w.iter_mut().zip(&basis[j - 1]) {
                *wi -= b * vi;
            }
        }
        // Full reorthogonalization against the sweep basis and the locked
        // space; twice is enough.
        for _ in 0..2 {
            orthogonalize_against(&mut w, locked);
            orthogonalize_against(&mut w, &basis);
        }
        if j + 1 == m {
            break;
        }
        let b = norm2(&w);
        if b < 1e-13 {
            // Invariant subspace exhausted; continue in a fresh direction.
            fill_standard_normal(&mut rng, &mut w);
            orthogonalize_against(&mut w, locked);
            orthogonalize_against(&mut w, &basis);
            let nb = norm2(&w);
            if nb < 1e-13 {
                break;
            }
            beta.push(0.0);
            for x in &mut w {
                *x /= nb;
            }
        } else {
            beta.push(b);
            for x in &mut w {
                *x /= b;
            }
        }
        basis.push(w);
    }

    let steps = alpha.len();
    let mut tri = DMatrix::<f64>::zeros(steps, steps);
    for i in 0..steps {
        tri[(i, i)] = alpha[i];
        if i + 1 < steps {
            tri[(i, i + 1)] = beta[i];
            tri[(i + 1, i)] = beta[i];
        }
    }
    let eig = tri.symmetric_eigen();
    let mut order: Vec<usize> = (0..steps).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut vals = Vec::with_capacity(steps);
    let mut vecs = Vec::with_capacity(steps);
    for &i in &order {
        vals.push(eig.eigenvalues[i]);
        let y = eig.eigenvectors.column(i);
        let mut g = vec![0.0; n];
        for (j, base) in basis.iter().enumerate() {
            let c = y[j];
            for (gi, bi) in g.iter_mut().zip(base) {
                *gi += c * bi;
            }
        }
        normalize(&mut g);
        vecs.push(g);
    }
    (vals, vecs, matvecs)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm2(a);
    if n > 0.0 {
        for x in a {
            *x /= n;
        }
    }
}

fn orthogonalize_against(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dot(v, b);
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi -= c * bi;
        }
    }
}
