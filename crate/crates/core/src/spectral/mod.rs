//! Normalized Laplacian, bottom-k eigenbasis, and Rayleigh quotients.
//!
//! Eigenfunctions are returned orthonormal in the weighted inner product
//! `<f, g> = sum_v w(v) f(v) g(v)`, so the stacked embedding
//! `F(v) = (f_1(v), ..., f_k(v))` carries total mass `sum_v w(v) |F(v)|^2 = k`
//! and is isotropic: `sum_v w(v) <x, F(v)>^2 = 1` for every unit `x`.

mod lanczos;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::graph::WeightedGraph;
use crate::vertex_map::VertexMap;

#[derive(Debug, Error, Clone)]
pub enum SpectralError {
    #[error("k = {k} must satisfy 1 <= k <= n = {n}")]
    BadK { k: usize, n: usize },
    #[error("function is identically zero on the weighted vertex set")]
    ZeroFunction,
    #[error(
        "eigensolver failed to converge within the iteration budget; worst residual {worst:e} over {achieved} locked pairs"
    )]
    ConvergenceFailure { worst: f64, achieved: usize },
}

/// Symmetric normalized Laplacian `I - D^{-1/2} A D^{-1/2}`, available as a
/// matrix-vector product and (for small n) as a dense matrix.
pub struct Laplacian<'g> {
    graph: &'g WeightedGraph,
    inv_sqrt_degree: Vec<f64>,
}

pub fn normalized_laplacian(graph: &WeightedGraph) -> Laplacian<'_> {
    let inv_sqrt_degree = graph.degrees().iter().map(|&d| 1.0 / d.sqrt()).collect();
    Laplacian {
        graph,
        inv_sqrt_degree,
    }
}

impl<'g> Laplacian<'g> {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// `out = L x`.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let g = self.graph;
        for v in 0..g.n() {
            let mut acc = 0.0;
            for &(u, w) in g.neighbors(v) {
                acc += w * self.inv_sqrt_degree[u as usize] * x[u as usize];
            }
            out[v] = x[v] - self.inv_sqrt_degree[v] * acc;
        }
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.graph.n();
        let mut m = DMatrix::<f64>::identity(n, n);
        for e in self.graph.edges() {
            let (u, v) = (e.u as usize, e.v as usize);
            let off = -e.w * self.inv_sqrt_degree[u] * self.inv_sqrt_degree[v];
            m[(u, v)] = off;
            m[(v, u)] = off;
        }
        m
    }

    /// Residual `|L g - lambda g|_2` for one candidate pair.
    pub fn residual(&self, g: &[f64], lambda: f64) -> f64 {
        let mut lg = vec![0.0; g.len()];
        self.apply(g, &mut lg);
        lg.iter()
            .zip(g)
            .map(|(y, x)| (y - lambda * x) * (y - lambda * x))
            .sum::<f64>()
            .sqrt()
    }
}

/// The bottom-k spectral embedding.
#[derive(Debug, Clone)]
pub struct SpectralEmbedding {
    pub k: usize,
    /// `lambda_1 <= ... <= lambda_k`, in `[0, 2]` up to solver tolerance.
    pub eigenvalues: Vec<f64>,
    /// `F(v) = (f_1(v), ..., f_k(v))`, orthonormal in `l2(V, w)`.
    pub f: VertexMap,
    /// Backward errors `|L g_i - lambda_i g_i|` of the returned pairs.
    pub residuals: Vec<f64>,
}

impl SpectralEmbedding {
    /// Column i as a scalar function.
    pub fn eigenfunction(&self, i: usize) -> VertexMap {
        self.f.coordinate(i)
    }

    /// `sum_v w(v) |F(v)|^2`; equals k for an exact basis.
    pub fn mass(&self, g: &WeightedGraph) -> f64 {
        (0..g.n())
            .map(|v| g.degree(v) * self.f.row(v).iter().map(|x| x * x).sum::<f64>())
            .sum()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EigOptions {
    /// Backward-error target per eigenpair.
    pub tol: f64,
    /// Seed for the iterative path's start vectors.
    pub seed: u64,
    /// Problem sizes up to this go through the dense path.
    pub dense_cutoff: usize,
    /// Matvec budget for the iterative path.
    pub max_matvecs: usize,
}

impl Default for EigOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            seed: 0x5eed_0001,
            dense_cutoff: 512,
            max_matvecs: 40_000,
        }
    }
}

/// Bottom-k eigenbasis with default options.
pub fn eigenbasis(
    g: &WeightedGraph,
    k: usize,
    tol: f64,
) -> Result<SpectralEmbedding, SpectralError> {
    eigenbasis_with(
        g,
        k,
        EigOptions {
            tol,
            ..EigOptions::default()
        },
    )
}

/// Bottom-k eigenbasis: dense symmetric eigendecomposition for small n,
/// Lanczos with full reorthogonalization and deflated restarts above the
/// cutoff. Deterministic for a fixed seed.
pub fn eigenbasis_with(
    g: &WeightedGraph,
    k: usize,
    opts: EigOptions,
) -> Result<SpectralEmbedding, SpectralError> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(SpectralError::BadK { k, n });
    }
    let lap = normalized_laplacian(g);

    let (mut eigenvalues, vectors) = if n <= opts.dense_cutoff {
        dense_bottom_k(&lap, k)
    } else {
        lanczos::bottom_k(&lap, k, &opts)?
    };

    let mut residuals = Vec::with_capacity(k);
    for (i, lambda) in eigenvalues.iter().enumerate() {
        residuals.push(lap.residual(&vectors[i], *lambda));
    }
    if let Some((i, &r)) = residuals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
    {
        if r > opts.tol * vector_norm(&vectors[i]).max(1e-300) {
            return Err(SpectralError::ConvergenceFailure {
                worst: r,
                achieved: k,
            });
        }
    }

    // Eigenvalues below the noise floor are exact zeros of the Laplacian.
    let lambda_max = eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let floor = 1e-10 * lambda_max.max(1.0);
    for lambda in &mut eigenvalues {
        if lambda.abs() <= floor {
            *lambda = 0.0;
        }
    }

    // f_i = D^{-1/2} g_i, then modified Gram-Schmidt in l2(V, w) to clean up
    // the weighted orthonormality, then a deterministic sign.
    let mut funcs: Vec<Vec<f64>> = vectors
        .iter()
        .map(|gv| {
            (0..n)
                .map(|v| gv[v] * lap.inv_sqrt_degree[v])
                .collect::<Vec<f64>>()
        })
        .collect();
    weighted_mgs(g, &mut funcs);
    for f in &mut funcs {
        fix_sign(f);
    }

    let mut data = vec![0.0; n * k];
    for (i, f) in funcs.iter().enumerate() {
        for v in 0..n {
            data[v * k + i] = f[v];
        }
    }

    Ok(SpectralEmbedding {
        k,
        eigenvalues,
        f: VertexMap::from_data(n, k, data),
        residuals,
    })
}

fn dense_bottom_k(lap: &Laplacian<'_>, k: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let m = lap.dense();
    let eig = m.symmetric_eigen();
    let n = eig.eigenvalues.len();
    // Polish each eigenvalue with the Rayleigh quotient of its vector: the
    // vector error enters the quotient squared, so the value lands at
    // machine precision even when the factorization stops around 1e-9.
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|i| {
            let v: Vec<f64> = eig.eigenvectors.column(i).iter().cloned().collect();
            let mut lv = vec![0.0; n];
            lap.apply(&v, &mut lv);
            let num: f64 = lv.iter().zip(&v).map(|(a, b)| a * b).sum();
            let den: f64 = v.iter().map(|a| a * a).sum();
            (num / den, v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.truncate(k);
    let eigenvalues = pairs.iter().map(|p| p.0).collect();
    let vectors = pairs.into_iter().map(|p| p.1).collect();
    (eigenvalues, vectors)
}

fn vector_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn weighted_mgs(g: &WeightedGraph, funcs: &mut [Vec<f64>]) {
    let n = g.n();
    for i in 0..funcs.len() {
        for j in 0..i {
            let dot: f64 = (0..n)
                .map(|v| g.degree(v) * funcs[i][v] * funcs[j][v])
                .sum();
            for v in 0..n {
                funcs[i][v] -= dot * funcs[j][v];
            }
        }
        let norm: f64 = (0..n)
            .map(|v| g.degree(v) * funcs[i][v] * funcs[i][v])
            .sum::<f64>()
            .sqrt();
        if norm > 0.0 {
            for v in 0..n {
                funcs[i][v] /= norm;
            }
        }
    }
}

fn fix_sign(f: &mut [f64]) {
    let max_abs = f.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if max_abs == 0.0 {
        return;
    }
    let first = f.iter().find(|x| x.abs() > 1e-12 * max_abs);
    if let Some(&x) = first {
        if x < 0.0 {
            for v in f {
                *v = -*v;
            }
        }
    }
}

/// Rayleigh quotient of an arbitrary vector-valued map:
/// edge energy over weighted mass.
pub fn rayleigh(g: &WeightedGraph, psi: &VertexMap) -> Result<f64, SpectralError> {
    let (num, den) = rayleigh_parts(g, psi);
    if den <= 0.0 {
        return Err(SpectralError::ZeroFunction);
    }
    Ok(num / den)
}

/// (edge energy, weighted mass) of a map; the Rayleigh quotient's two halves.
pub fn rayleigh_parts(g: &WeightedGraph, psi: &VertexMap) -> (f64, f64) {
    let num: f64 = g
        .edges()
        .iter()
        .map(|e| e.w * psi.row_dist_sq(e.u as usize, e.v as usize))
        .sum();
    let den: f64 = (0..g.n())
        .map(|v| g.degree(v) * psi.row(v).iter().map(|x| x * x).sum::<f64>())
        .sum();
    (num, den)
}

/// Picks the coordinate whose scalar Rayleigh quotient is smallest.
///
/// By the mediant inequality the winner's quotient is at most the vector
/// quotient of `psi`. Ties break toward the smallest index.
pub fn best_coordinate(
    g: &WeightedGraph,
    psi: &VertexMap,
) -> Result<(usize, VertexMap), SpectralError> {
    let dim = psi.dim();
    let mut num = vec![0.0f64; dim];
    let mut den = vec![0.0f64; dim];
    for e in g.edges() {
        let (a, b) = (psi.row(e.u as usize), psi.row(e.v as usize));
        for j in 0..dim {
            num[j] += e.w * (a[j] - b[j]) * (a[j] - b[j]);
        }
    }
    for v in 0..g.n() {
        let row = psi.row(v);
        for j in 0..dim {
            den[j] += g.degree(v) * row[j] * row[j];
        }
    }
    let best = (0..dim)
        .filter(|&j| den[j] > 0.0)
        .min_by(|&a, &b| (num[a] / den[a]).total_cmp(&(num[b] / den[b])))
        .ok_or(SpectralError::ZeroFunction)?;
    Ok((best, psi.coordinate(best)))
}
