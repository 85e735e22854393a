//! The versioned JSON report and structured CLI errors.

use serde::Serialize;

use specpart::generators::FamilySpec;
use specpart::graph::WeightedGraph;
use specpart::pipeline::{CutsOutput, FunctionsOutput, PartitionOutput};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ErrorKind {
    InputNotFound,
    Parse,
    InvalidGraph,
    BadConfig,
    PipelineFailure,
    Io,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self.kind {
            ErrorKind::PipelineFailure => 3,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": { "kind": self.kind, "message": self.message }
        })
        .to_string()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FunctionReport {
    pub support: Vec<usize>,
    pub rayleigh: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HypercubeCheck {
    pub lambda_k: f64,
    pub two_eps: f64,
    pub satisfied: bool,
}

/// Everything a run reports. Field order is the wire format; the wall-time
/// field is the only part that varies between identical runs.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub algorithm: String,
    pub k: usize,
    pub delta: f64,
    pub seed: u64,
    pub n: usize,
    pub edge_count: usize,
    pub source: serde_json::Value,
    pub eigenvalues: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projected_dim: Option<usize>,
    pub sets: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labeled_sets: Option<Vec<Vec<String>>>,
    pub set_expansions: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_expansion: Option<f64>,
    /// The returned sets are disjoint and nonempty, so they witness
    /// `rho_G(#sets) <= max_expansion`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_upper_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_witness: Option<String>,
    pub functions: Vec<FunctionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_rayleigh: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_over_sqrt_lambda_k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_over_sqrt_lambda_2k_log_k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rayleigh_over_lambda_k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fill_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypercube_check: Option<HypercubeCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winning_trial: Option<usize>,
    pub trial_scores: Vec<Option<f64>>,
    pub wall_time_ms: f64,
}

impl Report {
    pub fn new(
        algorithm: String,
        g: &WeightedGraph,
        k: usize,
        delta: f64,
        seed: u64,
        source: serde_json::Value,
    ) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            algorithm,
            k,
            delta,
            seed,
            n: g.n(),
            edge_count: g.edge_count(),
            source,
            eigenvalues: Vec::new(),
            projected_dim: None,
            sets: Vec::new(),
            labeled_sets: None,
            set_expansions: Vec::new(),
            max_expansion: None,
            rho_upper_bound: None,
            rho_witness: None,
            functions: Vec::new(),
            max_rayleigh: None,
            phi_over_sqrt_lambda_k: None,
            phi_over_sqrt_lambda_2k_log_k: None,
            rayleigh_over_lambda_k: None,
            fill_bound: None,
            hypercube_check: None,
            winning_trial: None,
            trial_scores: Vec::new(),
            wall_time_ms: 0.0,
        }
    }

    pub fn fill_functions(&mut self, out: &FunctionsOutput) {
        self.eigenvalues = out.eigenvalues.clone();
        self.projected_dim = out.projected.then_some(out.embedding_dim);
        self.functions = out
            .functions
            .iter()
            .map(|f| FunctionReport {
                support: f.support.clone(),
                rayleigh: f.rayleigh,
                values: f.values.clone(),
            })
            .collect();
        self.max_rayleigh = Some(out.max_rayleigh);
        self.rayleigh_over_lambda_k = out.rayleigh_ratio;
        self.winning_trial = Some(out.winning_trial);
        self.trial_scores = out.trial_scores.clone();
    }

    pub fn fill_cuts(&mut self, g: &WeightedGraph, out: &CutsOutput) {
        self.eigenvalues = out.eigenvalues.clone();
        self.projected_dim = out.projected.then_some(out.embedding_dim);
        self.sets = out.sets.clone();
        self.set_expansions = out.expansions.clone();
        self.max_expansion = Some(out.max_expansion);
        self.rho_upper_bound = Some(out.max_expansion);
        self.rho_witness = Some(format!(
            "{} disjoint nonempty sets witness rho_G({}) <= {:.6e}",
            out.sets.len(),
            out.sets.len(),
            out.max_expansion
        ));
        self.phi_over_sqrt_lambda_k = out.phi_over_sqrt_lambda_k;
        self.phi_over_sqrt_lambda_2k_log_k = out.phi_over_sqrt_lambda_m_log_k;
        self.winning_trial = Some(out.winning_trial);
        self.trial_scores = out.trial_scores.clone();
        let _ = g;
    }

    pub fn fill_partition(&mut self, g: &WeightedGraph, out: &PartitionOutput) {
        self.eigenvalues = out.eigenvalues.clone();
        self.sets = out.sets.clone();
        self.set_expansions = out.expansions.clone();
        self.max_expansion = Some(out.max_expansion);
        self.rho_upper_bound = Some(out.max_expansion);
        self.rho_witness = Some(format!(
            "partition into {} nonempty sets witnesses rho_G({}) <= {:.6e}",
            out.sets.len(),
            out.sets.len(),
            out.max_expansion
        ));
        self.phi_over_sqrt_lambda_k = out.phi_over_sqrt_lambda_k;
        self.fill_bound = Some(out.fill_bound);
        let _ = g;
    }

    pub fn check_hypercube(&mut self, eps: f64) {
        if self.eigenvalues.len() >= self.k {
            let lambda_k = self.eigenvalues[self.k - 1];
            self.hypercube_check = Some(HypercubeCheck {
                lambda_k,
                two_eps: 2.0 * eps,
                satisfied: lambda_k <= 2.0 * eps + 1e-9,
            });
        }
    }

    pub fn apply_labels(&mut self, labels: &[String]) -> Result<(), CliError> {
        if labels.len() < self.n {
            return Err(CliError {
                kind: ErrorKind::BadConfig,
                message: format!(
                    "labels file has {} lines but the graph has {} vertices",
                    labels.len(),
                    self.n
                ),
            });
        }
        self.labeled_sets = Some(
            self.sets
                .iter()
                .map(|set| set.iter().map(|&v| labels[v].clone()).collect())
                .collect(),
        );
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn family_json(spec: &FamilySpec) -> serde_json::Value {
    match *spec {
        FamilySpec::Path { n } => serde_json::json!({"family": "path", "n": n}),
        FamilySpec::Cycle { n } => serde_json::json!({"family": "cycle", "n": n}),
        FamilySpec::Grid { rows, cols } => {
            serde_json::json!({"family": "grid", "rows": rows, "cols": cols})
        }
        FamilySpec::Complete { n } => serde_json::json!({"family": "complete", "n": n}),
        FamilySpec::CliqueUnion {
            clusters,
            size,
            bridge,
        } => serde_json::json!({
            "family": "clique-union", "clusters": clusters, "size": size, "bridge": bridge
        }),
        FamilySpec::PlantedPartition {
            clusters,
            size,
            p_in,
            p_out,
            seed,
        } => serde_json::json!({
            "family": "planted-partition", "clusters": clusters, "size": size,
            "p_in": p_in, "p_out": p_out, "seed": seed
        }),
        FamilySpec::Gnp { n, p, seed } => {
            serde_json::json!({"family": "gnp", "n": n, "p": p, "seed": seed})
        }
        FamilySpec::NoisyHypercube { dim, eps } => {
            serde_json::json!({"family": "noisy-hypercube", "dim": dim, "eps": eps})
        }
    }
}
