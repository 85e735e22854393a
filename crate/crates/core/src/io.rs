//! Graph ingestion: whitespace edge lists and Matrix Market coordinate files.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::graph::{GraphError, WeightedGraph};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot open {path}: {source}")]
    Open {
        path: String,
        source: std::io::Error,
    },
    #[error("read error: {0}")]
    Read(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Reads the plain edge-list format: one `u v [w]` triple per line,
/// 0-indexed, `w` defaulting to 1.0, `#` lines ignored.
pub fn read_edge_list<R: Read>(reader: R) -> Result<WeightedGraph, IoError> {
    let (n, edges) = read_edge_list_raw(reader)?;
    Ok(WeightedGraph::build(n, &edges)?)
}

/// As `read_edge_list` but returns `(n, edges)` before validation, so
/// callers can preprocess (e.g. merge duplicates).
pub fn read_edge_list_raw<R: Read>(reader: R) -> Result<(usize, Vec<(usize, usize, f64)>), IoError> {
    let reader = BufReader::new(reader);
    let mut edges = Vec::new();
    let mut max_vertex = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let u = parse_field(fields.next(), idx + 1, "missing source vertex")?;
        let v = parse_field(fields.next(), idx + 1, "missing target vertex")?;
        let w = match fields.next() {
            Some(tok) => tok.parse::<f64>().map_err(|_| IoError::Parse {
                line: idx + 1,
                message: format!("bad weight {tok:?}"),
            })?,
            None => 1.0,
        };
        if fields.next().is_some() {
            return Err(IoError::Parse {
                line: idx + 1,
                message: "trailing fields after `u v w`".into(),
            });
        }
        max_vertex = max_vertex.max(u).max(v);
        edges.push((u, v, w));
    }
    if edges.is_empty() {
        return Err(IoError::Parse {
            line: 0,
            message: "no edges in input".into(),
        });
    }
    Ok((max_vertex + 1, edges))
}

/// Sums the weights of repeated unordered pairs; self-loops are dropped.
pub fn merge_duplicate_edges(edges: Vec<(usize, usize, f64)>) -> Vec<(usize, usize, f64)> {
    let mut merged: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
    for (u, v, w) in edges {
        if u == v {
            continue;
        }
        *merged.entry((u.min(v), u.max(v))).or_insert(0.0) += w;
    }
    merged.into_iter().map(|((u, v), w)| (u, v, w)).collect()
}

/// Reads a symmetric Matrix Market coordinate file (`pattern` or `real`).
///
/// Entries are 1-indexed; each off-diagonal entry contributes one undirected
/// edge. Diagonal entries are dropped: the graph model has no self-loops.
pub fn read_matrix_market<R: Read>(reader: R) -> Result<WeightedGraph, IoError> {
    let (n, edges) = read_matrix_market_raw(reader)?;
    Ok(WeightedGraph::build(n, &edges)?)
}

/// As `read_matrix_market` but returns `(n, edges)` before validation.
pub fn read_matrix_market_raw<R: Read>(
    reader: R,
) -> Result<(usize, Vec<(usize, usize, f64)>), IoError> {
    let reader = BufReader::new(reader);
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines.next().ok_or(IoError::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    let header = header?;
    let lowered = header.to_lowercase();
    if !lowered.starts_with("%%matrixmarket matrix coordinate") {
        return Err(IoError::Parse {
            line: 1,
            message: "expected `%%MatrixMarket matrix coordinate ...` header".into(),
        });
    }
    let pattern = lowered.contains("pattern");
    if !pattern && !lowered.contains("real") && !lowered.contains("integer") {
        return Err(IoError::Parse {
            line: 1,
            message: "only real, integer, or pattern fields are supported".into(),
        });
    }
    if !lowered.contains("symmetric") && !lowered.contains("general") {
        return Err(IoError::Parse {
            line: 1,
            message: "only symmetric or general symmetry is supported".into(),
        });
    }
    let general = lowered.contains("general");

    let mut n = 0usize;
    let mut edges = Vec::new();
    let mut sized = false;
    for (idx, line) in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        if !sized {
            let rows: usize = parse_field(fields.next(), idx + 1, "missing row count")?;
            let cols: usize = parse_field(fields.next(), idx + 1, "missing column count")?;
            let _nnz: usize = parse_field(fields.next(), idx + 1, "missing entry count")?;
            if rows != cols {
                return Err(IoError::Parse {
                    line: idx + 1,
                    message: format!("matrix must be square, got {rows}x{cols}"),
                });
            }
            n = rows;
            sized = true;
            continue;
        }
        let r: usize = parse_field(fields.next(), idx + 1, "missing row index")?;
        let c: usize = parse_field(fields.next(), idx + 1, "missing column index")?;
        if r == 0 || c == 0 || r > n || c > n {
            return Err(IoError::Parse {
                line: idx + 1,
                message: format!("entry ({r}, {c}) out of 1..={n}"),
            });
        }
        let w = if pattern {
            1.0
        } else {
            let tok = fields.next().ok_or(IoError::Parse {
                line: idx + 1,
                message: "missing value field".into(),
            })?;
            tok.parse::<f64>().map_err(|_| IoError::Parse {
                line: idx + 1,
                message: format!("bad value {tok:?}"),
            })?
        };
        if r == c {
            continue; // drop self-loops
        }
        // A general file carries both (r, c) and (c, r); keep one.
        if general && r > c {
            continue;
        }
        edges.push((r - 1, c - 1, w));
    }
    if !sized {
        return Err(IoError::Parse {
            line: 0,
            message: "missing size line".into(),
        });
    }
    Ok((n, edges))
}

/// Reads a graph from a path, sniffing Matrix Market by its banner line.
pub fn read_graph(path: &Path) -> Result<WeightedGraph, IoError> {
    read_graph_with(path, false)
}

/// As `read_graph`; `merge_duplicates` sums repeated unordered pairs
/// instead of rejecting them.
pub fn read_graph_with(path: &Path, merge_duplicates: bool) -> Result<WeightedGraph, IoError> {
    let mut file = File::open(path).map_err(|source| IoError::Open {
        path: path.display().to_string(),
        source,
    })?;
    let mut contents = String::new();
    file.read_to_string(&mut contents)?;
    let (n, mut edges) = if contents.trim_start().starts_with("%%MatrixMarket") {
        read_matrix_market_raw(contents.as_bytes())?
    } else {
        read_edge_list_raw(contents.as_bytes())?
    };
    if merge_duplicates {
        edges = merge_duplicate_edges(edges);
    }
    Ok(WeightedGraph::build(n, &edges)?)
}

/// Writes an embedding as TSV: vertex id, then the k coordinates.
pub fn write_embedding_tsv<W: Write>(
    out: &mut W,
    vectors: impl Iterator<Item = (usize, Vec<f64>)>,
) -> std::io::Result<()> {
    for (v, row) in vectors {
        write!(out, "{v}")?;
        for x in row {
            write!(out, "\t{x:.17e}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    missing: &str,
) -> Result<T, IoError> {
    let tok = tok.ok_or_else(|| IoError::Parse {
        line,
        message: missing.into(),
    })?;
    tok.parse::<T>().map_err(|_| IoError::Parse {
        line,
        message: format!("bad field {tok:?}"),
    })
}
