//! Edge-list text format.
//!
//! One `u v` pair per line, whitespace separated. Everything after `#` is a
//! comment, except that a comment whose first token is `vertices=N` fixes
//! the vertex count (otherwise it is one more than the largest id seen).

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// Repeated edges that were merged while loading.
    pub duplicates: usize,
}

pub fn parse_edge_list(text: &str) -> Result<LoadedGraph> {
    let mut edges = Vec::new();
    let mut declared: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let (body, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        if let Some(first) = comment.and_then(|c| c.split_whitespace().next()) {
            if let Some(value) = first.strip_prefix("vertices=") {
                let n = value.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("bad vertex count {value:?}"),
                })?;
                declared = Some(n);
            }
        }
        let mut tokens = body.split_whitespace();
        let Some(first) = tokens.next() else { continue };
        let second = tokens.next().ok_or_else(|| Error::Parse {
            line,
            message: "expected two vertex ids".into(),
        })?;
        if tokens.next().is_some() {
            return Err(Error::Parse { line, message: "trailing tokens after edge".into() });
        }
        let parse = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse { line, message: format!("bad vertex id {t:?}") })
        };
        let (u, v) = (parse(first)?, parse(second)?);
        if u == v {
            return Err(Error::Parse { line, message: format!("self-loop at vertex {u}") });
        }
        edges.push((u, v));
    }
    let inferred = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match declared {
        Some(n) if n < inferred => {
            return Err(Error::Parse {
                line: 0,
                message: format!("declared {n} vertices but id {} appears", inferred - 1),
            })
        }
        Some(n) => n,
        None => inferred,
    };
    let (graph, duplicates) = Graph::from_edges_counting(n, &edges)?;
    if duplicates > 0 {
        log::warn!("merged {duplicates} duplicate edges");
    }
    Ok(LoadedGraph { graph, duplicates })
}

/// Writes `graph` with the given header comment lines.
pub fn write_edge_list(graph: &Graph, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "# vertices={}", graph.n());
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// SHA-256 over the canonical form `n m` followed by the sorted edges.
pub fn graph_hash(graph: &Graph) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("{} {}\n", graph.n(), graph.m()));
    for (u, v) in graph.edges() {
        hasher.update(format!("{u} {v}\n"));
    }
    hex(&hasher.finalize())
}

pub fn bytes_hash(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_counts_duplicates() {
        let text = "# generated\n0 1\n1 2 # trailing\n\n2 1\n";
        let loaded = parse_edge_list(text).unwrap();
        assert_eq!(loaded.graph, Graph::path(3));
        assert_eq!(loaded.duplicates, 1);
    }

    #[test]
    fn declared_vertex_count_keeps_isolated_vertices() {
        let loaded = parse_edge_list("# vertices=5\n0 1\n").unwrap();
        assert_eq!(loaded.graph.n(), 5);
        assert!(parse_edge_list("# vertices=1\n0 1\n").is_err());
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(parse_edge_list("0 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("0 1\n3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("0 x\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_edge_list("0 1 2\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let g = Graph::petersen().disjoint_union(&Graph::empty(2));
        let text = write_edge_list(&g, &["model=petersen".into()]);
        assert_eq!(parse_edge_list(&text).unwrap().graph, g);
        assert_eq!(graph_hash(&g), graph_hash(&parse_edge_list(&text).unwrap().graph));
        assert_ne!(graph_hash(&g), graph_hash(&Graph::petersen()));
    }
}
