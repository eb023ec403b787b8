//! Plain-text graph and tiling files.
//!
//! A graph file starts with the vertex count on its own line, followed by one
//! `u v` line per edge with `u < v`. Lines starting with `#` are comments;
//! comments of the form `# key=value` are kept as metadata.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use cliquetile_core::tiling::Tiling;
use cliquetile_core::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Graph,
    pub metadata: Vec<(String, String)>,
}

impl GraphFile {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut metadata = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.trim().split_once('=') {
                if !k.trim().is_empty() && !k.contains(char::is_whitespace) {
                    metadata.push((k.trim().to_string(), v.trim().to_string()));
                }
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (n, fields.as_slice()) {
            (None, [count]) => {
                n = Some(
                    count
                        .parse()
                        .with_context(|| format!("line {lineno}: bad vertex count {count:?}"))?,
                );
            }
            (None, _) => bail!("line {lineno}: expected the vertex count"),
            (Some(n), [a, b]) => {
                let u: usize = a.parse().with_context(|| format!("line {lineno}: bad vertex {a:?}"))?;
                let v: usize = b.parse().with_context(|| format!("line {lineno}: bad vertex {b:?}"))?;
                if u >= v {
                    bail!("line {lineno}: edge endpoints must satisfy u < v, got {u} {v}");
                }
                if v >= n {
                    bail!("line {lineno}: vertex {v} out of range for n={n}");
                }
                edges.push((u, v));
            }
            (Some(_), _) => bail!("line {lineno}: expected two vertex ids"),
        }
    }
    let Some(n) = n else { bail!("empty graph file") };
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        bail!("duplicate edge {} {}", w[0].0, w[0].1);
    }
    let graph = Graph::from_edges(n, edges)?;
    Ok(GraphFile { graph, metadata })
}

pub fn write_graph(g: &Graph, metadata: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in metadata {
        let _ = writeln!(out, "# {k}={v}");
    }
    let _ = writeln!(out, "{}", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn read_graph_file(path: &Path) -> Result<GraphFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_graph_file(path: &Path, g: &Graph, metadata: &[(String, String)]) -> Result<()> {
    fs::write(path, write_graph(g, metadata)).with_context(|| format!("writing {}", path.display()))
}

/// One line of space-separated vertex ids per clique.
pub fn write_tiling(t: &Tiling) -> String {
    let mut out = String::new();
    for part in &t.parts {
        let ids: Vec<String> = part.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", ids.join(" "));
    }
    out
}

pub fn parse_tiling(text: &str, r: usize) -> Result<Tiling> {
    let mut t = Tiling::new(r);
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let part = line
            .split_whitespace()
            .map(|s| s.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .with_context(|| format!("line {}: bad vertex id", idx + 1))?;
        if part.len() != r {
            bail!("line {}: expected {r} vertices, got {}", idx + 1, part.len());
        }
        t.push(part);
    }
    Ok(t)
}

/// Comma-separated list, as used for `--anchors` and metadata values.
pub fn join_ids(ids: &[usize]) -> String {
    ids.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_ids(s: &str) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .with_context(|| format!("bad vertex id {x:?}"))
        })
        .collect()
}
