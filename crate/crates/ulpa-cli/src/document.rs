//! The on-disk ultragraph document.
//!
//! A JSON object with `vertices` (names) and `edges` (records with `id`,
//! `source`, `range`). Canonical emission sorts everything, so a document
//! round-trips byte-identically once canonicalized.

use serde::{Deserialize, Serialize};

use ulpa::graph::{Ultragraph, VertexId, VertexSet};

use crate::CliError;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct UltragraphDocument {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: String,
    pub source: String,
    pub range: Vec<String>,
}

impl UltragraphDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::parse(format!(
                "document parse error at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    /// Sort vertices, edges, and ranges into the canonical order.
    pub fn canonicalize(&mut self) {
        self.vertices.sort();
        for e in &mut self.edges {
            e.range.sort();
        }
        self.edges.sort_by(|a, b| a.id.cmp(&b.id));
    }

    /// Canonical text: sorted ids, pretty-printed, trailing newline.
    pub fn canonical_text(&self) -> String {
        let mut doc = self.clone();
        doc.canonicalize();
        let mut out = serde_json::to_string_pretty(&doc).expect("document serializes");
        out.push('\n');
        out
    }

    pub fn to_graph(&self) -> Result<Ultragraph, CliError> {
        let mut doc = self.clone();
        doc.canonicalize();
        let lookup = |name: &str| -> Result<VertexId, CliError> {
            doc.vertices
                .iter()
                .position(|n| n == name)
                .map(|i| VertexId(i as u32))
                .ok_or_else(|| CliError::parse(format!("edge cites undeclared vertex {name}")))
        };
        let mut edges = Vec::new();
        for rec in &doc.edges {
            let source = lookup(&rec.source)
                .map_err(|_| CliError::parse(format!("edge {} has undeclared source {}", rec.id, rec.source)))?;
            let mut range = VertexSet::new();
            for v in &rec.range {
                range.insert(lookup(v).map_err(|_| {
                    CliError::parse(format!("edge {} range cites undeclared vertex {v}", rec.id))
                })?);
            }
            edges.push((rec.id.clone(), source, range));
        }
        let g = Ultragraph::from_parts(doc.vertices.clone(), edges);
        let violations = g.validate();
        if !violations.is_empty() {
            let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(CliError::parse(format!("invalid ultragraph: {}", msgs.join("; "))));
        }
        Ok(g)
    }

    pub fn from_graph(g: &Ultragraph) -> Self {
        let mut doc = UltragraphDocument {
            vertices: g.vertices().map(|v| g.vertex_name(v).to_string()).collect(),
            edges: g
                .edge_ids()
                .map(|e| EdgeRecord {
                    id: g.edge_name(e).to_string(),
                    source: g.vertex_name(g.source(e)).to_string(),
                    range: g.range(e).iter().map(|v| g.vertex_name(v).to_string()).collect(),
                })
                .collect(),
        };
        doc.canonicalize();
        doc
    }
}
