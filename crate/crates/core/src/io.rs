//! Graph JSON format:
//!
//! ```json
//! {"vertices":[{"id":"a","m":1.0}],"edges":[{"from":"a","to":"b","b":1.0}]}
//! ```
//!
//! `m` and `b` default to 1.0. Repeated `(from, to)` pairs are summed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedWeightedGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: VertexId,
    #[serde(default = "one")]
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub from: VertexId,
    pub to: VertexId,
    #[serde(default = "one")]
    pub b: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub vertices: Vec<VertexEntry>,
    #[serde(default)]
    pub edges: Vec<EdgeEntry>,
}

impl GraphDocument {
    pub fn from_graph(g: &DirectedWeightedGraph) -> Self {
        GraphDocument {
            vertices: g
                .vertex_ids()
                .iter()
                .zip(g.measure())
                .map(|(id, &m)| VertexEntry { id: id.clone(), m })
                .collect(),
            edges: g.edges().map(|(x, y, b)| EdgeEntry { from: x.clone(), to: y.clone(), b }).collect(),
        }
    }

    pub fn into_graph(self) -> Result<DirectedWeightedGraph> {
        DirectedWeightedGraph::from_parts(
            self.vertices.into_iter().map(|v| (v.id, v.m)).collect(),
            self.edges.into_iter().map(|e| (e.from, e.to, e.b)).collect(),
        )
    }
}

impl From<DirectedWeightedGraph> for GraphDocument {
    fn from(g: DirectedWeightedGraph) -> Self {
        GraphDocument::from_graph(&g)
    }
}

impl TryFrom<GraphDocument> for DirectedWeightedGraph {
    type Error = Error;

    fn try_from(doc: GraphDocument) -> Result<Self> {
        doc.into_graph()
    }
}

pub(crate) fn json_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

pub fn parse_graph(text: &str) -> Result<DirectedWeightedGraph> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(json_error)?;
    doc.into_graph()
}

pub fn parse_graph_bytes(bytes: &[u8]) -> Result<DirectedWeightedGraph> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        column: e.valid_up_to(),
        message: "input is not valid UTF-8".into(),
    })?;
    parse_graph(text)
}

pub fn graph_to_json(g: &DirectedWeightedGraph) -> String {
    serde_json::to_string(&GraphDocument::from_graph(g)).expect("graph documents always serialize")
}

pub fn graph_to_json_pretty(g: &DirectedWeightedGraph) -> String {
    serde_json::to_string_pretty(&GraphDocument::from_graph(g)).expect("graph documents always serialize")
}
