//! Reduced-network serializers: Graphviz DOT, a JSON graph document and a
//! CSV edge list. Output is a pure function of the network.

use std::fmt::Write as _;
use std::str::FromStr;

use regomax_core::{LinkKind, NetworkEdge, NetworkNode, ReducedNetwork};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphFormat {
    Dot,
    JsonGraph,
    EdgeCsv,
}

impl GraphFormat {
    pub const ALL: [GraphFormat; 3] = [GraphFormat::Dot, GraphFormat::JsonGraph, GraphFormat::EdgeCsv];

    pub fn name(self) -> &'static str {
        match self {
            GraphFormat::Dot => "dot",
            GraphFormat::JsonGraph => "json_graph",
            GraphFormat::EdgeCsv => "edge_csv",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            GraphFormat::Dot => "dot",
            GraphFormat::JsonGraph => "json",
            GraphFormat::EdgeCsv => "csv",
        }
    }
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GraphFormat::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::usage(format!("unknown graph format {s:?} (dot, json_graph, edge_csv)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindDoc {
    Direct,
    Hidden,
}

impl From<LinkKind> for KindDoc {
    fn from(k: LinkKind) -> Self {
        match k {
            LinkKind::Direct => KindDoc::Direct,
            LinkKind::Hidden => KindDoc::Hidden,
        }
    }
}

impl From<KindDoc> for LinkKind {
    fn from(k: KindDoc) -> Self {
        match k {
            KindDoc::Direct => LinkKind::Direct,
            KindDoc::Hidden => LinkKind::Hidden,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: usize,
    label: String,
    in_degree: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    source: usize,
    target: usize,
    weight: f64,
    kind: KindDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    directed: bool,
    k: usize,
    clamped_from: Option<usize>,
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
}

fn dot_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push('"');
    out
}

fn to_dot(net: &ReducedNetwork) -> String {
    let mut out = String::from("digraph reduced {\n");
    for (i, node) in net.nodes.iter().enumerate() {
        let _ = writeln!(
            out,
            "  n{i} [label={}, in_degree={}];",
            dot_quote(&node.label),
            node.in_degree
        );
    }
    for e in &net.edges {
        let _ = writeln!(
            out,
            "  n{} -> n{} [kind={}, weight={}];",
            e.source,
            e.target,
            dot_quote(e.kind.name()),
            e.weight
        );
    }
    out.push_str("}\n");
    out
}

fn to_json(net: &ReducedNetwork) -> Result<String> {
    let doc = GraphDoc {
        directed: true,
        k: net.k,
        clamped_from: net.clamped_from,
        nodes: net
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| NodeDoc {
                id,
                label: n.label.clone(),
                in_degree: n.in_degree,
            })
            .collect(),
        edges: net
            .edges
            .iter()
            .map(|e| EdgeDoc {
                source: e.source,
                target: e.target,
                weight: e.weight,
                kind: e.kind.into(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

fn to_edge_csv(net: &ReducedNetwork) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["source", "target", "weight", "kind"])?;
    for e in &net.edges {
        w.write_record([
            net.nodes[e.source].label.as_str(),
            &net.nodes[e.target].label,
            &e.weight.to_string(),
            e.kind.name(),
        ])?;
    }
    w.into_inner().map_err(|e| Error::Csv(e.into_error().into()))
}

pub fn export_graph(net: &ReducedNetwork, format: GraphFormat) -> Result<Vec<u8>> {
    Ok(match format {
        GraphFormat::Dot => to_dot(net).into_bytes(),
        GraphFormat::JsonGraph => to_json(net)?.into_bytes(),
        GraphFormat::EdgeCsv => to_edge_csv(net)?,
    })
}

/// Reads a JSON graph document back into a network.
pub fn parse_json_graph(bytes: &[u8]) -> Result<ReducedNetwork> {
    let doc: GraphDoc = serde_json::from_slice(bytes)?;
    let n = doc.nodes.len();
    for (pos, node) in doc.nodes.iter().enumerate() {
        if node.id != pos {
            return Err(Error::usage(format!("node id {} at position {pos}", node.id)));
        }
    }
    if let Some(e) = doc.edges.iter().find(|e| e.source >= n || e.target >= n) {
        return Err(Error::usage(format!(
            "edge {} -> {} refers to a missing node",
            e.source, e.target
        )));
    }
    Ok(ReducedNetwork {
        nodes: doc
            .nodes
            .into_iter()
            .map(|n| NetworkNode {
                label: n.label,
                in_degree: n.in_degree,
            })
            .collect(),
        edges: doc
            .edges
            .into_iter()
            .map(|e| NetworkEdge {
                source: e.source,
                target: e.target,
                weight: e.weight,
                kind: e.kind.into(),
            })
            .collect(),
        k: doc.k,
        clamped_from: doc.clamped_from,
    })
}
