//! File-level include graph and the subsystem-level architectural model.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mapping::{Assignments, SubsystemCode};
use crate::scanner::SourceFile;

/// Deduplicated include graph over absolute file paths.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileGraph {
    nodes: BTreeSet<String>,
    edges: BTreeSet<(String, String)>,
}

impl FileGraph {
    pub fn new() -> Self {
        FileGraph::default()
    }

    pub fn add_node(&mut self, path: impl Into<String>) {
        self.nodes.insert(path.into());
    }

    /// Adds an edge, creating missing endpoints. Returns `false` if the edge
    /// was already present.
    pub fn add_edge(&mut self, from: impl Into<String>, to: impl Into<String>) -> bool {
        let (from, to) = (from.into(), to.into());
        self.nodes.insert(from.clone());
        self.nodes.insert(to.clone());
        self.edges.insert((from, to))
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<(String, String)> {
        &self.edges
    }

    pub fn contains_edge(&self, from: &str, to: &str) -> bool {
        self.edges.contains(&(from.to_string(), to.to_string()))
    }

    /// Files that include themselves. They stay in the graph but are worth
    /// reporting.
    pub fn self_edges(&self) -> impl Iterator<Item = &str> {
        self.edges
            .iter()
            .filter(|(a, b)| a == b)
            .map(|(a, _)| a.as_str())
    }
}

/// Builds the include graph from the scanned files and the resolved
/// (includer, target) pairs, both given as absolute paths.
pub fn build_file_graph(files: &[SourceFile], resolved_edges: &[(String, String)]) -> Result<FileGraph> {
    let mut graph = FileGraph::new();
    for file in files {
        graph.add_node(file.abs_path.clone());
    }
    for (from, to) in resolved_edges {
        for end in [from, to] {
            if !graph.nodes.contains(end) {
                return Err(Error::Integrity(format!(
                    "edge {from} -> {to} references unknown file {end}"
                )));
            }
        }
        graph.edges.insert((from.clone(), to.clone()));
    }
    Ok(graph)
}

/// Subsystem-level directed graph. Edge weights count distinct file-level
/// include pairs; self-loops are kept.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArchModel {
    pub engine: String,
    /// Detected subsystems and their file counts.
    pub nodes: BTreeMap<SubsystemCode, usize>,
    pub edges: BTreeMap<(SubsystemCode, SubsystemCode), usize>,
}

impl ArchModel {
    /// Detected real subsystems, excluding `UNK`.
    pub fn detected(&self) -> BTreeSet<SubsystemCode> {
        self.nodes
            .keys()
            .copied()
            .filter(|&c| c != SubsystemCode::UNK)
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn inter_subsystem_edge_count(&self) -> usize {
        self.edges.keys().filter(|(a, b)| a != b).count()
    }

    pub fn total_weight(&self) -> usize {
        self.edges.values().sum()
    }

    pub fn weight(&self, from: SubsystemCode, to: SubsystemCode) -> usize {
        self.edges.get(&(from, to)).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        let doc = ModelDoc {
            engine: self.engine.clone(),
            nodes: self
                .nodes
                .iter()
                .map(|(&code, &files)| NodeDoc { code, files })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|(&(from, to), &weight)| EdgeDoc { from, to, weight })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("model serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDoc = serde_json::from_str(text)?;
        if doc.engine.trim().is_empty() {
            return Err(Error::Integrity("model has an empty engine id".into()));
        }
        let mut model = ArchModel {
            engine: doc.engine,
            ..ArchModel::default()
        };
        for node in doc.nodes {
            if model.nodes.insert(node.code, node.files).is_some() {
                return Err(Error::Integrity(format!("duplicate node {}", node.code)));
            }
        }
        for edge in doc.edges {
            if edge.weight == 0 {
                return Err(Error::Integrity(format!(
                    "edge {} -> {} has zero weight",
                    edge.from, edge.to
                )));
            }
            for end in [edge.from, edge.to] {
                if !model.nodes.contains_key(&end) {
                    return Err(Error::Integrity(format!("edge references absent node {end}")));
                }
            }
            if model.edges.insert((edge.from, edge.to), edge.weight).is_some() {
                return Err(Error::Integrity(format!(
                    "duplicate edge {} -> {}",
                    edge.from, edge.to
                )));
            }
        }
        Ok(model)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    engine: String,
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    code: SubsystemCode,
    files: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: SubsystemCode,
    to: SubsystemCode,
    weight: usize,
}

/// Lifts the file graph to subsystems. Files without an assignment count as
/// `UNK`; `UNK` files and their edges are dropped unless `include_unk`.
pub fn lift(engine: &str, graph: &FileGraph, assignments: &Assignments, include_unk: bool) -> ArchModel {
    let code_of = |path: &str| assignments.get(path).copied().unwrap_or(SubsystemCode::UNK);
    let keep = |code: SubsystemCode| include_unk || code != SubsystemCode::UNK;

    let mut model = ArchModel {
        engine: engine.to_string(),
        ..ArchModel::default()
    };
    for node in graph.nodes() {
        let code = code_of(node);
        if keep(code) {
            *model.nodes.entry(code).or_default() += 1;
        }
    }
    for (from, to) in graph.edges() {
        let (a, b) = (code_of(from), code_of(to));
        if keep(a) && keep(b) {
            *model.edges.entry((a, b)).or_default() += 1;
        }
    }
    model
}
