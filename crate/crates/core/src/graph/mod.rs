//! Finite directed multigraphs and the path-level predicates used throughout.

mod format;
mod path;
mod structure;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use format::parse_graph;
pub use path::{Path, UnorientedPath};
pub use structure::{ConditionL, Components, Level, LevelDecomposition, PSimple, PSimpleWitness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeId(pub usize);

/// One problem found while validating a [`GraphDecl`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphIssue {
    #[error("dangling endpoint: edge `{edge}` refers to undeclared vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("id `{0}` is used both as a vertex and as an edge")]
    IdCollision(String),
    #[error("invalid id `{0}`")]
    InvalidId(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid graph: {}", join_issues(.0))]
    Invalid(Vec<GraphIssue>),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown id `{0}`")]
    UnknownId(String),
    #[error("not a path: {0}")]
    NotAPath(String),
}

fn join_issues(issues: &[GraphIssue]) -> String {
    issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDecl {
    pub id: String,
    pub src: String,
    pub rng: String,
}

/// An unvalidated list of declarations, as read from a file or built by hand.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphDecl {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDecl>,
}

pub(crate) fn is_valid_id(s: &str) -> bool {
    if s == "*" {
        return true;
    }
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl GraphDecl {
    pub fn new<V: AsRef<str>>(vertices: &[V], edges: &[(&str, &str, &str)]) -> Self {
        GraphDecl {
            vertices: vertices.iter().map(|v| v.as_ref().to_string()).collect(),
            edges: edges
                .iter()
                .map(|(id, s, r)| EdgeDecl { id: id.to_string(), src: s.to_string(), rng: r.to_string() })
                .collect(),
        }
    }

    /// Reports every violated graph invariant.
    pub fn validate(&self) -> Result<(), Vec<GraphIssue>> {
        let mut issues = Vec::new();
        let mut vseen = HashSet::new();
        for v in &self.vertices {
            if !is_valid_id(v) {
                issues.push(GraphIssue::InvalidId(v.clone()));
            }
            if !vseen.insert(v.as_str()) {
                issues.push(GraphIssue::DuplicateId(v.clone()));
            }
        }
        let mut eseen = HashSet::new();
        for e in &self.edges {
            if !is_valid_id(&e.id) {
                issues.push(GraphIssue::InvalidId(e.id.clone()));
            }
            if !eseen.insert(e.id.as_str()) {
                issues.push(GraphIssue::DuplicateId(e.id.clone()));
            }
            if vseen.contains(e.id.as_str()) {
                issues.push(GraphIssue::IdCollision(e.id.clone()));
            }
            for end in [&e.src, &e.rng] {
                if !vseen.contains(end.as_str()) {
                    issues.push(GraphIssue::DanglingEndpoint { edge: e.id.clone(), vertex: end.clone() });
                }
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(issues)
        }
    }

    pub fn build(&self) -> Result<Graph, GraphError> {
        self.validate().map_err(GraphError::Invalid)?;
        let vindex: HashMap<String, VertexId> =
            self.vertices.iter().enumerate().map(|(i, v)| (v.clone(), VertexId(i))).collect();
        let n = self.vertices.len();
        let mut g = Graph {
            vertex_names: self.vertices.clone(),
            edge_names: Vec::with_capacity(self.edges.len()),
            src: Vec::with_capacity(self.edges.len()),
            rng: Vec::with_capacity(self.edges.len()),
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            vindex,
            eindex: HashMap::new(),
        };
        for (i, e) in self.edges.iter().enumerate() {
            let id = EdgeId(i);
            let s = g.vindex[&e.src];
            let r = g.vindex[&e.rng];
            g.edge_names.push(e.id.clone());
            g.src.push(s);
            g.rng.push(r);
            g.out[s.0].push(id);
            g.inc[r.0].push(id);
            g.eindex.insert(e.id.clone(), id);
        }
        Ok(g)
    }
}

/// A validated finite directed multigraph `E = (E⁰, E¹, r, s)`.
///
/// Vertices and edges keep their declaration order; that order fixes every
/// enumeration in the crate (interval layouts, designated edges, reports).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    src: Vec<VertexId>,
    rng: Vec<VertexId>,
    out: Vec<Vec<EdgeId>>,
    inc: Vec<Vec<EdgeId>>,
    vindex: HashMap<String, VertexId>,
    eindex: HashMap<String, EdgeId>,
}

/// Either kind of graph item, as looked up by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Item {
    Vertex(VertexId),
    Edge(EdgeId),
}

/// Reports every violated invariant of an unvalidated declaration list.
pub fn validate_graph(decl: &GraphDecl) -> Result<(), Vec<GraphIssue>> {
    decl.validate()
}

impl Graph {
    /// Convenience constructor from string slices.
    pub fn build<V: AsRef<str>>(vertices: &[V], edges: &[(&str, &str, &str)]) -> Result<Graph, GraphError> {
        GraphDecl::new(vertices, edges).build()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_names.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        (0..self.vertex_names.len()).map(VertexId)
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = EdgeId> + '_ {
        (0..self.edge_names.len()).map(EdgeId)
    }

    pub fn src(&self, e: EdgeId) -> VertexId {
        self.src[e.0]
    }

    pub fn rng(&self, e: EdgeId) -> VertexId {
        self.rng[e.0]
    }

    /// `s⁻¹(v)` in declaration order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out[v.0]
    }

    /// `r⁻¹(v)` in declaration order.
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.inc[v.0]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e.0]
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vindex.get(name).copied()
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.eindex.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Option<Item> {
        self.vertex_id(name)
            .map(Item::Vertex)
            .or_else(|| self.edge_id(name).map(Item::Edge))
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_id(name).ok_or_else(|| GraphError::UnknownId(name.to_string()))
    }

    pub fn edge(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edge_id(name).ok_or_else(|| GraphError::UnknownId(name.to_string()))
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out[v.0].is_empty()
    }

    /// Vertices emitting no edge.
    pub fn sinks(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.is_sink(v)).collect()
    }

    /// `s⁻¹(v)` is finite for every vertex of a finite graph.
    pub fn is_row_finite(&self) -> bool {
        true
    }

    pub fn is_isolated(&self, v: VertexId) -> bool {
        self.out[v.0].is_empty() && self.inc[v.0].is_empty()
    }

    /// The declaration list this graph was built from.
    pub fn to_decl(&self) -> GraphDecl {
        GraphDecl {
            vertices: self.vertex_names.clone(),
            edges: self
                .edges()
                .map(|e| EdgeDecl {
                    id: self.edge_name(e).to_string(),
                    src: self.vertex_name(self.src(e)).to_string(),
                    rng: self.vertex_name(self.rng(e)).to_string(),
                })
                .collect(),
        }
    }

    /// All paths of length `n`; for `n = 0` the vertices. Lexicographic in
    /// declaration order.
    pub fn paths_of_length(&self, n: usize) -> Vec<Path> {
        let mut current: Vec<Path> = self.vertices().map(Path::vertex).collect();
        for _ in 0..n {
            current = current
                .iter()
                .flat_map(|p| {
                    self.out_edges(p.rng())
                        .iter()
                        .map(move |&e| p.extend(self, e))
                })
                .collect();
        }
        current
    }

    /// Closed paths based at `v` with `1 ≤ length ≤ maxlen`.
    pub fn closed_paths_from(&self, v: VertexId, maxlen: usize) -> Vec<Path> {
        let mut found = Vec::new();
        let mut frontier = vec![Path::vertex(v)];
        for _ in 0..maxlen {
            frontier = frontier
                .iter()
                .flat_map(|p| self.out_edges(p.rng()).iter().map(move |&e| p.extend(self, e)))
                .collect();
            found.extend(frontier.iter().filter(|p| p.rng() == v).cloned());
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.edges().cmp(b.edges())));
        found
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertex_names {
            writeln!(f, "vertex {v}")?;
        }
        for e in self.edges() {
            writeln!(
                f,
                "edge {} {} {}",
                self.edge_name(e),
                self.vertex_name(self.src(e)),
                self.vertex_name(self.rng(e))
            )?;
        }
        Ok(())
    }
}

/// Small named graphs.
pub mod fixtures {
    use super::*;

    pub fn loop_graph() -> Graph {
        Graph::build(&["*"], &[("x", "*", "*")]).unwrap()
    }

    pub fn rose2() -> Graph {
        Graph::build(&["v"], &[("a", "v", "v"), ("b", "v", "v")]).unwrap()
    }

    pub fn path3() -> Graph {
        Graph::build(&["v1", "v2", "v3"], &[("e1", "v1", "v2"), ("e2", "v2", "v3")]).unwrap()
    }

    pub fn edge() -> Graph {
        Graph::build(&["v1", "v2"], &[("e", "v1", "v2")]).unwrap()
    }
}
