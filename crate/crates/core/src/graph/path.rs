use std::fmt;

use serde::Serialize;

use super::{EdgeId, Graph, GraphError, VertexId};

/// A finite path `e₁…eₙ`, or a vertex when `n = 0`.
///
/// Both endpoints are stored so that length-0 paths carry their vertex and
/// so that `s(α)`/`r(α)` never need the graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Path {
    src: VertexId,
    rng: VertexId,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn vertex(v: VertexId) -> Path {
        Path { src: v, rng: v, edges: Vec::new() }
    }

    pub fn edge(g: &Graph, e: EdgeId) -> Path {
        Path { src: g.src(e), rng: g.rng(e), edges: vec![e] }
    }

    /// Checks `r(eᵢ) = s(eᵢ₊₁)`; the sequence must be nonempty.
    pub fn from_edges(g: &Graph, edges: &[EdgeId]) -> Result<Path, GraphError> {
        let Some((&first, rest)) = edges.split_first() else {
            return Err(GraphError::NotAPath("empty edge sequence".into()));
        };
        let mut p = Path::edge(g, first);
        for &e in rest {
            if g.src(e) != p.rng {
                return Err(GraphError::NotAPath(format!(
                    "r({}) = {} but s({}) = {}",
                    g.edge_name(*p.edges.last().unwrap()),
                    g.vertex_name(p.rng),
                    g.edge_name(e),
                    g.vertex_name(g.src(e))
                )));
            }
            p = p.extend(g, e);
        }
        Ok(p)
    }

    pub fn from_names(g: &Graph, names: &[&str]) -> Result<Path, GraphError> {
        let edges = names.iter().map(|n| g.edge(n)).collect::<Result<Vec<_>, _>>()?;
        Path::from_edges(g, &edges)
    }

    pub fn src(&self) -> VertexId {
        self.src
    }

    pub fn rng(&self) -> VertexId {
        self.rng
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        !self.edges.is_empty() && self.src == self.rng
    }

    pub fn last_edge(&self) -> Option<EdgeId> {
        self.edges.last().copied()
    }

    /// `self · e`; caller guarantees `r(self) = s(e)`.
    pub fn extend(&self, g: &Graph, e: EdgeId) -> Path {
        debug_assert_eq!(g.src(e), self.rng);
        let mut edges = self.edges.clone();
        edges.push(e);
        Path { src: self.src, rng: g.rng(e), edges }
    }

    /// Concatenation `self · other`, or `None` when `r(self) ≠ s(other)`.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.rng != other.src {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Some(Path { src: self.src, rng: other.rng, edges })
    }

    /// If `prefix` is a prefix of `self` (vertex paths are prefixes of every
    /// path starting there), the remainder.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        if self.src != prefix.src || !self.edges.starts_with(&prefix.edges) {
            return None;
        }
        Some(Path { src: prefix.rng, rng: self.rng, edges: self.edges[prefix.edges.len()..].to_vec() })
    }

    /// Drops the last edge; vertex paths are returned unchanged.
    pub fn without_last(&self, g: &Graph) -> Path {
        match self.edges.split_last() {
            None => self.clone(),
            Some((&last, rest)) => Path { src: self.src, rng: g.src(last), edges: rest.to_vec() },
        }
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> PathDisplay<'a> {
        PathDisplay { path: self, graph: g }
    }
}

pub struct PathDisplay<'a> {
    path: &'a Path,
    graph: &'a Graph,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_vertex() {
            return f.write_str(self.graph.vertex_name(self.path.src));
        }
        for (i, &e) in self.path.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(self.graph.edge_name(e))?;
        }
        Ok(())
    }
}

/// A path without orientation `(u₀…uₙ; e₁…eₙ)`: edges pairwise distinct, each
/// `eᵢ` joining `uᵢ₋₁` and `uᵢ` in either direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnorientedPath {
    pub vertices: Vec<VertexId>,
    /// Each edge with `true` when traversed from source to range.
    pub edges: Vec<(EdgeId, bool)>,
}

impl UnorientedPath {
    pub fn is_valid(&self, g: &Graph) -> bool {
        if self.vertices.len() != self.edges.len() + 1 {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().enumerate().all(|(i, &(e, fwd))| {
            let (a, b) = (self.vertices[i], self.vertices[i + 1]);
            let joins = if fwd { g.src(e) == a && g.rng(e) == b } else { g.rng(e) == a && g.src(e) == b };
            joins && seen.insert(e)
        })
    }

    pub fn display(&self, g: &Graph) -> String {
        let vs: Vec<&str> = self.vertices.iter().map(|&v| g.vertex_name(v)).collect();
        let es: Vec<&str> = self.edges.iter().map(|&(e, _)| g.edge_name(e)).collect();
        format!("({}; {})", vs.join(" "), es.join(" "))
    }
}
