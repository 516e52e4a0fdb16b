//! E-algebraic branching systems realized on finite unions of half-open
//! intervals with endpoints in ℚ(√2).
//!
//! A system assigns to every edge `e` a region `R_e`, to every vertex `v` a
//! region `D_v`, and to every edge a bijection `f_e : D_{r(e)} → R_e` given as
//! a [`PiecewiseMap`]. [`validate_system`] checks the five defining
//! conditions; [`build_interval_system`] and [`build_rotation_system`] are the
//! two constructions, the second of which induces a faithful representation.

mod construct;
mod hypothesis;
mod map;
mod region;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{EdgeId, Graph, Path, VertexId};
use crate::qfield::QNum;

pub use construct::{build_interval_system, build_rotation_system};
pub use hypothesis::{
    check_faithfulness_hypothesis, check_faithfulness_hypothesis_with, closed_path_images, compose_path_map,
    HypothesisOptions, HypothesisOutcome, HypothesisReport,
};
pub use map::{AffineBranch, PiecewiseMap};
pub use region::{Interval, Region};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BranchingError {
    #[error("graph has a sink: {0}")]
    HasSink(String),
    #[error("not a path of this graph: {0}")]
    NotAPath(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    /// Linear bijections between unit intervals (handles sinks).
    Interval,
    /// Irrational rotation by θ = √2 − 1 conjugated onto the subintervals.
    Rotation,
    /// Index sets realized as unit atoms `[k, k+1)`, induced by a basis.
    Discrete,
    /// Anything assembled by hand.
    Custom,
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemKind::Interval => "interval",
            SystemKind::Rotation => "rotation",
            SystemKind::Discrete => "discrete",
            SystemKind::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingSystem {
    graph: Graph,
    kind: SystemKind,
    ranges: Vec<Region>,
    domains: Vec<Region>,
    maps: Vec<PiecewiseMap>,
    inverses: Vec<PiecewiseMap>,
}

impl BranchingSystem {
    /// Assembles a system; call [`validate_system`] before relying on it.
    ///
    /// Panics if the region/map vectors do not match the graph's sizes.
    pub fn new(
        graph: Graph,
        kind: SystemKind,
        ranges: Vec<Region>,
        domains: Vec<Region>,
        maps: Vec<PiecewiseMap>,
    ) -> BranchingSystem {
        assert_eq!(ranges.len(), graph.num_edges());
        assert_eq!(maps.len(), graph.num_edges());
        assert_eq!(domains.len(), graph.num_vertices());
        let inverses = maps.iter().map(PiecewiseMap::inverse).collect();
        BranchingSystem { graph, kind, ranges, domains, maps, inverses }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    /// `R_e`.
    pub fn range_region(&self, e: EdgeId) -> &Region {
        &self.ranges[e.0]
    }

    /// `D_v`.
    pub fn domain_region(&self, v: VertexId) -> &Region {
        &self.domains[v.0]
    }

    /// `f_e`.
    pub fn map(&self, e: EdgeId) -> &PiecewiseMap {
        &self.maps[e.0]
    }

    /// `f_e⁻¹`.
    pub fn inverse_map(&self, e: EdgeId) -> &PiecewiseMap {
        &self.inverses[e.0]
    }

    /// `X`, the union of all regions.
    pub fn space(&self) -> Region {
        self.ranges
            .iter()
            .chain(&self.domains)
            .fold(Region::empty(), |acc, r| acc.union(r))
    }

    /// The vertex whose `D_v` contains `z`.
    pub fn vertex_at(&self, z: &QNum) -> Option<VertexId> {
        self.graph.vertices().find(|v| self.domains[v.0].contains(z))
    }

    /// Every breakpoint of every region and branch, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<QNum> {
        let mut pts = Vec::new();
        for r in self.ranges.iter().chain(&self.domains) {
            for i in r.intervals() {
                pts.push(i.lo.clone());
                pts.push(i.hi.clone());
            }
        }
        for m in self.maps.iter().chain(&self.inverses) {
            for b in m.branches() {
                pts.push(b.domain.lo.clone());
                pts.push(b.domain.hi.clone());
            }
        }
        pts.sort();
        pts.dedup();
        pts
    }

    /// One point per cell of the partition of `X` cut at every breakpoint:
    /// the cell's left end and a rational interior point.
    pub fn cell_points(&self) -> Vec<QNum> {
        let space = self.space();
        let bps = self.breakpoints();
        let mut out = Vec::new();
        for w in bps.windows(2) {
            if space.contains(&w[0]) {
                out.push(w[0].clone());
                out.push(QNum::from_rational(QNum::rational_strictly_between(&w[0], &w[1])));
            }
        }
        out
    }

    /// Human-readable dump with stable ordering.
    pub fn dump(&self) -> String {
        let g = &self.graph;
        let mut s = format!("system {}\n", self.kind);
        for v in g.vertices() {
            s.push_str(&format!("vertex {} D = {}\n", g.vertex_name(v), self.domains[v.0]));
        }
        for e in g.edges() {
            s.push_str(&format!("edge {} R = {}\n", g.edge_name(e), self.ranges[e.0]));
            for b in self.maps[e.0].branches() {
                s.push_str(&format!("  {b}\n"));
            }
        }
        s
    }
}

/// A violated condition of the definition, with a point exhibiting it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Which condition (1–5).
    pub item: u8,
    pub message: String,
    pub witness: Option<QNum>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.item, self.message)?;
        if let Some(w) = &self.witness {
            write!(f, " at z = {w}")?;
        }
        Ok(())
    }
}

/// Checks the five defining conditions of an E-algebraic branching system:
/// (1) the `R_e` are pairwise disjoint, (2) the `D_v` are pairwise disjoint,
/// (3) `R_e ⊆ D_{s(e)}`, (4) `D_v = ⋃_{s(e)=v} R_e` for emitters, and
/// (5) each `f_e` is a bijection `D_{r(e)} → R_e`.
pub fn validate_system(sys: &BranchingSystem) -> Result<(), Vec<Violation>> {
    let g = &sys.graph;
    let mut out = Vec::new();
    let mut push = |item: u8, message: String, witness: Option<QNum>| out.push(Violation { item, message, witness });

    let edges: Vec<EdgeId> = g.edges().collect();
    for (i, &e) in edges.iter().enumerate() {
        for &d in &edges[i + 1..] {
            let common = sys.ranges[e.0].intersection(&sys.ranges[d.0]);
            if let Some(z) = common.some_point() {
                push(1, format!("R_{} and R_{} overlap", g.edge_name(e), g.edge_name(d)), Some(z.clone()));
            }
        }
    }
    let vertices: Vec<VertexId> = g.vertices().collect();
    for (i, &u) in vertices.iter().enumerate() {
        for &v in &vertices[i + 1..] {
            let common = sys.domains[u.0].intersection(&sys.domains[v.0]);
            if let Some(z) = common.some_point() {
                push(2, format!("D_{} and D_{} overlap", g.vertex_name(u), g.vertex_name(v)), Some(z.clone()));
            }
        }
    }
    for &e in &edges {
        let outside = sys.ranges[e.0].difference(&sys.domains[g.src(e).0]);
        if let Some(z) = outside.some_point() {
            push(
                3,
                format!("R_{} is not contained in D_{}", g.edge_name(e), g.vertex_name(g.src(e))),
                Some(z.clone()),
            );
        }
    }
    for &v in &vertices {
        let outs = g.out_edges(v);
        if outs.is_empty() {
            continue;
        }
        let union = outs.iter().fold(Region::empty(), |acc, e| acc.union(&sys.ranges[e.0]));
        if let Some(z) = union.differing_point(&sys.domains[v.0]) {
            push(4, format!("D_{} differs from the union of R_e over s(e) = {}", g.vertex_name(v), g.vertex_name(v)), Some(z));
        }
    }
    for &e in &edges {
        let f = &sys.maps[e.0];
        let name = g.edge_name(e);
        if let Some(z) = f.domain_overlap() {
            push(5, format!("branches of f_{name} overlap in the domain"), Some(z));
        }
        if let Some(z) = f.image_overlap() {
            push(5, format!("f_{name} is not injective"), Some(z));
        }
        if let Some(z) = f.domain().differing_point(&sys.domains[g.rng(e).0]) {
            push(5, format!("domain of f_{name} differs from D_{}", g.vertex_name(g.rng(e))), Some(z));
        }
        if let Some(z) = f.image().differing_point(&sys.ranges[e.0]) {
            push(5, format!("image of f_{name} differs from R_{name}"), Some(z));
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Resolves the edges of `path` against the system's graph.
pub(crate) fn check_path(sys: &BranchingSystem, path: &Path) -> Result<(), BranchingError> {
    let g = &sys.graph;
    let bad = || BranchingError::NotAPath(format!("{path:?}"));
    if path.src().0 >= g.num_vertices() || path.rng().0 >= g.num_vertices() {
        return Err(bad());
    }
    if path.is_vertex() {
        return (path.src() == path.rng()).then_some(()).ok_or_else(bad);
    }
    let edges = path.edges();
    if edges.iter().any(|e| e.0 >= g.num_edges()) {
        return Err(bad());
    }
    let rebuilt = Path::from_edges(g, edges).map_err(|_| bad())?;
    (rebuilt == *path).then_some(()).ok_or_else(bad)
}
