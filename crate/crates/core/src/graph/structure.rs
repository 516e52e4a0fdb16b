//! Structural predicates: condition (L), connectivity, P-simplicity and the
//! extreme-vertex level decomposition.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::{EdgeId, Graph, Path, UnorientedPath, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionL {
    pub holds: bool,
    /// Simple cycles without an exit.
    pub violators: Vec<Path>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Components {
    /// Connected sets `Zᵢ` of non-isolated vertices, ordered by smallest member.
    pub components: Vec<Vec<VertexId>>,
    /// Isolated vertices `R`.
    pub isolated: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PSimpleWitness {
    SelfLoop(EdgeId),
    TwoPaths(UnorientedPath, UnorientedPath),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PSimple {
    pub holds: bool,
    pub witness: Option<PSimpleWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Level {
    /// Extreme vertices `Xₙ`.
    pub vertices: Vec<VertexId>,
    /// Extreme edges `Yₙ`.
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelDecomposition {
    pub levels: Vec<Level>,
    /// Non-isolated vertices never peeled.
    pub leftover: Vec<VertexId>,
}

impl LevelDecomposition {
    /// Level index (1-based) of a vertex, if peeled.
    pub fn level_of(&self, v: VertexId) -> Option<usize> {
        self.levels.iter().position(|l| l.vertices.contains(&v)).map(|i| i + 1)
    }
}

impl Graph {
    /// Simple cycles (no repeated vertex), each rotated to start at its
    /// smallest vertex. Parallel edges give distinct cycles.
    pub fn simple_cycles(&self) -> Vec<Path> {
        let mut out = Vec::new();
        for start in self.vertices() {
            let mut stack: Vec<(Path, BTreeSet<VertexId>)> = vec![(Path::vertex(start), BTreeSet::from([start]))];
            while let Some((p, seen)) = stack.pop() {
                for &e in self.out_edges(p.rng()).iter().rev() {
                    let r = self.rng(e);
                    if r == start {
                        out.push(p.extend(self, e));
                    } else if r > start && !seen.contains(&r) {
                        let mut s = seen.clone();
                        s.insert(r);
                        stack.push((p.extend(self, e), s));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Condition (L): every closed path has an exit. Checked on simple
    /// cycles, since every closed path runs through one.
    pub fn condition_l(&self) -> ConditionL {
        let violators: Vec<Path> = self
            .simple_cycles()
            .into_iter()
            .filter(|c| !self.has_exit(c))
            .collect();
        ConditionL { holds: violators.is_empty(), violators }
    }

    /// An edge `e` with `s(e) = s(αᵢ)` and `e ≠ αᵢ` for some `i`.
    pub fn has_exit(&self, cycle: &Path) -> bool {
        cycle
            .edges()
            .iter()
            .any(|&ei| self.out_edges(self.src(ei)).iter().any(|&e| e != ei))
    }

    /// Unoriented neighbours: `(edge, other endpoint, forward)` for each edge incident to `v`.
    fn incident(&self, v: VertexId) -> Vec<(EdgeId, VertexId, bool)> {
        let mut out: Vec<_> = self.out_edges(v).iter().map(|&e| (e, self.rng(e), true)).collect();
        out.extend(self.in_edges(v).iter().filter(|&&e| self.src(e) != v).map(|&e| (e, self.src(e), false)));
        out
    }

    pub fn connected_components(&self) -> Components {
        let mut comp: Vec<Option<usize>> = vec![None; self.num_vertices()];
        let mut components = Vec::new();
        let mut isolated = Vec::new();
        for v in self.vertices() {
            if comp[v.0].is_some() {
                continue;
            }
            if self.is_isolated(v) {
                isolated.push(v);
                continue;
            }
            let id = components.len();
            let mut members = vec![v];
            comp[v.0] = Some(id);
            let mut queue = VecDeque::from([v]);
            while let Some(u) = queue.pop_front() {
                for (_, w, _) in self.incident(u) {
                    if comp[w.0].is_none() {
                        comp[w.0] = Some(id);
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort();
            components.push(members);
        }
        Components { components, isolated }
    }

    /// P-simple: no self-loops, and at most one path without orientation
    /// between distinct non-isolated vertices. The second clause is exactly
    /// "the underlying undirected multigraph is a forest"; a violating edge
    /// yields two distinct unoriented paths between its endpoints.
    pub fn is_p_simple(&self) -> PSimple {
        if let Some(e) = self.edges().find(|&e| self.src(e) == self.rng(e)) {
            return PSimple { holds: false, witness: Some(PSimpleWitness::SelfLoop(e)) };
        }
        let mut forest: HashMap<VertexId, Vec<(EdgeId, VertexId, bool)>> = HashMap::new();
        for e in self.edges() {
            let (s, r) = (self.src(e), self.rng(e));
            if let Some(existing) = forest_path(&forest, s, r) {
                let direct = UnorientedPath { vertices: vec![s, r], edges: vec![(e, true)] };
                return PSimple { holds: false, witness: Some(PSimpleWitness::TwoPaths(existing, direct)) };
            }
            forest.entry(s).or_default().push((e, r, true));
            forest.entry(r).or_default().push((e, s, false));
        }
        PSimple { holds: true, witness: None }
    }

    /// Peels all extreme vertices of the current graph at once, level by level.
    pub fn level_decomposition(&self) -> LevelDecomposition {
        let mut alive_v: Vec<bool> = vec![true; self.num_vertices()];
        let mut alive_e: Vec<bool> = vec![true; self.num_edges()];
        let mut levels = Vec::new();
        loop {
            let mut xs = Vec::new();
            let mut ys = BTreeSet::new();
            for v in self.vertices().filter(|v| alive_v[v.0]) {
                let adjacent: BTreeSet<EdgeId> = self
                    .out_edges(v)
                    .iter()
                    .chain(self.in_edges(v))
                    .copied()
                    .filter(|e| alive_e[e.0])
                    .collect();
                if adjacent.len() == 1 {
                    let e = *adjacent.iter().next().unwrap();
                    if self.src(e) != self.rng(e) {
                        xs.push(v);
                        ys.insert(e);
                    }
                }
            }
            if xs.is_empty() {
                break;
            }
            for v in &xs {
                alive_v[v.0] = false;
            }
            for e in &ys {
                alive_e[e.0] = false;
            }
            levels.push(Level { vertices: xs, edges: ys.into_iter().collect() });
        }
        let leftover = self
            .vertices()
            .filter(|v| alive_v[v.0] && !self.is_isolated(*v))
            .collect();
        LevelDecomposition { levels, leftover }
    }

    /// Enumerates every path without orientation from `u` to `v`, straight
    /// from the definition (distinct edges, vertices may repeat). Exponential;
    /// meant for small graphs and cross-checks.
    pub fn unoriented_paths(&self, u: VertexId, v: VertexId) -> Vec<UnorientedPath> {
        let mut out = Vec::new();
        let mut stack = vec![UnorientedPath { vertices: vec![u], edges: vec![] }];
        while let Some(p) = stack.pop() {
            let here = *p.vertices.last().unwrap();
            if here == v && !p.edges.is_empty() {
                out.push(p.clone());
            }
            for (e, w, fwd) in self.incident(here) {
                if p.edges.iter().any(|&(f, _)| f == e) {
                    continue;
                }
                let mut q = p.clone();
                q.vertices.push(w);
                q.edges.push((e, fwd));
                stack.push(q);
            }
        }
        out
    }
}

/// Path between `a` and `b` inside an undirected forest, if connected.
fn forest_path(
    forest: &HashMap<VertexId, Vec<(EdgeId, VertexId, bool)>>,
    a: VertexId,
    b: VertexId,
) -> Option<UnorientedPath> {
    if a == b {
        return None;
    }
    let mut prev: HashMap<VertexId, (VertexId, EdgeId, bool)> = HashMap::new();
    let mut queue = VecDeque::from([a]);
    let mut seen = BTreeSet::from([a]);
    while let Some(u) = queue.pop_front() {
        if u == b {
            break;
        }
        for &(e, w, fwd) in forest.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(w) {
                prev.insert(w, (u, e, fwd));
                queue.push_back(w);
            }
        }
    }
    if !seen.contains(&b) {
        return None;
    }
    let mut vertices = vec![b];
    let mut edges = Vec::new();
    let mut cur = b;
    while cur != a {
        let (p, e, fwd) = prev[&cur];
        edges.push((e, fwd));
        vertices.push(p);
        cur = p;
    }
    vertices.reverse();
    edges.reverse();
    Some(UnorientedPath { vertices, edges })
}
