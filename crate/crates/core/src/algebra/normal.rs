//! Canonical form by collapsing `(α·d)(β·d)*` at the designated edge `d(v)`
//! (the last-declared edge out of `v`), plus the zero test built on it.

use num_rational::BigRational;
use num_traits::One;

use super::{multiply, Element, Generator, Monomial};
use crate::graph::{EdgeId, Graph, Path, VertexId};
use crate::qfield::int;

/// `d(v)`: the last-declared edge with source `v`.
pub fn designated_edge(g: &Graph, v: VertexId) -> Option<EdgeId> {
    g.out_edges(v).last().copied()
}

/// Both parts end in the same designated edge.
pub fn is_reducible(g: &Graph, m: &Monomial) -> bool {
    match (m.real().last_edge(), m.ghost().last_edge()) {
        (Some(a), Some(b)) => a == b && designated_edge(g, g.src(a)) == Some(a),
        _ => false,
    }
}

/// `(α·d)(β·d)* → αβ* − Σ_{e ≠ d} (αe)(βe)*`, with `s(e) = s(d)`.
fn collapse(g: &Graph, m: &Monomial) -> Vec<(Monomial, BigRational)> {
    let d = m.real().last_edge().unwrap();
    let alpha = m.real().without_last(g);
    let beta = m.ghost().without_last(g);
    let mut out = vec![(Monomial::new(alpha.clone(), beta.clone()).unwrap(), BigRational::one())];
    for &e in g.out_edges(g.src(d)) {
        if e != d {
            let m2 = Monomial::new(alpha.extend(g, e), beta.extend(g, e)).unwrap();
            out.push((m2, int(-1)));
        }
    }
    out
}

/// Rewrites to the fixpoint of the collapse rule. Every step removes one
/// designated tail and lowers degree or replaces it by non-designated tails,
/// so the loop terminates.
pub fn normal_form(g: &Graph, x: &Element) -> Element {
    let mut out = x.clone();
    let mut pending: Vec<Monomial> = out.terms.keys().filter(|m| is_reducible(g, m)).cloned().collect();
    while let Some(m) = pending.pop() {
        let Some(c) = out.terms.remove(&m) else { continue };
        for (m2, k) in collapse(g, &m) {
            if is_reducible(g, &m2) {
                pending.push(m2.clone());
            }
            out.add_term(m2, k * &c);
        }
    }
    out
}

pub fn is_zero_syntactic(g: &Graph, x: &Element) -> bool {
    normal_form(g, x).is_empty()
}

/// A path `p` of length `maxlen` with `x·p ≠ 0`, by depth-first right
/// multiplication in edge declaration order. With `maxlen = 0` the first
/// vertex `u` with `x·u ≠ 0`. `None` when `x = 0` or no such path exists.
pub fn find_separating_path(g: &Graph, x: &Element, maxlen: usize) -> Option<Path> {
    let x = normal_form(g, x);
    if x.is_empty() {
        return None;
    }
    if maxlen == 0 {
        return g
            .vertices()
            .find(|&u| !is_zero_syntactic(g, &multiply(&x, &Generator::Vertex(u).element(g))))
            .map(Path::vertex);
    }
    fn dfs(g: &Graph, y: &Element, path: Option<Path>, left: usize) -> Option<Path> {
        if left == 0 {
            return path;
        }
        let next: Vec<EdgeId> = match &path {
            None => g.edges().collect(),
            Some(p) => g.out_edges(p.rng()).to_vec(),
        };
        for e in next {
            let y2 = normal_form(g, &multiply(y, &Generator::Edge(e).element(g)));
            if y2.is_empty() {
                continue;
            }
            let p2 = match &path {
                None => Path::edge(g, e),
                Some(p) => p.extend(g, e),
            };
            if let Some(found) = dfs(g, &y2, Some(p2), left - 1) {
                return Some(found);
            }
        }
        None
    }
    dfs(g, &x, None, maxlen)
}

/// One defining identity `lhs = Σ cᵢ·wordᵢ`, each side a word in generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    pub lhs: Vec<Generator>,
    pub rhs: Vec<(i64, Vec<Generator>)>,
}

impl Relation {
    fn word(g: &Graph, w: &[Generator]) -> Element {
        w.iter().fold(Element::unit(g), |acc, x| multiply(&acc, &x.element(g)))
    }

    /// `lhs − rhs` as an element.
    pub fn difference(&self, g: &Graph) -> Element {
        self.rhs
            .iter()
            .fold(Relation::word(g, &self.lhs), |acc, (c, w)| acc - Relation::word(g, w).scale(&int(*c)))
    }
}

/// The defining identities of `L(E)`: orthogonal vertex idempotents,
/// `s(e)e = e = e r(e)`, `r(e)e* = e* = e* s(e)`, `e*f = δ_{e,f} r(e)` and
/// `v = Σ_{s(e)=v} ee*` at every emitter.
pub fn defining_relations(g: &Graph) -> Vec<Relation> {
    use Generator::*;
    let mut out = Vec::new();
    let name = |x: &Generator| x.name(g);
    let mut rel = |lhs: Vec<Generator>, rhs: Vec<(i64, Vec<Generator>)>| {
        let l = lhs.iter().map(name).collect::<Vec<_>>().join(".");
        let r = if rhs.is_empty() {
            "0".to_string()
        } else {
            rhs.iter().map(|(_, w)| w.iter().map(name).collect::<Vec<_>>().join(".")).collect::<Vec<_>>().join(" + ")
        };
        out.push(Relation { label: format!("{l} = {r}"), lhs, rhs });
    };
    for v in g.vertices() {
        for w in g.vertices() {
            let rhs = if v == w { vec![(1, vec![Vertex(v)])] } else { vec![] };
            rel(vec![Vertex(v), Vertex(w)], rhs);
        }
    }
    for e in g.edges() {
        rel(vec![Vertex(g.src(e)), Edge(e)], vec![(1, vec![Edge(e)])]);
        rel(vec![Edge(e), Vertex(g.rng(e))], vec![(1, vec![Edge(e)])]);
        rel(vec![Vertex(g.rng(e)), Ghost(e)], vec![(1, vec![Ghost(e)])]);
        rel(vec![Ghost(e), Vertex(g.src(e))], vec![(1, vec![Ghost(e)])]);
    }
    for e in g.edges() {
        for f in g.edges() {
            let rhs = if e == f { vec![(1, vec![Vertex(g.rng(e))])] } else { vec![] };
            rel(vec![Ghost(e), Edge(f)], rhs);
        }
    }
    for v in g.vertices() {
        let outs = g.out_edges(v);
        if !outs.is_empty() {
            rel(vec![Vertex(v)], outs.iter().map(|&e| (1, vec![Edge(e), Ghost(e)])).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::el;
    use crate::graph::fixtures::*;

    #[test]
    fn collapse_examples() {
        let g = loop_graph();
        assert_eq!(normal_form(&g, &el(&g, "x.x*")), el(&g, "*"));
        let r = rose2();
        assert!(is_zero_syntactic(&r, &el(&r, "a.a* + b.b* - v")));
        let e = edge();
        assert!(is_zero_syntactic(&e, &el(&e, "e.e* - v1")));
        assert!(is_zero_syntactic(&g, &el(&g, "x.x* - *")));
        assert!(!is_zero_syntactic(&g, &el(&g, "x - *")));
        assert!(is_zero_syntactic(&g, &el(&g, "0")));
        // b.b* is the designated collapse; a.a* stays
        assert_eq!(normal_form(&r, &el(&r, "a.b.b*.a*")), el(&r, "a.a* - a.a.a*.a*"));
    }

    #[test]
    fn normal_form_is_idempotent_and_irreducible() {
        let r = rose2();
        let x = el(&r, "b.b.b*.b* + 2 a.b.b*.b* - b.a.b*");
        let n = normal_form(&r, &x);
        assert_eq!(normal_form(&r, &n), n);
        assert!(n.terms().keys().all(|m| !is_reducible(&r, m)));
    }

    #[test]
    fn separating_paths() {
        let g = loop_graph();
        assert_eq!(find_separating_path(&g, &el(&g, "x.x* - *"), 2), None);
        let p = find_separating_path(&g, &el(&g, "x - *"), 2).unwrap();
        assert_eq!(p, Path::from_names(&g, &["x", "x"]).unwrap());
        let r = rose2();
        let p = find_separating_path(&r, &el(&r, "a.b*"), 1).unwrap();
        assert_eq!(p, Path::from_names(&r, &["b"]).unwrap());
        assert_eq!(find_separating_path(&r, &el(&r, "a.b*"), 0), Some(Path::vertex(VertexId(0))));
    }

    #[test]
    fn relations_normalize_to_zero() {
        for g in [loop_graph(), rose2(), path3(), edge()] {
            for rel in defining_relations(&g) {
                assert!(is_zero_syntactic(&g, &rel.difference(&g)), "{}", rel.label);
            }
        }
    }
}
