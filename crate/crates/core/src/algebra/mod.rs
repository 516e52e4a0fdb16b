//! Elements of the Leavitt path algebra `L_ℚ(E)` as finite ℚ-combinations of
//! monomials `αβ*`, with exact products and a canonical normal form.

mod normal;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, Item, Path, VertexId};
use crate::qfield::fmt_rational;

pub use normal::{
    defining_relations, designated_edge, find_separating_path, is_reducible, is_zero_syntactic, normal_form, Relation,
};
pub use parse::parse_element;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unknown id '{0}'")]
    UnknownId(String),
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("range mismatch: {0}")]
    RangeMismatch(String),
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
}

/// A generator of the algebra: `v`, `e` or `e*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Vertex(VertexId),
    Edge(EdgeId),
    Ghost(EdgeId),
}

impl Generator {
    /// Parses `v`, `e` or `e*`.
    pub fn parse(g: &Graph, s: &str) -> Result<Generator, AlgebraError> {
        let (name, ghost) = match s.strip_suffix('*') {
            Some(n) if !n.is_empty() => (n, true),
            _ => (s, false),
        };
        match (g.lookup(name), ghost) {
            (Some(Item::Vertex(v)), false) => Ok(Generator::Vertex(v)),
            (Some(Item::Edge(e)), false) => Ok(Generator::Edge(e)),
            (Some(Item::Edge(e)), true) => Ok(Generator::Ghost(e)),
            _ => Err(AlgebraError::UnknownId(s.to_string())),
        }
    }

    /// Every generator of `g`: vertices, edges, then ghost edges.
    pub fn all(g: &Graph) -> Vec<Generator> {
        g.vertices()
            .map(Generator::Vertex)
            .chain(g.edges().map(Generator::Edge))
            .chain(g.edges().map(Generator::Ghost))
            .collect()
    }

    pub fn monomial(self, g: &Graph) -> Monomial {
        match self {
            Generator::Vertex(v) => Monomial::vertex(v),
            Generator::Edge(e) => Monomial::new(Path::edge(g, e), Path::vertex(g.rng(e))).unwrap(),
            Generator::Ghost(e) => Monomial::new(Path::vertex(g.rng(e)), Path::edge(g, e)).unwrap(),
        }
    }

    pub fn element(self, g: &Graph) -> Element {
        Element::monomial(self.monomial(g))
    }

    pub fn name(self, g: &Graph) -> String {
        match self {
            Generator::Vertex(v) => g.vertex_name(v).to_string(),
            Generator::Edge(e) => g.edge_name(e).to_string(),
            Generator::Ghost(e) => format!("{}*", g.edge_name(e)),
        }
    }
}

/// `αβ*` with `r(α) = r(β)`; a vertex is `α = β = v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    real: Path,
    ghost: Path,
}

impl Monomial {
    /// `None` when `r(α) ≠ r(β)`.
    pub fn new(real: Path, ghost: Path) -> Option<Monomial> {
        (real.rng() == ghost.rng()).then_some(Monomial { real, ghost })
    }

    pub fn vertex(v: VertexId) -> Monomial {
        Monomial { real: Path::vertex(v), ghost: Path::vertex(v) }
    }

    /// `α` as the monomial `α r(α)*`.
    pub fn path(p: Path) -> Monomial {
        let ghost = Path::vertex(p.rng());
        Monomial { real: p, ghost }
    }

    pub fn real(&self) -> &Path {
        &self.real
    }

    pub fn ghost(&self) -> &Path {
        &self.ghost
    }

    pub fn degree(&self) -> usize {
        self.real.len() + self.ghost.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.real.is_vertex() && self.ghost.is_vertex()
    }

    pub fn star(&self) -> Monomial {
        Monomial { real: self.ghost.clone(), ghost: self.real.clone() }
    }

    /// `(αβ*)(γδ*)`: `(αγ')δ*` if `γ = βγ'`, `α(δβ')*` if `β = γβ'`, else 0.
    pub fn mul(&self, other: &Monomial) -> Option<Monomial> {
        if let Some(rest) = other.real.strip_prefix(&self.ghost) {
            let real = self.real.concat(&rest).expect("r(α) = s(γ')");
            return Some(Monomial { real, ghost: other.ghost.clone() });
        }
        if let Some(rest) = self.ghost.strip_prefix(&other.real) {
            let ghost = other.ghost.concat(&rest).expect("r(δ) = s(β')");
            return Some(Monomial { real: self.real.clone(), ghost });
        }
        None
    }

    /// Factor form: real edges, then the reversed ghost edges each starred.
    pub fn display<'a>(&'a self, g: &'a Graph) -> MonomialDisplay<'a> {
        MonomialDisplay { m: self, g }
    }

    fn key(&self) -> (usize, &[EdgeId], &[EdgeId], VertexId, VertexId) {
        (self.degree(), self.real.edges(), self.ghost.edges(), self.real.src(), self.ghost.src())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a Monomial,
    g: &'a Graph,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (m, g) = (self.m, self.g);
        if m.is_vertex() {
            return f.write_str(g.vertex_name(m.real.src()));
        }
        let factors = m
            .real
            .edges()
            .iter()
            .map(|&e| g.edge_name(e).to_string())
            .chain(m.ghost.edges().iter().rev().map(|&e| format!("{}*", g.edge_name(e))));
        f.write_str(&factors.collect::<Vec<_>>().join("."))
    }
}

/// Finite ℚ-combination of monomials; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Element {
    pub fn zero() -> Element {
        Element::default()
    }

    pub fn monomial(m: Monomial) -> Element {
        Element::term(BigRational::one(), m)
    }

    pub fn term(c: BigRational, m: Monomial) -> Element {
        let mut x = Element::zero();
        x.add_term(m, c);
        x
    }

    /// `Σ_v v`, the unit of `L_ℚ(E)` for finite graphs.
    pub fn unit(g: &Graph) -> Element {
        g.vertices().map(|v| Element::monomial(Monomial::vertex(v))).fold(Element::zero(), |a, b| a + b)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(it: I) -> Element {
        let mut x = Element::zero();
        for (m, c) in it {
            x.add_term(m, c);
        }
        x
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True for the empty sum; see [`is_zero_syntactic`] for the algebra's zero.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: &BigRational) -> Element {
        Element::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * k)))
    }

    pub fn star(&self) -> Element {
        Element::from_terms(self.terms.iter().map(|(m, c)| (m.star(), c.clone())))
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> ElementDisplay<'a> {
        ElementDisplay { x: self, g }
    }
}

/// Bilinear extension of the monomial product; the result is not normalized.
pub fn multiply(x: &Element, y: &Element) -> Element {
    let mut out = Element::zero();
    for (m1, c1) in &x.terms {
        for (m2, c2) in &y.terms {
            if let Some(m) = m1.mul(m2) {
                out.add_term(m, c1 * c2);
            }
        }
    }
    out
}

pub fn star(x: &Element) -> Element {
    x.star()
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, rhs: Element) -> Element {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        self + (-rhs)
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

pub struct ElementDisplay<'a> {
    x: &'a Element,
    g: &'a Graph,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.x.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (i, c.is_negative()) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                _ => write!(f, " {sign} ")?,
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{} ", fmt_rational(&a))?;
            }
            write!(f, "{}", m.display(self.g))?;
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    pub(crate) fn el(g: &Graph, s: &str) -> Element {
        parse_element(g, s).unwrap()
    }

    #[test]
    fn monomial_products() {
        let g = loop_graph();
        assert_eq!(multiply(&el(&g, "x*"), &el(&g, "x")), el(&g, "*"));
        let r = rose2();
        assert_eq!(multiply(&el(&r, "a.b*"), &el(&r, "b.a*")), el(&r, "a.a*"));
        assert!(multiply(&el(&r, "a*"), &el(&r, "b")).is_empty());
        // β a proper prefix of γ and vice versa
        assert_eq!(multiply(&el(&r, "a.b*"), &el(&r, "b.a")), el(&r, "a.a"));
        assert_eq!(multiply(&el(&r, "a.b*.a*"), &el(&r, "a")), el(&r, "a.b*"));
    }

    #[test]
    fn vertices_are_orthogonal_idempotents() {
        let g = path3();
        let v1 = el(&g, "v1");
        let v2 = el(&g, "v2");
        assert_eq!(multiply(&v1, &v1), v1);
        assert!(multiply(&v1, &v2).is_empty());
        assert_eq!(multiply(&v1, &el(&g, "e1")), el(&g, "e1"));
        assert!(multiply(&v2, &el(&g, "e1")).is_empty());
        assert_eq!(multiply(&el(&g, "e1"), &v2), el(&g, "e1"));
    }

    #[test]
    fn star_swaps_parts() {
        let r = rose2();
        assert_eq!(star(&el(&r, "a.b*")), el(&r, "b.a*"));
        assert_eq!(star(&el(&r, "v")), el(&r, "v"));
        let x = el(&r, "2 a.a.b* - 1/3 b");
        assert_eq!(star(&star(&x)), x);
    }

    #[test]
    fn display_round_trips() {
        let r = rose2();
        for s in ["0", "v", "2 a.b* - 3 v", "-a.a.b*.a* + 1/2 b*"] {
            let x = el(&r, s);
            assert_eq!(el(&r, &x.display(&r).to_string()), x, "{s}");
        }
        assert_eq!(el(&r, "2 a.b* - 3 v").display(&r).to_string(), "-3 v + 2 a.b*");
    }
}
