//! Seeded random fixtures: graphs, elements, Laurent polynomials and matrix
//! representations, for property tests, the acceptance suite and benches.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{defining_relations, multiply, normal_form, Element, Generator, Monomial};
use crate::branching::BranchingSystem;
use crate::equivrep::{Matrix, MatrixRep};
use crate::graph::{EdgeId, Graph, Path, VertexId};
use crate::qfield::{rat, QNum};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sinks {
    Forbidden,
    Allowed,
    AtLeastOne,
}

fn build(n: usize, edges: &[(usize, usize)]) -> Graph {
    let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let names: Vec<(String, String, String)> =
        edges.iter().enumerate().map(|(i, &(s, r))| (format!("e{i}"), vs[s].clone(), vs[r].clone())).collect();
    let refs: Vec<(&str, &str, &str)> = names.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
    Graph::build(&vs, &refs).expect("generated graph is valid")
}

/// A graph on at most `max_vertices` vertices and `max_edges` edges.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize, max_edges: usize, sinks: Sinks) -> Graph {
    assert!(max_vertices >= 1);
    match sinks {
        Sinks::Forbidden => {
            let n = rng.gen_range(1..=max_vertices.min(max_edges));
            let mut edges: Vec<(usize, usize)> = (0..n).map(|s| (s, rng.gen_range(0..n))).collect();
            let m = rng.gen_range(n..=max_edges);
            while edges.len() < m {
                edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
            }
            edges.shuffle(rng);
            build(n, &edges)
        }
        Sinks::Allowed => {
            let n = rng.gen_range(1..=max_vertices);
            let m = rng.gen_range(0..=max_edges);
            let edges: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
            build(n, &edges)
        }
        Sinks::AtLeastOne => {
            let n = rng.gen_range(1..=max_vertices);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            let emitters = rng.gen_range(0..n).min(max_edges);
            let (emit, _) = order.split_at(emitters);
            let mut edges: Vec<(usize, usize)> = emit.iter().map(|&s| (s, rng.gen_range(0..n))).collect();
            if !emit.is_empty() {
                let m = rng.gen_range(edges.len()..=max_edges);
                while edges.len() < m {
                    edges.push((*emit.choose(rng).unwrap(), rng.gen_range(0..n)));
                }
            }
            edges.shuffle(rng);
            build(n, &edges)
        }
    }
}

/// A connected P-simple graph: a random tree with random edge orientations.
pub fn random_p_simple_tree<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize) -> Graph {
    let n = rng.gen_range(1..=max_vertices);
    let edges: Vec<(usize, usize)> = (1..n)
        .map(|i| {
            let p = rng.gen_range(0..i);
            if rng.gen_bool(0.5) {
                (p, i)
            } else {
                (i, p)
            }
        })
        .collect();
    build(n, &edges)
}

/// Nonzero rational `±p/q` with small `p, q`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    let p = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(p, rng.gen_range(1..=3))
}

fn walk<R: Rng + ?Sized>(rng: &mut R, g: &Graph, start: VertexId, len: usize, forward: bool) -> Vec<EdgeId> {
    let mut at = start;
    let mut out = Vec::new();
    for _ in 0..len {
        let next = if forward { g.out_edges(at) } else { g.in_edges(at) };
        let Some(&e) = next.choose(rng) else { break };
        at = if forward { g.rng(e) } else { g.src(e) };
        out.push(e);
    }
    out
}

/// `αβ*` with `|α|, |β| ≤ max_len` (shorter where the walk gets stuck).
pub fn random_monomial<R: Rng + ?Sized>(rng: &mut R, g: &Graph, max_len: usize) -> Monomial {
    let v = VertexId(rng.gen_range(0..g.num_vertices()));
    let la = rng.gen_range(0..=max_len);
    let a = walk(rng, g, v, la, true);
    let real = if a.is_empty() { Path::vertex(v) } else { Path::from_edges(g, &a).unwrap() };
    let lb = rng.gen_range(0..=max_len);
    let mut b = walk(rng, g, real.rng(), lb, false);
    b.reverse();
    let ghost = if b.is_empty() { Path::vertex(real.rng()) } else { Path::from_edges(g, &b).unwrap() };
    Monomial::new(real, ghost).unwrap()
}

pub fn random_element<R: Rng + ?Sized>(rng: &mut R, g: &Graph, max_terms: usize, max_len: usize) -> Element {
    let k = rng.gen_range(1..=max_terms);
    Element::from_terms((0..k).map(|_| (random_monomial(rng, g, max_len), random_rational(rng))))
}

/// An element that is zero in the algebra without being the empty sum:
/// `a·(lhs − rhs)·b` for a defining relation, or `x − normal_form(x)`.
pub fn random_zero_element<R: Rng + ?Sized>(rng: &mut R, g: &Graph, max_len: usize) -> Element {
    if rng.gen_bool(0.5) {
        let rels = defining_relations(g);
        let rel = rels.choose(rng).unwrap().difference(g);
        let a = Element::monomial(random_monomial(rng, g, max_len));
        let b = Element::monomial(random_monomial(rng, g, max_len));
        multiply(&multiply(&a, &rel), &b).scale(&random_rational(rng))
    } else {
        let x = random_element(rng, g, 3, max_len);
        x.clone() - normal_form(g, &x)
    }
}

/// Coefficients `c_n`, `|n| ≤ max_degree`, some of them zero; all zero with
/// probability about 1/3.
pub fn random_laurent<R: Rng + ?Sized>(rng: &mut R, max_degree: i64) -> BTreeMap<i64, BigRational> {
    let all_zero = rng.gen_bool(1.0 / 3.0);
    let mut out = BTreeMap::new();
    for n in -max_degree..=max_degree {
        if rng.gen_bool(0.3) {
            out.insert(n, if all_zero { BigRational::zero() } else { random_rational(rng) });
        }
    }
    out
}

/// `Σ c_n xⁿ` on the loop graph, each `xⁿ` spread over redundant forms
/// `x^{n+k}(x*)^k` so that cancellations are not syntactic.
pub fn laurent_element<R: Rng + ?Sized>(rng: &mut R, g: &Graph, coeffs: &BTreeMap<i64, BigRational>) -> Element {
    let x = g.edges().next().expect("loop graph");
    let v = g.src(x);
    let power = |k: usize| if k == 0 { Path::vertex(v) } else { Path::from_edges(g, &vec![x; k]).unwrap() };
    let form = |n: i64, k: usize| {
        let (a, b) = if n >= 0 { (n as usize + k, k) } else { (k, k + n.unsigned_abs() as usize) };
        Monomial::new(power(a), power(b)).unwrap()
    };
    let mut out = Element::zero();
    for (&n, c) in coeffs {
        let split = random_rational(rng);
        out.add_term(form(n, rng.gen_range(0..=2)), c - &split);
        out.add_term(form(n, rng.gen_range(0..=2)), split);
    }
    out
}

/// A point of `X`: one of the cell points, or a random rational in `X`.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, sys: &BranchingSystem) -> QNum {
    let pts = sys.cell_points();
    if rng.gen_bool(0.5) {
        return pts.choose(rng).expect("nonempty space").clone();
    }
    let space = sys.space();
    let i = space.intervals().choose(rng).expect("nonempty space");
    let t = rat(rng.gen_range(0..1000), 1000);
    let z = QNum::from_rational(i.lo.rational_part().clone()) + i.length().scale(&t);
    let z = QNum::from_rational(z.rational_part().clone());
    if space.contains(&z) {
        z
    } else {
        pts[0].clone()
    }
}

fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (Matrix, Matrix) {
    loop {
        let data: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-2..=2)).collect();
        let m = Matrix::from_i64(n, n, &data);
        if let Some(inv) = m.inverse() {
            return (m, inv);
        }
    }
}

/// A valid representation of an acyclic graph of total dimension at most
/// `max_dim`: sinks get dimension 0–2, emitters the sum over their edges,
/// plus an optional 1-dimensional `V̄`; edges act by random invertible
/// blocks, and everything is conjugated by a random invertible matrix.
pub fn random_acyclic_rep<R: Rng + ?Sized>(rng: &mut R, g: &Graph, max_dim: usize) -> MatrixRep {
    let order = topo_sinks_first(g).expect("acyclic graph");
    let (dims, extra) = loop {
        let mut dims = vec![0usize; g.num_vertices()];
        for &u in &order {
            dims[u.0] = if g.is_sink(u) {
                rng.gen_range(0..=2)
            } else {
                g.out_edges(u).iter().map(|e| dims[g.rng(*e).0]).sum()
            };
        }
        let extra = rng.gen_range(0..=1);
        if dims.iter().sum::<usize>() + extra <= max_dim {
            break (dims, extra);
        }
    };
    let mut offset = vec![0usize; g.num_vertices()];
    let mut n = 0;
    for v in g.vertices() {
        offset[v.0] = n;
        n += dims[v.0];
    }
    n += extra;
    let mut phi = MatrixRep::zero(g, n);
    for v in g.vertices() {
        let mut p = Matrix::zeros(n, n);
        for i in 0..dims[v.0] {
            p[(offset[v.0] + i, offset[v.0] + i)] = BigRational::from_integer(1.into());
        }
        phi.set(Generator::Vertex(v), p);
    }
    for u in g.vertices() {
        let mut sub = offset[u.0];
        for &e in g.out_edges(u) {
            let r = g.rng(e);
            let d = dims[r.0];
            let (a, a_inv) = random_invertible(rng, d);
            let mut fwd = Matrix::zeros(n, n);
            let mut back = Matrix::zeros(n, n);
            for i in 0..d {
                for j in 0..d {
                    fwd[(sub + i, offset[r.0] + j)] = a[(i, j)].clone();
                    back[(offset[r.0] + i, sub + j)] = a_inv[(i, j)].clone();
                }
            }
            phi.set(Generator::Edge(e), fwd);
            phi.set(Generator::Ghost(e), back);
            sub += d;
        }
    }
    let (q, q_inv) = random_invertible(rng, n);
    phi.conjugate(&q, &q_inv)
}

/// Vertices ordered so that every range comes before its source, or `None`
/// when the graph has a cycle.
pub fn topo_sinks_first(g: &Graph) -> Option<Vec<VertexId>> {
    let mut pending: Vec<usize> = g.vertices().map(|v| g.out_edges(v).len()).collect();
    let mut ready: Vec<VertexId> = g.vertices().filter(|&v| pending[v.0] == 0).collect();
    let mut out = Vec::new();
    while let Some(v) = ready.pop() {
        out.push(v);
        for &e in g.in_edges(v) {
            let s = g.src(e);
            pending[s.0] -= 1;
            if pending[s.0] == 0 {
                ready.push(s);
            }
        }
    }
    (out.len() == g.num_vertices()).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::is_zero_syntactic;
    use crate::equivrep::validate_matrix_rep;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn graphs_respect_the_sink_policy() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let g = random_graph(&mut rng, 8, 12, Sinks::Forbidden);
            assert!(g.sinks().is_empty() && g.num_edges() <= 12 && g.num_vertices() <= 8);
            let g = random_graph(&mut rng, 8, 12, Sinks::AtLeastOne);
            assert!(!g.sinks().is_empty() && g.num_edges() <= 12);
            let t = random_p_simple_tree(&mut rng, 6);
            assert!(t.is_p_simple().holds);
            assert_eq!(t.connected_components().components.len().max(1), 1);
        }
    }

    #[test]
    fn zero_elements_are_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let g = random_graph(&mut rng, 4, 6, Sinks::Forbidden);
            assert!(is_zero_syntactic(&g, &random_zero_element(&mut rng, &g, 2)));
        }
    }

    #[test]
    fn acyclic_reps_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let g = random_p_simple_tree(&mut rng, 6);
            let phi = random_acyclic_rep(&mut rng, &g, 8);
            assert!(phi.dim() <= 8);
            assert_eq!(validate_matrix_rep(&g, &phi), Ok(()));
        }
    }
}
