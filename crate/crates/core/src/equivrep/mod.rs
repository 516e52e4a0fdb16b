//! Finite-dimensional representations `Φ : L_ℚ(E) → M_n(ℚ)`: relation
//! checks, the subspaces `V_u = Φ(u)V` and `V_e = Φ(e)Φ(e*)V`, bases with
//! condition (B2B), and the branching system they induce together with the
//! intertwiner `U`.

mod b2b;
mod matrix;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{defining_relations, Generator};
use crate::graph::Graph;
use crate::qfield::{fmt_rational, parse_rational};

pub use b2b::{build_b2b_basis, induced_system_and_intertwiner, verify_b2b, B2BBasis, Induced};
pub use matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("subspace property ({property}) fails: {detail}")]
    Property { property: u8, detail: String },
    #[error("no (B2B) basis found: {0}")]
    NoBasis(String),
    #[error("induced system is invalid: {0}")]
    InvalidSystem(String),
    #[error("intertwiner square fails for {generator} on {part}")]
    Intertwiner { generator: String, part: String },
}

/// An assignment of `n×n` rational matrices to every generator. Generators
/// without an explicit matrix map to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRep {
    dim: usize,
    maps: BTreeMap<Generator, Matrix>,
}

impl MatrixRep {
    /// The zero assignment on all generators of `g`.
    pub fn zero(g: &Graph, dim: usize) -> MatrixRep {
        MatrixRep { dim, maps: Generator::all(g).into_iter().map(|x| (x, Matrix::zeros(dim, dim))).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set(&mut self, gen: Generator, m: Matrix) {
        assert_eq!((m.rows(), m.cols()), (self.dim, self.dim));
        self.maps.insert(gen, m);
    }

    pub fn phi(&self, gen: Generator) -> &Matrix {
        &self.maps[&gen]
    }

    /// `Φ(g₁)…Φ(gₙ)`; the empty word is the identity.
    pub fn word(&self, w: &[Generator]) -> Matrix {
        w.iter().fold(Matrix::identity(self.dim), |acc, &x| &acc * self.phi(x))
    }

    /// Block-diagonal `Φ ⊕ Ψ`.
    pub fn direct_sum(&self, other: &MatrixRep) -> MatrixRep {
        let n = self.dim + other.dim;
        let mut maps = BTreeMap::new();
        for (gen, a) in &self.maps {
            let b = other.phi(*gen);
            let mut m = Matrix::zeros(n, n);
            for i in 0..self.dim {
                for j in 0..self.dim {
                    m[(i, j)] = a[(i, j)].clone();
                }
            }
            for i in 0..other.dim {
                for j in 0..other.dim {
                    m[(self.dim + i, self.dim + j)] = b[(i, j)].clone();
                }
            }
            maps.insert(*gen, m);
        }
        MatrixRep { dim: n, maps }
    }

    /// Conjugate `QΦQ⁻¹`.
    pub fn conjugate(&self, q: &Matrix, q_inv: &Matrix) -> MatrixRep {
        MatrixRep { dim: self.dim, maps: self.maps.iter().map(|(x, m)| (*x, &(q * m) * q_inv)).collect() }
    }

    /// The file form: `dim <n>` then one `map <gen> <n·n rationals>` line per
    /// nonzero generator.
    pub fn to_text(&self, g: &Graph) -> String {
        let mut s = format!("dim {}\n", self.dim);
        for (gen, m) in &self.maps {
            if m.is_zero() {
                continue;
            }
            let vals: Vec<String> = m.data().iter().map(fmt_rational).collect();
            s.push_str(&format!("map {} {}\n", gen.name(g), vals.join(" ")));
        }
        s
    }
}

pub fn parse_matrix_rep(g: &Graph, text: &str) -> Result<MatrixRep, EquivError> {
    let mut rep: Option<MatrixRep> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |message: String| EquivError::Syntax { line, message };
        let body = raw.split('#').next().unwrap().trim();
        let mut toks = body.split_whitespace();
        match toks.next() {
            None => continue,
            Some("dim") => {
                if rep.is_some() {
                    return Err(err("repeated dim".into()));
                }
                let n: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err("dim needs a nonnegative integer".into()))?;
                if toks.next().is_some() {
                    return Err(err("trailing tokens after dim".into()));
                }
                rep = Some(MatrixRep::zero(g, n));
            }
            Some("map") => {
                let r = rep.as_mut().ok_or_else(|| err("map before dim".into()))?;
                let name = toks.next().ok_or_else(|| err("map needs a generator".into()))?;
                let gen = Generator::parse(g, name).map_err(|_| err(format!("unknown generator '{name}'")))?;
                let vals = toks
                    .map(|t| parse_rational(t).map_err(|_| err(format!("bad rational '{t}'"))))
                    .collect::<Result<Vec<_>, _>>()?;
                if vals.len() != r.dim * r.dim {
                    return Err(err(format!("expected {} entries, found {}", r.dim * r.dim, vals.len())));
                }
                r.set(gen, Matrix::from_vec(r.dim, r.dim, vals));
            }
            Some(kw) => return Err(err(format!("unknown keyword '{kw}'"))),
        }
    }
    rep.ok_or(EquivError::Syntax { line: 0, message: "missing dim".into() })
}

/// A failed identity, named by its generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationViolation {
    pub relation: String,
}

impl fmt::Display for RelationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails", self.relation)
    }
}

/// Checks every defining relation (see [`defining_relations`]) as a matrix identity.
pub fn validate_matrix_rep(g: &Graph, phi: &MatrixRep) -> Result<(), Vec<RelationViolation>> {
    let n = phi.dim;
    let mut out = Vec::new();
    for rel in defining_relations(g) {
        let lhs = phi.word(&rel.lhs);
        let rhs = rel.rhs.iter().fold(Matrix::zeros(n, n), |acc, (c, w)| {
            &acc + &phi.word(w).scale(&num_rational::BigRational::from_integer((*c).into()))
        });
        if lhs != rhs {
            out.push(RelationViolation { relation: rel.label });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Outcome of one of the seven subspace properties.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub property: u8,
    pub holds: bool,
    pub detail: String,
}

/// Bases (as matrix columns) of `V_u`, `V_e` and the complement
/// `V̄ = ⋂_u ker Φ(u)`, with the seven property checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceTable {
    pub vertex: Vec<Matrix>,
    pub edge: Vec<Matrix>,
    pub vbar: Matrix,
    pub properties: Vec<PropertyCheck>,
}

fn contains(space: &Matrix, sub: &Matrix) -> bool {
    space.hstack(sub).rank() == space.cols()
}

fn independent(a: &Matrix, b: &Matrix) -> bool {
    a.hstack(b).rank() == a.cols() + b.cols()
}

fn stack(n: usize, parts: &[&Matrix]) -> Matrix {
    parts.iter().fold(Matrix::zeros(n, 0), |acc, m| acc.hstack(m))
}

pub fn extract_subspaces(g: &Graph, phi: &MatrixRep) -> Result<SubspaceTable, EquivError> {
    let n = phi.dim;
    let vertex: Vec<Matrix> = g.vertices().map(|v| phi.phi(Generator::Vertex(v)).column_space()).collect();
    let edge: Vec<Matrix> = g
        .edges()
        .map(|e| (phi.phi(Generator::Edge(e)) * phi.phi(Generator::Ghost(e))).column_space())
        .collect();
    let kernels = g.vertices().fold(Matrix::zeros(0, n), |acc, v| acc.vstack(phi.phi(Generator::Vertex(v))));
    let vbar = kernels.null_space();

    let mut fails: [Vec<String>; 7] = Default::default();
    for e in g.edges() {
        let (en, s) = (g.edge_name(e), g.src(e));
        if !contains(&vertex[s.0], &edge[e.0]) {
            fails[0].push(format!("V_{en} ⊄ V_{}", g.vertex_name(s)));
        }
        for f in g.edges().filter(|f| f.0 > e.0) {
            if !independent(&edge[e.0], &edge[f.0]) {
                fails[1].push(format!("V_{en} ∩ V_{} ≠ 0", g.edge_name(f)));
            }
        }
        let r = g.rng(e);
        let image = phi.phi(Generator::Edge(e)) * &vertex[r.0];
        let back = phi.phi(Generator::Ghost(e)) * &image;
        let forth = &(phi.phi(Generator::Edge(e)) * phi.phi(Generator::Ghost(e))) * &edge[e.0];
        if image.rank() != vertex[r.0].cols() || image.column_space() != edge[e.0] || back != vertex[r.0] || forth != edge[e.0]
        {
            fails[3].push(format!("Φ({en}) is not an isomorphism V_{} → V_{en} inverted by Φ({en}*)", g.vertex_name(r)));
        }
    }
    for u in g.vertices() {
        for w in g.vertices().filter(|w| w.0 > u.0) {
            if !independent(&vertex[u.0], &vertex[w.0]) {
                fails[2].push(format!("V_{} ∩ V_{} ≠ 0", g.vertex_name(u), g.vertex_name(w)));
            }
        }
        let outs = g.out_edges(u);
        if !outs.is_empty() {
            let parts: Vec<&Matrix> = outs.iter().map(|e| &edge[e.0]).collect();
            let sum = stack(n, &parts);
            let dims: usize = parts.iter().map(|m| m.cols()).sum();
            if sum.rank() != dims || dims != vertex[u.0].cols() || !contains(&vertex[u.0], &sum) {
                fails[4].push(format!("V_{} ≠ ⊕ V_e over s(e) = {}", g.vertex_name(u), g.vertex_name(u)));
            }
        }
    }
    let mut all: Vec<&Matrix> = vertex.iter().collect();
    all.push(&vbar);
    let total = stack(n, &all);
    if total.cols() != n || total.rank() != n {
        fails[6].push("V ≠ (⊕ V_u) ⊕ V̄".into());
    }

    let properties: Vec<PropertyCheck> = fails
        .iter()
        .enumerate()
        .map(|(i, f)| PropertyCheck {
            property: i as u8 + 1,
            holds: f.is_empty(),
            detail: match (i, f.first()) {
                (5, _) => "vacuous: no infinite emitters".into(),
                (_, None) => "ok".into(),
                (_, Some(d)) => d.clone(),
            },
        })
        .collect();
    if let Some(bad) = properties.iter().find(|p| !p.holds) {
        return Err(EquivError::Property { property: bad.property, detail: bad.detail.clone() });
    }
    Ok(SubspaceTable { vertex, edge, vbar, properties })
}

/// Dimension summary `dim V_u` per vertex, for reports.
pub fn describe_subspaces(g: &Graph, t: &SubspaceTable) -> String {
    let mut s = String::new();
    for v in g.vertices() {
        s.push_str(&format!("V_{} dim {}\n", g.vertex_name(v), t.vertex[v.0].cols()));
    }
    for e in g.edges() {
        s.push_str(&format!("V_{} dim {}\n", g.edge_name(e), t.edge[e.0].cols()));
    }
    s.push_str(&format!("Vbar dim {}\n", t.vbar.cols()));
    s
}

pub(crate) fn fmt_vector(v: &[num_rational::BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("({})", parts.join(", "))
}

pub(crate) fn is_zero_vector(v: &[num_rational::BigRational]) -> bool {
    v.iter().all(Zero::is_zero)
}
