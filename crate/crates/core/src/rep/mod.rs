//! The representation `π` induced by a branching system, acting on finitely
//! supported functions `X → ℚ`:
//!
//! * `S_e δ_z = [z ∈ D_{r(e)}] δ_{f_e(z)}`
//! * `S_e* δ_z = [z ∈ R_e] δ_{f_e⁻¹(z)}`
//! * `P_v δ_z = [z ∈ D_v] δ_z`
//!
//! and the exact semantic zero test on a certified rotation system.

mod semantic;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{defining_relations, Element, Generator, Monomial};
use crate::branching::BranchingSystem;
use crate::graph::Path;
use crate::par::{self, Exec};
use crate::qfield::{fmt_rational, int, QNum};

pub use semantic::{monomial_actions, zero_test_semantic, BranchAction, SemanticOracle, ZeroVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("generator not in graph")]
    UnknownGenerator,
    #[error("semantic test needs a rotation system, got {0}")]
    NotRotation(String),
    #[error("graph has a sink: {0}")]
    HasSink(String),
    #[error("fixed-point hypothesis not certified at vertex {vertex}: blocked by {blocking}")]
    HypothesisFailed { vertex: String, blocking: String },
}

/// A function `X → ℚ` with finite support; zero values are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FinSupp {
    values: BTreeMap<QNum, BigRational>,
}

impl FinSupp {
    pub fn zero() -> FinSupp {
        FinSupp::default()
    }

    pub fn delta(z: QNum) -> FinSupp {
        let mut f = FinSupp::zero();
        f.add(z, BigRational::one());
        f
    }

    pub fn add(&mut self, z: QNum, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.values.entry(z.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.values.remove(&z);
        }
    }

    pub fn get(&self, z: &QNum) -> BigRational {
        self.values.get(z).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&QNum, &BigRational)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, k: &BigRational) -> FinSupp {
        let mut out = FinSupp::zero();
        for (z, c) in &self.values {
            out.add(z.clone(), c * k);
        }
        out
    }

    pub fn plus(&self, other: &FinSupp) -> FinSupp {
        let mut out = self.clone();
        for (z, c) in &other.values {
            out.add(z.clone(), c.clone());
        }
        out
    }

    /// Pushes every point through `f`, dropping points where it is undefined.
    fn map_points(&self, f: impl Fn(&QNum) -> Option<QNum>) -> FinSupp {
        let mut out = FinSupp::zero();
        for (z, c) in &self.values {
            if let Some(w) = f(z) {
                out.add(w, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for FinSupp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return f.write_str("0");
        }
        for (i, (z, c)) in self.values.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{} ", fmt_rational(&a))?;
            }
            write!(f, "δ[{z}]")?;
        }
        Ok(())
    }
}

impl Serialize for FinSupp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.values.len()))?;
        for (z, c) in &self.values {
            seq.serialize_element(&(z.to_string(), fmt_rational(c)))?;
        }
        seq.end()
    }
}

fn check_generator(sys: &BranchingSystem, gen: Generator) -> Result<(), RepError> {
    let g = sys.graph();
    let ok = match gen {
        Generator::Vertex(v) => v.0 < g.num_vertices(),
        Generator::Edge(e) | Generator::Ghost(e) => e.0 < g.num_edges(),
    };
    ok.then_some(()).ok_or(RepError::UnknownGenerator)
}

fn gen_point(sys: &BranchingSystem, gen: Generator, z: &QNum) -> Option<QNum> {
    match gen {
        Generator::Vertex(v) => sys.domain_region(v).contains(z).then(|| z.clone()),
        Generator::Edge(e) => sys.map(e).apply(z),
        Generator::Ghost(e) => sys.inverse_map(e).apply(z),
    }
}

/// `P_v`, `S_e` or `S_e*` applied to `φ`.
pub fn apply_generator(sys: &BranchingSystem, gen: Generator, phi: &FinSupp) -> Result<FinSupp, RepError> {
    check_generator(sys, gen)?;
    Ok(phi.map_points(|z| gen_point(sys, gen, z)))
}

/// Applies a word `g₁…gₙ` (so `gₙ` acts first).
pub fn apply_word(sys: &BranchingSystem, word: &[Generator], phi: &FinSupp) -> Result<FinSupp, RepError> {
    word.iter().rev().try_fold(phi.clone(), |acc, &gen| apply_generator(sys, gen, &acc))
}

/// `f_α ∘ f_β⁻¹ (z)` for `αβ*`, if `z` lies in its domain.
pub fn monomial_point(sys: &BranchingSystem, m: &Monomial, z: &QNum) -> Option<QNum> {
    let ghost: &Path = m.ghost();
    let mut y = if ghost.is_vertex() {
        sys.domain_region(ghost.src()).contains(z).then(|| z.clone())?
    } else {
        z.clone()
    };
    for &e in ghost.edges() {
        y = sys.inverse_map(e).apply(&y)?;
    }
    for &e in m.real().edges().iter().rev() {
        y = sys.map(e).apply(&y)?;
    }
    Some(y)
}

/// `π(x)φ`, with each monomial `αβ*` acting as `S_α S_β*`.
pub fn apply_element(sys: &BranchingSystem, x: &Element, phi: &FinSupp) -> FinSupp {
    let mut out = FinSupp::zero();
    for (m, c) in x.terms() {
        for (z, v) in phi.iter() {
            if let Some(w) = monomial_point(sys, m, z) {
                out.add(w, c * v);
            }
        }
    }
    out
}

/// A defining identity that failed on `δ_z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub relation: String,
    pub z: QNum,
    pub lhs: String,
    pub rhs: String,
}

/// Checks every defining relation as an operator identity on `δ_z`, for one
/// left end and one interior point of every cell of `X`. Returns the number
/// of identities checked.
pub fn relation_suite(sys: &BranchingSystem, exec: Exec) -> Result<usize, Vec<RelationFailure>> {
    let rels = defining_relations(sys.graph());
    let points = sys.cell_points();
    let per_point = par::map(exec, &points, |z| {
        let delta = FinSupp::delta(z.clone());
        let mut fails = Vec::new();
        for rel in &rels {
            let lhs = apply_word(sys, &rel.lhs, &delta).expect("generators of the graph");
            let rhs = rel.rhs.iter().fold(FinSupp::zero(), |acc, (c, w)| {
                acc.plus(&apply_word(sys, w, &delta).expect("generators of the graph").scale(&int(*c)))
            });
            if lhs != rhs {
                fails.push(RelationFailure { relation: rel.label.clone(), z: z.clone(), lhs: lhs.to_string(), rhs: rhs.to_string() });
            }
        }
        fails
    });
    let fails: Vec<RelationFailure> = per_point.into_iter().flatten().collect();
    if fails.is_empty() {
        Ok(rels.len() * points.len())
    } else {
        Err(fails)
    }
}
