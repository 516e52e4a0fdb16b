//! Path maps `f_α = f_{e₁} ∘ … ∘ f_{eₙ}` and the fixed-point hypothesis that
//! makes the induced representation faithful: for closed paths `α¹,…,αⁿ` at
//! `v` there is `z₀ ∈ D_v` with `f_{αⁱ}(z₀) ≠ z₀` for every `i`.

use serde::Serialize;

use super::map::PiecewiseMap;
use super::region::Region;
use super::{check_path, BranchingError, BranchingSystem};
use crate::graph::{EdgeId, Path, VertexId};
use crate::par::{self, Exec};
use crate::qfield::{int, QNum};

/// Exact composite `f_α`, with domain `D_{r(α)}`. A vertex path gives the
/// identity on `D_v`.
pub fn compose_path_map(sys: &BranchingSystem, path: &Path) -> Result<PiecewiseMap, BranchingError> {
    check_path(sys, path)?;
    let Some((&last, rest)) = path.edges().split_last() else {
        return Ok(PiecewiseMap::identity(sys.domain_region(path.src())));
    };
    Ok(rest
        .iter()
        .rev()
        .fold(sys.map(last).clone(), |acc, &e| sys.map(e).compose(&acc)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypothesisOptions {
    /// Candidate points tried before giving up.
    pub max_attempts: usize,
    pub exec: Exec,
}

impl Default for HypothesisOptions {
    fn default() -> Self {
        HypothesisOptions { max_attempts: 64, exec: Exec::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum HypothesisOutcome {
    /// `witness` is rational and moved by every enumerated closed path.
    /// `irrational_images` records that every image `f_α(witness)` has a
    /// nonzero √2-coefficient, which rules out fixed points at every length.
    Ok { witness: QNum, irrational_images: bool },
    /// No candidate worked; the closed paths fixing the best candidate.
    Fail { blocking: Vec<Path> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub vertex: VertexId,
    pub maxlen: usize,
    /// Closed paths enumerated at `vertex` with length ≤ `maxlen`.
    pub closed_paths: usize,
    pub candidates_tried: usize,
    pub outcome: HypothesisOutcome,
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        matches!(self.outcome, HypothesisOutcome::Ok { .. })
    }

    pub fn witness(&self) -> Option<&QNum> {
        match &self.outcome {
            HypothesisOutcome::Ok { witness, .. } => Some(witness),
            HypothesisOutcome::Fail { .. } => None,
        }
    }
}

pub fn check_faithfulness_hypothesis(sys: &BranchingSystem, v: VertexId, maxlen: usize) -> HypothesisReport {
    check_faithfulness_hypothesis_with(sys, v, maxlen, HypothesisOptions::default())
}

/// Rational candidates in `D_v`: 0, rational parts of the endpoints, then
/// interior points of successively finer subdivisions.
fn candidates(dv: &Region, max: usize) -> Vec<QNum> {
    let mut raw = vec![QNum::zero()];
    for i in dv.intervals() {
        raw.push(QNum::from_rational(i.lo.rational_part().clone()));
        raw.push(QNum::from_rational(i.hi.rational_part().clone()));
    }
    let mut parts = 1i64;
    while raw.len() < 4 * max && parts <= 1 << 12 {
        for i in dv.intervals() {
            let step = i.length().scale(&crate::qfield::rat(1, parts));
            for k in 0..parts {
                let lo = &i.lo + step.scale(&int(k));
                let hi = &lo + &step;
                raw.push(QNum::from_rational(QNum::rational_strictly_between(&lo, &hi)));
            }
        }
        parts *= 2;
    }
    let mut out: Vec<QNum> = Vec::new();
    for z in raw {
        if dv.contains(&z) && !out.contains(&z) {
            out.push(z);
            if out.len() == max {
                break;
            }
        }
    }
    out
}

/// Walks closed paths at `v` backwards from their last edge, carrying
/// `f_{eₖ} ∘ … ∘ f_{eₙ}(z)`, and calls `visit(edges_reversed, f_α(z))` for
/// every closed path `α` of length ≤ `maxlen`.
fn walk_closed(
    sys: &BranchingSystem,
    v: VertexId,
    first: EdgeId,
    z: &QNum,
    maxlen: usize,
    visit: &mut dyn FnMut(&[EdgeId], &QNum),
) {
    let g = sys.graph();
    let Some(y) = sys.map(first).apply(z) else { return };
    let mut stack: Vec<(Vec<EdgeId>, QNum)> = vec![(vec![first], y)];
    while let Some((rev, y)) = stack.pop() {
        let here = g.src(*rev.last().unwrap());
        if here == v {
            visit(&rev, &y);
        }
        if rev.len() == maxlen {
            continue;
        }
        for &e in g.in_edges(here) {
            if let Some(y2) = sys.map(e).apply(&y) {
                let mut r2 = rev.clone();
                r2.push(e);
                stack.push((r2, y2));
            }
        }
    }
}

fn path_from_reversed(sys: &BranchingSystem, rev: &[EdgeId]) -> Path {
    let edges: Vec<EdgeId> = rev.iter().rev().copied().collect();
    Path::from_edges(sys.graph(), &edges).expect("walk yields paths")
}

/// Every closed path `α` at `v` with `|α| ≤ maxlen`, paired with `f_α(z)`.
/// Empty when `z ∉ D_v`.
pub fn closed_path_images(sys: &BranchingSystem, v: VertexId, z: &QNum, maxlen: usize) -> Vec<(Path, QNum)> {
    let mut out = Vec::new();
    if !sys.domain_region(v).contains(z) {
        return out;
    }
    for &e in sys.graph().in_edges(v) {
        walk_closed(sys, v, e, z, maxlen, &mut |rev, y| out.push((path_from_reversed(sys, rev), y.clone())));
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.edges().cmp(b.0.edges())));
    out
}

struct Tally {
    count: usize,
    fixers: Vec<Vec<EdgeId>>,
    all_irrational: bool,
}

fn tally(sys: &BranchingSystem, v: VertexId, z: &QNum, maxlen: usize, exec: Exec) -> Tally {
    let firsts = sys.graph().in_edges(v);
    let parts = par::map(exec, firsts, |&e| {
        let mut t = Tally { count: 0, fixers: Vec::new(), all_irrational: true };
        walk_closed(sys, v, e, z, maxlen, &mut |rev, y| {
            t.count += 1;
            if y == z {
                t.fixers.push(rev.to_vec());
            }
            if y.is_rational() {
                t.all_irrational = false;
            }
        });
        t
    });
    parts.into_iter().fold(Tally { count: 0, fixers: Vec::new(), all_irrational: true }, |mut acc, t| {
        acc.count += t.count;
        acc.fixers.extend(t.fixers);
        acc.all_irrational &= t.all_irrational;
        acc
    })
}

/// Searches for a rational `z₀ ∈ D_v` moved by every closed path at `v` of
/// length ≤ `maxlen`. The result certifies the hypothesis only for those
/// paths, unless `irrational_images` is set on a rational witness.
pub fn check_faithfulness_hypothesis_with(
    sys: &BranchingSystem,
    v: VertexId,
    maxlen: usize,
    opts: HypothesisOptions,
) -> HypothesisReport {
    let cands = candidates(sys.domain_region(v), opts.max_attempts);
    let mut best: Option<Vec<Vec<EdgeId>>> = None;
    let mut closed = 0;
    for (tried, z) in cands.iter().enumerate() {
        let t = tally(sys, v, z, maxlen, opts.exec);
        closed = t.count;
        if t.fixers.is_empty() {
            return HypothesisReport {
                vertex: v,
                maxlen,
                closed_paths: t.count,
                candidates_tried: tried + 1,
                outcome: HypothesisOutcome::Ok { witness: z.clone(), irrational_images: t.all_irrational },
            };
        }
        if best.as_ref().is_none_or(|b| t.fixers.len() < b.len()) {
            best = Some(t.fixers);
        }
    }
    let mut blocking: Vec<Path> = best.unwrap_or_default().iter().map(|rev| path_from_reversed(sys, rev)).collect();
    blocking.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.edges().cmp(b.edges())));
    HypothesisReport {
        vertex: v,
        maxlen,
        closed_paths: closed,
        candidates_tried: cands.len(),
        outcome: HypothesisOutcome::Fail { blocking },
    }
}
