use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::RepError;
use crate::algebra::{Element, Monomial};
use crate::branching::{
    check_faithfulness_hypothesis_with, compose_path_map, BranchingSystem, HypothesisOptions, HypothesisOutcome,
    HypothesisReport, PiecewiseMap, SystemKind,
};
use crate::par::{self, Exec};
use crate::qfield::{fmt_rational, ser_rational, QNum};

/// The action of one term `λ·αβ*`: the map `f_α ∘ f_β⁻¹` on the image of `f_β`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchAction {
    #[serde(skip)]
    pub monomial: Monomial,
    #[serde(serialize_with = "ser_rational")]
    pub coefficient: BigRational,
    pub map: PiecewiseMap,
}

fn action(sys: &BranchingSystem, m: &Monomial, c: &BigRational) -> BranchAction {
    let fa = compose_path_map(sys, m.real()).expect("monomial of the system's graph");
    let fb = compose_path_map(sys, m.ghost()).expect("monomial of the system's graph");
    BranchAction { monomial: m.clone(), coefficient: c.clone(), map: fa.compose(&fb.inverse()) }
}

pub fn monomial_actions(sys: &BranchingSystem, x: &Element) -> Vec<BranchAction> {
    monomial_actions_with(sys, x, Exec::default())
}

fn monomial_actions_with(sys: &BranchingSystem, x: &Element, exec: Exec) -> Vec<BranchAction> {
    let terms: Vec<(&Monomial, &BigRational)> = x.terms().iter().collect();
    par::map(exec, &terms, |(m, c)| action(sys, m, c))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum ZeroVerdict {
    Zero {
        cells: usize,
        groups: usize,
    },
    /// `π(x)δ_z` has value `coeff ≠ 0` at `w`.
    Nonzero {
        z: QNum,
        w: QNum,
        #[serde(serialize_with = "ser_rational")]
        coeff: BigRational,
    },
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroVerdict::Zero { .. })
    }
}

impl fmt::Display for ZeroVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroVerdict::Zero { cells, groups } => write!(f, "zero ({cells} cells, {groups} groups)"),
            ZeroVerdict::Nonzero { z, w, coeff } => write!(f, "nonzero: z={z} ↦ w={w}, coeff={}", fmt_rational(coeff)),
        }
    }
}

/// A rotation system whose fixed-point hypothesis has been checked at every
/// vertex, so that its induced representation is faithful.
#[derive(Debug, Clone)]
pub struct SemanticOracle {
    sys: BranchingSystem,
    certificates: Vec<HypothesisReport>,
    exec: Exec,
}

/// Closed-path length used when certifying inside [`zero_test_semantic`].
pub const CERTIFY_MAXLEN: usize = 4;

impl SemanticOracle {
    pub fn certify(sys: BranchingSystem, maxlen: usize) -> Result<SemanticOracle, RepError> {
        SemanticOracle::certify_with(sys, maxlen, Exec::default())
    }

    pub fn certify_with(sys: BranchingSystem, maxlen: usize, exec: Exec) -> Result<SemanticOracle, RepError> {
        if sys.kind() != SystemKind::Rotation {
            return Err(RepError::NotRotation(sys.kind().to_string()));
        }
        let g = sys.graph();
        if let Some(v) = g.sinks().first() {
            return Err(RepError::HasSink(g.vertex_name(*v).to_string()));
        }
        let opts = HypothesisOptions { exec, ..HypothesisOptions::default() };
        let mut certificates = Vec::new();
        for v in g.vertices() {
            let rep = check_faithfulness_hypothesis_with(&sys, v, maxlen, opts);
            if let HypothesisOutcome::Fail { blocking } = &rep.outcome {
                return Err(RepError::HypothesisFailed {
                    vertex: g.vertex_name(v).to_string(),
                    blocking: blocking.iter().map(|p| p.display(g).to_string()).collect::<Vec<_>>().join(", "),
                });
            }
            certificates.push(rep);
        }
        Ok(SemanticOracle { sys, certificates, exec })
    }

    /// Skips certification; verdicts are then only as good as the system.
    pub fn unchecked(sys: BranchingSystem) -> SemanticOracle {
        SemanticOracle { sys, certificates: Vec::new(), exec: Exec::default() }
    }

    pub fn with_exec(mut self, exec: Exec) -> SemanticOracle {
        self.exec = exec;
        self
    }

    pub fn system(&self) -> &BranchingSystem {
        &self.sys
    }

    pub fn certificates(&self) -> &[HypothesisReport] {
        &self.certificates
    }

    /// Decides `π(x) = 0` by grouping branches with equal `(scale, offset)`
    /// on every cell of the common refinement of all branch domains.
    pub fn zero_test(&self, x: &Element) -> ZeroVerdict {
        let actions = monomial_actions_with(&self.sys, x, self.exec);
        let mut branches = Vec::new();
        for a in &actions {
            for b in a.map.branches() {
                branches.push((b, &a.coefficient));
            }
        }
        let mut cuts: Vec<&QNum> = branches.iter().flat_map(|(b, _)| [&b.domain.lo, &b.domain.hi]).collect();
        cuts.sort();
        cuts.dedup();
        let ncells = cuts.len().saturating_sub(1);
        let mut covering: Vec<Vec<usize>> = vec![Vec::new(); ncells];
        for (k, (b, _)) in branches.iter().enumerate() {
            let lo = cuts.partition_point(|c| *c < &b.domain.lo);
            let hi = cuts.partition_point(|c| *c < &b.domain.hi);
            for cell in &mut covering[lo..hi] {
                cell.push(k);
            }
        }
        type Groups = BTreeMap<(BigRational, QNum), BigRational>;
        let per_cell: Vec<Groups> = par::map(self.exec, &covering, |ks| {
            let mut groups = Groups::new();
            for &k in ks {
                let (b, c) = branches[k];
                *groups.entry((b.scale.clone(), b.offset.clone())).or_insert_with(BigRational::zero) += c;
            }
            groups
        });
        let mut cells = 0;
        let mut total = 0;
        for (i, groups) in per_cell.iter().enumerate() {
            if groups.is_empty() {
                continue;
            }
            cells += 1;
            total += groups.len();
            if let Some(((s, o), c)) = groups.iter().find(|(_, c)| !c.is_zero()) {
                let z = witness(cuts[i], cuts[i + 1], s, o, groups.keys());
                let w = z.scale(s) + o;
                return ZeroVerdict::Nonzero { z, w, coeff: c.clone() };
            }
        }
        ZeroVerdict::Zero { cells, groups: total }
    }
}

/// A rational point of `[lo, hi)` where `s·z + o` meets no other law: `lo`
/// itself when possible, else a point before the first meeting.
fn witness<'a>(
    lo: &QNum,
    hi: &QNum,
    s: &BigRational,
    o: &QNum,
    laws: impl Iterator<Item = &'a (BigRational, QNum)>,
) -> QNum {
    let mut stop = hi.clone();
    let mut lo_free = lo.is_rational();
    for (s2, o2) in laws {
        if s2 == s {
            continue;
        }
        let meet = (o2 - o).scale(&(s - s2).recip());
        if &meet == lo {
            lo_free = false;
        } else if &meet > lo && meet < stop {
            stop = meet;
        }
    }
    if lo_free {
        return lo.clone();
    }
    QNum::from_rational(QNum::rational_strictly_between(lo, &stop))
}

/// Certifies `sys` (rotation kind, no sinks, hypothesis at every vertex up to
/// length [`CERTIFY_MAXLEN`]) and runs the grouped-branch zero test.
pub fn zero_test_semantic(sys: &BranchingSystem, x: &Element) -> Result<ZeroVerdict, RepError> {
    Ok(SemanticOracle::certify(sys.clone(), CERTIFY_MAXLEN)?.zero_test(x))
}

#[cfg(test)]
mod tests {
    use super::super::{apply_element, FinSupp};
    use super::*;
    use crate::algebra::parse_element;
    use crate::branching::{build_interval_system, build_rotation_system, Interval, Region};
    use crate::graph::fixtures::*;

    fn check(g: &crate::graph::Graph, s: &str) -> ZeroVerdict {
        let sys = build_rotation_system(g).unwrap();
        let x = parse_element(g, s).unwrap();
        let v = zero_test_semantic(&sys, &x).unwrap();
        if let ZeroVerdict::Nonzero { z, w, coeff } = &v {
            assert!(z.is_rational());
            assert_eq!(&apply_element(&sys, &x, &FinSupp::delta(z.clone())).get(w), coeff);
        }
        v
    }

    #[test]
    fn verdicts() {
        let g = loop_graph();
        assert!(check(&g, "x.x* - *").is_zero());
        let v = check(&g, "x - *");
        assert!(matches!(&v, ZeroVerdict::Nonzero { z, .. } if z.is_zero()));
        assert!(check(&rose2(), "a.a* + b.b* - v").is_zero());
        assert!(!check(&rose2(), "a.a* - b.b*").is_zero());
        assert_eq!(check(&g, "x.x* - *").to_string(), "zero (2 cells, 2 groups)");
    }

    #[test]
    fn witness_avoids_coincidences() {
        // z ↦ z and z ↦ z/2 + ... meet inside the cell
        let g = rose2();
        let v = check(&g, "a.a* - a.a.a*.a*");
        assert!(!v.is_zero());
    }

    #[test]
    fn report_format() {
        let v = check(&loop_graph(), "x - *");
        assert_eq!(v.to_string(), "nonzero: z=0 ↦ w=0, coeff=-1");
    }

    #[test]
    fn actions_have_expected_domains() {
        let g = rose2();
        let sys = build_rotation_system(&g).unwrap();
        let acts = monomial_actions(&sys, &parse_element(&g, "a.a*").unwrap());
        assert_eq!(acts[0].map.domain(), Region::interval(Interval::ints(0, 1)));
        assert!(acts[0].map.simplified().is_identity());
        let lg = loop_graph();
        let ls = build_rotation_system(&lg).unwrap();
        let acts = monomial_actions(&ls, &parse_element(&lg, "*").unwrap());
        assert_eq!(acts[0].map.domain(), Region::interval(Interval::ints(0, 1)));
    }

    #[test]
    fn refuses_uncertified_systems() {
        let g = loop_graph();
        let sys = build_interval_system(&g);
        let x = parse_element(&g, "x - *").unwrap();
        assert_eq!(zero_test_semantic(&sys, &x), Err(RepError::NotRotation("interval".into())));
        // the identity loop would wrongly report x - * as zero
        assert!(SemanticOracle::unchecked(sys).zero_test(&x).is_zero());
    }
}
