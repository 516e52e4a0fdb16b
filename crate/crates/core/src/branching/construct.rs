use num_rational::BigRational;
use num_traits::One;

use super::map::{AffineBranch, PiecewiseMap};
use super::region::{Interval, Region};
use super::{BranchingError, BranchingSystem, SystemKind};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::qfield::{int, rat, QNum};

/// `R_{eᵢ} = [i−1, i)` in edge declaration order.
fn unit_ranges(g: &Graph) -> Vec<Region> {
    g.edges()
        .map(|e| Region::interval(Interval::ints(e.0 as i64, e.0 as i64 + 1)))
        .collect()
}

fn emitter_domain(g: &Graph, ranges: &[Region], v: VertexId) -> Region {
    g.out_edges(v).iter().fold(Region::empty(), |acc, e| acc.union(&ranges[e.0]))
}

/// The `k`-th of `p` equal pieces of `R_e = [j−1, j)` (`k` from 0).
fn subpiece(e: EdgeId, k: usize, p: usize) -> Interval {
    let base = int(e.0 as i64);
    let step = rat(1, p as i64);
    let lo = &base + &step * int(k as i64);
    let hi = &lo + &step;
    Interval::new(QNum::from_rational(lo), QNum::from_rational(hi))
}

/// Increasing affine bijection between two intervals.
fn linear_bijection(from: &Interval, to: &Interval) -> AffineBranch {
    let (Some(fl), Some(tl)) = (from.length().as_rational().cloned(), to.length().as_rational().cloned()) else {
        panic!("linear bijection needs rational lengths");
    };
    let scale = tl / fl;
    let offset = &to.lo - &from.lo.scale(&scale);
    AffineBranch::new(from.clone(), scale, offset)
}

/// Layout for every finite graph, sinks included: edges on `[i−1, i)`, the
/// `i`-th sink on `[−i, −i+1)`, emitters on the union of their ranges, and
/// `f_e` the linear bijection onto `R_e` (split into equal pieces, one per
/// edge leaving `r(e)`, when `r(e)` emits).
pub fn build_interval_system(g: &Graph) -> BranchingSystem {
    let ranges = unit_ranges(g);
    let mut domains = vec![Region::empty(); g.num_vertices()];
    for (i, v) in g.sinks().into_iter().enumerate() {
        let i = i as i64 + 1;
        domains[v.0] = Region::interval(Interval::ints(-i, -i + 1));
    }
    for v in g.vertices().filter(|&v| !g.is_sink(v)) {
        domains[v.0] = emitter_domain(g, &ranges, v);
    }
    let maps = g
        .edges()
        .map(|e| {
            let target = g.rng(e);
            let outs = g.out_edges(target);
            if outs.is_empty() {
                let from = domains[target.0].intervals()[0].clone();
                let to = ranges[e.0].intervals()[0].clone();
                PiecewiseMap::new(vec![linear_bijection(&from, &to)])
            } else {
                let p = outs.len();
                PiecewiseMap::new(
                    outs.iter()
                        .enumerate()
                        .map(|(k, &d)| linear_bijection(&ranges[d.0].intervals()[0], &subpiece(e, k, p)))
                        .collect(),
                )
            }
        })
        .collect();
    BranchingSystem::new(g.clone(), SystemKind::Interval, ranges, domains, maps)
}

/// `g_a^b(x) = bx + (1−x)a`, a bijection `[0,1) → [a,b)`.
fn g_map(target: &Interval) -> PiecewiseMap {
    PiecewiseMap::new(vec![linear_bijection(&Interval::ints(0, 1), target)])
}

/// `h_θ(x) = (x + θ) mod 1` on `[0, 1)`, split at the kink `1 − θ`.
fn h_theta() -> PiecewiseMap {
    let t = QNum::theta();
    let kink = QNum::one() - &t;
    PiecewiseMap::new(vec![
        AffineBranch::new(Interval::new(QNum::zero(), kink.clone()), BigRational::one(), t.clone()),
        AffineBranch::new(Interval::new(kink, QNum::one()), BigRational::one(), t - QNum::one()),
    ])
}

/// The rotation construction for row-finite graphs without sinks. On the
/// piece `R_{e_{i_k}}` of `D_{r(e)}`, `f_e` is `g ∘ h_θ ∘ g⁻¹`, where the outer
/// `g` targets the `k`-th of `P = #s⁻¹(r(e))` equal pieces of `R_e`. Each
/// branch then has the form `(x + θ + r)/P` with `r` rational.
pub fn build_rotation_system(g: &Graph) -> Result<BranchingSystem, BranchingError> {
    if let Some(v) = g.sinks().first() {
        return Err(BranchingError::HasSink(g.vertex_name(*v).to_string()));
    }
    let ranges = unit_ranges(g);
    let domains: Vec<Region> = g.vertices().map(|v| emitter_domain(g, &ranges, v)).collect();
    let h = h_theta();
    let maps = g
        .edges()
        .map(|e| {
            let outs = g.out_edges(g.rng(e));
            let p = outs.len();
            let mut branches = Vec::with_capacity(2 * p);
            for (k, &d) in outs.iter().enumerate() {
                let source = g_map(&ranges[d.0].intervals()[0]).inverse();
                let target = g_map(&subpiece(e, k, p));
                branches.extend(target.compose(&h.compose(&source)).branches().iter().cloned());
            }
            PiecewiseMap::new(branches)
        })
        .collect();
    Ok(BranchingSystem::new(g.clone(), SystemKind::Rotation, ranges, domains, maps))
}

#[cfg(test)]
mod tests {
    use super::super::validate_system;
    use super::*;
    use crate::graph::fixtures::*;

    fn q(s: &str) -> QNum {
        s.parse().unwrap()
    }

    #[test]
    fn interval_system_edge_with_sink() {
        let g = edge();
        let sys = build_interval_system(&g);
        assert!(validate_system(&sys).is_ok());
        let e = EdgeId(0);
        assert_eq!(sys.range_region(e), &Region::interval(Interval::ints(0, 1)));
        assert_eq!(sys.domain_region(VertexId(1)), &Region::interval(Interval::ints(-1, 0)));
        assert_eq!(sys.domain_region(VertexId(0)), &Region::interval(Interval::ints(0, 1)));
        let b = &sys.map(e).branches()[0];
        assert_eq!(b.scale, int(1));
        assert_eq!(b.offset, QNum::from_int(1));
    }

    #[test]
    fn interval_system_loop_is_identity() {
        let sys = build_interval_system(&loop_graph());
        assert!(validate_system(&sys).is_ok());
        assert_eq!(sys.map(EdgeId(0)).len(), 1);
        assert!(sys.map(EdgeId(0)).is_identity());
    }

    #[test]
    fn interval_system_rose2() {
        let sys = build_interval_system(&rose2());
        assert!(validate_system(&sys).is_ok());
        assert_eq!(sys.domain_region(VertexId(0)), &Region::interval(Interval::ints(0, 2)));
        let fa = sys.map(EdgeId(0));
        assert_eq!(fa.len(), 2);
        assert_eq!(fa.branches()[0].image(), Interval::new(QNum::zero(), QNum::from_ratio(1, 2)));
        assert_eq!(fa.branches()[1].domain, Interval::ints(1, 2));
        assert_eq!(fa.branches()[1].image(), Interval::new(QNum::from_ratio(1, 2), QNum::one()));
    }

    #[test]
    fn rotation_loop_matches_irrational_rotation() {
        let sys = build_rotation_system(&loop_graph()).unwrap();
        assert!(validate_system(&sys).is_ok());
        let f = sys.map(EdgeId(0));
        assert_eq!(f.len(), 2);
        let t = QNum::theta();
        assert_eq!(f.branches()[0].domain.hi, QNum::one() - &t);
        assert_eq!(f.branches()[0].offset, t);
        assert_eq!(f.branches()[1].offset, &t - QNum::one());
        assert_eq!(f.apply(&QNum::from_ratio(3, 4)), Some(q("-5/4 + 1 r2")));
    }

    #[test]
    fn rotation_rose2_value_at_zero() {
        let sys = build_rotation_system(&rose2()).unwrap();
        assert!(validate_system(&sys).is_ok());
        assert_eq!(sys.map(EdgeId(0)).apply(&QNum::zero()), Some(q("-1/2 + 1/2 r2")));
    }

    #[test]
    fn rotation_branches_have_closed_form() {
        let g = Graph::build(
            &["u", "v", "w"],
            &[("a", "u", "v"), ("b", "v", "w"), ("c", "v", "u"), ("d", "w", "u"), ("f", "w", "w"), ("h", "w", "v")],
        )
        .unwrap();
        let sys = build_rotation_system(&g).unwrap();
        assert!(validate_system(&sys).is_ok());
        for e in g.edges() {
            let p = g.out_edges(g.rng(e)).len() as i64;
            for b in sys.map(e).branches() {
                // (x + θ + r)/P: slope 1/P and √2-coefficient 1/P
                assert_eq!(b.scale, rat(1, p));
                assert_eq!(b.offset.sqrt2_coeff(), &rat(1, p));
            }
        }
    }

    #[test]
    fn rotation_rejects_sinks() {
        assert_eq!(build_rotation_system(&edge()), Err(BranchingError::HasSink("v2".into())));
    }
}
