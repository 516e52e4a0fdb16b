use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::region::{Interval, Region};
use crate::qfield::{fmt_rational, ser_rational, QNum};

/// `z ↦ scale·z + offset` on a single half-open interval; `scale > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AffineBranch {
    pub domain: Interval,
    #[serde(serialize_with = "ser_rational")]
    pub scale: BigRational,
    pub offset: QNum,
}

impl AffineBranch {
    pub fn new(domain: Interval, scale: BigRational, offset: QNum) -> AffineBranch {
        assert!(scale.is_positive(), "branch scale must be positive");
        AffineBranch { domain, scale, offset }
    }

    pub fn eval(&self, z: &QNum) -> QNum {
        z.scale(&self.scale) + &self.offset
    }

    pub fn image(&self) -> Interval {
        Interval::new(self.eval(&self.domain.lo), self.eval(&self.domain.hi))
    }

    pub fn inverse(&self) -> AffineBranch {
        let inv = self.scale.recip();
        AffineBranch::new(self.image(), inv.clone(), -self.offset.scale(&inv))
    }

    /// Preimage of an interval lying inside the image.
    fn preimage(&self, i: &Interval) -> Interval {
        let inv = self.scale.recip();
        Interval::new((&i.lo - &self.offset).scale(&inv), (&i.hi - &self.offset).scale(&inv))
    }

    /// Same affine law, ignoring the domain.
    pub fn same_law(&self, other: &AffineBranch) -> bool {
        self.scale == other.scale && self.offset == other.offset
    }
}

impl fmt::Display for AffineBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {}·z + ({})", self.domain, fmt_rational(&self.scale), self.offset)
    }
}

/// A finite family of affine branches with pairwise disjoint domains, sorted
/// by domain. Bijective onto its image when the images are disjoint too.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PiecewiseMap {
    branches: Vec<AffineBranch>,
}

impl PiecewiseMap {
    /// Sorts the branches by domain; does not check disjointness (see
    /// [`PiecewiseMap::overlap`]).
    pub fn new(mut branches: Vec<AffineBranch>) -> PiecewiseMap {
        branches.sort_by(|a, b| a.domain.lo.cmp(&b.domain.lo));
        PiecewiseMap { branches }
    }

    pub fn identity(region: &Region) -> PiecewiseMap {
        PiecewiseMap {
            branches: region
                .intervals()
                .iter()
                .map(|i| AffineBranch::new(i.clone(), BigRational::one(), QNum::zero()))
                .collect(),
        }
    }

    pub fn branches(&self) -> &[AffineBranch] {
        &self.branches
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn branch_at(&self, z: &QNum) -> Option<&AffineBranch> {
        let idx = self.branches.partition_point(|b| &b.domain.lo <= z);
        (idx > 0).then(|| &self.branches[idx - 1]).filter(|b| b.domain.contains(z))
    }

    pub fn apply(&self, z: &QNum) -> Option<QNum> {
        self.branch_at(z).map(|b| b.eval(z))
    }

    pub fn domain(&self) -> Region {
        Region::from_intervals(self.branches.iter().map(|b| b.domain.clone()))
    }

    pub fn image(&self) -> Region {
        Region::from_intervals(self.branches.iter().map(|b| b.image()))
    }

    /// First point covered by two branch domains, if any.
    pub fn domain_overlap(&self) -> Option<QNum> {
        Region::from_disjoint(self.branches.iter().map(|b| b.domain.clone())).err()
    }

    /// First point covered by two branch images, if any.
    pub fn image_overlap(&self) -> Option<QNum> {
        Region::from_disjoint(self.branches.iter().map(|b| b.image())).err()
    }

    /// Inverse of an injective map.
    pub fn inverse(&self) -> PiecewiseMap {
        PiecewiseMap::new(self.branches.iter().map(AffineBranch::inverse).collect())
    }

    /// `self ∘ inner`, defined where `inner` lands in `self`'s domain.
    pub fn compose(&self, inner: &PiecewiseMap) -> PiecewiseMap {
        let mut out = Vec::new();
        for b in &inner.branches {
            let img = b.image();
            let start = self.branches.partition_point(|o| o.domain.hi <= img.lo);
            for o in &self.branches[start..] {
                if o.domain.lo >= img.hi {
                    break;
                }
                if let Some(piece) = img.intersect(&o.domain) {
                    out.push(AffineBranch::new(
                        b.preimage(&piece),
                        &o.scale * &b.scale,
                        b.offset.scale(&o.scale) + &o.offset,
                    ));
                }
            }
        }
        PiecewiseMap::new(out)
    }

    /// Restriction to the part of the domain inside `region`.
    pub fn restrict(&self, region: &Region) -> PiecewiseMap {
        let mut out = Vec::new();
        for b in &self.branches {
            for i in region.intervals() {
                if let Some(piece) = b.domain.intersect(i) {
                    out.push(AffineBranch::new(piece, b.scale.clone(), b.offset.clone()));
                }
            }
        }
        PiecewiseMap::new(out)
    }

    /// Merges adjacent branches that share an affine law.
    pub fn simplified(&self) -> PiecewiseMap {
        let mut out: Vec<AffineBranch> = Vec::with_capacity(self.branches.len());
        for b in &self.branches {
            match out.last_mut() {
                Some(last) if last.domain.hi == b.domain.lo && last.same_law(b) => last.domain.hi = b.domain.hi.clone(),
                _ => out.push(b.clone()),
            }
        }
        PiecewiseMap { branches: out }
    }

    /// True when every branch has slope 1 and offset 0.
    pub fn is_identity(&self) -> bool {
        self.branches.iter().all(|b| b.scale.is_one() && b.offset.is_zero())
    }
}

impl fmt::Display for PiecewiseMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.branches.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{int, rat};

    fn rotation() -> PiecewiseMap {
        let t = QNum::theta();
        let cut = QNum::one() - &t;
        PiecewiseMap::new(vec![
            AffineBranch::new(Interval::new(QNum::zero(), cut.clone()), int(1), t.clone()),
            AffineBranch::new(Interval::new(cut, QNum::one()), int(1), t - QNum::one()),
        ])
    }

    #[test]
    fn rotation_squared_has_three_branches() {
        let r = rotation();
        let rr = r.compose(&r);
        assert_eq!(rr.len(), 3);
        assert_eq!(rr.simplified().len(), 2);
        let two_theta = QNum::theta().scale(&int(2));
        for z in [QNum::zero(), QNum::from_ratio(1, 3), QNum::from_ratio(9, 10), QNum::theta()] {
            assert_eq!(rr.apply(&z), Some((&z + &two_theta).mod1()));
        }
        assert_eq!(rr.domain(), Region::interval(Interval::ints(0, 1)));
        assert_eq!(rr.image(), Region::interval(Interval::ints(0, 1)));
    }

    #[test]
    fn inverse_round_trips() {
        let r = rotation();
        let inv = r.inverse();
        for z in [QNum::zero(), QNum::from_ratio(1, 2), QNum::from_ratio(99, 100)] {
            let y = r.apply(&z).unwrap();
            assert_eq!(inv.apply(&y), Some(z));
        }
        assert!(inv.compose(&r).simplified().is_identity());
    }

    #[test]
    fn overlap_detection() {
        let m = PiecewiseMap::new(vec![
            AffineBranch::new(Interval::ints(0, 2), int(1), QNum::zero()),
            AffineBranch::new(Interval::ints(1, 3), rat(1, 2), QNum::from_int(5)),
        ]);
        assert_eq!(m.domain_overlap(), Some(QNum::from_int(1)));
        assert_eq!(m.image_overlap(), None);
        assert_eq!(m.apply(&QNum::from_ratio(1, 2)), Some(QNum::from_ratio(1, 2)));
        assert_eq!(m.apply(&QNum::from_int(3)), None);
    }
}
