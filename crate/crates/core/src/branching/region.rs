use std::fmt;

use serde::Serialize;

use crate::qfield::QNum;

/// Half-open interval `[lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Interval {
    pub lo: QNum,
    pub hi: QNum,
}

impl Interval {
    pub fn new(lo: QNum, hi: QNum) -> Interval {
        assert!(lo < hi, "empty interval [{lo}, {hi})");
        Interval { lo, hi }
    }

    pub fn try_new(lo: QNum, hi: QNum) -> Option<Interval> {
        (lo < hi).then_some(Interval { lo, hi })
    }

    pub fn ints(lo: i64, hi: i64) -> Interval {
        Interval::new(QNum::from_int(lo), QNum::from_int(hi))
    }

    pub fn contains(&self, z: &QNum) -> bool {
        &self.lo <= z && z < &self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        Interval::try_new(lo, hi)
    }

    pub fn length(&self) -> QNum {
        &self.hi - &self.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// A finite union of half-open intervals, kept sorted with touching pieces
/// merged, so equal sets have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Region {
    intervals: Vec<Interval>,
}

impl Region {
    pub fn empty() -> Region {
        Region::default()
    }

    pub fn interval(i: Interval) -> Region {
        Region { intervals: vec![i] }
    }

    /// Unions the given intervals (overlaps allowed).
    pub fn from_intervals<I: IntoIterator<Item = Interval>>(it: I) -> Region {
        let mut v: Vec<Interval> = it.into_iter().collect();
        v.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(v.len());
        for i in v {
            match merged.last_mut() {
                Some(last) if i.lo <= last.hi => {
                    if i.hi > last.hi {
                        last.hi = i.hi;
                    }
                }
                _ => merged.push(i),
            }
        }
        Region { intervals: merged }
    }

    /// Like [`Region::from_intervals`] but reports the first point covered twice.
    pub fn from_disjoint<I: IntoIterator<Item = Interval>>(it: I) -> Result<Region, QNum> {
        let mut v: Vec<Interval> = it.into_iter().collect();
        v.sort_by(|a, b| a.lo.cmp(&b.lo));
        for w in v.windows(2) {
            if w[1].lo < w[0].hi {
                return Err(w[1].lo.clone());
            }
        }
        Ok(Region::from_intervals(v))
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, z: &QNum) -> bool {
        let idx = self.intervals.partition_point(|i| &i.lo <= z);
        idx > 0 && self.intervals[idx - 1].contains(z)
    }

    pub fn union(&self, other: &Region) -> Region {
        Region::from_intervals(self.intervals.iter().chain(&other.intervals).cloned())
    }

    pub fn intersection(&self, other: &Region) -> Region {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a, b) = (&self.intervals[i], &other.intervals[j]);
            if let Some(c) = a.intersect(b) {
                out.push(c);
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Region { intervals: out }
    }

    pub fn difference(&self, other: &Region) -> Region {
        let mut out = Vec::new();
        for a in &self.intervals {
            let mut lo = a.lo.clone();
            for b in &other.intervals {
                if b.hi <= lo || b.lo >= a.hi {
                    continue;
                }
                if b.lo > lo {
                    out.push(Interval::new(lo.clone(), b.lo.clone()));
                }
                lo = (&lo).max(&b.hi).clone();
                if lo >= a.hi {
                    break;
                }
            }
            if lo < a.hi {
                out.push(Interval::new(lo, a.hi.clone()));
            }
        }
        Region { intervals: out }
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.difference(other).is_empty()
    }

    /// Some point of the region (the left end of its first piece).
    pub fn some_point(&self) -> Option<&QNum> {
        self.intervals.first().map(|i| &i.lo)
    }

    /// A point in the symmetric difference, if the regions differ.
    pub fn differing_point(&self, other: &Region) -> Option<QNum> {
        self.difference(other)
            .some_point()
            .or(other.difference(self).some_point())
            .cloned()
    }

    pub fn measure(&self) -> QNum {
        self.intervals.iter().fold(QNum::zero(), |acc, i| acc + i.length())
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("∅");
        }
        for (k, i) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(pairs: &[(i64, i64)]) -> Region {
        Region::from_intervals(pairs.iter().map(|&(a, b)| Interval::ints(a, b)))
    }

    #[test]
    fn normalizes_touching_pieces() {
        assert_eq!(r(&[(1, 2), (0, 1)]), r(&[(0, 2)]));
        assert_eq!(r(&[(0, 3), (1, 2)]), r(&[(0, 3)]));
        assert_eq!(Region::from_disjoint([Interval::ints(0, 2), Interval::ints(1, 3)]), Err(QNum::from_int(1)));
    }

    #[test]
    fn set_operations() {
        let a = r(&[(0, 4)]);
        let b = r(&[(1, 2), (3, 5)]);
        assert_eq!(a.intersection(&b), r(&[(1, 2), (3, 4)]));
        assert_eq!(a.difference(&b), r(&[(0, 1), (2, 3)]));
        assert_eq!(b.difference(&a), r(&[(4, 5)]));
        assert!(r(&[(1, 2)]).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert_eq!(a.differing_point(&b), Some(QNum::zero()));
        assert_eq!(a.differing_point(&a), None);
        assert!(a.contains(&QNum::theta()));
        assert!(!a.contains(&QNum::from_int(4)));
        assert!(b.contains(&QNum::from_int(3)));
        assert!(!b.contains(&QNum::from_int(2)));
    }
}
