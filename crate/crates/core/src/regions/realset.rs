use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfmt::f64_str;
use crate::specfun::{integrate_density, Prob};

/// Open interval `(lo, hi)`; `lo` may be `-inf` and `hi` may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "f64_str")]
    pub lo: f64,
    #[serde(with = "f64_str")]
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::Validation(format!("empty or invalid interval ({lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, y: f64) -> bool {
        self.lo < y && y < self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Finite union of disjoint open intervals, sorted by `lo`.
///
/// Intervals that merely touch, like `(0, 1)` and `(1, 2)`, stay separate:
/// the shared endpoint belongs to neither.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Interval>", into = "Vec<Interval>")]
pub struct RealSet {
    intervals: Vec<Interval>,
}

impl RealSet {
    pub fn empty() -> Self {
        RealSet::default()
    }

    pub fn real_line() -> Self {
        RealSet {
            intervals: vec![Interval {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            }],
        }
    }

    /// `(lo, hi)`, empty when `lo == hi`.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if lo == hi && lo.is_finite() {
            return Ok(RealSet::empty());
        }
        Ok(RealSet {
            intervals: vec![Interval::new(lo, hi)?],
        })
    }

    /// Normalises arbitrary intervals: sorts and merges overlapping ones.
    pub fn from_intervals(mut intervals: Vec<Interval>) -> Self {
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv.lo < last.hi => last.hi = last.hi.max(iv.hi),
                _ => merged.push(iv),
            }
        }
        RealSet { intervals: merged }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, y: f64) -> bool {
        // first interval with hi > y
        let i = self.intervals.partition_point(|iv| iv.hi <= y);
        self.intervals.get(i).is_some_and(|iv| iv.lo < y)
    }

    pub fn intersection(&self, other: &RealSet) -> RealSet {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].lo.max(b[j].lo);
            let hi = a[i].hi.min(b[j].hi);
            if lo < hi {
                out.push(Interval { lo, hi });
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        RealSet { intervals: out }
    }

    pub fn union(&self, other: &RealSet) -> RealSet {
        let all = self
            .intervals
            .iter()
            .chain(other.intervals.iter())
            .copied()
            .collect();
        RealSet::from_intervals(all)
    }

    /// `self \ other`. The endpoints of `other` that would remain as isolated
    /// points are dropped (measure zero).
    pub fn difference(&self, other: &RealSet) -> RealSet {
        let mut out = Vec::new();
        for a in &self.intervals {
            let mut cursor = a.lo;
            for b in other.intervals.iter().filter(|b| b.hi > a.lo && b.lo < a.hi) {
                if b.lo > cursor {
                    out.push(Interval { lo: cursor, hi: b.lo });
                }
                cursor = cursor.max(b.hi);
            }
            if cursor < a.hi {
                out.push(Interval { lo: cursor, hi: a.hi });
            }
        }
        RealSet { intervals: out }
    }

    pub fn is_disjoint(&self, other: &RealSet) -> bool {
        self.intersection(other).is_empty()
    }

    /// Every interval of `self` lies inside a single interval of `other`.
    pub fn is_subset_of(&self, other: &RealSet) -> bool {
        self.intervals.iter().all(|a| {
            other
                .intervals
                .iter()
                .any(|b| b.lo <= a.lo && a.hi <= b.hi)
        })
    }

    /// Mass under `N(mean, sigma²)`.
    pub fn gaussian_mass(&self, mean: f64, sigma: f64) -> Result<Prob> {
        let mut total = 0.0;
        for iv in &self.intervals {
            total += integrate_density(iv.lo, iv.hi, mean, sigma)?.value();
        }
        Ok(Prob::saturating(total))
    }

    /// Lebesgue measure; infinite if any interval is unbounded.
    pub fn length(&self) -> f64 {
        self.intervals.iter().map(Interval::length).sum()
    }
}

impl TryFrom<Vec<Interval>> for RealSet {
    type Error = Error;

    fn try_from(intervals: Vec<Interval>) -> Result<Self> {
        for w in intervals.windows(2) {
            if w[1].lo < w[0].hi {
                return Err(Error::Validation("intervals overlap or are unsorted".into()));
            }
        }
        for iv in &intervals {
            Interval::new(iv.lo, iv.hi)?;
        }
        Ok(RealSet { intervals })
    }
}

impl From<RealSet> for Vec<Interval> {
    fn from(s: RealSet) -> Self {
        s.intervals
    }
}

impl From<Interval> for RealSet {
    fn from(iv: Interval) -> Self {
        RealSet { intervals: vec![iv] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ivs: &[(f64, f64)]) -> RealSet {
        RealSet::from_intervals(ivs.iter().map(|&(a, b)| Interval::new(a, b).unwrap()).collect())
    }

    #[test]
    fn normalisation_merges_overlaps_only() {
        let s = set(&[(3.0, 4.0), (0.0, 1.0), (0.5, 2.0), (2.0, 2.5)]);
        assert_eq!(s, set(&[(0.0, 2.0), (2.0, 2.5), (3.0, 4.0)]));
        assert!(!s.contains(2.0));
        assert!(s.contains(1.999));
        assert!(!s.contains(0.0));
        assert!(s.contains(3.5));
        assert!(!s.contains(5.0));
    }

    #[test]
    fn difference_nested_and_partial() {
        let outer = set(&[(-5.0, 5.0)]);
        let inner = set(&[(0.5, 1.5)]);
        let d = outer.difference(&inner);
        assert_eq!(d, set(&[(-5.0, 0.5), (1.5, 5.0)]));
        assert!(d.is_disjoint(&inner));
        let partial = set(&[(4.0, 7.0)]);
        assert_eq!(outer.difference(&partial), set(&[(-5.0, 4.0)]));
        assert_eq!(inner.difference(&outer), RealSet::empty());
    }

    #[test]
    fn intersection_and_subset() {
        let a = set(&[(0.0, 2.0), (3.0, 6.0)]);
        let b = set(&[(1.0, 4.0)]);
        assert_eq!(a.intersection(&b), set(&[(1.0, 2.0), (3.0, 4.0)]));
        assert!(set(&[(1.0, 1.5)]).is_subset_of(&a));
        assert!(!b.is_subset_of(&a));
        assert!(RealSet::empty().is_subset_of(&a));
        // (0,2) is not inside (0,1) ∪ (1,2): the point 1 is missing
        assert!(!set(&[(0.0, 2.0)]).is_subset_of(&set(&[(0.0, 1.0), (1.0, 2.0)])));
    }

    #[test]
    fn masses_and_lengths() {
        let s = set(&[(f64::NEG_INFINITY, -1.0), (1.0, f64::INFINITY)]);
        let m = s.gaussian_mass(0.0, 1.0).unwrap().value();
        assert!((m - 2.0 * 0.158_655_253_931_457_05).abs() < 1e-15);
        assert_eq!(set(&[(0.0, 1.0), (2.0, 4.5)]).length(), 3.5);
        assert_eq!(s.length(), f64::INFINITY);
    }

    #[test]
    fn json_uses_decimal_strings() {
        let s = set(&[(f64::NEG_INFINITY, 0.9)]);
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"[{"lo":"-inf","hi":"0.90000000000000002"}]"#);
        let back: RealSet = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
        let bad = r#"[{"lo":"0","hi":"2"},{"lo":"1","hi":"3"}]"#;
        assert!(serde_json::from_str::<RealSet>(bad).is_err());
    }
}
