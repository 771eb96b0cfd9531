//! Finite unions of closed intervals on the line, with exact Lebesgue measure.
//!
//! Every projection in the crate lands here. Endpoints come out of floating
//! point arithmetic, so members closer than [`MERGE_EPSILON`] are merged.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaps narrower than this are treated as numerical noise and closed.
pub const MERGE_EPSILON: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo <= hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::InvertedInterval { lo, hi })
        }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.hi == self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

/// `[center - factor * half_width, center + factor * half_width]`; with
/// `factor = 5` this is the usual `5J`.
pub fn dilate(center: f64, half_width: f64, factor: f64) -> Interval {
    debug_assert!(half_width >= 0.0 && factor >= 0.0);
    let w = factor * half_width;
    Interval {
        lo: center - w,
        hi: center + w,
    }
}

/// Sorted, pairwise disjoint closed intervals separated by more than
/// [`MERGE_EPSILON`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion::default()
    }

    pub fn single(iv: Interval) -> Self {
        IntervalUnion {
            intervals: vec![iv],
        }
    }

    /// Sorts and merges raw `(lo, hi)` pairs; rejects inverted pairs.
    pub fn normalize(raw: &[(f64, f64)]) -> Result<Self> {
        let mut ivs = Vec::with_capacity(raw.len());
        for &(lo, hi) in raw {
            ivs.push(Interval::new(lo, hi)?);
        }
        Ok(Self::from_intervals(ivs))
    }

    /// Same as [`normalize`](Self::normalize) for intervals already known to be valid.
    pub fn from_intervals(mut ivs: Vec<Interval>) -> Self {
        ivs.sort_unstable_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        let mut out: Vec<Interval> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            match out.last_mut() {
                Some(last) if iv.lo <= last.hi + MERGE_EPSILON => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        IntervalUnion { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::len).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        let idx = self.intervals.partition_point(|iv| iv.hi < x);
        self.intervals.get(idx).is_some_and(|iv| iv.lo <= x)
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        Self::from_intervals(all)
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            if let Some(iv) = a[i].intersect(&b[j]) {
                out.push(iv);
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_intervals(out)
    }

    /// Shifts every member by `c`.
    pub fn translate(&self, c: f64) -> IntervalUnion {
        IntervalUnion {
            intervals: self
                .intervals
                .iter()
                .map(|iv| Interval {
                    lo: iv.lo + c,
                    hi: iv.hi + c,
                })
                .collect(),
        }
    }

    /// Writes `lo,hi` rows at 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "lo,hi")?;
        for iv in &self.intervals {
            writeln!(w, "{},{}", fmt17(iv.lo), fmt17(iv.hi))?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let mut raw = Vec::new();
        for rec in rdr.deserialize() {
            let (lo, hi): (f64, f64) = rec?;
            raw.push((lo, hi));
        }
        Self::normalize(&raw)
    }
}

/// Formats a float with 17 significant digits, enough to round-trip binary64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pairs(u: &IntervalUnion) -> Vec<(f64, f64)> {
        u.intervals().iter().map(|iv| (iv.lo, iv.hi)).collect()
    }

    #[test]
    fn normalize_merges_overlap() {
        let u = IntervalUnion::normalize(&[(0.0, 1.0), (0.5, 2.0)]).unwrap();
        assert_eq!(pairs(&u), vec![(0.0, 2.0)]);
    }

    #[test]
    fn normalize_keeps_disjoint() {
        let u = IntervalUnion::normalize(&[(2.0, 3.0), (0.0, 1.0)]).unwrap();
        assert_eq!(pairs(&u), vec![(0.0, 1.0), (2.0, 3.0)]);
    }

    #[test]
    fn normalize_closes_sub_epsilon_gap() {
        let u = IntervalUnion::normalize(&[(0.0, 1.0), (1.0 + 1e-13, 2.0)]).unwrap();
        assert_eq!(pairs(&u), vec![(0.0, 2.0)]);
    }

    #[test]
    fn normalize_rejects_inverted() {
        let err = IntervalUnion::normalize(&[(1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::InvertedInterval { .. }));
    }

    #[test]
    fn measure_examples() {
        let u = IntervalUnion::normalize(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
        assert_eq!(u.measure(), 2.0);
        assert_eq!(IntervalUnion::empty().measure(), 0.0);
        let u = IntervalUnion::normalize(&[(0.0, 0.28125)]).unwrap();
        assert_eq!(u.measure(), 0.28125);
    }

    #[test]
    fn dilate_examples() {
        assert_eq!(dilate(0.5, 0.1, 5.0), Interval { lo: 0.0, hi: 1.0 });
        assert_eq!(dilate(0.0, 1.0, 1.0), Interval { lo: -1.0, hi: 1.0 });
        assert_eq!(dilate(1.0, 0.0, 5.0), Interval { lo: 1.0, hi: 1.0 });
    }

    #[test]
    fn intersect_examples() {
        let a = IntervalUnion::normalize(&[(0.0, 2.0)]).unwrap();
        let b = IntervalUnion::normalize(&[(1.0, 3.0)]).unwrap();
        assert_eq!(pairs(&a.intersect(&b)), vec![(1.0, 2.0)]);

        let a = IntervalUnion::normalize(&[(0.0, 1.0)]).unwrap();
        let b = IntervalUnion::normalize(&[(2.0, 3.0)]).unwrap();
        assert!(a.intersect(&b).is_empty());

        let a = IntervalUnion::normalize(&[(0.0, 1.0), (1.5, 2.5), (4.0, 4.0)]).unwrap();
        assert_eq!(a.intersect(&a), a);
    }

    #[test]
    fn contains_uses_closed_members() {
        let u = IntervalUnion::normalize(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
        assert!(u.contains(0.0) && u.contains(1.0) && u.contains(2.5));
        assert!(!u.contains(1.5) && !u.contains(3.1) && !u.contains(-0.1));
    }

    #[test]
    fn csv_round_trip() {
        let u = IntervalUnion::normalize(&[(0.1, 0.25), (1.0 / 3.0, 0.75)]).unwrap();
        let mut buf = Vec::new();
        u.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("lo,hi\n1.0000000000000001e-1,"));
        assert_eq!(IntervalUnion::read_csv(&buf[..]).unwrap(), u);
    }

    fn raw_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((-10.0..10.0f64, 0.0..3.0f64), 0..12)
            .prop_map(|v| v.into_iter().map(|(lo, w)| (lo, lo + w)).collect())
    }

    proptest! {
        #[test]
        fn subadditive(x in raw_strategy(), y in raw_strategy()) {
            let mut xy = x.clone();
            xy.extend_from_slice(&y);
            let m_xy = IntervalUnion::normalize(&xy).unwrap().measure();
            let m_x = IntervalUnion::normalize(&x).unwrap().measure();
            let m_y = IntervalUnion::normalize(&y).unwrap().measure();
            prop_assert!(m_xy <= m_x + m_y + 1e-12);
        }

        #[test]
        fn inclusion_exclusion(x in raw_strategy(), y in raw_strategy()) {
            let a = IntervalUnion::normalize(&x).unwrap();
            let b = IntervalUnion::normalize(&y).unwrap();
            let lhs = a.intersect(&b).measure() + a.union(&b).measure();
            let rhs = a.measure() + b.measure();
            prop_assert!((lhs - rhs).abs() <= 1e-12);
        }

        #[test]
        fn normalize_idempotent(x in raw_strategy()) {
            let a = IntervalUnion::normalize(&x).unwrap();
            let b = IntervalUnion::normalize(&pairs(&a)).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
