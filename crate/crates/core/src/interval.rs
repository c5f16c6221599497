//! Rational intervals with open/closed/infinite endpoints and their finite unions.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{int, Rational};

/// A point of the extended rational line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Endpoint {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Endpoint::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Endpoint::Finite(_))
    }
}

impl From<Rational> for Endpoint {
    fn from(q: Rational) -> Self {
        Endpoint::Finite(q)
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => write!(f, "-inf"),
            Endpoint::Finite(q) => write!(f, "{q}"),
            Endpoint::PosInf => write!(f, "inf"),
        }
    }
}

/// An interval of the real line with rational (or infinite) endpoints.
///
/// Infinite endpoints are always open. The value may be empty; use
/// [`Interval::is_empty`] before relying on its endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Endpoint,
    pub hi: Endpoint,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

// Sort keys: a lower bound that is closed starts before an open one at the same
// value; an upper bound that is closed ends after an open one.
fn lower_cmp(a: (&Endpoint, bool), b: (&Endpoint, bool)) -> Ordering {
    a.0.cmp(b.0).then_with(|| b.1.cmp(&a.1))
}

fn upper_cmp(a: (&Endpoint, bool), b: (&Endpoint, bool)) -> Ordering {
    a.0.cmp(b.0).then_with(|| a.1.cmp(&b.1))
}

impl Interval {
    pub fn new(lo: Endpoint, lo_closed: bool, hi: Endpoint, hi_closed: bool) -> Self {
        let lo_closed = lo_closed && lo.is_finite();
        let hi_closed = hi_closed && hi.is_finite();
        Interval { lo, hi, lo_closed, hi_closed }
    }

    pub fn open(a: Rational, b: Rational) -> Self {
        Self::new(a.into(), false, b.into(), false)
    }

    pub fn closed(a: Rational, b: Rational) -> Self {
        Self::new(a.into(), true, b.into(), true)
    }

    pub fn point(a: Rational) -> Self {
        Self::closed(a.clone(), a)
    }

    pub fn real_line() -> Self {
        Self::new(Endpoint::NegInf, false, Endpoint::PosInf, false)
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Less => false,
            Ordering::Equal => !(self.lo_closed && self.hi_closed && self.lo.is_finite()),
            Ordering::Greater => true,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        !self.is_empty() && self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Length of a bounded interval.
    pub fn length(&self) -> Option<Rational> {
        match (&self.lo, &self.hi) {
            (Endpoint::Finite(a), Endpoint::Finite(b)) => Some(b - a),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match &self.lo {
            Endpoint::NegInf => true,
            Endpoint::Finite(a) => a < x || (self.lo_closed && a == x),
            Endpoint::PosInf => false,
        };
        let below = match &self.hi {
            Endpoint::PosInf => true,
            Endpoint::Finite(b) => x < b || (self.hi_closed && b == x),
            Endpoint::NegInf => false,
        };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) =
            if lower_cmp((&self.lo, self.lo_closed), (&other.lo, other.lo_closed)) == Ordering::Less {
                (other.lo.clone(), other.lo_closed)
            } else {
                (self.lo.clone(), self.lo_closed)
            };
        let (hi, hi_closed) =
            if upper_cmp((&self.hi, self.hi_closed), (&other.hi, other.hi_closed)) == Ordering::Greater {
                (other.hi.clone(), other.hi_closed)
            } else {
                (self.hi.clone(), self.hi_closed)
            };
        Interval { lo, hi, lo_closed, hi_closed }
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        !self.intersect(other).is_empty()
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        if self.is_empty() {
            return true;
        }
        lower_cmp((&other.lo, other.lo_closed), (&self.lo, self.lo_closed)) != Ordering::Greater
            && upper_cmp((&self.hi, self.hi_closed), (&other.hi, other.hi_closed)) != Ordering::Greater
    }

    pub fn closure(&self) -> Interval {
        Interval::new(self.lo.clone(), true, self.hi.clone(), true)
    }

    /// Some point of a nonempty interval: the midpoint when bounded.
    pub fn sample_point(&self) -> Option<Rational> {
        if self.is_empty() {
            return None;
        }
        Some(match (&self.lo, &self.hi) {
            (Endpoint::Finite(a), Endpoint::Finite(b)) => (a + b) / int(2),
            (Endpoint::Finite(a), _) => a + Rational::one(),
            (_, Endpoint::Finite(b)) => b - Rational::one(),
            _ => Rational::zero(),
        })
    }

    /// Gap between two nonempty intervals; zero when their closures meet.
    pub fn distance(&self, other: &Interval) -> Rational {
        if self.closure().intersects(&other.closure()) {
            return Rational::zero();
        }
        let (left, right) = if self.hi < other.lo { (self, other) } else { (other, self) };
        match (&left.hi, &right.lo) {
            (Endpoint::Finite(a), Endpoint::Finite(b)) => b - a,
            _ => unreachable!("disjoint closures have finite facing endpoints"),
        }
    }

    // Whether `next` (starting no earlier than self) overlaps or abuts self so
    // that their union is an interval.
    fn merges_with(&self, next: &Interval) -> bool {
        match next.lo.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed || next.lo_closed,
            Ordering::Greater => false,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_degenerate() {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// A finite union of intervals in canonical form: components nonempty, sorted,
/// pairwise disjoint and maximal. Two values are equal iff they denote the same
/// point set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_intervals<I: IntoIterator<Item = Interval>>(raw: I) -> Self {
        let mut parts: Vec<Interval> = raw.into_iter().filter(|iv| !iv.is_empty()).collect();
        parts.sort_by(|a, b| lower_cmp((&a.lo, a.lo_closed), (&b.lo, b.lo_closed)));
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for iv in parts {
            match merged.last_mut() {
                Some(cur) if cur.merges_with(&iv) => {
                    if upper_cmp((&iv.hi, iv.hi_closed), (&cur.hi, cur.hi_closed)) == Ordering::Greater {
                        cur.hi = iv.hi;
                        cur.hi_closed = iv.hi_closed;
                    }
                }
                _ => merged.push(iv),
            }
        }
        IntervalUnion { parts: merged }
    }

    pub fn single(iv: Interval) -> Self {
        Self::from_intervals([iv])
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.parts.iter().any(|iv| iv.contains(x))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        Self::from_intervals(self.parts.iter().chain(other.parts.iter()).cloned())
    }

    pub fn intersection(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                let c = a.intersect(b);
                if !c.is_empty() {
                    out.push(c);
                }
            }
        }
        Self::from_intervals(out)
    }

    /// `universe ∖ self`.
    pub fn complement_within(&self, universe: &Interval) -> IntervalUnion {
        let mut out = Vec::new();
        let mut start = (universe.lo.clone(), universe.lo_closed);
        for p in &self.parts {
            let p = p.intersect(universe);
            if p.is_empty() {
                continue;
            }
            out.push(Interval::new(start.0, start.1, p.lo.clone(), !p.lo_closed));
            start = (p.hi.clone(), !p.hi_closed);
        }
        out.push(Interval::new(start.0, start.1, universe.hi.clone(), universe.hi_closed));
        Self::from_intervals(out)
    }

    pub fn difference(&self, other: &IntervalUnion) -> IntervalUnion {
        self.intersection(&other.complement_within(&Interval::real_line()))
    }

    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        // Each part is connected, so it must sit inside a single maximal component.
        self.parts.iter().all(|a| other.parts.iter().any(|b| a.is_subset_of(b)))
    }

    pub fn intersects(&self, other: &IntervalUnion) -> bool {
        self.parts.iter().any(|a| other.parts.iter().any(|b| a.intersects(b)))
    }

    pub fn closure(&self) -> IntervalUnion {
        Self::from_intervals(self.parts.iter().map(Interval::closure))
    }

    /// Infimum of `|x - y|` over the two sets; `None` if either is empty.
    pub fn distance(&self, other: &IntervalUnion) -> Option<Rational> {
        self.parts
            .iter()
            .flat_map(|a| other.parts.iter().map(move |b| a.distance(b)))
            .min()
    }

    pub fn sample_point(&self) -> Option<Rational> {
        self.parts.first().and_then(Interval::sample_point)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn open(a: i64, b: i64) -> Interval {
        Interval::open(int(a), int(b))
    }

    #[test]
    fn overlapping_parts_merge() {
        let u = IntervalUnion::from_intervals([open(0, 1), Interval::open(rat(1, 2), int(2))]);
        assert_eq!(u.parts(), &[open(0, 2)]);
    }

    #[test]
    fn touching_open_parts_stay_apart() {
        let u = IntervalUnion::from_intervals([open(1, 2), open(0, 1)]);
        assert_eq!(u.parts(), &[open(0, 1), open(1, 2)]);
    }

    #[test]
    fn touching_half_closed_parts_merge() {
        let a = Interval::new(int(0).into(), true, int(1).into(), false);
        let b = Interval::new(int(1).into(), true, int(2).into(), false);
        let u = IntervalUnion::from_intervals([a, b]);
        assert_eq!(u.parts(), &[Interval::new(int(0).into(), true, int(2).into(), false)]);
    }

    #[test]
    fn complement_of_open_in_line() {
        let u = IntervalUnion::single(open(0, 1));
        let c = u.complement_within(&Interval::real_line());
        assert_eq!(
            c.parts(),
            &[
                Interval::new(Endpoint::NegInf, false, int(0).into(), true),
                Interval::new(int(1).into(), true, Endpoint::PosInf, false),
            ]
        );
        assert_eq!(c.complement_within(&Interval::real_line()), u);
    }

    #[test]
    fn subset_and_distance() {
        let k = IntervalUnion::single(Interval::closed(rat(1, 4), rat(1, 2)));
        assert!(k.is_subset_of(&IntervalUnion::single(open(0, 1))));
        assert!(!k.is_subset_of(&IntervalUnion::single(Interval::open(int(0), rat(1, 2)))));
        let a = IntervalUnion::single(Interval::closed(int(0), int(1)));
        let b = IntervalUnion::single(Interval::closed(int(2), int(3)));
        assert_eq!(a.distance(&b), Some(int(1)));
        assert_eq!(a.distance(&IntervalUnion::single(open(1, 2))), Some(int(0)));
        assert_eq!(a.distance(&IntervalUnion::empty()), None);
    }

    #[test]
    fn degenerate_points() {
        let p = Interval::point(int(3));
        assert!(!p.is_empty());
        assert!(Interval::open(int(3), int(3)).is_empty());
        assert!(p.contains(&int(3)));
    }
}
