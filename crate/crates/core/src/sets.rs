//! Open and compact subsets of the ambient space, and the exact predicates
//! between them.

use std::fmt;

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::rational::Rational;
use crate::space::AmbientSpace;

/// A subset of an ambient space carried as a canonical interval union.
pub trait PointSet {
    fn space(&self) -> AmbientSpace;
    fn points(&self) -> &IntervalUnion;
}

/// A relatively open subset of X, possibly empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpenSet {
    space: AmbientSpace,
    set: IntervalUnion,
}

impl OpenSet {
    /// Canonicalizes a list of relatively open intervals. Idempotent and
    /// insensitive to the order of `raw`.
    pub fn new(space: AmbientSpace, raw: Vec<Interval>) -> Result<Self> {
        if let Some(bad) = raw.iter().find(|iv| !space.is_relatively_open(iv)) {
            return Err(Error::Representation(format!("{bad} is not a nonempty open subset of {space}")));
        }
        Ok(OpenSet { space, set: IntervalUnion::from_intervals(raw) })
    }

    pub fn empty(space: AmbientSpace) -> Self {
        OpenSet { space, set: IntervalUnion::empty() }
    }

    pub fn whole(space: AmbientSpace) -> Self {
        OpenSet { space, set: IntervalUnion::single(space.universe()) }
    }

    pub(crate) fn from_union_unchecked(space: AmbientSpace, set: IntervalUnion) -> Self {
        debug_assert!(set.parts().iter().all(|iv| space.is_relatively_open(iv)));
        OpenSet { space, set }
    }

    /// Accepts an arbitrary union if every component is relatively open.
    pub fn from_union(space: AmbientSpace, set: IntervalUnion) -> Result<Self> {
        Self::new(space, set.parts().to_vec())
    }

    pub fn components(&self) -> &[Interval] {
        self.set.parts()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.set.contains(x)
    }

    pub fn union(&self, other: &OpenSet) -> Result<OpenSet> {
        same_space(self, other)?;
        Ok(OpenSet { space: self.space, set: self.set.union(&other.set) })
    }

    pub fn intersection(&self, other: &OpenSet) -> Result<OpenSet> {
        same_space(self, other)?;
        Ok(OpenSet { space: self.space, set: self.set.intersection(&other.set) })
    }

    /// `X ∖ self` as an interval union.
    pub fn complement(&self) -> IntervalUnion {
        self.set.complement_within(&self.space.universe())
    }
}

impl PointSet for OpenSet {
    fn space(&self) -> AmbientSpace {
        self.space
    }
    fn points(&self) -> &IntervalUnion {
        &self.set
    }
}

impl fmt::Display for OpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.set.fmt(f)
    }
}

/// A finite union of closed bounded intervals inside X, possibly empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompactSet {
    space: AmbientSpace,
    set: IntervalUnion,
}

impl CompactSet {
    pub fn new(space: AmbientSpace, raw: Vec<Interval>) -> Result<Self> {
        let universe = space.universe();
        for iv in &raw {
            if iv.is_empty() || !iv.is_bounded() || !iv.lo_closed || !iv.hi_closed || !iv.is_subset_of(&universe) {
                return Err(Error::Representation(format!("{iv} is not a closed bounded subset of {space}")));
            }
        }
        Ok(CompactSet { space, set: IntervalUnion::from_intervals(raw) })
    }

    pub fn interval(space: AmbientSpace, a: Rational, b: Rational) -> Result<Self> {
        Self::new(space, vec![Interval::closed(a, b)])
    }

    pub fn empty(space: AmbientSpace) -> Self {
        CompactSet { space, set: IntervalUnion::empty() }
    }

    pub fn components(&self) -> &[Interval] {
        self.set.parts()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

impl PointSet for CompactSet {
    fn space(&self) -> AmbientSpace {
        self.space
    }
    fn points(&self) -> &IntervalUnion {
        &self.set
    }
}

impl fmt::Display for CompactSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.set.fmt(f)
    }
}

pub(crate) fn same_space<A: PointSet + ?Sized, B: PointSet + ?Sized>(a: &A, b: &B) -> Result<()> {
    if a.space() == b.space() {
        Ok(())
    } else {
        Err(Error::MixedSpaces)
    }
}

/// Canonical form of a union of relatively open intervals.
pub fn normalize_open(raw: Vec<Interval>, space: AmbientSpace) -> Result<OpenSet> {
    OpenSet::new(space, raw)
}

pub fn subset<A: PointSet + ?Sized, B: PointSet + ?Sized>(a: &A, b: &B) -> Result<bool> {
    same_space(a, b)?;
    Ok(a.points().is_subset_of(b.points()))
}

pub fn intersects<A: PointSet + ?Sized, B: PointSet + ?Sized>(a: &A, b: &B) -> Result<bool> {
    same_space(a, b)?;
    Ok(a.points().intersects(b.points()))
}

/// Relative interior. Components of a compact set are separated, so the
/// interior is the union of the component interiors.
pub fn interior(k: &CompactSet) -> OpenSet {
    let parts = k
        .components()
        .iter()
        .map(|iv| k.space.relative_interior(iv))
        .filter(|iv| !iv.is_empty());
    OpenSet::from_union_unchecked(k.space, IntervalUnion::from_intervals(parts))
}

pub fn closure(u: &OpenSet) -> IntervalUnion {
    u.set.closure()
}

/// `inf |x - y|` over `x ∈ k`, `y ∈ s`; `None` if either set is empty.
pub fn distance<S: PointSet + ?Sized>(k: &CompactSet, s: &S) -> Result<Option<Rational>> {
    same_space(k, s)?;
    Ok(k.points().distance(s.points()))
}
