//! Closed subsets of X with the Fell hit-and-miss subbasis and `d_Fell`.

use std::fmt;

use num_traits::{One, Zero};

use crate::basis::ExhaustionLevel;
use crate::error::{Error, Result};
use crate::interval::IntervalUnion;
use crate::metric::{check_tol, Enclosure, TruncationPlan};
use crate::partial_map::PartialMap;
use crate::rational::Rational;
use crate::sets::{same_space, CompactSet, OpenSet, PointSet};
use crate::space::AmbientSpace;

/// `X ∖ complement`. Both `∅` and `X` are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedSet {
    complement: OpenSet,
}

impl ClosedSet {
    pub fn from_complement(complement: OpenSet) -> Self {
        ClosedSet { complement }
    }

    pub fn empty(space: AmbientSpace) -> Self {
        ClosedSet { complement: OpenSet::whole(space) }
    }

    pub fn whole(space: AmbientSpace) -> Self {
        ClosedSet { complement: OpenSet::empty(space) }
    }

    pub fn space(&self) -> AmbientSpace {
        self.complement.space()
    }

    pub fn complement(&self) -> &OpenSet {
        &self.complement
    }

    /// The points of the set as an interval union.
    pub fn points(&self) -> IntervalUnion {
        self.complement.complement()
    }

    pub fn is_empty(&self) -> bool {
        self.complement.points() == &IntervalUnion::single(self.space().universe())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.space().universe().contains(x) && !self.complement.contains(x)
    }

    /// Whether the set meets the open set `v`, with no precondition on `v`.
    pub fn meets(&self, v: &OpenSet) -> bool {
        !v.points().is_subset_of(self.complement.points())
    }
}

impl fmt::Display for ClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.points().fmt(f)
    }
}

/// `D(f) = X ∖ dom(f)`.
pub fn complement_of_domain(f: &PartialMap) -> ClosedSet {
    ClosedSet::from_complement(f.domain().clone())
}

/// `I(f) = X ∖ im(f)`.
pub fn complement_of_image(f: &PartialMap) -> Result<ClosedSet> {
    if f.codomain() != f.space() {
        return Err(Error::MixedSpaces);
    }
    Ok(ClosedSet::from_complement(f.image_open()?))
}

/// `A ∈ (X ∖ K)⁺`, i.e. `A ∩ K = ∅`.
pub fn fell_miss(a: &ClosedSet, k: &CompactSet) -> Result<bool> {
    same_space(a.complement(), k)?;
    Ok(k.points().is_subset_of(a.complement().points()))
}

/// `A ∈ V⁻`, i.e. `A ∩ V ≠ ∅`.
pub fn fell_hit(a: &ClosedSet, v: &OpenSet) -> Result<bool> {
    same_space(a.complement(), v)?;
    if v.is_empty() {
        return Err(Error::Precondition("hit set must be nonempty".into()));
    }
    Ok(a.meets(v))
}

/// The summand `t_mn`: 1 exactly when one of the sets hits `int(K_{(m+1)n})`
/// and the other does not.
pub fn fell_term(a: &ClosedSet, b: &ClosedSet, level: &ExhaustionLevel) -> Rational {
    if level.complement_hits(a.complement()) == level.complement_hits(b.complement()) {
        Rational::zero()
    } else {
        Rational::one()
    }
}

pub fn d_fell(a: &ClosedSet, b: &ClosedSet, tol: &Rational) -> Result<Enclosure> {
    check_tol(tol)?;
    d_fell_with_plan(a, b, &TruncationPlan::for_tolerance(tol)?)
}

pub fn d_fell_with_plan(a: &ClosedSet, b: &ClosedSet, plan: &TruncationPlan) -> Result<Enclosure> {
    if a.space() != b.space() {
        return Err(Error::MixedSpaces);
    }
    let grid = plan.grid(a.space());
    Ok(plan.enclose(&grid, |level| fell_term(a, b, level)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{Endpoint, Interval};
    use crate::rational::{int, pow2_neg, rat};

    const R: AmbientSpace = AmbientSpace::Reals;
    const U: AmbientSpace = AmbientSpace::UnitInterval;

    fn open(a: i64, b: i64) -> OpenSet {
        OpenSet::new(R, vec![Interval::open(int(a), int(b))]).unwrap()
    }

    #[test]
    fn domain_complements() {
        assert!(complement_of_domain(&PartialMap::empty(R, R)).points() == IntervalUnion::single(Interval::real_line()));
        let d = complement_of_domain(&PartialMap::identity(&open(0, 1)));
        let expected = IntervalUnion::from_intervals([
            Interval::new(Endpoint::NegInf, false, int(0).into(), true),
            Interval::new(int(1).into(), true, Endpoint::PosInf, false),
        ]);
        assert_eq!(d.points(), expected);
        assert!(complement_of_domain(&PartialMap::identity(&OpenSet::whole(U))).is_empty());
    }

    #[test]
    fn image_complements() {
        let two = PartialMap::affine(&open(0, 1), R, &int(2), &int(0)).unwrap();
        assert_eq!(complement_of_image(&two).unwrap(), ClosedSet::from_complement(open(0, 2)));
        assert_eq!(complement_of_image(&PartialMap::empty(R, R)).unwrap(), ClosedSet::whole(R));
        let zero = PartialMap::affine(&open(0, 1), R, &int(0), &int(0)).unwrap();
        assert!(matches!(complement_of_image(&zero), Err(Error::Representation(_))));
    }

    #[test]
    fn hit_and_miss() {
        let k = CompactSet::interval(R, rat(1, 4), rat(1, 2)).unwrap();
        let a = ClosedSet::from_complement(open(0, 1));
        assert!(fell_miss(&ClosedSet::empty(R), &k).unwrap());
        assert!(!fell_miss(&ClosedSet::whole(R), &k).unwrap());
        assert!(fell_miss(&a, &k).unwrap());
        let v = OpenSet::new(R, vec![Interval::open(rat(1, 2), rat(3, 2))]).unwrap();
        assert!(fell_hit(&ClosedSet::whole(R), &v).unwrap());
        assert!(!fell_hit(&ClosedSet::empty(R), &v).unwrap());
        assert!(fell_hit(&a, &v).unwrap());
        assert!(fell_hit(&a, &OpenSet::empty(R)).is_err());
    }

    #[test]
    fn d_fell_examples() {
        let tol = pow2_neg(10);
        let a = ClosedSet::from_complement(open(0, 1));
        let same = d_fell(&a, &a, &tol).unwrap();
        assert_eq!(same.lo, int(0));
        assert!(same.width() <= tol);
        let far = d_fell(&ClosedSet::empty(R), &ClosedSet::whole(R), &tol).unwrap();
        assert!(far.contains(&int(1)));
        assert!(d_fell(&a, &a, &int(-1)).is_err());
        assert_eq!(d_fell(&a, &ClosedSet::empty(U), &tol), Err(Error::MixedSpaces));
    }
}
