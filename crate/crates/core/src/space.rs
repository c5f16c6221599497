use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::interval::{Endpoint, Interval};
use crate::rational::Rational;

/// The ambient space X: the real line or the compact unit interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AmbientSpace {
    Reals,
    UnitInterval,
}

impl AmbientSpace {
    pub fn universe(self) -> Interval {
        match self {
            AmbientSpace::Reals => Interval::real_line(),
            AmbientSpace::UnitInterval => Interval::closed(Rational::zero(), Rational::one()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AmbientSpace::Reals => "reals",
            AmbientSpace::UnitInterval => "unit_interval",
        }
    }

    fn closed_lo(self, e: &Endpoint) -> bool {
        self == AmbientSpace::UnitInterval && e.finite().is_some_and(Zero::is_zero)
    }

    fn closed_hi(self, e: &Endpoint) -> bool {
        self == AmbientSpace::UnitInterval && e.finite().is_some_and(One::is_one)
    }

    /// Nonempty, inside X, and open relative to X: a closed endpoint is only
    /// allowed where it coincides with a boundary point of X.
    pub fn is_relatively_open(self, iv: &Interval) -> bool {
        !iv.is_empty()
            && iv.is_subset_of(&self.universe())
            && !iv.is_degenerate()
            && (!iv.lo_closed || self.closed_lo(&iv.lo))
            && (!iv.hi_closed || self.closed_hi(&iv.hi))
    }

    /// Interior of an interval relative to X.
    pub fn relative_interior(self, iv: &Interval) -> Interval {
        if iv.is_empty() || iv.is_degenerate() {
            return Interval::open(Rational::zero(), Rational::zero());
        }
        Interval::new(
            iv.lo.clone(),
            iv.lo_closed && self.closed_lo(&iv.lo),
            iv.hi.clone(),
            iv.hi_closed && self.closed_hi(&iv.hi),
        )
    }
}

impl fmt::Display for AmbientSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AmbientSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "reals" => Ok(AmbientSpace::Reals),
            "unit_interval" => Ok(AmbientSpace::UnitInterval),
            other => Err(Error::Parse(format!("unknown space {other:?}"))),
        }
    }
}
