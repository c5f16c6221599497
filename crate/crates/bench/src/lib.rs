//! Fixed inputs shared by the benchmarks.

use opendom_core::rational::{int, rat};
use opendom_core::suites::Sampler;
use opendom_core::{AmbientSpace, ClosedSet, CompactSet, GammaMap, Interval, OpenSet, PartialMap};

pub const SEED: u64 = 42;

/// `n` seeded random maps on `space`.
pub fn maps(space: AmbientSpace, n: u64) -> Vec<PartialMap> {
    (0..n).map(|i| Sampler::new(SEED, "bench.maps", space, i).map(space)).collect()
}

pub fn gammas(space: AmbientSpace, n: u64) -> Vec<GammaMap> {
    (0..n).map(|i| Sampler::new(SEED, "bench.gammas", space, i).gamma(space)).collect()
}

pub fn closed_sets(space: AmbientSpace, n: u64) -> Vec<ClosedSet> {
    (0..n).map(|i| Sampler::new(SEED, "bench.closed", space, i).closed_set(space)).collect()
}

pub fn unit_interval_reals() -> OpenSet {
    OpenSet::new(AmbientSpace::Reals, vec![Interval::open(int(0), int(1))]).unwrap()
}

pub fn quarter_half() -> CompactSet {
    CompactSet::interval(AmbientSpace::Reals, rat(1, 4), rat(1, 2)).unwrap()
}
