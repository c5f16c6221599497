//! The pinned countable basis `{U_n}` of the ambient space and its compact
//! exhaustions `{K_mn}`.
//!
//! The order is normative: every metric value depends on it.
//!
//! * Rationals are listed as reduced pairs `(p, q)`, `q ≥ 1`, by `|p| + q`
//!   ascending, ties by `p` ascending: `0, -1, 1, -2, -1/2, 1/2, 2, …`.
//! * Candidate intervals `I_k = (a, b) ∩ X` run over index pairs `(i, j)` by
//!   `i + j` ascending, ties by `i` ascending, keeping `r_i < r_j` and skipping
//!   pairs that miss `X`.
//! * `U_n` is the union of `I_{k+1}` over the set bits `k` of `n`.
//! * `K_mn` retracts each relatively open endpoint of each component of `U_n`
//!   inward by `L / (2(m+1))`, `L` the component length.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::interval::{Endpoint, Interval, IntervalUnion};
use crate::rational::{int, Rational};
use crate::sets::{interior, CompactSet, OpenSet, PointSet};
use crate::space::AmbientSpace;

/// Index `n ≥ 1` of a basis element; `U_0 = ∅` is never enumerated.
pub type BasisIndex = u64;

/// Lazily walks the pinned rational order.
#[derive(Clone, Debug)]
pub struct RationalEnumerator {
    height: i64,
    p: i64,
}

impl RationalEnumerator {
    pub fn new() -> Self {
        RationalEnumerator { height: 1, p: 0 }
    }
}

impl Default for RationalEnumerator {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for RationalEnumerator {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        loop {
            if self.p > self.height - 1 {
                self.height += 1;
                self.p = -(self.height - 1);
            }
            let p = self.p;
            self.p += 1;
            let q = self.height - p.abs();
            if q >= 1 && p.abs().gcd(&q) == 1 {
                return Some(Rational::new(BigInt::from(p), BigInt::from(q)));
            }
        }
    }
}

/// The `i`-th rational (`i ≥ 1`) in the pinned order.
///
/// # Panics
/// If `i == 0`.
pub fn enumerate_rational(i: u64) -> Rational {
    assert!(i >= 1, "rational enumeration is 1-indexed");
    RationalEnumerator::new().nth((i - 1) as usize).expect("enumeration is infinite")
}

const CANDIDATES: usize = 64;

fn candidates(space: AmbientSpace) -> &'static [Interval] {
    static TABLES: OnceLock<[Vec<Interval>; 2]> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        [build_candidates(AmbientSpace::Reals), build_candidates(AmbientSpace::UnitInterval)]
    });
    match space {
        AmbientSpace::Reals => &tables[0],
        AmbientSpace::UnitInterval => &tables[1],
    }
}

fn build_candidates(space: AmbientSpace) -> Vec<Interval> {
    let universe = space.universe();
    let mut rationals = RationalEnumerator::new();
    let mut seen: Vec<Rational> = Vec::new();
    let mut out = Vec::with_capacity(CANDIDATES);
    let mut diag = 2usize;
    while out.len() < CANDIDATES {
        while seen.len() < diag {
            seen.push(rationals.next().unwrap());
        }
        for i in 1..diag {
            let (a, b) = (&seen[i - 1], &seen[diag - i - 1]);
            if a >= b {
                continue;
            }
            let iv = Interval::open(a.clone(), b.clone()).intersect(&universe);
            if !iv.is_empty() {
                out.push(iv);
                if out.len() == CANDIDATES {
                    break;
                }
            }
        }
        diag += 1;
    }
    out
}

/// The `k`-th candidate interval `I_k` (`1 ≤ k ≤ 64`).
pub fn candidate_interval(k: usize, space: AmbientSpace) -> &'static Interval {
    &candidates(space)[k - 1]
}

/// `U_n`: always nonempty, bounded, with compact closure in X.
///
/// # Panics
/// If `n == 0`.
pub fn basis_element(n: BasisIndex, space: AmbientSpace) -> OpenSet {
    assert!(n >= 1, "U_0 is reserved");
    let table = candidates(space);
    let parts = (0..64).filter(|bit| n >> bit & 1 == 1).map(|bit| table[bit].clone());
    OpenSet::from_union_unchecked(space, IntervalUnion::from_intervals(parts))
}

/// `K_mn`. Nonempty, `K_mn ⊆ int(K_{(m+1)n})`, and `⋃_m K_mn = U_n`.
///
/// # Panics
/// If `m == 0` or `n == 0`.
pub fn compact_exhaustion(m: u64, n: BasisIndex, space: AmbientSpace) -> CompactSet {
    assert!(m >= 1, "exhaustion levels start at 1");
    shrink(&basis_element(n, space), m)
}

pub(crate) fn shrink(u: &OpenSet, m: u64) -> CompactSet {
    let denom = int(2) * Rational::from_integer(BigInt::from(m + 1));
    let parts = u
        .components()
        .iter()
        .map(|c| {
            let (Endpoint::Finite(a), Endpoint::Finite(b)) = (&c.lo, &c.hi) else {
                unreachable!("basis components are bounded")
            };
            let margin = (b - a) / &denom;
            let lo = if c.lo_closed { a.clone() } else { a + &margin };
            let hi = if c.hi_closed { b.clone() } else { b - &margin };
            Interval::closed(lo, hi)
        })
        .collect();
    CompactSet::new(u.space(), parts).expect("shrunk components are closed and bounded")
}

/// One cell of the `(m, n)` grid: `K_mn` together with `int(K_{(m+1)n})`.
#[derive(Clone, Debug)]
pub struct ExhaustionLevel {
    pub m: u64,
    pub n: BasisIndex,
    pub compact: CompactSet,
    pub next_interior: OpenSet,
}

impl ExhaustionLevel {
    pub fn new(m: u64, n: BasisIndex, space: AmbientSpace) -> Self {
        let u = basis_element(n, space);
        ExhaustionLevel { m, n, compact: shrink(&u, m), next_interior: interior(&shrink(&u, m + 1)) }
    }

    /// Whether the closed set `X ∖ open` meets `int(K_{(m+1)n})`.
    pub fn complement_hits(&self, open: &OpenSet) -> bool {
        !self.next_interior.points().is_subset_of(open.points())
    }
}

/// Cached grid of levels for `n ≤ n_cut`, `m ≤ m_cut`, row-major by `n`.
#[derive(Debug)]
pub struct ExhaustionGrid {
    pub space: AmbientSpace,
    pub n_cut: u32,
    pub m_cut: u32,
    levels: Vec<ExhaustionLevel>,
}

impl ExhaustionGrid {
    pub fn get(space: AmbientSpace, n_cut: u32, m_cut: u32) -> Arc<ExhaustionGrid> {
        type Cache = Mutex<HashMap<(AmbientSpace, u32, u32), Arc<ExhaustionGrid>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(g) = cache.lock().unwrap().get(&(space, n_cut, m_cut)) {
            return g.clone();
        }
        let mut levels = Vec::with_capacity((n_cut * m_cut) as usize);
        for n in 1..=n_cut as u64 {
            for m in 1..=m_cut as u64 {
                levels.push(ExhaustionLevel::new(m, n, space));
            }
        }
        let grid = Arc::new(ExhaustionGrid { space, n_cut, m_cut, levels });
        cache.lock().unwrap().entry((space, n_cut, m_cut)).or_insert(grid).clone()
    }

    pub fn levels(&self) -> &[ExhaustionLevel] {
        &self.levels
    }

    pub fn level(&self, m: u64, n: BasisIndex) -> &ExhaustionLevel {
        &self.levels[((n - 1) * self.m_cut as u64 + (m - 1)) as usize]
    }
}

/// Least `m ≤ bound` with `x ∈ K_mn`, by bisection on the nested levels.
pub fn exhaustion_level_of(x: &Rational, n: BasisIndex, space: AmbientSpace, bound: u64) -> Option<u64> {
    let u = basis_element(n, space);
    if !u.contains(x) {
        return None;
    }
    let covered = |m: u64| shrink(&u, m).points().contains(x);
    if !covered(bound) {
        return None;
    }
    let (mut lo, mut hi) = (1u64, bound);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if covered(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}
