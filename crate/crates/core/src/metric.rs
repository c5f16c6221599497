//! Sup-distances on compacta, the pseudometrics `β_mn`, the metric `β` on
//! `C_od(X, ℝ)` and `d_γ` on partial homeomorphisms, plus membership tests for
//! the subbasic open sets.
//!
//! Codomain distances are truncated: `d(x, y) = min(|x - y|, 1)`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::basis::{basis_element, BasisIndex, ExhaustionGrid, ExhaustionLevel};
use crate::error::{Error, Result};
use crate::interval::IntervalUnion;
use crate::partial_map::{GammaMap, PartialMap};
use crate::rational::{max_rat, min_rat, pow2_neg, Rational};
use crate::sets::{same_space, CompactSet, OpenSet, PointSet};

/// A rational interval `[lo, hi]` certified to contain a series value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Enclosure {
    #[serde(with = "crate::rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "enclosure bounds out of order");
        Enclosure { lo, hi }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn sum(&self, other: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Cutoffs for the double series `Σ_n Σ_m 2^{-(m+n)} t_mn` with `0 ≤ t_mn ≤ 1`.
/// The discarded tail is at most `2^{-N} + 2^{-M}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TruncationPlan {
    pub n_cut: u32,
    pub m_cut: u32,
}

impl TruncationPlan {
    pub fn new(n_cut: u32, m_cut: u32) -> Result<Self> {
        if n_cut == 0 || m_cut == 0 {
            return Err(Error::Precondition("truncation cutoffs must be at least 1".into()));
        }
        Ok(TruncationPlan { n_cut, m_cut })
    }

    /// The balanced plan `N = M` with the least `N` such that `2^{1-N} ≤ tol`.
    pub fn for_tolerance(tol: &Rational) -> Result<Self> {
        check_tol(tol)?;
        let mut n = 1u32;
        while pow2_neg(n - 1) > *tol {
            n += 1;
        }
        Ok(TruncationPlan { n_cut: n, m_cut: n })
    }

    pub fn tail(&self) -> Rational {
        pow2_neg(self.n_cut) + pow2_neg(self.m_cut)
    }

    pub fn grid(&self, space: crate::space::AmbientSpace) -> std::sync::Arc<ExhaustionGrid> {
        ExhaustionGrid::get(space, self.n_cut, self.m_cut)
    }

    /// Sums `2^{-(m+n)} term(level)` over the plan and adds the tail bound.
    pub fn enclose<F>(&self, grid: &ExhaustionGrid, mut term: F) -> Enclosure
    where
        F: FnMut(&ExhaustionLevel) -> Rational,
    {
        let mut acc = Rational::zero();
        for level in grid.levels() {
            let t = term(level);
            if !t.is_zero() {
                acc += t * pow2_neg((level.m + level.n) as u32);
            }
        }
        let hi = &acc + self.tail();
        Enclosure::new(acc, hi)
    }
}

pub(crate) fn check_tol(tol: &Rational) -> Result<()> {
    if tol.is_positive() {
        Ok(())
    } else {
        Err(Error::Tolerance(tol.clone()))
    }
}

/// Capped distance `min(|x - y|, 1)`.
pub fn capped(x: &Rational, y: &Rational) -> Rational {
    min_rat((x - y).abs(), Rational::one())
}

/// `d_K(f, g) = sup_{x ∈ K} min(|f(x) - g(x)|, 1)`, exactly.
///
/// On each component of `K` both maps are linear between merged
/// breakpoints, so the sup is attained at one of them.
pub fn sup_distance(f: &PartialMap, g: &PartialMap, k: &CompactSet) -> Result<Rational> {
    same_space(k, f.domain())?;
    same_space(k, g.domain())?;
    if k.is_empty() {
        return Err(Error::Precondition("sup distance needs a nonempty compact".into()));
    }
    if let Some(point) = f.uncovered_point(k).or_else(|| g.uncovered_point(k)) {
        return Err(Error::Domain { point });
    }
    Ok(sup_distance_unchecked(f, g, k))
}

pub(crate) fn sup_distance_unchecked(f: &PartialMap, g: &PartialMap, k: &CompactSet) -> Rational {
    let one = Rational::one();
    let mut best = Rational::zero();
    for c in k.components() {
        let (a, b) = (c.lo.finite().unwrap(), c.hi.finite().unwrap());
        let fp = f.piece_containing(a).unwrap();
        let gp = g.piece_containing(a).unwrap();
        let points = [a, b].into_iter().chain(fp.breakpoints_within(a, b)).chain(gp.breakpoints_within(a, b));
        for x in points {
            let d = (fp.eval(x) - gp.eval(x)).abs();
            if d >= one {
                return one;
            }
            best = max_rat(best, d);
        }
    }
    best
}

/// Whether `D(f)` meets `int(K_{(m+1)n})`, i.e. `f` belongs to the set `L`
/// of the case analysis.
pub fn in_hit_set(f: &PartialMap, level: &ExhaustionLevel) -> bool {
    level.complement_hits(f.domain())
}

/// The three-case term on one grid cell.
pub fn beta_term(f: &PartialMap, g: &PartialMap, level: &ExhaustionLevel) -> Rational {
    match (in_hit_set(f, level), in_hit_set(g, level)) {
        (true, true) => Rational::zero(),
        // Neither domain misses int(K_{(m+1)n}) ⊇ K_mn, so d_K is defined.
        (false, false) => sup_distance_unchecked(f, g, &level.compact),
        _ => Rational::one(),
    }
}

/// A replaceable `β_mn` case table (the axiom suites accept alternatives).
pub type BetaTermFn = fn(&PartialMap, &PartialMap, &ExhaustionLevel) -> Rational;

/// `β_mn(f, g) ∈ [0, 1]`.
///
/// # Panics
/// If `m == 0` or `n == 0`.
pub fn beta_mn(f: &PartialMap, g: &PartialMap, m: u64, n: BasisIndex) -> Result<Rational> {
    if f.space() != g.space() {
        return Err(Error::MixedSpaces);
    }
    Ok(beta_term(f, g, &ExhaustionLevel::new(m, n, f.space())))
}

/// `β(f, g) = Σ_n Σ_m 2^{-(m+n)} β_mn(f, g)` to width at most `tol`.
pub fn beta(f: &PartialMap, g: &PartialMap, tol: &Rational) -> Result<Enclosure> {
    beta_with_plan(f, g, &TruncationPlan::for_tolerance(tol)?)
}

pub fn beta_with_plan(f: &PartialMap, g: &PartialMap, plan: &TruncationPlan) -> Result<Enclosure> {
    beta_with_term(f, g, plan, beta_term)
}

pub fn beta_with_term(f: &PartialMap, g: &PartialMap, plan: &TruncationPlan, term: BetaTermFn) -> Result<Enclosure> {
    if f.space() != g.space() {
        return Err(Error::MixedSpaces);
    }
    let grid = plan.grid(f.space());
    Ok(plan.enclose(&grid, |level| term(f, g, level)))
}

/// `d_γ(f, g) = β(f, g) + β(f⁻¹, g⁻¹)`, each half to `tol / 2`.
pub fn d_gamma(f: &GammaMap, g: &GammaMap, tol: &Rational) -> Result<Enclosure> {
    check_tol(tol)?;
    let half = tol / Rational::from_integer(2.into());
    let forward = beta(f, g, &half)?;
    let backward = beta(&f.inverse(), &g.inverse(), &half)?;
    Ok(forward.sum(&backward))
}

pub fn d_gamma_with_plan(f: &GammaMap, g: &GammaMap, plan: &TruncationPlan) -> Result<Enclosure> {
    let forward = beta_with_plan(f, g, plan)?;
    let backward = beta_with_plan(&f.inverse(), &g.inverse(), plan)?;
    Ok(forward.sum(&backward))
}

/// `f ∈ ⟨K, V⟩`: `K ⊆ dom(f)` and `f(K) ⊆ V`.
pub fn in_compact_open(f: &PartialMap, k: &CompactSet, v: &OpenSet) -> Result<bool> {
    same_space(k, f.domain())?;
    if v.space() != f.codomain() {
        return Err(Error::MixedSpaces);
    }
    if k.is_empty() {
        return Ok(true);
    }
    if f.uncovered_point(k).is_some() {
        return Ok(false);
    }
    Ok(f.image_of(k)?.is_subset_of(v.points()))
}

/// `f ∈ ⟨K, V⟩⁻¹`: `K ⊆ im(f)` and `f⁻¹(K) ⊆ V`.
pub fn in_compact_open_inv(f: &GammaMap, k: &CompactSet, v: &OpenSet) -> Result<bool> {
    same_space(k, f.domain())?;
    same_space(v, f.domain())?;
    if k.is_empty() {
        return Ok(true);
    }
    if !k.points().is_subset_of(f.image().points()) {
        return Ok(false);
    }
    Ok(f.preimage(k.points()).is_subset_of(v.points()))
}

/// `g ∈ B_K(f, ε)`: `K ⊆ dom(g)` and `d_K(f, g) < ε`.
pub fn in_ball(g: &PartialMap, f: &PartialMap, k: &CompactSet, eps: &Rational) -> Result<bool> {
    if f.is_empty() {
        return Err(Error::Precondition("ball centre must be a nonempty map".into()));
    }
    if k.is_empty() {
        return Err(Error::Precondition("ball compact must be nonempty".into()));
    }
    if !eps.is_positive() {
        return Err(Error::Precondition("ball radius must be positive".into()));
    }
    same_space(k, f.domain())?;
    same_space(k, g.domain())?;
    if let Some(point) = f.uncovered_point(k) {
        return Err(Error::Domain { point });
    }
    if g.uncovered_point(k).is_some() {
        return Ok(false);
    }
    Ok(sup_distance_unchecked(f, g, k) < *eps)
}

/// `ε = min(1, dist(f(K), Y ∖ V)) > 0`, so that `B_K(f, ε) ⊆ ⟨K, V⟩`.
pub fn separation_radius(f: &PartialMap, k: &CompactSet, v: &OpenSet) -> Result<Rational> {
    if k.is_empty() {
        return Err(Error::Precondition("separation needs a nonempty compact".into()));
    }
    if !in_compact_open(f, k, v)? {
        return Err(Error::Precondition("map is not in ⟨K, V⟩".into()));
    }
    let image = f.image_of(k)?;
    let outside: IntervalUnion = v.complement();
    Ok(match image.distance(&outside) {
        Some(d) => min_rat(d, Rational::one()),
        None => Rational::one(),
    })
}

/// Least `n ≤ bound` with `U_n ⊆ dom(f)`, which separates `f` from `∅`.
pub fn empty_separation_witness(f: &PartialMap, bound: u64) -> Result<BasisIndex> {
    if f.is_empty() {
        return Err(Error::Precondition("the empty map is not separated from itself".into()));
    }
    (1..=bound)
        .find(|&n| basis_element(n, f.space()).points().is_subset_of(f.domain().points()))
        .ok_or(Error::SearchExhausted { bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::partial_map::invert;
    use crate::rational::{int, rat};
    use crate::space::AmbientSpace;

    const R: AmbientSpace = AmbientSpace::Reals;
    const U: AmbientSpace = AmbientSpace::UnitInterval;

    fn open(a: Rational, b: Rational) -> OpenSet {
        OpenSet::new(R, vec![Interval::open(a, b)]).unwrap()
    }

    fn lin(a: i64, b: Rational, dom: &OpenSet) -> PartialMap {
        PartialMap::affine(dom, dom.space(), &int(a), &b).unwrap()
    }

    fn k01() -> CompactSet {
        CompactSet::interval(R, int(0), int(1)).unwrap()
    }

    fn total_unit_id() -> PartialMap {
        PartialMap::identity(&OpenSet::whole(U))
    }

    #[test]
    fn plan_for_tolerance() {
        let plan = TruncationPlan::for_tolerance(&pow2_neg(12)).unwrap();
        assert_eq!((plan.n_cut, plan.m_cut), (13, 13));
        assert_eq!(plan.tail(), pow2_neg(12));
        assert_eq!(TruncationPlan::for_tolerance(&int(5)).unwrap().n_cut, 1);
        assert!(matches!(TruncationPlan::for_tolerance(&int(0)), Err(Error::Tolerance(_))));
    }

    #[test]
    fn sup_distance_examples() {
        let dom = open(int(-1), int(2));
        let id = lin(1, int(0), &dom);
        assert_eq!(sup_distance(&id, &id, &k01()).unwrap(), int(0));
        assert_eq!(sup_distance(&id, &lin(1, rat(1, 2), &dom), &k01()).unwrap(), rat(1, 2));
        assert_eq!(sup_distance(&id, &lin(2, int(0), &dom), &k01()).unwrap(), int(1));
        let short = lin(1, int(0), &open(int(0), int(1)));
        assert!(matches!(sup_distance(&short, &id, &k01()), Err(Error::Domain { .. })));
    }

    #[test]
    fn sup_distance_sees_interior_breakpoints() {
        let dom = open(int(-1), int(2));
        let tent = PartialMap::from_node_lists(
            R,
            R,
            vec![(Interval::open(int(-1), int(2)), vec![(int(-1), int(0)), (rat(1, 2), rat(1, 4)), (int(2), int(0))])],
        )
        .unwrap();
        let zero = lin(0, int(0), &dom);
        assert_eq!(sup_distance(&tent, &zero, &k01()).unwrap(), rat(1, 4));
    }

    #[test]
    fn beta_mn_examples() {
        let dom = open(int(0), int(1));
        let f = PartialMap::identity(&dom);
        for (m, n) in [(1, 1), (2, 2), (3, 7)] {
            assert_eq!(beta_mn(&f, &f, m, n).unwrap(), int(0));
        }
        let empty = PartialMap::empty(U, U);
        assert_eq!(beta_mn(&empty, &total_unit_id(), 1, 1).unwrap(), int(1));
        // U_2 = (0,1) is the first basis element inside (0,1).
        let g = lin(1, rat(1, 8), &dom);
        assert_eq!(empty_separation_witness(&f, 100).unwrap(), 2);
        assert_eq!(beta_mn(&f, &g, 1, 2).unwrap(), rat(1, 8));
        // U_1 = (-1,0) is missed by both domains.
        assert_eq!(beta_mn(&f, &g, 1, 1).unwrap(), int(0));
    }

    #[test]
    fn beta_examples() {
        let tol = pow2_neg(10);
        let f = total_unit_id();
        let e = beta(&f, &f, &tol).unwrap();
        assert_eq!(e.lo, int(0));
        assert!(e.width() <= tol);
        let e = beta(&PartialMap::empty(U, U), &f, &tol).unwrap();
        assert!(e.contains(&int(1)));
        let id_r = PartialMap::identity(&OpenSet::whole(R));
        assert!(beta(&PartialMap::empty(R, R), &id_r, &tol).unwrap().contains(&int(1)));
        assert!(beta(&f, &f, &int(0)).is_err());
    }

    #[test]
    fn d_gamma_examples() {
        let tol = pow2_neg(10);
        let id = GammaMap::new(total_unit_id()).unwrap();
        assert_eq!(d_gamma(&id, &id, &tol).unwrap().lo, int(0));
        let empty = GammaMap::new(PartialMap::empty(U, U)).unwrap();
        let e = d_gamma(&empty, &id, &tol).unwrap();
        assert!(e.contains(&int(2)));
        assert!(e.width() <= tol);
    }

    #[test]
    fn compact_open_membership() {
        let dom = open(int(0), int(1));
        let id = PartialMap::identity(&dom);
        let k = CompactSet::interval(R, rat(1, 4), rat(1, 2)).unwrap();
        assert!(in_compact_open(&id, &CompactSet::empty(R), &dom).unwrap());
        assert!(in_compact_open(&id, &k, &dom).unwrap());
        assert!(!in_compact_open(&PartialMap::empty(R, R), &k, &dom).unwrap());
        let g = GammaMap::new(id.clone()).unwrap();
        assert!(in_compact_open_inv(&g, &k, &dom).unwrap());
        let double = invert(&lin(1, int(0), &dom)).unwrap();
        assert!(in_compact_open_inv(&double, &k, &dom).unwrap());
        let two = GammaMap::new(lin(2, int(0), &dom)).unwrap();
        let k2 = CompactSet::interval(R, int(1), rat(3, 2)).unwrap();
        assert!(in_compact_open_inv(&two, &k2, &dom).unwrap());
        let empty = GammaMap::new(PartialMap::empty(R, R)).unwrap();
        assert!(!in_compact_open_inv(&empty, &k, &dom).unwrap());
    }

    #[test]
    fn ball_membership() {
        let dom = open(int(-1), int(2));
        let id = lin(1, int(0), &dom);
        let eps = rat(1, 2);
        assert!(in_ball(&id, &id, &k01(), &eps).unwrap());
        assert!(!in_ball(&PartialMap::empty(R, R), &id, &k01(), &eps).unwrap());
        assert!(!in_ball(&lin(1, rat(1, 2), &dom), &id, &k01(), &eps).unwrap());
        assert!(in_ball(&id, &PartialMap::empty(R, R), &k01(), &eps).is_err());
        assert!(in_ball(&id, &id, &k01(), &int(0)).is_err());
    }

    #[test]
    fn separation_radius_examples() {
        let id = PartialMap::identity(&OpenSet::whole(R));
        assert_eq!(separation_radius(&id, &k01(), &open(int(-1), int(2))).unwrap(), int(1));
        assert_eq!(separation_radius(&id, &k01(), &open(rat(-1, 4), rat(9, 8))).unwrap(), rat(1, 8));
        let two = lin(2, int(0), &open(int(0), int(1)));
        let k = CompactSet::interval(R, rat(1, 4), rat(1, 2)).unwrap();
        assert_eq!(separation_radius(&two, &k, &open(int(0), int(2))).unwrap(), rat(1, 2));
        assert!(separation_radius(&id, &k01(), &open(int(0), int(1))).is_err());
    }

    #[test]
    fn empty_separation_examples() {
        assert_eq!(empty_separation_witness(&total_unit_id(), 10).unwrap(), 1);
        assert!(empty_separation_witness(&PartialMap::empty(R, R), 10).is_err());
        let tiny = PartialMap::identity(&open(int(100), int(101)));
        assert_eq!(empty_separation_witness(&tiny, 50), Err(Error::SearchExhausted { bound: 50 }));
    }
}
