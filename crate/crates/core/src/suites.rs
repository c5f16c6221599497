//! Seeded random generators and the invariant suites behind `opendom axioms`.
//!
//! Every case draws from its own ChaCha stream derived from
//! `(seed, suite, space, case)`, so results do not depend on thread count or
//! on which other suites run.

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{basis_element, compact_exhaustion, exhaustion_level_of, ExhaustionGrid, ExhaustionLevel};
use crate::hyperspace::{complement_of_domain, d_fell_with_plan, fell_term, ClosedSet};
use crate::interval::{Endpoint, Interval, IntervalUnion};
use crate::metric::{
    beta_term, beta_with_term, d_gamma_with_plan, in_ball, in_compact_open, in_hit_set, separation_radius, BetaTermFn,
    TruncationPlan,
};
use crate::partial_map::{compose, invert, join, GammaMap, Node, PartialMap, Piece};
use crate::rational::{int, rat, Rational};
use crate::sets::{interior, normalize_open, CompactSet, OpenSet, PointSet};
use crate::space::AmbientSpace;

const SPACES: [AmbientSpace; 2] = [AmbientSpace::Reals, AmbientSpace::UnitInterval];
const MAX_DEN: i64 = 64;
const MAX_NODES: usize = 8;
const WITNESS_LIMIT: usize = 3;

/// Random objects of bounded size: at most 8 nodes per piece, denominators
/// at most 64, domains drawn from the basis.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, suite: &str, space: AmbientSpace, case: u64) -> Self {
        let tag = suite.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag ^ ((space == AmbientSpace::UnitInterval) as u64) << 63);
        rng.set_stream(case);
        Sampler { rng }
    }

    pub fn from_seed(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A rational in `[lo, hi]` with denominator at most 64.
    pub fn rational(&mut self, lo: &Rational, hi: &Rational) -> Rational {
        let q = self.rng.gen_range(1..=MAX_DEN);
        let qq = int(q);
        let a = (lo * &qq).ceil().to_integer();
        let b = (hi * &qq).floor().to_integer();
        if a > b {
            return (lo + hi) / int(2);
        }
        let span: i64 = (&b - &a).try_into().unwrap_or(i64::MAX / 2);
        let k = self.rng.gen_range(0..=span);
        Rational::new(a + k, q.into())
    }

    fn distinct_sorted(&mut self, lo: &Rational, hi: &Rational, count: usize) -> Vec<Rational> {
        let mut xs: Vec<Rational> = (0..count).map(|_| self.rational(lo, hi)).filter(|x| x > lo && x < hi).collect();
        xs.sort();
        xs.dedup();
        xs
    }

    /// Empty, whole, or a union of one or two basis elements.
    pub fn open_set(&mut self, space: AmbientSpace) -> OpenSet {
        match self.rng.gen_range(0..10) {
            0 => OpenSet::empty(space),
            1 => OpenSet::whole(space),
            _ => {
                let mut u = basis_element(self.rng.gen_range(1..4096), space);
                if self.rng.gen_bool(0.3) {
                    u = u.union(&basis_element(self.rng.gen_range(1..4096), space)).unwrap();
                }
                u
            }
        }
    }

    pub fn closed_set(&mut self, space: AmbientSpace) -> ClosedSet {
        ClosedSet::from_complement(self.open_set(space))
    }

    /// A map `X → X` on a random basis domain.
    pub fn map(&mut self, space: AmbientSpace) -> PartialMap {
        let dom = self.open_set(space);
        self.map_on(&dom)
    }

    pub fn map_on(&mut self, dom: &OpenSet) -> PartialMap {
        let space = dom.space();
        let pieces = dom.components().iter().map(|c| self.piece_on(c, space)).collect();
        PartialMap::new(space, space, pieces).expect("sampled pieces are valid")
    }

    fn piece_on(&mut self, c: &Interval, codomain: AmbientSpace) -> Piece {
        let (lo, hi) = window(c);
        let k = self.rng.gen_range(0..=MAX_NODES - 2);
        let mut xs = self.distinct_sorted(&lo, &hi, k);
        if c.lo.is_finite() {
            xs.insert(0, lo.clone());
        }
        if c.hi.is_finite() {
            xs.push(hi.clone());
        }
        if xs.is_empty() {
            xs.push(self.rational(&lo, &hi));
        }
        let (ylo, yhi) = match codomain {
            AmbientSpace::Reals => (int(-4), int(4)),
            AmbientSpace::UnitInterval => (int(0), int(1)),
        };
        let nodes = xs.into_iter().map(|x| Node::new(x, self.rational(&ylo, &yhi))).collect();
        let mut slope = |end: &Endpoint| (!end.is_finite()).then(|| self.rational(&int(-4), &int(4)));
        let left = slope(&c.lo);
        let right = slope(&c.hi);
        Piece::new(c.clone(), nodes, left, right).expect("sampled piece is valid")
    }

    /// A partial homeomorphism mapping each domain component monotonically
    /// onto an open subinterval of itself.
    pub fn gamma(&mut self, space: AmbientSpace) -> GammaMap {
        let dom = self.open_set(space);
        let pieces = dom.components().iter().map(|c| self.gamma_piece(c)).collect();
        GammaMap::new(PartialMap::new(space, space, pieces).expect("sampled pieces are valid"))
            .expect("componentwise monotone maps into disjoint targets are injective")
    }

    fn gamma_piece(&mut self, c: &Interval) -> Piece {
        let (lo, hi) = window(c);
        let len = &hi - &lo;
        let quarter = &len / int(4);
        let t_lo = if c.lo.is_finite() && !c.lo_closed && self.rng.gen_bool(0.5) {
            self.rational(&lo, &(&lo + &quarter))
        } else {
            lo.clone()
        };
        let t_hi = if c.hi.is_finite() && !c.hi_closed && self.rng.gen_bool(0.5) {
            self.rational(&(&hi - &quarter), &hi)
        } else {
            hi.clone()
        };
        let symmetric = c.lo.is_finite() == c.hi.is_finite() && c.lo_closed == c.hi_closed;
        let decreasing = symmetric && self.rng.gen_bool(0.3);
        let k = self.rng.gen_range(0..=MAX_NODES - 2);
        let xs = self.distinct_sorted(&lo, &hi, k);
        let mut ys = self.distinct_sorted(&t_lo, &t_hi, xs.len());
        let xs: Vec<Rational> = xs.into_iter().take(ys.len()).collect();
        ys.truncate(xs.len());
        if decreasing {
            ys.reverse();
        }
        let mut nodes: Vec<Node> = xs.into_iter().zip(ys).map(|(x, y)| Node::new(x, y)).collect();
        let (start, end) = if decreasing { (t_hi, t_lo) } else { (t_lo, t_hi) };
        if c.lo.is_finite() {
            nodes.insert(0, Node::new(lo.clone(), start));
        }
        if c.hi.is_finite() {
            nodes.push(Node::new(hi.clone(), end));
        }
        if nodes.is_empty() {
            nodes.push(Node::new(int(0), self.rational(&int(-2), &int(2))));
        }
        let mut slope = |end: &Endpoint| {
            (!end.is_finite()).then(|| {
                let s = self.rational(&rat(1, 8), &int(4));
                if decreasing {
                    -s
                } else {
                    s
                }
            })
        };
        let left = slope(&c.lo);
        let right = slope(&c.hi);
        Piece::new(c.clone(), nodes, left, right).expect("sampled monotone piece is valid")
    }

    /// One or two closed intervals inside `dom`, or `None` if `dom` is empty.
    pub fn compact_in(&mut self, dom: &OpenSet) -> Option<CompactSet> {
        if dom.is_empty() {
            return None;
        }
        let parts: Vec<Interval> = (0..self.rng.gen_range(1..=2))
            .map(|_| {
                let c = dom.components().choose(&mut self.rng).unwrap().clone();
                let (lo, hi) = window(&c);
                let grid = |i: i64| &lo + (&hi - &lo) * rat(i, MAX_DEN);
                let first = if c.lo_closed { 0 } else { 1 };
                let last = if c.hi_closed { MAX_DEN } else { MAX_DEN - 1 };
                let mut i = self.rng.gen_range(first..=last);
                let mut j = self.rng.gen_range(first..=last);
                if i > j {
                    std::mem::swap(&mut i, &mut j);
                }
                Interval::closed(grid(i), grid(j))
            })
            .collect();
        Some(CompactSet::new(dom.space(), parts).expect("grid points lie inside the component"))
    }

    /// An open set around `image` in `codomain`.
    pub fn neighbourhood(&mut self, image: &IntervalUnion, codomain: AmbientSpace) -> OpenSet {
        let universe = codomain.universe();
        let parts = image
            .parts()
            .iter()
            .map(|iv| {
                let a = iv.lo.finite().unwrap() - self.rational(&rat(1, MAX_DEN), &int(1));
                let b = iv.hi.finite().unwrap() + self.rational(&rat(1, MAX_DEN), &int(1));
                Interval::open(a, b).intersect(&universe)
            })
            .collect();
        OpenSet::new(codomain, parts).expect("neighbourhoods are relatively open")
    }

    /// `f` with every node value moved by less than `eps`, kept inside the
    /// codomain. Such a map lies in every `B_K(f, eps)` with `K ⊆ dom(f)`.
    pub fn perturb(&mut self, f: &PartialMap, eps: &Rational) -> PartialMap {
        let universe = f.codomain().universe();
        let pieces = f
            .pieces()
            .iter()
            .map(|p| {
                let nodes = p
                    .nodes()
                    .iter()
                    .map(|nd| {
                        let j = self.rng.gen_range(-MAX_DEN..=MAX_DEN);
                        let mut y = &nd.y + eps * rat(j, MAX_DEN + 1);
                        if let Some(top) = universe.hi.finite() {
                            y = y.min(top.clone());
                        }
                        if let Some(bottom) = universe.lo.finite() {
                            y = y.max(bottom.clone());
                        }
                        Node::new(nd.x.clone(), y)
                    })
                    .collect();
                Piece::new(p.domain().clone(), nodes, p.left_slope().cloned(), p.right_slope().cloned())
                    .expect("perturbed piece is valid")
            })
            .collect();
        PartialMap::new(f.space(), f.codomain(), pieces).expect("perturbed map is valid")
    }

    /// The same function as `f`, rebuilt with a redundant collinear node.
    pub fn rerepresent(&mut self, f: &PartialMap) -> PartialMap {
        let pieces = f
            .pieces()
            .iter()
            .map(|p| {
                let mut nodes = p.nodes().to_vec();
                let (lo, hi) = window(p.domain());
                let x = self.rational(&lo, &hi);
                if p.domain().contains(&x) && nodes.iter().all(|nd| nd.x != x) {
                    nodes.push(Node::new(x.clone(), p.eval(&x)));
                    nodes.sort_by(|a, b| a.x.cmp(&b.x));
                }
                Piece::new(p.domain().clone(), nodes, p.left_slope().cloned(), p.right_slope().cloned())
                    .expect("collinear refinement is valid")
            })
            .collect();
        PartialMap::new(f.space(), f.codomain(), pieces).expect("refined map is valid")
    }
}

/// A bounded stand-in for an interval: finite ends kept, infinite ends
/// replaced at distance 4 from the nearest finite anchor.
fn window(c: &Interval) -> (Rational, Rational) {
    match (c.lo.finite(), c.hi.finite()) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        (Some(a), None) => (a.clone(), a + int(4)),
        (None, Some(b)) => (b - int(4), b.clone()),
        (None, None) => (int(-4), int(4)),
    }
}

/// Outcome of one invariant suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: u64,
    pub checks: u64,
    pub violations: u64,
    /// Bounded searches that ran out without deciding; not failures.
    pub exhausted: u64,
    pub witnesses: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Default)]
struct CaseResult {
    checks: u64,
    violations: u64,
    exhausted: u64,
    witnesses: Vec<String>,
}

impl CaseResult {
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.witnesses.len() < WITNESS_LIMIT {
                self.witnesses.push(witness());
            }
        }
    }
}

/// Parameters shared by all suites.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub samples: u64,
    pub seed: u64,
    pub beta_term: BetaTermFn,
}

impl SuiteConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        SuiteConfig { samples, seed, beta_term }
    }
}

fn tol_plan() -> TruncationPlan {
    TruncationPlan::new(11, 11).unwrap()
}

fn levels_upto(space: AmbientSpace, total: u64) -> Vec<ExhaustionLevel> {
    let grid = ExhaustionGrid::get(space, (total - 1) as u32, (total - 1) as u32);
    grid.levels().iter().filter(|l| l.m + l.n <= total).cloned().collect()
}

fn random_suite<F>(name: &'static str, cfg: &SuiteConfig, case: F) -> SuiteOutcome
where
    F: Fn(&mut Sampler, AmbientSpace, &mut CaseResult) + Sync,
{
    let jobs: Vec<(AmbientSpace, u64)> =
        SPACES.iter().flat_map(|&s| (0..cfg.samples).map(move |i| (s, i))).collect();
    let results: Vec<CaseResult> = jobs
        .par_iter()
        .map(|&(space, i)| {
            let mut sampler = Sampler::new(cfg.seed, name, space, i);
            let mut r = CaseResult::default();
            case(&mut sampler, space, &mut r);
            r
        })
        .collect();
    collect(name, jobs.len() as u64, results)
}

fn collect(name: &'static str, cases: u64, results: Vec<CaseResult>) -> SuiteOutcome {
    let mut out = SuiteOutcome { name, cases, checks: 0, violations: 0, exhausted: 0, witnesses: Vec::new() };
    for r in results {
        out.checks += r.checks;
        out.violations += r.violations;
        out.exhausted += r.exhausted;
        for w in r.witnesses {
            if out.witnesses.len() < WITNESS_LIMIT {
                out.witnesses.push(w);
            }
        }
    }
    out
}

/// `K_mn ⊆ int(K_{(m+1)n})` for `n ≤ 64`, `m ≤ 16`.
pub fn exhaustion_nested() -> SuiteOutcome {
    let mut r = CaseResult::default();
    for space in SPACES {
        for n in 1..=64 {
            for m in 1..=16 {
                let k = compact_exhaustion(m, n, space);
                let next = interior(&compact_exhaustion(m + 1, n, space));
                r.check(k.points().is_subset_of(next.points()), || format!("{space} n={n} m={m}: {k} ⊄ {next}"));
            }
        }
    }
    collect("basis.exhaustion_nested", 2 * 64 * 16, vec![r])
}

/// Sample points of every `U_n`, `n ≤ 64`: component midpoints and points at
/// distance `10^-k · L` from each finite open end, `k ≤ max_k`.
pub fn coverage_samples(n: u64, space: AmbientSpace, max_k: u32) -> Vec<(u32, Rational)> {
    let mut out = Vec::new();
    for c in basis_element(n, space).components() {
        let (a, b) = (c.lo.finite().unwrap(), c.hi.finite().unwrap());
        let len = b - a;
        out.push((0, (a + b) / int(2)));
        for k in 1..=max_k {
            let off = &len / Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(10), k as usize));
            if !c.lo_closed {
                out.push((k, a + &off));
            }
            if !c.hi_closed {
                out.push((k, b - &off));
            }
        }
    }
    out
}

/// Every coverage sample with offset exponent `≤ max_k` lies in some `K_mn`
/// with `m ≤ bound`.
pub fn exhaustion_covers(max_k: u32, bound: u64) -> SuiteOutcome {
    let mut r = CaseResult::default();
    let mut cases = 0;
    for space in SPACES {
        for n in 1..=64 {
            for (k, x) in coverage_samples(n, space, max_k) {
                cases += 1;
                let hit = exhaustion_level_of(&x, n, space, bound);
                r.check(hit.is_some(), || format!("{space} n={n} offset 10^-{k}: {x} not in K_mn for m <= {bound}"));
            }
        }
    }
    collect("basis.exhaustion_covers", cases, vec![r])
}

pub fn basis_deterministic_and_compact() -> SuiteOutcome {
    let mut r = CaseResult::default();
    for space in SPACES {
        for n in 1..=256 {
            let u = basis_element(n, space);
            r.check(u == basis_element(n, space), || format!("{space} U_{n} differs between calls"));
            r.check(!u.is_empty(), || format!("{space} U_{n} is empty"));
            let closure = u.points().closure();
            let bounded = closure.parts().iter().all(Interval::is_bounded);
            let inside = closure.is_subset_of(&IntervalUnion::single(space.universe()));
            r.check(bounded && inside, || format!("{space} closure of U_{n} = {closure} is not compact in X"));
        }
    }
    collect("basis.deterministic_compact", 2 * 256, vec![r])
}

pub fn normalize_idempotent(cfg: &SuiteConfig) -> SuiteOutcome {
    random_suite("basis.normalize_idempotent", cfg, |s, space, r| {
        let mut raw: Vec<Interval> = Vec::new();
        for _ in 0..s.rng().gen_range(0..5) {
            raw.extend(basis_element(s.rng().gen_range(1..4096), space).components().iter().cloned());
        }
        let once = normalize_open(raw.clone(), space).unwrap();
        let twice = normalize_open(once.components().to_vec(), space).unwrap();
        raw.shuffle(s.rng());
        let shuffled = normalize_open(raw, space).unwrap();
        r.check(once == twice && once == shuffled, || format!("{space}: normalization unstable for {once}"));
    })
}

pub fn gamma_inverse_roundtrip(cfg: &SuiteConfig) -> SuiteOutcome {
    random_suite("partial_map.inverse_roundtrip", cfg, |s, _space, r| {
        let f = s.gamma(_space);
        let inv = invert(&f).unwrap();
        let back = compose(&inv, &f).unwrap();
        r.check(back == PartialMap::identity(f.domain()), || format!("f⁻¹∘f ≠ id for f = {}", *f));
        r.check(inv.image() == *f.domain() && *inv.domain() == f.image(), || format!("dom/im not swapped for {}", *f));
    })
}

pub fn compose_associative(cfg: &SuiteConfig) -> SuiteOutcome {
    random_suite("partial_map.compose_associative", cfg, |s, space, r| {
        let (f, g, h) = (s.map(space), s.map(space), s.map(space));
        let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        r.check(left == right, || format!("(f∘g)∘h ≠ f∘(g∘h) for f = {f}, g = {g}, h = {h}"));
    })
}

pub fn join_laws(cfg: &SuiteConfig) -> SuiteOutcome {
    random_suite("partial_map.join_laws", cfg, |s, space, r| {
        let f = s.map(space);
        let g = if s.rng().gen_bool(0.5) {
            let u = s.open_set(space);
            f.restrict(&u).unwrap()
        } else {
            s.map(space)
        };
        r.check(join(&[f.clone(), f.clone()]).as_ref() == Ok(&f), || format!("f ∨ f ≠ f for {f}"));
        let fg = join(&[f.clone(), g.clone()]);
        let gf = join(&[g.clone(), f.clone()]);
        let same = match (&fg, &gf) {
            (Ok(a), Ok(b)) => a == b,
            (Err(_), Err(_)) => true,
            _ => false,
        };
        r.check(same, || format!("f ∨ g and g ∨ f disagree for f = {f}, g = {g}"));
    })
}

pub fn compose_congruence(cfg: &SuiteConfig) -> SuiteOutcome {
    random_suite("partial_map.congruence", cfg, |s, space, r| {
        let (f, h) = (s.map(space), s.map(space));
        let f2 = s.rerepresent(&f);
        r.check(f == f2, || format!("re-representation changed {f}"));
        r.check(compose(&h, &f).unwrap() == compose(&h, &f2).unwrap(), || format!("h∘f depends on representation: {f}"));
    })
}

pub fn beta_symmetry(cfg: &SuiteConfig) -> SuiteOutcome {
    let term = cfg.beta_term;
    random_suite("metric.beta_symmetry", cfg, move |s, space, r| {
        let (f, g) = (s.map(space), s.map(space));
        let plan = tol_plan();
        let a = beta_with_term(&f, &g, &plan, term).unwrap();
        let b = beta_with_term(&g, &f, &plan, term).unwrap();
        r.check(a == b, || format!("β(f,g) = {a} but β(g,f) = {b} for f = {f}, g = {g}"));
    })
}

pub fn beta_identity(cfg: &SuiteConfig) -> SuiteOutcome {
    let term = cfg.beta_term;
    random_suite("metric.beta_identity", cfg, move |s, space, r| {
        let f = s.map(space);
        let f2 = s.rerepresent(&f);
        let e = beta_with_term(&f, &f2, &tol_plan(), term).unwrap();
        r.check(e.lo.is_zero(), || format!("lo β(f,f) = {} for f = {f}", e.lo));
    })
}

/// Unequal maps are told apart by some `β_mn` with `m + n ≤ 24`.
pub fn beta_separation(cfg: &SuiteConfig) -> SuiteOutcome {
    let term = cfg.beta_term;
    random_suite("metric.beta_separation", cfg, move |s, space, r| {
        let (f, g) = (s.map(space), s.map(space));
        if f == g {
            return;
        }
        r.checks += 1;
        let found = levels_upto(space, 24).iter().any(|l| term(&f, &g, l).is_positive());
        if !found {
            r.exhausted += 1;
        }
    })
}

pub fn beta_triangle(cfg: &SuiteConfig) -> SuiteOutcome {
    let term = cfg.beta_term;
    random_suite("metric.beta_triangle", cfg, move |s, space, r| {
        let (f, g, h) = (s.map(space), s.map(space), s.map(space));
        let plan = tol_plan();
        let fg = beta_with_term(&f, &g, &plan, term).unwrap();
        let fh = beta_with_term(&f, &h, &plan, term).unwrap();
        let hg = beta_with_term(&h, &g, &plan, term).unwrap();
        r.check(fg.lo <= &fh.hi + &hg.hi, || format!("lo β(f,g) = {} > {} + {} for f = {f}, g = {g}, h = {h}", fg.lo, fh.hi, hg.hi));
    })
}

/// Exact `β_mn(f,g) ≤ β_mn(f,h) + β_mn(h,g)` and symmetry for `m + n ≤ 12`.
pub fn beta_mn_triangle(cfg: &SuiteConfig) -> SuiteOutcome {
    let term = cfg.beta_term;
    random_suite("metric.beta_mn_triangle", cfg, move |s, space, r| {
        let (f, g, h) = (s.map(space), s.map(space), s.map(space));
        for l in &levels_upto(space, 12) {
            let fg = term(&f, &g, l);
            let sum = term(&f, &h, l) + term(&h, &g, l);
            r.check(fg <= sum, || {
                let case = (in_hit_set(&f, l), in_hit_set(&g, l), in_hit_set(&h, l));
                format!("m={} n={} cases(f,g,h ∈ L)={case:?}: β_mn(f,g) = {fg} > {sum}; f = {f}, g = {g}, h = {h}", l.m, l.n)
            });
            let gf = term(&g, &f, l);
            r.check(fg == gf, || format!("m={} n={}: β_mn not symmetric for f = {f}, g = {g}", l.m, l.n));
        }
    })
}

/// Counts of sampled `(f, g)` cells by L-membership `(f ∈ L, g ∈ L)`, in
/// the order (yes,yes), (yes,no), (no,yes), (no,no).
pub fn beta_mn_case_counts(cfg: &SuiteConfig) -> [u64; 4] {
    let mut counts = [0u64; 4];
    for space in SPACES {
        for i in 0..cfg.samples {
            let mut s = Sampler::new(cfg.seed, "metric.beta_mn_triangle", space, i);
            let (f, g) = (s.map(space), s.map(space));
            for l in &levels_upto(space, 12) {
                let idx = match (in_hit_set(&f, l), in_hit_set(&g, l)) {
                    (true, true) => 0,
                    (true, false) => 1,
                    (false, true) => 2,
                    (false, false) => 3,
                };
                counts[idx] += 1;
            }
        }
    }
    counts
}

/// Termwise `t_mn(D(f), D(g)) ≤ β_mn(f, g)` for `m + n ≤ 16`.
pub fn fell_dominance(cfg: &SuiteConfig) -> SuiteOutcome {
    let term = cfg.beta_term;
    random_suite("metric.fell_dominance", cfg, move |s, space, r| {
        let (f, g) = (s.map(space), s.map(space));
        let (a, b) = (complement_of_domain(&f), complement_of_domain(&g));
        for l in &levels_upto(space, 16) {
            let t = fell_term(&a, &b, l);
            let bt = term(&f, &g, l);
            r.check(t <= bt, || format!("m={} n={}: t_mn = {t} > β_mn = {bt} for f = {f}, g = {g}", l.m, l.n));
        }
    })
}

/// `B_K(f, ε) ⊆ ⟨K, V⟩` for `ε = separation_radius(f, K, V)`, checked on up
/// to 50 members of the ball per case.
pub fn ball_inclusion(cfg: &SuiteConfig) -> SuiteOutcome {
    ball_inclusion_with(cfg, 50)
}

pub fn ball_inclusion_with(cfg: &SuiteConfig, members: u64) -> SuiteOutcome {
    random_suite("metric.ball_inclusion", cfg, move |s, space, r| {
        let f = loop {
            let f = s.map(space);
            if !f.is_empty() {
                break f;
            }
        };
        let k = s.compact_in(f.domain()).unwrap();
        let v = s.neighbourhood(&f.image_of(&k).unwrap(), f.codomain());
        r.check(in_compact_open(&f, &k, &v).unwrap(), || format!("f ∉ ⟨K,V⟩ for f = {f}, K = {k}, V = {v}"));
        let eps = separation_radius(&f, &k, &v).unwrap();
        r.check(eps.is_positive(), || format!("ε = {eps} for f = {f}, K = {k}, V = {v}"));
        for _ in 0..members {
            let g = s.perturb(&f, &eps);
            if !in_ball(&g, &f, &k, &eps).unwrap() {
                r.check(false, || format!("perturbation left B_K(f,ε): f = {f}, g = {g}, ε = {eps}"));
                continue;
            }
            r.check(in_compact_open(&g, &k, &v).unwrap(), || format!("g ∈ B_K(f,{eps}) but g ∉ ⟨K,V⟩: f = {f}, g = {g}, K = {k}, V = {v}"));
        }
    })
}

pub fn d_gamma_axioms(cfg: &SuiteConfig) -> SuiteOutcome {
    random_suite("metric.d_gamma_axioms", cfg, |s, space, r| {
        let (f, g, h) = (s.gamma(space), s.gamma(space), s.gamma(space));
        let plan = tol_plan();
        let fg = d_gamma_with_plan(&f, &g, &plan).unwrap();
        let gf = d_gamma_with_plan(&g, &f, &plan).unwrap();
        r.check(fg == gf, || format!("d_γ not symmetric for f = {}, g = {}", *f, *g));
        let fh = d_gamma_with_plan(&f, &h, &plan).unwrap();
        let hg = d_gamma_with_plan(&h, &g, &plan).unwrap();
        r.check(fg.lo <= &fh.hi + &hg.hi, || format!("d_γ triangle fails for f = {}, g = {}, h = {}", *f, *g, *h));
        let ff = d_gamma_with_plan(&f, &f, &plan).unwrap();
        r.check(ff.lo.is_zero(), || format!("d_γ(f,f) has lo {} for f = {}", ff.lo, *f));
    })
}

pub fn fell_symmetry(cfg: &SuiteConfig) -> SuiteOutcome {
    random_suite("hyperspace.fell_symmetry", cfg, |s, space, r| {
        let (a, b) = (s.closed_set(space), s.closed_set(space));
        let plan = tol_plan();
        let ab = d_fell_with_plan(&a, &b, &plan).unwrap();
        let ba = d_fell_with_plan(&b, &a, &plan).unwrap();
        r.check(ab == ba, || format!("d_Fell not symmetric for A = {a}, B = {b}"));
    })
}

/// `t_mn(A, B) = ½ (β_mn(Id_{X∖A}, Id_{X∖B}) + β_mn(Id_{X∖A}⁻¹, Id_{X∖B}⁻¹))`
/// for `m + n ≤ 16`.
pub fn fell_gamma_identity(cfg: &SuiteConfig) -> SuiteOutcome {
    let term = cfg.beta_term;
    random_suite("hyperspace.fell_gamma_identity", cfg, move |s, space, r| {
        let (a, b) = (s.closed_set(space), s.closed_set(space));
        let ia = GammaMap::new(PartialMap::identity(a.complement())).unwrap();
        let ib = GammaMap::new(PartialMap::identity(b.complement())).unwrap();
        let (ia_inv, ib_inv) = (ia.inverse(), ib.inverse());
        let half = rat(1, 2);
        for l in &levels_upto(space, 16) {
            let t = fell_term(&a, &b, l);
            let g = (term(&ia, &ib, l) + term(&ia_inv, &ib_inv, l)) * &half;
            r.check(t == g, || format!("m={} n={}: t_mn = {t} but ½ d_γ term = {g} for A = {a}, B = {b}", l.m, l.n));
        }
    })
}

pub fn fell_monotone_truncation(cfg: &SuiteConfig) -> SuiteOutcome {
    random_suite("hyperspace.fell_monotone_truncation", cfg, |s, space, r| {
        let (a, b) = (s.closed_set(space), s.closed_set(space));
        let mut prev = None;
        for n in 1..=10 {
            let e = d_fell_with_plan(&a, &b, &TruncationPlan::new(n, n).unwrap()).unwrap();
            if let Some(p) = prev.replace(e.clone()) {
                let p: crate::metric::Enclosure = p;
                r.check(p.lo <= e.lo && e.hi <= p.hi, || format!("N={n}: {p} does not contain {e} for A = {a}, B = {b}"));
            }
        }
    })
}

/// Distinct closed sets are told apart by some `t_mn` with `m + n ≤ 24`.
pub fn fell_separation(cfg: &SuiteConfig) -> SuiteOutcome {
    random_suite("hyperspace.fell_separation", cfg, |s, space, r| {
        let (a, b) = (s.closed_set(space), s.closed_set(space));
        if a == b {
            return;
        }
        r.checks += 1;
        if !levels_upto(space, 24).iter().any(|l| fell_term(&a, &b, l).is_one()) {
            r.exhausted += 1;
        }
    })
}

/// Every suite, in a fixed order.
pub fn run_all(cfg: &SuiteConfig) -> Vec<SuiteOutcome> {
    vec![
        exhaustion_nested(),
        exhaustion_covers(6, 10_000_000),
        basis_deterministic_and_compact(),
        normalize_idempotent(cfg),
        gamma_inverse_roundtrip(cfg),
        compose_associative(cfg),
        join_laws(cfg),
        compose_congruence(cfg),
        beta_symmetry(cfg),
        beta_identity(cfg),
        beta_separation(cfg),
        beta_triangle(cfg),
        beta_mn_triangle(cfg),
        fell_dominance(cfg),
        ball_inclusion(cfg),
        d_gamma_axioms(cfg),
        fell_symmetry(cfg),
        fell_gamma_identity(cfg),
        fell_monotone_truncation(cfg),
        fell_separation(cfg),
    ]
}

/// A deliberately wrong case table: the mixed case scores 0 and the
/// both-in-L case scores 1. Used to check that the suites catch faults.
pub fn corrupted_beta_term(f: &PartialMap, g: &PartialMap, level: &ExhaustionLevel) -> Rational {
    match (in_hit_set(f, level), in_hit_set(g, level)) {
        (true, true) => Rational::one(),
        (false, false) => beta_term(f, g, level),
        _ => Rational::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samplers_are_reproducible() {
        for space in SPACES {
            let a: Vec<PartialMap> = (0..20).map(|i| Sampler::new(9, "t", space, i).map(space)).collect();
            let b: Vec<PartialMap> = (0..20).map(|i| Sampler::new(9, "t", space, i).map(space)).collect();
            assert_eq!(a, b);
            let c: Vec<PartialMap> = (0..20).map(|i| Sampler::new(10, "t", space, i).map(space)).collect();
            assert_ne!(a, c);
        }
    }

    #[test]
    fn sampled_objects_are_well_formed() {
        for space in SPACES {
            for i in 0..100 {
                let mut s = Sampler::new(1, "wf", space, i);
                let f = s.map(space);
                assert!(f.pieces().iter().all(|p| p.nodes().len() <= MAX_NODES));
                let g = s.gamma(space);
                assert_eq!(compose(&g.inverse(), &g).unwrap(), PartialMap::identity(g.domain()));
                if let Some(k) = s.compact_in(f.domain()) {
                    assert!(f.uncovered_point(&k).is_none());
                }
            }
        }
    }

    #[test]
    fn small_suites_pass() {
        let cfg = SuiteConfig::new(8, 3);
        for outcome in run_all(&cfg) {
            assert!(outcome.passed(), "{outcome:?}");
        }
    }

    #[test]
    fn corrupted_table_is_caught() {
        let cfg = SuiteConfig { beta_term: corrupted_beta_term, ..SuiteConfig::new(40, 5) };
        let outcome = beta_mn_triangle(&cfg);
        assert!(outcome.violations > 0);
        assert!(!outcome.witnesses.is_empty());
    }
}
