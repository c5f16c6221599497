//! Diagnostics for sequences of partial maps: β decay tables, γ-Cauchy checks
//! on finite prefixes, limit candidates and the inverse-limit check.
//!
//! Nothing here proves convergence. Verdicts describe the examined prefix.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::IndexExpr;
use crate::hyperspace::{complement_of_domain, d_fell_with_plan, ClosedSet};
use crate::interval::{Endpoint, Interval};
use crate::metric::{beta, check_tol, sup_distance, Enclosure, TruncationPlan};
use crate::partial_map::{compose, GammaMap, Node, PartialMap, Piece};
use crate::rational::{int, max_rat, min_rat, Rational};
use crate::sets::{CompactSet, OpenSet, PointSet};
use crate::space::AmbientSpace;

/// One end of a generated domain: an index expression or an infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoundExpr {
    NegInf,
    Finite(IndexExpr),
    PosInf,
}

impl BoundExpr {
    fn eval(&self, n: u64) -> Result<Endpoint> {
        Ok(match self {
            BoundExpr::NegInf => Endpoint::NegInf,
            BoundExpr::PosInf => Endpoint::PosInf,
            BoundExpr::Finite(e) => Endpoint::Finite(e.eval(n)?),
        })
    }
}

impl fmt::Display for BoundExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundExpr::NegInf => f.write_str("-inf"),
            BoundExpr::PosInf => f.write_str("inf"),
            BoundExpr::Finite(e) => e.fmt(f),
        }
    }
}

/// A domain template such as `[0,1/n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DomainExpr {
    pub lo: BoundExpr,
    pub lo_closed: bool,
    pub hi: BoundExpr,
    pub hi_closed: bool,
}

impl DomainExpr {
    pub fn whole(space: AmbientSpace) -> Self {
        match space {
            AmbientSpace::Reals => DomainExpr { lo: BoundExpr::NegInf, lo_closed: false, hi: BoundExpr::PosInf, hi_closed: false },
            AmbientSpace::UnitInterval => DomainExpr {
                lo: BoundExpr::Finite(IndexExpr::constant(&int(0))),
                lo_closed: true,
                hi: BoundExpr::Finite(IndexExpr::constant(&int(1))),
                hi_closed: true,
            },
        }
    }

    pub fn eval(&self, n: u64) -> Result<Interval> {
        Ok(Interval::new(self.lo.eval(n)?, self.lo_closed, self.hi.eval(n)?, self.hi_closed))
    }
}

impl FromStr for DomainExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid domain {s:?}; expected e.g. (0,1/n) or [0,1)"));
        let lo_closed = match s.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(bad()),
        };
        let hi_closed = match s.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(bad()),
        };
        let inner = &s[1..s.len() - 1];
        let (lo, hi) = split_top_level(inner, ',').ok_or_else(bad)?;
        let bound = |t: &str| -> Result<BoundExpr> {
            Ok(match t.trim() {
                "-inf" => BoundExpr::NegInf,
                "inf" | "+inf" => BoundExpr::PosInf,
                other => BoundExpr::Finite(other.parse()?),
            })
        };
        Ok(DomainExpr { lo: bound(lo)?, lo_closed, hi: bound(hi)?, hi_closed })
    }
}

impl fmt::Display for DomainExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{},{}{r}", self.lo, self.hi)
    }
}

fn split_top_level(s: &str, sep: char) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn split_all_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = s;
    while let Some((head, tail)) = split_top_level(rest, sep) {
        out.push(head);
        rest = tail;
    }
    out.push(rest);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[allow(clippy::large_enum_variant)]
pub enum Family {
    /// `f_n(x) = n·x` on `[0, 1/n)` in the unit interval.
    Counterexample,
    /// `f_n⁻¹(x) = x/n` on `[0, 1)`.
    CounterexampleInverse,
    Constant(PartialMap),
    /// `a(n)·x + b(n)` on a domain template.
    Affine { a: IndexExpr, b: IndexExpr, domain: DomainExpr, space: AmbientSpace, codomain: AmbientSpace },
}

/// A named deterministic sequence `n ↦ f_n`, `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SequenceSpec {
    pub name: String,
    pub family: Family,
}

impl SequenceSpec {
    pub fn counterexample() -> Self {
        SequenceSpec { name: "counterexample".into(), family: Family::Counterexample }
    }

    pub fn counterexample_inverse() -> Self {
        SequenceSpec { name: "counterexample-inverse".into(), family: Family::CounterexampleInverse }
    }

    pub fn constant(name: impl Into<String>, f: PartialMap) -> Self {
        SequenceSpec { name: name.into(), family: Family::Constant(f) }
    }

    /// Parses `counterexample`, `counterexample-inverse`, `constant:NAME`, or
    /// `affine:a=EXPR,b=EXPR,dom=DOMAIN[,space=S][,codomain=S]`.
    /// `resolve` turns a constant's name into a map.
    pub fn parse_with<F>(text: &str, resolve: F) -> Result<Self>
    where
        F: FnOnce(&str) -> Result<PartialMap>,
    {
        let text = text.trim();
        let (head, args) = match text.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (text, None),
        };
        match (head, args) {
            ("counterexample", None) => Ok(Self::counterexample()),
            ("counterexample-inverse", None) => Ok(Self::counterexample_inverse()),
            ("constant", Some(name)) => Ok(Self::constant(text, resolve(name)?)),
            ("affine", Some(args)) => {
                let (mut a, mut b, mut domain) = (None, None, None);
                let mut space = AmbientSpace::Reals;
                let mut codomain = None;
                for kv in split_all_top_level(args, ',') {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("expected key=value, got {kv:?}")))?;
                    let v = v.trim().trim_matches('"');
                    match k.trim() {
                        "a" => a = Some(v.parse::<IndexExpr>()?),
                        "b" => b = Some(v.parse::<IndexExpr>()?),
                        "dom" | "domain" => domain = Some(v.parse::<DomainExpr>()?),
                        "space" => space = v.parse()?,
                        "codomain" => codomain = Some(v.parse()?),
                        other => return Err(Error::Parse(format!("unknown affine parameter {other:?}"))),
                    }
                }
                let domain = domain.unwrap_or_else(|| DomainExpr::whole(space));
                Ok(SequenceSpec {
                    name: text.to_string(),
                    family: Family::Affine {
                        a: a.ok_or_else(|| Error::Parse("affine family needs a=".into()))?,
                        b: b.unwrap_or_else(|| IndexExpr::constant(&Rational::zero())),
                        domain,
                        space,
                        codomain: codomain.unwrap_or(space),
                    },
                })
            }
            _ => Err(Error::Parse(format!("unknown sequence {text:?}"))),
        }
    }

    pub fn space(&self) -> AmbientSpace {
        match &self.family {
            Family::Counterexample | Family::CounterexampleInverse => AmbientSpace::UnitInterval,
            Family::Constant(f) => f.space(),
            Family::Affine { space, .. } => *space,
        }
    }

    /// `f_n`, for `n ≥ 1`.
    pub fn term(&self, n: u64) -> Result<PartialMap> {
        if n == 0 {
            return Err(Error::Precondition("sequence indices start at 1".into()));
        }
        let unit = AmbientSpace::UnitInterval;
        match &self.family {
            Family::Counterexample => Ok(counterexample_gamma(n).into_base()),
            Family::CounterexampleInverse => {
                let dom = OpenSet::new(unit, vec![half_open(int(0), int(1))])?;
                PartialMap::affine(&dom, unit, &(Rational::one() / int(n as i64)), &Rational::zero())
            }
            Family::Constant(f) => Ok(f.clone()),
            Family::Affine { a, b, domain, space, codomain } => {
                let iv = domain.eval(n)?;
                let dom = OpenSet::new(*space, vec![iv])?;
                PartialMap::affine(&dom, *codomain, &a.eval(n)?, &b.eval(n)?)
            }
        }
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn half_open(a: Rational, b: Rational) -> Interval {
    Interval::new(a.into(), true, b.into(), false)
}

/// `x ↦ n·x` on `[0, 1/n)` in the unit interval.
///
/// # Panics
/// If `n == 0`.
pub fn counterexample_gamma(n: u64) -> GammaMap {
    assert!(n >= 1, "counterexample index starts at 1");
    let unit = AmbientSpace::UnitInterval;
    let nn = int(n as i64);
    let dom = OpenSet::new(unit, vec![half_open(int(0), Rational::one() / &nn)]).expect("[0,1/n) is open in [0,1]");
    let f = PartialMap::affine(&dom, unit, &nn, &Rational::zero()).expect("image [0,1) lies in [0,1]");
    GammaMap::new(f).expect("n·x is injective with open image")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsOnPrefix,
    FailsWithWitness,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::HoldsOnPrefix => "holds-on-prefix",
            Verdict::FailsWithWitness => "fails-with-witness",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexedEnclosure {
    pub index: u64,
    #[serde(flatten)]
    pub enclosure: Enclosure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Monotonicity {
    pub hi_non_increasing: bool,
    pub hi_strictly_decreasing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FellEvent {
    pub index: u64,
    pub hits: usize,
    /// One character per grid cell in `(n, m)` order: `1` if `D(f_index)`
    /// hits `int(K_{(m+1)n})`.
    pub signature: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FellSummary {
    pub grid: TruncationPlan,
    pub stable_from: Option<u64>,
    pub candidate: String,
    pub candidate_source: &'static str,
    pub events: Vec<FellEvent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub index: u64,
    #[serde(with = "crate::rational::serde_str")]
    pub point: Rational,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairDistance {
    pub i: u64,
    pub j: u64,
    #[serde(with = "crate::rational::serde_str")]
    pub distance: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompactRow {
    pub index: u64,
    /// `max_{j > index} d_K(f_index, f_j)` over the prefix.
    #[serde(skip_serializing_if = "Option::is_none", with = "crate::rational::serde_opt_str")]
    pub spread: Option<Rational>,
    /// `d_K(f_index, f_cand)`.
    #[serde(skip_serializing_if = "Option::is_none", with = "crate::rational::serde_opt_str")]
    pub forward: Option<Rational>,
    /// `d_K(f_index⁻¹, g_cand)`.
    #[serde(skip_serializing_if = "Option::is_none", with = "crate::rational::serde_opt_str")]
    pub backward: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompactReport {
    pub compact: String,
    /// Whether `K` avoids the candidate Fell limit; `None` when no limit is involved.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inside_limit_complement: Option<bool>,
    pub covered_from: Option<u64>,
    pub rows: Vec<CompactRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PairDistance>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub g_after_f_is_identity: bool,
    pub f_after_g_is_identity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CauchyReport {
    pub kind: &'static str,
    pub sequence: String,
    pub indices: Vec<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub enclosures: Vec<IndexedEnclosure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monotonicity: Option<Monotonicity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fell: Option<FellSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub compacts: Vec<CompactReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identities: Option<IdentityCheck>,
    pub verdict: Verdict,
}

fn terms(seq: &SequenceSpec, indices: &[u64]) -> Result<Vec<PartialMap>> {
    indices.iter().map(|&n| seq.term(n)).collect()
}

fn check_indices(indices: &[u64]) -> Result<()> {
    if indices.is_empty() || indices[0] == 0 || indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("indices must be a nonempty ascending list of positive integers".into()));
    }
    Ok(())
}

/// `β(f_n, target)` at each index, with monotonicity of the upper ends.
pub fn beta_decay_report(seq: &SequenceSpec, target: &PartialMap, indices: &[u64], tol: &Rational) -> Result<CauchyReport> {
    check_tol(tol)?;
    check_indices(indices)?;
    let maps = terms(seq, indices)?;
    let enclosures: Vec<Enclosure> = maps.par_iter().map(|f| beta(f, target, tol)).collect::<Result<_>>()?;
    let his: Vec<&Rational> = enclosures.iter().map(|e| &e.hi).collect();
    let monotonicity = Monotonicity {
        hi_non_increasing: his.windows(2).all(|w| w[1] <= w[0]),
        hi_strictly_decreasing: his.windows(2).all(|w| w[1] < w[0]),
    };
    let verdict = if monotonicity.hi_non_increasing { Verdict::HoldsOnPrefix } else { Verdict::Inconclusive };
    Ok(CauchyReport {
        kind: "beta-decay",
        sequence: seq.name.clone(),
        indices: indices.to_vec(),
        enclosures: indices
            .iter()
            .zip(enclosures)
            .map(|(&index, enclosure)| IndexedEnclosure { index, enclosure })
            .collect(),
        monotonicity: Some(monotonicity),
        fell: None,
        compacts: Vec::new(),
        identities: None,
        verdict,
    })
}

/// Checks the γ-Cauchy conditions on the prefix `f_1, …, f_len`.
///
/// The Fell limit `A` of `D(f_n)` is `candidate` when given. Otherwise the
/// hit/miss signatures over the grid of `tol` are required to agree on the
/// second half of the prefix; an all-hit signature gives `A = X`, any other
/// gives `A = D(f_len)`. Each compact is then tested for eventual coverage
/// and for shrinking tail spreads. Only compacts inside `X ∖ A` enter the
/// overall verdict.
pub fn gamma_cauchy_check(
    seq: &SequenceSpec,
    prefix_len: u64,
    compacts: &[CompactSet],
    candidate: Option<&ClosedSet>,
    tol: &Rational,
) -> Result<CauchyReport> {
    check_tol(tol)?;
    if prefix_len < 2 {
        return Err(Error::Precondition("prefix must contain at least two terms".into()));
    }
    let space = seq.space();
    if let Some(a) = candidate {
        if a.space() != space {
            return Err(Error::MixedSpaces);
        }
    }
    let indices: Vec<u64> = (1..=prefix_len).collect();
    let maps = terms(seq, &indices)?;
    let plan = TruncationPlan::for_tolerance(tol)?;
    let grid = plan.grid(space);

    let signature = |open: &OpenSet| -> Vec<bool> { grid.levels().iter().map(|l| l.complement_hits(open)).collect() };
    let signatures: Vec<Vec<bool>> = maps.par_iter().map(|f| signature(f.domain())).collect();
    let last = signatures.last().unwrap();
    let stable_pos = signatures.iter().rposition(|s| s != last).map_or(0, |p| p + 1);
    let stable_from = indices[stable_pos];
    let stabilized = stable_from <= prefix_len / 2 + 1;

    let (limit, source) = match candidate {
        Some(a) => (a.clone(), "supplied"),
        None if stabilized && last.iter().all(|&b| b) => (ClosedSet::whole(space), "whole-space"),
        None => (complement_of_domain(maps.last().unwrap()), "last-domain-complement"),
    };
    let limit_matches = signature(limit.complement()) == *last;

    let events = indices
        .iter()
        .zip(&signatures)
        .map(|(&index, sig)| FellEvent {
            index,
            hits: sig.iter().filter(|&&b| b).count(),
            signature: sig.iter().map(|&b| if b { '1' } else { '0' }).collect(),
        })
        .collect();
    let enclosures = maps
        .par_iter()
        .map(|f| d_fell_with_plan(&complement_of_domain(f), &limit, &plan))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .zip(&indices)
        .map(|(enclosure, &index)| IndexedEnclosure { index, enclosure })
        .collect();

    let reports: Vec<CompactReport> = compacts
        .par_iter()
        .map(|k| compact_cauchy(&maps, &indices, k, &limit))
        .collect::<Result<_>>()?;

    let verdict = if !(limit_matches && (stabilized || candidate.is_some())) {
        Verdict::Inconclusive
    } else {
        combine(reports.iter().filter(|r| r.inside_limit_complement == Some(true)).map(|r| r.verdict))
    };
    Ok(CauchyReport {
        kind: "gamma-cauchy",
        sequence: seq.name.clone(),
        indices,
        enclosures,
        monotonicity: None,
        fell: Some(FellSummary {
            grid: plan,
            stable_from: stabilized.then_some(stable_from),
            candidate: limit.to_string(),
            candidate_source: source,
            events,
        }),
        compacts: reports,
        identities: None,
        verdict,
    })
}

fn combine(verdicts: impl Iterator<Item = Verdict>) -> Verdict {
    let mut out = Verdict::HoldsOnPrefix;
    for v in verdicts {
        match v {
            Verdict::FailsWithWitness => return v,
            Verdict::Inconclusive => out = v,
            Verdict::HoldsOnPrefix => {}
        }
    }
    out
}

fn non_increasing<'a>(xs: impl Iterator<Item = &'a Rational>) -> bool {
    let xs: Vec<&Rational> = xs.collect();
    xs.windows(2).all(|w| w[1] <= w[0])
}

fn compact_cauchy(maps: &[PartialMap], indices: &[u64], k: &CompactSet, limit: &ClosedSet) -> Result<CompactReport> {
    let inside = k.points().is_subset_of(limit.complement().points());
    let covered: Vec<bool> = maps.iter().map(|f| f.uncovered_point(k).is_none()).collect();
    let len = maps.len();
    let mut report = CompactReport {
        compact: k.to_string(),
        inside_limit_complement: Some(inside),
        covered_from: None,
        rows: Vec::new(),
        pairs: Vec::new(),
        verdict: Verdict::Inconclusive,
        witness: None,
    };
    if k.is_empty() {
        report.covered_from = Some(indices[0]);
        report.verdict = Verdict::HoldsOnPrefix;
        return Ok(report);
    }
    if !covered[len - 1] {
        let from = covered.iter().rposition(|&c| c).map_or(0, |p| p + 1);
        let point = maps[from].uncovered_point(k).unwrap();
        report.verdict = Verdict::FailsWithWitness;
        report.witness = Some(Witness {
            index: indices[from],
            point,
            reason: format!("K is not contained in dom(f_n) for any n >= {} in the prefix", indices[from]),
        });
        return Ok(report);
    }
    let start = covered.iter().rposition(|&c| !c).map_or(0, |p| p + 1);
    report.covered_from = Some(indices[start]);
    let mut spreads = vec![Rational::zero(); len];
    for i in start..len {
        for j in i + 1..len {
            let d = sup_distance(&maps[i], &maps[j], k)?;
            spreads[i] = max_rat(spreads[i].clone(), d.clone());
            report.pairs.push(PairDistance { i: indices[i], j: indices[j], distance: d });
        }
    }
    report.rows = (start..len)
        .map(|i| CompactRow { index: indices[i], spread: Some(spreads[i].clone()), forward: None, backward: None })
        .collect();
    let late = indices[start] > indices[len - 1] / 2 + 1;
    report.verdict = if !late && non_increasing(spreads[start..len].iter()) {
        Verdict::HoldsOnPrefix
    } else {
        Verdict::Inconclusive
    };
    Ok(report)
}

/// A PL interpolant of `f_index` on a mesh over `K`, with a diagnostic error
/// bound `slope_term + tail_term`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitCandidate {
    #[serde(skip)]
    pub map: PartialMap,
    pub index: u64,
    #[serde(with = "crate::rational::serde_str")]
    pub slope_term: Rational,
    /// `d_K(f_{index-1}, f_index)`, when `K` lies in both domains.
    #[serde(with = "crate::rational::serde_opt_str")]
    pub tail_term: Option<Rational>,
    #[serde(with = "crate::rational::serde_str")]
    pub bound: Rational,
}

/// Interpolates `f_index` at the points `a, a + mesh, …, b` of every
/// component `[a, b]` of `K`. Each piece extends a little beyond its
/// component, following `f_index` linearly, so that `K` lies in the domain.
pub fn limit_candidate(seq: &SequenceSpec, k: &CompactSet, index: u64, mesh: &Rational) -> Result<LimitCandidate> {
    if !mesh.is_positive() {
        return Err(Error::Precondition("mesh must be positive".into()));
    }
    if k.is_empty() {
        return Err(Error::Precondition("limit candidate needs a nonempty compact".into()));
    }
    let f = seq.term(index)?;
    if f.space() != k.space() {
        return Err(Error::MixedSpaces);
    }
    if let Some(point) = f.uncovered_point(k) {
        return Err(Error::Domain { point });
    }
    let comps = k.components();
    let two = int(2);
    let mut pieces = Vec::with_capacity(comps.len());
    let mut max_slope = Rational::zero();
    for (i, c) in comps.iter().enumerate() {
        let (a, b) = (c.lo.finite().unwrap().clone(), c.hi.finite().unwrap().clone());
        let mut reach = mesh.clone();
        if i > 0 {
            reach = min_rat(reach, (&a - comps[i - 1].hi.finite().unwrap()) / &two);
        }
        if i + 1 < comps.len() {
            reach = min_rat(reach, (comps[i + 1].lo.finite().unwrap() - &b) / &two);
        }
        let piece = f.piece_containing(&a).unwrap();
        let around = Interval::open(&a - &reach, &b + &reach).intersect(piece.domain());
        for seg in piece.segments() {
            let seg_iv = Interval::new(seg.from.clone(), false, seg.to.clone(), false);
            if seg_iv.intersects(&Interval::closed(a.clone(), b.clone())) || seg_iv.contains(&a) {
                max_slope = max_rat(max_slope, seg.slope.abs());
            }
        }
        let mut xs = Vec::new();
        if let Some(lo) = around.lo.finite() {
            xs.push(lo.clone());
        }
        let mut x = a.clone();
        while x < b {
            xs.push(x.clone());
            x += mesh;
        }
        xs.push(b.clone());
        if let Some(hi) = around.hi.finite() {
            xs.push(hi.clone());
        }
        xs.dedup();
        let nodes = xs.into_iter().map(|x| Node::new(x.clone(), piece.eval(&x))).collect();
        pieces.push(Piece::from_nodes(around, nodes)?);
    }
    let map = PartialMap::new(f.space(), f.codomain(), pieces)?;
    let slope_term = max_slope * mesh;
    let tail_term = match index {
        1 => None,
        _ => {
            let prev = seq.term(index - 1)?;
            prev.uncovered_point(k).is_none().then(|| crate::metric::sup_distance(&prev, &f, k)).transpose()?
        }
    };
    let bound = &slope_term + tail_term.clone().unwrap_or_else(Rational::zero);
    Ok(LimitCandidate { map, index, slope_term, tail_term, bound })
}

/// Checks the hypotheses and conclusions of the inverse-limit theorem for a
/// pair of candidate limits `f` of `f_n` and `g` of `f_n⁻¹`.
pub fn inverse_limit_check(
    seq: &SequenceSpec,
    f_cand: &PartialMap,
    g_cand: &PartialMap,
    compacts: &[CompactSet],
    indices: &[u64],
    tol: &Rational,
) -> Result<CauchyReport> {
    check_tol(tol)?;
    check_indices(indices)?;
    let space = seq.space();
    for h in [f_cand, g_cand] {
        if h.space() != space || h.codomain() != space {
            return Err(Error::MixedSpaces);
        }
    }
    hypothesis(f_cand, g_cand, "im(f) is not contained in dom(g)")?;
    hypothesis(g_cand, f_cand, "im(g) is not contained in dom(f)")?;
    let identities = IdentityCheck {
        g_after_f_is_identity: compose(g_cand, f_cand)? == PartialMap::identity(f_cand.domain()),
        f_after_g_is_identity: compose(f_cand, g_cand)? == PartialMap::identity(g_cand.domain()),
    };

    let maps = terms(seq, indices)?;
    let inverses: Vec<Option<PartialMap>> =
        maps.iter().map(|f| GammaMap::new(f.clone()).ok().map(|g| g.inverse().into_base())).collect();
    let enclosures = maps
        .par_iter()
        .map(|f| beta(f, f_cand, tol))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .zip(indices)
        .map(|(enclosure, &index)| IndexedEnclosure { index, enclosure })
        .collect();

    let within = |a: &PartialMap, b: &PartialMap, k: &CompactSet| -> Option<Rational> {
        if k.is_empty() || a.uncovered_point(k).is_some() || b.uncovered_point(k).is_some() {
            None
        } else {
            sup_distance(a, b, k).ok()
        }
    };
    let reports: Vec<CompactReport> = compacts
        .iter()
        .map(|k| {
            let rows: Vec<CompactRow> = indices
                .iter()
                .zip(maps.iter().zip(&inverses))
                .map(|(&index, (f, inv))| CompactRow {
                    index,
                    spread: None,
                    forward: within(f, f_cand, k),
                    backward: inv.as_ref().and_then(|inv| within(inv, g_cand, k)),
                })
                .collect();
            let tail = &rows[rows.len() / 2..];
            let complete = tail.iter().all(|r| r.forward.is_some() && r.backward.is_some());
            let decays = complete
                && non_increasing(tail.iter().filter_map(|r| r.forward.as_ref()))
                && non_increasing(tail.iter().filter_map(|r| r.backward.as_ref()));
            CompactReport {
                compact: k.to_string(),
                inside_limit_complement: None,
                covered_from: rows.iter().position(|r| r.forward.is_some()).map(|p| indices[p]),
                rows,
                pairs: Vec::new(),
                verdict: if decays { Verdict::HoldsOnPrefix } else { Verdict::Inconclusive },
                witness: None,
            }
        })
        .collect();
    let verdict = if !(identities.g_after_f_is_identity && identities.f_after_g_is_identity) {
        Verdict::FailsWithWitness
    } else {
        combine(reports.iter().map(|r| r.verdict))
    };
    Ok(CauchyReport {
        kind: "inverse-limit",
        sequence: seq.name.clone(),
        indices: indices.to_vec(),
        enclosures,
        monotonicity: None,
        fell: None,
        compacts: reports,
        identities: Some(identities),
        verdict,
    })
}

fn hypothesis(from: &PartialMap, into: &PartialMap, reason: &str) -> Result<()> {
    let outside = from.image().difference(into.domain().points());
    match outside.parts().iter().find_map(|iv| iv.lo.finite().filter(|_| iv.lo_closed).cloned().or_else(|| iv.sample_point())) {
        None if outside.is_empty() => Ok(()),
        witness => Err(Error::Hypothesis { reason: reason.into(), witness: witness.unwrap_or_else(Rational::zero) }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partial_map::invert;
    use crate::rational::{pow2_neg, rat};

    const R: AmbientSpace = AmbientSpace::Reals;
    const U: AmbientSpace = AmbientSpace::UnitInterval;

    fn affine_seq() -> SequenceSpec {
        SequenceSpec::parse_with("affine:a=1+1/n,b=0,dom=(0,1)", |_| unreachable!()).unwrap()
    }

    fn id01() -> PartialMap {
        PartialMap::identity(&OpenSet::new(R, vec![Interval::open(int(0), int(1))]).unwrap())
    }

    fn k_quarter_half(space: AmbientSpace) -> CompactSet {
        CompactSet::interval(space, rat(1, 4), rat(1, 2)).unwrap()
    }

    #[test]
    fn counterexample_terms() {
        let f1 = counterexample_gamma(1);
        assert_eq!(f1.domain().components(), &[half_open(int(0), int(1))]);
        assert_eq!(f1.evaluate(&rat(1, 3)).unwrap(), rat(1, 3));
        let f2 = counterexample_gamma(2);
        assert_eq!(f2.domain().components(), &[half_open(int(0), rat(1, 2))]);
        assert_eq!(f2.evaluate(&rat(1, 3)).unwrap(), rat(2, 3));
        let inv = counterexample_gamma(3).inverse();
        assert_eq!(inv.base(), &SequenceSpec::counterexample_inverse().term(3).unwrap());
        assert_eq!(inv.evaluate(&rat(1, 2)).unwrap(), rat(1, 6));
    }

    #[test]
    fn sequence_parsing() {
        let seq = SequenceSpec::parse_with("affine:a=n,b=0,dom=[0,1/n),space=unit_interval", |_| unreachable!()).unwrap();
        for n in [1, 2, 5] {
            assert_eq!(seq.term(n).unwrap(), counterexample_gamma(n).into_base());
        }
        let c = SequenceSpec::parse_with("constant:f", |name| {
            assert_eq!(name, "f");
            Ok(id01())
        })
        .unwrap();
        assert_eq!(c.term(9).unwrap(), id01());
        assert!(SequenceSpec::parse_with("affine:b=1", |_| unreachable!()).is_err());
        assert!(SequenceSpec::parse_with("wobble", |_| unreachable!()).is_err());
        let whole = SequenceSpec::parse_with("affine:a=1/n,space=unit_interval", |_| unreachable!()).unwrap();
        assert_eq!(whole.term(2).unwrap().domain(), &OpenSet::whole(U));
    }

    #[test]
    fn constant_decay_is_zero() {
        let seq = SequenceSpec::constant("f", id01());
        let report = beta_decay_report(&seq, &id01(), &[1, 2, 3], &pow2_neg(8)).unwrap();
        assert!(report.enclosures.iter().all(|e| e.enclosure.lo.is_zero()));
        assert!(beta_decay_report(&seq, &id01(), &[], &pow2_neg(8)).is_err());
        assert!(beta_decay_report(&seq, &id01(), &[1], &int(0)).is_err());
    }

    #[test]
    fn constant_sequence_is_gamma_cauchy() {
        let seq = SequenceSpec::constant("f", id01());
        let report = gamma_cauchy_check(&seq, 6, &[k_quarter_half(R)], None, &pow2_neg(8)).unwrap();
        assert_eq!(report.verdict, Verdict::HoldsOnPrefix);
        let k = &report.compacts[0];
        assert_eq!(k.verdict, Verdict::HoldsOnPrefix);
        assert!(k.pairs.iter().all(|p| p.distance.is_zero()));
        assert!(report.enclosures.iter().all(|e| e.enclosure.lo.is_zero()));
    }

    #[test]
    fn counterexample_gamma_check() {
        let report =
            gamma_cauchy_check(&SequenceSpec::counterexample(), 16, &[k_quarter_half(U)], None, &pow2_neg(12)).unwrap();
        let fell = report.fell.as_ref().unwrap();
        assert_eq!(fell.candidate_source, "whole-space");
        let k = &report.compacts[0];
        assert_eq!(k.verdict, Verdict::FailsWithWitness);
        assert_eq!(k.inside_limit_complement, Some(false));
        let w = k.witness.as_ref().unwrap();
        assert!(w.index <= 4);
        assert!(!counterexample_gamma(w.index).domain().contains(&w.point));
        assert_eq!(report.verdict, Verdict::HoldsOnPrefix);
    }

    #[test]
    fn affine_gamma_check_spreads() {
        let report = gamma_cauchy_check(&affine_seq(), 12, &[k_quarter_half(R)], None, &pow2_neg(8)).unwrap();
        assert_eq!(report.verdict, Verdict::HoldsOnPrefix);
        for row in &report.compacts[0].rows {
            assert!(row.spread.as_ref().unwrap() <= &rat(1, 2 * row.index as i64));
        }
    }

    #[test]
    fn limit_candidates() {
        let seq = SequenceSpec::constant("f", id01());
        let k = k_quarter_half(R);
        let lc = limit_candidate(&seq, &k, 3, &rat(1, 8)).unwrap();
        assert_eq!(lc.tail_term, Some(int(0)));
        assert_eq!(lc.bound, rat(1, 8));
        assert_eq!(sup_distance(&lc.map, &id01(), &k).unwrap(), int(0));

        let inv = SequenceSpec::counterexample_inverse();
        let k0 = CompactSet::interval(U, int(0), rat(1, 2)).unwrap();
        let lc = limit_candidate(&inv, &k0, 32, &rat(1, 64)).unwrap();
        let zero = PartialMap::affine(&OpenSet::new(U, vec![half_open(int(0), int(1))]).unwrap(), U, &int(0), &int(0))
            .unwrap();
        let tail = lc.tail_term.clone().unwrap();
        assert!(tail <= rat(1, 32));
        assert!(sup_distance(&lc.map, &zero, &k0).unwrap() <= rat(1, 32) + &lc.slope_term);

        let lc = limit_candidate(&affine_seq(), &CompactSet::interval(R, int(0), rat(1, 2)).unwrap(), 16, &rat(1, 64));
        assert!(lc.is_err(), "0 is outside (0,1)");
        let lc = limit_candidate(&affine_seq(), &k, 16, &rat(1, 64)).unwrap();
        let err = sup_distance(&lc.map, &id01(), &k).unwrap();
        assert!(err <= lc.bound.clone() + rat(1, 32));
    }

    #[test]
    fn inverse_limit_affine() {
        let report =
            inverse_limit_check(&affine_seq(), &id01(), &id01(), &[k_quarter_half(R)], &[1, 2, 4, 8, 16], &pow2_neg(8))
                .unwrap();
        let ids = report.identities.as_ref().unwrap();
        assert!(ids.g_after_f_is_identity && ids.f_after_g_is_identity);
        assert_eq!(report.verdict, Verdict::HoldsOnPrefix);
        for row in &report.compacts[0].rows {
            let bound = rat(1, 2 * row.index as i64);
            assert!(row.forward.as_ref().unwrap() <= &bound);
            assert!(row.backward.as_ref().unwrap() <= &bound);
        }
    }

    #[test]
    fn inverse_limit_counterexample_hypothesis_fails() {
        let dom = OpenSet::new(U, vec![half_open(int(0), int(1))]).unwrap();
        let zero = PartialMap::affine(&dom, U, &int(0), &int(0)).unwrap();
        let empty = PartialMap::empty(U, U);
        let err = inverse_limit_check(&SequenceSpec::counterexample(), &empty, &zero, &[], &[1, 2], &pow2_neg(8));
        assert!(matches!(err, Err(Error::Hypothesis { witness, .. }) if witness.is_zero()));
        assert!(matches!(invert(&zero), Err(Error::Injectivity { .. })));
    }
}
