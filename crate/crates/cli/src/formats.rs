//! JSON file formats for intervals, maps and closed sets, and the inline
//! text forms accepted on the command line.

use std::fs;
use std::path::Path;

use opendom_core::hyperspace::ClosedSet;
use opendom_core::partial_map::{Node, Piece};
use opendom_core::rational::int;
use opendom_core::{
    format_rational, parse_rational, AmbientSpace, CompactSet, Endpoint, Error, Interval, OpenSet, PartialMap,
    PointSet, Rational, Result,
};
use serde::{Deserialize, Serialize};

/// `{"lo": "p/q", "hi": "p/q", "lo_open": bool, "hi_open": bool}`, with
/// `"-inf"` / `"inf"` for unbounded ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalDto {
    pub lo: String,
    pub hi: String,
    pub lo_open: bool,
    pub hi_open: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDto {
    pub x: String,
    pub y: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceDto {
    pub domain: IntervalDto,
    pub nodes: Vec<NodeDto>,
}

/// A function file. `space` and `codomain` may be omitted only for the
/// empty map, which then adopts the space of the other operand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain: Option<String>,
    pub pieces: Vec<PieceDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedSetDto {
    pub space: String,
    pub complement: Vec<IntervalDto>,
}

/// A set file: either a bare list of intervals or `{"space", "intervals"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetDto {
    List(Vec<IntervalDto>),
    Tagged { space: String, intervals: Vec<IntervalDto> },
}

fn endpoint_text(e: &Endpoint) -> String {
    match e {
        Endpoint::NegInf => "-inf".into(),
        Endpoint::PosInf => "inf".into(),
        Endpoint::Finite(x) => format_rational(x),
    }
}

fn parse_endpoint(s: &str) -> Result<Endpoint> {
    match s.trim() {
        "-inf" => Ok(Endpoint::NegInf),
        "inf" | "+inf" => Ok(Endpoint::PosInf),
        other => parse_rational(other).map(Endpoint::Finite),
    }
}

impl IntervalDto {
    pub fn from_interval(iv: &Interval) -> Self {
        IntervalDto {
            lo: endpoint_text(&iv.lo),
            hi: endpoint_text(&iv.hi),
            lo_open: !iv.lo_closed,
            hi_open: !iv.hi_closed,
        }
    }

    pub fn to_interval(&self) -> Result<Interval> {
        let lo = parse_endpoint(&self.lo)?;
        let hi = parse_endpoint(&self.hi)?;
        if lo == Endpoint::PosInf || hi == Endpoint::NegInf {
            return Err(Error::Parse(format!("interval ends out of place: {} {}", self.lo, self.hi)));
        }
        if (!lo.is_finite() && !self.lo_open) || (!hi.is_finite() && !self.hi_open) {
            return Err(Error::Parse("infinite ends must be open".into()));
        }
        Ok(Interval::new(lo, !self.lo_open, hi, !self.hi_open))
    }
}

pub fn parse_space(s: &str) -> Result<AmbientSpace> {
    s.parse()
}

impl FunctionDto {
    pub fn from_map(f: &PartialMap) -> Self {
        FunctionDto {
            space: Some(f.space().name().into()),
            codomain: Some(f.codomain().name().into()),
            pieces: f
                .pieces()
                .iter()
                .map(|p| PieceDto {
                    domain: IntervalDto::from_interval(p.domain()),
                    nodes: p
                        .file_nodes()
                        .iter()
                        .map(|nd| NodeDto { x: format_rational(&nd.x), y: format_rational(&nd.y) })
                        .collect(),
                })
                .collect(),
        }
    }

    /// `fallback` supplies the space of a file that omits it.
    pub fn to_map(&self, fallback: Option<AmbientSpace>) -> Result<PartialMap> {
        let space = match (&self.space, fallback) {
            (Some(s), _) => parse_space(s)?,
            (None, Some(s)) if self.pieces.is_empty() => s,
            (None, None) if self.pieces.is_empty() => AmbientSpace::Reals,
            _ => return Err(Error::Parse("function file needs \"space\"".into())),
        };
        let codomain = match &self.codomain {
            Some(c) => parse_space(c)?,
            None => space,
        };
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let nodes = p
                    .nodes
                    .iter()
                    .map(|nd| Ok(Node::new(parse_rational(&nd.x)?, parse_rational(&nd.y)?)))
                    .collect::<Result<Vec<_>>>()?;
                Piece::from_nodes(p.domain.to_interval()?, nodes)
            })
            .collect::<Result<Vec<_>>>()?;
        PartialMap::new(space, codomain, pieces)
    }
}

impl ClosedSetDto {
    pub fn from_set(a: &ClosedSet) -> Self {
        ClosedSetDto {
            space: a.space().name().into(),
            complement: a.complement().components().iter().map(IntervalDto::from_interval).collect(),
        }
    }

    pub fn to_set(&self) -> Result<ClosedSet> {
        let space = parse_space(&self.space)?;
        let parts = self.complement.iter().map(IntervalDto::to_interval).collect::<Result<Vec<_>>>()?;
        Ok(ClosedSet::from_complement(OpenSet::new(space, parts)?))
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Space written in a function file, without building the map.
pub fn declared_space(arg: &str) -> Option<AmbientSpace> {
    let path = Path::new(arg);
    if !path.is_file() {
        return None;
    }
    read_json::<FunctionDto>(path).ok()?.space.and_then(|s| parse_space(&s).ok())
}

/// A map from a file path or a keyword: `empty`, `id`, `zero`, or
/// `id:SET` / `zero:SET` with `SET` an inline interval list.
pub fn load_map(arg: &str, space: Option<AmbientSpace>) -> Result<PartialMap> {
    let path = Path::new(arg);
    if path.is_file() {
        return read_json::<FunctionDto>(path)?.to_map(space);
    }
    let space = space.unwrap_or(AmbientSpace::Reals);
    let (head, tail) = match arg.split_once(':') {
        Some((h, t)) => (h, Some(t)),
        None => (arg, None),
    };
    let dom = match tail {
        Some(t) => parse_open(t, space)?,
        None => OpenSet::whole(space),
    };
    match head {
        "empty" if tail.is_none() => Ok(PartialMap::empty(space, space)),
        "id" => Ok(PartialMap::identity(&dom)),
        "zero" => PartialMap::affine(&dom, space, &int(0), &Rational::from_integer(0.into())),
        _ => Err(Error::Parse(format!("{arg:?} is neither a file nor a map keyword (empty, id, zero, id:SET, zero:SET)"))),
    }
}

pub fn load_closed_set(arg: &str, space: Option<AmbientSpace>) -> Result<ClosedSet> {
    let path = Path::new(arg);
    if path.is_file() {
        return read_json::<ClosedSetDto>(path)?.to_set();
    }
    let space = space.unwrap_or(AmbientSpace::Reals);
    match arg {
        "empty" => Ok(ClosedSet::empty(space)),
        "whole" => Ok(ClosedSet::whole(space)),
        _ => match arg.strip_prefix("complement:") {
            Some(t) => Ok(ClosedSet::from_complement(parse_open(t, space)?)),
            None => Err(Error::Parse(format!("{arg:?} is neither a file nor a set keyword (empty, whole, complement:SET)"))),
        },
    }
}

fn read_set(arg: &str, space: Option<AmbientSpace>) -> Result<(AmbientSpace, Vec<Interval>)> {
    let path = Path::new(arg);
    if path.is_file() {
        let (declared, list) = match read_json::<SetDto>(path)? {
            SetDto::List(l) => (None, l),
            SetDto::Tagged { space, intervals } => (Some(parse_space(&space)?), intervals),
        };
        let space = declared.or(space).unwrap_or(AmbientSpace::Reals);
        let parts = list.iter().map(IntervalDto::to_interval).collect::<Result<Vec<_>>>()?;
        return Ok((space, parts));
    }
    Ok((space.unwrap_or(AmbientSpace::Reals), parse_interval_list(arg)?))
}

pub fn parse_open(arg: &str, space: AmbientSpace) -> Result<OpenSet> {
    let (space, parts) = read_set(arg, Some(space))?;
    OpenSet::new(space, parts)
}

pub fn parse_compact(arg: &str, space: AmbientSpace) -> Result<CompactSet> {
    let (space, parts) = read_set(arg, Some(space))?;
    CompactSet::new(space, parts)
}

/// Inline intervals such as `[1/4,1/2]` or `(0,1)u(2,inf)`; an empty list
/// is written `{}`.
pub fn parse_interval_list(text: &str) -> Result<Vec<Interval>> {
    let text = text.trim();
    if text == "{}" || text == "∅" {
        return Ok(Vec::new());
    }
    text.split(['u', '∪'])
        .map(|part| {
            let part = part.trim();
            let bad = || Error::Parse(format!("invalid interval {part:?}"));
            let lo_closed = match part.chars().next() {
                Some('[') => true,
                Some('(') => false,
                _ => return Err(bad()),
            };
            let hi_closed = match part.chars().last() {
                Some(']') => true,
                Some(')') => false,
                _ => return Err(bad()),
            };
            let (lo, hi) = part[1..part.len() - 1].split_once(',').ok_or_else(bad)?;
            IntervalDto { lo: lo.into(), hi: hi.into(), lo_open: !lo_closed, hi_open: !hi_closed }.to_interval()
        })
        .collect()
}

pub fn set_text<S: PointSet>(s: &S) -> String {
    s.points().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use opendom_core::rational::rat;

    #[test]
    fn map_files_round_trip() {
        let r = AmbientSpace::Reals;
        let whole = PartialMap::identity(&OpenSet::whole(r));
        let dom = OpenSet::new(r, vec![Interval::open(int(0), int(1)), Interval::new(int(2).into(), false, Endpoint::PosInf, false)]).unwrap();
        let f = PartialMap::affine(&dom, r, &rat(3, 2), &int(-1)).unwrap();
        for g in [whole, f, PartialMap::empty(r, r)] {
            let dto = FunctionDto::from_map(&g);
            let text = serde_json::to_string(&dto).unwrap();
            let back: FunctionDto = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_map(None).unwrap(), g);
        }
    }

    #[test]
    fn empty_map_adopts_space() {
        let dto: FunctionDto = serde_json::from_str(r#"{"pieces": []}"#).unwrap();
        let f = dto.to_map(Some(AmbientSpace::UnitInterval)).unwrap();
        assert_eq!(f.space(), AmbientSpace::UnitInterval);
        assert!(f.is_empty());
    }

    #[test]
    fn inline_sets() {
        let parts = parse_interval_list("[1/4,1/2] u (2, inf)").unwrap();
        assert_eq!(parts[0], Interval::closed(rat(1, 4), rat(1, 2)));
        assert_eq!(parts[1], Interval::new(int(2).into(), false, Endpoint::PosInf, false));
        assert!(parse_interval_list("{}").unwrap().is_empty());
        assert!(parse_interval_list("[1,2").is_err());
        assert!(parse_interval_list("[-inf,2)").is_err());
    }

    #[test]
    fn keywords() {
        let u = AmbientSpace::UnitInterval;
        assert_eq!(load_map("id", Some(u)).unwrap(), PartialMap::identity(&OpenSet::whole(u)));
        assert!(load_map("empty", None).unwrap().is_empty());
        let z = load_map("zero:[0,1)", Some(u)).unwrap();
        assert_eq!(z.evaluate(&rat(1, 2)).unwrap(), int(0));
        assert!(load_map("nonsense", None).is_err());
        assert!(load_closed_set("whole", None).unwrap().contains(&int(5)));
    }
}
