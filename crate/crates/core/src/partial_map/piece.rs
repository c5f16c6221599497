use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{Endpoint, Interval};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub x: Rational,
    pub y: Rational,
}

impl Node {
    pub fn new(x: Rational, y: Rational) -> Self {
        Node { x, y }
    }
}

/// `y = slope·x + intercept` on `[from, to]` (closed at finite ends).
#[derive(Clone, Debug)]
pub(crate) struct Segment {
    pub from: Endpoint,
    pub to: Endpoint,
    pub slope: Rational,
    pub intercept: Rational,
}

impl Segment {
    fn through(a: &Node, b: &Node) -> Self {
        let slope = (&b.y - &a.y) / (&b.x - &a.x);
        let intercept = &a.y - &slope * &a.x;
        Segment { from: a.x.clone().into(), to: b.x.clone().into(), slope, intercept }
    }

    fn ray(anchor: &Node, slope: Rational, leftward: bool) -> Self {
        let intercept = &anchor.y - &slope * &anchor.x;
        let (from, to) = if leftward {
            (Endpoint::NegInf, anchor.x.clone().into())
        } else {
            (anchor.x.clone().into(), Endpoint::PosInf)
        };
        Segment { from, to, slope, intercept }
    }

    pub fn at(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }

    pub fn range(&self) -> Interval {
        Interval::new(self.from.clone(), true, self.to.clone(), true)
    }

    /// Two distinct points strictly inside the segment.
    pub fn interior_pair(&self) -> (Rational, Rational) {
        match (&self.from, &self.to) {
            (Endpoint::Finite(a), Endpoint::Finite(b)) => {
                let third = (b - a) / int(3);
                (a + &third, a + &third * int(2))
            }
            (Endpoint::NegInf, Endpoint::Finite(b)) => (b - int(2), b - int(1)),
            (Endpoint::Finite(a), Endpoint::PosInf) => (a + int(1), a + int(2)),
            _ => (int(0), int(1)),
        }
    }

    /// `{x in the segment : slope·x + intercept ∈ target}`.
    pub fn preimage(&self, target: &Interval) -> Interval {
        let range = self.range();
        if self.slope.is_zero() {
            return if target.contains(&self.intercept) {
                range
            } else {
                Interval::open(Rational::zero(), Rational::zero())
            };
        }
        let up = self.slope.is_positive();
        let map = |e: &Endpoint| match e {
            Endpoint::Finite(v) => Endpoint::Finite((v - &self.intercept) / &self.slope),
            Endpoint::NegInf if up => Endpoint::NegInf,
            Endpoint::NegInf => Endpoint::PosInf,
            Endpoint::PosInf if up => Endpoint::PosInf,
            Endpoint::PosInf => Endpoint::NegInf,
        };
        let raw = if up {
            Interval::new(map(&target.lo), target.lo_closed, map(&target.hi), target.hi_closed)
        } else {
            Interval::new(map(&target.hi), target.hi_closed, map(&target.lo), target.lo_closed)
        };
        raw.intersect(&range)
    }

    /// The `x` with value `y`, if the segment is not flat.
    pub fn solve(&self, y: &Rational) -> Option<Rational> {
        if self.slope.is_zero() {
            return None;
        }
        let x = (y - &self.intercept) / &self.slope;
        self.range().contains(&x).then_some(x)
    }
}

/// One linear-interpolation chart over a single domain component.
///
/// Nodes span the component's closure at finite ends; past an infinite end
/// the map continues linearly with the stored slope. The representation is
/// canonical: interior nodes where the slope does not change are dropped, so
/// structural equality is equality of functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    domain: Interval,
    nodes: Vec<Node>,
    left_slope: Option<Rational>,
    right_slope: Option<Rational>,
}

impl Piece {
    /// `left_slope` must be given exactly when the domain is unbounded
    /// below, `right_slope` exactly when it is unbounded above.
    pub fn new(
        domain: Interval,
        nodes: Vec<Node>,
        left_slope: Option<Rational>,
        right_slope: Option<Rational>,
    ) -> Result<Self> {
        let bad = |msg: &str| Err(Error::Representation(format!("piece on {domain}: {msg}")));
        if domain.is_empty() || domain.is_degenerate() {
            return bad("domain must be a nondegenerate interval");
        }
        if nodes.is_empty() {
            return bad("needs at least one node");
        }
        if nodes.windows(2).any(|w| w[0].x >= w[1].x) {
            return bad("node abscissae must be strictly increasing");
        }
        match &domain.lo {
            Endpoint::Finite(a) if &nodes[0].x != a => return bad("first node must sit on the left endpoint"),
            Endpoint::Finite(_) if left_slope.is_some() => return bad("left slope given for a bounded end"),
            Endpoint::NegInf if left_slope.is_none() => return bad("unbounded left end needs a slope"),
            _ => {}
        }
        match &domain.hi {
            Endpoint::Finite(b) if &nodes[nodes.len() - 1].x != b => {
                return bad("last node must sit on the right endpoint")
            }
            Endpoint::Finite(_) if right_slope.is_some() => return bad("right slope given for a bounded end"),
            Endpoint::PosInf if right_slope.is_none() => return bad("unbounded right end needs a slope"),
            _ => {}
        }
        let mut piece = Piece { domain, nodes, left_slope, right_slope };
        piece.canonicalize();
        Ok(piece)
    }

    /// Like [`Piece::new`], reading the slopes past infinite ends off the
    /// outermost pair of nodes (flat if there is only one node).
    pub fn from_nodes(domain: Interval, nodes: Vec<Node>) -> Result<Self> {
        let outer = |a: Option<&Node>, b: Option<&Node>| match (a, b) {
            (Some(a), Some(b)) if a.x != b.x => (&b.y - &a.y) / (&b.x - &a.x),
            _ => Rational::zero(),
        };
        let left = (!domain.lo.is_finite()).then(|| outer(nodes.first(), nodes.get(1)));
        let right = (!domain.hi.is_finite())
            .then(|| outer(nodes.len().checked_sub(2).and_then(|i| nodes.get(i)), nodes.last()));
        Self::new(domain, nodes, left, right)
    }

    fn canonicalize(&mut self) {
        let n = self.nodes.len();
        let slope = |i: usize| (&self.nodes[i + 1].y - &self.nodes[i].y) / (&self.nodes[i + 1].x - &self.nodes[i].x);
        let mut keep = vec![true; n];
        for (i, k) in keep.iter_mut().enumerate() {
            let pinned = (i == 0 && self.domain.lo.is_finite()) || (i == n - 1 && self.domain.hi.is_finite());
            if pinned {
                continue;
            }
            let left = if i == 0 { self.left_slope.clone() } else { Some(slope(i - 1)) };
            let right = if i == n - 1 { self.right_slope.clone() } else { Some(slope(i)) };
            if left.is_some() && left == right {
                *k = false;
            }
        }
        if keep.iter().all(|k| !k) {
            // Affine on the whole line: anchor at the origin.
            let y0 = self.eval(&Rational::zero());
            self.nodes = vec![Node::new(Rational::zero(), y0)];
            return;
        }
        let mut it = keep.into_iter();
        self.nodes.retain(|_| it.next().unwrap());
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn left_slope(&self) -> Option<&Rational> {
        self.left_slope.as_ref()
    }

    pub fn right_slope(&self) -> Option<&Rational> {
        self.right_slope.as_ref()
    }

    /// Value at any `x` of the closure of the domain (and beyond an infinite end).
    pub fn eval(&self, x: &Rational) -> Rational {
        let first = &self.nodes[0];
        let last = &self.nodes[self.nodes.len() - 1];
        if x < &first.x {
            let s = self.left_slope.clone().unwrap_or_else(Rational::zero);
            return &first.y + s * (x - &first.x);
        }
        if x > &last.x {
            let s = self.right_slope.clone().unwrap_or_else(Rational::zero);
            return &last.y + s * (x - &last.x);
        }
        let i = match self.nodes.binary_search_by(|nd| nd.x.cmp(x)) {
            Ok(i) => return self.nodes[i].y.clone(),
            Err(i) => i,
        };
        let (a, b) = (&self.nodes[i - 1], &self.nodes[i]);
        &a.y + (&b.y - &a.y) * (x - &a.x) / (&b.x - &a.x)
    }

    pub(crate) fn segments(&self) -> Vec<Segment> {
        let mut out = Vec::with_capacity(self.nodes.len() + 1);
        if let Some(s) = &self.left_slope {
            out.push(Segment::ray(&self.nodes[0], s.clone(), true));
        }
        out.extend(self.nodes.windows(2).map(|w| Segment::through(&w[0], &w[1])));
        if let Some(s) = &self.right_slope {
            out.push(Segment::ray(&self.nodes[self.nodes.len() - 1], s.clone(), false));
        }
        out
    }

    /// Exact image of the (relatively open) domain: an interval whose
    /// endpoint is closed iff it is attained inside the domain.
    pub fn image(&self) -> Interval {
        // (value, attained); infinities from rays handled separately.
        let mut cands: Vec<(Rational, bool)> = Vec::new();
        let (mut unbounded_lo, mut unbounded_hi) = (false, false);
        for seg in self.segments() {
            match (&seg.from, &seg.to) {
                (Endpoint::Finite(a), Endpoint::Finite(b)) => {
                    cands.push((seg.at(a), self.domain.contains(a)));
                    cands.push((seg.at(b), self.domain.contains(b)));
                    cands.push((seg.at(&((a + b) / int(2))), true));
                }
                (Endpoint::Finite(e), _) | (_, Endpoint::Finite(e)) => {
                    let y = seg.at(e);
                    let going_up = if seg.from == Endpoint::NegInf { seg.slope.is_negative() } else { seg.slope.is_positive() };
                    match seg.slope.cmp(&Rational::zero()) {
                        Ordering::Equal => cands.push((y, true)),
                        _ if going_up => {
                            unbounded_hi = true;
                            cands.push((y, self.domain.contains(e)));
                        }
                        _ => {
                            unbounded_lo = true;
                            cands.push((y, self.domain.contains(e)));
                        }
                    }
                }
                _ => unreachable!("rays have a finite anchor"),
            }
        }
        let min = cands.iter().map(|c| &c.0).min().unwrap().clone();
        let max = cands.iter().map(|c| &c.0).max().unwrap().clone();
        let attained = |v: &Rational| cands.iter().any(|(y, a)| *a && y == v);
        let lo = if unbounded_lo { Endpoint::NegInf } else { min.clone().into() };
        let hi = if unbounded_hi { Endpoint::PosInf } else { max.clone().into() };
        Interval::new(lo, attained(&min), hi, attained(&max))
    }

    /// Image of a closed bounded subinterval of the domain.
    pub fn image_on(&self, a: &Rational, b: &Rational) -> Interval {
        let mut vals = vec![self.eval(a), self.eval(b)];
        vals.extend(self.nodes.iter().filter(|nd| &nd.x > a && &nd.x < b).map(|nd| nd.y.clone()));
        let min = vals.iter().min().unwrap().clone();
        let max = vals.iter().max().unwrap().clone();
        Interval::closed(min, max)
    }

    /// Breakpoints strictly inside `(a, b)`.
    pub fn breakpoints_within<'a>(&'a self, a: &'a Rational, b: &'a Rational) -> impl Iterator<Item = &'a Rational> + 'a {
        self.nodes.iter().map(|nd| &nd.x).filter(move |x| *x > a && *x < b)
    }

    /// Restriction to a nondegenerate subinterval of the domain.
    pub fn restrict_to(&self, sub: &Interval) -> Result<Piece> {
        let closure = sub.closure();
        let mut xs: Vec<Rational> = [&sub.lo, &sub.hi].into_iter().filter_map(|e| e.finite().cloned()).collect();
        xs.extend(self.nodes.iter().map(|nd| nd.x.clone()).filter(|x| closure.contains(x)));
        xs.sort();
        xs.dedup();
        if xs.is_empty() {
            xs.push(Rational::zero());
        }
        let nodes = xs.into_iter().map(|x| Node::new(x.clone(), self.eval(&x))).collect();
        let left = (!sub.lo.is_finite()).then(|| self.left_slope.clone().unwrap_or_else(Rational::zero));
        let right = (!sub.hi.is_finite()).then(|| self.right_slope.clone().unwrap_or_else(Rational::zero));
        Piece::new(sub.clone(), nodes, left, right)
    }

    /// Nodes with the outer slopes written as an extra unit-step node, so a
    /// node list alone reproduces the piece (file form).
    pub fn file_nodes(&self) -> Vec<Node> {
        let mut out = Vec::with_capacity(self.nodes.len() + 2);
        let first = &self.nodes[0];
        if let Some(s) = &self.left_slope {
            out.push(Node::new(&first.x - Rational::one(), &first.y - s));
        }
        out.extend(self.nodes.iter().cloned());
        let last = &self.nodes[self.nodes.len() - 1];
        if let Some(s) = &self.right_slope {
            out.push(Node::new(&last.x + Rational::one(), &last.y + s));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn nd(x: Rational, y: Rational) -> Node {
        Node::new(x, y)
    }

    #[test]
    fn collinear_nodes_are_dropped() {
        let p = Piece::from_nodes(
            Interval::open(int(0), int(1)),
            vec![nd(int(0), int(0)), nd(rat(1, 2), rat(1, 2)), nd(int(1), int(1))],
        )
        .unwrap();
        assert_eq!(p.nodes().len(), 2);
    }

    #[test]
    fn affine_line_anchors_at_origin() {
        let a = Piece::from_nodes(Interval::real_line(), vec![nd(int(2), int(5)), nd(int(3), int(7))]).unwrap();
        let b = Piece::from_nodes(Interval::real_line(), vec![nd(int(-1), int(-1)), nd(int(0), int(1))]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.nodes(), &[nd(int(0), int(1))]);
        assert_eq!(a.eval(&int(10)), int(21));
    }

    #[test]
    fn validation() {
        let d = Interval::open(int(0), int(1));
        assert!(Piece::from_nodes(d.clone(), vec![nd(int(0), int(0))]).is_err());
        assert!(Piece::from_nodes(d.clone(), vec![nd(int(1), int(0)), nd(int(0), int(0))]).is_err());
        assert!(Piece::new(d, vec![nd(int(0), int(0)), nd(int(1), int(0))], Some(int(1)), None).is_err());
    }

    #[test]
    fn tent_image_closed_at_peak() {
        let p = Piece::from_nodes(
            Interval::open(int(0), int(1)),
            vec![nd(int(0), int(0)), nd(rat(1, 2), int(1)), nd(int(1), int(0))],
        )
        .unwrap();
        assert_eq!(p.image(), Interval::new(int(0).into(), false, int(1).into(), true));
    }

    #[test]
    fn constant_on_open_domain_is_attained() {
        let p = Piece::from_nodes(Interval::open(int(0), int(1)), vec![nd(int(0), int(3)), nd(int(1), int(3))]).unwrap();
        assert_eq!(p.image(), Interval::point(int(3)));
    }

    #[test]
    fn ray_images() {
        let id = Piece::from_nodes(Interval::real_line(), vec![nd(int(0), int(0)), nd(int(1), int(1))]).unwrap();
        assert_eq!(id.image(), Interval::real_line());
        let neg = Piece::from_nodes(
            Interval::new(int(0).into(), false, Endpoint::PosInf, false),
            vec![nd(int(0), int(0)), nd(int(1), int(-1))],
        )
        .unwrap();
        assert_eq!(neg.image(), Interval::new(Endpoint::NegInf, false, int(0).into(), false));
    }

    #[test]
    fn file_nodes_round_trip() {
        let p = Piece::new(
            Interval::new(Endpoint::NegInf, false, int(2).into(), false),
            vec![nd(int(0), int(0)), nd(int(2), int(1))],
            Some(int(3)),
            None,
        )
        .unwrap();
        let q = Piece::from_nodes(p.domain().clone(), p.file_nodes()).unwrap();
        assert_eq!(p, q);
    }
}
