//! Piecewise-linear continuous maps on open domains: the carrier of
//! `C_od(X, Y)` and, when injective with open image, of `Γ(X)`.

mod piece;

use std::fmt;

use num_traits::{Signed, Zero};

pub use piece::{Node, Piece};

use crate::error::{Error, Result};
use crate::interval::{Endpoint, Interval, IntervalUnion};
use crate::rational::{int, Rational};
use crate::sets::{CompactSet, OpenSet, PointSet};
use crate::space::AmbientSpace;

/// A continuous PL map `dom(f) → codomain` with `dom(f)` open in `space`.
///
/// Pieces correspond one-to-one to the maximal components of the domain and
/// are stored canonically, so `==` is equality of partial functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialMap {
    space: AmbientSpace,
    codomain: AmbientSpace,
    pieces: Vec<Piece>,
    domain: OpenSet,
}

impl PartialMap {
    pub fn new(space: AmbientSpace, codomain: AmbientSpace, mut pieces: Vec<Piece>) -> Result<Self> {
        for p in &pieces {
            if !space.is_relatively_open(p.domain()) {
                return Err(Error::Representation(format!("piece domain {} is not open in {space}", p.domain())));
            }
        }
        pieces.sort_by(|a, b| a.domain().lo.cmp(&b.domain().lo));
        let domain = IntervalUnion::from_intervals(pieces.iter().map(|p| p.domain().clone()));
        if domain.parts().len() != pieces.len() || domain.parts().iter().zip(&pieces).any(|(c, p)| c != p.domain()) {
            return Err(Error::Representation("piece domains must be disjoint and non-adjacent".into()));
        }
        let target = codomain.universe();
        for p in &pieces {
            if !p.image().closure().is_subset_of(&target) {
                return Err(Error::Representation(format!("values on {} leave {codomain}", p.domain())));
            }
        }
        Ok(PartialMap { space, codomain, pieces, domain: OpenSet::from_union_unchecked(space, domain) })
    }

    /// Convenience: pieces given as `(domain, nodes)` with slopes past
    /// infinite ends read off the outer nodes.
    pub fn from_node_lists(
        space: AmbientSpace,
        codomain: AmbientSpace,
        pieces: Vec<(Interval, Vec<(Rational, Rational)>)>,
    ) -> Result<Self> {
        let pieces = pieces
            .into_iter()
            .map(|(d, ns)| Piece::from_nodes(d, ns.into_iter().map(|(x, y)| Node::new(x, y)).collect()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, codomain, pieces)
    }

    /// The empty function `∅`.
    pub fn empty(space: AmbientSpace, codomain: AmbientSpace) -> Self {
        PartialMap { space, codomain, pieces: Vec::new(), domain: OpenSet::empty(space) }
    }

    /// `x ↦ a·x + b` on `domain`.
    pub fn affine(domain: &OpenSet, codomain: AmbientSpace, a: &Rational, b: &Rational) -> Result<Self> {
        let pieces = domain
            .components()
            .iter()
            .map(|c| {
                let mut xs: Vec<Rational> = [&c.lo, &c.hi].into_iter().filter_map(|e| e.finite().cloned()).collect();
                if xs.is_empty() {
                    xs.push(Rational::zero());
                }
                let nodes = xs.into_iter().map(|x| Node::new(x.clone(), a * &x + b)).collect();
                let slope = |e: &Endpoint| (!e.is_finite()).then(|| a.clone());
                Piece::new(c.clone(), nodes, slope(&c.lo), slope(&c.hi))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain.space(), codomain, pieces)
    }

    pub fn identity(domain: &OpenSet) -> Self {
        Self::affine(domain, domain.space(), &int(1), &Rational::zero()).expect("identity stays in its space")
    }

    pub fn space(&self) -> AmbientSpace {
        self.space
    }

    pub fn codomain(&self) -> AmbientSpace {
        self.codomain
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn domain(&self) -> &OpenSet {
        &self.domain
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn piece_containing(&self, x: &Rational) -> Option<&Piece> {
        self.pieces.iter().find(|p| p.domain().contains(x))
    }

    pub fn evaluate(&self, x: &Rational) -> Result<Rational> {
        self.piece_containing(x).map(|p| p.eval(x)).ok_or_else(|| Error::Domain { point: x.clone() })
    }

    /// Some point of `k` outside the domain, if any.
    pub fn uncovered_point(&self, k: &CompactSet) -> Option<Rational> {
        let points = k.points();
        points.difference(self.domain.points()).parts().iter().find_map(|iv| {
            if iv.lo_closed {
                iv.lo.finite().cloned()
            } else if iv.hi_closed {
                iv.hi.finite().cloned()
            } else {
                iv.sample_point()
            }
        })
    }

    pub fn image(&self) -> IntervalUnion {
        IntervalUnion::from_intervals(self.pieces.iter().map(Piece::image))
    }

    /// `f(K)` for compact `K ⊆ dom(f)`.
    pub fn image_of(&self, k: &CompactSet) -> Result<IntervalUnion> {
        crate::sets::same_space(k, &self.domain)?;
        if let Some(point) = self.uncovered_point(k) {
            return Err(Error::Domain { point });
        }
        Ok(IntervalUnion::from_intervals(k.components().iter().map(|c| {
            let (a, b) = (c.lo.finite().unwrap(), c.hi.finite().unwrap());
            self.piece_containing(a).unwrap().image_on(a, b)
        })))
    }

    /// The image as an open subset of the codomain, when it is one.
    pub fn image_open(&self) -> Result<OpenSet> {
        OpenSet::from_union(self.codomain, self.image())
            .map_err(|_| Error::Representation(format!("image {} is not open in {}", self.image(), self.codomain)))
    }

    /// `f⁻¹(T) ∩ dom(f)` for any interval union `T` of the codomain line.
    pub fn preimage(&self, target: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        for p in &self.pieces {
            for seg in p.segments() {
                for t in target.parts() {
                    let iv = seg.preimage(t).intersect(p.domain());
                    if !iv.is_empty() {
                        out.push(iv);
                    }
                }
            }
        }
        IntervalUnion::from_intervals(out)
    }

    pub fn restrict(&self, to: &OpenSet) -> Result<PartialMap> {
        crate::sets::same_space(to, &self.domain)?;
        compose(self, &PartialMap::identity(to))
    }
}

impl fmt::Display for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "∅");
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}:", p.domain())?;
            for nd in p.nodes() {
                write!(f, " ({}, {})", nd.x, nd.y)?;
            }
        }
        Ok(())
    }
}

/// `f ∘ g` on `g⁻¹(dom f)`.
pub fn compose(f: &PartialMap, g: &PartialMap) -> Result<PartialMap> {
    if g.codomain != f.space {
        return Err(Error::MixedSpaces);
    }
    let dom = g.preimage(f.domain.points());
    let mut pieces = Vec::with_capacity(dom.parts().len());
    for comp in dom.parts() {
        let t = comp.sample_point().expect("components are nonempty");
        let gp = g.piece_containing(&t).expect("preimage lies in dom(g)");
        let fp = f.piece_containing(&gp.eval(&t)).expect("image lies in dom(f)");
        let closure = comp.closure();
        let mut xs: Vec<Rational> = [&comp.lo, &comp.hi].into_iter().filter_map(|e| e.finite().cloned()).collect();
        xs.extend(gp.nodes().iter().map(|nd| nd.x.clone()).filter(|x| closure.contains(x)));
        for seg in gp.segments() {
            for nd in fp.nodes() {
                if let Some(x) = seg.solve(&nd.x) {
                    if closure.contains(&x) {
                        xs.push(x);
                    }
                }
            }
        }
        xs.sort();
        xs.dedup();
        let value = |x: &Rational| fp.eval(&gp.eval(x));
        let first = xs.first().expect("a nonempty component has an anchor").clone();
        let last = xs.last().unwrap().clone();
        let left = (!comp.lo.is_finite()).then(|| value(&first) - value(&(&first - int(1))));
        let right = (!comp.hi.is_finite()).then(|| value(&(&last + int(1))) - value(&last));
        let nodes = xs.iter().map(|x| Node::new(x.clone(), value(x))).collect();
        pieces.push(Piece::new(comp.clone(), nodes, left, right)?);
    }
    PartialMap::new(g.space, f.codomain, pieces)
}

/// A partial homeomorphism between open subsets of one space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GammaMap {
    base: PartialMap,
}

impl GammaMap {
    /// Checks codomain = space, strict monotonicity on each piece, pairwise
    /// disjoint piece images, and openness of the image.
    pub fn new(base: PartialMap) -> Result<Self> {
        if base.codomain != base.space {
            return Err(Error::Representation("a partial homeomorphism maps a space into itself".into()));
        }
        check_injective(&base)?;
        base.image_open()?;
        Ok(GammaMap { base })
    }

    pub fn base(&self) -> &PartialMap {
        &self.base
    }

    pub fn into_base(self) -> PartialMap {
        self.base
    }

    pub fn image(&self) -> OpenSet {
        self.base.image_open().expect("checked at construction")
    }

    pub fn inverse(&self) -> GammaMap {
        let pieces = self
            .base
            .pieces
            .iter()
            .map(|p| {
                let increasing = p.segments()[0].slope.is_positive();
                let mut nodes: Vec<Node> = p.nodes().iter().map(|nd| Node::new(nd.y.clone(), nd.x.clone())).collect();
                let recip = |s: Option<&Rational>| s.map(|s| s.recip());
                let (left, right) = if increasing {
                    (recip(p.left_slope()), recip(p.right_slope()))
                } else {
                    nodes.reverse();
                    (recip(p.right_slope()), recip(p.left_slope()))
                };
                Piece::new(p.image(), nodes, left, right).expect("inverse of a monotone piece")
            })
            .collect();
        let base = PartialMap::new(self.base.space, self.base.space, pieces).expect("inverse pieces are disjoint");
        GammaMap { base }
    }
}

impl std::ops::Deref for GammaMap {
    type Target = PartialMap;

    fn deref(&self) -> &PartialMap {
        &self.base
    }
}

fn check_injective(f: &PartialMap) -> Result<()> {
    for p in &f.pieces {
        let segs = p.segments();
        for (i, seg) in segs.iter().enumerate() {
            if seg.slope.is_zero() {
                let (x1, x2) = seg.interior_pair();
                let y = seg.at(&x1);
                return Err(Error::Injectivity { x1, x2, y });
            }
            if i > 0 && segs[i - 1].slope.is_positive() != seg.slope.is_positive() {
                return Err(turning_witness(&segs[i - 1], seg));
            }
        }
    }
    let images: Vec<Interval> = f.pieces.iter().map(Piece::image).collect();
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let common = images[i].intersect(&images[j]);
            if let Some(y) = common.sample_point() {
                let solve = |p: &Piece| {
                    p.segments().iter().filter_map(|s| s.solve(&y)).find(|x| p.domain().contains(x)).unwrap()
                };
                return Err(Error::Injectivity { x1: solve(&f.pieces[i]), x2: solve(&f.pieces[j]), y });
            }
        }
    }
    Ok(())
}

// Two segments meeting at a node with slopes of opposite sign: pick a level
// just past the node value reached by both.
fn turning_witness(before: &piece::Segment, after: &piece::Segment) -> Error {
    let node_x = before.to.finite().unwrap().clone();
    let node_y = before.at(&node_x);
    let reach = |s: &piece::Segment, far: &Endpoint| far.finite().map(|x| (s.at(x) - &node_y).abs());
    let spans: Vec<Rational> = [reach(before, &before.from), reach(after, &after.to)].into_iter().flatten().collect();
    let d = spans.into_iter().min().unwrap_or_else(|| int(2)) / int(2);
    // Both segments leave the node on the same side.
    let up = after.slope.is_positive();
    let y = if up { &node_y + &d } else { &node_y - &d };
    let x1 = before.solve(&y).unwrap();
    let x2 = after.solve(&y).unwrap();
    Error::Injectivity { x1, x2, y }
}

/// The inverse of a globally injective map with open image.
pub fn invert(f: &PartialMap) -> Result<GammaMap> {
    Ok(GammaMap::new(f.clone())?.inverse())
}

/// The union function of maps that agree wherever their domains overlap.
pub fn join(fs: &[PartialMap]) -> Result<PartialMap> {
    let first = fs.first().ok_or_else(|| Error::Precondition("join needs at least one map".into()))?;
    if fs.iter().any(|f| f.space != first.space || f.codomain != first.codomain) {
        return Err(Error::MixedSpaces);
    }
    let tagged: Vec<(usize, &Piece)> =
        fs.iter().enumerate().flat_map(|(i, f)| f.pieces.iter().map(move |p| (i, p))).collect();
    for (a, &(i, p)) in tagged.iter().enumerate() {
        for &(j, q) in &tagged[a + 1..] {
            if i != j {
                check_agree(p, q)?;
            }
        }
    }
    let union = IntervalUnion::from_intervals(tagged.iter().map(|(_, p)| p.domain().clone()));
    let mut pieces = Vec::with_capacity(union.parts().len());
    for comp in union.parts() {
        let members: Vec<&Piece> =
            tagged.iter().map(|(_, p)| *p).filter(|p| p.domain().is_subset_of(comp)).collect();
        let closure = comp.closure();
        let mut xs: Vec<Rational> = [&comp.lo, &comp.hi].into_iter().filter_map(|e| e.finite().cloned()).collect();
        xs.extend(members.iter().flat_map(|p| p.nodes().iter().map(|nd| nd.x.clone())).filter(|x| closure.contains(x)));
        xs.sort();
        xs.dedup();
        let nodes = xs
            .into_iter()
            .map(|x| {
                let p = members.iter().find(|p| p.domain().closure().contains(&x)).unwrap();
                let y = p.eval(&x);
                Node::new(x, y)
            })
            .collect();
        let left = members.iter().find_map(|p| p.left_slope()).cloned();
        let right = members.iter().find_map(|p| p.right_slope()).cloned();
        pieces.push(Piece::new(comp.clone(), nodes, left, right)?);
    }
    PartialMap::new(first.space, first.codomain, pieces)
}

fn check_agree(p: &Piece, q: &Piece) -> Result<()> {
    let overlap = p.domain().intersect(q.domain());
    if overlap.is_empty() {
        return Ok(());
    }
    let closure = overlap.closure();
    let mut xs: Vec<Rational> = [&overlap.lo, &overlap.hi].into_iter().filter_map(|e| e.finite().cloned()).collect();
    xs.extend(p.nodes().iter().chain(q.nodes()).map(|nd| nd.x.clone()).filter(|x| closure.contains(x)));
    xs.sort();
    xs.dedup();
    if xs.is_empty() {
        xs.push(Rational::zero());
    }
    if !overlap.lo.is_finite() {
        let x = &xs[0] - int(1);
        xs.insert(0, x);
    }
    if !overlap.hi.is_finite() {
        let x = xs.last().unwrap() + int(1);
        xs.push(x);
    }
    let differs = |x: &Rational| p.eval(x) != q.eval(x);
    let Some(k) = xs.iter().position(differs) else {
        return Ok(());
    };
    let mut point = xs[k].clone();
    if !overlap.contains(&point) {
        // A closure endpoint; the difference is linear towards the neighbour,
        // so one of two nearby points inside the overlap still differs.
        let nb = if k == 0 { xs[1].clone() } else { xs[k - 1].clone() };
        let half = (&point + &nb) / int(2);
        point = if differs(&half) { half } else { (&point * int(2) + &nb) / int(3) };
    }
    Err(Error::Incompatible { left: p.eval(&point), right: q.eval(&point), point })
}
