//! Brute-force reference for the series metrics. Shares nothing with the
//! library beyond map evaluation: its own rational order, candidate
//! intervals, exhaustions and plain double-loop sums.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use opendom_core::{AmbientSpace, Endpoint, PartialMap, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct Iv {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

fn r(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Reduced `p/q` by `|p| + q`, then by `p`.
pub fn rationals(count: usize) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut s = 1i64;
    while out.len() < count {
        for p in -(s - 1)..s {
            let q = s - p.abs();
            if q >= 1 && p.abs().gcd(&q) == 1 {
                out.push(r(p, q));
            }
        }
        s += 1;
    }
    out.truncate(count);
    out
}

pub fn candidates(space: AmbientSpace, count: usize) -> Vec<Iv> {
    let rs = rationals(400);
    let mut out = Vec::new();
    let mut s = 2;
    while out.len() < count {
        for i in 1..s {
            let j = s - i;
            let (a, b) = (&rs[i - 1], &rs[j - 1]);
            if a >= b {
                continue;
            }
            let iv = match space {
                AmbientSpace::Reals => Iv { lo: Some(a.clone()), hi: Some(b.clone()), lo_closed: false, hi_closed: false },
                AmbientSpace::UnitInterval => {
                    let (lo, lc) = if a < &Rational::zero() { (Rational::zero(), true) } else { (a.clone(), false) };
                    let (hi, hc) = if b > &Rational::one() { (Rational::one(), true) } else { (b.clone(), false) };
                    if lo >= hi {
                        continue;
                    }
                    Iv { lo: Some(lo), hi: Some(hi), lo_closed: lc, hi_closed: hc }
                }
            };
            out.push(iv);
            if out.len() == count {
                break;
            }
        }
        s += 1;
    }
    out
}

/// Union of `I_{k+1}` over the set bits `k` of `n`, merged by a sweep.
pub fn basis(n: u64, space: AmbientSpace) -> Vec<Iv> {
    let table = candidates(space, 64);
    let mut parts: Vec<Iv> = (0..64).filter(|k| n >> k & 1 == 1).map(|k| table[k].clone()).collect();
    parts.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
    let mut out: Vec<Iv> = Vec::new();
    for p in parts {
        if let Some(last) = out.last_mut() {
            let (lh, pl) = (last.hi.clone().unwrap(), p.lo.clone().unwrap());
            let touches = pl < lh || (pl == lh && (last.hi_closed || p.lo_closed));
            if touches {
                let ph = p.hi.clone().unwrap();
                if ph > lh {
                    last.hi = Some(ph);
                    last.hi_closed = p.hi_closed;
                } else if ph == lh {
                    last.hi_closed |= p.hi_closed;
                }
                continue;
            }
        }
        out.push(p);
    }
    out
}

/// Closed `K_mn` components.
pub fn exhaustion(m: u64, n: u64, space: AmbientSpace) -> Vec<(Rational, Rational)> {
    basis(n, space)
        .into_iter()
        .map(|c| {
            let (a, b) = (c.lo.unwrap(), c.hi.unwrap());
            let margin = (&b - &a) / r(2 * (m as i64 + 1), 1);
            let lo = if c.lo_closed { a.clone() } else { &a + &margin };
            let hi = if c.hi_closed { b.clone() } else { &b - &margin };
            (lo, hi)
        })
        .collect()
}

/// Relative interior of `K_mn`: open except at the ends of `[0, 1]`.
pub fn exhaustion_interior(m: u64, n: u64, space: AmbientSpace) -> Vec<Iv> {
    exhaustion(m, n, space)
        .into_iter()
        .filter(|(a, b)| a < b)
        .map(|(a, b)| {
            let unit = space == AmbientSpace::UnitInterval;
            Iv {
                lo_closed: unit && a.is_zero(),
                hi_closed: unit && b.is_one(),
                lo: Some(a),
                hi: Some(b),
            }
        })
        .collect()
}

fn endpoint(e: &Endpoint) -> Option<Rational> {
    match e {
        Endpoint::Finite(x) => Some(x.clone()),
        _ => None,
    }
}

fn inside(j: &Iv, c: &Iv) -> bool {
    let lo_ok = match (&c.lo, &j.lo) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(cl), Some(jl)) => cl < jl || (cl == jl && (c.lo_closed || !j.lo_closed)),
    };
    let hi_ok = match (&c.hi, &j.hi) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(ch), Some(jh)) => jh < ch || (ch == jh && (c.hi_closed || !j.hi_closed)),
    };
    lo_ok && hi_ok
}

pub fn domain_parts(f: &PartialMap) -> Vec<Iv> {
    f.domain()
        .components()
        .iter()
        .map(|c| Iv { lo: endpoint(&c.lo), hi: endpoint(&c.hi), lo_closed: c.lo_closed, hi_closed: c.hi_closed })
        .collect()
}

/// `int(K_{(m+1)n}) ⊄ dom`, with `dom` given by its components.
pub fn hits(dom: &[Iv], m: u64, n: u64, space: AmbientSpace) -> bool {
    exhaustion_interior(m + 1, n, space).iter().any(|j| !dom.iter().any(|c| inside(j, c)))
}

/// `sup_K min(|f - g|, 1)` by evaluation at the ends of each component and
/// at every node abscissa inside it.
pub fn sup_on(f: &PartialMap, g: &PartialMap, k: &[(Rational, Rational)]) -> Rational {
    let mut best = Rational::zero();
    for (a, b) in k {
        let mut xs = vec![a.clone(), b.clone()];
        for h in [f, g] {
            for p in h.pieces() {
                xs.extend(p.nodes().iter().map(|nd| nd.x.clone()).filter(|x| x > a && x < b));
            }
        }
        for x in xs {
            let d = (f.evaluate(&x).unwrap() - g.evaluate(&x).unwrap()).abs();
            if d > best {
                best = d;
            }
        }
    }
    best.min(Rational::one())
}

pub fn beta_mn(f: &PartialMap, g: &PartialMap, m: u64, n: u64) -> Rational {
    let space = f.space();
    let fl = hits(&domain_parts(f), m, n, space);
    let gl = hits(&domain_parts(g), m, n, space);
    match (fl, gl) {
        (true, true) => Rational::zero(),
        (false, false) => sup_on(f, g, &exhaustion(m, n, space)),
        _ => Rational::one(),
    }
}

fn weight(m: u64, n: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << (m + n))
}

/// `Σ_{n ≤ cut} Σ_{m ≤ cut} 2^{-(m+n)} β_mn(f, g)`.
pub fn beta_partial(f: &PartialMap, g: &PartialMap, cut: u64) -> Rational {
    let mut acc = Rational::zero();
    for n in 1..=cut {
        for m in 1..=cut {
            acc += weight(m, n) * beta_mn(f, g, m, n);
        }
    }
    acc
}

/// Same sum for `d_Fell` between the closed sets with complements `a`, `b`.
pub fn fell_partial(a: &[Iv], b: &[Iv], space: AmbientSpace, cut: u64) -> Rational {
    let mut acc = Rational::zero();
    for n in 1..=cut {
        for m in 1..=cut {
            if hits(a, m, n, space) != hits(b, m, n, space) {
                acc += weight(m, n);
            }
        }
    }
    acc
}
