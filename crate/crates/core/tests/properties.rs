use num_bigint::BigInt;
use opendom_core::metric::sup_distance;
use opendom_core::rational::int;
use opendom_core::sets::{interior, normalize_open};
use opendom_core::suites::Sampler;
use opendom_core::*;
use proptest::prelude::*;

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-500i64..500, 1i64..70).prop_map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
}

fn arb_open_interval() -> impl Strategy<Value = Interval> {
    (arb_rational(), arb_rational())
        .prop_filter("nondegenerate", |(a, b)| a != b)
        .prop_map(|(a, b)| if a < b { Interval::open(a, b) } else { Interval::open(b, a) })
}

fn arb_space() -> impl Strategy<Value = AmbientSpace> {
    prop_oneof![Just(AmbientSpace::Reals), Just(AmbientSpace::UnitInterval)]
}

proptest! {
    #[test]
    fn rational_strings_round_trip(x in arb_rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn normalization_ignores_order(mut raw in prop::collection::vec(arb_open_interval(), 0..8)) {
        let a = normalize_open(raw.clone(), AmbientSpace::Reals).unwrap();
        raw.reverse();
        let b = normalize_open(raw, AmbientSpace::Reals).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(normalize_open(a.components().to_vec(), AmbientSpace::Reals).unwrap(), a);
    }

    #[test]
    fn de_morgan(xs in prop::collection::vec(arb_open_interval(), 0..5), ys in prop::collection::vec(arb_open_interval(), 0..5)) {
        let line = Interval::real_line();
        let a = IntervalUnion::from_intervals(xs);
        let b = IntervalUnion::from_intervals(ys);
        let lhs = a.union(&b).complement_within(&line);
        let rhs = a.complement_within(&line).intersection(&b.complement_within(&line));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.complement_within(&line).complement_within(&line), a);
    }

    #[test]
    fn exhaustion_is_nested(n in 1u64..(1 << 40), m in 1u64..200, space in arb_space()) {
        let k = compact_exhaustion(m, n, space);
        let next = interior(&compact_exhaustion(m + 1, n, space));
        prop_assert!(k.points().is_subset_of(next.points()));
        prop_assert!(k.points().is_subset_of(basis_element(n, space).points()));
    }

    #[test]
    fn gamma_inverse_is_two_sided(seed in any::<u64>(), space in arb_space()) {
        let f = Sampler::from_seed(seed).gamma(space);
        let inv = f.inverse();
        prop_assert_eq!(compose(&inv, &f).unwrap(), PartialMap::identity(f.domain()));
        prop_assert_eq!(compose(&f, &inv).unwrap(), PartialMap::identity(inv.domain()));
        prop_assert_eq!(inv.inverse(), f);
    }

    #[test]
    fn sup_distance_is_a_pseudometric(seed in any::<u64>(), space in arb_space()) {
        let mut s = Sampler::from_seed(seed);
        let dom = OpenSet::whole(space);
        let (f, g, h) = (s.map_on(&dom), s.map_on(&dom), s.map_on(&dom));
        let k = s.compact_in(&dom).unwrap();
        let fg = sup_distance(&f, &g, &k).unwrap();
        prop_assert_eq!(&fg, &sup_distance(&g, &f, &k).unwrap());
        prop_assert!(fg <= sup_distance(&f, &h, &k).unwrap() + sup_distance(&h, &g, &k).unwrap());
        prop_assert!(fg <= int(1));
    }

    #[test]
    fn restriction_agrees(seed in any::<u64>(), space in arb_space()) {
        let mut s = Sampler::from_seed(seed);
        let f = s.map(space);
        let u = s.open_set(space);
        let r = f.restrict(&u).unwrap();
        prop_assert_eq!(r.domain(), &f.domain().intersection(&u).unwrap());
        prop_assert_eq!(join(&[r.clone(), f.clone()]).unwrap(), f);
    }
}
