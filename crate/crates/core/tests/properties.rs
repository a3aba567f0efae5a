mod common;

use limitlab::analyzers::measure;
use limitlab::decompose::probe_points;
use limitlab::funcdsl::{Op, Prepared};
use limitlab::oracle::{density_profile, mc_measure, SampleConfig};
use limitlab::rational::{int, rat, Rational};
use limitlab::setalg::{NormalForm, SetExpr};
use limitlab::syntax::{parse_fn, parse_set};
use num_traits::Signed;
use proptest::prelude::*;

fn probes() -> Vec<Rational> {
    (-60..=60).map(|k| rat(k, 12)).chain((1..40).map(|k| rat(1, k))).collect()
}

fn interval_union(bounds: &[(i64, i64)]) -> String {
    bounds
        .iter()
        .map(|&(x, y)| format!("[{}/8, {}/8]", x.min(y), x.max(y)))
        .collect::<Vec<_>>()
        .join(" | ")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_keeps_membership(seed in any::<u64>()) {
        let e = common::random_set(&mut common::rng(seed), 3);
        let Ok(nf) = NormalForm::of(&e) else { return Ok(()) };
        for x in probes() {
            prop_assert_eq!(nf.contains(&x), e.contains(&x), "{} at {}", e, x);
        }
    }

    #[test]
    fn de_morgan(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = common::random_set(&mut common::rng(s1), 2);
        let b = common::random_set(&mut common::rng(s2), 2);
        let lhs = SetExpr::reals().minus(a.clone().union(b.clone()));
        let rhs = SetExpr::reals().minus(a).intersect(SetExpr::reals().minus(b));
        let (Ok(l), Ok(r)) = (NormalForm::of(&lhs), NormalForm::of(&rhs)) else { return Ok(()) };
        for x in probes() {
            prop_assert_eq!(l.contains(&x), r.contains(&x));
        }
    }

    #[test]
    fn printed_sets_parse_back(seed in any::<u64>()) {
        let e = common::random_set(&mut common::rng(seed), 3);
        prop_assert_eq!(parse_set(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn arbitrary_text_never_panics(s in "[-a-zQR0-9()\\[\\],;|&\\\\/^*+{} .#\n]{0,40}") {
        let _ = parse_set(&s);
        let _ = parse_fn(&s);
    }

    #[test]
    fn inclusion_exclusion(a in prop::collection::vec((-16i64..16, -16i64..16), 1..4),
                           b in prop::collection::vec((-16i64..16, -16i64..16), 1..4)) {
        let (sa, sb) = (interval_union(&a), interval_union(&b));
        let m = |s: String| measure(&parse_set(&s).unwrap()).unwrap().value;
        let union = m(format!("({sa}) | ({sb})"));
        let meet = m(format!("({sa}) & ({sb})"));
        prop_assert_eq!(union + meet, m(sa) + m(sb));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The inner and outer sets enclose `{x : |f(x) − L| ≥ ε}` and shrink as
    /// `ε` grows.
    #[test]
    fn exceptional_sets_are_sandwiched_and_monotone(seed in 0u64..240, e in 1i64..8) {
        let c = common::case(seed);
        let p = Prepared::new(&c.f, &c.a, &int(1)).unwrap();
        let l = c.f.eval(&c.a).unwrap_or_else(|_| int(0));
        let (small, big) = (rat(e, 8), rat(e + 1, 8));
        let (Ok(s), Ok(t)) = (p.exceptional(&l, &small), p.exceptional(&l, &big)) else { return Ok(()) };
        for x in probe_points(&c.a).iter().filter(|x| (*x - &c.a).abs() < int(1) && **x != c.a) {
            let Ok(y) = c.f.eval(x) else { continue };
            let exact = (y - &l).abs() >= small;
            prop_assert!(!s.inner.contains(x) || exact, "{} at {}", c.src, x);
            prop_assert!(!exact || s.outer.contains(x), "{} at {}", c.src, x);
            prop_assert!(!t.inner.contains(x) || s.outer.contains(x));
        }
    }

    #[test]
    fn arithmetic_is_pointwise(s1 in 0u64..240, s2 in 0u64..240) {
        let (c, d) = (common::case(s1), common::case(s2));
        prop_assume!(c.special == common::Special::None || d.special == common::Special::None);
        let Ok(sum) = c.f.arith(&d.f, &Op::Add) else { return Ok(()) };
        let Ok(prod) = c.f.arith(&d.f, &Op::Mul) else { return Ok(()) };
        for x in probes() {
            let (Ok(u), Ok(v)) = (c.f.eval(&x), d.f.eval(&x)) else { continue };
            prop_assert_eq!(sum.eval(&x).unwrap(), &u + &v);
            prop_assert_eq!(prod.eval(&x).unwrap(), u * v);
        }
    }

    #[test]
    fn estimates_are_reproducible(seed in any::<u64>()) {
        let e = parse_set("[0, 1/3] | (1/2, 3/4)").unwrap();
        let cfg = SampleConfig::new(seed, 500, int(0), int(1));
        prop_assert_eq!(mc_measure(&e, &cfg).unwrap(), mc_measure(&e, &cfg).unwrap());
    }
}

#[test]
fn null_sets_have_zero_profiles() {
    let cfg = SampleConfig::new(5, 2000, int(0), int(1));
    for src in ["cantor(0, 1)", "Q(R)", "seq(1/n)", "points(0, 1/2)"] {
        let p = density_profile(&parse_set(src).unwrap(), &int(0), 8, &cfg).unwrap();
        assert!(p.points.iter().all(|q| q.ratio == 0.0), "{src}");
        assert!(p.nonincreasing);
    }
}
