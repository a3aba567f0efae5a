//! Stable radius: below it, every window trace has the same shape.
//!
//! Each feature of a normal form other than what accumulates at `a`
//! (interval endpoints, isolated points, Cantor gaps next to `a`, members of
//! families whose limit differs from `a`) sits at a positive distance from
//! `a`. Inside the smallest such distance, shrinking the window only
//! shrinks what accumulates at `a`, so emptiness, cardinality, accumulation
//! and null measure no longer depend on the radius.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{half, Rational};
use crate::setalg::cantor::SideGerm;
use crate::setalg::family::MATERIALIZE_CAP;
use crate::setalg::trace::trace_of;
use crate::setalg::{Base, Cantor, Family, Interval, LocalTrace, NormalForm};

pub fn stable_radius(nf: &NormalForm, a: &Rational) -> Result<Rational> {
    let mut best = Rational::one();
    let mut feature = |x: &Rational| {
        let d = (x - a).abs();
        if d.is_positive() && d < best {
            best = d;
        }
    };
    for p in &nf.pieces {
        for e in p.clip.endpoints() {
            feature(e);
        }
        for b in std::iter::once(&p.base).chain(&p.holes) {
            match b {
                Base::Full => {}
                Base::Points(ps) => ps.iter().for_each(&mut feature),
                Base::Cantor(c) => cantor_features(c, a, &mut feature),
                Base::Family(f) => family_features(f, a, &mut feature)?,
            }
        }
    }
    Ok(best)
}

fn cantor_features(c: &Cantor, a: &Rational, feature: &mut impl FnMut(&Rational)) {
    if let SideGerm::Gap(Some(d)) = c.right_germ(a) {
        feature(&(a + d));
    }
    if let SideGerm::Gap(Some(d)) = c.left_germ(a) {
        feature(&(a - d));
    }
}

fn family_features(f: &Family, a: &Rational, feature: &mut impl FnMut(&Rational)) -> Result<()> {
    let lim = f.limit().clone();
    let upto = if &lim != a {
        let d = (&lim - a).abs() * half();
        feature(&(a + &d));
        f.index_within(&d)
    } else {
        let window = Interval::open(a - Rational::one(), a + Rational::one());
        let layout = f.layout();
        f.split(&window)
            .tail_from
            .map(|n| n.max(layout.sorted_from.unwrap_or(layout.side_from)))
    };
    let Some(n) = upto else {
        return Err(Error::Undecidable("family reach does not shrink".into()));
    };
    if n - f.start > MATERIALIZE_CAP {
        return Err(Error::Undecidable(format!(
            "{} family members lie near the point",
            n - f.start
        )));
    }
    for k in f.start..n {
        let m = f.member(k);
        m.endpoints().for_each(&mut *feature);
    }
    Ok(())
}

/// Trace at the stable radius.
pub fn germ_trace(nf: &NormalForm, a: &Rational) -> Result<LocalTrace> {
    let r = stable_radius(nf, a)?;
    debug_assert!(!r.is_zero());
    trace_of(nf, a, &r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, one, rat};
    use crate::setalg::{SetAtom, SetExpr};
    use crate::term::ClosedFormTerm;

    #[test]
    fn radius_from_endpoints_and_points() {
        let e = SetExpr::from(Interval::closed(rat(1, 3), int(2)))
            .union(SetAtom::FinitePoints(vec![rat(-1, 5)]).into());
        let nf = NormalForm::of(&e).unwrap();
        assert_eq!(stable_radius(&nf, &int(0)).unwrap(), rat(1, 5));
    }

    #[test]
    fn omega_germ_keeps_tail() {
        let hi = ClosedFormTerm::reciprocal();
        let lo = hi.sub(&ClosedFormTerm::geometric(one(), rat(1, 2)).unwrap());
        let om: SetExpr = SetAtom::IntervalFamily(Family::new(lo, hi, true, false, 1).unwrap()).into();
        let nf = NormalForm::of(&om).unwrap();
        let r = stable_radius(&nf, &int(0)).unwrap();
        assert!(r.is_positive());
        let t = germ_trace(&nf, &int(0)).unwrap();
        assert!(t.thin.iter().any(|p| matches!(p.base, Base::Family(_))));
    }

    #[test]
    fn cantor_gap_is_a_feature() {
        let nf = NormalForm::of(&SetAtom::CantorAffine(Cantor::standard()).into()).unwrap();
        assert_eq!(stable_radius(&nf, &rat(1, 2)).unwrap(), rat(1, 6));
        assert_eq!(stable_radius(&nf, &int(0)).unwrap(), int(1));
    }
}
