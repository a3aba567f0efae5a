//! The part of a set inside a punctured window `(a−δ, a+δ) \ {a}`.

use num_traits::Signed;

use super::normal::{Base, NormalForm, Piece};
use super::{Interval, IntervalUnion, SetExpr};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalTrace {
    pub center: Rational,
    pub radius: Rational,
    /// Disjoint, sorted, maximal intervals.
    pub pieces: Vec<Interval>,
    /// Residual thin pieces, each clipped to one side of the window.
    pub thin: Vec<Piece>,
}

impl LocalTrace {
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty() && self.thin.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.pieces.iter().any(|iv| iv.contains(x)) || self.thin.iter().any(|p| p.contains(x))
    }

    pub fn normal_form(&self) -> NormalForm {
        let mut pieces: Vec<Piece> = self.pieces.iter().cloned().map(Piece::full).collect();
        pieces.extend(self.thin.iter().cloned());
        NormalForm { pieces }
    }

    pub fn to_expr(&self) -> SetExpr {
        self.normal_form().to_expr()
    }

    /// Left and right halves of the punctured window.
    pub fn halves(&self) -> [Interval; 2] {
        halves(&self.center, &self.radius)
    }
}

pub fn halves(a: &Rational, delta: &Rational) -> [Interval; 2] {
    [Interval::open(a - delta, a.clone()), Interval::open(a.clone(), a + delta)]
}

/// Exact trace of `expr` in the punctured window of radius `delta` at `a`.
pub fn window_trace(expr: &SetExpr, a: &Rational, delta: &Rational) -> Result<LocalTrace> {
    trace_of(&NormalForm::of(expr)?, a, delta)
}

pub fn trace_of(nf: &NormalForm, a: &Rational, delta: &Rational) -> Result<LocalTrace> {
    if !delta.is_positive() {
        return Err(Error::Range("window radius must be positive".into()));
    }
    let mut out = Vec::new();
    for half in halves(a, delta) {
        for p in &nf.pieces {
            let clipped = match &p.base {
                Base::Points(ps) => {
                    Piece::points(ps.iter().filter(|x| half.contains(x)).cloned().collect())
                }
                _ => p.with_clip(p.clip.intersect(&half)),
            };
            if let Some(q) = clipped.simplify() {
                expand(q, &mut out);
            }
        }
    }
    let nf = NormalForm { pieces: out }.canonical();
    let (solid, thin): (Vec<Piece>, Vec<Piece>) = nf.pieces.into_iter().partition(Piece::is_solid);
    let pieces = IntervalUnion::from_intervals(solid.into_iter().map(|p| p.clip)).into_parts();
    Ok(LocalTrace { center: a.clone(), radius: delta.clone(), pieces, thin })
}

/// Materializes family members that are not part of a symbolic tail, and
/// removes finite holes from ℝ-based pieces.
fn expand(p: Piece, out: &mut Vec<Piece>) {
    if let Base::Family(f) = &p.base {
        let split = f.split(&p.clip);
        for m in split.members {
            let q = Piece { base: Base::Full, clip: m, filter: p.filter, holes: p.holes.clone() };
            if let Some(q) = q.simplify() {
                expand(q, out);
            }
        }
        if let Some(n) = split.tail_from {
            let q = Piece { base: Base::Family(f.with_start(n)), ..p.clone() };
            out.extend(q.simplify());
        }
        return;
    }
    if p.base != Base::Full || p.holes.is_empty() {
        out.push(p);
        return;
    }
    // Split holes into ones that are finitely many intervals here and the rest.
    let mut removed = Vec::new();
    let mut kept = Vec::new();
    for h in &p.holes {
        match h {
            Base::Points(ps) => removed.extend(ps.iter().cloned().map(Interval::point)),
            Base::Family(f) => {
                let s = f.split(&p.clip);
                if s.tail_from.is_none() {
                    removed.extend(s.members);
                } else {
                    kept.push(h.clone());
                }
            }
            _ => kept.push(h.clone()),
        }
    }
    if removed.is_empty() {
        out.push(p);
        return;
    }
    let rest = IntervalUnion::from_intervals([p.clip.clone()])
        .subtract(&IntervalUnion::from_intervals(removed));
    for clip in rest.into_parts() {
        let q = Piece { base: Base::Full, clip, filter: p.filter, holes: kept.clone() };
        out.extend(q.simplify());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, one, rat};
    use crate::setalg::{Family, SetAtom};
    use crate::term::ClosedFormTerm;

    fn omega() -> SetExpr {
        let hi = ClosedFormTerm::reciprocal();
        let lo = hi.sub(&ClosedFormTerm::geometric(one(), rat(1, 2)).unwrap());
        SetAtom::IntervalFamily(Family::new(lo, hi, true, false, 1).unwrap()).into()
    }

    #[test]
    fn interval_with_far_point() {
        let e = SetExpr::from(Interval::closed(int(0), int(1)))
            .union(SetAtom::FinitePoints(vec![int(5)]).into());
        let t = window_trace(&e, &int(0), &rat(1, 2)).unwrap();
        assert_eq!(t.pieces, vec![Interval::open(int(0), rat(1, 2))]);
        assert!(t.thin.is_empty());
    }

    #[test]
    fn reals_punctured() {
        let t = window_trace(&SetExpr::reals(), &int(1), &int(1)).unwrap();
        assert_eq!(t.pieces, vec![Interval::open(int(0), int(1)), Interval::open(int(1), int(2))]);
    }

    #[test]
    fn omega_window() {
        let t = window_trace(&omega(), &int(0), &rat(1, 4)).unwrap();
        assert_eq!(t.pieces, vec![Interval::closed_open(rat(3, 16), rat(1, 4))]);
        assert_eq!(t.thin.len(), 1);
        match &t.thin[0].base {
            Base::Family(f) => assert_eq!(f.start, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn complement_of_family_away_from_limit() {
        let e = SetExpr::reals().minus(omega());
        let t = window_trace(&e, &rat(3, 4), &rat(1, 8)).unwrap();
        // Member 1 is [1/2, 1): removed entirely from (5/8, 7/8).
        assert!(t.is_empty());
        let t = window_trace(&e, &int(1), &rat(1, 4)).unwrap();
        assert!(t.thin.is_empty());
        assert_eq!(t.pieces, vec![Interval::open(int(1), rat(5, 4))]);
    }
}
