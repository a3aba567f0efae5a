//! Symbolic subsets of ℝ built from seven atom kinds.

pub mod cantor;
pub mod family;
pub mod interval;
pub mod normal;
pub mod trace;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::term::ClosedFormTerm;

pub use cantor::Cantor;
pub use family::{Bounds, Family};
pub use interval::{Endpoint, Interval, IntervalUnion};
pub use normal::{normalize, Base, Filter, NormalForm, Piece};
pub use trace::{window_trace, LocalTrace};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetAtom {
    Empty,
    Interval(Interval),
    /// Sorted, without duplicates.
    FinitePoints(Vec<Rational>),
    RationalsIn(Interval),
    CantorAffine(Cantor),
    /// `{t(n) : n >= start}`, stored as the point family `[t(n), t(n)]`.
    Sequence(Family),
    IntervalFamily(Family),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[allow(clippy::large_enum_variant)]
pub enum SetExpr {
    Atom(SetAtom),
    Union(Vec<SetExpr>),
    Intersection(Vec<SetExpr>),
    Difference(Box<SetExpr>, Box<SetExpr>),
}

impl SetAtom {
    pub fn points(mut pts: Vec<Rational>) -> Self {
        pts.sort();
        pts.dedup();
        if pts.is_empty() {
            SetAtom::Empty
        } else {
            SetAtom::FinitePoints(pts)
        }
    }

    pub fn sequence(term: ClosedFormTerm, start: u64) -> Result<Self> {
        Ok(SetAtom::Sequence(Family::points(term, start)?))
    }

    pub fn cantor(offset: Rational, scale: Rational) -> Result<Self> {
        Ok(SetAtom::CantorAffine(Cantor::new(offset, scale)?))
    }

    /// Rejects reversed bounds; `(q, q)` and similar are kept and mean ∅.
    pub fn interval(iv: Interval) -> Result<Self> {
        check_order(&iv)?;
        Ok(SetAtom::Interval(iv))
    }

    pub fn rationals_in(iv: Interval) -> Result<Self> {
        check_order(&iv)?;
        Ok(SetAtom::RationalsIn(iv))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            SetAtom::Empty => false,
            SetAtom::Interval(iv) | SetAtom::RationalsIn(iv) => iv.contains(x),
            SetAtom::FinitePoints(p) => p.binary_search(x).is_ok(),
            SetAtom::CantorAffine(c) => c.contains(x),
            SetAtom::Sequence(f) | SetAtom::IntervalFamily(f) => f.contains(x),
        }
    }

    /// Atoms other than intervals and finite sets.
    pub fn is_thin(&self) -> bool {
        !matches!(self, SetAtom::Empty | SetAtom::Interval(_) | SetAtom::FinitePoints(_))
    }
}

fn check_order(iv: &Interval) -> Result<()> {
    if let (Some(a), Some(b)) = (iv.lo_value(), iv.hi_value()) {
        if a > b {
            return Err(Error::Range(format!("interval has lo > hi: {}", iv.render())));
        }
    }
    Ok(())
}

impl From<SetAtom> for SetExpr {
    fn from(a: SetAtom) -> Self {
        SetExpr::Atom(a)
    }
}

impl From<Interval> for SetExpr {
    fn from(iv: Interval) -> Self {
        SetExpr::Atom(SetAtom::Interval(iv))
    }
}

impl SetExpr {
    pub fn empty() -> Self {
        SetExpr::Atom(SetAtom::Empty)
    }

    pub fn reals() -> Self {
        Interval::reals().into()
    }

    pub fn rationals() -> Self {
        SetExpr::Atom(SetAtom::RationalsIn(Interval::reals()))
    }

    pub fn union(self, other: SetExpr) -> Self {
        SetExpr::Union(vec![self, other])
    }

    pub fn intersect(self, other: SetExpr) -> Self {
        SetExpr::Intersection(vec![self, other])
    }

    pub fn minus(self, other: SetExpr) -> Self {
        SetExpr::Difference(Box::new(self), Box::new(other))
    }

    /// Exact membership, evaluated on the expression tree.
    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            SetExpr::Atom(a) => a.contains(x),
            SetExpr::Union(v) => v.iter().any(|e| e.contains(x)),
            SetExpr::Intersection(v) => v.iter().all(|e| e.contains(x)),
            SetExpr::Difference(a, b) => a.contains(x) && !b.contains(x),
        }
    }

    pub fn atoms(&self) -> Vec<&SetAtom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a SetAtom>) {
        match self {
            SetExpr::Atom(a) => out.push(a),
            SetExpr::Union(v) | SetExpr::Intersection(v) => {
                v.iter().for_each(|e| e.collect_atoms(out))
            }
            SetExpr::Difference(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

/// `cantor_meets_interval` on an atom.
pub fn cantor_meets_interval(c: &Cantor, iv: &Interval) -> bool {
    c.meets_interval(iv)
}

/// Exact membership.
pub fn contains(expr: &SetExpr, x: &Rational) -> bool {
    expr.contains(x)
}

impl SetAtom {
    pub fn into_expr(self) -> SetExpr {
        SetExpr::Atom(self)
    }
}
