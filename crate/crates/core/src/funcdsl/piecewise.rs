use num_traits::{One, Zero};

use super::poly::Poly;
use super::roots::{default_width, nonnegative_set};
use crate::error::{Error, Result};
use crate::rational::{Rational, Show};
use crate::setalg::trace::halves;
use crate::setalg::{IntervalUnion, NormalForm, SetExpr};

/// `f(x)` is the value of the first branch whose guard holds `x`, else the
/// default; `f` is defined on `domain` only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseFn {
    pub domain: SetExpr,
    pub branches: Vec<(SetExpr, Poly)>,
    pub default: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Mul,
    Div,
    Scale(Rational),
}

/// `inner ⊆ S ⊆ outer`, with `gap` bounding `|outer \ inner|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichSet {
    pub inner: NormalForm,
    pub outer: NormalForm,
    pub gap: Rational,
}

impl SandwichSet {
    pub fn is_exact(&self) -> bool {
        self.gap.is_zero() && self.inner == self.outer
    }
}

impl PiecewiseFn {
    pub fn polynomial(p: Poly) -> Self {
        Self { domain: SetExpr::reals(), branches: vec![], default: p }
    }

    /// `value` on `set`, 0 elsewhere, over ℝ.
    pub fn indicator(set: SetExpr, value: Rational) -> Self {
        Self {
            domain: SetExpr::reals(),
            branches: vec![(set, Poly::constant(value))],
            default: Poly::zero(),
        }
    }

    pub fn with_domain(mut self, domain: SetExpr) -> Self {
        self.domain = domain;
        self
    }

    /// Every polynomial that can be evaluated, branches first.
    pub fn polys(&self) -> impl Iterator<Item = &Poly> {
        self.branches.iter().map(|(_, p)| p).chain(std::iter::once(&self.default))
    }

    pub fn branch_at(&self, x: &Rational) -> Result<&Poly> {
        if !self.domain.contains(x) {
            return Err(Error::OutsideDomain(Show(x).to_string()));
        }
        Ok(self
            .branches
            .iter()
            .find(|(g, _)| g.contains(x))
            .map(|(_, p)| p)
            .unwrap_or(&self.default))
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        Ok(self.branch_at(x)?.eval(x))
    }

    /// Normal forms of the sets where each branch (then the default) is the
    /// one that fires, restricted to the domain.
    pub fn effective_guards(&self) -> Result<Vec<(NormalForm, &Poly)>> {
        let domain = NormalForm::of(&self.domain)?;
        let mut taken = NormalForm::empty();
        let mut out = Vec::new();
        for (g, p) in &self.branches {
            let g = NormalForm::of(g)?.intersect(&domain)?;
            out.push((g.minus(&taken)?, p));
            taken = taken.union(&g);
        }
        out.push((domain.minus(&taken)?, &self.default));
        Ok(out)
    }

    pub fn arith(&self, other: &PiecewiseFn, op: &Op) -> Result<PiecewiseFn> {
        if let Op::Scale(l) = op {
            return Ok(self.map(|p| p.scale(l)));
        }
        if NormalForm::of(&self.domain)? != NormalForm::of(&other.domain)? {
            return Err(Error::DomainMismatch);
        }
        let other = match op {
            Op::Div => other.reciprocal()?,
            _ => other.clone(),
        };
        let apply = |p: &Poly, q: &Poly| match op {
            Op::Add => p.add(q),
            _ => p.mul(q),
        };
        let mut branches = Vec::new();
        for (g, p) in &self.branches {
            for (h, q) in &other.branches {
                branches.push((g.clone().intersect(h.clone()), apply(p, q)));
            }
            branches.push((g.clone(), apply(p, &other.default)));
        }
        for (h, q) in &other.branches {
            branches.push((h.clone(), apply(&self.default, q)));
        }
        let f = PiecewiseFn {
            domain: self.domain.clone(),
            branches,
            default: apply(&self.default, &other.default),
        };
        f.pruned()
    }

    fn map(&self, g: impl Fn(&Poly) -> Poly) -> PiecewiseFn {
        PiecewiseFn {
            domain: self.domain.clone(),
            branches: self.branches.iter().map(|(s, p)| (s.clone(), g(p))).collect(),
            default: g(&self.default),
        }
    }

    /// `1/f` for a function that is a nonzero constant wherever each branch
    /// actually fires.
    fn reciprocal(&self) -> Result<PiecewiseFn> {
        let eff = self.effective_guards()?;
        let mut out = self.clone();
        let polys: Vec<&mut Poly> = out
            .branches
            .iter_mut()
            .map(|(_, p)| p)
            .chain(std::iter::once(&mut out.default))
            .collect();
        for ((set, _), p) in eff.iter().zip(polys) {
            if set.is_empty() {
                *p = Poly::constant(Rational::one());
                continue;
            }
            match p.constant_value() {
                None => return Err(Error::NonPolynomialQuotient(p.to_string())),
                Some(c) if c.is_zero() => {
                    return Err(Error::DivisionByPossiblyZero(format!(
                        "divisor is 0 on {}",
                        set.to_expr()
                    )))
                }
                Some(c) => *p = Poly::constant(Rational::one() / c),
            }
        }
        Ok(out)
    }

    /// Drops branches that never fire and trailing branches equal to the
    /// default.
    pub fn pruned(mut self) -> Result<PiecewiseFn> {
        let domain = NormalForm::of(&self.domain)?;
        let mut kept = Vec::new();
        for (g, p) in std::mem::take(&mut self.branches) {
            if !NormalForm::of(&g)?.intersect(&domain)?.is_empty() {
                kept.push((g, p));
            }
        }
        while kept.last().is_some_and(|(_, p)| p == &self.default) {
            kept.pop();
        }
        self.branches = kept;
        Ok(self)
    }

    /// Sandwich of `{x ∈ window ∩ domain : |f(x) − L| >= ε}` for the punctured
    /// window of radius `delta` at `a`.
    pub fn exceptional_set(
        &self,
        a: &Rational,
        l: &Rational,
        delta: &Rational,
        eps: &Rational,
    ) -> Result<SandwichSet> {
        Prepared::new(self, a, delta)?.exceptional(l, eps)
    }
}

/// Effective guards already clipped to a punctured window, reusable across
/// many `(L, ε)` queries.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub center: Rational,
    pub radius: Rational,
    pub parts: Vec<(NormalForm, Poly)>,
}

impl Prepared {
    pub fn new(f: &PiecewiseFn, a: &Rational, delta: &Rational) -> Result<Self> {
        let window = IntervalUnion::from_intervals(halves(a, delta));
        let parts = f
            .effective_guards()?
            .into_iter()
            .map(|(g, p)| (g.intersect_intervals(&window), p.clone()))
            .filter(|(g, _)| !g.is_empty())
            .collect();
        Ok(Self { center: a.clone(), radius: delta.clone(), parts })
    }

    /// Points of the window where some branch fires.
    pub fn support(&self) -> NormalForm {
        self.parts.iter().fold(NormalForm::empty(), |acc, (g, _)| acc.union(g))
    }

    pub fn exceptional(&self, l: &Rational, eps: &Rational) -> Result<SandwichSet> {
        let mut inner = NormalForm::empty();
        let mut outer = NormalForm::empty();
        let mut gap = Rational::zero();
        let window = IntervalUnion::from_intervals(halves(&self.center, &self.radius));
        for (g, p) in &self.parts {
            let (si, so) = superlevel(p, l, eps, &self.center);
            inner = inner.union(&g.intersect_intervals(&si));
            outer = outer.union(&g.intersect_intervals(&so));
            gap += so.subtract(&si).intersect(&window).measure().unwrap_or_else(Rational::zero);
        }
        Ok(SandwichSet { inner, outer, gap })
    }
}

/// `{x : |p(x) − L| >= ε}` as inner/outer interval unions, with irrational
/// boundaries kept away from `avoid`.
pub fn superlevel(p: &Poly, l: &Rational, eps: &Rational, avoid: &Rational) -> (IntervalUnion, IntervalUnion) {
    let w = default_width();
    let shifted = p.sub(&Poly::constant(l.clone()));
    let up = shifted.sub(&Poly::constant(eps.clone()));
    let down = shifted.neg().sub(&Poly::constant(eps.clone()));
    let (i1, o1) = nonnegative_set(&up, &w, Some(avoid));
    let (i2, o2) = nonnegative_set(&down, &w, Some(avoid));
    (i1.union(&i2), o1.union(&o2))
}

/// Public form of [`superlevel`] as set expressions.
pub fn isolate_superlevel(p: &Poly, l: &Rational, eps: &Rational) -> SandwichSet {
    let (i, o) = superlevel(p, l, eps, l);
    let gap = o.subtract(&i).measure().unwrap_or_else(Rational::zero);
    let nf = |u: IntervalUnion| NormalForm::empty().union(&NormalForm::of(&union_expr(&u)).expect("intervals normalize"));
    SandwichSet { inner: nf(i), outer: nf(o), gap }
}

fn union_expr(u: &IntervalUnion) -> SetExpr {
    SetExpr::Union(u.parts().iter().cloned().map(SetExpr::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::setalg::{Cantor, Interval, SetAtom};

    fn dirichlet() -> PiecewiseFn {
        PiecewiseFn::indicator(SetExpr::rationals(), int(1))
    }

    fn chi_c() -> PiecewiseFn {
        PiecewiseFn::indicator(SetAtom::CantorAffine(Cantor::standard()).into(), int(1))
    }

    #[test]
    fn evaluation() {
        assert_eq!(dirichlet().eval(&rat(1, 2)).unwrap(), int(1));
        assert_eq!(chi_c().eval(&rat(1, 2)).unwrap(), int(0));
        assert_eq!(chi_c().eval(&rat(1, 4)).unwrap(), int(1));
        let f = PiecewiseFn::polynomial(Poly::x()).with_domain(Interval::closed(int(0), int(1)).into());
        assert!(matches!(f.eval(&int(2)), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn arithmetic() {
        let one_minus = PiecewiseFn {
            domain: SetExpr::reals(),
            branches: vec![(SetExpr::rationals(), Poly::zero())],
            default: Poly::constant(int(1)),
        };
        let s = dirichlet().arith(&one_minus, &Op::Add).unwrap();
        for x in [rat(1, 2), int(0), rat(-7, 3)] {
            assert_eq!(s.eval(&x).unwrap(), int(1));
        }
        let sq = chi_c().arith(&chi_c(), &Op::Mul).unwrap();
        for x in [rat(1, 4), rat(1, 2), int(1)] {
            assert_eq!(sq.eval(&x).unwrap(), chi_c().eval(&x).unwrap());
        }
        let three = dirichlet().arith(&dirichlet(), &Op::Scale(int(3))).unwrap();
        assert_eq!(three.eval(&rat(2, 3)).unwrap(), int(3));
        assert!(matches!(
            chi_c().arith(&chi_c(), &Op::Div),
            Err(Error::DivisionByPossiblyZero(_))
        ));
        let x = PiecewiseFn::polynomial(Poly::x());
        assert!(matches!(chi_c().arith(&x, &Op::Div), Err(Error::NonPolynomialQuotient(_))));
        let two = PiecewiseFn::polynomial(Poly::constant(int(2)));
        assert_eq!(x.arith(&two, &Op::Div).unwrap().eval(&int(3)).unwrap(), rat(3, 2));
    }

    #[test]
    fn exceptional_sets() {
        let e = dirichlet().exceptional_set(&int(0), &int(0), &int(1), &rat(1, 2)).unwrap();
        assert!(e.is_exact());
        let want = NormalForm::of(
            &SetAtom::RationalsIn(Interval::open(int(-1), int(1)))
                .into_expr()
                .minus(SetAtom::FinitePoints(vec![int(0)]).into()),
        )
        .unwrap();
        for k in -12..=12 {
            let q = rat(k, 12);
            assert_eq!(e.inner.contains(&q), want.contains(&q), "{q}");
        }
        let x = PiecewiseFn::polynomial(Poly::x());
        let e = x.exceptional_set(&int(0), &int(0), &int(1), &rat(1, 2)).unwrap();
        let want = NormalForm::of(
            &SetExpr::from(Interval::open_closed(int(-1), rat(-1, 2)))
                .union(Interval::closed_open(rat(1, 2), int(1)).into()),
        )
        .unwrap();
        assert_eq!(e.inner, want);
        assert!(e.is_exact());
    }

    #[test]
    fn isolate_examples() {
        let sq = Poly::x().pow(2);
        let s = isolate_superlevel(&sq, &int(0), &rat(1, 4));
        assert!(s.is_exact());
        assert!(s.inner.contains(&rat(1, 2)) && !s.inner.contains(&rat(1, 4)));
        let s = isolate_superlevel(&Poly::zero(), &int(0), &int(1));
        assert!(s.inner.is_empty() && s.outer.is_empty());
        let s = isolate_superlevel(&sq, &int(2), &int(1));
        assert!(s.gap > Rational::zero() && s.gap <= default_width() * int(4));
    }
}
