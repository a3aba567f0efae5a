//! Real roots of rational polynomials: rational roots exactly, the rest
//! isolated by Sturm sequences and enclosed by bisection.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use crate::rational::{half, pow, Rational};
use crate::setalg::{Interval, IntervalUnion};

/// Default enclosure width for irrational roots.
pub fn default_width() -> Rational {
    pow(&half(), 20)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Root {
    Exact(Rational),
    /// One irrational root strictly inside `(lo, hi)`; the polynomial does
    /// not vanish at `lo` or `hi`.
    Enclosed { lo: Rational, hi: Rational },
}

impl Root {
    fn left(&self) -> &Rational {
        match self {
            Root::Exact(r) => r,
            Root::Enclosed { lo, .. } => lo,
        }
    }

    fn right(&self) -> &Rational {
        match self {
            Root::Exact(r) => r,
            Root::Enclosed { hi, .. } => hi,
        }
    }
}

/// Sorted distinct real roots. Enclosures have width at most `width`, avoid
/// `avoid` (when it is not itself a root) and contain no exact root.
pub fn real_roots(p: &Poly, width: &Rational, avoid: Option<&Rational>) -> Vec<Root> {
    if p.is_constant() {
        return vec![];
    }
    let mut s = p.square_free();
    let mut exact = Vec::new();
    let linear = |r: &Rational| Poly::new(vec![-r, Rational::one()]);
    let mut take = |s: &mut Poly, r: Rational| {
        if !s.is_constant() && s.eval(&r).is_zero() {
            *s = s.div_rem(&linear(&r)).0;
            exact.push(r);
        }
    };
    if let Some(a) = avoid {
        take(&mut s, a.clone());
    }
    take(&mut s, Rational::zero());
    for r in rational_candidates(&s) {
        take(&mut s, r);
    }
    let mut roots: Vec<Root> = exact.iter().cloned().map(Root::Exact).collect();
    if !s.is_constant() {
        for (lo, hi) in isolate(&s) {
            roots.push(refine(&s, lo, hi, width, avoid, &exact));
        }
    }
    roots.sort_by(|a, b| a.left().cmp(b.left()));
    roots
}

/// Candidates `±u/v` with `u | c₀`, `v | cₙ` when the integer coefficients are
/// small enough to factor by trial division.
fn rational_candidates(p: &Poly) -> Vec<Rational> {
    if p.is_constant() {
        return vec![];
    }
    let ints = integer_coeffs(p);
    let c0 = ints[0].abs();
    let cn = ints[ints.len() - 1].abs();
    let limit = BigInt::from(1u64 << 40);
    if c0.is_zero() || c0 > limit || cn > limit {
        return vec![];
    }
    let (c0, cn) = (c0.to_u64().unwrap(), cn.to_u64().unwrap());
    let mut out = Vec::new();
    for u in divisors(c0) {
        for v in divisors(cn) {
            let r = Rational::new(BigInt::from(u), BigInt::from(v));
            out.push(r.clone());
            out.push(-r);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn integer_coeffs(p: &Poly) -> Vec<BigInt> {
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs().iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect()
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.neg());
    }
    chain
}

fn variations(chain: &[Poly], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for q in chain {
        let v = q.eval(x);
        let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Disjoint intervals `(lo, hi)` each holding exactly one root of the
/// square-free `p`, which has no rational roots.
fn isolate(p: &Poly) -> Vec<(Rational, Rational)> {
    let chain = sturm_chain(p);
    let lead = p.leading().abs();
    let bound = Rational::one()
        + p.coeffs().iter().map(|c| c.abs() / &lead).max().unwrap_or_else(Rational::zero);
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let n = variations(&chain, &lo) - variations(&chain, &hi);
        match n {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) * half();
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out
}

fn refine(
    p: &Poly,
    mut lo: Rational,
    mut hi: Rational,
    width: &Rational,
    avoid: Option<&Rational>,
    exact: &[Rational],
) -> Root {
    let slo = p.eval(&lo).is_positive();
    let inside = |x: &Rational, lo: &Rational, hi: &Rational| lo <= x && x <= hi;
    while &(&hi - &lo) > width
        || avoid.is_some_and(|a| inside(a, &lo, &hi))
        || exact.iter().any(|r| inside(r, &lo, &hi))
    {
        let mid = (&lo + &hi) * half();
        if p.eval(&mid).is_positive() == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Root::Enclosed { lo, hi }
}

/// Inner and outer approximations of `{x : q(x) >= 0}`.
pub fn nonnegative_set(q: &Poly, width: &Rational, avoid: Option<&Rational>) -> (IntervalUnion, IntervalUnion) {
    if q.is_constant() {
        let all = if q.leading().is_negative() {
            IntervalUnion::empty()
        } else {
            IntervalUnion::from_intervals([Interval::reals()])
        };
        return (all.clone(), all);
    }
    let roots = real_roots(q, width, avoid);
    let one = Rational::one();
    let sign_at = |x: &Rational| q.eval(x).is_positive();
    let mut inner = Vec::new();
    let mut enclosures = Vec::new();
    // Regions between consecutive roots; the sign is constant on each.
    let n = roots.len();
    let mut positive = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let lo = (i > 0).then(|| roots[i - 1].right().clone());
        let hi = (i < n).then(|| roots[i].left().clone());
        let sample = match (&lo, &hi) {
            (Some(a), Some(b)) => (a + b) * half(),
            (Some(a), None) => a + &one,
            (None, Some(b)) => b - &one,
            (None, None) => Rational::zero(),
        };
        let pos = sign_at(&sample);
        positive.push(pos);
        if pos {
            let iv = match (lo, hi) {
                (Some(a), Some(b)) => Interval::closed(a, b),
                (Some(a), None) => Interval::above(a, true),
                (None, Some(b)) => Interval::below(b, true),
                (None, None) => Interval::reals(),
            };
            inner.push(iv);
        }
    }
    for (i, r) in roots.iter().enumerate() {
        match r {
            Root::Exact(x) => inner.push(Interval::point(x.clone())),
            Root::Enclosed { lo, hi } => {
                let iv = Interval::closed(lo.clone(), hi.clone());
                if positive[i] && positive[i + 1] {
                    inner.push(iv);
                } else {
                    enclosures.push(iv);
                }
            }
        }
    }
    let inner = IntervalUnion::from_intervals(inner);
    let outer = inner.union(&IntervalUnion::from_intervals(enclosures));
    (inner, outer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn p(v: &[i64]) -> Poly {
        Poly::new(v.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn rational_roots_are_exact() {
        let q = p(&[-1, 0, 4]); // 4x² - 1
        let r = real_roots(&q, &default_width(), None);
        assert_eq!(r, vec![Root::Exact(rat(-1, 2)), Root::Exact(rat(1, 2))]);
    }

    #[test]
    fn irrational_roots_are_enclosed() {
        let q = p(&[-3, 0, 1]);
        let r = real_roots(&q, &default_width(), None);
        assert_eq!(r.len(), 2);
        for root in r {
            let Root::Enclosed { lo, hi } = root else { panic!("expected enclosure") };
            assert!(&hi - &lo <= default_width());
            assert!(q.eval(&lo).is_positive() != q.eval(&hi).is_positive());
        }
    }

    #[test]
    fn enclosure_avoids_point() {
        let q = p(&[-2, 0, 1]);
        let near = rat(14142136, 10000000);
        let r = real_roots(&q, &rat(1, 10), Some(&near));
        for root in r {
            if let Root::Enclosed { lo, hi } = root {
                assert!(!(lo <= near && near <= hi));
            }
        }
    }

    #[test]
    fn superlevel_sets() {
        let (inner, outer) = nonnegative_set(&p(&[-1, 0, 4]), &default_width(), None);
        assert_eq!(inner, outer);
        assert!(inner.contains(&rat(1, 2)) && !inner.contains(&rat(1, 4)));
        let (inner, outer) = nonnegative_set(&p(&[-3, 0, 1]), &default_width(), None);
        assert!(inner.measure().is_none());
        assert!(!inner.contains(&int(0)) && !outer.contains(&int(0)));
        assert!(outer.contains(&rat(17320508, 10000000)) || inner.contains(&rat(17320508, 10000000)));
        // Double irrational root touching zero from above: x⁴ - 4x² + 4 = (x² - 2)².
        let (inner, _) = nonnegative_set(&p(&[4, 0, -4, 0, 1]), &default_width(), None);
        assert_eq!(inner.parts(), &[Interval::reals()]);
    }
}
