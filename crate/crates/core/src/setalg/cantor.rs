//! Affine images `offset + scale·C` of the middle-thirds Cantor set.
//!
//! Everything is decided from exact ternary arithmetic on rationals. A
//! rational has an eventually periodic base-3 expansion, so the digit walks
//! below visit finitely many states and always terminate.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use super::interval::{Endpoint, Interval};
use crate::error::{Error, Result};
use crate::rational::{int, one, rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cantor {
    pub offset: Rational,
    pub scale: Rational,
}

/// What the set looks like immediately to one side of a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SideGerm {
    /// Points of the set arbitrarily close on this side.
    Accumulates,
    /// No points within this distance (`None`: none at all on this side).
    Gap(Option<Rational>),
}

/// `inf (C ∩ (t, ∞))` in unit coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Above {
    Nothing,
    Accumulates,
    Point(Rational),
}

impl Cantor {
    pub fn new(offset: Rational, scale: Rational) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::Range("cantor scale must be positive".into()));
        }
        Ok(Self { offset, scale })
    }

    pub fn standard() -> Self {
        Self { offset: Rational::zero(), scale: Rational::one() }
    }

    fn to_unit(&self, x: &Rational) -> Rational {
        (x - &self.offset) / &self.scale
    }

    fn unit_to_real(&self, u: &Rational) -> Rational {
        &self.offset + &self.scale * u
    }

    /// `[offset, offset + scale]`.
    pub fn hull(&self) -> Interval {
        Interval::closed(self.offset.clone(), &self.offset + &self.scale)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        unit_contains(&self.to_unit(x))
    }

    /// Smallest member strictly above `x`, or accumulation at `x`.
    fn above(&self, x: &Rational) -> Above {
        match unit_above(&self.to_unit(x)) {
            Above::Point(u) => Above::Point(self.unit_to_real(&u)),
            other => other,
        }
    }

    /// Largest member strictly below `x`, or accumulation at `x`.
    fn below(&self, x: &Rational) -> Above {
        // C is symmetric under u -> 1 - u.
        let u = one() - self.to_unit(x);
        match unit_above(&u) {
            Above::Point(v) => Above::Point(self.unit_to_real(&(one() - v))),
            other => other,
        }
    }

    pub fn right_germ(&self, x: &Rational) -> SideGerm {
        match self.above(x) {
            Above::Nothing => SideGerm::Gap(None),
            Above::Accumulates => SideGerm::Accumulates,
            Above::Point(p) => SideGerm::Gap(Some(p - x)),
        }
    }

    pub fn left_germ(&self, x: &Rational) -> SideGerm {
        match self.below(x) {
            Above::Nothing => SideGerm::Gap(None),
            Above::Accumulates => SideGerm::Accumulates,
            Above::Point(p) => SideGerm::Gap(Some(x - p)),
        }
    }

    /// Whether the set meets `iv`, decided through the smallest member at or
    /// above the left end of `iv`.
    pub fn meets_interval(&self, iv: &Interval) -> bool {
        match iv.as_point() {
            Some(p) => self.contains(p),
            None => self.meets_exact(iv),
        }
    }

    /// Exact decision through the successor of the interval's left end.
    pub fn meets_exact(&self, iv: &Interval) -> bool {
        if iv.is_empty() {
            return false;
        }
        let (start, included) = match &iv.lo {
            Endpoint::NegInf => (&self.offset - Rational::one(), false),
            Endpoint::At { value, included } => (value.clone(), *included),
            Endpoint::PosInf => return false,
        };
        if included && self.contains(&start) {
            return true;
        }
        match self.above(&start) {
            Above::Nothing => false,
            Above::Accumulates => true,
            Above::Point(p) => iv.contains(&p),
        }
    }

    /// A few explicit members inside `iv` (brick endpoints), for probing.
    pub fn sample_members(&self, iv: &Interval, limit: usize) -> Vec<Rational> {
        let mut out = Vec::new();
        let third = rat(1, 3);
        let mut stack = vec![(self.hull(), 0u32)];
        while let Some((brick, depth)) = stack.pop() {
            if out.len() >= limit || depth > 12 {
                continue;
            }
            if brick.intersect(iv).is_empty() {
                continue;
            }
            for e in brick.endpoints() {
                if iv.contains(e) && !out.contains(e) {
                    out.push(e.clone());
                }
            }
            let lo = brick.lo_value().unwrap().clone();
            let hi = brick.hi_value().unwrap().clone();
            let w = (&hi - &lo) * &third;
            stack.push((Interval::closed(&hi - &w, hi.clone()), depth + 1));
            stack.push((Interval::closed(lo.clone(), &lo + &w), depth + 1));
        }
        out.sort();
        out
    }
}

/// Membership of `u` in the unit Cantor set: some ternary expansion of `u`
/// uses only the digits 0 and 2.
///
/// Digits are read one at a time so a non-member is rejected at its first
/// forced digit 1, however long the period of `u` is.
fn unit_contains(u: &Rational) -> bool {
    if u.is_negative() || u > &one() {
        return false;
    }
    let one_third = rat(1, 3);
    let two_thirds = rat(2, 3);
    let three = int(3);
    let mut t = u.clone();
    let mut seen = HashSet::new();
    loop {
        // 1/3 = 0.0222… and 2/3 = 0.2, the endpoints of every gap.
        if t == one_third || t == two_thirds || t.is_zero() || t == one() {
            return true;
        }
        if t > one_third && t < two_thirds {
            return false;
        }
        if !seen.insert(t.clone()) {
            return true;
        }
        t = if t < one_third { &t * &three } else { &t * &three - int(2) };
    }
}

fn unit_above(t: &Rational) -> Above {
    if t.is_negative() {
        return Above::Point(Rational::zero());
    }
    if t >= &one() {
        return Above::Nothing;
    }
    let one_third = rat(1, 3);
    let two_thirds = rat(2, 3);
    let three = int(3);
    let mut t = t.clone();
    let mut base = Rational::zero();
    let mut width = Rational::one();
    let mut seen = HashSet::new();
    loop {
        if !seen.insert(t.clone()) {
            return Above::Accumulates;
        }
        if t < one_third {
            t = &t * &three;
            width *= &one_third;
        } else if t < two_thirds {
            return Above::Point(base + width * &two_thirds);
        } else {
            base += &width * &two_thirds;
            width *= &one_third;
            t = &t * &three - int(2);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> Cantor {
        Cantor::standard()
    }

    #[test]
    fn membership_by_digits() {
        assert!(c().contains(&rat(1, 4)));
        assert!(!c().contains(&rat(1, 2)));
        assert!(c().contains(&rat(1, 3)));
        assert!(c().contains(&rat(2, 3)));
        assert!(c().contains(&rat(3, 4)));
        assert!(c().contains(&int(1)));
        assert!(c().contains(&int(0)));
        assert!(!c().contains(&rat(4, 9)));
        assert!(!c().contains(&rat(-1, 9)));
        assert!(c().contains(&rat(1, 10))); // 0.(0022)
    }

    #[test]
    fn meets_examples() {
        assert!(!c().meets_interval(&Interval::open(rat(1, 3), rat(2, 3))));
        assert!(c().meets_interval(&Interval::open(rat(3, 10), rat(4, 10))));
        for k in 1..40 {
            let d = crate::rational::pow(&rat(1, 2), k);
            assert!(c().meets_interval(&Interval::open(Rational::zero(), d)));
        }
        assert!(c().meets_interval(&Interval::point(rat(1, 4))));
        assert!(!c().meets_interval(&Interval::point(rat(1, 2))));
        assert!(!c().meets_interval(&Interval::open(rat(7, 27), rat(8, 27))));
        assert!(c().meets_interval(&Interval::closed(rat(7, 27), rat(8, 27))));
    }

    #[test]
    fn germs() {
        assert_eq!(c().right_germ(&Rational::zero()), SideGerm::Accumulates);
        assert_eq!(c().left_germ(&Rational::zero()), SideGerm::Gap(None));
        assert_eq!(c().right_germ(&rat(1, 3)), SideGerm::Gap(Some(rat(1, 3))));
        assert_eq!(c().left_germ(&rat(1, 3)), SideGerm::Accumulates);
        assert_eq!(c().right_germ(&rat(1, 4)), SideGerm::Accumulates);
        assert_eq!(c().left_germ(&rat(1, 2)), SideGerm::Gap(Some(rat(1, 6))));
    }

    #[test]
    fn affine_image() {
        let k = Cantor::new(int(2), rat(1, 2)).unwrap();
        assert!(k.contains(&(int(2) + rat(1, 8))));
        assert!(!k.contains(&(int(2) + rat(1, 4))));
        assert!(Cantor::new(int(0), int(-1)).is_err());
    }

    #[test]
    fn samples_are_members() {
        let iv = Interval::open(Rational::zero(), rat(1, 10));
        let s = c().sample_members(&iv, 20);
        assert!(!s.is_empty());
        assert!(s.iter().all(|x| c().contains(x) && iv.contains(x)));
    }
}
