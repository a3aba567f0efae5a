use std::cmp::Ordering;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{render, Rational};

/// One side of an interval. Infinite sides are always open.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    NegInf,
    PosInf,
    At { value: Rational, included: bool },
}

impl Endpoint {
    pub fn closed(v: Rational) -> Self {
        Endpoint::At { value: v, included: true }
    }

    pub fn open(v: Rational) -> Self {
        Endpoint::At { value: v, included: false }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            Endpoint::At { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn included(&self) -> bool {
        matches!(self, Endpoint::At { included: true, .. })
    }
}

/// Total order on lower bounds: a smaller key admits more points on the left.
fn cmp_lower(a: &Endpoint, b: &Endpoint) -> Ordering {
    use Endpoint::*;
    match (a, b) {
        (NegInf, NegInf) => Ordering::Equal,
        (NegInf, _) => Ordering::Less,
        (_, NegInf) => Ordering::Greater,
        (PosInf, PosInf) => Ordering::Equal,
        (PosInf, _) => Ordering::Greater,
        (_, PosInf) => Ordering::Less,
        (At { value: x, included: ix }, At { value: y, included: iy }) => {
            x.cmp(y).then_with(|| iy.cmp(ix))
        }
    }
}

/// Total order on upper bounds: a larger key admits more points on the right.
fn cmp_upper(a: &Endpoint, b: &Endpoint) -> Ordering {
    use Endpoint::*;
    match (a, b) {
        (PosInf, PosInf) => Ordering::Equal,
        (PosInf, _) => Ordering::Greater,
        (_, PosInf) => Ordering::Less,
        (NegInf, NegInf) => Ordering::Equal,
        (NegInf, _) => Ordering::Less,
        (_, NegInf) => Ordering::Greater,
        (At { value: x, included: ix }, At { value: y, included: iy }) => {
            x.cmp(y).then_with(|| ix.cmp(iy))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_lower(&self.lo, &other.lo).then_with(|| cmp_upper(&self.hi, &other.hi))
    }
}

impl Interval {
    /// Validating constructor. Empty ranges are allowed here and detected with
    /// [`Interval::is_empty`]; infinite sides must be open.
    pub fn new(lo: Endpoint, hi: Endpoint) -> Result<Self> {
        if matches!(lo, Endpoint::PosInf) || matches!(hi, Endpoint::NegInf) {
            return Err(Error::Range("interval bounds in the wrong order".into()));
        }
        Ok(Self { lo, hi })
    }

    pub fn reals() -> Self {
        Self { lo: Endpoint::NegInf, hi: Endpoint::PosInf }
    }

    pub fn closed(a: Rational, b: Rational) -> Self {
        Self { lo: Endpoint::closed(a), hi: Endpoint::closed(b) }
    }

    pub fn open(a: Rational, b: Rational) -> Self {
        Self { lo: Endpoint::open(a), hi: Endpoint::open(b) }
    }

    pub fn closed_open(a: Rational, b: Rational) -> Self {
        Self { lo: Endpoint::closed(a), hi: Endpoint::open(b) }
    }

    pub fn open_closed(a: Rational, b: Rational) -> Self {
        Self { lo: Endpoint::open(a), hi: Endpoint::closed(b) }
    }

    pub fn point(a: Rational) -> Self {
        Self::closed(a.clone(), a)
    }

    pub fn below(b: Rational, included: bool) -> Self {
        Self { lo: Endpoint::NegInf, hi: Endpoint::At { value: b, included } }
    }

    pub fn above(a: Rational, included: bool) -> Self {
        Self { lo: Endpoint::At { value: a, included }, hi: Endpoint::PosInf }
    }

    pub fn lo_value(&self) -> Option<&Rational> {
        self.lo.value()
    }

    pub fn hi_value(&self) -> Option<&Rational> {
        self.hi.value()
    }

    pub fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Endpoint::At { value: a, included: ia }, Endpoint::At { value: b, included: ib }) => {
                a > b || (a == b && !(*ia && *ib))
            }
            (Endpoint::PosInf, _) | (_, Endpoint::NegInf) => true,
            _ => false,
        }
    }

    /// A single point `[q, q]`.
    pub fn as_point(&self) -> Option<&Rational> {
        match (&self.lo, &self.hi) {
            (Endpoint::At { value: a, included: true }, Endpoint::At { value: b, included: true })
                if a == b =>
            {
                Some(a)
            }
            _ => None,
        }
    }

    /// Nonempty with positive length.
    pub fn is_proper(&self) -> bool {
        !self.is_empty() && self.as_point().is_none()
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.value().is_some() && self.hi.value().is_some()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above_lo = match &self.lo {
            Endpoint::NegInf => true,
            Endpoint::PosInf => false,
            Endpoint::At { value, included } => x > value || (*included && x == value),
        };
        let below_hi = match &self.hi {
            Endpoint::PosInf => true,
            Endpoint::NegInf => false,
            Endpoint::At { value, included } => x < value || (*included && x == value),
        };
        above_lo && below_hi
    }

    /// True when `x` lies in the closure of the interval.
    pub fn closure_contains(&self, x: &Rational) -> bool {
        if self.is_empty() {
            return false;
        }
        let ok_lo = self.lo.value().is_none_or(|v| x >= v);
        let ok_hi = self.hi.value().is_none_or(|v| x <= v);
        ok_lo && ok_hi
    }

    pub fn interior_contains(&self, x: &Rational) -> bool {
        let ok_lo = match &self.lo {
            Endpoint::NegInf => true,
            Endpoint::PosInf => false,
            Endpoint::At { value, .. } => x > value,
        };
        let ok_hi = match &self.hi {
            Endpoint::PosInf => true,
            Endpoint::NegInf => false,
            Endpoint::At { value, .. } => x < value,
        };
        ok_lo && ok_hi
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let lo = if cmp_lower(&self.lo, &other.lo) == Ordering::Greater {
            self.lo.clone()
        } else {
            other.lo.clone()
        };
        let hi = if cmp_upper(&self.hi, &other.hi) == Ordering::Less {
            self.hi.clone()
        } else {
            other.hi.clone()
        };
        Self { lo, hi }
    }

    /// `None` for unbounded intervals.
    pub fn length(&self) -> Option<Rational> {
        if self.is_empty() {
            return Some(Rational::zero());
        }
        Some(self.hi.value()? - self.lo.value()?)
    }

    /// `ℝ \ self` as at most two intervals.
    pub fn complement(&self) -> Vec<Interval> {
        if self.is_empty() {
            return vec![Interval::reals()];
        }
        let mut out = Vec::new();
        if let Endpoint::At { value, included } = &self.lo {
            out.push(Interval::below(value.clone(), !included));
        }
        if let Endpoint::At { value, included } = &self.hi {
            out.push(Interval::above(value.clone(), !included));
        }
        out
    }

    pub fn subtract(&self, other: &Self) -> Vec<Interval> {
        other
            .complement()
            .iter()
            .map(|c| self.intersect(c))
            .filter(|i| !i.is_empty())
            .collect()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.is_empty()
            || (cmp_lower(&other.lo, &self.lo) != Ordering::Greater
                && cmp_upper(&other.hi, &self.hi) != Ordering::Less)
    }

    /// Distance from `x` to the interval's closure (0 when inside).
    pub fn distance_to(&self, x: &Rational) -> Rational {
        if let Some(lo) = self.lo.value() {
            if x < lo {
                return lo - x;
            }
        }
        if let Some(hi) = self.hi.value() {
            if x > hi {
                return x - hi;
            }
        }
        Rational::zero()
    }

    /// Finite endpoint values.
    pub fn endpoints(&self) -> impl Iterator<Item = &Rational> {
        self.lo.value().into_iter().chain(self.hi.value())
    }

    /// Renders in the DSL's interval syntax; `R` for the whole line.
    pub fn render(&self) -> String {
        if self.lo == Endpoint::NegInf && self.hi == Endpoint::PosInf {
            return "R".to_string();
        }
        let (lb, lv) = match &self.lo {
            Endpoint::NegInf => ("(", "-inf".to_string()),
            Endpoint::PosInf => ("(", "inf".to_string()),
            Endpoint::At { value, included } => (if *included { "[" } else { "(" }, render(value)),
        };
        let (hb, hv) = match &self.hi {
            Endpoint::PosInf => (")", "inf".to_string()),
            Endpoint::NegInf => (")", "-inf".to_string()),
            Endpoint::At { value, included } => (if *included { "]" } else { ")" }, render(value)),
        };
        format!("{lb}{lv}, {hv}{hb}")
    }
}

/// Sorted, pairwise disjoint, maximally merged intervals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_intervals(iter: impl IntoIterator<Item = Interval>) -> Self {
        let mut v: Vec<Interval> = iter.into_iter().filter(|i| !i.is_empty()).collect();
        v.sort();
        let mut parts: Vec<Interval> = Vec::with_capacity(v.len());
        for iv in v {
            if let Some(last) = parts.last_mut() {
                if touches(last, &iv) {
                    if cmp_upper(&iv.hi, &last.hi) == Ordering::Greater {
                        last.hi = iv.hi;
                    }
                    continue;
                }
            }
            parts.push(iv);
        }
        Self { parts }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<Interval> {
        self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_intervals(self.parts.iter().chain(other.parts.iter()).cloned())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                let c = a.intersect(b);
                if !c.is_empty() {
                    out.push(c);
                }
            }
        }
        Self::from_intervals(out)
    }

    pub fn intersect_interval(&self, iv: &Interval) -> Self {
        Self::from_intervals(self.parts.iter().map(|p| p.intersect(iv)))
    }

    pub fn complement(&self) -> Self {
        let mut acc = IntervalUnion::from_intervals([Interval::reals()]);
        for p in &self.parts {
            acc = acc.intersect(&IntervalUnion::from_intervals(p.complement()));
        }
        acc
    }

    pub fn subtract(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    /// Lebesgue measure; `None` if unbounded with positive length.
    pub fn measure(&self) -> Option<Rational> {
        let mut total = Rational::zero();
        for p in &self.parts {
            total += p.length()?;
        }
        Some(total)
    }

    pub fn has_proper_part(&self) -> bool {
        self.parts.iter().any(Interval::is_proper)
    }
}

/// Whether `b` (sorted after `a`) overlaps or abuts `a` with no gap point.
fn touches(a: &Interval, b: &Interval) -> bool {
    match (&a.hi, &b.lo) {
        (Endpoint::PosInf, _) | (_, Endpoint::NegInf) => true,
        (Endpoint::At { value: x, included: ix }, Endpoint::At { value: y, included: iy }) => {
            y < x || (x == y && (*ix || *iy))
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn difference_clips() {
        // [0,2] \ (1,3) = [0,1]
        let d = Interval::closed(int(0), int(2)).subtract(&Interval::open(int(1), int(3)));
        assert_eq!(d, vec![Interval::closed(int(0), int(1))]);
    }

    #[test]
    fn merge_rules() {
        let u = IntervalUnion::from_intervals([
            Interval::closed_open(int(1), int(2)),
            Interval::closed_open(int(0), int(1)),
            Interval::open(int(2), int(3)),
        ]);
        // [0,2) and (2,3) stay apart: 2 is missing.
        assert_eq!(u.parts().len(), 2);
        assert_eq!(u.parts()[0], Interval::closed_open(int(0), int(2)));
        assert_eq!(u.measure(), Some(int(3)));
    }

    #[test]
    fn degenerate_and_empty() {
        assert!(Interval::open(int(1), int(1)).is_empty());
        assert!(Interval::closed(int(2), int(1)).is_empty());
        assert_eq!(Interval::point(rat(1, 2)).as_point(), Some(&rat(1, 2)));
        assert!(!Interval::point(int(0)).is_proper());
    }

    #[test]
    fn complement_round_trip() {
        let u = IntervalUnion::from_intervals([
            Interval::closed(int(0), int(1)),
            Interval::open(int(2), int(3)),
        ]);
        assert_eq!(u.complement().complement(), u);
        assert!(u.complement().contains(&int(2)));
        assert!(!u.complement().contains(&int(1)));
        assert_eq!(u.complement().measure(), None);
    }

    #[test]
    fn infinite_sides_rejected_wrong_way() {
        assert!(Interval::new(Endpoint::PosInf, Endpoint::PosInf).is_err());
    }
}
