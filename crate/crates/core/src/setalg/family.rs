//! Countable unions `⋃_{n >= start} [lo(n), hi(n))` of closed-form intervals.
//!
//! A family accumulates at the common limit `ℓ` of its endpoint terms.
//! Most questions are answered by splitting it into finitely many explicit
//! members and a tail that is provably sorted and pairwise disjoint.

use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use super::interval::{Endpoint, Interval, IntervalUnion};
use crate::error::{Error, Result};
use crate::rational::{from_u64, max, min, one, pow, Rational};
use crate::term::{first_true, ClosedFormTerm, Dominant, EXACT_INDEX};

/// Largest number of members materialized explicitly in one operation.
pub const MATERIALIZE_CAP: u64 = 1 << 12;

/// Certified enclosure of a measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub lo: Rational,
    pub hi: Rational,
}

impl Bounds {
    pub fn exact(v: Rational) -> Self {
        Self { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, o: &Bounds) -> Bounds {
        Bounds { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Bounds) -> Bounds {
        Bounds { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    /// Clamp into `[0, cap]`.
    pub fn clamp(self, cap: Option<&Rational>) -> Bounds {
        let z = Rational::zero();
        let mut lo = max(&self.lo, &z);
        let mut hi = max(&self.hi, &z);
        if let Some(c) = cap {
            lo = min(&lo, c);
            hi = min(&hi, c);
        }
        Bounds { lo, hi }
    }
}

/// Where the members sit relative to the limit for large indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Every late member lies strictly above the limit.
    Above,
    /// Every late member lies strictly below the limit.
    Below,
    /// Late members touch or contain the limit, or sign is unresolved.
    Straddle,
}

#[derive(Clone, Debug)]
pub struct Layout {
    pub side: Side,
    /// From this index members lie strictly on `side`.
    pub side_from: u64,
    /// From this index members are strictly monotone toward the limit and
    /// separated by positive gaps. Only for `Above`/`Below`.
    pub sorted_from: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct Family {
    pub lo: ClosedFormTerm,
    pub hi: ClosedFormTerm,
    pub lo_included: bool,
    pub hi_included: bool,
    pub start: u64,
    layout: OnceLock<Layout>,
}

impl PartialEq for Family {
    fn eq(&self, o: &Self) -> bool {
        self.key() == o.key()
    }
}

impl Eq for Family {}

impl Hash for Family {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl PartialOrd for Family {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Family {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl Family {
    pub fn new(
        lo: ClosedFormTerm,
        hi: ClosedFormTerm,
        lo_included: bool,
        hi_included: bool,
        start: u64,
    ) -> Result<Self> {
        if start == 0 {
            return Err(Error::Range("family start index must be positive".into()));
        }
        if lo.limit() != hi.limit() {
            return Err(Error::Range(
                "family endpoint terms must share one limit".into(),
            ));
        }
        let width = hi.sub(&lo);
        let (s, n) = width
            .eventual_sign()
            .ok_or_else(|| Error::Range("cannot decide the sign of hi(n) - lo(n)".into()))?;
        if s < 0 {
            return Err(Error::Range("family has lo(n) > hi(n) for large n".into()));
        }
        if n > start && n - start > 1 << 16 {
            return Err(Error::Range("cannot verify lo(n) <= hi(n) on early members".into()));
        }
        for k in start..n.max(start) {
            if width.eval(k).is_negative() {
                return Err(Error::Range(format!("family member {k} has lo > hi")));
            }
        }
        Ok(Self { lo, hi, lo_included, hi_included, start, layout: OnceLock::new() })
    }

    /// Sequences `{t(n)}` are point families `[t(n), t(n)]`.
    pub fn points(term: ClosedFormTerm, start: u64) -> Result<Self> {
        Self::new(term.clone(), term, true, true, start)
    }

    fn key(&self) -> (&ClosedFormTerm, &ClosedFormTerm, bool, bool, u64) {
        (&self.lo, &self.hi, self.lo_included, self.hi_included, self.start)
    }

    pub fn with_start(&self, start: u64) -> Self {
        Self {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            lo_included: self.lo_included,
            hi_included: self.hi_included,
            start,
            layout: OnceLock::new(),
        }
    }

    /// The reflected family `{-x : x ∈ F}`.
    pub fn mirror(&self) -> Self {
        Self {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            lo_included: self.hi_included,
            hi_included: self.lo_included,
            start: self.start,
            layout: OnceLock::new(),
        }
    }

    pub fn limit(&self) -> &Rational {
        self.lo.limit()
    }

    pub fn width(&self) -> ClosedFormTerm {
        self.hi.sub(&self.lo)
    }

    pub fn is_point_family(&self) -> bool {
        self.lo == self.hi
    }

    /// Members have positive length for all large indices.
    pub fn has_positive_widths(&self) -> bool {
        matches!(self.width().eventual_sign(), Some((1, _)))
    }

    pub fn member(&self, n: u64) -> Interval {
        Interval {
            lo: Endpoint::At { value: self.lo.eval(n), included: self.lo_included },
            hi: Endpoint::At { value: self.hi.eval(n), included: self.hi_included },
        }
    }

    /// `(inner, outer)` enclosures of member `n`.
    fn member_bounds(&self, n: u64) -> (Interval, Interval) {
        let (l0, l1) = self.lo.enclose(n);
        let (h0, h1) = self.hi.enclose(n);
        let inner = Interval {
            lo: Endpoint::At { value: l1, included: self.lo_included },
            hi: Endpoint::At { value: h0, included: self.hi_included },
        };
        let outer = Interval {
            lo: Endpoint::At { value: l0, included: self.lo_included },
            hi: Endpoint::At { value: h1, included: self.hi_included },
        };
        (inner, outer)
    }

    /// Nonincreasing bound on how far member `n` can reach from the limit.
    pub fn reach(&self, n: u64) -> Rational {
        max(&self.lo.deviation_bound(n), &self.hi.deviation_bound(n))
    }

    /// First index from which every member lies within `eps` of the limit.
    pub fn index_within(&self, eps: &Rational) -> Option<u64> {
        first_true(self.start, |n| &self.reach(n) < eps)
    }

    pub fn layout(&self) -> &Layout {
        self.layout.get_or_init(|| self.compute_layout())
    }

    fn compute_layout(&self) -> Layout {
        let lo_dev = self.lo.deviation();
        let hi_dev = self.hi.deviation();
        let side = match (lo_dev.eventual_sign(), hi_dev.eventual_sign()) {
            (Some((1, n)), _) => Some((Side::Above, n)),
            (_, Some((-1, n))) => Some((Side::Below, n)),
            _ => None,
        };
        let Some((side, from)) = side else {
            return Layout { side: Side::Straddle, side_from: self.start, sorted_from: None };
        };
        let side_from = from.max(self.start);
        let sorted_from = match side {
            Side::Above => prove_sorted(&hi_dev, &self.width(), side_from),
            Side::Below => prove_sorted(&lo_dev.neg(), &self.width(), side_from),
            Side::Straddle => None,
        };
        Layout { side, side_from, sorted_from }
    }

    /// Distance-to-limit term of the near endpoint for one-sided families.
    pub fn approach(&self) -> Option<ClosedFormTerm> {
        match self.layout().side {
            Side::Above => Some(self.hi.deviation()),
            Side::Below => Some(self.lo.deviation().neg()),
            Side::Straddle => None,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let lim = self.limit().clone();
        if x == &lim {
            return self.contains_limit();
        }
        let layout = self.layout();
        if let (Side::Above, Some(n0)) = (layout.side, layout.sorted_from) {
            if self.scan_contains(x, self.start, n0) {
                return true;
            }
            if x <= &lim {
                return false;
            }
            // lo is decreasing from n0: only the first member with lo <= x can hold x.
            return match first_true(n0, |n| self.lo.cmp_at(n, x).is_le()) {
                Some(k) => self.member_holds(k, x),
                None => false,
            };
        }
        if let (Side::Below, Some(_)) = (layout.side, layout.sorted_from) {
            return self.mirror().contains(&-x);
        }
        let d = (x - &lim).abs();
        match self.index_within(&d) {
            Some(n) => self.scan_contains(x, self.start, n),
            None => false,
        }
    }

    fn member_holds(&self, n: u64, x: &Rational) -> bool {
        use std::cmp::Ordering::*;
        let lo_ok = match self.lo.cmp_at(n, x) {
            Less => true,
            Equal => self.lo_included,
            Greater => false,
        };
        lo_ok
            && match self.hi.cmp_at(n, x) {
                Greater => true,
                Equal => self.hi_included,
                Less => false,
            }
    }

    fn scan_contains(&self, x: &Rational, from: u64, to: u64) -> bool {
        (from..to).any(|n| self.member_holds(n, x))
    }

    fn contains_limit(&self) -> bool {
        let lo_dev = self.lo.deviation();
        let hi_dev = self.hi.deviation();
        let (Some((sl, nl)), Some((sh, nh))) = (lo_dev.eventual_sign(), hi_dev.eventual_sign())
        else {
            return false;
        };
        let late = (sl < 0 || (sl == 0 && self.lo_included))
            && (sh > 0 || (sh == 0 && self.hi_included));
        if late {
            return true;
        }
        let n = nl.max(nh).max(self.start);
        self.scan_contains(self.limit(), self.start, n)
    }

    /// Splits `F ∩ j` into explicit members (clipped to `j`) and the index
    /// from which the remaining tail is kept symbolic (still clipped by `j`).
    pub fn split(&self, j: &Interval) -> TailSplit {
        let lim = self.limit().clone();
        let layout = self.layout();
        let tail_from: Option<u64> = if !j.closure_contains(&lim) {
            let d = j.distance_to(&lim);
            let n = self.index_within(&d);
            return match n {
                Some(n) if n - self.start <= MATERIALIZE_CAP => TailSplit {
                    members: self.clip_range(self.start, n, j),
                    tail_from: None,
                },
                _ => TailSplit { members: vec![], tail_from: Some(self.start) },
            };
        } else if j.interior_contains(&lim) {
            let room = j
                .endpoints()
                .map(|e| (e - &lim).abs())
                .min()
                .unwrap_or_else(Rational::one);
            self.index_within(&room)
        } else {
            // The limit is an endpoint of j.
            let room = j
                .endpoints()
                .map(|e| (e - &lim).abs())
                .filter(|d| !d.is_zero())
                .min()
                .unwrap_or_else(Rational::one);
            let reach = self.index_within(&room);
            let j_above = j.lo_value() == Some(&lim);
            match layout.side {
                Side::Above if !j_above => {
                    let n = layout.side_from;
                    return if n - self.start <= MATERIALIZE_CAP {
                        TailSplit { members: self.clip_range(self.start, n, j), tail_from: None }
                    } else {
                        TailSplit { members: vec![], tail_from: Some(self.start) }
                    };
                }
                Side::Below if j_above => {
                    let n = layout.side_from;
                    return if n - self.start <= MATERIALIZE_CAP {
                        TailSplit { members: self.clip_range(self.start, n, j), tail_from: None }
                    } else {
                        TailSplit { members: vec![], tail_from: Some(self.start) }
                    };
                }
                Side::Above | Side::Below => reach.map(|n| n.max(layout.side_from)),
                Side::Straddle => reach,
            }
        };
        match tail_from {
            Some(n) if n - self.start <= MATERIALIZE_CAP => {
                TailSplit { members: self.clip_range(self.start, n, j), tail_from: Some(n) }
            }
            _ => TailSplit { members: vec![], tail_from: Some(self.start) },
        }
    }

    fn clip_range(&self, from: u64, to: u64, j: &Interval) -> Vec<Interval> {
        // On the sorted run, members approach the limit monotonically, so the
        // ones lying wholly beyond `j` form a prefix that can be skipped.
        let layout = self.layout();
        let mut skip = from..from;
        if let Some(n0) = layout.sorted_from.filter(|&n0| n0 < to) {
            let n0 = n0.max(from);
            let first_reaching = match (layout.side, j.hi_value(), j.lo_value()) {
                (Side::Above, Some(h), _) => first_true(n0, |n| n >= to || self.lo.cmp_at(n, h).is_le()),
                (Side::Below, _, Some(l)) => first_true(n0, |n| n >= to || self.hi.cmp_at(n, l).is_ge()),
                _ => Some(n0),
            };
            skip = n0..first_reaching.unwrap_or(to).min(to);
        }
        (from..skip.start)
            .chain(skip.end..to)
            .map(|n| self.member(n).intersect(j))
            .filter(|iv| !iv.is_empty())
            .collect()
    }

    /// Certified bounds on `|F ∩ j|`.
    pub fn measure_in(&self, j: &Interval, max_rounds: u32) -> Bounds {
        if j.is_empty() {
            return Bounds::zero();
        }
        let layout = self.layout().clone();
        match (layout.side, layout.sorted_from) {
            (Side::Above, Some(n0)) if n0 - self.start <= MATERIALIZE_CAP => {
                let early = IntervalUnion::from_intervals(self.clip_range(self.start, n0, j));
                let mut total = Bounds::exact(early.measure().unwrap_or_else(Rational::zero));
                let rest = IntervalUnion::from_intervals([j.clone()]).subtract(&early);
                for q in rest.parts() {
                    total = total.add(&self.measure_sorted(q, n0));
                }
                total.clamp(j.length().as_ref())
            }
            (Side::Below, Some(_)) => {
                let mj = Interval { lo: neg_end(&j.hi), hi: neg_end(&j.lo) };
                self.mirror().measure_in(&mj, max_rounds)
            }
            _ => self.measure_by_refinement(j, max_rounds),
        }
    }

    /// Sorted tail from `n0` on, intersected with `q`. Requires side Above.
    fn measure_sorted(&self, q: &Interval, n0: u64) -> Bounds {
        let lim = self.limit();
        let qh = q.hi_value().cloned();
        let ql = q.lo_value().cloned();
        if let Some(h) = &qh {
            if h <= lim {
                return Bounds::zero();
            }
        }
        // Members before k1 lie at or above q's top.
        let k1 = match &qh {
            None => Some(n0),
            Some(h) => first_true(n0, |n| self.lo.cmp_at(n, h).is_lt()),
        };
        let Some(k1) = k1 else { return Bounds::zero() };
        let k2 = match &qh {
            None => k1,
            Some(h) => first_true(k1, |n| self.hi.cmp_at(n, h).is_le()).unwrap_or(u64::MAX),
        };
        let (k4, k3) = match &ql {
            Some(l) if l > lim => (
                first_true(k1, |n| self.lo.cmp_at(n, l).is_lt()).unwrap_or(u64::MAX),
                first_true(k1, |n| self.hi.cmp_at(n, l).is_le()).unwrap_or(u64::MAX),
            ),
            _ => (u64::MAX, u64::MAX),
        };
        let mut total = Bounds::zero();
        let mut edge: Vec<u64> = (k1..k2.min(k3)).take(4).collect();
        if k4 != u64::MAX {
            edge.extend((k4.max(k1)..k3).take(4));
        }
        edge.sort_unstable();
        edge.dedup();
        for &n in &edge {
            let (inner, outer) = self.member_bounds(n);
            let a = inner.intersect(q).length().unwrap_or_else(Rational::zero);
            let b = outer.intersect(q).length().unwrap_or_else(Rational::zero);
            total = total.add(&Bounds { lo: a, hi: b });
        }
        let full_from = k2;
        let full_to = k4.min(k3);
        if full_from < full_to {
            let w = self.width();
            let part = match (w.tail_sum(full_from), full_to) {
                (Some(head), u64::MAX) => Bounds { lo: head.0, hi: head.1 },
                (Some(head), to) if to - full_from > 64 => match w.tail_sum(to) {
                    Some(tail) => Bounds { lo: &head.0 - &tail.1, hi: &head.1 - &tail.0 },
                    None => return self.measure_by_refinement(q, 64),
                },
                (_, to) if to != u64::MAX => {
                    let mut s = Bounds::zero();
                    for n in full_from..to {
                        let (l, h) = w.enclose(n);
                        s = s.add(&Bounds { lo: l, hi: h });
                    }
                    s
                }
                _ => return self.measure_by_refinement(q, 64),
            };
            total = total.add(&part);
        }
        total.clamp(q.length().as_ref())
    }

    /// Generic bounds: explicit members plus a tail estimate, refined by
    /// doubling the explicit range for at most `max_rounds` rounds.
    pub fn measure_by_refinement(&self, j: &Interval, max_rounds: u32) -> Bounds {
        let lim = self.limit().clone();
        let cap = j.length();
        let mut m = (self.start + 64).min(self.start + MATERIALIZE_CAP);
        let mut best: Option<Bounds> = None;
        for _ in 0..max_rounds.max(1) {
            let lo = IntervalUnion::from_intervals(self.clip_range(self.start, m, j))
                .measure()
                .unwrap_or_else(Rational::zero);
            let reach = self.reach(m);
            let hull = Interval::closed(&lim - &reach, &lim + &reach).intersect(j);
            let hull_len = hull.length().unwrap_or_else(Rational::zero);
            let tail_hi = match self.width().tail_sum(m) {
                Some((_, h)) => min(&h, &hull_len),
                None => hull_len,
            };
            let b = Bounds { lo: lo.clone(), hi: lo + tail_hi }.clamp(cap.as_ref());
            let done = b.is_exact() || &b.hi - &b.lo < pow(&crate::rational::half(), 40);
            best = Some(b);
            if done || m - self.start >= MATERIALIZE_CAP {
                break;
            }
            m = self.start + ((m - self.start) * 2).min(MATERIALIZE_CAP);
        }
        best.unwrap_or_else(Bounds::zero)
    }
}

fn neg_end(e: &Endpoint) -> Endpoint {
    match e {
        Endpoint::NegInf => Endpoint::PosInf,
        Endpoint::PosInf => Endpoint::NegInf,
        Endpoint::At { value, included } => Endpoint::At { value: -value, included: *included },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailSplit {
    pub members: Vec<Interval>,
    pub tail_from: Option<u64>,
}

/// Proves `u(n) - u(n+1) > w(n)` for all `n >= N` and returns such an `N`.
///
/// `u` is the distance of the near endpoint to the limit and `w` the member
/// width. For `n >= N` each `c/nᵏ` of `u` contributes at least
/// `c·k·(N/(N+1))^(k+1)/n^(k+1)` to `u(n) - u(n+1)` when `c > 0` and at least
/// `c·k/n^(k+1)` when `c < 0`; geometric parts are exact. The resulting lower
/// bound is again a closed-form term whose eventual sign settles the claim.
fn prove_sorted(u: &ClosedFormTerm, w: &ClosedFormTerm, from: u64) -> Option<u64> {
    let mut n = from.max(1);
    for _ in 0..40 {
        let nn = from_u64(n);
        let shrink = &nn / (&nn + one());
        let mut lower = ClosedFormTerm::default();
        for (k, c) in u.inverse_terms() {
            let kk = from_u64(k as u64);
            let coeff = if c.is_positive() {
                c * &kk * pow(&shrink, k as u64 + 1)
            } else {
                c * &kk
            };
            lower = lower.add(&ClosedFormTerm::inverse_power(coeff, k + 1).ok()?);
        }
        for (r, c) in u.geometric_terms() {
            lower = lower.add(&ClosedFormTerm::geometric(c * (one() - r), r.clone()).ok()?);
        }
        let excess = lower.sub(w);
        match excess.eventual_sign()? {
            (1, m) if m <= n => return Some(n),
            (1, m) => n = m,
            _ => n = n.saturating_mul(2),
        }
        if n > EXACT_INDEX * 16 {
            return None;
        }
    }
    None
}

/// Leading behavior of a one-sided family at its limit, for density rules.
pub fn approach_and_width(f: &Family) -> Option<(Dominant, Dominant)> {
    Some((f.approach()?.dominant(), f.width().dominant()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    pub(crate) fn omega() -> Family {
        let hi = ClosedFormTerm::reciprocal();
        let lo = hi.sub(&ClosedFormTerm::geometric(one(), rat(1, 2)).unwrap());
        Family::new(lo, hi, true, false, 1).unwrap()
    }

    #[test]
    fn omega_layout_is_sorted_above() {
        let f = omega();
        let l = f.layout();
        assert_eq!(l.side, Side::Above);
        let n0 = l.sorted_from.expect("Ω tail is provably disjoint");
        // Brute force: lo(n) > hi(n+1) from n0 on.
        for n in n0..n0 + 300 {
            assert!(f.lo.eval(n) > f.hi.eval(n + 1));
        }
    }

    #[test]
    fn omega_membership() {
        let f = omega();
        assert!(f.contains(&rat(3, 4)));
        assert!(!f.contains(&int(1)));
        assert!(f.contains(&rat(1, 2)));
        assert!(!f.contains(&Rational::zero()));
        // Gap between member 10 and 11: (1/11, 1/10 - 1/1024).
        assert!(!f.contains(&(rat(1, 10) - rat(1, 1000))));
        assert!(f.contains(&(rat(1, 10) - rat(1, 2000))));
        assert!(!f.contains(&rat(-1, 2)));
    }

    #[test]
    fn omega_total_measure_is_exact() {
        let b = omega().measure_in(&Interval::reals(), 64);
        assert!(b.is_exact());
        assert_eq!(b.lo, rat(69, 80));
    }

    #[test]
    fn split_matches_window_example() {
        let f = omega();
        let j = Interval::open(Rational::zero(), rat(1, 4));
        let s = f.split(&j);
        assert_eq!(s.tail_from, Some(5));
        let u = IntervalUnion::from_intervals(s.members);
        assert_eq!(u.parts(), &[Interval::closed_open(rat(3, 16), rat(1, 4))]);
    }

    #[test]
    fn sequence_as_point_family() {
        let f = Family::points(ClosedFormTerm::reciprocal(), 1).unwrap();
        assert!(f.contains(&rat(1, 7)));
        assert!(!f.contains(&rat(2, 7)));
        assert!(!f.contains(&Rational::zero()));
        assert_eq!(f.measure_in(&Interval::reals(), 8), Bounds::zero());
    }

    #[test]
    fn rejects_crossed_endpoints() {
        let hi = ClosedFormTerm::reciprocal();
        let lo = hi.add(&ClosedFormTerm::geometric(one(), rat(1, 2)).unwrap());
        assert!(Family::new(lo, hi, true, false, 1).is_err());
    }
}
