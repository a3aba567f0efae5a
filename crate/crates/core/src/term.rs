//! Closed-form index terms `t(n) = c + Σ cᵢ·rᵢⁿ + Σ cₖ/nᵏ`.
//!
//! These describe sequence members and interval-family endpoints. Every
//! question asked of them (value, sign for large `n`, tail sums) is answered
//! exactly or with certified rational bounds.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{from_u64, one, pow, Rational};

/// Indices above this are evaluated with a certified enclosure for the
/// geometric part instead of exact powers.
pub const EXACT_INDEX: u64 = 1 << 14;

/// Largest index any search will consider.
pub const SEARCH_CAP: u64 = 1 << 62;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ClosedFormTerm {
    constant: Rational,
    /// `k -> c` for the monomial `c / n^k`.
    inverse: BTreeMap<u32, Rational>,
    /// `r -> c` for the monomial `c * r^n`, `0 < r < 1`.
    geometric: BTreeMap<Rational, Rational>,
}

/// The monomial that governs `t(n) - lim t` for large `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dominant {
    Vanishing,
    Inverse { power: u32, coeff: Rational },
    Geometric { ratio: Rational, coeff: Rational },
}

impl ClosedFormTerm {
    pub fn constant(c: Rational) -> Self {
        Self { constant: c, ..Self::default() }
    }

    pub fn inverse_power(c: Rational, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Range("inverse power exponent must be positive".into()));
        }
        let mut t = Self::default();
        if !c.is_zero() {
            t.inverse.insert(k, c);
        }
        Ok(t)
    }

    pub fn geometric(c: Rational, r: Rational) -> Result<Self> {
        if !(r.is_positive() && r < one()) {
            return Err(Error::Range(format!(
                "geometric ratio {} outside (0,1)",
                crate::rational::render(&r)
            )));
        }
        let mut t = Self::default();
        if !c.is_zero() {
            t.geometric.insert(r, c);
        }
        Ok(t)
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn inverse_terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.inverse.iter().map(|(k, c)| (*k, c))
    }

    pub fn geometric_terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.geometric.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.inverse.is_empty() && self.geometric.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.constant.is_zero()
    }

    pub fn limit(&self) -> &Rational {
        &self.constant
    }

    /// `t - lim t`.
    pub fn deviation(&self) -> Self {
        Self {
            constant: Rational::zero(),
            inverse: self.inverse.clone(),
            geometric: self.geometric.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (k, c) in &other.inverse {
            let e = out.inverse.entry(*k).or_insert_with(Rational::zero);
            *e += c;
        }
        for (r, c) in &other.geometric {
            let e = out.geometric.entry(r.clone()).or_insert_with(Rational::zero);
            *e += c;
        }
        out.inverse.retain(|_, c| !c.is_zero());
        out.geometric.retain(|_, c| !c.is_zero());
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::default();
        }
        Self {
            constant: &self.constant * s,
            inverse: self.inverse.iter().map(|(k, c)| (*k, c * s)).collect(),
            geometric: self.geometric.iter().map(|(r, c)| (r.clone(), c * s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Exact value at index `n >= 1`.
    pub fn eval(&self, n: u64) -> Rational {
        assert!(n >= 1, "terms are indexed from 1");
        let nn = from_u64(n);
        let mut v = self.constant.clone();
        for (k, c) in &self.inverse {
            v += c / pow(&nn, *k as u64);
        }
        for (r, c) in &self.geometric {
            v += c * pow(r, n);
        }
        v
    }

    /// Certified enclosure `[lo, hi]` of `t(n)`; exact (lo == hi) whenever
    /// `n <= EXACT_INDEX`.
    pub fn enclose(&self, n: u64) -> (Rational, Rational) {
        if n <= EXACT_INDEX || self.geometric.is_empty() {
            let v = self.eval(n);
            return (v.clone(), v);
        }
        let nn = from_u64(n);
        let mut v = self.constant.clone();
        for (k, c) in &self.inverse {
            v += c / pow(&nn, *k as u64);
        }
        let mut spread = Rational::zero();
        for (r, c) in &self.geometric {
            spread += c.abs() * pow(r, EXACT_INDEX);
        }
        (&v - &spread, &v + spread)
    }

    /// Exact comparison of `t(n)` against `x`, using the enclosure first.
    pub fn cmp_at(&self, n: u64, x: &Rational) -> Ordering {
        let (lo, hi) = self.enclose(n);
        if &hi < x {
            Ordering::Less
        } else if &lo > x {
            Ordering::Greater
        } else if lo == hi {
            lo.cmp(x)
        } else {
            self.eval(n).cmp(x)
        }
    }

    /// Nonincreasing upper bound on `|t(n) - lim t|`.
    pub fn deviation_bound(&self, n: u64) -> Rational {
        let nn = from_u64(n);
        let mut b = Rational::zero();
        for (k, c) in &self.inverse {
            b += c.abs() / pow(&nn, *k as u64);
        }
        let e = n.min(EXACT_INDEX);
        for (r, c) in &self.geometric {
            b += c.abs() * pow(r, e);
        }
        b
    }

    /// Smallest `n >= from` with `deviation_bound(n) < eps`.
    pub fn index_within(&self, eps: &Rational, from: u64) -> Option<u64> {
        let from = from.max(1);
        first_true(from, |n| &self.deviation_bound(n) < eps)
    }

    pub fn dominant(&self) -> Dominant {
        if let Some((k, c)) = self.inverse.iter().next() {
            Dominant::Inverse { power: *k, coeff: c.clone() }
        } else if let Some((r, c)) = self.geometric.iter().next_back() {
            Dominant::Geometric { ratio: r.clone(), coeff: c.clone() }
        } else {
            Dominant::Vanishing
        }
    }

    /// `(s, N)` such that `sign(t(n)) = s` for every `n >= N`.
    pub fn eventual_sign(&self) -> Option<(i8, u64)> {
        if !self.constant.is_zero() {
            let s = if self.constant.is_positive() { 1 } else { -1 };
            let n = self.index_within(&self.constant.abs(), 1)?;
            return Some((s, n));
        }
        match self.dominant() {
            Dominant::Vanishing => Some((0, 1)),
            Dominant::Inverse { power, coeff } => {
                let s = if coeff.is_positive() { 1 } else { -1 };
                let lead = coeff.abs();
                // Ratios of the remaining monomials to the leading one.
                let mut from = 1u64;
                for r in self.geometric.keys() {
                    // r^n n^k is nonincreasing once r (1 + 1/n)^k <= 1.
                    let m = first_true(1, |n| {
                        let q = (from_u64(n) + one()) / from_u64(n);
                        r * pow(&q, power as u64) <= one()
                    })?;
                    from = from.max(m);
                }
                let n = first_true(from, |n| {
                    let nn = from_u64(n);
                    let mut s = Rational::zero();
                    for (k, c) in self.inverse.iter().skip(1) {
                        s += c.abs() / &lead / pow(&nn, (*k - power) as u64);
                    }
                    for (r, c) in &self.geometric {
                        if n > EXACT_INDEX {
                            s += c.abs() / &lead
                                * pow(r, EXACT_INDEX)
                                * pow(&nn, power as u64);
                        } else {
                            s += c.abs() / &lead * pow(r, n) * pow(&nn, power as u64);
                        }
                    }
                    s < one()
                })?;
                Some((s, n))
            }
            Dominant::Geometric { ratio, coeff } => {
                let s = if coeff.is_positive() { 1 } else { -1 };
                let lead = coeff.abs();
                let n = first_true(1, |n| {
                    let e = n.min(EXACT_INDEX);
                    let mut s = Rational::zero();
                    for (r, c) in self.geometric.iter().rev().skip(1) {
                        s += c.abs() / &lead * pow(&(r / &ratio), e);
                    }
                    s < one()
                })?;
                Some((s, n))
            }
        }
    }

    /// Certified bounds on `Σ_{n >= from} t(n)` for a term with zero limit.
    /// `None` when the series diverges (a `1/n` component).
    pub fn tail_sum(&self, from: u64) -> Option<(Rational, Rational)> {
        if !self.constant.is_zero() {
            return None;
        }
        if self.inverse.contains_key(&1) {
            return None;
        }
        let from = from.max(1);
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        let mut start = from;
        if !self.inverse.is_empty() && start == 1 {
            let v = self.eval(1);
            lo += &v;
            hi += &v;
            start = 2;
        }
        for (r, c) in &self.geometric {
            let denom = one() - r;
            if start <= EXACT_INDEX {
                let v = c * pow(r, start) / &denom;
                lo += &v;
                hi += &v;
            } else {
                let v = c * pow(r, EXACT_INDEX) / &denom;
                if v.is_positive() {
                    hi += v;
                } else {
                    lo += v;
                }
            }
        }
        let ns = from_u64(start);
        let nm = from_u64(start - 1);
        for (k, c) in &self.inverse {
            let km1 = from_u64(*k as u64 - 1);
            let small = c / (&km1 * pow(&ns, *k as u64 - 1));
            let large = c / (&km1 * pow(&nm, *k as u64 - 1));
            if c.is_positive() {
                lo += small;
                hi += large;
            } else {
                lo += large;
                hi += small;
            }
        }
        Some((lo, hi))
    }

    /// True when every monomial is geometric (tail sums are exact).
    pub fn is_purely_geometric(&self) -> bool {
        self.constant.is_zero() && self.inverse.is_empty()
    }
}

/// Smallest `n >= from` with `pred(n)`, for a predicate that stays true once
/// it becomes true. Exponential probe followed by bisection.
pub fn first_true(from: u64, mut pred: impl FnMut(u64) -> bool) -> Option<u64> {
    if pred(from) {
        return Some(from);
    }
    let mut lo = from; // pred(lo) false
    let mut step = 1u64;
    let hi = loop {
        let probe = lo.checked_add(step)?;
        if probe > SEARCH_CAP {
            return None;
        }
        if pred(probe) {
            break probe;
        }
        lo = probe;
        step = step.saturating_mul(2);
    };
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

impl ClosedFormTerm {
    /// Builder for `1/n`-style sequences used across tests and fixtures.
    pub fn reciprocal() -> Self {
        Self::inverse_power(Rational::one(), 1).expect("power 1")
    }
}
