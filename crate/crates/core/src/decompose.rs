//! Splitting `f = g + h` where `g` has the classical limit `L` at `a` and
//! `h` vanishes near `a` off a countable (T5) or null (T6) set.
//!
//! With `A_n` the exceptional set at `ε = 1/n` inside a window of radius
//! `δ_n` on which it is small, `g` equals `L` on `⋃ A_n` and `f` elsewhere.
//! The radii are chosen nonincreasing, so `δ₀ = δ_1`. Only the first few
//! `A_n` are materialised: once `1/n` is below half the smallest positive
//! gap `|p(a) − L|`, every later `A_n` lies inside the part of the window
//! where a branch with a positive gap fires, which is added as one extra
//! piece.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::funcdsl::{PiecewiseFn, Poly, Prepared};
use crate::limits::{check, small_radius, LimitType};
use crate::rational::{from_u64, int, min, one, Rational};
use crate::setalg::trace::{halves, trace_of};
use crate::setalg::{IntervalUnion, NormalForm, SetExpr};
use crate::analyzers::{cardinality, trace_measure};

/// Number of exceptional sets `A_1, …, A_N` built explicitly.
pub const MAX_BANDS: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub g: PiecewiseFn,
    pub h: PiecewiseFn,
    pub delta0: Rational,
    /// `⋃ A_k`, the set where `g` is replaced by `L`.
    pub exceptional_union: SetExpr,
}

fn require_t5_or_t6(t: LimitType) -> Result<()> {
    match t {
        LimitType::T5 | LimitType::T6 => Ok(()),
        other => Err(Error::Invalid(format!("decomposition is defined for T5 and T6, not {other}"))),
    }
}

fn window(a: &Rational, delta: &Rational) -> IntervalUnion {
    IntervalUnion::from_intervals(halves(a, delta))
}

pub fn decompose(f: &PiecewiseFn, a: &Rational, l: &Rational, t: LimitType) -> Result<Decomposition> {
    require_t5_or_t6(t)?;
    let v = check(f, a, l, t)?;
    if !v.is_pass() {
        return Err(Error::PrerequisiteNotMet(format!("{t} limit {} at {} is not certified", l, a)));
    }
    let prepared = Prepared::new(f, a, &one())?;
    let smallest_gap = f.polys().map(|p| (p.eval(a) - l).abs()).filter(Signed::is_positive).min();
    let bands = match &smallest_gap {
        Some(g) => (int(2) / g).ceil().to_integer().to_u64().unwrap_or(MAX_BANDS).clamp(1, MAX_BANDS),
        None => 1,
    };
    let not_small = |what: String| Error::Undecidable(format!("{what} is not certified small for {t}"));
    let mut union = NormalForm::empty();
    let mut delta = one();
    let mut delta0 = None;
    for n in 1..=bands {
        let eps = one() / from_u64(n);
        let e = prepared.exceptional(l, &eps)?.outer;
        let r = small_radius(&e, a, t)?.ok_or_else(|| not_small(format!("exceptional set at ε = 1/{n}")))?;
        delta = min(&delta, &r);
        delta0.get_or_insert_with(|| delta.clone());
        union = union.union(&e.intersect_intervals(&window(a, &delta)));
    }
    // Where branches with a positive gap fire near `a`.
    let positive = prepared
        .parts
        .iter()
        .filter(|(_, p)| !(p.eval(a) - l).is_zero())
        .fold(NormalForm::empty(), |acc, (g, _)| acc.union(g));
    if !positive.is_empty() {
        let r = small_radius(&positive, a, t)?.ok_or_else(|| not_small("the positive-gap region".into()))?;
        delta = min(&delta, &r);
        union = union.union(&positive.intersect_intervals(&window(a, &delta)));
    }
    let u = union.to_expr();
    let lp = Poly::constant(l.clone());
    let mut g_branches = vec![(u.clone(), lp.clone())];
    g_branches.extend(f.branches.iter().cloned());
    let g = PiecewiseFn { domain: f.domain.clone(), branches: g_branches, default: f.default.clone() };
    let mut h_branches: Vec<(SetExpr, Poly)> =
        f.branches.iter().map(|(s, p)| (u.clone().intersect(s.clone()), p.sub(&lp))).collect();
    h_branches.push((u.clone(), f.default.sub(&lp)));
    let h = PiecewiseFn { domain: f.domain.clone(), branches: h_branches, default: Poly::zero() };
    Ok(Decomposition { g, h, delta0: delta0.expect("at least one band"), exceptional_union: u })
}

/// Probe points: `a ± 1/k` for `k <= 64` and a grid of step `1/64` over
/// `[a − 2, a + 2]`.
pub fn probe_points(a: &Rational) -> Vec<Rational> {
    let mut out = Vec::with_capacity(400);
    for k in 1..=64u64 {
        let d = one() / from_u64(k);
        out.push(a + &d);
        out.push(a - d);
    }
    for j in 0..=256u64 {
        out.push(a - int(2) + from_u64(j) / from_u64(64));
    }
    out
}

/// Sum check on probes, classical limit of `g`, and smallness of `{h ≠ 0}`
/// in the window of radius `delta0`.
pub fn verify_decomposition(d: &Decomposition, f: &PiecewiseFn, a: &Rational, l: &Rational, t: LimitType) -> bool {
    if require_t5_or_t6(t).is_err() || !d.delta0.is_positive() {
        return false;
    }
    let sums = probe_points(a).iter().all(|x| match (f.eval(x), d.g.eval(x), d.h.eval(x)) {
        (Ok(fx), Ok(gx), Ok(hx)) => fx == gx + hx,
        (Err(_), Err(_), Err(_)) => true,
        _ => false,
    });
    if !sums {
        return false;
    }
    if !check(&d.g, a, l, LimitType::T1).is_ok_and(|v| v.is_pass()) {
        return false;
    }
    support_is_small(&d.h, a, &d.delta0, t).unwrap_or(false)
}

/// `{h ≠ 0}` is covered by the guards of branches with a nonzero polynomial.
fn support_is_small(h: &PiecewiseFn, a: &Rational, delta0: &Rational, t: LimitType) -> Result<bool> {
    let mut support = NormalForm::empty();
    for (g, p) in h.effective_guards()? {
        if !p.is_zero() {
            support = support.union(&g);
        }
    }
    let near = support.intersect_intervals(&window(a, delta0));
    let trace = trace_of(&near, a, delta0)?;
    Ok(match t {
        LimitType::T5 => cardinality(&trace).is_countable(),
        _ => trace_measure(&trace)?.upper().is_zero(),
    })
}
