//! Density `lim |E ∩ (a−δ, a+δ)| / 2δ` from the germ of `E` at `a`.

use std::fmt;

use num_traits::{One, Zero};

use super::germ::stable_radius;
use crate::error::Result;
use crate::rational::{from_u64, half, int, pow, Rational, Show};
use crate::setalg::family::{approach_and_width, Side};
use crate::setalg::trace::halves;
use crate::setalg::{Base, Family, Filter, Interval, NormalForm, SetExpr};
use crate::term::Dominant;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DensityVerdict {
    Zero,
    /// The lower limit of the ratio is at least this.
    Positive(Rational),
    /// The limit exists and equals this.
    Value(Rational),
    Undecided(String),
}

impl DensityVerdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, DensityVerdict::Zero)
    }
}

impl fmt::Display for DensityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityVerdict::Zero => write!(f, "zero"),
            DensityVerdict::Positive(b) => write!(f, "positive (at least {})", Show(b)),
            DensityVerdict::Value(v) => write!(f, "{}", Show(v)),
            DensityVerdict::Undecided(r) => write!(f, "undecided: {r}"),
        }
    }
}

/// Contribution of one half-window to the ratio.
#[derive(Clone, Debug, PartialEq, Eq)]
enum SideDensity {
    Exact(Rational),
    Zero,
    Positive(Rational),
    Undecided(String),
}

enum OnSide {
    Covers,
    Misses,
    Germ,
}

pub fn density_at(expr: &SetExpr, a: &Rational) -> Result<DensityVerdict> {
    density_nf(&NormalForm::of(expr)?, a)
}

pub fn density_nf(nf: &NormalForm, a: &Rational) -> Result<DensityVerdict> {
    let r = stable_radius(nf, a)?;
    let [left, right] = halves(a, &r);
    let l = side(nf, a, &left);
    let rr = side(nf, a, &right);
    Ok(combine(l, rr))
}

fn combine(l: SideDensity, r: SideDensity) -> DensityVerdict {
    use SideDensity::*;
    let nonzero = |v: Rational, exact: bool| match (v.is_zero(), exact) {
        (true, _) => DensityVerdict::Zero,
        (false, true) => DensityVerdict::Value(v),
        (false, false) => DensityVerdict::Positive(v),
    };
    match (l, r) {
        (Undecided(s), _) | (_, Undecided(s)) => DensityVerdict::Undecided(s),
        (Exact(x), Exact(y)) => nonzero(x + y, true),
        (Positive(x), Exact(y)) | (Exact(y), Positive(x)) | (Positive(x), Positive(y)) => {
            nonzero(x + y, false)
        }
        (Positive(x), Zero) | (Zero, Positive(x)) => nonzero(x, false),
        (Zero, Zero) => DensityVerdict::Zero,
        // The family side tends to 0, so the limit is the exact side's value.
        (Zero, Exact(v)) | (Exact(v), Zero) => nonzero(v, true),
    }
}

fn side(nf: &NormalForm, a: &Rational, h: &Interval) -> SideDensity {
    let mid = (h.lo_value().unwrap() + h.hi_value().unwrap()) * half();
    let mut full = false;
    let mut germs: Vec<&Family> = Vec::new();
    let mut cogerms: Vec<&Family> = Vec::new();
    for p in &nf.pieces {
        if !p.clip.contains(&mid) || p.filter == Filter::Rational {
            continue;
        }
        match &p.base {
            Base::Points(_) | Base::Cantor(_) => {}
            Base::Family(f) if f.is_point_family() => {}
            Base::Family(f) => match on_side(f, a, h, &mid) {
                OnSide::Covers => full = true,
                OnSide::Misses => {}
                OnSide::Germ => germs.push(f),
            },
            Base::Full => {
                let mut co = Vec::new();
                let mut swallowed = false;
                for hole in &p.holes {
                    if let Base::Family(g) = hole {
                        if g.is_point_family() {
                            continue;
                        }
                        match on_side(g, a, h, &mid) {
                            OnSide::Covers => swallowed = true,
                            OnSide::Misses => {}
                            OnSide::Germ => co.push(g),
                        }
                    }
                }
                match co.as_slice() {
                    _ if swallowed => {}
                    [] => full = true,
                    [g] => cogerms.push(g),
                    _ => return SideDensity::Undecided("several families removed near the point".into()),
                }
            }
        }
    }
    if full {
        return SideDensity::Exact(half());
    }
    if let Some(g) = cogerms.first() {
        if cogerms.iter().any(|c| c != g) {
            return SideDensity::Undecided("complements of several families near the point".into());
        }
        if germs.contains(g) {
            return SideDensity::Exact(half());
        }
        return match family_density(g) {
            SideDensity::Zero => SideDensity::Exact(half()),
            _ => SideDensity::Undecided("complement of a family with positive density".into()),
        };
    }
    let mut acc = SideDensity::Exact(Rational::zero());
    for f in germs {
        acc = match (acc, family_density(f)) {
            (SideDensity::Undecided(s), _) | (_, SideDensity::Undecided(s)) => SideDensity::Undecided(s),
            (SideDensity::Positive(x), SideDensity::Positive(y)) => {
                SideDensity::Positive(if x > y { x } else { y })
            }
            (SideDensity::Positive(x), _) | (_, SideDensity::Positive(x)) => SideDensity::Positive(x),
            _ => SideDensity::Zero,
        };
    }
    acc
}

fn on_side(f: &Family, a: &Rational, h: &Interval, mid: &Rational) -> OnSide {
    if f.limit() != a {
        return if f.contains(mid) { OnSide::Covers } else { OnSide::Misses };
    }
    let layout = f.layout();
    let early = layout.sorted_from.unwrap_or(layout.side_from);
    let cap = f.start + crate::setalg::family::MATERIALIZE_CAP;
    if (f.start..early.min(cap)).any(|n| h.is_subset_of(&f.member(n))) {
        return OnSide::Covers;
    }
    let right = h.lo_value() == Some(a);
    match (layout.side, right) {
        (Side::Above, true) | (Side::Below, false) | (Side::Straddle, _) => OnSide::Germ,
        _ => OnSide::Misses,
    }
}

/// Density of a one-sided family at its limit, relative to `2δ`.
///
/// With `u(n)` the distance of member `n` to the limit and `w(n)` its width:
/// the window of radius `δ ≈ u(N)` holds the members from `N` on, of total
/// length `Σ_{n≥N} w(n)`. The table compares that tail with `u(N)` using the
/// dominant monomials of `u` and `w`.
fn family_density(f: &Family) -> SideDensity {
    if f.layout().sorted_from.is_none() {
        return SideDensity::Undecided("family members are not provably disjoint near the point".into());
    }
    let Some((u, w)) = approach_and_width(f) else {
        return SideDensity::Undecided("family straddles its limit".into());
    };
    let four = int(4);
    match (u, w) {
        (_, Dominant::Vanishing) => SideDensity::Zero,
        (Dominant::Inverse { .. }, Dominant::Geometric { .. }) => SideDensity::Zero,
        (Dominant::Inverse { power: q, coeff: cu }, Dominant::Inverse { power: p, coeff: cw }) => {
            if p > q + 1 {
                SideDensity::Zero
            } else if p == q + 1 {
                // Σ_{n≥N} cw/n^(q+1) ≈ cw/(q N^q) = (cw/(q cu))·u(N): ratio cw/(2 q cu).
                SideDensity::Positive(cw / (four * from_u64(q as u64) * cu))
            } else {
                SideDensity::Undecided(format!("width decays like 1/n^{p} against distance 1/n^{q}"))
            }
        }
        (Dominant::Geometric { ratio: ru, coeff: cu }, Dominant::Geometric { ratio: rw, coeff: cw }) => {
            if rw < ru {
                SideDensity::Zero
            } else if rw == ru {
                let b = cw * pow(&ru, 2) / (four * cu * (Rational::one() - &ru));
                SideDensity::Positive(b)
            } else {
                SideDensity::Undecided("width decays slower than distance".into())
            }
        }
        _ => SideDensity::Undecided("width and distance decay outside the rule table".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{one, rat};
    use crate::setalg::{Cantor, SetAtom};
    use crate::term::ClosedFormTerm;

    fn family(lo: ClosedFormTerm, hi: ClosedFormTerm) -> SetExpr {
        SetAtom::IntervalFamily(Family::new(lo, hi, true, false, 1).unwrap()).into()
    }

    fn omega() -> SetExpr {
        let hi = ClosedFormTerm::reciprocal();
        family(hi.sub(&ClosedFormTerm::geometric(one(), rat(1, 2)).unwrap()), hi)
    }

    #[test]
    fn omega_has_zero_density() {
        assert_eq!(density_at(&omega(), &int(0)).unwrap(), DensityVerdict::Zero);
        let co = SetExpr::reals().minus(omega());
        assert_eq!(density_at(&co, &int(0)).unwrap(), DensityVerdict::Value(int(1)));
    }

    #[test]
    fn interval_and_cantor() {
        let iv = SetExpr::from(Interval::closed(int(0), int(1)));
        assert_eq!(density_at(&iv, &int(0)).unwrap(), DensityVerdict::Value(half()));
        assert_eq!(density_at(&iv, &rat(1, 2)).unwrap(), DensityVerdict::Value(int(1)));
        let c: SetExpr = SetAtom::CantorAffine(Cantor::standard()).into();
        assert_eq!(density_at(&c, &int(0)).unwrap(), DensityVerdict::Zero);
    }

    #[test]
    fn inverse_square_widths_are_positive() {
        // [1/n - 1/(2n²), 1/n): widths 1/(2n²) against distance 1/n.
        let hi = ClosedFormTerm::reciprocal();
        let lo = hi.sub(&ClosedFormTerm::inverse_power(rat(1, 2), 2).unwrap());
        let f = family(lo, hi);
        match density_at(&f, &int(0)).unwrap() {
            DensityVerdict::Positive(b) => assert_eq!(b, rat(1, 8)),
            other => panic!("unexpected {other:?}"),
        }
        let lo3 = ClosedFormTerm::reciprocal().sub(&ClosedFormTerm::inverse_power(one(), 3).unwrap());
        // Member 1 is [0, 1), which fills the right half near 0.
        let f3 = family(lo3.clone(), ClosedFormTerm::reciprocal());
        assert_eq!(density_at(&f3, &int(0)).unwrap(), DensityVerdict::Value(half()));
        let tail: SetExpr = SetAtom::IntervalFamily(
            Family::new(lo3, ClosedFormTerm::reciprocal(), true, false, 2).unwrap(),
        )
        .into();
        assert_eq!(density_at(&tail, &int(0)).unwrap(), DensityVerdict::Zero);
    }
}
