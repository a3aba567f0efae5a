//! Measure, cardinality, accumulation points and density.

mod density;
mod germ;

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{half, Rational, Show};
use crate::setalg::{Base, Bounds, Family, Filter, Interval, IntervalUnion, LocalTrace, NormalForm, Piece, SetExpr};

pub use density::{density_at, density_nf, DensityVerdict};
pub use germ::{germ_trace, stable_radius};

/// Refinement rounds for family measure bounds; `LIMITLAB_MAX_REFINE`
/// overrides the default of 64.
pub fn max_refine() -> u32 {
    std::env::var("LIMITLAB_MAX_REFINE")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CardinalityClass {
    Empty,
    Finite(u64),
    CountablyInfinite,
    Uncountable,
}

impl CardinalityClass {
    pub fn is_countable(&self) -> bool {
        !matches!(self, CardinalityClass::Uncountable)
    }
}

impl fmt::Display for CardinalityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardinalityClass::Empty => write!(f, "empty"),
            CardinalityClass::Finite(n) => write!(f, "finite({n})"),
            CardinalityClass::CountablyInfinite => write!(f, "countably infinite"),
            CardinalityClass::Uncountable => write!(f, "uncountable"),
        }
    }
}

/// `value ± bound_gap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureValue {
    pub value: Rational,
    pub certified: bool,
    pub bound_gap: Rational,
}

impl MeasureValue {
    pub fn from_bounds(b: &Bounds) -> Self {
        MeasureValue {
            value: (&b.lo + &b.hi) * half(),
            certified: true,
            bound_gap: (&b.hi - &b.lo) * half(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.bound_gap.is_zero()
    }

    pub fn lower(&self) -> Rational {
        &self.value - &self.bound_gap
    }

    pub fn upper(&self) -> Rational {
        &self.value + &self.bound_gap
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", Show(&self.value))
        } else {
            write!(f, "{} ± {}", Show(&self.value), Show(&self.bound_gap))
        }
    }
}

pub fn measure(expr: &SetExpr) -> Result<MeasureValue> {
    let nf = NormalForm::of(expr)?;
    Ok(MeasureValue::from_bounds(&measure_bounds(&nf, max_refine())?))
}

#[derive(Default)]
struct Zone {
    with: Vec<Interval>,
    without: Vec<Interval>,
}

/// Certified bounds on the Lebesgue measure of a normal form.
///
/// Null pieces are dropped. Each remaining family `F` owns a zone (the clips
/// of pieces mentioning it); inside it the measure is `|F ∩ P| + |Q \ F|`
/// with `P` the region where `F` counts and `Q` the region where its
/// complement counts. Zones of different families must be disjoint.
pub fn measure_bounds(nf: &NormalForm, rounds: u32) -> Result<Bounds> {
    let mut plain = Vec::new();
    let mut zones: Vec<(Family, Zone)> = Vec::new();
    let mut zone = |f: &Family| -> usize {
        match zones.iter().position(|(g, _)| g == f) {
            Some(i) => i,
            None => {
                zones.push((f.clone(), Zone::default()));
                zones.len() - 1
            }
        }
    };
    let mut zone_of = Vec::new();
    for p in &nf.pieces {
        if p.filter == Filter::Rational {
            continue;
        }
        match &p.base {
            Base::Points(_) | Base::Cantor(_) => {}
            Base::Family(f) if f.is_point_family() => {}
            Base::Family(f) => zone_of.push((zone(&earliest_start(f, &p.clip)), true, p.clip.clone())),
            Base::Full => {
                let fams: Vec<&Family> = p
                    .holes
                    .iter()
                    .filter_map(|h| match h {
                        Base::Family(f) if !f.is_point_family() => Some(f),
                        _ => None,
                    })
                    .collect();
                match fams.as_slice() {
                    [] => plain.push(p.clip.clone()),
                    [f] => zone_of.push((zone(&earliest_start(f, &p.clip)), false, p.clip.clone())),
                    _ => {
                        return Err(Error::UnsupportedIntersection(
                            "measure of a region with several family holes".into(),
                        ))
                    }
                }
            }
        }
    }
    for (i, with, clip) in zone_of {
        if with {
            zones[i].1.with.push(clip);
        } else {
            zones[i].1.without.push(clip);
        }
    }
    let plain = IntervalUnion::from_intervals(plain);
    let extents: Vec<IntervalUnion> = zones
        .iter()
        .map(|(_, z)| IntervalUnion::from_intervals(z.with.iter().chain(&z.without).cloned()))
        .collect();
    for i in 0..extents.len() {
        for j in i + 1..extents.len() {
            if !extents[i].intersect(&extents[j]).is_empty() {
                return Err(Error::UnsupportedIntersection(
                    "measure of overlapping families".into(),
                ));
            }
        }
    }
    let mut covered = IntervalUnion::empty();
    for e in &extents {
        covered = covered.union(e);
    }
    let outside = plain.subtract(&covered).measure().ok_or_else(unbounded)?;
    let mut total = Bounds::exact(outside);
    for ((f, z), ext) in zones.iter().zip(&extents) {
        let base = plain.intersect(ext);
        let p = base.union(&IntervalUnion::from_intervals(z.with.iter().cloned()));
        let q = base.union(&IntervalUnion::from_intervals(z.without.iter().cloned()));
        for part in p.parts() {
            total = total.add(&f.measure_in(part, rounds));
        }
        if !q.is_empty() {
            let mut in_f = Bounds::zero();
            for part in q.parts() {
                in_f = in_f.add(&f.measure_in(part, rounds));
            }
            let len = q.measure().ok_or_else(unbounded)?;
            total = total.add(&Bounds::exact(len).sub(&in_f));
        }
    }
    Ok(total.clamp(None))
}

/// The same family started as early as possible without changing its part
/// inside `clip`, so a tail re-indexed by a window trace shares a zone with
/// the family it came from.
fn earliest_start(f: &Family, clip: &Interval) -> Family {
    let mut s = f.start;
    while s > 1 && f.start - s < 1 << 12 {
        let m = f.member(s - 1);
        if m.is_empty() || !m.intersect(clip).is_empty() {
            break;
        }
        s -= 1;
    }
    if s == f.start {
        f.clone()
    } else {
        f.with_start(s)
    }
}

fn unbounded() -> Error {
    Error::Range("unbounded set has infinite measure".into())
}

pub fn trace_measure(trace: &LocalTrace) -> Result<MeasureValue> {
    Ok(MeasureValue::from_bounds(&measure_bounds(&trace.normal_form(), max_refine())?))
}

pub fn cardinality(trace: &LocalTrace) -> CardinalityClass {
    if !trace.pieces.is_empty() {
        return CardinalityClass::Uncountable;
    }
    let mut infinite = false;
    let mut count = 0u64;
    for p in &trace.thin {
        match piece_cardinality(p) {
            CardinalityClass::Uncountable => return CardinalityClass::Uncountable,
            CardinalityClass::CountablyInfinite => infinite = true,
            CardinalityClass::Finite(n) => count += n,
            CardinalityClass::Empty => {}
        }
    }
    if infinite {
        CardinalityClass::CountablyInfinite
    } else if count == 0 {
        CardinalityClass::Empty
    } else {
        CardinalityClass::Finite(count)
    }
}

fn piece_cardinality(p: &Piece) -> CardinalityClass {
    let rational = p.filter == Filter::Rational;
    match &p.base {
        Base::Points(ps) => match ps.len() {
            0 => CardinalityClass::Empty,
            n => CardinalityClass::Finite(n as u64),
        },
        Base::Family(f) if f.is_point_family() => CardinalityClass::CountablyInfinite,
        Base::Family(f) if rational || !f.has_positive_widths() => {
            CardinalityClass::CountablyInfinite
        }
        Base::Cantor(_) if rational => CardinalityClass::CountablyInfinite,
        Base::Family(_) | Base::Cantor(_) => CardinalityClass::Uncountable,
        Base::Full if rational => CardinalityClass::CountablyInfinite,
        Base::Full => {
            let solo = NormalForm { pieces: vec![Piece { filter: Filter::Any, ..p.clone() }] };
            match measure_bounds(&solo, 8) {
                Ok(b) if b.lo.is_positive() => CardinalityClass::Uncountable,
                Ok(_) => CardinalityClass::CountablyInfinite,
                Err(_) => CardinalityClass::Uncountable,
            }
        }
    }
}

/// The derived set of the trace is empty. Only finite sets qualify: every
/// other residual (intervals, rationals, Cantor parts, infinite tails) has a
/// limit point in ℝ.
pub fn has_no_accumulation_point(trace: &LocalTrace) -> bool {
    trace.pieces.is_empty() && trace.thin.iter().all(|p| matches!(p.base, Base::Points(_)))
}
