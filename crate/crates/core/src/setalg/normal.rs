//! Disjunctive normal form: a finite union of pieces
//! `base ∩ clip ∩ filter \ (hole₁ ∪ … ∪ holeₖ)`.
//!
//! The base is ℝ, a finite set, an affine Cantor set or a family (sequences
//! are point families). The clip is one interval and the filter optionally
//! restricts to rationals or irrationals. Holes are thin bases.

use std::collections::BTreeMap;

use super::{Cantor, Family, Interval, IntervalUnion, SetAtom, SetExpr};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    Full,
    Points(Vec<Rational>),
    Cantor(Cantor),
    Family(Family),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Filter {
    Any,
    Rational,
    Irrational,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Piece {
    pub base: Base,
    pub clip: Interval,
    pub filter: Filter,
    pub holes: Vec<Base>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NormalForm {
    pub pieces: Vec<Piece>,
}

impl Base {
    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Base::Full => true,
            Base::Points(p) => p.binary_search(x).is_ok(),
            Base::Cantor(c) => c.contains(x),
            Base::Family(f) => f.contains(x),
        }
    }

    /// Whether the base meets `iv` (for thin bases, as a set of reals).
    fn meets(&self, iv: &Interval) -> bool {
        if iv.is_empty() {
            return false;
        }
        match self {
            Base::Full => true,
            Base::Points(p) => p.iter().any(|x| iv.contains(x)),
            Base::Cantor(c) => c.meets_interval(iv),
            Base::Family(f) => family_meets(f, iv),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Base::Full => "interval",
            Base::Points(_) => "points",
            Base::Cantor(_) => "cantor",
            Base::Family(f) if f.is_point_family() => "seq",
            Base::Family(_) => "family",
        }
    }

    fn atom(&self) -> SetAtom {
        match self {
            Base::Full => SetAtom::Interval(Interval::reals()),
            Base::Points(p) => SetAtom::FinitePoints(p.clone()),
            Base::Cantor(c) => SetAtom::CantorAffine(c.clone()),
            Base::Family(f) if is_sequence(f) => SetAtom::Sequence(f.clone()),
            Base::Family(f) => SetAtom::IntervalFamily(f.clone()),
        }
    }
}

fn is_sequence(f: &Family) -> bool {
    f.is_point_family() && f.lo_included && f.hi_included
}

fn family_meets(f: &Family, iv: &Interval) -> bool {
    let s = f.split(iv);
    if !s.members.is_empty() {
        return true;
    }
    match s.tail_from {
        None => false,
        // A symbolic tail only survives when the limit is in the closure of
        // iv, in which case late members enter iv unless they avoid it by side.
        Some(n) => {
            let lim = f.limit();
            if iv.interior_contains(lim) {
                return true;
            }
            let g = f.with_start(n);
            (n..n + 64).any(|k| !g.member(k).intersect(iv).is_empty())
        }
    }
}

fn unsupported(a: &Base, b: &Base) -> Error {
    Error::UnsupportedIntersection(format!("{} with {}", a.kind(), b.kind()))
}

impl Piece {
    pub fn full(clip: Interval) -> Self {
        Piece { base: Base::Full, clip, filter: Filter::Any, holes: vec![] }
    }

    pub(crate) fn points(p: Vec<Rational>) -> Self {
        Piece { base: Base::Points(p), clip: Interval::reals(), filter: Filter::Any, holes: vec![] }
    }

    fn of_base(base: Base) -> Self {
        Piece { base, clip: Interval::reals(), filter: Filter::Any, holes: vec![] }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.clip.contains(x)
            && self.filter != Filter::Irrational
            && self.base.contains(x)
            && !self.holes.iter().any(|h| h.contains(x))
    }

    /// An ordinary interval, with nothing removed.
    pub fn is_solid(&self) -> bool {
        self.base == Base::Full && self.filter == Filter::Any && self.holes.is_empty()
    }

    pub(crate) fn with_clip(&self, clip: Interval) -> Self {
        Piece { clip, ..self.clone() }
    }

    fn with_filter(&self, filter: Filter) -> Option<Self> {
        let f = meet_filter(self.filter, filter)?;
        Some(Piece { filter: f, ..self.clone() })
    }

    /// Removes `h` from the piece.
    fn add_hole(&self, h: &Base) -> Result<Option<Piece>> {
        if let Base::Points(ps) = &self.base {
            let keep: Vec<_> = ps.iter().filter(|x| !h.contains(x)).cloned().collect();
            return Ok(Some(Piece::points(keep)));
        }
        if h == &self.base {
            return Ok(None);
        }
        if !h.meets(&self.clip) {
            return Ok(Some(self.clone()));
        }
        match (&self.base, h) {
            (Base::Full, _) | (_, Base::Points(_)) => {}
            (Base::Cantor(c), Base::Cantor(d)) if c.hull().intersect(&d.hull()).is_empty() => {
                return Ok(Some(self.clone()));
            }
            (b, h) => return Err(unsupported(b, h)),
        }
        let mut p = self.clone();
        p.holes.push(h.clone());
        Ok(Some(p))
    }

    fn intersect(&self, other: &Piece) -> Result<Option<Piece>> {
        if let Base::Points(ps) = &self.base {
            let keep = ps.iter().filter(|x| self.contains(x) && other.contains(x)).cloned();
            return Ok(Some(Piece::points(keep.collect())));
        }
        if let Base::Points(_) = &other.base {
            return other.intersect(self);
        }
        let clip = self.clip.intersect(&other.clip);
        if clip.is_empty() {
            return Ok(None);
        }
        let Some(filter) = meet_filter(self.filter, other.filter) else {
            return Ok(None);
        };
        let base = match (&self.base, &other.base) {
            (Base::Full, b) | (b, Base::Full) => b.clone(),
            (a, b) if a == b => a.clone(),
            (Base::Cantor(c), Base::Cantor(d)) if c.hull().intersect(&d.hull()).is_empty() => {
                return Ok(None);
            }
            (a, b) => return Err(unsupported(a, b)),
        };
        let mut p = Some(Piece { base, clip, filter, holes: vec![] });
        for h in self.holes.iter().chain(&other.holes) {
            p = match p {
                Some(q) => q.add_hole(h)?,
                None => None,
            };
        }
        Ok(p)
    }

    /// `self \ q` as a union of pieces.
    fn minus(&self, q: &Piece) -> Result<Vec<Piece>> {
        let mut out = Vec::new();
        for c in q.clip.complement() {
            out.push(self.with_clip(self.clip.intersect(&c)));
        }
        let inside = self.with_clip(self.clip.intersect(&q.clip));
        if inside.clip.is_empty() {
            return Ok(out);
        }
        if q.base != Base::Full {
            out.extend(inside.add_hole(&q.base)?);
        }
        let core = Piece { base: q.base.clone(), clip: q.clip.clone(), filter: Filter::Any, holes: vec![] };
        let flipped = match q.filter {
            Filter::Any => None,
            Filter::Rational => Some(Filter::Irrational),
            Filter::Irrational => Some(Filter::Rational),
        };
        if let Some(f) = flipped {
            if let Some(p) = inside.with_filter(f) {
                out.extend(p.intersect(&core)?);
            }
        }
        for h in &q.holes {
            let hp = Piece { base: h.clone(), clip: q.clip.clone(), filter: q.filter, holes: vec![] };
            if let Some(p) = inside.intersect(&hp)? {
                out.extend(p.intersect(&core)?);
            }
        }
        Ok(out)
    }

    /// Canonical form of a single piece, or `None` when it is empty.
    pub(crate) fn simplify(mut self) -> Option<Piece> {
        if let Base::Points(ps) = &self.base {
            if self.clip != Interval::reals() || self.filter != Filter::Any || !self.holes.is_empty() {
                let keep: Vec<_> = ps.iter().filter(|x| self.contains(x)).cloned().collect();
                self = Piece::points(keep);
            }
            return match &self.base {
                Base::Points(p) if p.is_empty() => None,
                _ => Some(self),
            };
        }
        if self.clip.is_empty() {
            return None;
        }
        if let Some(q) = self.clip.as_point() {
            let q = q.clone();
            return self.contains(&q).then(|| Piece::points(vec![q]));
        }
        if let Base::Cantor(c) = &self.base {
            let hull = c.hull();
            self.clip = if hull.is_subset_of(&self.clip) {
                Interval::reals()
            } else {
                self.clip.intersect(&hull)
            };
            if let Some(q) = self.clip.as_point() {
                let q = q.clone();
                return self.contains(&q).then(|| Piece::points(vec![q]));
            }
        }
        if !self.base.meets(&self.clip) {
            return None;
        }
        if self.filter == Filter::Irrational && matches!(&self.base, Base::Family(f) if f.is_point_family()) {
            return None;
        }
        // Canonical holes: one merged finite set, thin holes that meet the clip.
        let mut pts = Vec::new();
        let mut thin = Vec::new();
        for h in std::mem::take(&mut self.holes) {
            match h {
                Base::Points(p) => pts.extend(p),
                Base::Full => return None,
                h if h.meets(&self.clip) => thin.push(h),
                _ => {}
            }
        }
        let probe = Piece { holes: thin.clone(), ..self.clone() };
        pts.retain(|x| probe.contains(x));
        pts.sort();
        pts.dedup();
        if !pts.is_empty() {
            thin.push(Base::Points(pts));
        }
        thin.sort();
        thin.dedup();
        self.holes = thin;
        Some(self)
    }
}

fn meet_filter(a: Filter, b: Filter) -> Option<Filter> {
    match (a, b) {
        (Filter::Any, x) | (x, Filter::Any) => Some(x),
        (x, y) if x == y => Some(x),
        _ => None,
    }
}

impl NormalForm {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn of(expr: &SetExpr) -> Result<Self> {
        let nf = match expr {
            SetExpr::Atom(a) => Self::of_atom(a),
            SetExpr::Union(v) => {
                let mut pieces = Vec::new();
                for e in v {
                    pieces.extend(Self::of(e)?.pieces);
                }
                NormalForm { pieces }
            }
            SetExpr::Intersection(v) => {
                let mut acc: Option<NormalForm> = None;
                for e in v {
                    let next = Self::of(e)?;
                    acc = Some(match acc {
                        None => next,
                        Some(a) => a.intersect(&next)?,
                    });
                }
                acc.unwrap_or_else(|| Self::of_atom(&SetAtom::Interval(Interval::reals())))
            }
            SetExpr::Difference(a, b) => Self::of(a)?.minus(&Self::of(b)?)?,
        };
        Ok(nf.canonical())
    }

    fn of_atom(a: &SetAtom) -> Self {
        let pieces = match a {
            SetAtom::Empty => vec![],
            SetAtom::Interval(iv) => vec![Piece::full(iv.clone())],
            SetAtom::FinitePoints(p) => vec![Piece::points(p.clone())],
            SetAtom::RationalsIn(iv) => vec![Piece {
                base: Base::Full,
                clip: iv.clone(),
                filter: Filter::Rational,
                holes: vec![],
            }],
            SetAtom::CantorAffine(c) => vec![Piece::of_base(Base::Cantor(c.clone()))],
            // Constant terms repeat one member forever.
            SetAtom::Sequence(f) | SetAtom::IntervalFamily(f)
                if f.lo.is_constant() && f.hi.is_constant() =>
            {
                vec![Piece::full(f.member(f.start))]
            }
            SetAtom::Sequence(f) | SetAtom::IntervalFamily(f) => {
                vec![Piece::of_base(Base::Family(f.clone()))]
            }
        };
        NormalForm { pieces }.canonical()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    pub fn union(&self, other: &NormalForm) -> NormalForm {
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        NormalForm { pieces }.canonical()
    }

    pub fn intersect(&self, other: &NormalForm) -> Result<NormalForm> {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            for q in &other.pieces {
                pieces.extend(p.intersect(q)?);
            }
        }
        Ok(NormalForm { pieces }.canonical())
    }

    pub fn intersect_intervals(&self, u: &IntervalUnion) -> NormalForm {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            for iv in u.parts() {
                match &p.base {
                    Base::Points(ps) => pieces.push(Piece::points(
                        ps.iter().filter(|x| iv.contains(x)).cloned().collect(),
                    )),
                    _ => pieces.push(p.with_clip(p.clip.intersect(iv))),
                }
            }
        }
        NormalForm { pieces }.canonical()
    }

    pub fn minus(&self, other: &NormalForm) -> Result<NormalForm> {
        let mut acc = self.clone();
        for q in &other.pieces {
            let mut pieces = Vec::new();
            for p in &acc.pieces {
                pieces.extend(p.minus(q)?);
            }
            acc = NormalForm { pieces }.canonical();
        }
        Ok(acc)
    }

    /// Solid interval part (ordinary intervals of positive length).
    pub fn solid(&self) -> IntervalUnion {
        IntervalUnion::from_intervals(
            self.pieces.iter().filter(|p| p.is_solid()).map(|p| p.clip.clone()),
        )
    }

    pub(crate) fn canonical(self) -> NormalForm {
        let mut cur = self.step();
        for _ in 0..8 {
            let next = cur.clone().step();
            if next == cur {
                break;
            }
            cur = next;
        }
        cur
    }

    fn step(self) -> NormalForm {
        let simple: Vec<Piece> = self.pieces.into_iter().filter_map(Piece::simplify).collect();
        let mut points = Vec::new();
        let mut solid = Vec::new();
        // Family caches its layout in a OnceLock; ordering ignores the cache.
        #[allow(clippy::mutable_key_type)]
        let mut groups: BTreeMap<(Base, Filter, Vec<Base>), Vec<Interval>> = BTreeMap::new();
        for p in simple {
            match p.base {
                Base::Points(ps) => points.extend(ps),
                _ if p.is_solid() => solid.push(p.clip),
                _ => groups.entry((p.base, p.filter, p.holes)).or_default().push(p.clip),
            }
        }
        let all = IntervalUnion::from_intervals(
            solid.into_iter().chain(points.iter().map(|x| Interval::point(x.clone()))),
        );
        let proper = IntervalUnion::from_intervals(
            all.parts().iter().filter(|iv| iv.is_proper()).cloned(),
        );
        let mut out: Vec<Piece> = proper.parts().iter().cloned().map(Piece::full).collect();
        for ((base, filter, holes), clips) in groups {
            let merged = IntervalUnion::from_intervals(clips).subtract(&proper);
            for clip in merged.into_parts() {
                let p = Piece { base: base.clone(), clip, filter, holes: holes.clone() };
                out.extend(p.simplify());
            }
        }
        let thin: Vec<Piece> = out.iter().filter(|p| !p.is_solid()).cloned().collect();
        let mut pts: Vec<Rational> = points
            .into_iter()
            .filter(|x| !proper.contains(x) && !thin.iter().any(|p| p.contains(x)))
            .collect();
        pts.sort();
        pts.dedup();
        if !pts.is_empty() {
            out.push(Piece::points(pts));
        }
        out.sort();
        out.dedup();
        NormalForm { pieces: out }
    }

    pub fn to_expr(&self) -> SetExpr {
        let mut parts: Vec<SetExpr> = self.pieces.iter().map(piece_expr).collect();
        match parts.len() {
            0 => SetExpr::empty(),
            1 => parts.pop().unwrap(),
            _ => SetExpr::Union(parts),
        }
    }
}

fn piece_expr(p: &Piece) -> SetExpr {
    let mut core = match (&p.base, p.filter) {
        (Base::Points(ps), _) => return SetExpr::Atom(SetAtom::FinitePoints(ps.clone())),
        (Base::Full, Filter::Rational) => SetExpr::Atom(SetAtom::RationalsIn(p.clip.clone())),
        (Base::Full, _) => SetExpr::from(p.clip.clone()),
        (b, _) => {
            let atom = SetExpr::Atom(b.atom());
            if p.clip == Interval::reals() {
                atom
            } else {
                atom.intersect(p.clip.clone().into())
            }
        }
    };
    match (&p.base, p.filter) {
        (Base::Full, Filter::Rational) | (_, Filter::Any) => {}
        (_, Filter::Rational) => core = core.intersect(SetExpr::rationals()),
        (_, Filter::Irrational) => core = core.minus(SetExpr::rationals()),
    }
    let mut holes: Vec<SetExpr> = p.holes.iter().map(|h| SetExpr::Atom(h.atom())).collect();
    match holes.len() {
        0 => core,
        1 => core.minus(holes.pop().unwrap()),
        _ => core.minus(SetExpr::Union(holes)),
    }
}

/// Equivalent expression in normal form.
pub fn normalize(expr: &SetExpr) -> Result<SetExpr> {
    Ok(NormalForm::of(expr)?.to_expr())
}
