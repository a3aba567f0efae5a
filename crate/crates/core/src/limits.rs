//! The six limit notions and their checker.
//!
//! `L` is a `Tk` limit of `f` at `a` when for every `ε > 0` some punctured
//! window around `a` meets the exceptional set `{|f(x) − L| ≥ ε}` in a set
//! that is small in the sense of `Tk`:
//!
//! | type | small means |
//! |------|-------------|
//! | T1 | empty |
//! | T3 | finite |
//! | T4 | without accumulation points |
//! | T5 | countable |
//! | T6 | Lebesgue null |
//! | T2 | density zero at `a` |
//!
//! For a piecewise polynomial the germ of the exceptional set at `a` only
//! changes where `ε` crosses one of the gaps `|p(a) − L|`, so finitely many
//! representative values of `ε` decide the quantifier.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::analyzers::{cardinality, density_nf, has_no_accumulation_point, stable_radius, trace_measure};
use crate::analyzers::{CardinalityClass, DensityVerdict};
use crate::error::{Error, Result};
use crate::funcdsl::{PiecewiseFn, Prepared, SandwichSet};
use crate::rational::{half, int, Rational, Show};
use crate::setalg::trace::trace_of;
use crate::setalg::{NormalForm, SetExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LimitType {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
}

impl LimitType {
    /// Strongest first; each type implies every later one.
    pub const CHAIN: [LimitType; 6] =
        [LimitType::T1, LimitType::T3, LimitType::T4, LimitType::T5, LimitType::T6, LimitType::T2];

    fn what_small_means(self) -> &'static str {
        match self {
            LimitType::T1 => "empty",
            LimitType::T3 => "finite",
            LimitType::T4 => "free of accumulation points",
            LimitType::T5 => "countable",
            LimitType::T6 => "null",
            LimitType::T2 => "of density zero",
        }
    }
}

impl fmt::Display for LimitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for LimitType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T1" => Ok(LimitType::T1),
            "T2" => Ok(LimitType::T2),
            "T3" => Ok(LimitType::T3),
            "T4" => Ok(LimitType::T4),
            "T5" => Ok(LimitType::T5),
            "T6" => Ok(LimitType::T6),
            _ => Err(Error::Invalid(format!("unknown limit type `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Undecidable(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    /// `(ε, δ_ε)` pairs, one per representative `ε`; set on Pass.
    pub witness: Option<Vec<(Rational, Rational)>>,
    /// Set on Fail.
    pub evidence: Option<String>,
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    fn undecidable(reason: String) -> Self {
        Verdict { status: Status::Undecidable(reason), witness: None, evidence: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Existence {
    Yes,
    No,
    Undecidable,
}

impl fmt::Display for Existence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Existence::Yes => "yes",
            Existence::No => "no",
            Existence::Undecidable => "undecidable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeOutcome {
    pub exists: Existence,
    pub value: Option<Rational>,
    /// Further passing candidates; nonempty only when the limit is not unique.
    pub others: Vec<Rational>,
    pub verdicts: Vec<(Rational, Verdict)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitReport {
    pub point: Rational,
    pub per_type: Vec<(LimitType, TypeOutcome)>,
    pub chain_consistent: bool,
}

impl LimitReport {
    pub fn get(&self, t: LimitType) -> &TypeOutcome {
        &self.per_type.iter().find(|(k, _)| *k == t).expect("every type is reported").1
    }
}

/// Whether a germ is small for a type: `Yes(δ)` with the radius below which
/// it holds, `No(reason)`, or `Unknown(reason)`.
enum Small {
    Yes(Rational),
    No(String),
    Unknown(String),
}

/// Errors that mean "cannot decide" rather than "bad input".
fn soften<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e @ (Error::Undecidable(_) | Error::UndecidableDensity(_) | Error::UnsupportedIntersection(_))) => {
            Ok(Err(e.to_string()))
        }
        Err(e) => Err(e),
    }
}

fn judge(nf: &NormalForm, a: &Rational, t: LimitType) -> Result<Small> {
    if t == LimitType::T2 {
        let r = match soften(stable_radius(nf, a))? {
            Ok(r) => r,
            Err(e) => return Ok(Small::Unknown(e)),
        };
        return Ok(match soften(density_nf(nf, a))? {
            Ok(DensityVerdict::Zero) => Small::Yes(r),
            Ok(DensityVerdict::Undecided(s)) => Small::Unknown(s),
            Ok(d) => Small::No(format!("density {d}")),
            Err(e) => Small::Unknown(e),
        });
    }
    let r = match soften(stable_radius(nf, a))? {
        Ok(r) => r,
        Err(e) => return Ok(Small::Unknown(e)),
    };
    let trace = trace_of(nf, a, &r)?;
    let verdict = |ok: bool, what: String| if ok { Small::Yes(r.clone()) } else { Small::No(what) };
    Ok(match t {
        LimitType::T1 => verdict(trace.is_empty(), format!("nonempty ({})", cardinality(&trace))),
        LimitType::T3 => {
            let c = cardinality(&trace);
            verdict(matches!(c, CardinalityClass::Empty | CardinalityClass::Finite(_)), c.to_string())
        }
        LimitType::T4 => verdict(has_no_accumulation_point(&trace), "has accumulation points".into()),
        LimitType::T5 => {
            let c = cardinality(&trace);
            verdict(c.is_countable(), c.to_string())
        }
        LimitType::T6 => match soften(trace_measure(&trace))? {
            Ok(m) if m.upper().is_zero() => Small::Yes(r.clone()),
            Ok(m) if m.lower().is_positive() => Small::No(format!("measure {m}")),
            Ok(m) => Small::Unknown(format!("measure {m} not separated from 0")),
            Err(e) => Small::Unknown(e),
        },
        LimitType::T2 => unreachable!(),
    })
}

/// Radius below which the germ of `nf` is certified small for `t`.
pub(crate) fn small_radius(nf: &NormalForm, a: &Rational, t: LimitType) -> Result<Option<Rational>> {
    Ok(match judge(nf, a, t)? {
        Small::Yes(r) => Some(dyadic_below(&r)),
        _ => None,
    })
}

/// Largest `2^-k <= r` with `k <= 64`, else `r`.
fn dyadic_below(r: &Rational) -> Rational {
    let mut d = Rational::one();
    for _ in 0..=64 {
        if &d <= r {
            return d;
        }
        d *= half();
    }
    r.clone()
}

/// Representative `ε` values: each positive gap, the midpoints between
/// consecutive gaps, half the smallest and one more than the largest.
pub fn epsilon_representatives(f: &PiecewiseFn, a: &Rational, l: &Rational) -> Vec<Rational> {
    let mut gaps: Vec<Rational> = f.polys().map(|p| (p.eval(a) - l).abs()).filter(Signed::is_positive).collect();
    gaps.sort();
    gaps.dedup();
    if gaps.is_empty() {
        return vec![Rational::one()];
    }
    let mut reps = vec![&gaps[0] * half()];
    for w in gaps.windows(2) {
        reps.push(w[0].clone());
        reps.push((&w[0] + &w[1]) * half());
    }
    let last = gaps.last().unwrap();
    reps.push(last.clone());
    reps.push(last + int(1));
    reps
}

/// Checks `L` against one precomputed window.
struct Session<'a> {
    f: &'a PiecewiseFn,
    a: &'a Rational,
    prepared: Prepared,
}

impl<'a> Session<'a> {
    fn new(f: &'a PiecewiseFn, a: &'a Rational) -> Result<Self> {
        Ok(Self { f, a, prepared: Prepared::new(f, a, &Rational::one())? })
    }

    fn sandwiches(&self, l: &Rational) -> Result<Vec<(Rational, SandwichSet)>> {
        epsilon_representatives(self.f, self.a, l)
            .into_iter()
            .map(|eps| Ok((eps.clone(), self.prepared.exceptional(l, &eps)?)))
            .collect()
    }

    fn check_with(&self, sandwiches: &[(Rational, SandwichSet)], t: LimitType) -> Result<Verdict> {
        let mut witness = Vec::new();
        let mut pending: Option<String> = None;
        for (eps, s) in sandwiches {
            match judge(&s.outer, self.a, t)? {
                Small::Yes(r) => {
                    witness.push((eps.clone(), dyadic_below(&r)));
                    continue;
                }
                Small::No(why) | Small::Unknown(why) if s.is_exact() => {
                    if let Small::No(_) = judge(&s.inner, self.a, t)? {
                        return Ok(fail(t, eps, why));
                    }
                    pending.get_or_insert(format!("ε = {}: {why}", Show(eps)));
                }
                Small::No(_) | Small::Unknown(_) => match judge(&s.inner, self.a, t)? {
                    Small::No(why) => return Ok(fail(t, eps, why)),
                    _ => {
                        pending.get_or_insert(format!(
                            "ε = {}: sandwich gap {} does not certify",
                            Show(eps),
                            Show(&s.gap)
                        ));
                    }
                },
            }
        }
        if let Some(reason) = pending {
            return Ok(Verdict::undecidable(reason));
        }
        Ok(Verdict { status: Status::Pass, witness: Some(witness), evidence: None })
    }

    /// Whether the domain itself is small near `a`; if so every `L` is a limit.
    fn domain_small(&self, t: LimitType) -> Result<Small> {
        judge(&self.prepared.support(), self.a, t)
    }
}

fn fail(t: LimitType, eps: &Rational, why: String) -> Verdict {
    Verdict {
        status: Status::Fail,
        witness: None,
        evidence: Some(format!(
            "ε = {}: exceptional set is not {} in any window ({why})",
            Show(eps),
            t.what_small_means()
        )),
    }
}

pub fn check(f: &PiecewiseFn, a: &Rational, l: &Rational, t: LimitType) -> Result<Verdict> {
    let s = Session::new(f, a)?;
    let sw = match soften(s.sandwiches(l))? {
        Ok(sw) => sw,
        Err(e) => return Ok(Verdict::undecidable(e)),
    };
    s.check_with(&sw, t)
}

/// `L` against every type, sharing one window and one set of exceptional sets.
pub fn check_all(f: &PiecewiseFn, a: &Rational, l: &Rational) -> Result<Vec<(LimitType, Verdict)>> {
    let s = Session::new(f, a)?;
    let sw = soften(s.sandwiches(l))?;
    LimitType::CHAIN
        .iter()
        .map(|&t| {
            let v = match &sw {
                Ok(sw) => s.check_with(sw, t)?,
                Err(e) => Verdict::undecidable(e.clone()),
            };
            Ok((t, v))
        })
        .collect()
}

/// `p(a)` for each branch and the default, deduplicated in order.
pub fn candidates(f: &PiecewiseFn, a: &Rational) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for p in f.polys() {
        let v = p.eval(a);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Every type checked against every candidate.
///
/// A value outside the candidate list has a positive gap to every branch, so
/// for small `ε` its exceptional set is the whole domain near `a`. Hence
/// when the domain is not small for a type and every candidate fails, no
/// limit of that type exists.
pub fn classify(f: &PiecewiseFn, a: &Rational) -> Result<LimitReport> {
    let s = Session::new(f, a)?;
    let cands = candidates(f, a);
    let mut per_cand = Vec::new();
    for l in &cands {
        per_cand.push(soften(s.sandwiches(l))?);
    }
    let mut per_type = Vec::new();
    for t in LimitType::CHAIN {
        let mut verdicts = Vec::new();
        for (l, sw) in cands.iter().zip(&per_cand) {
            let v = match sw {
                Ok(sw) => s.check_with(sw, t)?,
                Err(e) => Verdict::undecidable(e.clone()),
            };
            verdicts.push((l.clone(), v));
        }
        let passing: Vec<Rational> = verdicts.iter().filter(|(_, v)| v.is_pass()).map(|(l, _)| l.clone()).collect();
        let exists = if !passing.is_empty() {
            Existence::Yes
        } else if verdicts.iter().all(|(_, v)| v.is_fail()) && matches!(s.domain_small(t)?, Small::No(_)) {
            Existence::No
        } else {
            Existence::Undecidable
        };
        let mut it = passing.into_iter();
        let outcome = TypeOutcome { exists, value: it.next(), others: it.collect(), verdicts };
        per_type.push((t, outcome));
    }
    let chain_consistent = chain_holds(&per_type);
    Ok(LimitReport { point: a.clone(), per_type, chain_consistent })
}

/// T1, T3 and T4 agree, and a pass at one type carries over to every weaker
/// type with the same value.
fn chain_holds(per_type: &[(LimitType, TypeOutcome)]) -> bool {
    let status = |i: usize, j: usize| &per_type[i].1.verdicts[j].1;
    let n = per_type[0].1.verdicts.len();
    (0..n).all(|j| {
        let classical: Vec<bool> = (0..3).map(|i| status(i, j).is_pass()).collect();
        let equal = classical.iter().all(|&p| p == classical[0]);
        let monotone = (0..per_type.len())
            .all(|i| !status(i, j).is_pass() || (i + 1..per_type.len()).all(|k| status(k, j).is_pass()));
        equal && monotone
    })
}

/// Whether limits of type `t` are unique at `a` for functions on `A`:
/// every punctured window trace of `A` is uncountable (T5) or of positive
/// measure (T6).
pub fn uniqueness_precondition(domain: &SetExpr, a: &Rational, t: LimitType) -> Result<bool> {
    let nf = NormalForm::of(domain)?;
    let r = stable_radius(&nf, a)?;
    let trace = trace_of(&nf, a, &r)?;
    match t {
        LimitType::T5 => Ok(cardinality(&trace) == CardinalityClass::Uncountable),
        LimitType::T6 => {
            let m = trace_measure(&trace)?;
            if m.lower().is_positive() {
                Ok(true)
            } else if m.upper().is_zero() {
                Ok(false)
            } else {
                Err(Error::Undecidable(format!("window measure {m} not separated from 0")))
            }
        }
        other => Err(Error::Invalid(format!("uniqueness is characterised for T5 and T6, not {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcdsl::Poly;
    use crate::setalg::{Cantor, Interval, SetAtom};
    use crate::syntax::parse_set;
    use LimitType::*;

    fn dirichlet() -> PiecewiseFn {
        PiecewiseFn::indicator(SetExpr::rationals(), int(1))
    }

    fn chi(set: &str) -> PiecewiseFn {
        PiecewiseFn::indicator(parse_set(set).unwrap(), int(1))
    }

    fn status(f: &PiecewiseFn, l: i64, t: LimitType) -> Status {
        check(f, &int(0), &int(l), t).unwrap().status
    }

    #[test]
    fn dirichlet_checks() {
        let d = dirichlet();
        assert_eq!(status(&d, 0, T1), Status::Fail);
        assert_eq!(status(&d, 0, T5), Status::Pass);
        assert_eq!(status(&d, 1, T5), Status::Fail);
        assert_eq!(status(&d, 0, T2), Status::Pass);
    }

    #[test]
    fn cantor_and_omega() {
        let c = chi("cantor(0, 1)");
        assert_eq!(status(&c, 0, T5), Status::Fail);
        assert_eq!(status(&c, 0, T6), Status::Pass);
        let o = chi("family(1/n - (1/2)^n, 1/n)");
        assert_eq!(status(&o, 0, T6), Status::Fail);
        assert_eq!(status(&o, 0, T2), Status::Pass);
    }

    #[test]
    fn classify_dirichlet() {
        let r = classify(&dirichlet(), &int(0)).unwrap();
        for t in [T1, T3, T4] {
            assert_eq!(r.get(t).exists, Existence::No, "{t}");
        }
        for t in [T5, T6, T2] {
            assert_eq!(r.get(t).exists, Existence::Yes, "{t}");
            assert_eq!(r.get(t).value, Some(int(0)));
        }
        assert!(r.chain_consistent);
    }

    #[test]
    fn classical_limit() {
        let x = PiecewiseFn::polynomial(Poly::x());
        let r = classify(&x, &int(3)).unwrap();
        for t in LimitType::CHAIN {
            assert_eq!(r.get(t).value, Some(int(3)), "{t}");
        }
        let v = check(&x, &int(3), &int(3), T1).unwrap();
        assert!(v.witness.unwrap().iter().all(|(_, d)| d.is_positive()));
    }

    #[test]
    fn check_all_matches_single_checks() {
        let f = dirichlet();
        for l in [int(0), int(1)] {
            for (t, v) in check_all(&f, &int(0), &l).unwrap() {
                assert_eq!(v, check(&f, &int(0), &l, t).unwrap(), "{t} at {l}");
            }
        }
    }

    #[test]
    fn uniqueness() {
        assert!(uniqueness_precondition(&SetExpr::reals(), &int(0), T5).unwrap());
        let q = SetAtom::RationalsIn(Interval::open(int(-1), int(1))).into_expr();
        assert!(!uniqueness_precondition(&q, &int(0), T5).unwrap());
        let c = SetAtom::CantorAffine(Cantor::standard()).into_expr();
        assert!(!uniqueness_precondition(&c, &int(0), T6).unwrap());
    }

    #[test]
    fn countable_domain_admits_every_value() {
        let f = PiecewiseFn::polynomial(Poly::x()).with_domain(parse_set("Q((-1,1))").unwrap());
        assert_eq!(check(&f, &int(0), &int(0), T5).unwrap().status, Status::Pass);
        assert_eq!(check(&f, &int(0), &int(1), T5).unwrap().status, Status::Pass);
    }
}
