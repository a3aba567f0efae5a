//! Seeded generators shared by the integration suites.
#![allow(dead_code)]

use limitlab::funcdsl::PiecewiseFn;
use limitlab::rational::{int, rat, render, Rational};
use limitlab::setalg::{Endpoint, Family, Interval, SetAtom, SetExpr};
use limitlab::syntax::parse_fn;
use limitlab::term::ClosedFormTerm;
use rand::seq::SliceRandom;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The one structured thin atom a generated function may use. Mixing two
/// of them in one function would hit intersections the set algebra rejects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Special {
    None,
    Cantor,
    Seq,
    Family,
}

#[derive(Clone, Debug)]
pub struct Case {
    pub src: String,
    pub f: PiecewiseFn,
    pub a: Rational,
    pub special: Special,
}

fn r(x: &Rational) -> String {
    render(x)
}

/// `a + q` rendered, for offsets `q`.
fn at(a: &Rational, q: Rational) -> String {
    r(&(a + q))
}

fn special_text(rng: &mut ChaCha8Rng, kind: Special, a: &Rational) -> String {
    let ra = r(a);
    match kind {
        Special::None => "Q(R)".into(),
        Special::Cantor => {
            let s = [rat(1, 2), int(1), rat(1, 3)].choose(rng).unwrap().clone();
            let offset = match rng.gen_range(0..4) {
                0 => a.clone(),
                1 => a - &s,
                2 => a - &s * rat(1, 4),
                _ => a + int(1),
            };
            format!("cantor({}, {})", r(&offset), r(&s))
        }
        Special::Seq => match rng.gen_range(0..4) {
            0 => format!("seq({ra} + 1/n)"),
            1 => format!("seq({ra} - 1/2/n)"),
            2 => format!("seq({ra} + (1/2)^n)"),
            _ => format!("seq({} + 1/n^2)", at(a, int(2))),
        },
        Special::Family => match rng.gen_range(0..3) {
            0 => format!("family({ra} + 1/n - (1/2)^n, {ra} + 1/n)"),
            1 => format!("family({ra} + 1/n - 1/4*(1/3)^n, {ra} + 1/n)"),
            _ => format!("family({ra} - 1/n, {ra} - 1/n + 1/2*(1/2)^n)"),
        },
    }
}

fn interval_text(rng: &mut ChaCha8Rng, a: &Rational) -> String {
    let quarters = |rng: &mut ChaCha8Rng| rat(rng.gen_range(-4..=4), 4);
    let (mut lo, mut hi) = (quarters(rng), quarters(rng));
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let l = if rng.gen_bool(0.5) { '[' } else { '(' };
    let h = if rng.gen_bool(0.5) { ']' } else { ')' };
    format!("{l}{}, {}{h}", at(a, lo), at(a, hi))
}

fn guard_text(rng: &mut ChaCha8Rng, s: &str, a: &Rational) -> String {
    match rng.gen_range(0..9) {
        0 => "Q(R)".into(),
        1 => format!("Q({})", interval_text(rng, a)),
        2 => interval_text(rng, a),
        3 => format!("points({}, {})", r(a), at(a, rat(1, 2))),
        4 => "R \\ Q(R)".into(),
        5 => format!("{s} & {}", interval_text(rng, a)),
        6 => format!("{} \\ {s}", interval_text(rng, a)),
        7 => format!("{s} | {}", interval_text(rng, a)),
        _ => s.to_string(),
    }
}

fn poly_text(rng: &mut ChaCha8Rng, a: &Rational) -> String {
    let c = rng.gen_range(-2..=2);
    match rng.gen_range(0..7) {
        0 | 1 => c.to_string(),
        2 => "x".into(),
        3 if a.is_zero() => "x".into(),
        3 if a.is_negative() => format!("x + {}", r(&-a)),
        3 => format!("x - {}", r(a)),
        4 => "x^2".into(),
        5 if c == 0 => "1".into(),
        5 => format!("{c}*x + 1"),
        _ => "2*x^2 - 1".into(),
    }
}

pub const POINTS: [(i64, i64); 5] = [(0, 1), (1, 3), (1, 2), (-1, 1), (1, 1)];

pub fn case(seed: u64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p, q) = POINTS[rng.gen_range(0..POINTS.len())];
    let a = rat(p, q);
    let special = [Special::None, Special::Cantor, Special::Seq, Special::Family][rng.gen_range(0..4)];
    let branches = rng.gen_range(1..=3);
    let s = special_text(&mut rng, special, &a);
    let mut src = String::from("piecewise { ");
    for _ in 0..branches {
        src += &format!("{} on {}; ", poly_text(&mut rng, &a), guard_text(&mut rng, &s, &a));
    }
    src += &format!("else {} }}", poly_text(&mut rng, &a));
    let f = parse_fn(&src).unwrap_or_else(|e| panic!("generated function `{src}` does not parse: {e}"));
    Case { src, f, a, special }
}

pub fn corpus(n: usize) -> Vec<Case> {
    (0..n as u64).map(case).collect()
}

/// Functions whose branches are nonzero constants.
pub fn constant_divisor(seed: u64, a: &Rational, special: Special) -> PiecewiseFn {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xD1D1);
    let s = special_text(&mut rng, special, a);
    let nonzero = |rng: &mut ChaCha8Rng| *[-2, -1, 1, 2, 3].choose(rng).unwrap();
    let mut src = String::from("piecewise { ");
    for _ in 0..rng.gen_range(1..=2) {
        let c = nonzero(&mut rng);
        src += &format!("{c} on {}; ", guard_text(&mut rng, &s, a));
    }
    src += &format!("else {} }}", nonzero(&mut rng));
    parse_fn(&src).unwrap()
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-12..=12), rng.gen_range(1..=6))
}

fn random_term(rng: &mut ChaCha8Rng) -> ClosedFormTerm {
    let mut t = ClosedFormTerm::constant(random_rat(rng));
    for _ in 0..rng.gen_range(0..=2) {
        let c = random_rat(rng);
        let extra = if rng.gen_bool(0.5) {
            ClosedFormTerm::inverse_power(c, rng.gen_range(1..=3))
        } else {
            ClosedFormTerm::geometric(c, rat(rng.gen_range(1..=5), 6))
        };
        t = t.add(&extra.unwrap());
    }
    t
}

fn random_atom(rng: &mut ChaCha8Rng) -> SetAtom {
    loop {
        let atom = match rng.gen_range(0..9) {
            0 => Ok(SetAtom::Empty),
            1 => Ok(SetAtom::Interval(Interval::reals())),
            2 | 3 => {
                let (mut lo, mut hi) = (random_rat(rng), random_rat(rng));
                if lo > hi {
                    std::mem::swap(&mut lo, &mut hi);
                }
                let lo = if rng.gen_ratio(1, 8) {
                    Endpoint::NegInf
                } else {
                    Endpoint::At { value: lo, included: rng.gen_bool(0.5) }
                };
                let hi = if rng.gen_ratio(1, 8) {
                    Endpoint::PosInf
                } else {
                    Endpoint::At { value: hi, included: rng.gen_bool(0.5) }
                };
                let iv = Interval::new(lo, hi).unwrap();
                if rng.gen_bool(0.7) {
                    SetAtom::interval(iv)
                } else {
                    SetAtom::rationals_in(iv)
                }
            }
            4 => Ok(SetAtom::points((0..rng.gen_range(1..=4)).map(|_| random_rat(rng)).collect())),
            5 => SetAtom::cantor(random_rat(rng), rat(rng.gen_range(1..=9), rng.gen_range(1..=4))),
            6 => SetAtom::sequence(random_term(rng), rng.gen_range(1..=4)),
            _ => {
                let lo = random_term(rng);
                let w = if rng.gen_bool(0.5) {
                    ClosedFormTerm::geometric(rat(rng.gen_range(1..=4), 4), rat(rng.gen_range(1..=5), 6))
                } else {
                    ClosedFormTerm::inverse_power(rat(rng.gen_range(1..=4), 4), rng.gen_range(1..=3))
                };
                let hi = lo.add(&w.unwrap());
                Family::new(lo, hi, rng.gen_bool(0.5), rng.gen_bool(0.5), rng.gen_range(1..=3))
                    .map(SetAtom::IntervalFamily)
            }
        };
        if let Ok(a) = atom {
            return a;
        }
    }
}

pub fn random_set(rng: &mut ChaCha8Rng, depth: u32) -> SetExpr {
    if depth == 0 || rng.gen_ratio(1, 3) {
        return SetExpr::Atom(random_atom(rng));
    }
    match rng.gen_range(0..3) {
        0 => SetExpr::Union((0..rng.gen_range(2..=3)).map(|_| random_set(rng, depth - 1)).collect()),
        1 => SetExpr::Intersection((0..rng.gen_range(2..=3)).map(|_| random_set(rng, depth - 1)).collect()),
        _ => SetExpr::Difference(Box::new(random_set(rng, depth - 1)), Box::new(random_set(rng, depth - 1))),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
