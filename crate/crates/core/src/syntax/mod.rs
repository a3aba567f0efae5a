//! Text form of sets, terms and piecewise functions.
//!
//! ```text
//! set   := set "|" set | set "\" set | set "&" set | "(" set ")" | atom
//! atom  := "empty" | "R" | INTERVAL | "Q(" INTERVAL ")" | "Q(R)"
//!        | "cantor(" RAT "," RAT ")" | "points(" RAT {"," RAT} ")"
//!        | "seq(" TERM ["," INT] ")"
//!        | "family(" TERM "," TERM ["," INT ["," BRACKETS]] ")"
//! INTERVAL := ("[" | "(") BOUND "," BOUND ("]" | ")")    BOUND := RAT | "-inf" | "inf"
//! TERM  := sum of RAT, RAT "/n" ["^" INT], [RAT "*"] "(" RAT ")" "^n"
//! fn    := "piecewise" "{" {POLY "on" set ";"} "else" POLY "}" ["domain" set]
//! ```
//!
//! `&` binds tighter than `\`, which binds tighter than `|`; all are
//! left-associative. `#` starts a comment that runs to the end of the line.

mod parse;

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::funcdsl::PiecewiseFn;
use crate::rational::{render, Show};
use crate::setalg::{Family, SetAtom, SetExpr};
use crate::term::ClosedFormTerm;

pub use parse::{parse_fn, parse_set, parse_term};

impl fmt::Display for ClosedFormTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        if !self.constant_part().is_zero() || self.is_constant() {
            let c = self.constant_part();
            parts.push((c.is_negative(), render(&c.abs())));
        }
        for (k, c) in self.inverse_terms() {
            let pow = if k == 1 { String::new() } else { format!("^{k}") };
            parts.push((c.is_negative(), format!("{}/n{pow}", render(&c.abs()))));
        }
        for (r, c) in self.geometric_terms() {
            let mag = c.abs();
            let body = if mag.is_one() {
                format!("({})^n", render(r))
            } else {
                format!("{}*({})^n", render(&mag), render(r))
            };
            parts.push((c.is_negative(), body));
        }
        for (i, (neg, body)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

fn write_family(f: &mut fmt::Formatter<'_>, fam: &Family) -> fmt::Result {
    write!(f, "family({}, {}", fam.lo, fam.hi)?;
    let default_brackets = fam.lo_included && !fam.hi_included;
    if fam.start != 1 || !default_brackets {
        write!(f, ", {}", fam.start)?;
    }
    if !default_brackets {
        let l = if fam.lo_included { '[' } else { '(' };
        let r = if fam.hi_included { ']' } else { ')' };
        write!(f, ", {l}{r}")?;
    }
    write!(f, ")")
}

impl fmt::Display for SetAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetAtom::Empty => write!(f, "empty"),
            SetAtom::Interval(iv) => write!(f, "{}", iv.render()),
            SetAtom::FinitePoints(ps) => {
                let v: Vec<String> = ps.iter().map(render).collect();
                write!(f, "points({})", v.join(", "))
            }
            SetAtom::RationalsIn(iv) => write!(f, "Q({})", iv.render()),
            SetAtom::CantorAffine(c) => write!(f, "cantor({}, {})", Show(&c.offset), Show(&c.scale)),
            SetAtom::Sequence(s) => {
                write!(f, "seq({}", s.lo)?;
                if s.start != 1 {
                    write!(f, ", {}", s.start)?;
                }
                write!(f, ")")
            }
            SetAtom::IntervalFamily(fam) => write_family(f, fam),
        }
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (children, sep): (Vec<&SetExpr>, &str) = match self {
            SetExpr::Atom(a) => return write!(f, "{a}"),
            SetExpr::Union(v) => (v.iter().collect(), " | "),
            SetExpr::Intersection(v) => (v.iter().collect(), " & "),
            SetExpr::Difference(a, b) => (vec![a, b], " \\ "),
        };
        for (i, c) in children.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            match c {
                SetExpr::Atom(a) => write!(f, "{a}")?,
                _ => write!(f, "({c})")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for PiecewiseFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "piecewise {{ ")?;
        for (g, p) in &self.branches {
            write!(f, "{p} on {g}; ")?;
        }
        write!(f, "else {} }}", self.default)?;
        if self.domain != SetExpr::reals() {
            write!(f, " domain {}", self.domain)?;
        }
        Ok(())
    }
}
