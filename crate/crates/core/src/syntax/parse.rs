use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::funcdsl::{PiecewiseFn, Poly};
use crate::rational::{parse as parse_rational, Rational};
use crate::setalg::{Endpoint, Family, Interval, SetAtom, SetExpr};
use crate::term::ClosedFormTerm;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            Tok::Num(chars[start..i].iter().collect())
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if "()[]{},;|&\\+-*/^".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(Error::Syntax { line, column: col, message: format!("unexpected character `{c}`") });
        };
        col += i - start;
        out.push(Token { tok, line: l0, column: c0 });
    }
    out.push(Token { tok: Tok::End, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(s) => format!("number `{s}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Self { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        let t = &self.toks[self.pos];
        Error::Syntax { line: t.line, column: t.column, message: message.into() }
    }

    fn unexpected(&self, wanted: &str) -> Error {
        self.error_here(format!("expected {wanted}, found {}", describe(self.peek())))
    }

    /// Wraps semantic errors from constructors with the position of the atom.
    fn at(&self, start: usize, e: Error) -> Error {
        match e {
            Error::Range(m) | Error::Invalid(m) => {
                let t = &self.toks[start];
                Error::Syntax { line: t.line, column: t.column, message: m }
            }
            other => other,
        }
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn expect_ident(&mut self, s: &str) -> Result<()> {
        if self.is_ident(s) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{s}`")))
        }
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn number(&mut self) -> Result<Rational> {
        match self.peek().clone() {
            Tok::Num(s) => {
                let v = parse_rational(&s).ok_or_else(|| self.error_here(format!("malformed number `{s}`")))?;
                self.bump();
                Ok(v)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    /// `[-] NUM [/ NUM]`; leaves `/ n` for the caller.
    fn rational(&mut self) -> Result<Rational> {
        let neg = self.eat('-');
        let mut v = self.number()?;
        if self.is_sym('/') && matches!(self.peek_at(1), Tok::Num(_)) {
            self.bump();
            let d = self.number()?;
            if d.is_zero() {
                return Err(self.error_here("division by zero"));
            }
            v /= d;
        }
        Ok(if neg { -v } else { v })
    }

    fn integer(&mut self) -> Result<u64> {
        let v = self.number()?;
        if !v.is_integer() {
            return Err(self.error_here("expected an integer"));
        }
        v.to_integer().to_u64().ok_or_else(|| self.error_here("integer out of range"))
    }

    fn bound(&mut self, lower: bool) -> Result<Endpoint> {
        let neg = self.is_sym('-') && self.peek_at(1) == &Tok::Ident("inf".into());
        if neg {
            self.bump();
        }
        if self.is_ident("inf") {
            self.bump();
            return match (neg, lower) {
                (true, true) => Ok(Endpoint::NegInf),
                (false, false) => Ok(Endpoint::PosInf),
                _ => Err(self.error_here("infinite bound on the wrong side")),
            };
        }
        let value = self.rational()?;
        Ok(Endpoint::At { value, included: false })
    }

    fn interval(&mut self) -> Result<Interval> {
        let start = self.pos;
        let lo_incl = match self.bump() {
            Tok::Sym('[') => true,
            Tok::Sym('(') => false,
            _ => {
                self.pos = start;
                return Err(self.unexpected("`[` or `(`"));
            }
        };
        let mut lo = self.bound(true)?;
        self.expect(',')?;
        let mut hi = self.bound(false)?;
        let hi_incl = if self.eat(']') {
            true
        } else if self.eat(')') {
            false
        } else {
            return Err(self.unexpected("`]` or `)`"));
        };
        if let Endpoint::At { included, .. } = &mut lo {
            *included = lo_incl;
        }
        if let Endpoint::At { included, .. } = &mut hi {
            *included = hi_incl;
        }
        Interval::new(lo, hi).map_err(|e| self.at(start, e))
    }

    fn set(&mut self) -> Result<SetExpr> {
        let first = self.difference()?;
        let mut parts = vec![first];
        while self.eat('|') {
            parts.push(self.difference()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { SetExpr::Union(parts) })
    }

    fn difference(&mut self) -> Result<SetExpr> {
        let mut acc = self.intersection()?;
        while self.eat('\\') {
            let rhs = self.intersection()?;
            acc = SetExpr::Difference(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn intersection(&mut self) -> Result<SetExpr> {
        let first = self.primary()?;
        let mut parts = vec![first];
        while self.eat('&') {
            parts.push(self.primary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { SetExpr::Intersection(parts) })
    }

    fn primary(&mut self) -> Result<SetExpr> {
        let start = self.pos;
        match self.peek().clone() {
            Tok::Sym('[') => Ok(self.atom_interval()?.into()),
            Tok::Sym('(') => {
                let interval_ahead = matches!(self.peek_at(1), Tok::Num(_) | Tok::Sym('-'))
                    || self.peek_at(1) == &Tok::Ident("inf".into());
                if interval_ahead {
                    Ok(self.atom_interval()?.into())
                } else {
                    self.bump();
                    let inner = self.set()?;
                    self.expect(')')?;
                    Ok(inner)
                }
            }
            Tok::Ident(name) => {
                self.bump();
                let atom = self.named_atom(&name, start)?;
                Ok(atom.into())
            }
            _ => Err(self.unexpected("a set")),
        }
    }

    fn atom_interval(&mut self) -> Result<SetAtom> {
        let start = self.pos;
        let iv = self.interval()?;
        SetAtom::interval(iv).map_err(|e| self.at(start, e))
    }

    fn named_atom(&mut self, name: &str, start: usize) -> Result<SetAtom> {
        let atom = match name {
            "empty" => return Ok(SetAtom::Empty),
            "R" => return Ok(SetAtom::Interval(Interval::reals())),
            "Q" => {
                self.expect('(')?;
                let iv = if self.is_ident("R") {
                    self.bump();
                    Interval::reals()
                } else {
                    self.interval()?
                };
                self.expect(')')?;
                SetAtom::rationals_in(iv)
            }
            "cantor" => {
                self.expect('(')?;
                let o = self.rational()?;
                self.expect(',')?;
                let s = self.rational()?;
                self.expect(')')?;
                SetAtom::cantor(o, s)
            }
            "points" => {
                self.expect('(')?;
                let mut pts = vec![self.rational()?];
                while self.eat(',') {
                    pts.push(self.rational()?);
                }
                self.expect(')')?;
                Ok(SetAtom::points(pts))
            }
            "seq" => {
                self.expect('(')?;
                let t = self.term()?;
                let n = if self.eat(',') { self.integer()? } else { 1 };
                self.expect(')')?;
                SetAtom::sequence(t, n)
            }
            "family" => {
                self.expect('(')?;
                let lo = self.term()?;
                self.expect(',')?;
                let hi = self.term()?;
                let mut n = 1;
                let (mut li, mut hi_incl) = (true, false);
                if self.eat(',') {
                    n = self.integer()?;
                    if self.eat(',') {
                        li = match self.bump() {
                            Tok::Sym('[') => true,
                            Tok::Sym('(') => false,
                            _ => {
                                self.pos -= 1;
                                return Err(self.unexpected("`[` or `(`"));
                            }
                        };
                        hi_incl = match self.bump() {
                            Tok::Sym(']') => true,
                            Tok::Sym(')') => false,
                            _ => {
                                self.pos -= 1;
                                return Err(self.unexpected("`]` or `)`"));
                            }
                        };
                    }
                }
                self.expect(')')?;
                Family::new(lo, hi, li, hi_incl, n).map(SetAtom::IntervalFamily)
            }
            other => {
                let t = &self.toks[start];
                return Err(Error::UnknownAtom { name: other.to_string(), line: t.line, column: t.column });
            }
        };
        atom.map_err(|e| self.at(start, e))
    }

    fn term(&mut self) -> Result<ClosedFormTerm> {
        let start = self.pos;
        let mut acc = ClosedFormTerm::constant(Rational::zero());
        let mut neg = self.eat('-');
        loop {
            let s = self.summand()?;
            acc = if neg { acc.sub(&s) } else { acc.add(&s) };
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                break;
            }
        }
        let _ = start;
        Ok(acc)
    }

    fn summand(&mut self) -> Result<ClosedFormTerm> {
        let start = self.pos;
        if self.is_sym('(') {
            let r = self.ratio()?;
            return ClosedFormTerm::geometric(Rational::one(), r).map_err(|e| self.at(start, e));
        }
        let c = self.rational()?;
        if self.is_sym('/') && self.peek_at(1) == &Tok::Ident("n".into()) {
            self.bump();
            self.bump();
            let k = if self.eat('^') { self.integer()? } else { 1 };
            let k = u32::try_from(k).map_err(|_| self.error_here("exponent out of range"))?;
            return ClosedFormTerm::inverse_power(c, k).map_err(|e| self.at(start, e));
        }
        if self.eat('*') {
            let r = self.ratio()?;
            return ClosedFormTerm::geometric(c, r).map_err(|e| self.at(start, e));
        }
        Ok(ClosedFormTerm::constant(c))
    }

    /// `"(" RAT ")" "^" "n"`
    fn ratio(&mut self) -> Result<Rational> {
        self.expect('(')?;
        let r = self.rational()?;
        self.expect(')')?;
        self.expect('^')?;
        self.expect_ident("n")?;
        Ok(r)
    }

    fn poly(&mut self) -> Result<Poly> {
        let neg = self.eat('-');
        let mut acc = self.poly_product()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.poly_product()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.poly_product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn poly_product(&mut self) -> Result<Poly> {
        let mut acc = self.poly_power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.poly_power()?);
            } else if self.is_sym('/') {
                self.bump();
                let at = self.pos;
                let d = self.poly_power()?;
                let Some(c) = d.constant_value() else {
                    self.pos = at;
                    return Err(self.error_here("divisor must be a constant"));
                };
                if c.is_zero() {
                    self.pos = at;
                    return Err(self.error_here("division by zero"));
                }
                acc = acc.scale(&(Rational::one() / c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn poly_power(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(self.poly_power()?.neg());
        }
        let base = match self.peek().clone() {
            Tok::Num(_) => Poly::constant(self.number()?),
            Tok::Ident(s) if s == "x" => {
                self.bump();
                Poly::x()
            }
            Tok::Sym('(') => {
                self.bump();
                let p = self.poly()?;
                self.expect(')')?;
                p
            }
            _ => return Err(self.unexpected("a polynomial")),
        };
        if self.eat('^') {
            let k = self.integer()?;
            let k = u32::try_from(k).ok().filter(|&k| k <= 64).ok_or_else(|| self.error_here("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn function(&mut self) -> Result<PiecewiseFn> {
        if !self.is_ident("piecewise") {
            // A bare polynomial is accepted as a function on ℝ.
            let p = self.poly()?;
            let mut f = PiecewiseFn::polynomial(p);
            if self.is_ident("domain") {
                self.bump();
                f = f.with_domain(self.set()?);
            }
            return Ok(f);
        }
        self.bump();
        self.expect('{')?;
        let mut branches = Vec::new();
        while !self.is_ident("else") {
            let p = self.poly()?;
            self.expect_ident("on")?;
            let g = self.set()?;
            self.expect(';')?;
            branches.push((g, p));
        }
        self.bump();
        let default = self.poly()?;
        self.eat(';');
        self.expect('}')?;
        let mut f = PiecewiseFn { domain: SetExpr::reals(), branches, default };
        if self.is_ident("domain") {
            self.bump();
            f.domain = self.set()?;
        }
        Ok(f)
    }
}

pub fn parse_set(text: &str) -> Result<SetExpr> {
    let mut p = Parser::new(text)?;
    let s = p.set()?;
    p.finish()?;
    Ok(s)
}

pub fn parse_term(text: &str) -> Result<ClosedFormTerm> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_fn(text: &str) -> Result<PiecewiseFn> {
    let mut p = Parser::new(text)?;
    let f = p.function()?;
    p.finish()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn syntax_column(e: Error) -> usize {
        match e {
            Error::Syntax { column, .. } => column,
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn precedence() {
        let s = parse_set("[0,1] | (2,3) \\ points(5/2) & Q(R)").unwrap();
        let SetExpr::Union(parts) = &s else { panic!("{s:?}") };
        assert_eq!(parts.len(), 2);
        assert!(matches!(&parts[1], SetExpr::Difference(_, b) if matches!(**b, SetExpr::Intersection(_))));
        assert!(!s.contains(&rat(5, 2)) && s.contains(&rat(9, 4)));
    }

    #[test]
    fn difference_is_left_associative() {
        let s = parse_set("R \\ [0,1] \\ [2,3]").unwrap();
        let SetExpr::Difference(a, _) = s else { panic!() };
        assert!(matches!(*a, SetExpr::Difference(_, _)));
    }

    #[test]
    fn atoms() {
        let s = parse_set("family(1/n - (1/2)^n, 1/n)").unwrap();
        assert!(s.contains(&rat(3, 8)) && !s.contains(&int(1)) && !s.contains(&int(0)));
        assert!(parse_set("seq(1/n)").unwrap().contains(&rat(1, 7)));
        assert!(parse_set("seq(2 + 1/2/n^2, 3)").unwrap().contains(&(int(2) + rat(1, 18))));
        assert!(parse_set("cantor(0, 1)").unwrap().contains(&rat(1, 4)));
        assert!(parse_set("(-inf, 0.5]").unwrap().contains(&rat(1, 2)));
        assert!(parse_set("Q((-1,1))").unwrap().contains(&rat(-1, 3)));
        assert_eq!(parse_set("empty").unwrap(), SetExpr::empty());
    }

    #[test]
    fn terms_print_and_parse() {
        for t in ["1/n", "-1/2/n^3 + 2*(1/3)^n", "3 - (1/2)^n", "0"] {
            let term = parse_term(t).unwrap();
            assert_eq!(parse_term(&term.to_string()).unwrap(), term, "{t}");
        }
    }

    #[test]
    fn errors_are_positioned() {
        assert!(parse_term("(-1/2)^n").is_err());
        assert_eq!(syntax_column(parse_set("[0,").unwrap_err()), 4);
        assert_eq!(syntax_column(parse_set("[0,1] | ").unwrap_err()), 9);
        assert_eq!(syntax_column(parse_set("[0,1] $").unwrap_err()), 7);
        assert_eq!(syntax_column(parse_set("[1,0]").unwrap_err()), 1);
        assert!(matches!(parse_set("blob(1)"), Err(Error::UnknownAtom { column: 1, .. })));
        let e = parse_fn("piecewise { 1 on [0,1]\n else 0 }").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, column: 2, .. }), "{e:?}");
    }

    #[test]
    fn functions() {
        let f = parse_fn("piecewise { 1 on Q(R); x^2 - 1/2*x on [0,1]; else 0 } # dirichlet-like").unwrap();
        assert_eq!(f.branches.len(), 2);
        assert_eq!(f.eval(&rat(1, 3)).unwrap(), int(1));
        let text = f.to_string();
        assert_eq!(parse_fn(&text).unwrap(), f);
        let g = parse_fn("(x + 1)^2 / 2 domain [0, 1]").unwrap();
        assert_eq!(g.eval(&int(1)).unwrap(), int(2));
        assert!(parse_fn("1 / x").is_err());
    }
}
