//! The presentation language: parsing with line/column errors and a canonical
//! printer whose output parses back to the same presentation.
//!
//! ```text
//! # comments run to end of line
//! generators: g, h;
//! relation: 1 <= g*h;
//! power_universal: 4*g;
//! mult_set: h;
//! m_set: h >= g;            # or `all`, or `{1, h, g*h}`
//! family {
//!   param a in [1/2, inf);
//!   constraint: 1 <= a*b;
//!   value g = a;
//!   value h = (1) / (a);
//! }
//! ```

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::expr::{normalize, Expr, Monomial, RawExpr, DEFAULT_MAX_EXPONENT};
use crate::presentation::{ExponentConstraint, MonomialSet, Presentation};
use crate::spectrum::{Bound, HomFamily, Param, ParamConstraint, RatFun, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigUint),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 16] = ["<=", ">=", ":", ";", ",", "+", "*", "^", "(", ")", "{", "}", "[", "]", "/", "="];

fn lex(text: &str, line0: usize, col0: usize) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (line0, col0);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
                col += 1;
            }
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            let n = s.parse::<BigUint>().map_err(|e| perr(tl, tc, e.to_string()))?;
            out.push(Token { tok: Tok::Int(n), line: tl, col: tc });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: tl, col: tc });
        } else {
            chars.next();
            col += 1;
            let two = chars.peek().map(|&d| format!("{c}{d}"));
            let sym = match two.as_deref().and_then(|t| SYMBOLS.iter().find(|s| **s == t)) {
                Some(s) => {
                    chars.next();
                    col += 1;
                    *s
                }
                None => {
                    let one = c.to_string();
                    *SYMBOLS
                        .iter()
                        .find(|s| **s == one)
                        .ok_or_else(|| perr(tl, tc, format!("unexpected character `{c}`")))?
                }
            };
            out.push(Token { tok: Tok::Sym(sym), line: tl, col: tc });
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str, line0: usize, col0: usize) -> Result<Self> {
        Ok(Parser { toks: lex(text, line0, col0)?, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn next(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, msg: impl Into<String>) -> Error {
        let t = self.peek();
        perr(t.line, t.col, msg)
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn at_ident(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.at_sym(s);
        if hit {
            self.next();
        }
        hit
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.err_here(format!("expected `{s}`, found {}", describe(&self.peek().tok))))
        }
    }

    fn ident(&mut self) -> Result<(String, usize, usize)> {
        let t = self.next();
        match t.tok {
            Tok::Ident(s) => Ok((s, t.line, t.col)),
            other => Err(perr(t.line, t.col, format!("expected a name, found {}", describe(&other)))),
        }
    }

    fn int(&mut self) -> Result<BigUint> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => Ok(n),
            other => Err(perr(t.line, t.col, format!("expected an integer, found {}", describe(&other)))),
        }
    }

    fn expect_eof(&self) -> Result<()> {
        match self.peek().tok {
            Tok::Eof => Ok(()),
            ref t => Err(self.err_here(format!("unexpected {}", describe(t)))),
        }
    }

    /// `expr` over `names`, normalized; undeclared names are reported at their position.
    fn expr(&mut self, names: &[String]) -> Result<Expr> {
        let raw = self.sum(names)?;
        normalize(&raw, names, DEFAULT_MAX_EXPONENT).map_err(|e| self.err_here(e.to_string()))
    }

    fn sum(&mut self, names: &[String]) -> Result<RawExpr> {
        let mut e = self.product(names)?;
        while self.eat_sym("+") {
            e = RawExpr::Add(Box::new(e), Box::new(self.product(names)?));
        }
        Ok(e)
    }

    fn product(&mut self, names: &[String]) -> Result<RawExpr> {
        let mut e = self.power(names)?;
        while self.eat_sym("*") {
            e = RawExpr::Mul(Box::new(e), Box::new(self.power(names)?));
        }
        Ok(e)
    }

    fn power(&mut self, names: &[String]) -> Result<RawExpr> {
        let base = self.atom(names)?;
        if self.eat_sym("^") {
            let t = self.peek().clone();
            let k = self.int()?;
            let k = k
                .to_u32()
                .filter(|&k| k <= DEFAULT_MAX_EXPONENT)
                .ok_or_else(|| perr(t.line, t.col, format!("exponent exceeds the bound {DEFAULT_MAX_EXPONENT}")))?;
            return Ok(RawExpr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self, names: &[String]) -> Result<RawExpr> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => Ok(RawExpr::Num(n)),
            Tok::Ident(s) if names.contains(&s) => Ok(RawExpr::Name(s)),
            Tok::Ident(s) => Err(perr(t.line, t.col, format!("undeclared name `{s}`"))),
            Tok::Sym("(") => {
                let e = self.sum(names)?;
                self.expect_sym(")")?;
                Ok(e)
            }
            other => Err(perr(t.line, t.col, format!("expected an expression, found {}", describe(&other)))),
        }
    }

    /// `expr [/ expr]`
    fn quotient(&mut self, names: &[String]) -> Result<(Expr, Option<Expr>)> {
        let num = self.expr(names)?;
        if self.eat_sym("/") {
            let den = self.expr(names)?;
            if den.is_zero() {
                return Err(self.err_here("zero denominator"));
            }
            return Ok((num, Some(den)));
        }
        Ok((num, None))
    }

    fn rational(&mut self) -> Result<Q> {
        let n = self.int()?;
        let d = if self.eat_sym("/") { self.int()? } else { BigUint::from(1u32) };
        if d.is_zero() {
            return Err(self.err_here("zero denominator"));
        }
        Ok(Q::new(n.into(), d.into()))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses an expression over the given generator names.
pub fn parse_expr(names: &[String], text: &str) -> Result<Expr> {
    parse_expr_at(names, text, 1, 1)
}

pub(crate) fn parse_expr_at(names: &[String], text: &str, line: usize, col: usize) -> Result<Expr> {
    let mut p = Parser::new(text, line, col)?;
    let e = p.expr(names)?;
    p.expect_eof()?;
    Ok(e)
}

/// Parses `a <= b`.
pub(crate) fn parse_le_at(names: &[String], text: &str, line: usize, col: usize) -> Result<(Expr, Expr)> {
    let mut p = Parser::new(text, line, col)?;
    let a = p.expr(names)?;
    p.expect_sym("<=")?;
    let b = p.expr(names)?;
    p.expect_eof()?;
    Ok((a, b))
}

/// Parses `num` or `num / den`; the denominator is `None` when absent.
pub fn parse_quotient(names: &[String], text: &str) -> Result<(Expr, Option<Expr>)> {
    parse_quotient_at(names, text, 1, 1)
}

pub(crate) fn parse_quotient_at(names: &[String], text: &str, line: usize, col: usize) -> Result<(Expr, Option<Expr>)> {
    let mut p = Parser::new(text, line, col)?;
    let q = p.quotient(names)?;
    p.expect_eof()?;
    Ok(q)
}

pub(crate) fn parse_rational_at(text: &str, line: usize, col: usize) -> Result<Q> {
    let mut p = Parser::new(text, line, col)?;
    let v = p.rational()?;
    p.expect_eof()?;
    Ok(v)
}

#[derive(Default)]
struct Seen {
    generators: bool,
    power_universal: bool,
    mult_set: bool,
    m_set: bool,
    family: bool,
}

fn mark(flag: &mut bool, name: &str, line: usize, col: usize) -> Result<()> {
    if std::mem::replace(flag, true) {
        return Err(perr(line, col, format!("duplicate `{name}` section")));
    }
    Ok(())
}

/// Parses a presentation file.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    parse_presentation_at(text, 1)
}

pub(crate) fn parse_presentation_at(text: &str, line0: usize) -> Result<Presentation> {
    let mut ps = Parser::new(text, line0, 1)?;
    let mut pres = Presentation::default();
    let mut seen = Seen::default();
    loop {
        let t = ps.peek().clone();
        let (kw, line, col) = match t.tok {
            Tok::Eof => break,
            Tok::Ident(_) => ps.ident()?,
            ref other => return Err(perr(t.line, t.col, format!("expected a section keyword, found {}", describe(other)))),
        };
        let names = pres.generators.clone();
        match kw.as_str() {
            "generators" => {
                mark(&mut seen.generators, "generators", line, col)?;
                ps.expect_sym(":")?;
                loop {
                    let (g, gl, gc) = ps.ident()?;
                    if pres.generators.contains(&g) {
                        return Err(perr(gl, gc, format!("generator `{g}` declared twice")));
                    }
                    pres.generators.push(g);
                    if !ps.eat_sym(",") {
                        break;
                    }
                }
                ps.expect_sym(";")?;
            }
            "relation" => {
                ps.expect_sym(":")?;
                let l = ps.expr(&names)?;
                ps.expect_sym("<=")?;
                let r = ps.expr(&names)?;
                ps.expect_sym(";")?;
                pres.relations.push((l, r));
            }
            "power_universal" => {
                mark(&mut seen.power_universal, "power_universal", line, col)?;
                ps.expect_sym(":")?;
                pres.power_universal = Some(ps.expr(&names)?);
                ps.expect_sym(";")?;
            }
            "mult_set" => {
                mark(&mut seen.mult_set, "mult_set", line, col)?;
                ps.expect_sym(":")?;
                let mut ts = Vec::new();
                loop {
                    let t = ps.peek().clone();
                    let e = ps.expr(&names)?;
                    if e.is_zero() {
                        return Err(perr(t.line, t.col, "multiplicative set generators must be nonzero"));
                    }
                    ts.push(e);
                    if !ps.eat_sym(",") {
                        break;
                    }
                }
                ps.expect_sym(";")?;
                pres.t_set = Some(ts);
            }
            "m_set" => {
                mark(&mut seen.m_set, "m_set", line, col)?;
                ps.expect_sym(":")?;
                pres.m_set = Some(parse_m_set(&mut ps, &names)?);
                ps.expect_sym(";")?;
            }
            "family" => {
                mark(&mut seen.family, "family", line, col)?;
                pres.family = Some(parse_family(&mut ps, &names, line, col)?);
            }
            other => return Err(perr(line, col, format!("unknown section `{other}`"))),
        }
    }
    if !seen.generators {
        return Err(perr(line0, 1, "missing `generators` section"));
    }
    Ok(pres)
}

fn parse_m_set(ps: &mut Parser, names: &[String]) -> Result<MonomialSet> {
    if ps.at_ident("all") {
        ps.next();
        return Ok(MonomialSet::Where(Vec::new()));
    }
    if ps.eat_sym("{") {
        let mut v = Vec::new();
        loop {
            let t = ps.peek().clone();
            let e = ps.expr(names)?;
            match e.as_monomial() {
                Some(m) if e.terms().all(|(_, c)| *c == BigUint::from(1u32)) => v.push(m.clone()),
                _ => return Err(perr(t.line, t.col, "m_set lists monomials with coefficient 1")),
            }
            if !ps.eat_sym(",") {
                break;
            }
        }
        ps.expect_sym("}")?;
        return Ok(MonomialSet::List(v));
    }
    let mut cs = Vec::new();
    loop {
        let (l, lc) = exponent_side(ps, names)?;
        let ge = if ps.eat_sym(">=") {
            true
        } else if ps.eat_sym("<=") {
            false
        } else {
            return Err(ps.err_here("expected `>=` or `<=`"));
        };
        let (r, rc) = exponent_side(ps, names)?;
        cs.push(if ge {
            ExponentConstraint { lhs: l, lhs_const: lc, rhs: r, rhs_const: rc }
        } else {
            ExponentConstraint { lhs: r, lhs_const: rc, rhs: l, rhs_const: lc }
        });
        if !ps.eat_sym(",") {
            break;
        }
    }
    Ok(MonomialSet::Where(cs))
}

/// `item (+ item)*` with items generator names (their exponents) or integers.
fn exponent_side(ps: &mut Parser, names: &[String]) -> Result<(Vec<usize>, u32)> {
    let (mut gens, mut c) = (Vec::new(), 0u32);
    loop {
        let t = ps.next();
        match t.tok {
            Tok::Ident(s) => match names.iter().position(|g| *g == s) {
                Some(i) => gens.push(i),
                None => return Err(perr(t.line, t.col, format!("undeclared name `{s}`"))),
            },
            Tok::Int(n) => {
                c = n
                    .to_u32()
                    .and_then(|n| c.checked_add(n))
                    .ok_or_else(|| perr(t.line, t.col, "constant too large"))?
            }
            other => return Err(perr(t.line, t.col, format!("expected a generator or integer, found {}", describe(&other)))),
        }
        if !ps.eat_sym("+") {
            break;
        }
    }
    Ok((gens, c))
}

fn parse_family(ps: &mut Parser, gens: &[String], line: usize, col: usize) -> Result<HomFamily> {
    ps.expect_sym("{")?;
    let mut params: Vec<Param> = Vec::new();
    let mut constraints = Vec::new();
    let mut values: Vec<Option<RatFun>> = vec![None; gens.len()];
    while !ps.eat_sym("}") {
        let (kw, kl, kc) = ps.ident()?;
        let pnames: Vec<String> = params.iter().map(|p| p.name.clone()).collect();
        match kw.as_str() {
            "param" => {
                let (name, nl, nc) = ps.ident()?;
                if pnames.contains(&name) {
                    return Err(perr(nl, nc, format!("parameter `{name}` declared twice")));
                }
                if !ps.at_ident("in") {
                    return Err(ps.err_here("expected `in`"));
                }
                ps.next();
                let lo = if ps.eat_sym("[") {
                    Bound::Closed(ps.rational()?)
                } else if ps.eat_sym("(") {
                    Bound::Open(ps.rational()?)
                } else {
                    return Err(ps.err_here("expected `[` or `(`"));
                };
                ps.expect_sym(",")?;
                let hi = if ps.at_ident("inf") {
                    ps.next();
                    ps.expect_sym(")")?;
                    Bound::Infinite
                } else {
                    let v = ps.rational()?;
                    if ps.eat_sym("]") {
                        Bound::Closed(v)
                    } else {
                        ps.expect_sym(")")?;
                        Bound::Open(v)
                    }
                };
                ps.expect_sym(";")?;
                params.push(Param { name, lo, hi });
            }
            "constraint" => {
                ps.expect_sym(":")?;
                let lhs = ps.expr(&pnames)?;
                ps.expect_sym("<=")?;
                let rhs = ps.expr(&pnames)?;
                ps.expect_sym(";")?;
                constraints.push(ParamConstraint { lhs, rhs });
            }
            "value" => {
                let (g, gl, gc) = ps.ident()?;
                let i = gens
                    .iter()
                    .position(|x| *x == g)
                    .ok_or_else(|| perr(gl, gc, format!("undeclared name `{g}`")))?;
                if values[i].is_some() {
                    return Err(perr(gl, gc, format!("duplicate value for `{g}`")));
                }
                ps.expect_sym("=")?;
                let (num, den) = ps.quotient(&pnames)?;
                ps.expect_sym(";")?;
                values[i] = Some(RatFun { num, den: den.unwrap_or_else(Expr::one) });
            }
            other => return Err(perr(kl, kc, format!("unknown family entry `{other}`"))),
        }
    }
    let values = values
        .into_iter()
        .zip(gens)
        .map(|(v, g)| v.ok_or_else(|| perr(line, col, format!("family gives no value for `{g}`"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(HomFamily { params, constraints, values })
}

fn show_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn show_side(names: &[String], gens: &[usize], c: u32) -> String {
    let mut parts: Vec<String> = gens.iter().map(|&i| names[i].clone()).collect();
    if c != 0 || parts.is_empty() {
        parts.push(c.to_string());
    }
    parts.join(" + ")
}

fn show_ratfun(names: &[String], f: &RatFun) -> String {
    if f.den.is_one() {
        f.num.display(names).to_string()
    } else {
        format!("({}) / ({})", f.num.display(names), f.den.display(names))
    }
}

fn show_monomial(names: &[String], m: &Monomial) -> String {
    Expr::monomial(m.clone()).display(names).to_string()
}

/// Canonical text of a presentation; parsing it yields the same presentation.
pub fn print_presentation(p: &Presentation) -> String {
    let names = &p.generators;
    let mut s = String::new();
    let _ = writeln!(s, "generators: {};", names.join(", "));
    for (l, r) in &p.relations {
        let _ = writeln!(s, "relation: {} <= {};", p.show(l), p.show(r));
    }
    if let Some(u) = &p.power_universal {
        let _ = writeln!(s, "power_universal: {};", p.show(u));
    }
    if let Some(ts) = &p.t_set {
        let ts: Vec<String> = ts.iter().map(|t| p.show(t)).collect();
        let _ = writeln!(s, "mult_set: {};", ts.join(", "));
    }
    match &p.m_set {
        None => {}
        Some(MonomialSet::Where(cs)) if cs.is_empty() => s.push_str("m_set: all;\n"),
        Some(MonomialSet::Where(cs)) => {
            let cs: Vec<String> = cs
                .iter()
                .map(|c| format!("{} >= {}", show_side(names, &c.lhs, c.lhs_const), show_side(names, &c.rhs, c.rhs_const)))
                .collect();
            let _ = writeln!(s, "m_set: {};", cs.join(", "));
        }
        Some(MonomialSet::List(ms)) => {
            let ms: Vec<String> = ms.iter().map(|m| show_monomial(names, m)).collect();
            let _ = writeln!(s, "m_set: {{{}}};", ms.join(", "));
        }
    }
    if let Some(fam) = &p.family {
        let pnames: Vec<String> = fam.params.iter().map(|q| q.name.clone()).collect();
        s.push_str("family {\n");
        for prm in &fam.params {
            let lo = match &prm.lo {
                Bound::Closed(v) => format!("[{}", show_q(v)),
                Bound::Open(v) => format!("({}", show_q(v)),
                // Rejected by the parser; printed so the error is visible on reparse.
                Bound::Infinite => "(inf".into(),
            };
            let hi = match &prm.hi {
                Bound::Closed(v) => format!("{}]", show_q(v)),
                Bound::Open(v) => format!("{})", show_q(v)),
                Bound::Infinite => "inf)".into(),
            };
            let _ = writeln!(s, "  param {} in {lo}, {hi};", prm.name);
        }
        for c in &fam.constraints {
            let _ = writeln!(s, "  constraint: {} <= {};", c.lhs.display(&pnames), c.rhs.display(&pnames));
        }
        for (g, v) in names.iter().zip(&fam.values) {
            let _ = writeln!(s, "  value {g} = {};", show_ratfun(&pnames, v));
        }
        s.push_str("}\n");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::q;

    const INST_A: &str = "generators: x;\nrelation: 1 <= x;\nrelation: x <= 2;\n";

    const INST_D: &str = "\
# two generators on a hyperbolic band
generators: g, h;
relation: 1 <= g*h;
relation: g*h <= 2;
relation: h <= 2;
power_universal: 4*g;
mult_set: h;
m_set: h >= g;
family {
  param a in [1/2, inf);
  param b in (0, 2];
  constraint: 1 <= a*b;
  constraint: a*b <= 2;
  value g = a;
  value h = b;
}
";

    fn err_pos(r: Result<Presentation>) -> (usize, usize) {
        match r {
            Err(Error::Parse { line, col, .. }) => (line, col),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn inst_a_parses() {
        let p = parse_presentation(INST_A).unwrap();
        assert_eq!(p.num_generators(), 1);
        assert_eq!(p.relations.len(), 2);
        assert_eq!(p.relations[1], (Expr::var(0), Expr::constant(2u32)));
    }

    #[test]
    fn undeclared_name_reports_its_line() {
        let (line, col) = err_pos(parse_presentation("generators: x;\nrelation: x <= z;\n"));
        assert_eq!((line, col), (2, 16));
    }

    #[test]
    fn inst_d_round_trip() {
        let p = parse_presentation(INST_D).unwrap();
        let fam = p.family.as_ref().unwrap();
        assert_eq!(fam.params.len(), 2);
        assert_eq!(fam.params[0].lo, Bound::Closed(q(1, 2)));
        assert_eq!(fam.params[1].lo, Bound::Open(q(0, 1)));
        assert_eq!(p.power_universal, Some(&Expr::constant(4u32) * &Expr::var(0)));
        let printed = print_presentation(&p);
        let again = parse_presentation(&printed).unwrap();
        assert_eq!(again, p);
        assert_eq!(print_presentation(&again), printed);
    }

    #[test]
    fn rational_values_and_lists() {
        let text = "generators: x, y;\nm_set: {1, x*y};\nfamily { param c in [1, 3); value x = (c + 1)/(2); value y = c^2; }";
        let p = parse_presentation(text).unwrap();
        let fam = p.family.as_ref().unwrap();
        assert_eq!(fam.values[0].eval(&[q(1, 1)]), Some(q(1, 1)));
        let again = parse_presentation(&print_presentation(&p)).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn rejections() {
        assert_eq!(err_pos(parse_presentation("generators: x;\ngenerators: y;")), (2, 1));
        assert_eq!(err_pos(parse_presentation("generators: x, x;")), (1, 16));
        assert_eq!(err_pos(parse_presentation("generators: x;\nrelation: x <= 2")).0, 2);
        assert_eq!(err_pos(parse_presentation("generators: x;\nrelation: x^99 <= 2;")), (2, 13));
        assert_eq!(err_pos(parse_presentation("generators: x; family { param c in [1, 2]; }")), (1, 16));
        assert_eq!(err_pos(parse_presentation("generators: x;\n  $")), (2, 3));
        assert_eq!(err_pos(parse_presentation("")), (1, 1));
        assert_eq!(err_pos(parse_presentation("generators: x; mult_set: 0;")), (1, 26));
    }

    #[test]
    fn expressions_for_arguments() {
        let names = vec!["x".to_string()];
        assert_eq!(parse_expr(&names, "(x+1)^2").unwrap().display(&names).to_string(), "x^2 + 2*x + 1");
        assert!(parse_expr(&names, "x +").is_err());
        let (n, d) = parse_quotient(&names, "x / x^2").unwrap();
        assert_eq!((n, d), (Expr::var(0), Some(Expr::var(0).pow(2))));
    }
}
