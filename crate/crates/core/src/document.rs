//! Certificate files: the presentation, then one claim written as an indented
//! tree with every intermediate conclusion spelled out.
//!
//! ```text
//! presentation {
//!   generators: x;
//!   relation: 1 <= x;
//!   relation: x <= 2;
//! }
//! preorder
//!   trans: 1 <= 2
//!     base 0: 1 <= x
//!     base 1: x <= 2
//! ```
//!
//! Nodes are `key [args] [: payload]`; children are indented two more spaces.

use std::fmt::Write as _;

use crate::asymptotic::{AsymptoticWitness, Envelope, Schema};
use crate::cert::{replay, Certificate, Rule};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::localization::{Fraction, LocCertificate, LocProof, Localization, MultSet};
use crate::order_ext::{replay_ext, ExtCertificate, RelationSet, RfSpec, Triple};
use crate::presentation::Presentation;
use crate::spectrum::{replay_membership, MemberKind, MembershipCertificate, Q};
use crate::syntax::{parse_expr_at, parse_le_at, parse_presentation_at, parse_quotient_at, parse_rational_at, print_presentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    Preorder(Certificate),
    /// Checked for `n ≤ horizon`.
    Asymptotic { witness: AsymptoticWitness, horizon: u32 },
    Extension { relations: RelationSet, cert: ExtCertificate },
    Membership(MembershipCertificate),
    Localization { a: Fraction, b: Fraction, cert: LocCertificate },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub presentation: Presentation,
    pub claim: Claim,
}

impl Document {
    /// Replays the claim; returns a one-line description of what was verified.
    pub fn certify(&self) -> Result<String> {
        let p = &self.presentation;
        p.validate()?;
        match &self.claim {
            Claim::Preorder(c) => {
                let (a, b) = replay(p, c)?;
                Ok(format!("preorder {} <= {}", p.show(&a), p.show(&b)))
            }
            Claim::Asymptotic { witness: w, horizon } => {
                w.verify(p, *horizon)?;
                Ok(format!(
                    "asymptotic {} >~ {} with envelope {} for n <= {horizon}",
                    p.show(&w.x),
                    p.show(&w.y),
                    show_envelope(&w.envelope)
                ))
            }
            Claim::Extension { relations, cert } => {
                let (a, b) = replay_ext(p, relations, cert)?;
                Ok(format!("extension {} <= {} using {} triple(s)", p.show(&a), p.show(&b), cert.triples.len()))
            }
            Claim::Membership(mc) => {
                replay_membership(p, mc)?;
                Ok(format!("membership {} in {} with n = {}", p.show(&mc.element), kind_name(mc.kind), mc.n))
            }
            Claim::Localization { a, b, cert } => {
                localization(p)?.replay(cert, a, b)?;
                let rel = if matches!(cert.proof, LocProof::Eq) { "=" } else { "<=" };
                Ok(format!("localization {} {rel} {}", a.show(p), b.show(p)))
            }
        }
    }
}

fn localization(p: &Presentation) -> Result<Localization<'_>> {
    Ok(Localization::new(p, MultSet::new(p.t_set.clone().unwrap_or_default())?))
}

pub fn kind_name(k: MemberKind) -> &'static str {
    match k {
        MemberKind::Plus => "splus",
        MemberKind::Minus => "sminus",
        MemberKind::Bounded => "sb",
    }
}

fn kind_from(s: &str) -> Option<MemberKind> {
    match s {
        "splus" => Some(MemberKind::Plus),
        "sminus" => Some(MemberKind::Minus),
        "sb" => Some(MemberKind::Bounded),
        _ => None,
    }
}

pub fn show_envelope(e: &Envelope) -> String {
    let list = |ks: &[u32]| ks.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    match e {
        Envelope::Constant(k) => format!("constant {k}"),
        Envelope::Periodic(ks) => format!("periodic {}", list(ks)),
        Envelope::Horizon(ks) => format!("horizon {}", list(ks)),
    }
}

// ---------------------------------------------------------------- printing

struct Out<'a> {
    p: &'a Presentation,
    s: String,
}

impl Out<'_> {
    fn line(&mut self, depth: usize, text: impl AsRef<str>) {
        let _ = writeln!(self.s, "{:width$}{}", "", text.as_ref(), width = 2 * depth);
    }

    fn show(&self, e: &Expr) -> String {
        self.p.show(e)
    }

    fn cert(&mut self, d: usize, c: &Certificate) {
        let concl = format!("{} <= {}", self.show(&c.lhs), self.show(&c.rhs));
        match &c.rule {
            Rule::Refl => self.line(d, format!("refl: {concl}")),
            Rule::ZeroOne => self.line(d, format!("zero_one: {concl}")),
            Rule::Base(i) => self.line(d, format!("base {i}: {concl}")),
            Rule::NatEmbed => self.line(d, format!("nat: {concl}")),
            Rule::AddCong(child, e) | Rule::MulCong(child, e) => {
                let key = if matches!(c.rule, Rule::AddCong(..)) { "add_cong" } else { "mul_cong" };
                self.line(d, format!("{key}: {concl}"));
                self.line(d + 1, format!("by: {}", self.show(e)));
                self.cert(d + 1, child);
            }
            Rule::Trans(a, b) => {
                self.line(d, format!("trans: {concl}"));
                self.cert(d + 1, a);
                self.cert(d + 1, b);
            }
        }
    }

    fn wrapped(&mut self, d: usize, key: &str, c: &Certificate) {
        self.line(d, key);
        self.cert(d + 1, c);
    }

    fn witness(&mut self, d: usize, w: &AsymptoticWitness) {
        self.line(d, "witness");
        self.line(d + 1, format!("u: {}", self.show(&w.u)));
        self.line(d + 1, format!("x: {}", self.show(&w.x)));
        self.line(d + 1, format!("y: {}", self.show(&w.y)));
        self.line(d + 1, format!("envelope: {}", show_envelope(&w.envelope)));
        let d = d + 1;
        match &w.schema {
            Schema::Lift { base } => {
                self.line(d, "schema lift");
                self.cert(d + 1, base);
            }
            Schema::Periodic { block, residues } => {
                self.line(d, "schema periodic");
                self.wrapped(d + 1, "block", block);
                for r in residues {
                    self.wrapped(d + 1, "residue", r);
                }
            }
            Schema::Convert { inner, k, change } => {
                self.line(d, "schema convert");
                self.line(d + 1, format!("k: {k}"));
                self.wrapped(d + 1, "change", change);
                self.witness(d + 1, inner);
            }
            Schema::Compose { first, second } => {
                self.line(d, "schema compose");
                self.witness(d + 1, first);
                self.witness(d + 1, second);
            }
            Schema::MulCong { inner, factor } => {
                self.line(d, "schema mul_cong");
                self.line(d + 1, format!("by: {}", self.show(factor)));
                self.witness(d + 1, inner);
            }
            Schema::AddCong { inner, term, unit } => {
                self.line(d, "schema add_cong");
                self.line(d + 1, format!("by: {}", self.show(term)));
                if let Some(u) = unit {
                    self.wrapped(d + 1, "unit", u);
                }
                self.witness(d + 1, inner);
            }
            Schema::Cancel { factor, cert, k, dom, inv } => {
                self.line(d, "schema cancel");
                self.line(d + 1, format!("by: {}", self.show(factor)));
                self.line(d + 1, format!("k: {k}"));
                self.wrapped(d + 1, "cert", cert);
                self.wrapped(d + 1, "dom", dom);
                self.wrapped(d + 1, "inv", inv);
            }
            Schema::SmallFactors { s, t, family, k, l, inv_t, dom_s } => {
                self.line(d, "schema small_factors");
                self.line(d + 1, format!("s: {}", self.show(s)));
                self.line(d + 1, format!("t: {}", self.show(t)));
                self.line(d + 1, format!("k: {k}"));
                self.line(d + 1, format!("l: {l}"));
                self.wrapped(d + 1, "inv_t", inv_t);
                self.wrapped(d + 1, "dom_s", dom_s);
                for c in family {
                    self.wrapped(d + 1, "member", c);
                }
            }
            Schema::Flatten { outer, inner, unit } => {
                self.line(d, "schema flatten");
                self.line(d + 1, format!("outer: {}", show_envelope(outer)));
                if let Some(u) = unit {
                    self.wrapped(d + 1, "unit", u);
                }
                for w in inner {
                    self.witness(d + 1, w);
                }
            }
            Schema::Table { certs } => {
                self.line(d, "schema table");
                for c in certs {
                    self.cert(d + 1, c);
                }
            }
        }
    }
}

fn show_q(v: &Q) -> String {
    if v.is_integer() { v.numer().to_string() } else { format!("{}/{}", v.numer(), v.denom()) }
}

fn show_fraction(p: &Presentation, f: &Fraction) -> String {
    format!("({}) / ({})", p.show(&f.num), p.show(&f.den))
}

pub fn print_document(doc: &Document) -> String {
    let p = &doc.presentation;
    let mut o = Out { p, s: String::from("presentation {\n") };
    for l in print_presentation(p).lines() {
        o.line(1, l);
    }
    o.line(0, "}");
    match &doc.claim {
        Claim::Preorder(c) => {
            o.line(0, "preorder");
            o.cert(1, c);
        }
        Claim::Asymptotic { witness, horizon } => {
            o.line(0, "asymptotic");
            o.line(1, format!("horizon: {horizon}"));
            o.witness(1, witness);
        }
        Claim::Extension { relations, cert } => {
            o.line(0, "extension");
            o.line(1, format!("a: {}", p.show(&cert.a)));
            o.line(1, format!("b: {}", p.show(&cert.b)));
            match relations {
                RelationSet::Finite(pairs) => {
                    o.line(1, "relations finite");
                    for (x, y) in pairs {
                        o.line(2, format!("pair: {} <= {}", p.show(x), p.show(y)));
                    }
                }
                RelationSet::Spectral(f) => {
                    o.line(1, "relations spectral");
                    for (&g, v) in f.gens.iter().zip(&f.values) {
                        o.line(2, format!("value {}: {}", p.generators[g], show_q(v)));
                    }
                }
            }
            for t in &cert.triples {
                o.line(1, "triple");
                o.line(2, format!("s: {}", p.show(&t.s)));
                o.line(2, format!("pair: {} <= {}", p.show(&t.x), p.show(&t.y)));
            }
            o.wrapped(1, "inner", &cert.inner);
        }
        Claim::Membership(mc) => {
            o.line(0, format!("membership {}", kind_name(mc.kind)));
            o.line(1, format!("element: {}", p.show(&mc.element)));
            o.line(1, format!("n: {}", mc.n));
            if let Some(c) = &mc.lower {
                o.wrapped(1, "lower", c);
            }
            if let Some(c) = &mc.upper {
                o.wrapped(1, "upper", c);
            }
        }
        Claim::Localization { a, b, cert } => {
            o.line(0, "localization");
            o.line(1, format!("a: {}", show_fraction(p, a)));
            o.line(1, format!("b: {}", show_fraction(p, b)));
            let exps: Vec<String> = cert.r_exps.iter().map(u32::to_string).collect();
            o.line(1, format!("r: {}", exps.join(" ")));
            match &cert.proof {
                LocProof::Eq => o.line(1, "proof eq"),
                LocProof::Le(c) => o.wrapped(1, "proof le", c),
            }
        }
    }
    o.s
}

// ----------------------------------------------------------------- parsing

#[derive(Debug)]
struct Node {
    key: String,
    args: Vec<String>,
    /// Text after the first `:`, with its column.
    payload: Option<(String, usize)>,
    line: usize,
    col: usize,
    children: Vec<Node>,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

impl Node {
    fn err(&self, msg: impl Into<String>) -> Error {
        perr(self.line, self.col, msg)
    }

    fn payload(&self) -> Result<(&str, usize)> {
        self.payload
            .as_ref()
            .map(|(s, c)| (s.as_str(), *c))
            .ok_or_else(|| self.err(format!("`{}` needs a value after `:`", self.key)))
    }

    fn no_payload(&self) -> Result<()> {
        match &self.payload {
            Some((_, c)) => Err(perr(self.line, *c, format!("unexpected value after `{}`", self.key))),
            None => Ok(()),
        }
    }

    fn arg(&self, i: usize) -> Result<&str> {
        self.args.get(i).map(String::as_str).ok_or_else(|| self.err(format!("`{}` needs an argument", self.key)))
    }

    fn child(&self, key: &str) -> Result<&Node> {
        self.children
            .iter()
            .find(|c| c.key == key)
            .ok_or_else(|| self.err(format!("`{}` is missing `{key}`", self.key)))
    }

    fn opt_child(&self, key: &str) -> Option<&Node> {
        self.children.iter().find(|c| c.key == key)
    }

    fn all(&self, key: &str) -> impl Iterator<Item = &Node> {
        let key = key.to_string();
        self.children.iter().filter(move |c| c.key == key)
    }

    fn only_child(&self) -> Result<&Node> {
        match self.children.as_slice() {
            [c] => Ok(c),
            _ => Err(self.err(format!("`{}` takes exactly one nested entry", self.key))),
        }
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.children.iter().find(|c| !allowed.contains(&c.key.as_str())) {
            Some(c) => Err(c.err(format!("unexpected `{}` inside `{}`", c.key, self.key))),
            None => Ok(()),
        }
    }
}

fn outline(lines: &[(usize, &str)]) -> Result<Vec<Node>> {
    let mut flat: Vec<(usize, Node)> = Vec::new();
    for &(line, raw) in lines {
        let text = raw.split('#').next().unwrap_or("");
        if text.trim().is_empty() {
            continue;
        }
        if text.starts_with('\t') || text.trim_start_matches(' ').starts_with('\t') {
            return Err(perr(line, 1, "tabs are not allowed for indentation"));
        }
        let indent = text.len() - text.trim_start_matches(' ').len();
        if indent % 2 != 0 {
            return Err(perr(line, indent + 1, "indentation must be a multiple of two spaces"));
        }
        let body = text[indent..].trim_end();
        let (head, payload) = match body.find(':') {
            Some(i) => {
                let rest = &body[i + 1..];
                let lead = rest.len() - rest.trim_start().len();
                (&body[..i], Some((rest.trim().to_string(), indent + i + 2 + lead)))
            }
            None => (body, None),
        };
        let mut words = head.split_whitespace().map(str::to_string);
        let key = words.next().ok_or_else(|| perr(line, indent + 1, "missing keyword"))?;
        let node = Node { key, args: words.collect(), payload, line, col: indent + 1, children: Vec::new() };
        flat.push((indent / 2, node));
    }
    let mut roots = Vec::new();
    let mut iter = flat.into_iter().peekable();
    while let Some((depth, node)) = iter.next() {
        if depth != 0 {
            return Err(node.err("unexpected indentation"));
        }
        roots.push(nest(node, 0, &mut iter)?);
    }
    Ok(roots)
}

fn nest(mut node: Node, depth: usize, iter: &mut std::iter::Peekable<impl Iterator<Item = (usize, Node)>>) -> Result<Node> {
    while let Some((d, _)) = iter.peek() {
        if *d <= depth {
            break;
        }
        let (d, child) = iter.next().expect("peeked");
        if d != depth + 1 {
            return Err(child.err("indented too far"));
        }
        node.children.push(nest(child, d, iter)?);
    }
    Ok(node)
}

struct Reader<'a> {
    p: &'a Presentation,
}

impl Reader<'_> {
    fn expr(&self, n: &Node) -> Result<Expr> {
        let (s, c) = n.payload()?;
        parse_expr_at(&self.p.generators, s, n.line, c)
    }

    fn le(&self, n: &Node) -> Result<(Expr, Expr)> {
        let (s, c) = n.payload()?;
        parse_le_at(&self.p.generators, s, n.line, c)
    }

    fn num<T: std::str::FromStr>(&self, n: &Node) -> Result<T> {
        let (s, c) = n.payload()?;
        s.parse().map_err(|_| perr(n.line, c, format!("expected a natural number, found `{s}`")))
    }

    fn nums(&self, n: &Node, s: &str, col: usize) -> Result<Vec<u32>> {
        s.split_whitespace()
            .map(|w| w.parse().map_err(|_| perr(n.line, col, format!("expected natural numbers, found `{w}`"))))
            .collect()
    }

    fn envelope(&self, n: &Node) -> Result<Envelope> {
        let (s, c) = n.payload()?;
        let (kind, rest) = s.split_once(' ').unwrap_or((s, ""));
        let ks = self.nums(n, rest, c)?;
        match (kind, ks.as_slice()) {
            ("constant", [k]) => Ok(Envelope::Constant(*k)),
            ("periodic", ks) if !ks.is_empty() => Ok(Envelope::Periodic(ks.to_vec())),
            ("horizon", ks) => Ok(Envelope::Horizon(ks.to_vec())),
            _ => Err(perr(n.line, c, format!("malformed envelope `{s}`"))),
        }
    }

    fn cert(&self, n: &Node) -> Result<Certificate> {
        let (lhs, rhs) = self.le(n)?;
        let subs: Vec<&Node> = n.children.iter().filter(|c| c.key != "by").collect();
        let arity = |k: usize| -> Result<()> {
            if subs.len() != k {
                return Err(n.err(format!("`{}` takes {k} premise(s), found {}", n.key, subs.len())));
            }
            Ok(())
        };
        let rule = match n.key.as_str() {
            "refl" | "zero_one" | "nat" => {
                arity(0)?;
                match n.key.as_str() {
                    "refl" => Rule::Refl,
                    "zero_one" => Rule::ZeroOne,
                    _ => Rule::NatEmbed,
                }
            }
            "base" => {
                arity(0)?;
                let i = n.arg(0)?.parse().map_err(|_| n.err("relation index must be a natural number"))?;
                Rule::Base(i)
            }
            "add_cong" | "mul_cong" => {
                arity(1)?;
                let by = self.expr(n.child("by")?)?;
                let child = Box::new(self.cert(subs[0])?);
                if n.key == "add_cong" { Rule::AddCong(child, by) } else { Rule::MulCong(child, by) }
            }
            "trans" => {
                arity(2)?;
                Rule::Trans(Box::new(self.cert(subs[0])?), Box::new(self.cert(subs[1])?))
            }
            other => return Err(n.err(format!("unknown rule `{other}`"))),
        };
        Ok(Certificate { lhs, rhs, rule })
    }

    fn wrapped(&self, n: &Node, key: &str) -> Result<Certificate> {
        self.cert(n.child(key)?.only_child()?)
    }

    fn opt_wrapped(&self, n: &Node, key: &str) -> Result<Option<Certificate>> {
        n.opt_child(key).map(|c| self.cert(c.only_child()?)).transpose()
    }

    fn witnesses(&self, n: &Node) -> Result<Vec<AsymptoticWitness>> {
        n.all("witness").map(|w| self.witness(w)).collect()
    }

    fn witness(&self, n: &Node) -> Result<AsymptoticWitness> {
        n.no_payload()?;
        n.check_keys(&["u", "x", "y", "envelope", "schema"])?;
        let sn = n.child("schema")?;
        let kind = sn.arg(0)?;
        let inner_one = |sn: &Node| -> Result<Box<AsymptoticWitness>> {
            match self.witnesses(sn)?.as_slice() {
                [w] => Ok(Box::new(w.clone())),
                _ => Err(sn.err("expected exactly one nested witness")),
            }
        };
        let schema = match kind {
            "lift" => Schema::Lift { base: self.cert(sn.only_child()?)? },
            "periodic" => Schema::Periodic {
                block: self.wrapped(sn, "block")?,
                residues: sn.all("residue").map(|r| self.cert(r.only_child()?)).collect::<Result<_>>()?,
            },
            "convert" => Schema::Convert {
                inner: inner_one(sn)?,
                k: self.num(sn.child("k")?)?,
                change: self.wrapped(sn, "change")?,
            },
            "compose" => match self.witnesses(sn)?.as_slice() {
                [a, b] => Schema::Compose { first: Box::new(a.clone()), second: Box::new(b.clone()) },
                _ => return Err(sn.err("compose takes two witnesses")),
            },
            "mul_cong" => Schema::MulCong { inner: inner_one(sn)?, factor: self.expr(sn.child("by")?)? },
            "add_cong" => Schema::AddCong {
                inner: inner_one(sn)?,
                term: self.expr(sn.child("by")?)?,
                unit: self.opt_wrapped(sn, "unit")?,
            },
            "cancel" => Schema::Cancel {
                factor: self.expr(sn.child("by")?)?,
                cert: self.wrapped(sn, "cert")?,
                k: self.num(sn.child("k")?)?,
                dom: self.wrapped(sn, "dom")?,
                inv: self.wrapped(sn, "inv")?,
            },
            "small_factors" => Schema::SmallFactors {
                s: self.expr(sn.child("s")?)?,
                t: self.expr(sn.child("t")?)?,
                family: sn.all("member").map(|m| self.cert(m.only_child()?)).collect::<Result<_>>()?,
                k: self.num(sn.child("k")?)?,
                l: self.num(sn.child("l")?)?,
                inv_t: self.wrapped(sn, "inv_t")?,
                dom_s: self.wrapped(sn, "dom_s")?,
            },
            "flatten" => Schema::Flatten {
                outer: self.envelope(sn.child("outer")?)?,
                inner: self.witnesses(sn)?,
                unit: self.opt_wrapped(sn, "unit")?,
            },
            "table" => Schema::Table { certs: sn.children.iter().map(|c| self.cert(c)).collect::<Result<_>>()? },
            other => return Err(sn.err(format!("unknown schema `{other}`"))),
        };
        if let Schema::Periodic { residues, .. } = &schema {
            if residues.is_empty() {
                return Err(sn.err("periodic schema needs at least one residue"));
            }
        }
        Ok(AsymptoticWitness {
            u: self.expr(n.child("u")?)?,
            x: self.expr(n.child("x")?)?,
            y: self.expr(n.child("y")?)?,
            envelope: self.envelope(n.child("envelope")?)?,
            schema,
        })
    }

    fn fraction(&self, n: &Node) -> Result<Fraction> {
        let (s, c) = n.payload()?;
        let (num, den) = parse_quotient_at(&self.p.generators, s, n.line, c)?;
        let den = den.unwrap_or_else(Expr::one);
        localization(self.p)?.fraction(num, den).map_err(|e| n.err(e.to_string()))
    }

    fn claim(&self, n: &Node) -> Result<Claim> {
        n.no_payload()?;
        match n.key.as_str() {
            "preorder" => Ok(Claim::Preorder(self.cert(n.only_child()?)?)),
            "asymptotic" => {
                n.check_keys(&["horizon", "witness"])?;
                Ok(Claim::Asymptotic { witness: self.witness(n.child("witness")?)?, horizon: self.num(n.child("horizon")?)? })
            }
            "extension" => {
                n.check_keys(&["a", "b", "relations", "triple", "inner"])?;
                let rn = n.child("relations")?;
                let relations = match rn.arg(0)? {
                    "finite" => RelationSet::Finite(rn.all("pair").map(|c| self.le(c)).collect::<Result<_>>()?),
                    "spectral" => {
                        let (mut gens, mut values) = (Vec::new(), Vec::new());
                        for v in rn.all("value") {
                            let name = v.arg(0)?;
                            let g = self.p.generator(name).ok_or_else(|| v.err(format!("undeclared name `{name}`")))?;
                            let (s, c) = v.payload()?;
                            gens.push(g);
                            values.push(parse_rational_at(s, v.line, c)?);
                        }
                        RelationSet::Spectral(RfSpec::new(self.p, gens, values).map_err(|e| rn.err(e.to_string()))?)
                    }
                    other => return Err(rn.err(format!("unknown relation set kind `{other}`"))),
                };
                let triples = n
                    .all("triple")
                    .map(|t| {
                        let (x, y) = self.le(t.child("pair")?)?;
                        Ok(Triple { s: self.expr(t.child("s")?)?, x, y })
                    })
                    .collect::<Result<_>>()?;
                let cert = ExtCertificate {
                    a: self.expr(n.child("a")?)?,
                    b: self.expr(n.child("b")?)?,
                    triples,
                    inner: self.wrapped(n, "inner")?,
                };
                Ok(Claim::Extension { relations, cert })
            }
            "membership" => {
                n.check_keys(&["element", "n", "lower", "upper"])?;
                let kind = kind_from(n.arg(0)?).ok_or_else(|| n.err("membership kind must be splus, sminus or sb"))?;
                Ok(Claim::Membership(MembershipCertificate {
                    kind,
                    element: self.expr(n.child("element")?)?,
                    n: self.num(n.child("n")?)?,
                    lower: self.opt_wrapped(n, "lower")?,
                    upper: self.opt_wrapped(n, "upper")?,
                }))
            }
            "localization" => {
                n.check_keys(&["a", "b", "r", "proof"])?;
                let a = self.fraction(n.child("a")?)?;
                let b = self.fraction(n.child("b")?)?;
                let rn = n.child("r")?;
                let r_exps = match &rn.payload {
                    Some((s, c)) => self.nums(rn, s, *c)?,
                    None => Vec::new(),
                };
                let t = MultSet::new(self.p.t_set.clone().unwrap_or_default())?;
                if r_exps.len() > t.gens().len() {
                    return Err(rn.err("more exponents than multiplicative set generators"));
                }
                let r = t.product(&r_exps);
                let pn = n.child("proof")?;
                let proof = match pn.arg(0)? {
                    "eq" => LocProof::Eq,
                    "le" => LocProof::Le(self.cert(pn.only_child()?)?),
                    other => return Err(pn.err(format!("unknown proof kind `{other}`"))),
                };
                Ok(Claim::Localization { a, b, cert: LocCertificate { r_exps, r, proof } })
            }
            other => Err(n.err(format!("unknown claim `{other}`"))),
        }
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    let start = lines
        .iter()
        .position(|(_, l)| {
            let t = l.split('#').next().unwrap_or("").trim();
            !t.is_empty()
        })
        .ok_or_else(|| perr(1, 1, "empty certificate file"))?;
    let (sl, first) = lines[start];
    if first.split('#').next().unwrap_or("").trim() != "presentation {" {
        return Err(perr(sl, 1, "certificate files start with `presentation {`"));
    }
    let end = lines[start + 1..]
        .iter()
        .position(|(_, l)| l.trim_end() == "}")
        .map(|i| start + 1 + i)
        .ok_or_else(|| perr(sl, 1, "unterminated presentation block"))?;
    let body: String = lines[start + 1..end].iter().map(|(_, l)| format!("{l}\n")).collect();
    let presentation = parse_presentation_at(&body, sl + 1)?;
    let roots = outline(&lines[end + 1..])?;
    let root = match roots.as_slice() {
        [r] => r,
        [] => return Err(perr(lines[end].0, 1, "missing claim after the presentation")),
        [_, extra, ..] => return Err(extra.err("only one claim per file")),
    };
    let claim = Reader { p: &presentation }.claim(root)?;
    Ok(Document { presentation, claim })
}
