//! Forcing a relation set `R` into the preorder: `a ≼_R b` iff for some triples
//! `(sᵢ, xᵢ, yᵢ)` with `(xᵢ, yᵢ) ∈ R`, `a + Σ sᵢyᵢ ≼ b + Σ sᵢxᵢ`.
//!
//! `R` is either a finite list or `R_f`, all pairs of a subsemiring on which a
//! given homomorphism is increasing.

use num_traits::Signed;

use crate::cert::{replay_expect, Certificate};
use crate::error::{Error, Result};
use crate::expr::{Expr, Monomial};
use crate::presentation::Presentation;
use crate::search::{search_certificate, Budget};
use crate::spectrum::{eval_at, Q};

/// A homomorphism on the subsemiring generated by some of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RfSpec {
    /// Generator indices spanning the subsemiring.
    pub gens: Vec<usize>,
    /// Values on `gens`, in the same order.
    pub values: Vec<Q>,
}

impl RfSpec {
    /// Checks nonnegativity and every base relation lying inside the subsemiring.
    pub fn new(p: &Presentation, gens: Vec<usize>, values: Vec<Q>) -> Result<Self> {
        if gens.len() != values.len() || gens.iter().any(|&g| g >= p.num_generators()) {
            return Err(Error::NotMonotone("values do not match the listed generators".into()));
        }
        if values.iter().any(Signed::is_negative) {
            return Err(Error::NotMonotone("negative generator value".into()));
        }
        let spec = RfSpec { gens, values };
        for (l, r) in &p.relations {
            if let (Some(fl), Some(fr)) = (spec.eval(l), spec.eval(r)) {
                if fl > fr {
                    return Err(Error::NotMonotone(format!("{} <= {}", p.show(l), p.show(r))));
                }
            }
        }
        Ok(spec)
    }

    /// `f(e)`, or `None` when `e` leaves the subsemiring.
    pub fn eval(&self, e: &Expr) -> Option<Q> {
        if !e.uses_only(|i| self.gens.contains(&i)) {
            return None;
        }
        let width = self.gens.iter().copied().max().map_or(0, |m| m + 1);
        let mut point = vec![Q::default(); width];
        for (&g, v) in self.gens.iter().zip(&self.values) {
            point[g] = v.clone();
        }
        eval_at(e, &point)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationSet {
    Finite(Vec<(Expr, Expr)>),
    Spectral(RfSpec),
}

impl RelationSet {
    pub fn empty() -> Self {
        RelationSet::Finite(Vec::new())
    }

    pub fn contains(&self, x: &Expr, y: &Expr) -> bool {
        match self {
            RelationSet::Finite(v) => v.iter().any(|(a, b)| a == x && b == y),
            RelationSet::Spectral(f) => matches!((f.eval(x), f.eval(y)), (Some(a), Some(b)) if a <= b),
        }
    }

    /// Candidate pairs for search: the list itself, or the comparable pairs of
    /// subsemiring elements with degree and coefficients within `cfg`.
    fn candidates(&self, cfg: &ExtConfig) -> Vec<(Expr, Expr)> {
        match self {
            RelationSet::Finite(v) => v.clone(),
            RelationSet::Spectral(f) => {
                let elems = subsemiring_elements(&f.gens, cfg.elem_degree, cfg.elem_coeff);
                let vals: Vec<Q> = elems.iter().map(|e| f.eval(e).expect("inside subsemiring")).collect();
                let mut out = Vec::new();
                for (i, x) in elems.iter().enumerate() {
                    for (j, y) in elems.iter().enumerate() {
                        if i != j && vals[i] <= vals[j] {
                            out.push((x.clone(), y.clone()));
                        }
                    }
                }
                out
            }
        }
    }
}

/// Nonzero sums `Σ c_m·m` over monomials in `gens` of degree `≤ degree` with
/// `c_m ≤ coeff`, in a deterministic order.
fn subsemiring_elements(gens: &[usize], degree: u32, coeff: u32) -> Vec<Expr> {
    let monos: Vec<Expr> = Monomial::enumerate(gens.len(), degree)
        .into_iter()
        .map(|m| {
            m.exps()
                .iter()
                .enumerate()
                .fold(Expr::one(), |acc, (i, &k)| &acc * &Expr::var(gens[i]).pow(k))
        })
        .collect();
    let mut out = vec![Expr::zero()];
    for m in &monos {
        let mut next = Vec::with_capacity(out.len() * (coeff as usize + 1));
        for e in &out {
            for c in 0..=coeff {
                next.push(e + &(m * &Expr::constant(c)));
            }
        }
        out = next;
    }
    out.retain(|e| !e.is_zero());
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub s: Expr,
    pub x: Expr,
    pub y: Expr,
}

/// `a ≼_R b` with the triples used and the base certificate of
/// `a + Σ sᵢyᵢ ≼ b + Σ sᵢxᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtCertificate {
    pub a: Expr,
    pub b: Expr,
    pub triples: Vec<Triple>,
    pub inner: Certificate,
}

fn sums(triples: &[Triple]) -> (Expr, Expr) {
    let sy = triples.iter().map(|t| &t.s * &t.y).sum();
    let sx = triples.iter().map(|t| &t.s * &t.x).sum();
    (sy, sx)
}

impl ExtCertificate {
    /// A base-preorder certificate, with no triples.
    pub fn from_base(c: Certificate) -> Self {
        ExtCertificate { a: c.lhs.clone(), b: c.rhs.clone(), triples: Vec::new(), inner: c }
    }

    /// `x ≼_R y` for `(x, y) ∈ R`, through `x + y ≼ y + x`.
    pub fn from_pair(x: Expr, y: Expr) -> Self {
        let both = &x + &y;
        ExtCertificate {
            a: x.clone(),
            b: y.clone(),
            triples: vec![Triple { s: Expr::one(), x, y }],
            inner: Certificate::refl(both),
        }
    }

    pub fn add(&self, z: &Expr) -> Self {
        ExtCertificate {
            a: &self.a + z,
            b: &self.b + z,
            triples: self.triples.clone(),
            inner: self.inner.clone().add_cong(z.clone()),
        }
    }

    pub fn mul(&self, z: &Expr) -> Self {
        ExtCertificate {
            a: &self.a * z,
            b: &self.b * z,
            triples: self
                .triples
                .iter()
                .map(|t| Triple { s: &t.s * z, x: t.x.clone(), y: t.y.clone() })
                .collect(),
            inner: self.inner.clone().mul_cong(z.clone()),
        }
    }

    /// `a ≼_R b` and `b ≼_R c` give `a ≼_R c`, merging the triple lists.
    pub fn trans(&self, next: &ExtCertificate) -> Result<Self> {
        if self.b != next.a {
            return Err(Error::InvalidRule("middle terms of chained extension certificates differ".into()));
        }
        let (_, sx1) = sums(&self.triples);
        let (sy2, _) = sums(&next.triples);
        let inner = self.inner.clone().add_cong(sy2).trans(next.inner.clone().add_cong(sx1));
        let mut triples = self.triples.clone();
        triples.extend(next.triples.iter().cloned());
        Ok(ExtCertificate { a: self.a.clone(), b: next.b.clone(), triples, inner })
    }

    /// The pairs of `R` this certificate relies on.
    pub fn support(&self) -> Vec<(Expr, Expr)> {
        let mut v: Vec<(Expr, Expr)> = Vec::new();
        for t in &self.triples {
            let pair = (t.x.clone(), t.y.clone());
            if !v.contains(&pair) {
                v.push(pair);
            }
        }
        v
    }
}

/// Checks every triple against `R` and the inner certificate against the
/// displayed inequality; returns `(a, b)`.
pub fn replay_ext(p: &Presentation, r: &RelationSet, ec: &ExtCertificate) -> Result<(Expr, Expr)> {
    for t in &ec.triples {
        if !r.contains(&t.x, &t.y) {
            return Err(Error::NotInRelation(format!("({}, {})", p.show(&t.x), p.show(&t.y))));
        }
    }
    let (sy, sx) = sums(&ec.triples);
    replay_expect(p, &ec.inner, &(&ec.a + &sy), &(&ec.b + &sx))?;
    Ok((ec.a.clone(), ec.b.clone()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtConfig {
    pub budget: Budget,
    /// Budget for the inner goal of each candidate triple.
    pub triple_budget: Budget,
    /// Degree bound for the multipliers `sᵢ`.
    pub s_degree: u32,
    /// Degree and coefficient bounds when enumerating pairs of `R_f`.
    pub elem_degree: u32,
    pub elem_coeff: u32,
}

impl Default for ExtConfig {
    fn default() -> Self {
        ExtConfig {
            budget: Budget::default(),
            triple_budget: Budget { max_states: 500, ..Budget::default() },
            s_degree: 1,
            elem_degree: 1,
            elem_coeff: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtVerdict {
    Holds(ExtCertificate),
    Unknown,
}

/// Searches `a ≼_R b`: first with no triples, then with one triple — first
/// those whose inner goal holds by weakening alone, then by bounded search.
pub fn check_ext(p: &Presentation, r: &RelationSet, a: &Expr, b: &Expr, cfg: &ExtConfig) -> Result<ExtVerdict> {
    cfg.budget.validate()?;
    cfg.triple_budget.validate()?;
    if let Some(c) = search_certificate(p, a, b, &cfg.budget) {
        return Ok(ExtVerdict::Holds(ExtCertificate::from_base(c)));
    }
    let pairs = r.candidates(cfg);
    let multipliers: Vec<Expr> =
        Monomial::enumerate(p.num_generators(), cfg.s_degree).into_iter().map(Expr::monomial).collect();
    let goal = |s: &Expr, x: &Expr, y: &Expr| (a + &(s * y), b + &(s * x));
    for (x, y) in &pairs {
        for s in &multipliers {
            let (l, rr) = goal(s, x, y);
            if let Some(e) = rr.checked_sub(&l) {
                let inner = Certificate::weaken(l, e);
                let ec = ExtCertificate { a: a.clone(), b: b.clone(), triples: vec![Triple { s: s.clone(), x: x.clone(), y: y.clone() }], inner };
                return Ok(ExtVerdict::Holds(ec));
            }
        }
    }
    for (x, y) in &pairs {
        for s in &multipliers {
            let (l, rr) = goal(s, x, y);
            let bd = cfg.triple_budget.with_min_degree(l.degree().max(rr.degree()));
            if let Some(inner) = search_certificate(p, &l, &rr, &bd) {
                let ec = ExtCertificate { a: a.clone(), b: b.clone(), triples: vec![Triple { s: s.clone(), x: x.clone(), y: y.clone() }], inner };
                return Ok(ExtVerdict::Holds(ec));
            }
        }
    }
    Ok(ExtVerdict::Unknown)
}

/// A certificate for `(≼_{R₁})_{R₂}`: outer triples from `R₂` around an
/// `R₁`-certificate of `a + Σ sᵢyᵢ ≼_{R₁} b + Σ sᵢxᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedExtCertificate {
    pub a: Expr,
    pub b: Expr,
    pub outer: Vec<Triple>,
    pub inner: ExtCertificate,
}

pub fn replay_nested(p: &Presentation, r1: &RelationSet, r2: &RelationSet, nc: &NestedExtCertificate) -> Result<(Expr, Expr)> {
    for t in &nc.outer {
        if !r2.contains(&t.x, &t.y) {
            return Err(Error::NotInRelation(format!("({}, {})", p.show(&t.x), p.show(&t.y))));
        }
    }
    let (sy, sx) = sums(&nc.outer);
    let (ia, ib) = replay_ext(p, r1, &nc.inner)?;
    if ia != &nc.a + &sy || ib != &nc.b + &sx {
        return Err(Error::ConclusionMismatch {
            expected: format!("{} <= {}", p.show(&(&nc.a + &sy)), p.show(&(&nc.b + &sx))),
            found: format!("{} <= {}", p.show(&ia), p.show(&ib)),
        });
    }
    Ok((nc.a.clone(), nc.b.clone()))
}

/// Regroups a `R₁ ∪ R₂` certificate: triples from `R₂` move outside.
pub fn split_union(ec: &ExtCertificate, r2: &RelationSet) -> NestedExtCertificate {
    let (outer, inner_triples): (Vec<Triple>, Vec<Triple>) = ec.triples.iter().cloned().partition(|t| r2.contains(&t.x, &t.y));
    let (sy, sx) = sums(&outer);
    NestedExtCertificate {
        a: ec.a.clone(),
        b: ec.b.clone(),
        outer,
        inner: ExtCertificate { a: &ec.a + &sy, b: &ec.b + &sx, triples: inner_triples, inner: ec.inner.clone() },
    }
}

/// Flattens a nested certificate into one for `R₁ ∪ R₂`.
pub fn merge_nested(nc: &NestedExtCertificate) -> ExtCertificate {
    let mut triples = nc.inner.triples.clone();
    triples.extend(nc.outer.iter().cloned());
    ExtCertificate { a: nc.a.clone(), b: nc.b.clone(), triples, inner: nc.inner.inner.clone() }
}

pub fn union(r1: &[(Expr, Expr)], r2: &[(Expr, Expr)]) -> RelationSet {
    let mut v = r1.to_vec();
    for pair in r2 {
        if !v.contains(pair) {
            v.push(pair.clone());
        }
    }
    RelationSet::Finite(v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnionEntry {
    pub a: Expr,
    pub b: Expr,
    pub union_holds: bool,
    pub nested_holds: bool,
    /// Both conversions replayed for every certificate found.
    pub converted: bool,
}

impl UnionEntry {
    pub fn consistent(&self) -> bool {
        self.union_holds == self.nested_holds && self.converted
    }
}

/// Searches each goal under `≼_{R₁∪R₂}` and under `(≼_{R₁})_{R₂}` (at most one
/// outer triple), converting every certificate found to the other side.
pub fn union_factorization_check(
    p: &Presentation,
    r1: &[(Expr, Expr)],
    r2: &[(Expr, Expr)],
    goals: &[(Expr, Expr)],
    cfg: &ExtConfig,
) -> Result<Vec<UnionEntry>> {
    let ru = union(r1, r2);
    let (s1, s2) = (RelationSet::Finite(r1.to_vec()), RelationSet::Finite(r2.to_vec()));
    let multipliers: Vec<Expr> =
        Monomial::enumerate(p.num_generators(), cfg.s_degree).into_iter().map(Expr::monomial).collect();
    let mut out = Vec::with_capacity(goals.len());
    for (a, b) in goals {
        let mut converted = true;
        let union_cert = match check_ext(p, &ru, a, b, cfg)? {
            ExtVerdict::Holds(ec) => Some(ec),
            ExtVerdict::Unknown => None,
        };
        if let Some(ec) = &union_cert {
            converted &= replay_nested(p, &s1, &s2, &split_union(ec, &s2)).is_ok();
        }
        // (≼_{R₁})_{R₂} directly: no outer triple, then one.
        let mut nested = None;
        let mut options: Vec<Vec<Triple>> = vec![Vec::new()];
        for (x, y) in r2 {
            for s in &multipliers {
                options.push(vec![Triple { s: s.clone(), x: x.clone(), y: y.clone() }]);
            }
        }
        for outer in options {
            let (sy, sx) = sums(&outer);
            if let ExtVerdict::Holds(inner) = check_ext(p, &s1, &(a + &sy), &(b + &sx), cfg)? {
                nested = Some(NestedExtCertificate { a: a.clone(), b: b.clone(), outer, inner });
                break;
            }
        }
        if let Some(nc) = &nested {
            converted &= replay_nested(p, &s1, &s2, nc).is_ok() && replay_ext(p, &ru, &merge_nested(nc)).is_ok();
        }
        out.push(UnionEntry { a: a.clone(), b: b.clone(), union_holds: union_cert.is_some(), nested_holds: nested.is_some(), converted });
    }
    Ok(out)
}

/// Restricts `R` to the pairs a certificate uses and replays it there.
pub fn restrict_support(p: &Presentation, ec: &ExtCertificate) -> Result<RelationSet> {
    let r = RelationSet::Finite(ec.support());
    replay_ext(p, &r, ec)?;
    Ok(r)
}

/// From `base: a + s·y ≼_{R₁} b + s·x`, the level-`n` certificate of
/// `a·Σ_{m≤n} xᵐyⁿ⁻ᵐ + s·yⁿ⁺¹ ≼_{R₁} b·Σ_{m≤n} xᵐyⁿ⁻ᵐ + s·xⁿ⁺¹`, built with
/// two congruence steps and one chaining step per level.
#[allow(clippy::too_many_arguments)]
pub fn telescoping(
    p: &Presentation,
    r1: &RelationSet,
    x: &Expr,
    y: &Expr,
    a: &Expr,
    b: &Expr,
    s: &Expr,
    base: &ExtCertificate,
    n: u32,
) -> Result<ExtCertificate> {
    let (ba, bb) = replay_ext(p, r1, base)?;
    if ba != a + &(s * y) || bb != b + &(s * x) {
        return Err(Error::ConclusionMismatch {
            expected: format!("{} <= {}", p.show(&(a + &(s * y))), p.show(&(b + &(s * x)))),
            found: format!("{} <= {}", p.show(&ba), p.show(&bb)),
        });
    }
    let geometric = |n: u32| -> Expr { (0..=n).map(|m| &x.pow(m) * &y.pow(n - m)).sum() };
    let mut cur = base.clone();
    for level in 1..=n {
        // a·xⁿ + y·[level n-1]  ≼  a·xⁿ + y·[b·Σ + s·xⁿ]
        let step1 = cur.mul(y).add(&(a * &x.pow(level)));
        // xⁿ·(a + s·y) + b·Σ_{m<n} xᵐyⁿ⁻ᵐ  ≼  xⁿ·(b + s·x) + b·Σ_{m<n} xᵐyⁿ⁻ᵐ
        let rest = b * &geometric(level).checked_sub(&x.pow(level)).expect("xⁿ is a summand");
        let step2 = base.mul(&x.pow(level)).add(&rest);
        cur = step1.trans(&step2)?;
    }
    Ok(cur)
}
