//! Derivation trees for the preorder generated by a presentation, and the
//! replay checker that validates them without any search.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::presentation::Presentation;
use crate::spectrum::Hom;

/// One node of a derivation. Every node records its conclusion `lhs ≼ rhs`
/// in full so that replay never has to reconstruct intermediate terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Certificate {
    pub lhs: Expr,
    pub rhs: Expr,
    pub rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `x ≼ x`
    Refl,
    /// `0 ≼ 1`
    ZeroOne,
    /// A base relation of the presentation.
    Base(usize),
    /// `n ≼ m` for naturals `n ≤ m`.
    NatEmbed,
    /// From `a ≼ b` conclude `a + c ≼ b + c`.
    AddCong(Box<Certificate>, Expr),
    /// From `a ≼ b` conclude `a·c ≼ b·c`.
    MulCong(Box<Certificate>, Expr),
    /// From `a ≼ b` and `b ≼ c` conclude `a ≼ c`.
    Trans(Box<Certificate>, Box<Certificate>),
}

impl Certificate {
    pub fn refl(x: Expr) -> Self {
        Certificate { lhs: x.clone(), rhs: x, rule: Rule::Refl }
    }

    pub fn zero_one() -> Self {
        Certificate { lhs: Expr::zero(), rhs: Expr::one(), rule: Rule::ZeroOne }
    }

    pub fn base(p: &Presentation, i: usize) -> Result<Self> {
        let (l, r) = p.relations.get(i).ok_or(Error::RelationIndex(i))?;
        Ok(Certificate { lhs: l.clone(), rhs: r.clone(), rule: Rule::Base(i) })
    }

    pub fn nat(n: u64, m: u64) -> Self {
        Certificate { lhs: Expr::from(n), rhs: Expr::from(m), rule: Rule::NatEmbed }
    }

    pub fn add_cong(self, c: Expr) -> Self {
        if c.is_zero() {
            return self;
        }
        Certificate {
            lhs: &self.lhs + &c,
            rhs: &self.rhs + &c,
            rule: Rule::AddCong(Box::new(self), c),
        }
    }

    pub fn mul_cong(self, c: Expr) -> Self {
        if c.is_one() {
            return self;
        }
        Certificate {
            lhs: &self.lhs * &c,
            rhs: &self.rhs * &c,
            rule: Rule::MulCong(Box::new(self), c),
        }
    }

    /// Chains `self: a ≼ b` with `next: b ≼ c`. Mismatched middles are caught
    /// by [`replay`].
    pub fn trans(self, next: Certificate) -> Self {
        if matches!(self.rule, Rule::Refl) && self.lhs == next.lhs {
            return next;
        }
        if matches!(next.rule, Rule::Refl) && next.rhs == self.rhs {
            return self;
        }
        Certificate {
            lhs: self.lhs.clone(),
            rhs: next.rhs.clone(),
            rule: Rule::Trans(Box::new(self), Box::new(next)),
        }
    }

    /// `0 ≼ e`, i.e. `ZeroOne` scaled by `e`.
    pub fn zero_le(e: Expr) -> Self {
        if e.is_zero() {
            return Certificate::refl(Expr::zero());
        }
        Certificate::zero_one().mul_cong(e)
    }

    /// `x ≼ x + e`.
    pub fn weaken(x: Expr, e: Expr) -> Self {
        if e.is_zero() {
            return Certificate::refl(x);
        }
        Certificate::zero_le(e).add_cong(x)
    }

    /// From `a ≼ b` build `aⁿ ≼ bⁿ` by one congruence-and-chain step per power.
    pub fn power(&self, n: u32) -> Certificate {
        match n {
            0 => Certificate::refl(Expr::one()),
            1 => self.clone(),
            _ => {
                let prev = self.power(n - 1);
                // a^n = a·a^{n-1} ≼ b·a^{n-1} ≼ b·b^{n-1}
                let step1 = self.clone().mul_cong(self.lhs.pow(n - 1));
                let step2 = prev.mul_cong(self.rhs.clone());
                step1.trans(step2)
            }
        }
    }

    /// Adds a list of inequalities `aᵢ ≼ bᵢ` into `Σaᵢ ≼ Σbᵢ`.
    pub fn sum(parts: Vec<Certificate>) -> Certificate {
        let mut it = parts.into_iter();
        let Some(mut acc) = it.next() else {
            return Certificate::refl(Expr::zero());
        };
        for next in it {
            let a = next.lhs.clone();
            let upper = acc.rhs.clone();
            acc = acc.add_cong(a).trans(next.add_cong(upper));
        }
        acc
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + match &self.rule {
            Rule::AddCong(c, _) | Rule::MulCong(c, _) => c.size(),
            Rule::Trans(a, b) => a.size() + b.size(),
            _ => 0,
        }
    }

    /// Visits every node, children first.
    pub fn for_each_node<'a>(&'a self, f: &mut impl FnMut(&'a Certificate)) {
        match &self.rule {
            Rule::AddCong(c, _) | Rule::MulCong(c, _) => c.for_each_node(f),
            Rule::Trans(a, b) => {
                a.for_each_node(f);
                b.for_each_node(f);
            }
            _ => {}
        }
        f(self);
    }

    pub fn conclusion(&self) -> (&Expr, &Expr) {
        (&self.lhs, &self.rhs)
    }
}

fn mismatch(p: &Presentation, expected: (&Expr, &Expr), found: (&Expr, &Expr)) -> Error {
    Error::ConclusionMismatch {
        expected: format!("{} <= {}", p.show(expected.0), p.show(expected.1)),
        found: format!("{} <= {}", p.show(found.0), p.show(found.1)),
    }
}

/// Re-derives the conclusion of every node and checks it against the stored
/// one. Returns the root conclusion `(x, y)` meaning `x ≼ y`.
pub fn replay(p: &Presentation, c: &Certificate) -> Result<(Expr, Expr)> {
    let (lhs, rhs) = match &c.rule {
        Rule::Refl => (c.lhs.clone(), c.lhs.clone()),
        Rule::ZeroOne => (Expr::zero(), Expr::one()),
        Rule::Base(i) => p.relations.get(*i).cloned().ok_or(Error::RelationIndex(*i))?,
        Rule::NatEmbed => {
            let (Some(n), Some(m)) = (c.lhs.as_constant(), c.rhs.as_constant()) else {
                return Err(Error::InvalidRule("NatEmbed between non-constants".into()));
            };
            if n > m {
                return Err(Error::InvalidRule(format!("NatEmbed {n} <= {m}")));
            }
            (Expr::constant(n), Expr::constant(m))
        }
        Rule::AddCong(child, e) => {
            let (a, b) = replay(p, child)?;
            (&a + e, &b + e)
        }
        Rule::MulCong(child, e) => {
            let (a, b) = replay(p, child)?;
            (&a * e, &b * e)
        }
        Rule::Trans(first, second) => {
            let (a, b) = replay(p, first)?;
            let (b2, d) = replay(p, second)?;
            if b != b2 {
                return Err(Error::InvalidRule(format!(
                    "Trans middle terms differ: {} vs {}",
                    p.show(&b),
                    p.show(&b2)
                )));
            }
            (a, d)
        }
    };
    if lhs != c.lhs || rhs != c.rhs {
        return Err(mismatch(p, (&c.lhs, &c.rhs), (&lhs, &rhs)));
    }
    Ok((lhs, rhs))
}

/// Replays and checks the root conclusion equals `x ≼ y`.
pub fn replay_expect(p: &Presentation, c: &Certificate, x: &Expr, y: &Expr) -> Result<()> {
    let (a, b) = replay(p, c)?;
    if &a != x || &b != y {
        return Err(mismatch(p, (x, y), (&a, &b)));
    }
    Ok(())
}

/// Outcome of a budgeted order query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds(Certificate),
    /// A verified monotone homomorphism with `f(x) > f(y)` for the goal `x ≼ y`.
    Refuted(Hom),
    Unknown,
}

impl Verdict {
    pub fn is_holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Holds(c) => Some(c),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds(_) => "Holds",
            Verdict::Refuted(_) => "Refuted",
            Verdict::Unknown => "Unknown",
        }
    }
}

/// Decides `n ≼ m` in ℕ: a `NatEmbed` certificate or the trivial evaluation.
pub fn nat_compare(n: u64, m: u64) -> Verdict {
    if n <= m {
        Verdict::Holds(Certificate::nat(n, m))
    } else {
        Verdict::Refuted(Hom::new(Vec::new()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn inst_a() -> Presentation {
        let x = Expr::var(0);
        Presentation::new(["x"])
            .with_relation(Expr::one(), x.clone())
            .with_relation(x, Expr::constant(2u32))
    }

    #[test]
    fn replay_base_and_congruences() {
        let p = inst_a();
        let x = Expr::var(0);
        let b0 = Certificate::base(&p, 0).unwrap();
        assert_eq!(replay(&p, &b0).unwrap(), (Expr::one(), x.clone()));
        let b1 = Certificate::base(&p, 1).unwrap();
        let add = b1.clone().add_cong(Expr::one());
        assert_eq!(replay(&p, &add).unwrap(), (&x + &Expr::one(), Expr::constant(3u32)));
        let chain = b0.trans(b1);
        assert_eq!(replay(&p, &chain).unwrap(), (Expr::one(), Expr::constant(2u32)));
    }

    #[test]
    fn replay_rejects_bad_index_and_tampering() {
        let p = inst_a();
        let bad = Certificate { lhs: Expr::one(), rhs: Expr::one(), rule: Rule::Base(7) };
        assert_eq!(replay(&p, &bad), Err(Error::RelationIndex(7)));
        let mut c = Certificate::base(&p, 0).unwrap();
        c.rhs = Expr::constant(5u32);
        assert!(matches!(replay(&p, &c), Err(Error::ConclusionMismatch { .. })));
        let broken = Certificate::base(&p, 1).unwrap().trans(Certificate::base(&p, 0).unwrap());
        assert!(replay(&p, &broken).is_err());
    }

    #[test]
    fn nat_compare_cases() {
        assert!(nat_compare(2, 3).is_holds());
        assert!(nat_compare(3, 3).is_holds());
        assert!(nat_compare(4, 3).is_refuted());
        let p = Presentation::new(Vec::<String>::new());
        replay(&p, nat_compare(2, 3).certificate().unwrap()).unwrap();
    }

    #[test]
    fn power_and_sum() {
        let p = inst_a();
        let x = Expr::var(0);
        let b1 = Certificate::base(&p, 1).unwrap();
        for n in 0..6 {
            let c = b1.power(n);
            assert_eq!(replay(&p, &c).unwrap(), (x.pow(n), Expr::constant(2u32).pow(n)));
        }
        let s = Certificate::sum(vec![b1.clone(), Certificate::base(&p, 0).unwrap(), b1]);
        let (a, b) = replay(&p, &s).unwrap();
        assert_eq!(a, &(&x + &x) + &Expr::one());
        assert_eq!(b, &x + &Expr::constant(4u32));
    }
}
