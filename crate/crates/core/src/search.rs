//! Budgeted certificate search for the preorder generated by a presentation.
//!
//! Every derivation can be rearranged so that all `0 ≼ 1` steps come first:
//! `x ≼ x + e →* y` where the tail only rewrites `k·m·l` into `k·m·r` for base
//! relations `l ≼ r`. The complete search therefore runs breadth-first
//! *backwards* from `y`, undoing relation steps, and stops at the first state
//! that contains `x` as a sub-sum. A cheaper forward pass (rewrite `x`, weaken
//! at the end) runs first because it stays narrow when `x` is a monomial.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::cert::{Certificate, Verdict};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::presentation::Presentation;
use crate::spectrum::{self, SeparateConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Budget {
    /// Maximum number of relation rewrites in a derivation.
    pub nodes: u32,
    /// Maximum total degree of any intermediate expression.
    pub max_degree: u32,
    /// Maximum coefficient of any intermediate expression.
    pub max_coeff: u64,
    /// Cap on the number of distinct states explored.
    pub max_states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { nodes: 8, max_degree: 8, max_coeff: 64, max_states: 20_000 }
    }
}

impl Budget {
    pub fn new(nodes: u32, max_degree: u32, max_coeff: u64) -> Self {
        Budget { nodes, max_degree, max_coeff, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(Error::MalformedBudget("node limit is zero"));
        }
        if self.max_degree == 0 {
            return Err(Error::MalformedBudget("degree limit is zero"));
        }
        if self.max_coeff == 0 {
            return Err(Error::MalformedBudget("coefficient limit is zero"));
        }
        if self.max_states == 0 {
            return Err(Error::MalformedBudget("state limit is zero"));
        }
        Ok(())
    }

    /// Raises the degree limit to at least `d`.
    pub fn with_min_degree(mut self, d: u32) -> Self {
        self.max_degree = self.max_degree.max(d);
        self
    }
}

/// Forward step `from → to` with `from = rest + mult·l`, `to = rest + mult·r`.
struct Step {
    to: Expr,
    relation: usize,
    mult: Expr,
}

fn within(e: &Expr, b: &Budget) -> bool {
    e.degree() <= b.max_degree && e.max_coeff().to_u64().is_some_and(|c| c <= b.max_coeff)
}

/// States `s` with a single forward relation step `s → c`, sorted canonically.
fn predecessors(p: &Presentation, c: &Expr, b: &Budget) -> Vec<(Expr, usize, Expr)> {
    let mut out = Vec::new();
    for (i, (l, r)) in p.relations.iter().enumerate() {
        if r.is_zero() || l == r {
            continue;
        }
        let (lead, _) = r.terms().next().expect("nonzero");
        for (t, _) in c.terms() {
            let Some(m) = lead.quotient_of(t) else { continue };
            let mut kmax: Option<BigUint> = None;
            for (rm, rc) in r.terms() {
                let avail = c.coeff(&rm.mul(&m)) / rc;
                kmax = Some(match kmax {
                    Some(k) if k < avail => k,
                    _ => avail,
                });
            }
            let kmax = kmax.and_then(|k| k.to_u64()).unwrap_or(0).min(b.max_coeff);
            for k in 1..=kmax {
                let mult = Expr::term(m.clone(), k);
                let rest = c.checked_sub(&(&mult * r)).expect("k within availability");
                let pred = &rest + &(&mult * l);
                if within(&pred, b) {
                    out.push((pred, i, mult));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    out
}

/// States `s` reachable by a single forward relation step `c → s`, sorted
/// canonically. Relations with a constant left side only create terms and are
/// left to the backward search.
fn successors(p: &Presentation, c: &Expr, b: &Budget) -> Vec<(Expr, usize, Expr)> {
    let mut out = Vec::new();
    for (i, (l, r)) in p.relations.iter().enumerate() {
        if l.degree() == 0 || l == r {
            continue;
        }
        let (lead, _) = l.terms().next().expect("nonzero");
        for (t, _) in c.terms() {
            let Some(m) = lead.quotient_of(t) else { continue };
            let mut kmax: Option<BigUint> = None;
            for (lm, lc) in l.terms() {
                let avail = c.coeff(&lm.mul(&m)) / lc;
                kmax = Some(match kmax {
                    Some(k) if k < avail => k,
                    _ => avail,
                });
            }
            let kmax = kmax.and_then(|k| k.to_u64()).unwrap_or(0).min(b.max_coeff);
            for k in 1..=kmax {
                let mult = Expr::term(m.clone(), k);
                let rest = c.checked_sub(&(&mult * l)).expect("k within availability");
                let succ = &rest + &(&mult * r);
                if within(&succ, b) {
                    out.push((succ, i, mult));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    out
}

/// Forward pass: relation steps from `x` to some `z` with `z ⊆ y`, then `z ≼ y`
/// by weakening. Incomplete but narrow when `x` is small.
fn search_forward(p: &Presentation, x: &Expr, y: &Expr, b: &Budget, cap: usize) -> Option<Certificate> {
    let mut parent: HashMap<Expr, (Expr, usize, Expr)> = HashMap::new();
    let mut frontier = vec![x.clone()];
    for _ in 0..b.nodes {
        let mut next = Vec::new();
        for c in &frontier {
            for (succ, relation, mult) in successors(p, c, b) {
                if &succ == x || parent.contains_key(&succ) {
                    continue;
                }
                parent.insert(succ.clone(), (c.clone(), relation, mult));
                if y.contains(&succ) {
                    return Some(reconstruct_forward(p, x, y, succ, &parent));
                }
                if parent.len() >= cap {
                    return None;
                }
                next.push(succ);
            }
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

fn reconstruct_forward(
    p: &Presentation,
    x: &Expr,
    y: &Expr,
    end: Expr,
    parent: &HashMap<Expr, (Expr, usize, Expr)>,
) -> Certificate {
    let mut steps = Vec::new();
    let mut cur = end.clone();
    while &cur != x {
        let (from, relation, mult) = &parent[&cur];
        let (l, _) = &p.relations[*relation];
        let rest = from.checked_sub(&(mult * l)).expect("step applies");
        steps.push(
            Certificate::base(p, *relation)
                .expect("index from search")
                .mul_cong(mult.clone())
                .add_cong(rest),
        );
        cur = from.clone();
    }
    let mut cert = Certificate::refl(x.clone());
    for step in steps.into_iter().rev() {
        cert = cert.trans(step);
    }
    let extra = y.checked_sub(&end).expect("goal contains end state");
    cert.trans(Certificate::weaken(end, extra))
}

/// Searches for a certificate of `x ≼ y` within the budget: a capped forward
/// pass first, then the complete backward search.
pub fn search_certificate(p: &Presentation, x: &Expr, y: &Expr, b: &Budget) -> Option<Certificate> {
    if let Some(e) = y.checked_sub(x) {
        return Some(Certificate::weaken(x.clone(), e));
    }
    search_forward(p, x, y, b, b.max_states / 4).or_else(|| search_backward(p, x, y, b))
}

fn search_backward(p: &Presentation, x: &Expr, y: &Expr, b: &Budget) -> Option<Certificate> {
    let mut parent: HashMap<Expr, Step> = HashMap::new();
    let mut frontier = vec![y.clone()];
    for _ in 0..b.nodes {
        let mut next = Vec::new();
        for c in &frontier {
            for (pred, relation, mult) in predecessors(p, c, b) {
                if &pred == y || parent.contains_key(&pred) {
                    continue;
                }
                parent.insert(pred.clone(), Step { to: c.clone(), relation, mult });
                if pred.contains(x) {
                    return Some(reconstruct(p, x, y, pred, &parent));
                }
                if parent.len() >= b.max_states {
                    return None;
                }
                next.push(pred);
            }
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

fn reconstruct(p: &Presentation, x: &Expr, y: &Expr, start: Expr, parent: &HashMap<Expr, Step>) -> Certificate {
    let extra = start.checked_sub(x).expect("goal state contains x");
    let mut cert = Certificate::weaken(x.clone(), extra);
    let mut cur = start;
    while &cur != y {
        let step = &parent[&cur];
        let (l, _) = &p.relations[step.relation];
        let rest = cur.checked_sub(&(&step.mult * l)).expect("step applies");
        let one = Certificate::base(p, step.relation)
            .expect("index from search")
            .mul_cong(step.mult.clone())
            .add_cong(rest);
        cert = cert.trans(one);
        cur = step.to.clone();
    }
    cert
}

/// Decides `x ≼ y` within the budget: a replayable certificate, a verified
/// separating homomorphism from the attached family, or `Unknown`.
pub fn check_preorder(p: &Presentation, x: &Expr, y: &Expr, budget: &Budget) -> Result<Verdict> {
    budget.validate()?;
    if let Some(c) = search_certificate(p, x, y, budget) {
        return Ok(Verdict::Holds(c));
    }
    if let Some(fam) = &p.family {
        // f(y) < f(x) refutes x ≼ y.
        if let spectrum::Separation::Found(f) = spectrum::separate(p, fam, y, x, &SeparateConfig::default())? {
            return Ok(Verdict::Refuted(f));
        }
    }
    Ok(Verdict::Unknown)
}

/// Bounded check that ℕ embeds into the presentation: a verified point of the
/// attached family suffices; otherwise no certificate of `n+1 ≼ n` may exist
/// for `n < up_to`.
pub fn check_nat_embedding(p: &Presentation, budget: &Budget, up_to: u64) -> Result<()> {
    if let Some(fam) = &p.family {
        if fam.first_verified_point(p).is_some() {
            return Ok(());
        }
    }
    for n in 0..up_to {
        if search_certificate(p, &Expr::from(n + 1), &Expr::from(n), budget).is_some() {
            return Err(Error::Degenerate(format!("{} <= {} is derivable", n + 1, n)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::replay_expect;

    fn inst_a() -> Presentation {
        let x = Expr::var(0);
        Presentation::new(["x"])
            .with_relation(Expr::one(), x.clone())
            .with_relation(x, Expr::constant(2u32))
    }

    fn inst_c() -> Presentation {
        let x = Expr::var(0);
        let y = Expr::var(1);
        Presentation::new(["x", "y"])
            .with_relation(y.pow(2), x.pow(2))
            .with_relation(Expr::one(), y.clone())
            .with_relation(y, Expr::constant(2u32))
            .with_relation(Expr::one(), x.clone())
            .with_relation(x, Expr::constant(2u32))
    }

    #[test]
    fn base_relation_goal() {
        let p = inst_a();
        let x = Expr::var(0);
        let v = check_preorder(&p, &x, &Expr::constant(2u32), &Budget::default()).unwrap();
        let c = v.certificate().unwrap();
        assert_eq!(c.rule, crate::cert::Rule::Base(1));
    }

    #[test]
    fn one_step_mul_cong() {
        // One-step oracle: x² = x·x ≼ x·2, the base relation x ≼ 2 scaled by x.
        let p = inst_a();
        let x = Expr::var(0);
        let goal_rhs = &x + &x;
        let c = search_certificate(&p, &x.pow(2), &goal_rhs, &Budget::default()).unwrap();
        replay_expect(&p, &c, &x.pow(2), &goal_rhs).unwrap();
        let oracle = Certificate::base(&p, 1).unwrap().mul_cong(x.clone());
        assert_eq!(c, oracle);
    }

    #[test]
    fn inst_c_reverse_is_unknown() {
        let p = inst_c();
        let b = Budget { nodes: 8, ..Default::default() };
        let v = check_preorder(&p, &Expr::var(1), &Expr::var(0), &b).unwrap();
        assert_eq!(v, Verdict::Unknown);
    }

    #[test]
    fn large_constant_goal() {
        let g = Expr::var(0);
        let h = Expr::var(1);
        let p = Presentation::new(["g", "h"])
            .with_relation(Expr::one(), &g * &h)
            .with_relation(&g * &h, Expr::constant(2u32))
            .with_relation(h.clone(), Expr::constant(2u32));
        for (a, b) in [(0u32, 4u32), (1, 3), (2, 2), (3, 3)] {
            let m = &g.pow(a) * &h.pow(b);
            let n = Expr::constant(2u32).pow(b);
            let c = search_certificate(&p, &m, &n, &Budget::default()).unwrap();
            replay_expect(&p, &c, &m, &n).unwrap();
        }
    }

    #[test]
    fn zero_budget_rejected() {
        let p = inst_a();
        let b = Budget { nodes: 0, ..Default::default() };
        assert!(matches!(check_preorder(&p, &Expr::one(), &Expr::one(), &b), Err(Error::MalformedBudget(_))));
    }

    #[test]
    fn chained_goal_and_determinism() {
        let p = inst_a();
        let x = Expr::var(0);
        let lhs = x.pow(3);
        let rhs = Expr::constant(8u32);
        let b = Budget::default();
        let c1 = search_certificate(&p, &lhs, &rhs, &b).unwrap();
        let c2 = search_certificate(&p, &lhs, &rhs, &b).unwrap();
        assert_eq!(c1, c2);
        replay_expect(&p, &c1, &lhs, &rhs).unwrap();
    }
}
