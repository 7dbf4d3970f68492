//! Certified reports for the two sufficient conditions for spectral duality,
//! optionally routed through a localization at a multiplicative set `T`.
//!
//! * M1: each sampled `s ≠ 0` has `m ∈ M`, `t₁, t₂ ∈ T`, `n` with
//!   `t₂ ≼ n·m·t₁·s` and `m·t₁·s ≼ n·t₂`.
//! * M2: for each enumerated `m ∈ M`, `ev_m·ev_{t₁}/ev_{t₂}` is bounded over the
//!   family, and then `m·t₁ ≼ n·t₂` is certified.
//!
//! With `T = {1}` both reduce to the unlocalized conditions and produce the
//! same report text.

use std::fmt::Write as _;

use num_traits::{ToPrimitive, Zero};

use super::family::{boundedness, Boundedness, SeparateConfig};
use super::{Hom, Q};
use crate::cert::Certificate;
use crate::error::{Error, Result};
use crate::expr::{Expr, Monomial};
use crate::presentation::{MonomialSet, Presentation};
use crate::search::{search_certificate, Budget};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionConfig {
    pub m_degree: u32,
    pub t_degree: u32,
    pub n_bound: u64,
    pub budget: Budget,
    pub separate: SeparateConfig,
}

impl Default for ConditionConfig {
    fn default() -> Self {
        ConditionConfig { m_degree: 4, t_degree: 1, n_bound: 16, budget: Budget::default(), separate: SeparateConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct M1Witness {
    pub m: Monomial,
    pub t1: Expr,
    pub t2: Expr,
    pub n: u64,
    /// `t₂ ≼ n·m·t₁·s`
    pub lower: Certificate,
    /// `m·t₁·s ≼ n·t₂`
    pub upper: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct M1Entry {
    pub sample: Expr,
    pub witness: Option<M1Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct M1Report {
    pub entries: Vec<M1Entry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum M2Status {
    /// Supremum over the family and, when found, `n` with `m·t₁ ≼ n·t₂`.
    Bounded { sup: Q, certified: Option<(u64, Certificate)> },
    /// Maximizers under widening truncations with strictly growing values.
    Unbounded { sequence: Vec<(Vec<Q>, Q)> },
    Inconclusive { sups: Vec<Q> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct M2Entry {
    pub m: Monomial,
    pub t1: Expr,
    pub t2: Expr,
    pub status: M2Status,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct M2Report {
    pub entries: Vec<M2Entry>,
}

/// `1` followed by every product of the generators of total exponent `≤ degree`.
fn t_products(t_gens: &[Expr], degree: u32) -> Vec<Expr> {
    if t_gens.is_empty() {
        return vec![Expr::one()];
    }
    let mut out: Vec<Expr> = Monomial::enumerate(t_gens.len(), degree)
        .into_iter()
        .map(|m| {
            m.exps()
                .iter()
                .enumerate()
                .fold(Expr::one(), |acc, (i, &k)| &acc * &t_gens[i].pow(k))
        })
        .collect();
    out.dedup();
    out
}

fn ceil_u64(v: &Q) -> Option<u64> {
    v.ceil().to_integer().to_u64()
}

/// `⌈max f(a)/f(b), f(b)/f(a)⌉` over the sample, `None` when either vanishes.
fn ratio_bound(points: &[Hom], a: &Expr, b: &Expr) -> Option<u64> {
    let mut worst = Q::from_integer(1.into());
    for f in points {
        let (fa, fb) = (f.eval(a).ok()?, f.eval(b).ok()?);
        if fa.is_zero() || fb.is_zero() {
            return None;
        }
        let r = if fa > fb { fa / fb } else { fb / fa };
        if r > worst {
            worst = r;
        }
    }
    ceil_u64(&worst)
}

fn try_m1(p: &Presentation, a: &Expr, t2: &Expr, n_try: &[u64], b: &Budget) -> Option<(u64, Certificate, Certificate)> {
    n_try.iter().find_map(|&n| {
        let ne = Expr::from(n);
        let lower = search_certificate(p, t2, &(&ne * a), b)?;
        let upper = search_certificate(p, a, &(&ne * t2), b)?;
        Some((n, lower, upper))
    })
}

pub fn check_m1(p: &Presentation, m_set: &MonomialSet, samples: &[Expr], cfg: &ConditionConfig) -> Result<M1Report> {
    check_m1_prime(p, m_set, &[], samples, cfg)
}

pub fn check_m1_prime(
    p: &Presentation,
    m_set: &MonomialSet,
    t_gens: &[Expr],
    samples: &[Expr],
    cfg: &ConditionConfig,
) -> Result<M1Report> {
    cfg.budget.validate()?;
    let ms = m_set.enumerate(p.num_generators(), cfg.m_degree);
    let ts = t_products(t_gens, cfg.t_degree);
    let points = match &p.family {
        Some(fam) => Some(fam.sample_homs(&cfg.separate)?),
        None => None,
    };
    let mut entries = Vec::with_capacity(samples.len());
    for s in samples {
        if s.is_zero() {
            return Err(Error::ZeroElement("M1 sample"));
        }
        let mut witness = None;
        'search: for m in &ms {
            for t1 in &ts {
                for t2 in &ts {
                    let a = &(&Expr::monomial(m.clone()) * t1) * s;
                    let n_try: Vec<u64> = match &points {
                        Some(pts) => match ratio_bound(pts, &a, t2) {
                            Some(n0) if n0 <= cfg.n_bound => {
                                let n1 = n0.next_power_of_two().min(cfg.n_bound);
                                if n1 == n0 { vec![n0] } else { vec![n0, n1] }
                            }
                            _ => continue,
                        },
                        None => (1..=cfg.n_bound).collect(),
                    };
                    let b = cfg.budget.with_min_degree(a.degree().max(t2.degree()));
                    if let Some((n, lower, upper)) = try_m1(p, &a, t2, &n_try, &b) {
                        witness = Some(M1Witness { m: m.clone(), t1: t1.clone(), t2: t2.clone(), n, lower, upper });
                        break 'search;
                    }
                }
            }
        }
        entries.push(M1Entry { sample: s.clone(), witness });
    }
    Ok(M1Report { entries })
}

pub fn check_m2(p: &Presentation, m_set: &MonomialSet, cfg: &ConditionConfig) -> Result<M2Report> {
    check_m2_prime(p, m_set, &[], cfg)
}

pub fn check_m2_prime(p: &Presentation, m_set: &MonomialSet, t_gens: &[Expr], cfg: &ConditionConfig) -> Result<M2Report> {
    cfg.budget.validate()?;
    let fam = p.family.as_ref().ok_or_else(|| Error::MissingCoverage("M2 evidence (no family attached)".into()))?;
    let ts = t_products(t_gens, cfg.t_degree);
    let mut entries = Vec::new();
    for m in m_set.enumerate(p.num_generators(), cfg.m_degree) {
        for t1 in &ts {
            for t2 in &ts {
                let mt = &Expr::monomial(m.clone()) * t1;
                let objective = |f: &Hom| {
                    let d = f.eval(t2).ok()?;
                    if d.is_zero() {
                        return None;
                    }
                    Some(f.eval(&mt).ok()? / d)
                };
                let status = match boundedness(fam, &objective, &cfg.separate)? {
                    Boundedness::Bounded { sup, .. } => {
                        let b = cfg.budget.with_min_degree(mt.degree().max(t2.degree()));
                        let certified = ceil_u64(&sup).and_then(|n| {
                            search_certificate(p, &mt, &(&Expr::from(n) * t2), &b).map(|c| (n, c))
                        });
                        M2Status::Bounded { sup, certified }
                    }
                    Boundedness::Unbounded { sequence } => M2Status::Unbounded { sequence },
                    Boundedness::Inconclusive { sups } => M2Status::Inconclusive { sups },
                };
                entries.push(M2Entry { m: m.clone(), t1: t1.clone(), t2: t2.clone(), status });
            }
        }
    }
    Ok(M2Report { entries })
}

fn show_point(p: &Presentation, pt: &[Q]) -> String {
    let names: Vec<String> = match &p.family {
        Some(fam) => fam.params.iter().map(|q| q.name.clone()).collect(),
        None => (0..pt.len()).map(|i| format!("p{i}")).collect(),
    };
    let parts: Vec<String> = names.iter().zip(pt).map(|(n, v)| format!("{n} = {v}")).collect();
    format!("({})", parts.join(", "))
}

impl M1Report {
    pub fn all_verified(&self) -> bool {
        self.entries.iter().all(|e| e.witness.is_some())
    }

    pub fn render(&self, p: &Presentation) -> String {
        let mut out = String::from("M1 report\n");
        for e in &self.entries {
            let _ = match &e.witness {
                Some(w) => writeln!(
                    out,
                    "s = {}: m = {}, t1 = {}, t2 = {}, n = {}",
                    p.show(&e.sample),
                    p.show(&Expr::monomial(w.m.clone())),
                    p.show(&w.t1),
                    p.show(&w.t2),
                    w.n
                ),
                None => writeln!(out, "s = {}: none found", p.show(&e.sample)),
            };
        }
        let ok = self.entries.iter().filter(|e| e.witness.is_some()).count();
        let _ = writeln!(out, "verified {ok} of {}", self.entries.len());
        out
    }
}

impl M2Report {
    pub fn render(&self, p: &Presentation) -> String {
        let mut out = String::from("M2 report\n");
        for e in &self.entries {
            let head = format!(
                "m = {}, t1 = {}, t2 = {}",
                p.show(&Expr::monomial(e.m.clone())),
                p.show(&e.t1),
                p.show(&e.t2)
            );
            let _ = match &e.status {
                M2Status::Bounded { sup, certified: Some((n, _)) } => {
                    writeln!(out, "{head}: bounded, sup = {sup}, certified m*t1 <= {n}*t2")
                }
                M2Status::Bounded { sup, certified: None } => {
                    writeln!(out, "{head}: bounded, sup = {sup}, no certificate found")
                }
                M2Status::Unbounded { sequence } => {
                    let seq: Vec<String> =
                        sequence.iter().map(|(pt, v)| format!("{v} at {}", show_point(p, pt))).collect();
                    writeln!(out, "{head}: unbounded, {}", seq.join("; "))
                }
                M2Status::Inconclusive { sups } => {
                    let s: Vec<String> = sups.iter().map(ToString::to_string).collect();
                    writeln!(out, "{head}: inconclusive, sups [{}]", s.join(", "))
                }
            };
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{q, q_int, Bound, HomFamily, Param, ParamConstraint, RatFun};

    fn inst_d() -> Presentation {
        let g = Expr::var(0);
        let h = Expr::var(1);
        let gh = &g * &h;
        let mut p = Presentation::new(["g", "h"])
            .with_relation(Expr::one(), gh.clone())
            .with_relation(gh, Expr::constant(2u32))
            .with_relation(h, Expr::constant(2u32));
        let ab = &Expr::var(0) * &Expr::var(1);
        p.family = Some(HomFamily {
            params: vec![
                Param { name: "a".into(), lo: Bound::Closed(q(1, 2)), hi: Bound::Infinite },
                Param { name: "b".into(), lo: Bound::Open(q_int(0)), hi: Bound::Closed(q_int(2)) },
            ],
            constraints: vec![
                ParamConstraint { lhs: Expr::one(), rhs: ab.clone() },
                ParamConstraint { lhs: ab, rhs: Expr::constant(2u32) },
            ],
            values: vec![RatFun::poly(Expr::var(0)), RatFun::poly(Expr::var(1))],
        });
        p
    }

    #[test]
    fn m1_square_sample() {
        let p = inst_d();
        let s = &Expr::var(0).pow(2) * &Expr::var(1);
        let all = MonomialSet::Where(vec![]);
        let r = check_m1(&p, &all, &[s], &ConditionConfig::default()).unwrap();
        let w = r.entries[0].witness.as_ref().unwrap();
        assert_eq!(w.m, Monomial::var(1));
        assert_eq!(w.n, 4);
    }

    #[test]
    fn m1_localized_sample() {
        let p = inst_d();
        let powers_of_g = MonomialSet::Where(vec![crate::presentation::ExponentConstraint {
            lhs: vec![],
            lhs_const: 0,
            rhs: vec![1],
            rhs_const: 0,
        }]);
        let h = Expr::var(1);
        let r = check_m1_prime(&p, &powers_of_g, &[h.clone()], &[Expr::var(0)], &ConditionConfig::default()).unwrap();
        let w = r.entries[0].witness.as_ref().unwrap();
        assert_eq!((w.m.clone(), w.t1.clone(), w.t2.clone(), w.n), (Monomial::one(), h, Expr::one(), 2));
    }

    #[test]
    fn trivial_t_matches() {
        let p = inst_d();
        let all = MonomialSet::Where(vec![]);
        let cfg = ConditionConfig { m_degree: 2, ..Default::default() };
        let samples = [Expr::var(0), Expr::var(1)];
        let a = check_m1(&p, &all, &samples, &cfg).unwrap().render(&p);
        let b = check_m1_prime(&p, &all, &[], &samples, &cfg).unwrap().render(&p);
        assert_eq!(a, b);
    }

    #[test]
    fn m2_bounded_entry() {
        let p = inst_d();
        let m = Monomial::from_exps(vec![1, 2]);
        let r = check_m2(&p, &MonomialSet::List(vec![m]), &ConditionConfig::default()).unwrap();
        match &r.entries[0].status {
            M2Status::Bounded { sup, certified: Some((n, _)) } => {
                assert_eq!(sup, &q_int(4));
                assert_eq!(*n, 4);
            }
            other => panic!("{other:?}"),
        }
    }
}
