//! Localization `T⁻¹S` at a finitely generated multiplicative set `T`.
//!
//! `a = s_a/t_a ≼ b = s_b/t_b` iff some `r ∈ T` has `r·s_a·t_b ≼ r·s_b·t_a`.
//! Fractions keep their representatives; equality is always decided through
//! an explicit `r`.

use std::fmt;

use num_traits::Zero;

use crate::asymptotic::{cancel_factor, check_power_universal, flatten, AsymptoticWitness, DoubledWitness, Envelope, PowerUniversalWitness};
use crate::cert::{replay_expect, Certificate};
use crate::error::{Error, Result};
use crate::expr::{Expr, Monomial};
use crate::presentation::Presentation;
use crate::search::{search_certificate, Budget};
use crate::spectrum::{verify_hom, Hom, SeparateConfig};

/// The multiplicative set generated by finitely many nonzero elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultSet {
    gens: Vec<Expr>,
}

impl MultSet {
    pub fn new(gens: Vec<Expr>) -> Result<Self> {
        if gens.iter().any(Expr::is_zero) {
            return Err(Error::ZeroElement("multiplicative set generator"));
        }
        Ok(MultSet { gens })
    }

    pub fn trivial() -> Self {
        MultSet { gens: Vec::new() }
    }

    pub fn gens(&self) -> &[Expr] {
        &self.gens
    }

    pub fn product(&self, exps: &[u32]) -> Expr {
        exps.iter()
            .zip(&self.gens)
            .fold(Expr::one(), |acc, (&k, g)| &acc * &g.pow(k))
    }

    /// Members as exponent vectors, by total degree then lexicographically.
    pub fn products(&self, max_degree: u32) -> Vec<(Vec<u32>, Expr)> {
        Monomial::enumerate(self.gens.len(), max_degree)
            .into_iter()
            .map(|m| {
                let mut e = m.exps().to_vec();
                e.resize(self.gens.len(), 0);
                let v = self.product(&e);
                (e, v)
            })
            .collect()
    }

    /// An exponent vector whose product is `t`, searching total degree up to `max_degree`.
    pub fn decompose(&self, t: &Expr, max_degree: u32) -> Option<Vec<u32>> {
        self.products(max_degree).into_iter().find(|(_, v)| v == t).map(|(e, _)| e)
    }
}

fn add_exps(a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub num: Expr,
    pub den: Expr,
    /// `den` as a product of the generators of `T`.
    pub den_exps: Vec<u32>,
}

impl Fraction {
    pub fn show<'a>(&'a self, p: &'a Presentation) -> impl fmt::Display + 'a {
        FractionDisplay(self, p)
    }
}

struct FractionDisplay<'a>(&'a Fraction, &'a Presentation);

impl fmt::Display for FractionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &Expr| {
            let s = self.1.show(e);
            if e.num_terms() > 1 { format!("({s})") } else { s }
        };
        write!(f, "{}/{}", wrap(&self.0.num), wrap(&self.0.den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocProof {
    /// `r·s_a·t_b ≼ r·s_b·t_a`
    Le(Certificate),
    /// `r·s_a·t_b = r·s_b·t_a` in canonical form.
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocCertificate {
    pub r_exps: Vec<u32>,
    pub r: Expr,
    pub proof: LocProof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocVerdict {
    Holds(LocCertificate),
    /// A verified point, positive on `T`, separating the fractions.
    Refuted(Hom),
    Unknown,
}

impl LocVerdict {
    pub fn label(&self, eq: bool) -> &'static str {
        match (self, eq) {
            (LocVerdict::Holds(_), true) => "Equal",
            (LocVerdict::Holds(_), false) => "Holds",
            (LocVerdict::Refuted(_), true) => "NotEqual",
            (LocVerdict::Refuted(_), false) => "Refuted",
            (LocVerdict::Unknown, _) => "Unknown",
        }
    }
}

/// A presentation together with a multiplicative set and search limits.
#[derive(Clone, Debug)]
pub struct Localization<'a> {
    pub p: &'a Presentation,
    pub t: MultSet,
    /// Maximum total degree of `r` (and of denominators when decomposing).
    pub r_degree: u32,
    pub budget: Budget,
}

impl<'a> Localization<'a> {
    pub fn new(p: &'a Presentation, t: MultSet) -> Self {
        Localization { p, t, r_degree: 3, budget: Budget::default() }
    }

    pub fn fraction(&self, num: Expr, den: Expr) -> Result<Fraction> {
        let den_exps = self
            .t
            .decompose(&den, self.r_degree.max(den.degree()).max(8))
            .ok_or_else(|| Error::NotInMultSet(self.p.show(&den)))?;
        Ok(Fraction { num, den, den_exps })
    }

    /// The canonical map `s ↦ s/1`.
    pub fn canonical(&self, s: Expr) -> Fraction {
        Fraction { num: s, den: Expr::one(), den_exps: vec![0; self.t.gens.len()] }
    }

    pub fn add(&self, a: &Fraction, b: &Fraction) -> Fraction {
        Fraction {
            num: &(&a.num * &b.den) + &(&b.num * &a.den),
            den: &a.den * &b.den,
            den_exps: add_exps(&a.den_exps, &b.den_exps),
        }
    }

    pub fn mul(&self, a: &Fraction, b: &Fraction) -> Fraction {
        Fraction { num: &a.num * &b.num, den: &a.den * &b.den, den_exps: add_exps(&a.den_exps, &b.den_exps) }
    }

    pub fn pow(&self, a: &Fraction, n: u32) -> Fraction {
        Fraction { num: a.num.pow(n), den: a.den.pow(n), den_exps: a.den_exps.iter().map(|k| k * n).collect() }
    }

    /// `(r·s_a·t_b, r·s_b·t_a)`
    fn sides(a: &Fraction, b: &Fraction, r: &Expr) -> (Expr, Expr) {
        (&(r * &a.num) * &b.den, &(r * &b.num) * &a.den)
    }

    fn check_member(&self, exps: &[u32], v: &Expr) -> Result<()> {
        if exps.len() > self.t.gens.len() || &self.t.product(exps) != v {
            return Err(Error::NotInMultSet(self.p.show(v)));
        }
        Ok(())
    }

    pub fn replay(&self, lc: &LocCertificate, a: &Fraction, b: &Fraction) -> Result<()> {
        self.check_member(&lc.r_exps, &lc.r)?;
        self.check_member(&a.den_exps, &a.den)?;
        self.check_member(&b.den_exps, &b.den)?;
        let (l, r) = Self::sides(a, b, &lc.r);
        match &lc.proof {
            LocProof::Le(c) => replay_expect(self.p, c, &l, &r),
            LocProof::Eq if l == r => Ok(()),
            LocProof::Eq => Err(Error::ConclusionMismatch {
                expected: format!("{} = {}", self.p.show(&l), self.p.show(&r)),
                found: "distinct canonical forms".into(),
            }),
        }
    }

    /// Points from the attached family (or the unique point of ℕ) that are
    /// verified and positive on the given denominators.
    fn test_points(&self, dens: &[&Expr]) -> Result<Vec<Hom>> {
        let mut pts = Vec::new();
        if self.p.num_generators() == 0 {
            pts.push(Hom::new(Vec::new()));
        } else if let Some(fam) = &self.p.family {
            pts = fam.sample_homs(&SeparateConfig::default())?;
        }
        Ok(pts
            .into_iter()
            .filter(|f| verify_hom(self.p, f))
            .filter(|f| dens.iter().all(|d| f.eval(d).is_ok_and(|v| !v.is_zero())))
            .collect())
    }

    pub fn frac_eq(&self, a: &Fraction, b: &Fraction) -> Result<LocVerdict> {
        for (exps, r) in self.t.products(self.r_degree) {
            let (l, rr) = Self::sides(a, b, &r);
            if l == rr {
                return Ok(LocVerdict::Holds(LocCertificate { r_exps: exps, r, proof: LocProof::Eq }));
            }
        }
        for f in self.test_points(&[&a.den, &b.den])? {
            let (l, r) = Self::sides(a, b, &Expr::one());
            if f.eval(&l)? != f.eval(&r)? {
                return Ok(LocVerdict::Refuted(f));
            }
        }
        Ok(LocVerdict::Unknown)
    }

    pub fn frac_le(&self, a: &Fraction, b: &Fraction) -> Result<LocVerdict> {
        self.budget.validate()?;
        for (exps, r) in self.t.products(self.r_degree) {
            let (l, rr) = Self::sides(a, b, &r);
            let bd = self.budget.with_min_degree(l.degree().max(rr.degree()));
            if let Some(c) = search_certificate(self.p, &l, &rr, &bd) {
                return Ok(LocVerdict::Holds(LocCertificate { r_exps: exps, r, proof: LocProof::Le(c) }));
            }
        }
        for f in self.test_points(&[&a.den, &b.den])? {
            let (l, r) = Self::sides(a, b, &Expr::one());
            if f.eval(&l)? > f.eval(&r)? {
                return Ok(LocVerdict::Refuted(f));
            }
        }
        Ok(LocVerdict::Unknown)
    }

    /// Lifts `x ≼ y` in `S` to `x/1 ≼ y/1` with `r = 1`.
    pub fn lift(&self, c: Certificate) -> LocCertificate {
        LocCertificate { r_exps: vec![0; self.t.gens.len()], r: Expr::one(), proof: LocProof::Le(c) }
    }

    /// `a ≼ b` and `b ≼ c` give `a ≼ c` with `r = r₁·r₂·t_b`.
    pub fn trans(&self, first: &LocCertificate, second: &LocCertificate, a: &Fraction, b: &Fraction, c: &Fraction) -> Result<LocCertificate> {
        let (LocProof::Le(c1), LocProof::Le(c2)) = (&first.proof, &second.proof) else {
            return Err(Error::Witness("transitivity expects order certificates".into()));
        };
        let cert = c1
            .clone()
            .mul_cong(&second.r * &c.den)
            .trans(c2.clone().mul_cong(&first.r * &a.den));
        let r_exps = add_exps(&add_exps(&first.r_exps, &second.r_exps), &b.den_exps);
        let r = &(&first.r * &second.r) * &b.den;
        let out = LocCertificate { r_exps, r, proof: LocProof::Le(cert) };
        self.replay(&out, a, c)?;
        Ok(out)
    }

    /// Moves `a ≼ b` to other representatives `a'` and `b'` given equality
    /// certificates `a = a'` (`q₁`) and `b = b'` (`q₂`), with
    /// `r' = q₁·q₂·t_a·t_b·r`.
    pub fn convert(
        &self,
        lc: &LocCertificate,
        a: &Fraction,
        b: &Fraction,
        eq_a: &LocCertificate,
        a2: &Fraction,
        eq_b: &LocCertificate,
        b2: &Fraction,
    ) -> Result<LocCertificate> {
        self.replay(eq_a, a, a2)?;
        self.replay(eq_b, b, b2)?;
        if eq_a.proof != LocProof::Eq || eq_b.proof != LocProof::Eq {
            return Err(Error::Witness("representative changes need equality certificates".into()));
        }
        let LocProof::Le(c) = &lc.proof else {
            return Err(Error::Witness("conversion expects an order certificate".into()));
        };
        let factor = &(&(&eq_a.r * &eq_b.r) * &a2.den) * &b2.den;
        let r_exps = [&eq_a.r_exps, &eq_b.r_exps, &a.den_exps, &b.den_exps, &lc.r_exps]
            .iter()
            .fold(Vec::new(), |acc, e| add_exps(&acc, e));
        let r = &(&(&(&eq_a.r * &eq_b.r) * &a.den) * &b.den) * &lc.r;
        let out = LocCertificate { r_exps, r, proof: LocProof::Le(c.clone().mul_cong(factor)) };
        self.replay(&out, a2, b2)?;
        Ok(out)
    }

    /// `s/t ≼ u^k/1` and `1/1 ≼ (u^k/1)·(s/t)` with `k = k_s + k_t`, from the
    /// power universal entries of `s` and `t`.
    pub fn power_universal(&self, frac: &Fraction, pu: &PowerUniversalWitness) -> Result<(u32, LocCertificate, LocCertificate)> {
        let es = pu.entry(&frac.num).ok_or_else(|| Error::MissingCoverage(self.p.show(&frac.num)))?;
        let et = pu.entry(&frac.den).ok_or_else(|| Error::MissingCoverage(self.p.show(&frac.den)))?;
        let k = es.k + et.k;
        // s ≼ u^{k_s} ≼ u^{k_s}·u^{k_t}·t
        let dom = es.dom.clone().trans(et.inv.clone().mul_cong(pu.u.pow(es.k)));
        // t ≼ u^{k_t} ≼ u^{k_t}·u^{k_s}·s
        let inv = et.dom.clone().trans(es.inv.clone().mul_cong(pu.u.pow(et.k)));
        let uk = self.canonical(pu.u.pow(k));
        let dom = self.lift(dom);
        self.replay(&dom, frac, &uk)?;
        let inv = self.lift(inv);
        self.replay(&inv, &self.canonical(Expr::one()), &self.mul(&uk, frac))?;
        Ok((k, dom, inv))
    }
}

/// A localized asymptotic claim `x ≿ y` for `x, y` in the image of `S`,
/// with per-`n` certificates of `yⁿ/1 ≼ u^{k_n}·xⁿ/1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocAsymptoticWitness {
    pub u: Expr,
    pub x: Expr,
    pub y: Expr,
    pub envelope: Envelope,
    pub certs: Vec<LocCertificate>,
}

impl LocAsymptoticWitness {
    pub fn verify(&self, loc: &Localization) -> Result<()> {
        for (i, lc) in self.certs.iter().enumerate() {
            let n = i as u32 + 1;
            let k = self.envelope.at(n).ok_or_else(|| Error::Witness(format!("envelope undefined at n = {n}")))?;
            let a = loc.canonical(self.y.pow(n));
            let b = loc.canonical(&self.u.pow(k) * &self.x.pow(n));
            loc.replay(lc, &a, &b)?;
        }
        Ok(())
    }
}

/// Lifts a witness in `S` through the canonical map, for `n ≤ horizon`.
pub fn lift_asymptotic(loc: &Localization, w: &AsymptoticWitness, horizon: u32) -> Result<LocAsymptoticWitness> {
    let certs = (1..=horizon).map(|n| Ok(loc.lift(w.certificate(n)?))).collect::<Result<Vec<_>>>()?;
    Ok(LocAsymptoticWitness { u: w.u.clone(), x: w.x.clone(), y: w.y.clone(), envelope: w.envelope.clone(), certs })
}

/// Lowers a localized witness to `S`: each `r_n·yⁿ ≼ r_n·u^{k_n}·xⁿ` is
/// cancelled to an inner witness, and the resulting doubled witness flattened.
pub fn lower_asymptotic(loc: &Localization, lw: &LocAsymptoticWitness, max_k: u32) -> Result<AsymptoticWitness> {
    if !lw.envelope.is_asymptotic() {
        return Err(Error::Witness("horizon evidence carries no asymptotic claim".into()));
    }
    lw.verify(loc)?;
    let p = loc.p;
    let mut inner = Vec::with_capacity(lw.certs.len());
    for (i, lc) in lw.certs.iter().enumerate() {
        let n = i as u32 + 1;
        let k = lw.envelope.at(n).unwrap_or(0);
        let LocProof::Le(c) = &lc.proof else {
            return Err(Error::Witness("localized witness needs order certificates".into()));
        };
        let pu = check_power_universal(p, &lw.u, std::slice::from_ref(&lc.r), &loc.budget, max_k)?
            .ok_or_else(|| Error::MissingCoverage(p.show(&lc.r)))?;
        let big_x = &lw.u.pow(k) * &lw.x.pow(n);
        inner.push(cancel_factor(p, &lc.r, &big_x, &lw.y.pow(n), c.clone(), &pu)?);
    }
    let unit = search_certificate(p, &Expr::one(), &lw.u, &loc.budget);
    let d = DoubledWitness { u: lw.u.clone(), x: lw.x.clone(), y: lw.y.clone(), outer: lw.envelope.clone(), inner };
    flatten(&d, unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::Rule;

    fn nat() -> Presentation {
        Presentation::new(Vec::<String>::new())
    }

    fn inst_d() -> Presentation {
        let g = Expr::var(0);
        let h = Expr::var(1);
        let gh = &g * &h;
        let mut p = Presentation::new(["g", "h"])
            .with_relation(Expr::one(), gh.clone())
            .with_relation(gh, Expr::constant(2u32))
            .with_relation(h, Expr::constant(2u32));
        p.power_universal = Some(&Expr::constant(4u32) * &Expr::var(0));
        p
    }

    fn c(n: u32) -> Expr {
        Expr::constant(n)
    }

    #[test]
    fn nat_equalities() {
        let p = nat();
        let loc = Localization::new(&p, MultSet::new(vec![c(2)]).unwrap());
        let a = loc.fraction(c(3), c(2)).unwrap();
        let b = loc.fraction(c(6), c(4)).unwrap();
        let LocVerdict::Holds(lc) = loc.frac_eq(&a, &b).unwrap() else { panic!() };
        assert!(lc.r.is_one());
        loc.replay(&lc, &a, &b).unwrap();
        let one = loc.canonical(c(1));
        let two = loc.canonical(c(2));
        assert!(matches!(loc.frac_eq(&one, &two).unwrap(), LocVerdict::Refuted(_)));
        let half = loc.fraction(c(1), c(2)).unwrap();
        let sum = loc.add(&half, &half);
        assert_eq!((sum.num.clone(), sum.den.clone()), (c(4), c(4)));
        assert!(matches!(loc.frac_eq(&sum, &one).unwrap(), LocVerdict::Holds(_)));
    }

    #[test]
    fn nat_order() {
        let p = nat();
        let loc = Localization::new(&p, MultSet::new(vec![c(2)]).unwrap());
        let a = loc.fraction(c(5), c(4)).unwrap();
        let b = loc.fraction(c(3), c(2)).unwrap();
        let LocVerdict::Holds(lc) = loc.frac_le(&a, &b).unwrap() else { panic!() };
        assert!(lc.r.is_one());
        loc.replay(&lc, &a, &b).unwrap();
        assert!(matches!(loc.frac_le(&b, &a).unwrap(), LocVerdict::Refuted(_)));
        let LocVerdict::Holds(refl) = loc.frac_le(&a, &a).unwrap() else { panic!() };
        assert!(matches!(&refl.proof, LocProof::Le(c) if c.rule == Rule::Refl));
    }

    #[test]
    fn inst_d_direct_relation() {
        let p = inst_d();
        let loc = Localization::new(&p, MultSet::new(vec![Expr::var(1)]).unwrap());
        let a = loc.canonical(Expr::var(0));
        let b = loc.fraction(c(2), Expr::var(1)).unwrap();
        let LocVerdict::Holds(lc) = loc.frac_le(&a, &b).unwrap() else { panic!() };
        assert!(lc.r.is_one());
        assert!(matches!(&lc.proof, LocProof::Le(c) if c.rule == Rule::Base(1)));
        assert!(matches!(loc.fraction(c(1), Expr::var(0)), Err(Error::NotInMultSet(_))));
    }

    #[test]
    fn transitivity_and_conversion() {
        let p = nat();
        let loc = Localization::new(&p, MultSet::new(vec![c(2)]).unwrap());
        let a = loc.fraction(c(1), c(2)).unwrap();
        let b = loc.fraction(c(3), c(4)).unwrap();
        let cc = loc.fraction(c(1), c(1)).unwrap();
        let LocVerdict::Holds(ab) = loc.frac_le(&a, &b).unwrap() else { panic!() };
        let LocVerdict::Holds(bc) = loc.frac_le(&b, &cc).unwrap() else { panic!() };
        loc.trans(&ab, &bc, &a, &b, &cc).unwrap();
        let a2 = loc.fraction(c(2), c(4)).unwrap();
        let b2 = loc.fraction(c(6), c(8)).unwrap();
        let LocVerdict::Holds(ea) = loc.frac_eq(&a, &a2).unwrap() else { panic!() };
        let LocVerdict::Holds(eb) = loc.frac_eq(&b, &b2).unwrap() else { panic!() };
        loc.convert(&ab, &a, &b, &ea, &a2, &eb, &b2).unwrap();
    }

    #[test]
    fn power_universal_fraction() {
        let p = inst_d();
        let u = p.power_universal.clone().unwrap();
        let loc = Localization::new(&p, MultSet::new(vec![Expr::var(1)]).unwrap());
        let pu = check_power_universal(&p, &u, &[Expr::var(0), Expr::var(1)], &Budget::default(), 4)
            .unwrap()
            .unwrap();
        let f = loc.fraction(Expr::var(0), Expr::var(1)).unwrap();
        let (k, _, _) = loc.power_universal(&f, &pu).unwrap();
        assert_eq!(k, pu.entry(&Expr::var(0)).unwrap().k + pu.entry(&Expr::var(1)).unwrap().k);
    }

    #[test]
    fn lowering_with_nontrivial_r() {
        let p = inst_d();
        let u = p.power_universal.clone().unwrap();
        let h = Expr::var(1);
        let gh = &Expr::var(0) * &h;
        let loc = Localization::new(&p, MultSet::new(vec![h.clone()]).unwrap());
        let base = Certificate::base(&p, 1).unwrap();
        // h·(gh)ⁿ ≼ h·2ⁿ for n ≤ 6
        let certs = (1..=6u32)
            .map(|n| {
                let cert = base.power(n).mul_cong(h.clone());
                LocCertificate { r_exps: vec![1], r: h.clone(), proof: LocProof::Le(cert) }
            })
            .collect();
        let lw = LocAsymptoticWitness { u: u.clone(), x: c(2), y: gh.clone(), envelope: Envelope::Constant(0), certs };
        let w = lower_asymptotic(&loc, &lw, 4).unwrap();
        w.verify(&p, 6).unwrap();
        let horizon = LocAsymptoticWitness { envelope: Envelope::Horizon(vec![0; 6]), ..lw };
        assert!(lower_asymptotic(&loc, &horizon, 4).is_err());
    }
}
