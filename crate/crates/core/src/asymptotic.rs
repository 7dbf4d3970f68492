//! Asymptotic comparison `x ≿ y`: `yⁿ ≼ u^{k_n}·xⁿ` for every `n ≥ 1` with an
//! eventually constant exponent envelope `k_n`.
//!
//! Witnesses are rule programs ([`Schema`]) that generate the certificate for
//! any requested `n`, rather than expanded trees.

use num_integer::Integer;

use crate::cert::{replay_expect, Certificate};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::presentation::Presentation;
use crate::search::{search_certificate, Budget};
use crate::spectrum::{separate, Hom, SeparateConfig, Separation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuEntry {
    pub element: Expr,
    pub k: u32,
    /// `element ≼ u^k`
    pub dom: Certificate,
    /// `1 ≼ u^k·element`
    pub inv: Certificate,
}

/// Evidence that `u` is power universal on a finite list of elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerUniversalWitness {
    pub u: Expr,
    /// `1 ≼ u`
    pub unit: Certificate,
    pub entries: Vec<PuEntry>,
}

impl PowerUniversalWitness {
    pub fn entry(&self, x: &Expr) -> Option<&PuEntry> {
        self.entries.iter().find(|e| &e.element == x)
    }

    pub fn verify(&self, p: &Presentation) -> Result<()> {
        replay_expect(p, &self.unit, &Expr::one(), &self.u)?;
        for e in &self.entries {
            let uk = self.u.pow(e.k);
            replay_expect(p, &e.dom, &e.element, &uk)?;
            replay_expect(p, &e.inv, &Expr::one(), &(&uk * &e.element))?;
        }
        Ok(())
    }
}

/// Searches, per covered element, the least `k ≤ max_k` with `x ≼ u^k` and
/// `1 ≼ u^k·x`.
pub fn check_power_universal(
    p: &Presentation,
    u: &Expr,
    coverage: &[Expr],
    budget: &Budget,
    max_k: u32,
) -> Result<Option<PowerUniversalWitness>> {
    budget.validate()?;
    if u.is_zero() {
        return Err(Error::ZeroElement("power universal element"));
    }
    if coverage.is_empty() {
        return Err(Error::MissingCoverage("an empty element list".into()));
    }
    let Some(unit) = search_certificate(p, &Expr::one(), u, budget) else { return Ok(None) };
    let mut entries = Vec::with_capacity(coverage.len());
    for x in coverage {
        let found = (0..=max_k).find_map(|k| {
            let uk = u.pow(k);
            let b = budget.with_min_degree(x.degree() + u.degree() * k);
            let dom = search_certificate(p, x, &uk, &b)?;
            let inv = search_certificate(p, &Expr::one(), &(&uk * x), &b)?;
            Some(PuEntry { element: x.clone(), k, dom, inv })
        });
        match found {
            Some(e) => entries.push(e),
            None => return Ok(None),
        }
    }
    Ok(Some(PowerUniversalWitness { u: u.clone(), unit, entries }))
}

/// The exponent family `k_n`, `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Envelope {
    Constant(u32),
    /// `k_n = ks[n mod ks.len()]`.
    Periodic(Vec<u32>),
    /// `k_n = ks[n-1]` for `n ≤ ks.len()`; no claim beyond.
    Horizon(Vec<u32>),
}

impl Envelope {
    pub fn at(&self, n: u32) -> Option<u32> {
        match self {
            Envelope::Constant(k) => Some(*k),
            Envelope::Periodic(ks) => ks.get(n as usize % ks.len()).copied(),
            Envelope::Horizon(ks) => ks.get((n as usize).checked_sub(1)?).copied(),
        }
    }

    pub fn max(&self) -> u32 {
        match self {
            Envelope::Constant(k) => *k,
            Envelope::Periodic(ks) | Envelope::Horizon(ks) => ks.iter().copied().max().unwrap_or(0),
        }
    }

    pub fn is_asymptotic(&self) -> bool {
        !matches!(self, Envelope::Horizon(_))
    }

    pub fn scaled(&self, k: u32) -> Envelope {
        self.map(|v| v * k)
    }

    fn map(&self, f: impl Fn(u32) -> u32) -> Envelope {
        match self {
            Envelope::Constant(v) => Envelope::Constant(f(*v)),
            Envelope::Periodic(ks) => Envelope::Periodic(ks.iter().map(|&v| f(v)).collect()),
            Envelope::Horizon(ks) => Envelope::Horizon(ks.iter().map(|&v| f(v)).collect()),
        }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Envelope) -> Envelope {
        use Envelope::*;
        match (self, other) {
            (Constant(a), Constant(b)) => Constant(a + b),
            (Horizon(_), _) | (_, Horizon(_)) => {
                let len = [self, other]
                    .iter()
                    .filter_map(|e| match e {
                        Horizon(ks) => Some(ks.len()),
                        _ => None,
                    })
                    .min()
                    .unwrap_or(0);
                Horizon((1..=len as u32).map(|n| self.at(n).unwrap_or(0) + other.at(n).unwrap_or(0)).collect())
            }
            _ => {
                let period = |e: &Envelope| match e {
                    Periodic(ks) => ks.len(),
                    _ => 1,
                };
                let p = period(self).lcm(&period(other));
                Periodic((0..p as u32).map(|n| self.at(n).unwrap_or(0) + other.at(n).unwrap_or(0)).collect())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schema {
    /// From `y ≼ x`: `yⁿ ≼ xⁿ`.
    Lift { base: Certificate },
    /// `block: yᵖ ≼ xᵖ`; `residues[r]: yʳ ≼ u^{K_r}·xʳ` with `residues[0]` trivial.
    Periodic { block: Certificate, residues: Vec<Certificate> },
    /// Re-expresses a witness for `u₂` over `u₁` through `change: u₂ ≼ u₁^k`.
    Convert { inner: Box<AsymptoticWitness>, k: u32, change: Certificate },
    /// `first: x ≿ m`, `second: m ≿ y`.
    Compose { first: Box<AsymptoticWitness>, second: Box<AsymptoticWitness> },
    MulCong { inner: Box<AsymptoticWitness>, factor: Expr },
    /// Binomial chain; `unit: 1 ≼ u` pads smaller exponents up to the maximum.
    AddCong { inner: Box<AsymptoticWitness>, term: Expr, unit: Option<Certificate> },
    /// From `s·y ≼ s·x`, `dom: s ≼ u^k`, `inv: 1 ≼ u^k·s`.
    Cancel { factor: Expr, cert: Certificate, k: u32, dom: Certificate, inv: Certificate },
    /// `family[n-1]: t·yⁿ ≼ s·xⁿ`, `inv_t: 1 ≼ u^k·t`, `dom_s: s ≼ u^l`.
    SmallFactors { s: Expr, t: Expr, family: Vec<Certificate>, k: u32, l: u32, inv_t: Certificate, dom_s: Certificate },
    /// Instantiates `inner[n-1]: u^{k_n}xⁿ ≿ yⁿ` at its first power.
    Flatten { outer: Envelope, inner: Vec<AsymptoticWitness>, unit: Option<Certificate> },
    /// Explicit certificates for `n = 1..=len`.
    Table { certs: Vec<Certificate> },
}

/// Claims `yⁿ ≼ u^{k_n}·xⁿ` for all `n ≥ 1` (or `n ≤ N` for a horizon envelope).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticWitness {
    pub u: Expr,
    pub x: Expr,
    pub y: Expr,
    pub envelope: Envelope,
    pub schema: Schema,
}

/// `1 ≼ u^j` from `1 ≼ u`.
fn pad(unit: Option<&Certificate>, u: &Expr, j: u32) -> Result<Certificate> {
    if j == 0 {
        return Ok(Certificate::refl(Expr::one()));
    }
    let unit = unit.ok_or_else(|| Error::MissingCoverage(format!("a certificate of 1 <= u to pad by u^{j}")))?;
    debug_assert_eq!(&unit.rhs, u);
    Ok(unit.power(j))
}

impl AsymptoticWitness {
    pub fn k_at(&self, n: u32) -> Result<u32> {
        self.envelope
            .at(n)
            .ok_or_else(|| Error::Witness(format!("envelope undefined at n = {n}")))
    }

    /// The certificate of `yⁿ ≼ u^{k_n}·xⁿ`.
    pub fn certificate(&self, n: u32) -> Result<Certificate> {
        if n == 0 {
            return Err(Error::Witness("witnesses start at n = 1".into()));
        }
        let k = self.k_at(n)?;
        let (x, y, u) = (&self.x, &self.y, &self.u);
        Ok(match &self.schema {
            Schema::Lift { base } => base.power(n),
            Schema::Periodic { block, residues } => {
                let p = residues.len() as u32;
                let (q, r) = (n / p, n % p);
                let head = block.power(q).mul_cong(y.pow(r));
                let tail = residues[r as usize].clone().mul_cong(x.pow(p * q));
                head.trans(tail)
            }
            Schema::Convert { inner, change, .. } => {
                let kn = inner.k_at(n)?;
                inner.certificate(n)?.trans(change.power(kn).mul_cong(x.pow(n)))
            }
            Schema::Compose { first, second } => {
                let l = second.k_at(n)?;
                second.certificate(n)?.trans(first.certificate(n)?.mul_cong(u.pow(l)))
            }
            Schema::MulCong { inner, factor } => inner.certificate(n)?.mul_cong(factor.pow(n)),
            Schema::AddCong { inner, term, unit } => {
                let mut parts = Vec::with_capacity(n as usize + 1);
                for m in (0..=n).rev() {
                    let (c, km) = if m == 0 {
                        (Certificate::refl(Expr::one()), 0)
                    } else {
                        (inner.certificate(m)?, inner.k_at(m)?)
                    };
                    let lifted = c.trans(pad(unit.as_ref(), u, k - km)?.mul_cong(&u.pow(km) * &inner.x.pow(m)));
                    let coeff = Expr::constant(Expr::binomial(n, m));
                    parts.push(lifted.mul_cong(&term.pow(n - m) * &coeff));
                }
                Certificate::sum(parts)
            }
            Schema::Cancel { factor, cert, k: kk, dom, inv } => {
                let ukk = u.pow(*kk);
                let mut chain = Certificate::refl(factor * &y.pow(n));
                for j in 0..n {
                    chain = chain.trans(cert.clone().mul_cong(&x.pow(j) * &y.pow(n - 1 - j)));
                }
                inv.clone()
                    .mul_cong(y.pow(n))
                    .trans(chain.mul_cong(ukk.clone()))
                    .trans(dom.clone().mul_cong(&ukk * &x.pow(n)))
            }
            Schema::SmallFactors { family, k: kk, inv_t, dom_s, .. } => {
                let fam = family
                    .get(n as usize - 1)
                    .ok_or_else(|| Error::Witness(format!("no small-factor certificate at n = {n}")))?;
                let uk = u.pow(*kk);
                inv_t
                    .clone()
                    .mul_cong(y.pow(n))
                    .trans(fam.clone().mul_cong(uk.clone()))
                    .trans(dom_s.clone().mul_cong(&uk * &x.pow(n)))
            }
            Schema::Flatten { outer, inner, unit } => {
                let w = inner
                    .get(n as usize - 1)
                    .ok_or_else(|| Error::Witness(format!("inner witness missing at n = {n}")))?;
                let kn = outer.at(n).ok_or_else(|| Error::Witness(format!("outer envelope undefined at n = {n}")))?;
                let l = w.k_at(1)?;
                let used = l + kn;
                w.certificate(1)?.trans(pad(unit.as_ref(), u, k - used)?.mul_cong(&u.pow(used) * &x.pow(n)))
            }
            Schema::Table { certs } => certs
                .get(n as usize - 1)
                .cloned()
                .ok_or_else(|| Error::Witness(format!("no table entry at n = {n}")))?,
        })
    }

    /// Replays the generated certificate for every `n ≤ horizon` (capped by the
    /// envelope's own horizon).
    pub fn verify(&self, p: &Presentation, horizon: u32) -> Result<()> {
        let top = match &self.envelope {
            Envelope::Horizon(ks) => horizon.min(ks.len() as u32),
            _ => horizon,
        };
        for n in 1..=top {
            let k = self.k_at(n)?;
            let c = self.certificate(n)?;
            replay_expect(p, &c, &self.y.pow(n), &(&self.u.pow(k) * &self.x.pow(n)))?;
        }
        Ok(())
    }
}

/// `y ≼ x` lifts to `x ≿ y` with the zero envelope.
pub fn lift(base: Certificate, u: &Expr) -> AsymptoticWitness {
    AsymptoticWitness {
        u: u.clone(),
        x: base.rhs.clone(),
        y: base.lhs.clone(),
        envelope: Envelope::Constant(0),
        schema: Schema::Lift { base },
    }
}

/// From a witness over `w.u` and `change: w.u ≼ u₁^k`, a witness over `u₁`.
pub fn convert_power_universal(
    p: &Presentation,
    w: &AsymptoticWitness,
    u1: &Expr,
    k: u32,
    change: Certificate,
) -> Result<AsymptoticWitness> {
    replay_expect(p, &change, &w.u, &u1.pow(k))?;
    Ok(AsymptoticWitness {
        u: u1.clone(),
        x: w.x.clone(),
        y: w.y.clone(),
        envelope: w.envelope.scaled(k),
        schema: Schema::Convert { inner: Box::new(w.clone()), k, change },
    })
}

/// `x ≿ m` and `m ≿ y` give `x ≿ y`.
pub fn compose_asymptotic(first: &AsymptoticWitness, second: &AsymptoticWitness) -> Result<AsymptoticWitness> {
    if first.u != second.u {
        return Err(Error::Witness("witnesses use different power universal elements".into()));
    }
    if first.y != second.x {
        return Err(Error::Witness("middle elements of the composed witnesses differ".into()));
    }
    Ok(AsymptoticWitness {
        u: first.u.clone(),
        x: first.x.clone(),
        y: second.y.clone(),
        envelope: first.envelope.add(&second.envelope),
        schema: Schema::Compose { first: Box::new(first.clone()), second: Box::new(second.clone()) },
    })
}

/// `x ≿ y` gives `x·z ≿ y·z`.
pub fn mul_congruence(w: &AsymptoticWitness, z: &Expr) -> AsymptoticWitness {
    if z.is_one() {
        return w.clone();
    }
    AsymptoticWitness {
        u: w.u.clone(),
        x: &w.x * z,
        y: &w.y * z,
        envelope: w.envelope.clone(),
        schema: Schema::MulCong { inner: Box::new(w.clone()), factor: z.clone() },
    }
}

/// `x ≿ y` gives `x+z ≿ y+z` with the constant envelope `max k_n`; `unit`
/// (`1 ≼ u`) is needed whenever that maximum is positive.
pub fn add_congruence(w: &AsymptoticWitness, z: &Expr, unit: Option<Certificate>) -> Result<AsymptoticWitness> {
    if z.is_zero() {
        return Ok(w.clone());
    }
    if !w.envelope.is_asymptotic() {
        return Err(Error::Witness("horizon evidence carries no asymptotic claim".into()));
    }
    let k = w.envelope.max();
    if k > 0 && unit.is_none() {
        return Err(Error::MissingCoverage("a certificate of 1 <= u".into()));
    }
    Ok(AsymptoticWitness {
        u: w.u.clone(),
        x: &w.x + z,
        y: &w.y + z,
        envelope: Envelope::Constant(k),
        schema: Schema::AddCong { inner: Box::new(w.clone()), term: z.clone(), unit },
    })
}

/// Cancels a factor `s` from `cert: s·y ≼ s·x`, using the entry for `s` in `pu`.
pub fn cancel_factor(
    p: &Presentation,
    s: &Expr,
    x: &Expr,
    y: &Expr,
    cert: Certificate,
    pu: &PowerUniversalWitness,
) -> Result<AsymptoticWitness> {
    if s.is_zero() {
        return Err(Error::ZeroElement("cancelled factor"));
    }
    replay_expect(p, &cert, &(s * y), &(s * x))?;
    let e = pu.entry(s).ok_or_else(|| Error::MissingCoverage(p.show(s)))?;
    Ok(AsymptoticWitness {
        u: pu.u.clone(),
        x: x.clone(),
        y: y.clone(),
        envelope: Envelope::Constant(2 * e.k),
        schema: Schema::Cancel { factor: s.clone(), cert, k: e.k, dom: e.dom.clone(), inv: e.inv.clone() },
    })
}

/// From `family[n-1]: t·yⁿ ≼ s·xⁿ` for `n ≤ family.len()`, checked up to
/// `horizon`.
pub fn small_factors(
    p: &Presentation,
    s: &Expr,
    t: &Expr,
    x: &Expr,
    y: &Expr,
    family: Vec<Certificate>,
    pu: &PowerUniversalWitness,
    horizon: u32,
) -> Result<AsymptoticWitness> {
    if s.is_zero() || t.is_zero() {
        return Err(Error::ZeroElement("small factor"));
    }
    for n in 1..=horizon {
        let c = family
            .get(n as usize - 1)
            .ok_or_else(|| Error::Witness(format!("no small-factor certificate at n = {n}")))?;
        replay_expect(p, c, &(t * &y.pow(n)), &(s * &x.pow(n)))?;
    }
    let et = pu.entry(t).ok_or_else(|| Error::MissingCoverage(p.show(t)))?;
    let es = pu.entry(s).ok_or_else(|| Error::MissingCoverage(p.show(s)))?;
    Ok(AsymptoticWitness {
        u: pu.u.clone(),
        x: x.clone(),
        y: y.clone(),
        envelope: Envelope::Constant(et.k + es.k),
        schema: Schema::SmallFactors {
            s: s.clone(),
            t: t.clone(),
            family,
            k: et.k,
            l: es.k,
            inv_t: et.inv.clone(),
            dom_s: es.dom.clone(),
        },
    })
}

/// A per-`n` family of witnesses `inner[n-1]: u^{k_n}·xⁿ ≿ yⁿ`, i.e. a proof
/// that `x` dominates `y` in the asymptotic preorder of the asymptotic preorder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubledWitness {
    pub u: Expr,
    pub x: Expr,
    pub y: Expr,
    pub outer: Envelope,
    pub inner: Vec<AsymptoticWitness>,
}

impl DoubledWitness {
    fn check_shape(&self) -> Result<()> {
        if !self.outer.is_asymptotic() {
            return Err(Error::Witness("outer envelope is horizon evidence".into()));
        }
        if self.inner.is_empty() {
            return Err(Error::Witness("empty inner family".into()));
        }
        for (i, w) in self.inner.iter().enumerate() {
            let n = i as u32 + 1;
            let kn = self.outer.at(n).unwrap_or(0);
            if w.u != self.u {
                return Err(Error::Witness(format!("inner witness {n} uses a different u")));
            }
            if !w.envelope.is_asymptotic() {
                return Err(Error::Witness(format!("inner witness {n} is horizon evidence")));
            }
            if w.x != &self.u.pow(kn) * &self.x.pow(n) || w.y != self.y.pow(n) {
                return Err(Error::Witness(format!("inner witness {n} compares the wrong elements")));
            }
        }
        Ok(())
    }
}

/// Collapses a doubled witness into an ordinary one with envelope
/// `max_n (l_{n,1} + k_n)` over the inner family.
pub fn flatten(d: &DoubledWitness, unit: Option<Certificate>) -> Result<AsymptoticWitness> {
    d.check_shape()?;
    let mut k = 0;
    for (i, w) in d.inner.iter().enumerate() {
        let n = i as u32 + 1;
        k = k.max(w.k_at(1)? + d.outer.at(n).unwrap_or(0));
    }
    Ok(AsymptoticWitness {
        u: d.u.clone(),
        x: d.x.clone(),
        y: d.y.clone(),
        envelope: Envelope::Constant(k),
        schema: Schema::Flatten { outer: d.outer.clone(), inner: d.inner.clone(), unit },
    })
}

/// The diagonal instance at `n`: the first `m ≤ max_m` with `l_{n,m} ≤ m`, and
/// the certificate of `y^{nm} ≼ u^{l_{n,m} + m·k_n}·x^{nm}`.
pub fn flatten_diagonal(d: &DoubledWitness, n: u32, max_m: u32) -> Result<(u32, u32, Certificate)> {
    d.check_shape()?;
    let w = d
        .inner
        .get((n as usize).saturating_sub(1))
        .filter(|_| n > 0)
        .ok_or_else(|| Error::Witness(format!("inner witness missing at n = {n}")))?;
    let m = (1..=max_m)
        .find(|&m| w.k_at(m).is_ok_and(|l| l <= m))
        .ok_or_else(|| Error::Witness(format!("no m <= {max_m} with l(n, m) <= m")))?;
    let l = w.k_at(m)?;
    Ok((m, l + m * d.outer.at(n).unwrap_or(0), w.certificate(m)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymConfig {
    pub budget: Budget,
    pub max_period: u32,
    pub max_k: u32,
    /// Verification horizon for produced witnesses.
    pub horizon: u32,
    /// Length of horizon evidence collected when no rule applies; 0 disables.
    pub evidence: u32,
    /// Whether to search the attached family for a refuting point.
    pub refute: bool,
    pub separate: SeparateConfig,
}

impl Default for AsymConfig {
    fn default() -> Self {
        AsymConfig {
            budget: Budget::default(),
            max_period: 3,
            max_k: 4,
            horizon: 12,
            evidence: 4,
            refute: true,
            separate: SeparateConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AsymOutcome {
    Witness(AsymptoticWitness),
    Refuted(Hom),
    /// No rule applied; carries horizon evidence when it was found.
    Unknown(Option<AsymptoticWitness>),
}

impl AsymOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            AsymOutcome::Witness(_) => "AsymptoticallyGE",
            AsymOutcome::Refuted(_) => "Refuted",
            AsymOutcome::Unknown(_) => "Unknown",
        }
    }
}

fn try_periodic(p: &Presentation, u: &Expr, x: &Expr, y: &Expr, period: u32, cfg: &AsymConfig) -> Option<AsymptoticWitness> {
    let d = x.degree().max(y.degree());
    let b = cfg.budget.with_min_degree(period * d + cfg.max_k * u.degree());
    let block = search_certificate(p, &y.pow(period), &x.pow(period), &b)?;
    let mut residues = vec![Certificate::refl(Expr::one())];
    let mut ks = vec![0];
    for r in 1..period {
        let (k, c) = (0..=cfg.max_k)
            .find_map(|k| search_certificate(p, &y.pow(r), &(&u.pow(k) * &x.pow(r)), &b).map(|c| (k, c)))?;
        residues.push(c);
        ks.push(k);
    }
    let w = AsymptoticWitness {
        u: u.clone(),
        x: x.clone(),
        y: y.clone(),
        envelope: Envelope::Periodic(ks),
        schema: Schema::Periodic { block, residues },
    };
    w.verify(p, cfg.horizon).ok().map(|_| w)
}

fn try_cancel(p: &Presentation, u: &Expr, x: &Expr, y: &Expr, cfg: &AsymConfig) -> Result<Option<AsymptoticWitness>> {
    let mut factors: Vec<Expr> = (0..p.num_generators()).map(Expr::var).collect();
    factors.push(u.clone());
    for s in factors {
        let b = cfg.budget.with_min_degree(s.degree() + x.degree().max(y.degree()));
        let Some(cert) = search_certificate(p, &(&s * y), &(&s * x), &b) else { continue };
        let Some(pu) = check_power_universal(p, u, std::slice::from_ref(&s), &cfg.budget, cfg.max_k)? else {
            continue;
        };
        let w = cancel_factor(p, &s, x, y, cert, &pu)?;
        if w.verify(p, cfg.horizon).is_ok() {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Decides `x ≿ y` with respect to `u`: a direct lift, a periodic schema, a
/// cancellation, a refuting point of the attached family, or `Unknown`.
pub fn check_asymptotic(p: &Presentation, u: &Expr, x: &Expr, y: &Expr, cfg: &AsymConfig) -> Result<AsymOutcome> {
    cfg.budget.validate()?;
    if u.is_zero() {
        return Err(Error::ZeroElement("power universal element"));
    }
    if let Some(c) = search_certificate(p, y, x, &cfg.budget) {
        return Ok(AsymOutcome::Witness(lift(c, u)));
    }
    for period in 2..=cfg.max_period {
        if let Some(w) = try_periodic(p, u, x, y, period, cfg) {
            return Ok(AsymOutcome::Witness(w));
        }
    }
    if let Some(w) = try_cancel(p, u, x, y, cfg)? {
        return Ok(AsymOutcome::Witness(w));
    }
    if cfg.refute {
        if let Some(fam) = &p.family {
            if let Separation::Found(f) = separate(p, fam, x, y, &cfg.separate)? {
                return Ok(AsymOutcome::Refuted(f));
            }
        }
    }
    if cfg.evidence == 0 {
        return Ok(AsymOutcome::Unknown(None));
    }
    let mut certs = Vec::new();
    let mut ks = Vec::new();
    for n in 1..=cfg.evidence {
        let b = cfg.budget.with_min_degree(n * x.degree().max(y.degree()) + cfg.max_k * u.degree());
        let Some((k, c)) = (0..=cfg.max_k)
            .find_map(|k| search_certificate(p, &y.pow(n), &(&u.pow(k) * &x.pow(n)), &b).map(|c| (k, c)))
        else {
            return Ok(AsymOutcome::Unknown(None));
        };
        certs.push(c);
        ks.push(k);
    }
    Ok(AsymOutcome::Unknown(Some(AsymptoticWitness {
        u: u.clone(),
        x: x.clone(),
        y: y.clone(),
        envelope: Envelope::Horizon(ks),
        schema: Schema::Table { certs },
    })))
}
