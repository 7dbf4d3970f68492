//! Certified membership in `S₊ = {s : 1 ≼ n·s}`, `S₋ = {s : s ≼ n}` and their
//! intersection `S_b`.

use crate::cert::{replay_expect, Certificate};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::presentation::Presentation;
use crate::search::{search_certificate, Budget};
use crate::spectrum::{verify_hom, Hom, SeparateConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MemberKind {
    Plus,
    Minus,
    Bounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub kind: MemberKind,
    pub element: Expr,
    pub n: u64,
    /// `1 ≼ n·s`, for `Plus` and `Bounded`.
    pub lower: Option<Certificate>,
    /// `s ≼ n`, for `Minus` and `Bounded`.
    pub upper: Option<Certificate>,
}

/// Verified points of the attached family; any of them with `f(a) > f(b)`
/// rules out a certificate of `a ≼ b` without searching.
fn obstructions(p: &Presentation) -> Vec<Hom> {
    p.family
        .as_ref()
        .and_then(|fam| fam.sample_homs(&SeparateConfig::default()).ok())
        .unwrap_or_default()
        .into_iter()
        .filter(|f| verify_hom(p, f))
        .collect()
}

fn ruled_out(pts: &[Hom], a: &Expr, b: &Expr) -> bool {
    pts.iter().any(|f| matches!((f.eval(a), f.eval(b)), (Ok(x), Ok(y)) if x > y))
}

fn find_lower(p: &Presentation, pts: &[Hom], s: &Expr, bound: u64, budget: &Budget) -> Option<(u64, Certificate)> {
    (1..=bound).find_map(|n| {
        let ns = s * &Expr::from(n);
        if ruled_out(pts, &Expr::one(), &ns) {
            return None;
        }
        search_certificate(p, &Expr::one(), &ns, budget).map(|c| (n, c))
    })
}

fn find_upper(p: &Presentation, pts: &[Hom], s: &Expr, bound: u64, budget: &Budget) -> Option<(u64, Certificate)> {
    (0..=bound).find_map(|n| {
        let ne = Expr::from(n);
        if ruled_out(pts, s, &ne) {
            return None;
        }
        search_certificate(p, s, &ne, budget).map(|c| (n, c))
    })
}

/// Smallest `n ≤ bound` with a certificate, or `None` when the search is
/// exhausted. `0 ∈ S₊` holds by definition with `n = 0` and no certificate.
pub fn membership(
    p: &Presentation,
    s: &Expr,
    kind: MemberKind,
    bound: u64,
    budget: &Budget,
) -> Result<Option<MembershipCertificate>> {
    budget.validate()?;
    if bound == 0 {
        return Err(Error::MalformedBudget("membership bound is zero"));
    }
    let b = budget.with_min_degree(s.degree());
    let mk = |n, lower, upper| MembershipCertificate { kind, element: s.clone(), n, lower, upper };
    if s.is_zero() && kind == MemberKind::Plus {
        return Ok(Some(mk(0, None, None)));
    }
    let pts = obstructions(p);
    Ok(match kind {
        MemberKind::Plus => find_lower(p, &pts, s, bound, &b).map(|(n, c)| mk(n, Some(c), None)),
        MemberKind::Minus => find_upper(p, &pts, s, bound, &b).map(|(n, c)| mk(n, None, Some(c))),
        MemberKind::Bounded => {
            let Some((n1, _)) = find_lower(p, &pts, s, bound, &b) else { return Ok(None) };
            let Some((n2, _)) = find_upper(p, &pts, s, bound, &b) else { return Ok(None) };
            let n = n1.max(n2);
            let lower = search_certificate(p, &Expr::one(), &(s * &Expr::from(n)), &b);
            let upper = search_certificate(p, s, &Expr::from(n), &b);
            match (lower, upper) {
                (Some(l), Some(u)) => Some(mk(n, Some(l), Some(u))),
                _ => None,
            }
        }
    })
}

pub fn replay_membership(p: &Presentation, mc: &MembershipCertificate) -> Result<()> {
    let s = &mc.element;
    let n = Expr::from(mc.n);
    let need_lower = matches!(mc.kind, MemberKind::Plus | MemberKind::Bounded);
    let need_upper = matches!(mc.kind, MemberKind::Minus | MemberKind::Bounded);
    if need_lower {
        match &mc.lower {
            Some(c) => replay_expect(p, c, &Expr::one(), &(s * &n))?,
            None if s.is_zero() && mc.kind == MemberKind::Plus => {}
            None => return Err(Error::Witness("missing lower membership certificate".into())),
        }
    }
    if need_upper {
        match &mc.upper {
            Some(c) => replay_expect(p, c, s, &n)?,
            None => return Err(Error::Witness("missing upper membership certificate".into())),
        }
    }
    Ok(())
}
