//! Extending homomorphisms from `S_b` to `S₋` and from `S₋` to all of `S`.
//!
//! A partial homomorphism is given on the subsemiring generated by a few
//! monomials and is only ever queried on elements whose membership in its
//! domain (`S_b` or `S₋`) has been certified.

use num_traits::{One, Signed, Zero};

use super::membership::{membership, MemberKind};
use super::{verify_hom, Hom, Q};
use crate::error::{Error, Result};
use crate::expr::{Expr, Monomial};
use crate::presentation::Presentation;
use crate::search::Budget;

/// Evaluation restricted to certified members of a domain.
pub trait PartialHom {
    fn eval(&self, p: &Presentation, x: &Expr) -> Result<Q>;
}

/// A homomorphism on the subsemiring generated by `basis`, restricted to the
/// elements certified to lie in `domain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceHom {
    pub basis: Vec<Monomial>,
    pub values: Vec<Q>,
    pub domain: MemberKind,
    pub bound: u64,
    pub budget: Budget,
}

/// Writes `m` as a product of basis monomials, depth first in basis order.
fn decompose(m: &Monomial, basis: &[Monomial], from: usize, acc: &mut Vec<usize>) -> bool {
    if m.is_one() {
        return true;
    }
    for (i, b) in basis.iter().enumerate().skip(from) {
        if b.is_one() {
            continue;
        }
        if let Some(rest) = b.quotient_of(m) {
            acc.push(i);
            if decompose(&rest, basis, i, acc) {
                return true;
            }
            acc.pop();
        }
    }
    false
}

impl SliceHom {
    pub fn new(basis: Vec<Monomial>, values: Vec<Q>, domain: MemberKind) -> Self {
        SliceHom { basis, values, domain, bound: 8, budget: Budget::default() }
    }

    /// Value on the generated subsemiring, without a domain check.
    pub fn value(&self, x: &Expr) -> Result<Q> {
        let mut acc = Q::zero();
        for (m, c) in x.terms() {
            let mut idx = Vec::new();
            if !decompose(m, &self.basis, 0, &mut idx) {
                return Err(Error::Extension(format!("monomial {m:?} is outside the slice")));
            }
            let mut t = Q::from_integer(num_bigint::BigInt::from(c.clone()));
            for i in idx {
                t *= &self.values[i];
            }
            acc += t;
        }
        Ok(acc)
    }
}

fn certify(p: &Presentation, x: &Expr, kind: MemberKind, bound: u64, budget: &Budget) -> Result<()> {
    match membership(p, x, kind, bound, budget)? {
        Some(_) => Ok(()),
        None => Err(Error::Extension(format!("{} is not certified in {kind:?}", p.show(x)))),
    }
}

impl PartialHom for SliceHom {
    fn eval(&self, p: &Presentation, x: &Expr) -> Result<Q> {
        certify(p, x, self.domain, self.bound, &self.budget)?;
        self.value(x)
    }
}

/// `x ↦ f(1+x) − 1` on certified members of `S₋`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinusHom {
    pub base: SliceHom,
}

impl PartialHom for MinusHom {
    fn eval(&self, p: &Presentation, x: &Expr) -> Result<Q> {
        certify(p, x, MemberKind::Minus, self.base.bound, &self.base.budget)?;
        let v = self.base.eval(p, &(&Expr::one() + x))? - Q::one();
        if v.is_negative() {
            return Err(Error::Extension(format!("f(1 + {}) < 1", p.show(x))));
        }
        Ok(v)
    }
}

pub fn extend_b_to_minus(f: SliceHom) -> Result<MinusHom> {
    if f.domain != MemberKind::Bounded {
        return Err(Error::Extension("base homomorphism must live on S_b".into()));
    }
    Ok(MinusHom { base: f })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FullExtension {
    /// The extension and, per generator, the exponent `k` used.
    Full(Hom, Vec<u32>),
    NoExtension,
}

/// `f(ū)^{−k}·f(ū^k·x)`.
pub fn extension_value_at<F: PartialHom>(p: &Presentation, f: &F, ubar: &Expr, x: &Expr, k: u32) -> Result<Q> {
    let fu = f.eval(p, ubar)?;
    if fu.is_zero() {
        return Err(Error::Extension("f(ū) = 0".into()));
    }
    Ok(f.eval(p, &(&ubar.pow(k) * x))? / num_traits::pow(fu, k as usize))
}

/// Extends `f` from `S₋` to `S` via `x ↦ f(ū)^{−k}·f(ū^k·x)` with the least
/// `k ≤ max_k` putting `ū^k·x` into `S₋`, for each generator `x`.
pub fn extend_minus_to_full<F: PartialHom>(
    p: &Presentation,
    f: &F,
    ubar: &Expr,
    u: &Expr,
    max_k: u32,
    bound: u64,
    budget: &Budget,
) -> Result<FullExtension> {
    if ubar.is_zero() {
        return Err(Error::ZeroElement("ū"));
    }
    if membership(p, &(u * ubar), MemberKind::Bounded, bound, budget)?.is_none() {
        return Err(Error::Extension(format!("{} is not certified in S_b", p.show(&(u * ubar)))));
    }
    let fu = f.eval(p, ubar)?;
    if fu.is_zero() {
        return Ok(FullExtension::NoExtension);
    }
    let mut values = Vec::with_capacity(p.num_generators());
    let mut ks = Vec::with_capacity(p.num_generators());
    for i in 0..p.num_generators() {
        let g = Expr::var(i);
        let k = (0..=max_k)
            .find(|&k| matches!(membership(p, &(&ubar.pow(k) * &g), MemberKind::Minus, bound, budget), Ok(Some(_))))
            .ok_or(Error::NoMinusExponent(max_k))?;
        values.push(extension_value_at(p, f, ubar, &g, k)?);
        ks.push(k);
    }
    let h = Hom::new(values);
    if !verify_hom(p, &h) {
        return Err(Error::NotMonotone(h.show(p)));
    }
    Ok(FullExtension::Full(h, ks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{q, q_int};

    fn inst_d() -> Presentation {
        let g = Expr::var(0);
        let h = Expr::var(1);
        let gh = &g * &h;
        Presentation::new(["g", "h"])
            .with_relation(Expr::one(), gh.clone())
            .with_relation(gh, Expr::constant(2u32))
            .with_relation(h, Expr::constant(2u32))
    }

    fn slice(beta: Q, gamma: Q, domain: MemberKind) -> SliceHom {
        let h = Monomial::var(1);
        let gh = Monomial::from_exps(vec![1, 1]);
        SliceHom::new(vec![gh, h], vec![gamma, beta], domain)
    }

    #[test]
    fn b_to_minus_agrees_on_bounded() {
        let p = inst_d();
        let f = slice(q(1, 2), q_int(2), MemberKind::Bounded);
        let ext = extend_b_to_minus(f.clone()).unwrap();
        let gh = &Expr::var(0) * &Expr::var(1);
        assert_eq!(ext.eval(&p, &gh).unwrap(), f.eval(&p, &gh).unwrap());
        assert_eq!(ext.eval(&p, &Expr::zero()).unwrap(), q_int(0));
        assert_eq!(ext.eval(&p, &Expr::one()).unwrap(), q_int(1));
        assert_eq!(ext.eval(&p, &Expr::var(1)).unwrap(), q(1, 2));
        // g is not in S₋.
        assert!(ext.eval(&p, &Expr::var(0)).is_err());
    }

    #[test]
    fn minus_to_full_single_step() {
        let p = inst_d();
        let f = slice(q(1, 2), q_int(2), MemberKind::Minus);
        let h = Expr::var(1);
        let u = &Expr::constant(4u32) * &Expr::var(0);
        match extend_minus_to_full(&p, &f, &h, &u, 4, 8, &Budget::default()).unwrap() {
            FullExtension::Full(hom, ks) => {
                assert_eq!(hom.values(), &[q_int(4), q(1, 2)]);
                assert_eq!(ks, vec![1, 0]);
            }
            other => panic!("{other:?}"),
        }
        let g = Expr::var(0);
        let k1 = extension_value_at(&p, &f, &h, &g, 1).unwrap();
        let k2 = extension_value_at(&p, &f, &h, &g, 2).unwrap();
        assert_eq!(k1, k2);
    }

    #[test]
    fn vanishing_ubar_has_no_extension() {
        let p = inst_d();
        let f = slice(q_int(0), q_int(1), MemberKind::Minus);
        let u = &Expr::constant(4u32) * &Expr::var(0);
        let r = extend_minus_to_full(&p, &f, &Expr::var(1), &u, 4, 8, &Budget::default()).unwrap();
        assert_eq!(r, FullExtension::NoExtension);
    }
}
