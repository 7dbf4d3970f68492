//! Spectral points as exact-rational generator valuations, parametrized
//! families of them, and the constructions built on top: separation,
//! `S₊`/`S₋`/`S_b` membership, the two extension formulas, condition reports
//! and the duality orchestrator.

mod conditions;
mod dual;
mod extension;
mod family;
mod membership;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::presentation::Presentation;

pub use conditions::{
    check_m1, check_m1_prime, check_m2, check_m2_prime, ConditionConfig, M1Entry, M1Report, M1Witness, M2Entry,
    M2Report, M2Status,
};
pub use dual::{dual_compare, DualConfig, DualOutcome};
pub use extension::{extend_b_to_minus, PartialHom, extend_minus_to_full, extension_value_at, FullExtension, MinusHom, SliceHom};
pub use family::{
    boundedness, separate, Boundedness, Bound, HomFamily, Param, ParamConstraint, RatFun, SeparateConfig, Separation,
};
pub use membership::{membership, replay_membership, MemberKind, MembershipCertificate};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Evaluates `e` with variable `i` mapped to `point[i]`; `None` when `e`
/// mentions a variable outside the point.
pub fn eval_at(e: &Expr, point: &[Q]) -> Option<Q> {
    let mut acc = Q::zero();
    for (m, c) in e.terms() {
        let mut t = Q::from_integer(BigInt::from(c.clone()));
        for (i, &k) in m.exps().iter().enumerate() {
            if k == 0 {
                continue;
            }
            let v = point.get(i)?;
            t *= num_traits::pow(v.clone(), k as usize);
        }
        acc += t;
    }
    Some(acc)
}

/// A semiring homomorphism `ℕ[g₁..g_m] → ℚ≥0` given by its generator values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hom {
    values: Vec<Q>,
}

impl Hom {
    pub fn new(values: Vec<Q>) -> Self {
        Hom { values }
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn eval(&self, x: &Expr) -> Result<Q> {
        eval_at(x, &self.values).ok_or(Error::UncoveredGenerator(self.values.len()))
    }

    pub fn show(&self, p: &Presentation) -> String {
        p.generators
            .iter()
            .zip(&self.values)
            .map(|(g, v)| format!("{g} = {v}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

pub fn eval(f: &Hom, x: &Expr) -> Result<Q> {
    f.eval(x)
}

/// True iff `f` covers every generator with a nonnegative value and respects
/// every base relation. Each derivation rule preserves `f(a) ≤ f(b)`, so this
/// implies monotonicity on the whole generated preorder.
pub fn verify_hom(p: &Presentation, f: &Hom) -> bool {
    if f.values.len() != p.num_generators() || f.values.iter().any(Signed::is_negative) {
        return false;
    }
    p.relations.iter().all(|(l, r)| match (f.eval(l), f.eval(r)) {
        (Ok(a), Ok(b)) => a <= b,
        _ => false,
    })
}

/// Restriction of `f` along the inclusion of the subsemiring generated by the
/// given generator indices: the values on those generators.
pub fn pullback(f: &Hom, gens: &[usize]) -> Vec<Q> {
    gens.iter().map(|&i| f.values[i].clone()).collect()
}

/// Evaluates the fraction `s/t` under the localized homomorphism `s/t ↦ f(s)/f(t)`.
pub fn eval_fraction(f: &Hom, s: &Expr, t: &Expr) -> Result<Option<Q>> {
    let ft = f.eval(t)?;
    if ft.is_zero() {
        return Ok(None);
    }
    Ok(Some(f.eval(s)? / ft))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst_a() -> Presentation {
        let x = Expr::var(0);
        Presentation::new(["x"])
            .with_relation(Expr::one(), x.clone())
            .with_relation(x, Expr::constant(2u32))
    }

    fn inst_d() -> Presentation {
        let g = Expr::var(0);
        let h = Expr::var(1);
        let gh = &g * &h;
        Presentation::new(["g", "h"])
            .with_relation(Expr::one(), gh.clone())
            .with_relation(gh, Expr::constant(2u32))
            .with_relation(h, Expr::constant(2u32))
    }

    #[test]
    fn eval_examples() {
        let f = Hom::new(vec![q(3, 2)]);
        let x = Expr::var(0);
        assert_eq!(f.eval(&(&x.pow(2) + &Expr::one())).unwrap(), q(13, 4));
        assert_eq!(f.eval(&Expr::zero()).unwrap(), q_int(0));
        assert_eq!(f.eval(&Expr::one()).unwrap(), q_int(1));
        let d = Hom::new(vec![q_int(4), q(1, 2)]);
        assert_eq!(d.eval(&(&Expr::var(0) * &Expr::var(1))).unwrap(), q_int(2));
        assert!(matches!(f.eval(&Expr::var(1)), Err(Error::UncoveredGenerator(_))));
    }

    #[test]
    fn verify_examples() {
        assert!(verify_hom(&inst_a(), &Hom::new(vec![q(3, 2)])));
        assert!(!verify_hom(&inst_a(), &Hom::new(vec![q_int(3)])));
        assert!(!verify_hom(&inst_d(), &Hom::new(vec![q_int(4), q_int(1)])));
        assert!(verify_hom(&inst_d(), &Hom::new(vec![q_int(4), q(1, 2)])));
    }

    #[test]
    fn fraction_eval() {
        let f = Hom::new(vec![q_int(4), q(1, 2)]);
        let v = eval_fraction(&f, &Expr::var(0), &Expr::var(1)).unwrap().unwrap();
        assert_eq!(v, q_int(8));
        assert_eq!(pullback(&f, &[1]), vec![q(1, 2)]);
    }
}
