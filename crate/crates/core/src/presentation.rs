//! Finite presentations of preordered semirings.

use crate::error::{Error, Result};
use crate::expr::{Expr, Monomial};
use crate::spectrum::HomFamily;

/// Linear constraint on exponents: `Σ lhs ≥ Σ rhs` where each side is a list of
/// generator indices (with repetition) plus a constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentConstraint {
    pub lhs: Vec<usize>,
    pub lhs_const: u32,
    pub rhs: Vec<usize>,
    pub rhs_const: u32,
}

impl ExponentConstraint {
    pub fn holds(&self, m: &Monomial) -> bool {
        let side = |gens: &[usize], c: u32| gens.iter().map(|&i| m.exp(i)).sum::<u32>() + c;
        side(&self.lhs, self.lhs_const) >= side(&self.rhs, self.rhs_const)
    }
}

/// A set of monomials, given as a list or as an exponent predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialSet {
    List(Vec<Monomial>),
    Where(Vec<ExponentConstraint>),
}

impl MonomialSet {
    pub fn contains(&self, m: &Monomial) -> bool {
        match self {
            MonomialSet::List(v) => v.contains(m),
            MonomialSet::Where(cs) => cs.iter().all(|c| c.holds(m)),
        }
    }

    /// Members of total degree at most `max_degree`, by degree then lexicographically.
    pub fn enumerate(&self, nvars: usize, max_degree: u32) -> Vec<Monomial> {
        match self {
            MonomialSet::List(v) => {
                let mut v: Vec<_> = v.iter().filter(|m| m.degree() <= max_degree).cloned().collect();
                v.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
                v
            }
            MonomialSet::Where(_) => Monomial::enumerate(nvars, max_degree)
                .into_iter()
                .filter(|m| self.contains(m))
                .collect(),
        }
    }

    pub fn singleton_one() -> Self {
        MonomialSet::List(vec![Monomial::one()])
    }
}

/// Generators, base relations `lhs ≼ rhs`, and optional distinguished data.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<(Expr, Expr)>,
    pub power_universal: Option<Expr>,
    pub m_set: Option<MonomialSet>,
    /// Generators of the multiplicative set `T`.
    pub t_set: Option<Vec<Expr>>,
    pub family: Option<HomFamily>,
}

impl Presentation {
    pub fn new<S: Into<String>>(generators: impl IntoIterator<Item = S>) -> Self {
        Presentation {
            generators: generators.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn with_relation(mut self, lhs: Expr, rhs: Expr) -> Self {
        self.relations.push((lhs, rhs));
        self
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn show(&self, e: &Expr) -> String {
        e.display(&self.generators).to_string()
    }

    /// Checks that every expression mentions only declared generators and that
    /// the listed `T` generators are nonzero.
    pub fn validate(&self) -> Result<()> {
        let n = self.generators.len();
        let check = |e: &Expr| {
            if e.width() > n {
                Err(Error::UnknownGenerator(format!("_g{}", e.width() - 1)))
            } else {
                Ok(())
            }
        };
        for (l, r) in &self.relations {
            check(l)?;
            check(r)?;
        }
        if let Some(u) = &self.power_universal {
            check(u)?;
        }
        if let Some(ts) = &self.t_set {
            for t in ts {
                check(t)?;
                if t.is_zero() {
                    return Err(Error::ZeroElement("multiplicative set generator"));
                }
            }
        }
        Ok(())
    }
}
