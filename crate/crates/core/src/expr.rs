//! Elements of the free commutative semiring `ℕ[g₁, …, g_m]`.
//!
//! An [`Expr`] is a finite map from monomials to positive coefficients. The
//! representation is canonical, so semiring equality is structural equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exponent vector with trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, k: u32) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = k;
        Monomial::from_exps(v)
    }

    pub fn from_exps(mut v: Vec<u32>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of leading variable slots the monomial uses.
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v = (0..n).map(|i| self.exp(i) + other.exp(i)).collect();
        Monomial::from_exps(v)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial::from_exps(self.0.iter().map(|e| e * k).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| e <= other.exp(i))
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let n = other.0.len();
        Some(Monomial::from_exps((0..n).map(|i| other.exp(i) - self.exp(i)).collect()))
    }

    /// All monomials in `nvars` variables of total degree at most `max_degree`,
    /// ordered by degree and then lexicographically.
    pub fn enumerate(nvars: usize, max_degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            let mut cur = vec![0u32; nvars];
            fill_degree(&mut cur, 0, d, &mut out);
        }
        out
    }
}

fn fill_degree(cur: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Monomial>) {
    if i == cur.len() {
        if left == 0 {
            out.push(Monomial::from_exps(cur.clone()));
        }
        return;
    }
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(Monomial::from_exps(cur.clone()));
        cur[i] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill_degree(cur, i + 1, left - e, out);
    }
    cur[i] = 0;
}

/// Canonical element of `ℕ[g₁, …, g_m]`: no zero coefficients are stored and
/// the zero element is the empty map.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expr {
    terms: BTreeMap<Monomial, BigUint>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Self::constant(1u32)
    }

    pub fn constant(n: impl Into<BigUint>) -> Self {
        Self::term(Monomial::one(), n)
    }

    pub fn var(i: usize) -> Self {
        Self::term(Monomial::var(i), 1u32)
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, 1u32)
    }

    pub fn term(m: Monomial, c: impl Into<BigUint>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Expr { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigUint)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> BigUint {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The value of a constant element.
    pub fn as_constant(&self) -> Option<BigUint> {
        match self.terms.len() {
            0 => Some(BigUint::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn as_small_constant(&self) -> Option<u64> {
        self.as_constant().and_then(|c| c.to_u64())
    }

    /// The single monomial of `self` when it is a monomial with coefficient 1.
    pub fn as_monomial(&self) -> Option<&Monomial> {
        match self.terms.iter().next() {
            Some((m, c)) if self.terms.len() == 1 && c.is_one() => Some(m),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn max_coeff(&self) -> BigUint {
        self.terms.values().max().cloned().unwrap_or_default()
    }

    /// Number of variable slots mentioned.
    pub fn width(&self) -> usize {
        self.terms.keys().map(Monomial::width).max().unwrap_or(0)
    }

    /// Whether only variables in `allowed` occur.
    pub fn uses_only(&self, allowed: impl Fn(usize) -> bool) -> bool {
        self.terms
            .keys()
            .all(|m| m.exps().iter().enumerate().all(|(i, &e)| e == 0 || allowed(i)))
    }

    pub fn pow(&self, k: u32) -> Expr {
        let mut acc = Expr::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &BigUint) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(t, k)| (t.mul(m), k.clone())).collect(),
        }
    }

    /// Coefficient-wise comparison: `other` is a sub-sum of `self`.
    pub fn contains(&self, other: &Expr) -> bool {
        other
            .terms
            .iter()
            .all(|(m, c)| self.terms.get(m).is_some_and(|d| d >= c))
    }

    /// `self - other` when `other` is a sub-sum of `self`.
    pub fn checked_sub(&self, other: &Expr) -> Option<Expr> {
        if !self.contains(other) {
            return None;
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let d = terms.get_mut(m).expect("contained");
            *d -= c;
            if d.is_zero() {
                terms.remove(m);
            }
        }
        Some(Expr { terms })
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, names }
    }

    /// Binomial coefficient as a constant.
    pub fn binomial(n: u32, k: u32) -> BigUint {
        let mut acc = BigUint::one();
        for i in 0..k {
            acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
        }
        acc
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;

    fn add(self, rhs: &Expr) -> Expr {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            *terms.entry(m.clone()).or_default() += c;
        }
        Expr { terms }
    }
}

impl Add for Expr {
    type Output = Expr;

    fn add(self, rhs: Expr) -> Expr {
        &self + &rhs
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;

    fn mul(self, rhs: &Expr) -> Expr {
        let mut terms: BTreeMap<Monomial, BigUint> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                *terms.entry(m1.mul(m2)).or_default() += c1 * c2;
            }
        }
        Expr { terms }
    }
}

impl Mul for Expr {
    type Output = Expr;

    fn mul(self, rhs: Expr) -> Expr {
        &self * &rhs
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| &a + &b)
    }
}

impl From<u64> for Expr {
    fn from(n: u64) -> Self {
        Expr::constant(n)
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    names: &'a [String],
}

fn var_name(names: &[String], i: usize) -> String {
    names.get(i).cloned().unwrap_or_else(|| format!("_g{i}"))
}

pub(crate) fn fmt_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(var_name(names, i)),
            _ => parts.push(format!("{}^{}", var_name(names, i), e)),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expr.is_zero() {
            return write!(f, "0");
        }
        // Graded order, highest degree first.
        let mut terms: Vec<_> = self.expr.terms().collect();
        terms.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then_with(|| b.cmp(a)));
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", fmt_monomial(m, self.names))?;
            } else {
                write!(f, "{}*{}", c, fmt_monomial(m, self.names))?;
            }
        }
        Ok(())
    }
}

/// Expression tree as written by a user, before normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawExpr {
    Num(BigUint),
    Name(String),
    Add(Box<RawExpr>, Box<RawExpr>),
    Mul(Box<RawExpr>, Box<RawExpr>),
    Pow(Box<RawExpr>, u32),
}

/// Default bound on exponents accepted by [`normalize`].
pub const DEFAULT_MAX_EXPONENT: u32 = 64;

/// Canonical form of a raw expression over the given generator names.
pub fn normalize(raw: &RawExpr, names: &[String], max_exponent: u32) -> Result<Expr> {
    match raw {
        RawExpr::Num(n) => Ok(Expr::constant(n.clone())),
        RawExpr::Name(s) => names
            .iter()
            .position(|g| g == s)
            .map(Expr::var)
            .ok_or_else(|| Error::UnknownGenerator(s.clone())),
        RawExpr::Add(a, b) => Ok(&normalize(a, names, max_exponent)? + &normalize(b, names, max_exponent)?),
        RawExpr::Mul(a, b) => Ok(&normalize(a, names, max_exponent)? * &normalize(b, names, max_exponent)?),
        RawExpr::Pow(a, k) => {
            if *k > max_exponent {
                return Err(Error::ExponentOverflow { exponent: *k, bound: max_exponent });
            }
            Ok(normalize(a, names, max_exponent)?.pow(*k))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn raw_add(a: RawExpr, b: RawExpr) -> RawExpr {
        RawExpr::Add(Box::new(a), Box::new(b))
    }

    fn raw_mul(a: RawExpr, b: RawExpr) -> RawExpr {
        RawExpr::Mul(Box::new(a), Box::new(b))
    }

    fn num(n: u32) -> RawExpr {
        RawExpr::Num(n.into())
    }

    fn name(s: &str) -> RawExpr {
        RawExpr::Name(s.into())
    }

    #[test]
    fn binomial_square() {
        let n = names(&["x"]);
        let e = raw_mul(raw_add(name("x"), num(1)), raw_add(name("x"), num(1)));
        let e = normalize(&e, &n, 64).unwrap();
        assert_eq!(e.display(&n).to_string(), "x^2 + 2*x + 1");
    }

    #[test]
    fn absorbing_zero() {
        let n = names(&["x"]);
        let e = raw_add(raw_mul(num(0), name("x")), num(1));
        assert_eq!(normalize(&e, &n, 64).unwrap(), Expr::one());
    }

    #[test]
    fn cube_matches_repeated_distribution() {
        // Oracle: distribute (x+y)·(x+y)·(x+y) term by term over the four
        // monomials of each partial product.
        let n = names(&["x", "y"]);
        let sum = raw_add(name("x"), name("y"));
        let e = normalize(&RawExpr::Pow(Box::new(sum), 3), &n, 64).unwrap();
        let mut oracle: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let xs = [a, b, c].iter().filter(|&&t| t == 0).count() as u32;
                    *oracle.entry((xs, 3 - xs)).or_default() += 1;
                }
            }
        }
        assert_eq!(oracle[&(3, 0)], 1);
        assert_eq!(oracle[&(2, 1)], 3);
        for ((i, j), c) in oracle {
            let m = Monomial::from_exps(vec![i, j]);
            assert_eq!(e.coeff(&m), BigUint::from(c));
        }
        assert_eq!(e.display(&n).to_string(), "x^3 + 3*x^2*y + 3*x*y^2 + y^3");
    }

    #[test]
    fn unknown_generator_and_overflow() {
        let n = names(&["x"]);
        assert!(matches!(normalize(&name("z"), &n, 64), Err(Error::UnknownGenerator(_))));
        let big = RawExpr::Pow(Box::new(name("x")), 100);
        assert!(matches!(normalize(&big, &n, 64), Err(Error::ExponentOverflow { .. })));
    }

    #[test]
    fn contains_and_sub() {
        let x = Expr::var(0);
        let e = &(&x + &x) + &Expr::one();
        assert!(e.contains(&x));
        assert_eq!(e.checked_sub(&x).unwrap(), &x + &Expr::one());
        assert!(e.checked_sub(&Expr::constant(2u32)).is_none());
    }

    #[test]
    fn enumerate_monomials() {
        let ms = Monomial::enumerate(2, 2);
        assert_eq!(ms.len(), 6);
        assert!(ms[0].is_one());
    }

    #[test]
    fn binomials() {
        assert_eq!(Expr::binomial(5, 2), BigUint::from(10u32));
        assert_eq!(Expr::binomial(12, 0), BigUint::from(1u32));
    }
}
