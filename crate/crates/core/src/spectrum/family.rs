//! Box-parametrized families of homomorphisms, grid-and-refine separation and
//! exact supremum analysis of evaluation maps over a family.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::{eval_at, q, verify_hom, Hom, Q};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::presentation::Presentation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Closed(Q),
    Open(Q),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub lo: Bound,
    pub hi: Bound,
}

impl Param {
    fn is_truncated(&self) -> bool {
        !matches!(self.lo, Bound::Closed(_)) || !matches!(self.hi, Bound::Closed(_))
    }
}

/// Ratio of two polynomials in the parameters with natural coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFun {
    pub num: Expr,
    pub den: Expr,
}

impl RatFun {
    pub fn poly(num: Expr) -> Self {
        RatFun { num, den: Expr::one() }
    }

    pub fn eval(&self, point: &[Q]) -> Option<Q> {
        let d = eval_at(&self.den, point)?;
        if d.is_zero() {
            return None;
        }
        Some(eval_at(&self.num, point)? / d)
    }
}

/// `lhs ≤ rhs` over the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamConstraint {
    pub lhs: Expr,
    pub rhs: Expr,
}

impl ParamConstraint {
    fn holds(&self, point: &[Q]) -> bool {
        match (eval_at(&self.lhs, point), eval_at(&self.rhs, point)) {
            (Some(a), Some(b)) => a <= b,
            _ => false,
        }
    }
}

/// A slice of the spectrum: each admissible parameter assignment gives a
/// homomorphism through the per-generator rational functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomFamily {
    pub params: Vec<Param>,
    pub constraints: Vec<ParamConstraint>,
    /// One rational function per generator, in generator order.
    pub values: Vec<RatFun>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparateConfig {
    /// Grid points per parameter.
    pub grid: usize,
    /// Number of refinement rounds around the best point.
    pub refine: usize,
    /// Truncation distance for open or infinite parameter bounds.
    pub floor: Q,
}

impl Default for SeparateConfig {
    fn default() -> Self {
        SeparateConfig { grid: 9, refine: 3, floor: q(1, 64) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separation {
    Found(Hom),
    NotFoundInFamily,
}

impl HomFamily {
    /// Closed rational box obtained by truncating open ends at `floor` and
    /// infinite upper ends at `1/floor²`.
    pub fn bounds(&self, floor: &Q) -> Result<Vec<(Q, Q)>> {
        self.params
            .iter()
            .map(|p| {
                let lo = match &p.lo {
                    Bound::Closed(a) => a.clone(),
                    Bound::Open(a) => a + floor,
                    Bound::Infinite => return Err(Error::EmptyBox(p.name.clone())),
                };
                let hi = match &p.hi {
                    Bound::Closed(b) => b.clone(),
                    Bound::Open(b) => b - floor,
                    Bound::Infinite => (floor * floor).recip(),
                };
                if lo > hi || lo.is_negative() {
                    return Err(Error::EmptyBox(p.name.clone()));
                }
                Ok((lo, hi))
            })
            .collect()
    }

    pub fn is_truncated(&self) -> bool {
        self.params.iter().any(Param::is_truncated)
    }

    pub fn feasible(&self, point: &[Q]) -> bool {
        self.constraints.iter().all(|c| c.holds(point))
    }

    /// The homomorphism at a parameter point, when the point satisfies the
    /// constraints and every value is defined and nonnegative.
    pub fn point(&self, point: &[Q]) -> Option<Hom> {
        if !self.feasible(point) {
            return None;
        }
        let vals: Option<Vec<Q>> = self.values.iter().map(|r| r.eval(point)).collect();
        let vals = vals?;
        if vals.iter().any(Signed::is_negative) {
            return None;
        }
        Some(Hom::new(vals))
    }

    pub fn grid(bx: &[(Q, Q)], n: usize) -> Vec<Vec<Q>> {
        let axes: Vec<Vec<Q>> = bx
            .iter()
            .map(|(lo, hi)| {
                if n <= 1 || lo == hi {
                    return vec![lo.clone()];
                }
                let steps = Q::from_integer((n as i64 - 1).into());
                (0..n)
                    .map(|i| lo + (hi - lo) * Q::from_integer((i as i64).into()) / &steps)
                    .collect()
            })
            .collect();
        let mut out = vec![Vec::new()];
        for axis in axes {
            let mut next = Vec::with_capacity(out.len() * axis.len());
            for prefix in &out {
                for v in &axis {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }

    /// Feasible grid points together with their homomorphisms.
    pub fn feasible_points(&self, cfg: &SeparateConfig) -> Result<Vec<(Vec<Q>, Hom)>> {
        let bx = self.bounds(&cfg.floor)?;
        Ok(Self::grid(&bx, cfg.grid)
            .into_iter()
            .filter_map(|pt| self.point(&pt).map(|f| (pt, f)))
            .collect())
    }

    /// Homomorphisms at the grid points and their single-parameter slice
    /// projections; cheaper than the full candidate set.
    pub fn sample_homs(&self, cfg: &SeparateConfig) -> Result<Vec<Hom>> {
        let bx = self.bounds(&cfg.floor)?;
        Ok(candidates(self, &bx, cfg.grid, 1).iter().filter_map(|pt| self.point(pt)).collect())
    }

    pub fn first_verified_point(&self, p: &Presentation) -> Option<Hom> {
        self.feasible_points(&SeparateConfig::default())
            .ok()?
            .into_iter()
            .map(|(_, f)| f)
            .find(|f| verify_hom(p, f))
    }
}

/// Grid-and-refine search over the family for a verified `f` with
/// `f(x) < f(y)`, taking the largest margin among the candidates of the first
/// round that has any. `NotFoundInFamily` is relative to the family and the grid.
pub fn separate(p: &Presentation, fam: &HomFamily, x: &Expr, y: &Expr, cfg: &SeparateConfig) -> Result<Separation> {
    let mut bx = fam.bounds(&cfg.floor)?;
    let grid = cfg.grid.max(2);
    for _ in 0..=cfg.refine {
        let mut best: Option<(Q, Vec<Q>)> = None;
        let mut found: Option<(Q, Hom)> = None;
        for pt in candidates(fam, &bx, grid, 2) {
            let Some(f) = fam.point(&pt) else { continue };
            let margin = f.eval(y)? - f.eval(x)?;
            if margin.is_positive() && found.as_ref().is_none_or(|(m, _)| &margin > m) && verify_hom(p, &f) {
                found = Some((margin.clone(), f));
            }
            if best.as_ref().is_none_or(|(m, _)| &margin > m) {
                best = Some((margin, pt));
            }
        }
        if let Some((_, f)) = found {
            return Ok(Separation::Found(f));
        }
        let Some((_, center)) = best else { break };
        let divisor = Q::from_integer((grid as i64 - 1).into());
        bx = bx
            .iter()
            .zip(&center)
            .map(|((lo, hi), c)| {
                let w = (hi - lo) / &divisor;
                let nlo = if &(c - &w) > lo { c - &w } else { lo.clone() };
                let nhi = if &(c + &w) < hi { c + &w } else { hi.clone() };
                (nlo, nhi)
            })
            .collect();
    }
    Ok(Separation::NotFoundInFamily)
}

/// Coefficients (lowest degree first) of `e` as a polynomial in parameter
/// `var`, with the other parameters fixed to `point`.
fn slice_poly(e: &Expr, point: &[Q], var: usize) -> Vec<Q> {
    let mut coeffs: Vec<Q> = Vec::new();
    for (m, c) in e.terms() {
        let mut t = Q::from_integer(num_bigint::BigInt::from(c.clone()));
        for (i, &k) in m.exps().iter().enumerate() {
            if i != var && k > 0 {
                t *= num_traits::pow(point[i].clone(), k as usize);
            }
        }
        let d = m.exp(var) as usize;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, Q::zero());
        }
        coeffs[d] += t;
    }
    coeffs
}

fn poly_eval(c: &[Q], t: &Q) -> Q {
    c.iter().rev().fold(Q::zero(), |acc, a| acc * t + a)
}

/// Feasible interval of parameter `var` through `point`, intersected with the
/// box. Linear constraints are solved exactly; higher-degree ones are bisected
/// from `point` when it is feasible and otherwise left to the final filter.
fn slice_range(fam: &HomFamily, bx: &[(Q, Q)], point: &[Q], var: usize, feasible: bool) -> Option<(Q, Q)> {
    let (mut lo, mut hi) = bx[var].clone();
    let t0 = point[var].clone();
    for c in &fam.constraints {
        let l = slice_poly(&c.lhs, point, var);
        let r = slice_poly(&c.rhs, point, var);
        let n = l.len().max(r.len());
        let d: Vec<Q> = (0..n)
            .map(|i| r.get(i).cloned().unwrap_or_default() - l.get(i).cloned().unwrap_or_default())
            .collect();
        let deg = d.iter().rposition(|a| !a.is_zero());
        match deg {
            None | Some(0) => {}
            Some(1) => {
                let root = -&d[0] / &d[1];
                if d[1].is_positive() {
                    if root > lo {
                        lo = root;
                    }
                } else if root < hi {
                    hi = root;
                }
            }
            Some(_) if feasible => {
                // Bisection toward each end keeps the feasible side.
                if poly_eval(&d, &hi).is_negative() {
                    let (mut ok, mut bad) = (t0.clone(), hi.clone());
                    for _ in 0..40 {
                        let mid = (&ok + &bad) / q(2, 1);
                        if poly_eval(&d, &mid).is_negative() {
                            bad = mid;
                        } else {
                            ok = mid;
                        }
                    }
                    hi = ok;
                }
                if poly_eval(&d, &lo).is_negative() {
                    let (mut ok, mut bad) = (t0.clone(), lo.clone());
                    for _ in 0..40 {
                        let mid = (&ok + &bad) / q(2, 1);
                        if poly_eval(&d, &mid).is_negative() {
                            bad = mid;
                        } else {
                            ok = mid;
                        }
                    }
                    lo = ok;
                }
            }
            Some(_) => {}
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Deterministic candidate points of the box: grid points, the endpoints and
/// midpoint of every single-parameter feasible slice through a grid point, and
/// further rounds of slice points from the feasible candidates.
fn candidates(fam: &HomFamily, bx: &[(Q, Q)], grid: usize, rounds: usize) -> Vec<Vec<Q>> {
    let mut seen: BTreeSet<Vec<Q>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |pt: Vec<Q>, out: &mut Vec<Vec<Q>>| {
        if fam.feasible(&pt) && seen.insert(pt.clone()) {
            out.push(pt);
        }
    };
    let mut layer = HomFamily::grid(bx, grid);
    for round in 0..rounds {
        let mut next = Vec::new();
        for pt in &layer {
            let feasible = fam.feasible(pt);
            if round == 0 {
                push(pt.clone(), &mut out);
            }
            for var in 0..pt.len() {
                let Some((lo, hi)) = slice_range(fam, bx, pt, var, feasible) else { continue };
                let mid = (&lo + &hi) / q(2, 1);
                for t in [lo, hi, mid] {
                    let mut cand = pt.clone();
                    cand[var] = t;
                    if fam.feasible(&cand) {
                        next.push(cand);
                    }
                }
            }
        }
        for pt in &next {
            push(pt.clone(), &mut out);
        }
        layer = next;
    }
    out
}

/// Maximum of `objective` over the candidate points of the truncated box.
fn sup_on_box(
    fam: &HomFamily,
    objective: &dyn Fn(&Hom) -> Option<Q>,
    floor: &Q,
    grid: usize,
) -> Result<Option<(Q, Vec<Q>)>> {
    let bx = fam.bounds(floor)?;
    let mut best: Option<(Q, Vec<Q>)> = None;
    for pt in candidates(fam, &bx, grid, 2) {
        let Some(f) = fam.point(&pt) else { continue };
        if let Some(v) = objective(&f) {
            if best.as_ref().is_none_or(|(b, _)| &v > b) {
                best = Some((v, pt));
            }
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Boundedness {
    /// The supremum is attained and stable under widening the truncation.
    Bounded { sup: Q, at: Vec<Q> },
    /// Maximizers at successively wider truncations, with strictly growing values.
    Unbounded { sequence: Vec<(Vec<Q>, Q)> },
    Inconclusive { sups: Vec<Q> },
}

/// Decides boundedness of `objective` over the family: exact maxima at the
/// truncation floors `φ, φ/2, φ/4`, compared for stability or growth.
pub fn boundedness(fam: &HomFamily, objective: &dyn Fn(&Hom) -> Option<Q>, cfg: &SeparateConfig) -> Result<Boundedness> {
    let levels = if fam.is_truncated() { 3 } else { 1 };
    let mut seq: Vec<(Vec<Q>, Q)> = Vec::new();
    let mut floor = cfg.floor.clone();
    for _ in 0..levels {
        match sup_on_box(fam, objective, &floor, cfg.grid)? {
            Some((v, pt)) => seq.push((pt, v)),
            None => return Ok(Boundedness::Inconclusive { sups: Vec::new() }),
        }
        floor /= q(2, 1);
    }
    let vals: Vec<Q> = seq.iter().map(|(_, v)| v.clone()).collect();
    if vals.windows(2).all(|w| w[0] == w[1]) {
        let (pt, v) = seq.swap_remove(0);
        return Ok(Boundedness::Bounded { sup: v, at: pt });
    }
    if vals.windows(2).all(|w| w[0] < w[1]) {
        return Ok(Boundedness::Unbounded { sequence: seq });
    }
    Ok(Boundedness::Inconclusive { sups: vals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::q_int;

    fn inst_a() -> (Presentation, HomFamily) {
        let x = Expr::var(0);
        let p = Presentation::new(["x"])
            .with_relation(Expr::one(), x.clone())
            .with_relation(x, Expr::constant(2u32));
        let fam = HomFamily {
            params: vec![Param { name: "c".into(), lo: Bound::Closed(q_int(1)), hi: Bound::Closed(q_int(2)) }],
            constraints: vec![],
            values: vec![RatFun::poly(Expr::var(0))],
        };
        (p, fam)
    }

    pub(crate) fn inst_d() -> (Presentation, HomFamily) {
        let g = Expr::var(0);
        let h = Expr::var(1);
        let gh = &g * &h;
        let p = Presentation::new(["g", "h"])
            .with_relation(Expr::one(), gh.clone())
            .with_relation(gh.clone(), Expr::constant(2u32))
            .with_relation(h.clone(), Expr::constant(2u32));
        let ab = &Expr::var(0) * &Expr::var(1);
        let fam = HomFamily {
            params: vec![
                Param { name: "a".into(), lo: Bound::Closed(q(1, 2)), hi: Bound::Infinite },
                Param { name: "b".into(), lo: Bound::Open(q_int(0)), hi: Bound::Closed(q_int(2)) },
            ],
            constraints: vec![
                ParamConstraint { lhs: Expr::one(), rhs: ab.clone() },
                ParamConstraint { lhs: ab, rhs: Expr::constant(2u32) },
            ],
            values: vec![RatFun::poly(Expr::var(0)), RatFun::poly(Expr::var(1))],
        };
        (p, fam)
    }

    #[test]
    fn separate_inst_a() {
        let (p, fam) = inst_a();
        let x = Expr::var(0);
        // goal x² ≿ 2: c = 1 gives 1 < 2
        match separate(&p, &fam, &x.pow(2), &Expr::constant(2u32), &SeparateConfig::default()).unwrap() {
            Separation::Found(f) => {
                assert!(f.eval(&x.pow(2)).unwrap() < q_int(2));
                assert!(verify_hom(&p, &f));
            }
            other => panic!("{other:?}"),
        }
        // 2 ≥ c on [1, 2]
        let r = separate(&p, &fam, &Expr::constant(2u32), &x, &SeparateConfig::default()).unwrap();
        assert_eq!(r, Separation::NotFoundInFamily);
    }

    #[test]
    fn separate_inst_d() {
        let (p, fam) = inst_d();
        let g = Expr::var(0);
        match separate(&p, &fam, &Expr::constant(2u32), &g, &SeparateConfig::default()).unwrap() {
            Separation::Found(f) => {
                assert!(f.eval(&g).unwrap() > q_int(2));
                assert!(verify_hom(&p, &f));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_box() {
        let (p, mut fam) = inst_a();
        fam.params[0].hi = Bound::Closed(q_int(0));
        assert!(matches!(
            separate(&p, &fam, &Expr::one(), &Expr::one(), &SeparateConfig::default()),
            Err(Error::EmptyBox(_))
        ));
    }

    #[test]
    fn boundedness_of_monomials() {
        let (_, fam) = inst_d();
        let cfg = SeparateConfig::default();
        // g·h² is bounded by 4, g is unbounded.
        let m = &Expr::var(0) * &Expr::var(1).pow(2);
        match boundedness(&fam, &|f: &Hom| f.eval(&m).ok(), &cfg).unwrap() {
            Boundedness::Bounded { sup, .. } => assert_eq!(sup, q_int(4)),
            other => panic!("{other:?}"),
        }
        let g = Expr::var(0);
        assert!(matches!(
            boundedness(&fam, &|f: &Hom| f.eval(&g).ok(), &cfg).unwrap(),
            Boundedness::Unbounded { .. }
        ));
    }
}
