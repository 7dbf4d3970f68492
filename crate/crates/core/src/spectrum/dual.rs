//! Runs separation and the asymptotic search side by side and reconciles them.

use std::thread;

use super::family::{separate, SeparateConfig, Separation};
use super::Hom;
use crate::asymptotic::{check_asymptotic, AsymConfig, AsymOutcome, AsymptoticWitness};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::presentation::Presentation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualConfig {
    pub asym: AsymConfig,
    pub separate: SeparateConfig,
}

impl Default for DualConfig {
    fn default() -> Self {
        let asym = AsymConfig { refute: false, evidence: 0, ..AsymConfig::default() };
        DualConfig { asym, separate: SeparateConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualOutcome {
    AsymptoticallyGe(AsymptoticWitness),
    /// A verified point with `f(x) < f(y)`.
    Separated(Hom),
    Inconclusive(String),
}

impl DualOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            DualOutcome::AsymptoticallyGe(_) => "AsymptoticallyGE",
            DualOutcome::Separated(_) => "Separated",
            DualOutcome::Inconclusive(_) => "Inconclusive",
        }
    }
}

/// Decides `x ≿ y` against the attached family. Both searches always run to
/// completion; if both succeed the presentation or the code is unsound and an
/// error is returned instead of a verdict.
pub fn dual_compare(p: &Presentation, x: &Expr, y: &Expr, cfg: &DualConfig) -> Result<DualOutcome> {
    let u = p
        .power_universal
        .as_ref()
        .ok_or_else(|| Error::MissingCoverage("the presentation (no power universal element declared)".into()))?;
    let (sep, asym) = thread::scope(|s| {
        let sep = s.spawn(|| match &p.family {
            Some(fam) => separate(p, fam, x, y, &cfg.separate).map(Some),
            None => Ok(None),
        });
        let asym = check_asymptotic(p, u, x, y, &cfg.asym);
        (sep.join().expect("separation thread panicked"), asym)
    });
    let sep = sep?;
    let asym = asym?;
    match (sep, asym) {
        (Some(Separation::Found(f)), AsymOutcome::Witness(w)) => Err(Error::SoundnessViolation(format!(
            "witness for {} >~ {} and separating point {}",
            p.show(&w.x),
            p.show(&w.y),
            f.show(p)
        ))),
        (_, AsymOutcome::Witness(w)) => Ok(DualOutcome::AsymptoticallyGe(w)),
        (Some(Separation::Found(f)), _) | (_, AsymOutcome::Refuted(f)) => Ok(DualOutcome::Separated(f)),
        (Some(Separation::NotFoundInFamily), _) => {
            Ok(DualOutcome::Inconclusive("no witness within budget; no separating point in the family".into()))
        }
        (None, _) => Ok(DualOutcome::Inconclusive("no witness within budget; no family attached".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotic::Envelope;
    use crate::spectrum::{q_int, Bound, HomFamily, Param, RatFun};

    fn inst_a() -> Presentation {
        let x = Expr::var(0);
        let mut p = Presentation::new(["x"])
            .with_relation(Expr::one(), x.clone())
            .with_relation(x, Expr::constant(2u32));
        p.power_universal = Some(Expr::constant(2u32));
        p.family = Some(HomFamily {
            params: vec![Param { name: "c".into(), lo: Bound::Closed(q_int(1)), hi: Bound::Closed(q_int(2)) }],
            constraints: vec![],
            values: vec![RatFun::poly(Expr::var(0))],
        });
        p
    }

    #[test]
    fn inst_a_outcomes() {
        let p = inst_a();
        let x = Expr::var(0);
        let cfg = DualConfig::default();
        match dual_compare(&p, &x, &Expr::one(), &cfg).unwrap() {
            DualOutcome::AsymptoticallyGe(w) => assert_eq!(w.envelope, Envelope::Constant(0)),
            other => panic!("{other:?}"),
        }
        match dual_compare(&p, &Expr::one(), &x, &cfg).unwrap() {
            DualOutcome::Separated(f) => assert_eq!(f.eval(&x).unwrap(), q_int(2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_power_universal() {
        let mut p = inst_a();
        p.power_universal = None;
        assert!(dual_compare(&p, &Expr::one(), &Expr::one(), &DualConfig::default()).is_err());
    }
}
