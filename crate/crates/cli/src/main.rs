use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spectra_core::asymptotic::{check_asymptotic, AsymConfig, AsymOutcome};
use spectra_core::document::{print_document, show_envelope, Claim, Document};
use spectra_core::localization::{LocVerdict, Localization, MultSet};
use spectra_core::presentation::MonomialSet;
use spectra_core::spectrum::{
    check_m1, check_m1_prime, check_m2, check_m2_prime, dual_compare, membership, separate, ConditionConfig, DualConfig,
    DualOutcome, M2Status, MemberKind, SeparateConfig, Separation,
};
use spectra_core::suite::{run_suite, SuiteConfig};
use spectra_core::syntax::{parse_expr, parse_presentation, parse_quotient};
use spectra_core::{check_preorder, Budget, Error, Expr, Monomial, Presentation, Verdict};

/// Exit codes shared by every command.
mod code {
    pub const HOLDS: u8 = 0;
    pub const REFUTED: u8 = 1;
    pub const UNKNOWN: u8 = 2;
    pub const USAGE: u8 = 3;
    pub const UNSOUND: u8 = 4;
}

#[derive(Parser, Debug)]
#[command(name = "spectra", version, about = "Certificates for finitely presented preordered semirings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Maximum relation rewrites per derivation.
    #[arg(long, default_value_t = 8)]
    budget_nodes: u32,
    /// Maximum total degree of intermediate expressions.
    #[arg(long, default_value_t = 8)]
    budget_deg: u32,
    /// Maximum coefficient of intermediate expressions.
    #[arg(long, default_value_t = 64)]
    budget_coef: u64,
    /// Maximum number of explored states.
    #[arg(long, default_value_t = 20_000)]
    budget_states: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            nodes: self.budget_nodes,
            max_degree: self.budget_deg,
            max_coeff: self.budget_coef,
            max_states: self.budget_states,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search a certificate of LOWER <= UPPER.
    Check {
        file: PathBuf,
        lower: String,
        upper: String,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the certificate file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search an asymptotic witness that UPPER dominates LOWER.
    Asym {
        file: PathBuf,
        lower: String,
        upper: String,
        /// Largest n at which the witness is replayed.
        #[arg(long, default_value_t = 12)]
        horizon: u32,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search the family for a point with f(UPPER) < f(LOWER).
    Separate {
        file: PathBuf,
        lower: String,
        upper: String,
        /// Grid points per parameter.
        #[arg(long, default_value_t = 9)]
        grid: usize,
    },
    /// Run separation and the asymptotic search together.
    Dual {
        file: PathBuf,
        lower: String,
        upper: String,
        #[arg(long, default_value_t = 12)]
        horizon: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify membership in S+, S- or their intersection.
    Member {
        file: PathBuf,
        kind: Kind,
        element: String,
        /// Largest natural number tried.
        #[arg(long, default_value_t = 16)]
        bound: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare fractions NUM/DEN with denominators in the multiplicative set.
    Localize {
        file: PathBuf,
        lower: String,
        upper: String,
        relation: LocRelation,
        /// Generators of the multiplicative set, overriding the file.
        #[arg(long, value_delimiter = ',')]
        mult_set: Option<Vec<String>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the two sufficient conditions for spectral duality.
    Conds {
        file: PathBuf,
        condition: Condition,
        /// Elements checked by m1/m1p; defaults to all monomials up to --max-degree.
        #[arg(long, value_delimiter = ';')]
        samples: Option<Vec<String>>,
        /// Generators of the multiplicative set for m1p/m2p, overriding the file.
        #[arg(long, value_delimiter = ',')]
        mult_set: Option<Vec<String>>,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
    },
    /// Replay a certificate file.
    Certify { certfile: PathBuf },
    /// Run the property suites against the presentation.
    Suite {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        samples: usize,
        #[arg(long, default_value_t = 200)]
        swaps: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Splus,
    Sminus,
    Sb,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LocRelation {
    Eq,
    Le,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Condition {
    M1,
    M2,
    M1p,
    M2p,
}

/// Text for stdout and the exit code.
struct Report {
    text: String,
    code: u8,
}

impl Report {
    fn new(code: u8, text: impl Into<String>) -> Self {
        Report { text: text.into(), code }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Unsound(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SoundnessViolation(_) => Failure::Unsound(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<Report, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Presentation, Failure> {
    let p = parse_presentation(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    p.validate()?;
    Ok(p)
}

fn expr(p: &Presentation, text: &str) -> Result<Expr, Failure> {
    parse_expr(&p.generators, text).map_err(|e| Failure::Usage(format!("argument `{text}`: {e}")))
}

fn write_doc(out: &Option<PathBuf>, p: &Presentation, claim: Claim) -> Result<String, Failure> {
    let Some(path) = out else { return Ok(String::new()) };
    let doc = Document { presentation: p.clone(), claim };
    std::fs::write(path, print_document(&doc)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(format!("\nwrote {}", path.display()))
}

fn power_universal(p: &Presentation) -> Result<Expr, Failure> {
    p.power_universal
        .clone()
        .ok_or_else(|| Failure::Usage("the presentation declares no power_universal element".into()))
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Check { file, lower, upper, budget, out } => {
            let p = load(&file)?;
            let (x, y) = (expr(&p, &lower)?, expr(&p, &upper)?);
            Ok(match check_preorder(&p, &x, &y, &budget.budget())? {
                Verdict::Holds(c) => {
                    let text = format!("Holds ({} rule applications)", c.size());
                    let wrote = write_doc(&out, &p, Claim::Preorder(c))?;
                    Report::new(code::HOLDS, text + &wrote)
                }
                Verdict::Refuted(f) => Report::new(code::REFUTED, format!("Refuted at {}", f.show(&p))),
                Verdict::Unknown => Report::new(code::UNKNOWN, "Unknown within budget"),
            })
        }
        Command::Asym { file, lower, upper, horizon, budget, out } => {
            let p = load(&file)?;
            let u = power_universal(&p)?;
            let (y, x) = (expr(&p, &lower)?, expr(&p, &upper)?);
            let cfg = AsymConfig { budget: budget.budget(), horizon, ..AsymConfig::default() };
            Ok(match check_asymptotic(&p, &u, &x, &y, &cfg)? {
                AsymOutcome::Witness(w) => {
                    let text = format!("AsymptoticallyGE with envelope {}", show_envelope(&w.envelope));
                    let wrote = write_doc(&out, &p, Claim::Asymptotic { witness: w, horizon })?;
                    Report::new(code::HOLDS, text + &wrote)
                }
                AsymOutcome::Refuted(f) => Report::new(code::REFUTED, format!("Refuted at {}", f.show(&p))),
                AsymOutcome::Unknown(Some(w)) => Report::new(
                    code::UNKNOWN,
                    format!("Unknown; finite evidence for n <= {} with envelope {}", w.envelope.max().max(1), show_envelope(&w.envelope)),
                ),
                AsymOutcome::Unknown(None) => Report::new(code::UNKNOWN, "Unknown within budget"),
            })
        }
        Command::Separate { file, lower, upper, grid } => {
            let p = load(&file)?;
            let fam = p.family.as_ref().ok_or_else(|| Failure::Usage("the presentation has no family".into()))?;
            let (y, x) = (expr(&p, &lower)?, expr(&p, &upper)?);
            let cfg = SeparateConfig { grid, ..SeparateConfig::default() };
            Ok(match separate(&p, fam, &x, &y, &cfg)? {
                Separation::Found(f) => Report::new(code::REFUTED, format!("Separated at {}", f.show(&p))),
                Separation::NotFoundInFamily => Report::new(code::UNKNOWN, "NotFoundInFamily"),
            })
        }
        Command::Dual { file, lower, upper, horizon, out } => {
            let p = load(&file)?;
            let (y, x) = (expr(&p, &lower)?, expr(&p, &upper)?);
            let mut cfg = DualConfig::default();
            cfg.asym.horizon = horizon;
            Ok(match dual_compare(&p, &x, &y, &cfg)? {
                DualOutcome::AsymptoticallyGe(w) => {
                    let text = format!("AsymptoticallyGE with envelope {}", show_envelope(&w.envelope));
                    let wrote = write_doc(&out, &p, Claim::Asymptotic { witness: w, horizon })?;
                    Report::new(code::HOLDS, text + &wrote)
                }
                DualOutcome::Separated(f) => Report::new(code::REFUTED, format!("Separated at {}", f.show(&p))),
                DualOutcome::Inconclusive(why) => Report::new(code::UNKNOWN, format!("Inconclusive: {why}")),
            })
        }
        Command::Member { file, kind, element, bound, out } => {
            let p = load(&file)?;
            let s = expr(&p, &element)?;
            let kind = match kind {
                Kind::Splus => MemberKind::Plus,
                Kind::Sminus => MemberKind::Minus,
                Kind::Sb => MemberKind::Bounded,
            };
            Ok(match membership(&p, &s, kind, bound, &Budget::default())? {
                Some(mc) => {
                    let text = format!("Holds with n = {}", mc.n);
                    let wrote = write_doc(&out, &p, Claim::Membership(mc))?;
                    Report::new(code::HOLDS, text + &wrote)
                }
                None => Report::new(code::UNKNOWN, format!("Unknown for n <= {bound}")),
            })
        }
        Command::Localize { file, lower, upper, relation, mult_set, out } => {
            let mut p = load(&file)?;
            if let Some(ts) = mult_set {
                p.t_set = Some(ts.iter().map(|t| expr(&p, t)).collect::<Result<_, _>>()?);
            }
            let t = MultSet::new(p.t_set.clone().unwrap_or_default())?;
            let loc = Localization::new(&p, t);
            let frac = |text: &str| -> Result<_, Failure> {
                let (n, d) = parse_quotient(&p.generators, text).map_err(|e| Failure::Usage(format!("argument `{text}`: {e}")))?;
                Ok(loc.fraction(n, d.unwrap_or_else(Expr::one))?)
            };
            let (a, b) = (frac(&lower)?, frac(&upper)?);
            let eq = matches!(relation, LocRelation::Eq);
            let verdict = if eq { loc.frac_eq(&a, &b)? } else { loc.frac_le(&a, &b)? };
            let label = verdict.label(eq);
            Ok(match verdict {
                LocVerdict::Holds(cert) => {
                    let text = format!("{label} with r = {}", p.show(&cert.r));
                    let wrote = write_doc(&out, &p, Claim::Localization { a, b, cert })?;
                    Report::new(code::HOLDS, text + &wrote)
                }
                LocVerdict::Refuted(f) => Report::new(code::REFUTED, format!("{label} at {}", f.show(&p))),
                LocVerdict::Unknown => Report::new(code::UNKNOWN, label),
            })
        }
        Command::Conds { file, condition, samples, mult_set, max_degree } => conds(&file, condition, samples, mult_set, max_degree),
        Command::Certify { certfile } => {
            let text = read(&certfile)?;
            let doc = spectra_core::document::parse_document(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", certfile.display())))?;
            match doc.certify() {
                Ok(what) => Ok(Report::new(code::HOLDS, format!("Verified {what}"))),
                Err(e) => Err(Failure::Unsound(format!("certificate rejected: {e}"))),
            }
        }
        Command::Suite { file, seed, samples, swaps } => {
            let p = load(&file)?;
            let report = run_suite(&p, &SuiteConfig { seed, samples, swaps, ..SuiteConfig::default() });
            let code = if report.all_passed() { code::HOLDS } else { code::UNSOUND };
            Ok(Report::new(code, report.to_string()))
        }
    }
}

fn conds(file: &Path, condition: Condition, samples: Option<Vec<String>>, mult_set: Option<Vec<String>>, max_degree: u32) -> Outcome {
    let p = load(file)?;
    let m_set = p.m_set.clone().unwrap_or_else(|| MonomialSet::Where(Vec::new()));
    let cfg = ConditionConfig { m_degree: max_degree, ..ConditionConfig::default() };
    let primed = matches!(condition, Condition::M1p | Condition::M2p);
    let t_gens: Vec<Expr> = match (primed, mult_set) {
        (false, _) => Vec::new(),
        (true, Some(ts)) => ts.iter().map(|t| expr(&p, t)).collect::<Result<_, _>>()?,
        (true, None) => p
            .t_set
            .clone()
            .ok_or_else(|| Failure::Usage("m1p/m2p need a mult_set in the file or --mult-set".into()))?,
    };
    MultSet::new(t_gens.clone())?;
    match condition {
        Condition::M1 | Condition::M1p => {
            let samples: Vec<Expr> = match samples {
                Some(v) => v.iter().map(|s| expr(&p, s)).collect::<Result<_, _>>()?,
                None => Monomial::enumerate(p.num_generators(), max_degree).into_iter().map(Expr::monomial).collect(),
            };
            let report = if primed {
                check_m1_prime(&p, &m_set, &t_gens, &samples, &cfg)?
            } else {
                check_m1(&p, &m_set, &samples, &cfg)?
            };
            let code = if report.all_verified() { code::HOLDS } else { code::UNKNOWN };
            Ok(Report::new(code, report.render(&p).trim_end()))
        }
        Condition::M2 | Condition::M2p => {
            let report = if primed { check_m2_prime(&p, &m_set, &t_gens, &cfg)? } else { check_m2(&p, &m_set, &cfg)? };
            let settled = report.entries.iter().all(|e| {
                matches!(e.status, M2Status::Bounded { certified: Some(_), .. } | M2Status::Unbounded { .. })
            });
            let code = if settled { code::HOLDS } else { code::UNKNOWN };
            Ok(Report::new(code, report.render(&p).trim_end()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { code::USAGE } else { code::HOLDS });
        }
    };
    let (text, code, to_err) = match run(cli.command) {
        Ok(r) => (r.text, r.code, false),
        Err(Failure::Usage(msg)) => (format!("error: {msg}"), code::USAGE, true),
        Err(Failure::Unsound(msg)) => (format!("error: {msg}"), code::UNSOUND, true),
    };
    let _ = if to_err {
        writeln!(std::io::stderr().lock(), "{text}")
    } else {
        writeln!(std::io::stdout().lock(), "{text}")
    };
    ExitCode::from(code)
}
