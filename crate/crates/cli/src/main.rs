//! `satmodel`: normalize terms, check Herbrand countermodels, run
//! completion, export TRS files, search finite models and generate magma
//! implication problems.
//!
//! Exit codes: 0 success, 1 outside the unit-equational fragment or
//! unoriented rules, 2 parse or configuration error, 3 refuted, 4
//! inconclusive, 5 out of resources, 6 no finite model up to the size
//! searched.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use satmodel::completion::{self, CompletionOutcome, Limits};
use satmodel::etp::{self, EtpError, IndexMapping, MagmaEquation};
use satmodel::finite::{self, FiniteError, DEFAULT_CEILING};
use satmodel::model::{verify_countermodel, HerbrandModel, ModelVerdict, DEFAULT_INSTANCE_BOUND};
use satmodel::ordering::{
    find_orientation, parse_precedence, parse_weights, Comparison, KboConfig, OrderingConfig, OrderingError,
    OrderingKind, OrientationOutcome, DEFAULT_SEARCH_BUDGET,
};
use satmodel::rewrite::{Mode, RewriteError, RewriteSystem};
use satmodel::tptp::{self, SaturationDump, TptpError, TrsError};
use satmodel::{CompletionError, Equation, Problem, Rule, Signature};

const ORDERING_ENV: &str = "SATMODEL_ORDERING";

#[derive(Parser)]
#[command(
    name = "satmodel",
    version,
    about = "Herbrand models from saturated unit-equational systems"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Write the main output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(flatten)]
    ordering: OrderingArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OrderingArgs {
    /// LPO with this precedence, greatest first: "f > b > a".
    #[arg(long, global = true, value_name = "PRECEDENCE", conflicts_with = "kbo")]
    lpo: Option<String>,

    /// KBO with this precedence, greatest first.
    #[arg(long, global = true, value_name = "PRECEDENCE")]
    kbo: Option<String>,

    /// KBO symbol weights: "f:2, a:1". Unlisted symbols weigh 1.
    #[arg(long, global = true, requires = "kbo")]
    weights: Option<String>,

    /// Ordering config file; used when neither --lpo nor --kbo is given.
    #[arg(long, global = true, env = ORDERING_ENV)]
    ordering_file: Option<PathBuf>,
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long, default_value_t = Limits::default().max_steps)]
    max_steps: usize,
    #[arg(long, default_value_t = Limits::default().max_equations)]
    max_equations: usize,
    #[arg(long, default_value_t = Limits::default().max_term_size)]
    max_term_size: usize,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            max_steps: self.max_steps,
            max_equations: self.max_equations,
            max_term_size: self.max_term_size,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normalize a ground term and print the rewrite steps.
    Normalize {
        /// Ground term, TPTP syntax.
        #[arg(long)]
        term: String,
        /// Equation in TPTP syntax; repeatable.
        #[arg(long = "eq")]
        equations: Vec<String>,
        /// Use the axioms of this problem as equations.
        #[arg(long)]
        problem: Option<PathBuf>,
        /// Use the equations of this saturation dump.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Treat equations as rules applied left to right only.
        #[arg(long)]
        oriented: bool,
    },
    /// Check the model of a saturation against a problem.
    CheckModel {
        #[arg(long)]
        problem: PathBuf,
        /// Saturation dump; completion runs when absent.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Largest number of operations in the checked ground terms.
        #[arg(long, default_value_t = DEFAULT_INSTANCE_BOUND)]
        bound: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Run unfailing completion on a problem.
    Saturate {
        #[arg(long)]
        problem: PathBuf,
        /// Print the inference records of a refutation or saturation.
        #[arg(long)]
        proof: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Write a dump as a TRS file, oriented as written.
    ExportTrs {
        #[arg(long)]
        dump: PathBuf,
        /// Also write the certifying ordering config here.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Search for finite models of sizes 1 up to --max-size.
    Finite {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        max_size: usize,
        /// Refuse sizes above this; at most 6.
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: usize,
    },
    /// Magma equations with at most four operations.
    #[command(subcommand)]
    Etp(EtpCommand),
}

#[derive(Subcommand)]
enum EtpCommand {
    /// One canonical equation per line.
    List {
        /// Print only the number of equations.
        #[arg(long)]
        count: bool,
        /// Prefix each line with its index.
        #[arg(long)]
        numbered: bool,
        /// Two-column file mapping internal indices to external numbers.
        #[arg(long)]
        mapping: Option<PathBuf>,
    },
    /// Problem: premise as axiom, Skolemized conclusion as disequation.
    Gen {
        premise: usize,
        conclusion: usize,
        /// Read the indices as external numbers through this mapping.
        #[arg(long)]
        mapping: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Tptp { path: String, source: TptpError },
    #[error(transparent)]
    Ordering(#[from] OrderingError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Trs(#[from] TrsError),
    #[error(transparent)]
    Finite(#[from] FiniteError),
    #[error(transparent)]
    Etp(#[from] EtpError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Unoriented(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Tptp { source, .. } if source.is_fragment_violation() => 1,
            CliError::Trs(_) | CliError::Unoriented(_) => 1,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn load_problem(path: &Path) -> Result<Problem, CliError> {
    tptp::parse_problem(&read(path)?).map_err(|source| CliError::Tptp {
        path: path.display().to_string(),
        source,
    })
}

fn load_dump(path: &Path) -> Result<SaturationDump, CliError> {
    tptp::parse_saturation(&read(path)?).map_err(|source| CliError::Tptp {
        path: path.display().to_string(),
        source,
    })
}

fn tptp_arg(what: &str, source: TptpError) -> CliError {
    CliError::Tptp {
        path: what.to_string(),
        source,
    }
}

impl OrderingArgs {
    /// The ordering given by flags, then by file; `None` if neither.
    fn explicit(&self) -> Result<Option<OrderingConfig>, CliError> {
        if let Some(p) = &self.lpo {
            return Ok(Some(OrderingConfig::lpo(parse_precedence(p)?)));
        }
        if let Some(p) = &self.kbo {
            let mut weights = KboConfig::default();
            if let Some(w) = &self.weights {
                weights.weights = parse_weights(w)?;
            }
            return Ok(Some(OrderingConfig::kbo(parse_precedence(p)?, weights)));
        }
        if let Some(path) = &self.ordering_file {
            return Ok(Some(OrderingConfig::parse(&read(path)?)?));
        }
        Ok(None)
    }
}

/// An LPO, then a unit-weight KBO, orienting `rules` as written.
fn search_orientation(sig: &Signature, rules: &[Rule]) -> Option<OrderingConfig> {
    [OrderingKind::Lpo, OrderingKind::Kbo].into_iter().find_map(|kind| {
        match find_orientation(sig, rules, kind, DEFAULT_SEARCH_BUDGET) {
            OrientationOutcome::Found(cfg) => Some(cfg),
            other => {
                log::info!("no {kind} orientation: {other:?}");
                None
            }
        }
    })
}

/// Text and JSON renderings of a command's result plus its exit code.
struct Report {
    text: String,
    json: serde_json::Value,
    code: u8,
}

impl Report {
    fn new(text: String, json: impl Serialize, code: u8) -> Result<Report, CliError> {
        Ok(Report {
            text,
            json: serde_json::to_value(json)?,
            code,
        })
    }
}

fn normalize(
    args: &OrderingArgs,
    term: &str,
    equations: &[String],
    problem: Option<&Path>,
    dump: Option<&Path>,
    oriented: bool,
) -> Result<Report, CliError> {
    let mut eqs = Vec::new();
    if let Some(path) = problem {
        eqs.extend(load_problem(path)?.axioms);
    }
    if let Some(path) = dump {
        eqs.extend(load_dump(path)?.equations);
    }
    for e in equations {
        eqs.push(tptp::parse_equation(e).map_err(|s| tptp_arg("--eq", s))?);
    }
    let t = tptp::parse_term(term).map_err(|s| tptp_arg("--term", s))?;
    if !t.is_ground() {
        return Err(CliError::Usage(format!("term `{t}` is not ground")));
    }
    let mut sig = Signature::new();
    for e in &eqs {
        sig.add_term(&e.lhs).map_err(RewriteError::from)?;
        sig.add_term(&e.rhs).map_err(RewriteError::from)?;
    }
    sig.add_term(&t).map_err(RewriteError::from)?;
    let cfg = args.explicit()?.unwrap_or_else(|| OrderingConfig::default_for(&sig));
    let mode = if oriented { Mode::Oriented } else { Mode::Ordered };
    let system = RewriteSystem::new(&sig, eqs, cfg, mode)?;
    let trace = system.normalize(&t)?;
    let mut text = String::new();
    for s in &trace.steps {
        text.push_str(&format!("{s}\n"));
    }
    text.push_str(&format!("normal form: {}\n", trace.result));
    Report::new(text, &trace, 0)
}

fn check_model(
    args: &OrderingArgs,
    problem: &Path,
    dump: Option<&Path>,
    bound: usize,
    limits: Limits,
) -> Result<Report, CliError> {
    let p = load_problem(problem)?;
    let dump = dump.map(load_dump).transpose()?;
    let cfg = match args.explicit()? {
        Some(cfg) => cfg,
        None => {
            let mut sig = p.signature.clone();
            let found = match &dump {
                Some(d) => {
                    sig.extend(&d.signature).map_err(RewriteError::from)?;
                    search_orientation(&sig, &d.rules())
                }
                None => None,
            };
            found.unwrap_or_else(|| OrderingConfig::default_for(&sig))
        }
    };
    let loaded = match completion::saturate_or_load(&p, dump.as_ref(), &cfg, limits) {
        Ok(l) => l,
        Err(CompletionError::Refuted(d)) => {
            let msg = format!("refuted: completion joined the sides of {d}; the conjecture is a theorem\n");
            return Report::new(
                msg,
                serde_json::json!({ "verdict": "refuted_goal", "disequation": d }),
                3,
            );
        }
        Err(CompletionError::ResourceOut(limit)) => {
            let msg = format!("resource out: completion hit the {limit}\n");
            return Report::new(msg, serde_json::json!({ "verdict": "resource_out", "limit": limit }), 5);
        }
        Err(CompletionError::Rewrite(e)) => return Err(e.into()),
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let model = HerbrandModel::new(loaded.system);
    let report = verify_countermodel(&model, &p, bound);

    let mut text = format!("verdict: {}\n", report.verdict);
    text.push_str(&format!("ordering: {}\n", report.ordering));
    text.push_str(&format!(
        "pre-ordered: {}/{}\n",
        report.preordered.oriented_count,
        report.preordered.oriented.len()
    ));
    text.push_str(&format!(
        "confluence: {} ({} critical pairs, {} nontrivial)\n",
        report.confluence.verdict, report.confluence.critical_pairs, report.confluence.nontrivial_pairs
    ));
    text.push_str(&format!(
        "universe: {} terms up to {} operations, {} normal forms\n",
        report.universe_size, report.bound, report.representatives
    ));
    for d in &report.disequations {
        let show = |t: &Option<satmodel::Term>| t.as_ref().map_or("?".to_string(), ToString::to_string);
        text.push_str(&format!(
            "goal {} != {}: {} vs {} ({})\n",
            d.disequation.lhs,
            d.disequation.rhs,
            show(&d.lhs_normal_form),
            show(&d.rhs_normal_form),
            if d.distinct { "distinct" } else { "equal" }
        ));
    }
    for a in &report.axioms {
        text.push_str(&format!(
            "axiom {}: {} instances, {} checked, {} failing\n",
            a.axiom, a.instances, a.checked, a.failure_count
        ));
        for f in &a.failures {
            text.push_str(&format!(
                "  {}: {} vs {}\n",
                f.substitution, f.lhs_normal_form, f.rhs_normal_form
            ));
        }
    }
    for (axiom, sigma) in &loaded.sanity_failures {
        text.push_str(&format!("warning: dump does not join {axiom} under {sigma}\n"));
    }
    for r in &report.reasons {
        text.push_str(&format!("reason: {r}\n"));
    }
    let code = match report.verdict {
        ModelVerdict::VerifiedCountermodelAtBound => 0,
        ModelVerdict::RefutedModel => 3,
        ModelVerdict::Inconclusive => 4,
    };
    Report::new(text, &report, code)
}

#[derive(Serialize)]
struct SaturationOutput<'a> {
    status: &'static str,
    ordering: &'a OrderingConfig,
    equations: Vec<&'a Equation>,
    statistics: completion::Statistics,
    records: &'a [completion::InferenceRecord],
}

fn saturate(args: &OrderingArgs, problem: &Path, proof: bool, limits: Limits) -> Result<Report, CliError> {
    let p = load_problem(problem)?;
    let cfg = args
        .explicit()?
        .unwrap_or_else(|| OrderingConfig::default_for(&p.signature));
    let outcome = match completion::complete(&p, &cfg, limits) {
        Ok(o) => o,
        Err(CompletionError::Rewrite(e)) => return Err(e.into()),
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    match outcome {
        CompletionOutcome::Saturated(s) => {
            let equations: Vec<&Equation> = s.system.equations().iter().collect();
            let oriented: Vec<bool> = equations
                .iter()
                .map(|e| matches!(cfg.compare(&e.lhs, &e.rhs), Ok(Comparison::Greater)))
                .collect();
            let owned: Vec<Equation> = equations.iter().map(|e| (*e).clone()).collect();
            let mut text = format!("% saturated: {} equations\n", equations.len());
            text.push_str(&tptp::write_saturation(&owned, &oriented));
            if proof {
                for r in &s.records {
                    text.push_str(&format!("% {}", r.to_string().replace('\n', "\n% ")));
                    text.push('\n');
                }
            }
            let json = SaturationOutput {
                status: "saturated",
                ordering: &cfg,
                equations,
                statistics: s.statistics,
                records: if proof { &s.records } else { &[] },
            };
            Report::new(text, json, 0)
        }
        CompletionOutcome::Refuted(r) => {
            let mut text = format!(
                "refuted: {} != {} is contradicted\n",
                r.disequation.lhs, r.disequation.rhs
            );
            if proof {
                text.push_str(&r.to_string());
            }
            let json = serde_json::json!({ "status": "refuted", "refutation": r });
            Report::new(text, json, 3)
        }
        CompletionOutcome::ResourceOut { limit, statistics } => {
            let text = format!("resource out: {limit} after {} steps\n", statistics.steps);
            let json = serde_json::json!({ "status": "resource_out", "limit": limit, "statistics": statistics });
            Report::new(text, json, 5)
        }
    }
}

fn export_trs(args: &OrderingArgs, dump: &Path, certificate: Option<&Path>) -> Result<Report, CliError> {
    let d = load_dump(dump)?;
    let rules = d.rules();
    let cfg = match args.explicit()? {
        Some(cfg) => cfg,
        None => search_orientation(&d.signature, &rules).ok_or_else(|| {
            CliError::Unoriented("no LPO or unit-weight KBO orients the rules as written".to_string())
        })?,
    };
    let text = tptp::write_trs(&rules, Some(&cfg))?;
    if let Some(path) = certificate {
        fs::write(path, cfg.to_text()).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        })?;
    }
    let json = serde_json::json!({ "rules": rules.len(), "ordering": cfg, "trs": text });
    Report::new(text, json, 0)
}

fn finite_search(problem: &Path, max_size: usize, ceiling: usize) -> Result<Report, CliError> {
    let p = load_problem(problem)?;
    if ceiling > DEFAULT_CEILING {
        log::warn!("ceiling {ceiling} is above {DEFAULT_CEILING}; larger sizes can take a long time");
    }
    let report = finite::no_finite_model_up_to(&p, max_size, ceiling)?;
    let mut text = String::new();
    for s in &report.sizes {
        match &s.model {
            Some(m) => text.push_str(&format!("size {}: model\n{m}", s.size)),
            None => text.push_str(&format!("size {}: none\n", s.size)),
        }
    }
    text.push_str(&report.summary());
    text.push('\n');
    let code = if report.first_model().is_some() { 0 } else { 6 };
    Report::new(text, &report, code)
}

fn load_mapping(path: Option<&Path>) -> Result<Option<IndexMapping>, CliError> {
    path.map(|p| Ok(IndexMapping::parse(&read(p)?)?)).transpose()
}

fn etp_command(cmd: &EtpCommand) -> Result<Report, CliError> {
    let all = etp::enumerate_equations();
    match cmd {
        EtpCommand::List {
            count,
            numbered,
            mapping,
        } => {
            if *count {
                return Report::new(format!("{}\n", all.len()), all.len(), 0);
            }
            let mapping = load_mapping(mapping.as_deref())?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for (i, e) in all.iter().enumerate() {
                let index = i + 1;
                let external = mapping.as_ref().and_then(|m| m.external(index));
                match (external, numbered) {
                    (Some(x), _) => text.push_str(&format!("{index}\t{x}\t{e}\n")),
                    (None, true) => text.push_str(&format!("{index}\t{e}\n")),
                    (None, false) => text.push_str(&format!("{e}\n")),
                }
                rows.push(serde_json::json!({ "index": index, "external": external, "equation": e }));
            }
            Report::new(text, rows, 0)
        }
        EtpCommand::Gen {
            premise,
            conclusion,
            mapping,
        } => {
            let mapping = load_mapping(mapping.as_deref())?;
            let pick = |n: usize| -> Result<&MagmaEquation, CliError> {
                let index = match &mapping {
                    Some(m) => m
                        .internal(n as u64)
                        .ok_or_else(|| CliError::Usage(format!("external number {n} is not in the mapping")))?,
                    None => n,
                };
                Ok(etp::equation_at(&all, index)?)
            };
            let (pe, ce) = (pick(*premise)?, pick(*conclusion)?);
            let problem = etp::implication_problem(pe, ce);
            let text = format!("% {pe}  =>  {ce}\n{}", tptp::write_problem(&problem));
            let json = serde_json::json!({
                "premise": pe,
                "conclusion": ce,
                "axioms": problem.axioms,
                "disequations": problem.disequations,
                "tptp": tptp::write_problem(&problem),
            });
            Report::new(text, json, 0)
        }
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let ord = &cli.ordering;
    match &cli.command {
        Command::Normalize {
            term,
            equations,
            problem,
            dump,
            oriented,
        } => normalize(ord, term, equations, problem.as_deref(), dump.as_deref(), *oriented),
        Command::CheckModel {
            problem,
            dump,
            bound,
            limits,
        } => check_model(ord, problem, dump.as_deref(), *bound, limits.limits()),
        Command::Saturate { problem, proof, limits } => saturate(ord, problem, *proof, limits.limits()),
        Command::ExportTrs { dump, certificate } => export_trs(ord, dump, certificate.as_deref()),
        Command::Finite {
            problem,
            max_size,
            ceiling,
        } => finite_search(problem, *max_size, *ceiling),
        Command::Etp(cmd) => etp_command(cmd),
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), CliError> {
    let body = if cli.json {
        let mut s = serde_json::to_string_pretty(&report.json)?;
        s.push('\n');
        s
    } else {
        report.text.clone()
    };
    match &cli.output {
        Some(path) => fs::write(path, body).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = run(&cli).and_then(|report| emit(&cli, &report).map(|()| report.code));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
