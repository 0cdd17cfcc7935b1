use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use craig_gamma::engine::{self, Budget, Interpolation, LogicId, Verdict};
use craig_gamma::frame_formulas::{
    cluster_frame, frame_conjuncts, frame_formula, gamma, substitute, Bound,
};
use craig_gamma::kripke::{
    model_from_json, model_to_json, satisfies, ModelFile, PreorderModel, RootedFrame,
};
use craig_gamma::refine::{refine_model, RefineOptions};
use craig_gamma::smorynski::build_smorynski_model;
use craig_gamma::syntax::SignedClosure;
use craig_gamma::{parse, suites, Error, Formula, FormulaSet};

mod report;

use report::{Failure, Report};

#[derive(Parser)]
#[command(
    name = "craig-gamma",
    version,
    about = "Decide, refute and interpolate in the logics G(Int|KC, m, n)"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(flatten)]
    budget: BudgetArgs,
    /// More log output on standard error (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct BudgetArgs {
    /// Most distinct boxed subformulas a decision may track.
    #[arg(long, global = true)]
    max_closure: Option<usize>,
    /// Most box levels a decision may examine.
    #[arg(long, global = true)]
    max_levels: Option<usize>,
    /// Largest model a decision may return as a witness.
    #[arg(long, global = true)]
    max_worlds: Option<usize>,
    /// Largest interpolant candidate, in formula nodes.
    #[arg(long, global = true)]
    max_interpolant_size: Option<usize>,
    /// Wall-clock limit per decision, in seconds.
    #[arg(long, visible_alias = "timeout", global = true)]
    time_budget: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self, default_closure: usize) -> Budget {
        let base = Budget::default();
        Budget {
            max_closure: self.max_closure.unwrap_or(default_closure),
            max_levels: self.max_levels.unwrap_or(base.max_levels),
            max_worlds: self.max_worlds.unwrap_or(base.max_worlds),
            max_interpolant_size: self
                .max_interpolant_size
                .unwrap_or(base.max_interpolant_size),
            time: self.time_budget.map(Duration::from_secs),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse formulas and print them canonically.
    Parse { formulas: Vec<String> },
    /// Decide validity; print a countermodel when invalid.
    Check {
        #[arg(long, default_value = "S4")]
        logic: String,
        formula: String,
        /// Write the countermodel here as JSON.
        #[arg(long)]
        countermodel_out: Option<PathBuf>,
    },
    /// Search small frames of the logic for a countermodel.
    Countermodel {
        #[arg(long, default_value = "S4")]
        logic: String,
        formula: String,
        #[arg(long, default_value_t = 4)]
        worlds: usize,
    },
    /// Find an interpolant for a valid implication.
    Interpolate {
        #[arg(long, default_value = "S4")]
        logic: String,
        antecedent: String,
        consequent: String,
    },
    /// Print a frame formula, optionally substituted.
    FrameFormula {
        /// The cluster of this many points.
        #[arg(long, conflicts_with_all = ["gamma", "frame"])]
        cluster: Option<usize>,
        /// The cluster axiom for this bound (1, 2 or w).
        #[arg(long, conflicts_with = "frame")]
        gamma: Option<String>,
        /// Edges `i-j` of a frame rooted at 0, closed reflexively and transitively.
        #[arg(long)]
        frame: Option<String>,
        /// Add a point above the cluster.
        #[arg(long)]
        topped: bool,
        /// Formulas substituted for p0, p1, ... in order.
        #[arg(long = "subst")]
        subst: Vec<String>,
    },
    /// Shrink oversized clusters of a model while preserving formulas.
    Refine {
        model: PathBuf,
        /// Formula list for the first side (one per line, `#` comments).
        #[arg(long)]
        sigma: PathBuf,
        /// Formula list for the second side; defaults to the first.
        #[arg(long)]
        sigma2: Option<PathBuf>,
        #[arg(long, default_value = "w")]
        m: String,
        #[arg(long, default_value = "w")]
        n: String,
        /// Re-check the cluster axioms before every step.
        #[arg(long)]
        check_preconditions: bool,
        /// Write the refined model here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the Smoryński model of the closures of two seed sets.
    Smorynski {
        #[arg(long, default_value = "S4")]
        logic: String,
        #[arg(long = "left", required = true)]
        left: Vec<String>,
        #[arg(long = "right", required = true)]
        right: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the logics with interpolation.
    Catalog,
    /// Run the property suites.
    Selftest {
        /// Suite slug or number; repeat to run several. Default: all.
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    let filter = tracing_subscriber::EnvFilter::try_from_default_env()
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new(level));
    tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(std::io::stderr)
        .init();

    match run(&cli) {
        Ok(report) => {
            report.print(cli.format);
            ExitCode::from(report.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            if cli.format == Format::Json {
                println!("{}", json!({"v": 1, "error": f.message}));
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Parse { formulas } => cmd_parse(formulas),
        Command::Check {
            logic,
            formula,
            countermodel_out,
        } => cmd_check(
            logic,
            formula,
            countermodel_out.as_deref(),
            &cli.budget.budget(40),
        ),
        Command::Countermodel {
            logic,
            formula,
            worlds,
        } => cmd_countermodel(logic, formula, *worlds),
        Command::Interpolate {
            logic,
            antecedent,
            consequent,
        } => cmd_interpolate(logic, antecedent, consequent, &cli.budget.budget(40)),
        Command::FrameFormula {
            cluster,
            gamma,
            frame,
            topped,
            subst,
        } => cmd_frame_formula(*cluster, gamma.as_deref(), frame.as_deref(), *topped, subst),
        Command::Refine {
            model,
            sigma,
            sigma2,
            m,
            n,
            check_preconditions,
            out,
        } => cmd_refine(
            model,
            sigma,
            sigma2.as_deref(),
            m,
            n,
            *check_preconditions,
            out.as_deref(),
        ),
        Command::Smorynski {
            logic,
            left,
            right,
            out,
        } => cmd_smorynski(logic, left, right, out.as_deref(), &cli.budget.budget(62)),
        Command::Catalog => Ok(cmd_catalog()),
        Command::Selftest { suites } => cmd_selftest(suites),
    }
}

fn formula(s: &str) -> Result<Formula, Failure> {
    parse(s).map_err(|e| Failure::usage(format!("cannot parse `{s}`: {e}")))
}

fn logic(s: &str) -> Result<LogicId, Failure> {
    LogicId::from_str(s).map_err(|e| Failure::usage(e.to_string()))
}

fn bound(s: &str) -> Result<Bound, Failure> {
    match s.trim() {
        "1" => Ok(Bound::Finite(1)),
        "2" => Ok(Bound::Finite(2)),
        "w" | "ω" | "omega" => Ok(Bound::Omega),
        other => Err(Failure::usage(format!(
            "cluster bound `{other}` is not 1, 2 or w"
        ))),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, format!("{}\n", text.trim_end()))
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

/// One formula per line; blank lines and `#` comments are skipped.
fn formula_list(path: &Path) -> Result<FormulaSet, Failure> {
    let text = read(path)?;
    let mut out = FormulaSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f = parse(line)
            .map_err(|e| Failure::usage(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.insert(f);
    }
    Ok(out)
}

fn model_json(m: &PreorderModel) -> Value {
    serde_json::to_value(ModelFile::from_model(m)).expect("model serializes")
}

fn model_text(m: &PreorderModel) -> String {
    let mut s = format!("worlds: {}\n", m.names().join(" "));
    let order: Vec<String> = m
        .pairs()
        .into_iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| format!("{}<={}", m.name(a), m.name(b)))
        .collect();
    s.push_str(&format!("order: {}\n", order.join(" ")));
    for (atom, ext) in m.valuation() {
        let names: Vec<&str> = ext.iter().map(|i| m.name(i)).collect();
        s.push_str(&format!("{atom}: {}\n", names.join(" ")));
    }
    s
}

/// The countermodel survives a JSON round trip and still refutes `f`.
fn round_trip(m: &PreorderModel, world: usize, f: &Formula) -> Result<(), Failure> {
    let back = model_from_json(&model_to_json(m)).map_err(|e| Failure::internal(e.to_string()))?;
    let w = back
        .index_of(m.name(world))
        .map_err(|e| Failure::internal(e.to_string()))?;
    if satisfies(&back, w, f) {
        return Err(Failure::internal(
            "reloaded countermodel no longer refutes the formula".into(),
        ));
    }
    Ok(())
}

fn cmd_parse(formulas: &[String]) -> Result<Report, Failure> {
    let mut text = String::new();
    let mut items = Vec::new();
    for s in formulas {
        let f = formula(s)?;
        text.push_str(&format!("{f}\n"));
        items.push(json!({
            "input": s,
            "formula": f.to_string(),
            "size": f.size(),
            "modal_depth": f.modal_depth(),
            "atoms": f.atoms(),
        }));
    }
    Ok(Report::new(
        0,
        text,
        json!({"command": "parse", "formulas": items}),
    ))
}

fn cmd_check(l: &str, s: &str, out: Option<&Path>, budget: &Budget) -> Result<Report, Failure> {
    let (logic, f) = (logic(l)?, formula(s)?);
    let base = json!({"command": "check", "logic": logic.to_string(), "formula": f.to_string()});
    Ok(match engine::valid(&f, logic, budget) {
        Verdict::Valid => {
            Report::new(0, format!("Valid in {logic}\n"), base).with("verdict", json!("valid"))
        }
        Verdict::Invalid { model, world } => {
            round_trip(&model, world, &f)?;
            if let Some(path) = out {
                write(path, &model_to_json(&model))?;
            }
            let text = format!(
                "Invalid in {logic}; refuted at {}\n{}",
                model.name(world),
                model_text(&model)
            );
            Report::new(1, text, base)
                .with("verdict", json!("invalid"))
                .with("world", json!(model.name(world)))
                .with("countermodel", model_json(&model))
        }
        Verdict::Unknown(r) => Report::unknown(r, base),
    })
}

fn cmd_countermodel(l: &str, s: &str, worlds: usize) -> Result<Report, Failure> {
    let (logic, f) = (logic(l)?, formula(s)?);
    let base = json!({"command": "countermodel", "logic": logic.to_string(), "formula": f.to_string(), "worlds": worlds});
    match engine::countermodel_search(&f, logic, worlds) {
        Ok(Some((model, world))) => {
            round_trip(&model, world, &f)?;
            let text = format!(
                "Countermodel in {logic}; refuted at {}\n{}",
                model.name(world),
                model_text(&model)
            );
            Ok(Report::new(1, text, base)
                .with("found", json!(true))
                .with("world", json!(model.name(world)))
                .with("countermodel", model_json(&model)))
        }
        Ok(None) => Ok(Report::new(
            0,
            format!("No countermodel in {logic} with at most {worlds} worlds\n"),
            base,
        )
        .with("found", json!(false))),
        Err(Error::ResourceExceeded(r)) => Ok(Report::unknown(r, base)),
        Err(e) => Err(Failure::usage(e.to_string())),
    }
}

fn cmd_interpolate(l: &str, a: &str, b: &str, budget: &Budget) -> Result<Report, Failure> {
    let (logic, a, b) = (logic(l)?, formula(a)?, formula(b)?);
    let implication = Formula::implies(a.clone(), b.clone());
    let base = json!({"command": "interpolate", "logic": logic.to_string(), "antecedent": a.to_string(), "consequent": b.to_string()});
    Ok(match engine::find_interpolant(&a, &b, logic, budget) {
        Interpolation::Interpolant(c) => {
            let first =
                engine::valid(&Formula::implies(a.clone(), c.clone()), logic, budget).is_valid();
            let second =
                engine::valid(&Formula::implies(c.clone(), b.clone()), logic, budget).is_valid();
            let shared: Vec<String> = a.atoms().intersection(&b.atoms()).cloned().collect();
            let within = c.atoms().iter().all(|x| shared.contains(x));
            if !(first && second && within) {
                return Err(Failure::internal(format!(
                    "interpolant {c} failed re-verification"
                )));
            }
            let text = format!(
                "{c}\n  {a} -> {c}: valid\n  {c} -> {b}: valid\n  atoms within shared {{{}}}\n",
                shared.join(", ")
            );
            Report::new(0, text, base)
                .with("result", json!("interpolant"))
                .with("interpolant", json!(c.to_string()))
                .with("shared_atoms", json!(shared))
        }
        Interpolation::NotValid { model, world } => {
            round_trip(&model, world, &implication)?;
            let text = format!(
                "Not valid in {logic}; refuted at {}\n{}",
                model.name(world),
                model_text(&model)
            );
            Report::new(1, text, base)
                .with("result", json!("not_valid"))
                .with("world", json!(model.name(world)))
                .with("countermodel", model_json(&model))
        }
        Interpolation::Unknown(r) => Report::unknown(r, base),
    })
}

fn frame_from_edges(spec: &str) -> Result<RootedFrame, Failure> {
    let mut pairs = Vec::new();
    let mut n = 1;
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = item
            .split_once('-')
            .ok_or_else(|| Failure::usage(format!("edge `{item}` is not of the form i-j")))?;
        let parse_point = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Failure::usage(format!("`{t}` is not a point number")))
        };
        let (a, b) = (parse_point(a)?, parse_point(b)?);
        n = n.max(a + 1).max(b + 1);
        pairs.push((a, b));
    }
    if n > 64 {
        return Err(Failure::usage("frames have at most 64 points".into()));
    }
    let mut rows: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    for &(a, b) in &pairs {
        rows[a] |= 1 << b;
    }
    loop {
        let next: Vec<u64> = rows
            .iter()
            .map(|&r| {
                (0..n)
                    .filter(|&j| r >> j & 1 == 1)
                    .fold(r, |acc, j| acc | rows[j])
            })
            .collect();
        if next == rows {
            break;
        }
        rows = next;
    }
    RootedFrame::new(rows).map_err(|e| Failure::usage(e.to_string()))
}

fn cmd_frame_formula(
    cluster: Option<usize>,
    gamma_bound: Option<&str>,
    frame: Option<&str>,
    topped: bool,
    subst: &[String],
) -> Result<Report, Failure> {
    let (chi, conjuncts) = match (cluster, gamma_bound, frame) {
        (Some(k), None, None) => {
            let g = cluster_frame(k, topped).map_err(|e| Failure::usage(e.to_string()))?;
            (frame_formula(&g), frame_conjuncts(&g))
        }
        (None, Some(b), None) => {
            let b = bound(b)?;
            let conj = match b {
                Bound::Finite(k) => {
                    frame_conjuncts(&cluster_frame(k + 1, topped).expect("k + 1 >= 1"))
                }
                Bound::Omega => Vec::new(),
            };
            (gamma(b, topped), conj)
        }
        (None, None, Some(spec)) => {
            let g = frame_from_edges(spec)?;
            (frame_formula(&g), frame_conjuncts(&g))
        }
        _ => {
            return Err(Failure::usage(
                "give one of --cluster, --gamma or --frame".into(),
            ))
        }
    };
    let result = if subst.is_empty() {
        chi
    } else {
        let args = subst
            .iter()
            .map(|s| formula(s))
            .collect::<Result<Vec<_>, _>>()?;
        substitute(&chi, &args).map_err(|e| Failure::usage(e.to_string()))?
    };
    let mut text = format!("{result}\n");
    if subst.is_empty() && !conjuncts.is_empty() {
        for c in &conjuncts {
            text.push_str(&format!("  {c}\n"));
        }
    }
    let conj: Vec<String> = conjuncts.iter().map(|c| c.to_string()).collect();
    Ok(Report::new(
        0,
        text,
        json!({"command": "frame-formula", "formula": result.to_string(), "conjuncts": conj}),
    ))
}

fn cmd_refine(
    model: &Path,
    sigma: &Path,
    sigma2: Option<&Path>,
    m: &str,
    n: &str,
    check: bool,
    out: Option<&Path>,
) -> Result<Report, Failure> {
    let input = model_from_json(&read(model)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", model.display())))?;
    let s1 = formula_list(sigma)?;
    let s2 = match sigma2 {
        Some(p) => formula_list(p)?,
        None => s1.clone(),
    };
    let (m, n) = (bound(m)?, bound(n)?);
    let opts = RefineOptions {
        recheck_preconditions: check,
        ..RefineOptions::default()
    };
    let r = refine_model(&input, &s1, &s2, m, n, &opts).map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })?;
    let mut text = String::new();
    for step in &r.steps {
        text.push_str(&format!(
            "refined {} cluster {{{}}} keeping {{{}}}, {} edges removed\n",
            if step.was_final { "final" } else { "non-final" },
            step.cluster.join(", "),
            step.keep.join(", "),
            step.removed_edges
        ));
    }
    match out {
        Some(path) => write(path, &model_to_json(&r.model))?,
        None => text.push_str(&model_to_json(&r.model)),
    }
    if !text.ends_with('\n') {
        text.push('\n');
    }
    Ok(Report::new(
        0,
        text,
        json!({"command": "refine", "steps": r.steps, "model": model_json(&r.model)}),
    ))
}

fn cmd_smorynski(
    l: &str,
    left: &[String],
    right: &[String],
    out: Option<&Path>,
    budget: &Budget,
) -> Result<Report, Failure> {
    let logic = logic(l)?;
    let left = left
        .iter()
        .map(|s| formula(s))
        .collect::<Result<Vec<_>, _>>()?;
    let right = right
        .iter()
        .map(|s| formula(s))
        .collect::<Result<Vec<_>, _>>()?;
    let closure = SignedClosure::box_negation(&left, &right);
    let s = build_smorynski_model(&closure, logic, budget).map_err(|e| match e {
        Error::Undecided(r) | Error::ResourceExceeded(r) => Failure {
            code: 3,
            message: r,
        },
        e => Failure::internal(e.to_string()),
    })?;
    let failures = s.truth_lemma_failures();
    if let Some((w, f)) = failures.first() {
        return Err(Failure::internal(format!(
            "truth lemma fails for {f} at {}",
            s.model.name(*w)
        )));
    }
    let confluent = s.model.is_confluent();
    let mut text = format!(
        "{} maximal sets over {} formulas; truth lemma verified; {}\n",
        s.worlds.len(),
        closure.union().len(),
        if confluent {
            "confluent"
        } else {
            "not confluent"
        }
    );
    match out {
        Some(path) => write(path, &model_to_json(&s.model))?,
        None => text.push_str(&format!("{}\n", model_to_json(&s.model))),
    }
    Ok(Report::new(
        0,
        text,
        json!({
            "command": "smorynski",
            "logic": logic.to_string(),
            "worlds": s.worlds.len(),
            "closure_size": closure.union().len(),
            "confluent": confluent,
            "model": model_json(&s.model),
        }),
    ))
}

fn cmd_catalog() -> Report {
    let entries = engine::catalog();
    let mut text = String::new();
    for e in &entries {
        text.push_str(&format!(
            "{:<14} {:<4} {:<4} {}{}\n",
            e.name,
            if e.has_cip { "CIP" } else { "" },
            if e.has_dip { "DIP" } else { "" },
            if e.decidable_here { "decidable" } else { "" },
            if e.aliases.is_empty() {
                String::new()
            } else {
                format!(" ({})", e.aliases.join(", "))
            }
        ));
    }
    let cip = entries.iter().filter(|e| e.has_cip).count();
    let dip = entries.iter().filter(|e| e.has_dip).count();
    text.push_str(&format!(
        "{cip} with Craig interpolation, {dip} with deductive interpolation\n"
    ));
    Report::new(
        0,
        text,
        json!({"command": "catalog", "entries": entries, "cip": cip, "dip": dip}),
    )
}

fn cmd_selftest(names: &[String]) -> Result<Report, Failure> {
    let ids: Vec<usize> = if names.is_empty() {
        suites::SUITES.iter().map(|s| s.0).collect()
    } else {
        names
            .iter()
            .map(|n| {
                suites::lookup(n).ok_or_else(|| {
                    let known: Vec<&str> = suites::SUITES.iter().map(|s| s.1).collect();
                    Failure::usage(format!("unknown suite `{n}`; known: {}", known.join(", ")))
                })
            })
            .collect::<Result<_, _>>()?
    };
    let mut text = String::new();
    let mut reports = Vec::new();
    for id in ids {
        let r = suites::run(id).expect("known suite");
        text.push_str(&r.line());
        text.push('\n');
        reports.push(r);
    }
    let ok = reports.iter().all(|r| r.passed());
    Ok(Report::new(
        if ok { 0 } else { 1 },
        text,
        json!({"command": "selftest", "passed": ok, "suites": reports}),
    ))
}
