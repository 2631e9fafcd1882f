//! Command-line front end: argument definitions, dispatch and reports.
//!
//! Exit codes: 0 when every verdict passes, 1 when a violation or a failed
//! conclusion is found, 2 on input errors.

pub mod doc;
pub mod expr;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::continuity::{canonical_morphism_witness, morphism_witness, open_closed_check, u_compact_check, Kind, MorphismFailure};
use crate::enriched::{bc_check, bc_check_canonical, kan_finite_search, kan_into_canonical, CanonicalTarget};
use crate::error::{Error, Result};
use crate::harness::evt::{evt_diagnose, verify_evt_closure, EvtClosureInstance, EvtQuantaleInstance};
use crate::harness::{
    default_quantales, fuzz_campaign, parse_suites, regression_counterexamples, GeneratorConfig, Outcome, Suite,
    VerificationReport,
};
use crate::quantale::{QValue, Quantale};
use crate::relation::FiniteSet;
use crate::topology::powerset::DEFAULT_POWERSET_CAP;
use crate::topology::{cocomplete_check, CanonicalSpace, ModularSpace, Structure};
use crate::{Direction, VProf, Variance};

pub use doc::{parse, print, Document, Env, Item};

#[derive(Parser, Debug)]
#[command(name = "qkan", version, about = "Quantale-enriched Kan extensions and maximum theorems, checked exactly")]
pub struct Cli {
    /// Output style. `machine` is JSON and byte-deterministic.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Counterexamples,
    Berge,
    Evt,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the laws of every category, space and modular space in a document.
    Check { file: PathBuf },
    /// Compute the Kan extensions requested by `QUERY kan` lines.
    Kan { file: PathBuf },
    /// Run the property and theorem queries of a document, or a built-in suite.
    Verify {
        #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
        file: Option<PathBuf>,
        #[arg(long, value_enum)]
        builtin: Option<Builtin>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        /// Comma-separated quantale names.
        #[arg(long)]
        quantale: Option<String>,
    },
    /// Seeded randomized campaign over the theorem suites.
    Fuzz {
        /// `all`, `max`, `evt`, or a comma-separated list of suite names.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        quantale: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
    /// Evaluate a value expression, by default over distance distributions.
    Delta {
        expr: String,
        #[arg(long, default_value = "delta(min)")]
        quantale: String,
    },
    /// Print a document in canonical form.
    Fmt { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub subject: String,
    pub verdict: Verdict,
    pub details: Vec<(String, String)>,
}

impl Finding {
    fn new(subject: impl Into<String>, verdict: Verdict) -> Self {
        Finding { subject: subject.into(), verdict, details: Vec::new() }
    }

    fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.details.push((key.into(), value.to_string()));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub findings: Vec<Finding>,
    pub passed: bool,
}

impl Report {
    fn new(command: &str, findings: Vec<Finding>) -> Self {
        let passed = findings.iter().all(|f| f.verdict != Verdict::Fail);
        Report { command: command.into(), findings, passed }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            let tag = match f.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Info => "info",
            };
            let _ = writeln!(out, "[{tag}] {}", f.subject);
            for (k, v) in &f.details {
                let _ = writeln!(out, "    {k}: {v}");
            }
        }
        let _ = writeln!(out, "verdict: {}", if self.passed { "pass" } else { "FAIL" });
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Text printed on stdout and the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

/// Exit code for an error: internal self-check failures count as violations.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SelfCheck(_) => 1,
        _ => 2,
    }
}

fn emit(format: Format, r: &Report) -> Output {
    let stdout = match format {
        Format::Text => r.to_text(),
        Format::Machine => r.to_json(),
    };
    Output { stdout, code: if r.passed { 0 } else { 1 } }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse { line: 0, col: 0, msg: format!("cannot read {}: {e}", path.display()) })
}

fn load(path: &Path) -> Result<(Document, Env)> {
    let doc = parse(&read(path)?)?;
    let env = Env::build(&doc)?;
    check_queries(&doc)?;
    Ok((doc, env))
}

pub fn run(cli: &Cli) -> Result<Output> {
    let f = cli.format;
    match &cli.command {
        Command::Check { file } => {
            let (doc, env) = load(file)?;
            Ok(emit(f, &Report::new("check", cmd_check(&doc, &env)?)))
        }
        Command::Kan { file } => {
            let (doc, env) = load(file)?;
            Ok(emit(f, &Report::new("kan", run_queries(&doc, &env, &["kan"])?)))
        }
        Command::Verify { file: Some(file), .. } => {
            let (doc, env) = load(file)?;
            Ok(emit(f, &Report::new("verify", run_queries(&doc, &env, VERIFY_OPS)?)))
        }
        Command::Verify { file: None, builtin, seed, trials, max_size, quantale } => match builtin {
            Some(Builtin::Counterexamples) => Ok(emit(f, &Report::new("verify", counterexample_findings()?))),
            Some(b) => {
                let suites = if *b == Builtin::Berge { vec![Suite::Berge] } else { parse_suites("evt")? };
                campaign(f, &config(*seed, *trials, *max_size, quantale.as_deref())?, &suites)
            }
            None => Err(Error::Range("verify needs a file or --builtin".into())),
        },
        Command::Fuzz { suite, trials, seed, quantale, max_size } => {
            campaign(f, &config(*seed, *trials, *max_size, quantale.as_deref())?, &parse_suites(suite)?)
        }
        Command::Delta { expr, quantale } => {
            let q: Quantale = quantale.parse()?;
            let ev = expr::evaluate(q, expr)?;
            let mut finding = Finding::new(expr.clone(), Verdict::Info).with("quantale", q).with("value", &ev.value);
            if let Some((t, level)) = ev.at {
                finding = finding.with(format!("value at {t}"), level);
            }
            Ok(emit(f, &Report::new("delta", vec![finding])))
        }
        Command::Fmt { file } => {
            let doc = parse(&read(file)?)?;
            Ok(Output { stdout: print(&doc), code: 0 })
        }
    }
}

fn config(seed: u64, trials: u64, max_size: usize, quantales: Option<&str>) -> Result<GeneratorConfig> {
    let quantales = match quantales {
        None => default_quantales(),
        Some(s) => s.split(',').map(|p| p.trim().parse()).collect::<Result<Vec<Quantale>>>()?,
    };
    let cfg = GeneratorConfig { quantales, max_size, trials, seed, ..GeneratorConfig::default() };
    cfg.validate()?;
    Ok(cfg)
}

fn campaign(f: Format, cfg: &GeneratorConfig, suites: &[Suite]) -> Result<Output> {
    let r = fuzz_campaign(cfg, suites)?;
    let stdout = match f {
        Format::Text => r.to_text(),
        Format::Machine => r.to_json(),
    };
    Ok(Output { stdout, code: if r.passed() { 0 } else { 1 } })
}

fn counterexample_findings() -> Result<Vec<Finding>> {
    Ok(regression_counterexamples()?
        .into_iter()
        .map(|c| {
            Finding::new(c.name, if c.pass { Verdict::Pass } else { Verdict::Fail })
                .with("expected", c.expected)
                .with("actual", c.actual)
        })
        .collect())
}

// ---------------------------------------------------------------------------
// check

fn cmd_check(doc: &Document, env: &Env) -> Result<Vec<Finding>> {
    let mut out = Vec::new();
    for (_, item) in &doc.items {
        match item {
            Item::Cat { name, .. } => {
                let c = &env.cats[name];
                let r = c.check();
                let s = c.carrier();
                let mut f = Finding::new(format!("CAT {name}"), if r.holds() { Verdict::Pass } else { Verdict::Fail });
                if let Some(x) = r.unit_witness {
                    f = f.with("unit law fails at", s.element(x));
                }
                if let Some((x, y, z)) = r.assoc_witness {
                    f = f.with("composition law fails at", format!("({}, {}, {})", s.element(x), s.element(y), s.element(z)));
                }
                out.push(f);
            }
            Item::Space { name, .. } => {
                let mut f = Finding::new(format!("SPACE {name}"), Verdict::Info);
                match &env.spaces[name] {
                    Structure::Closure(p) => {
                        let fl = p.flags();
                        f = f
                            .with("reflexive", fl.reflexive)
                            .with("extensional", fl.extensional)
                            .with("transitive", fl.transitive)
                            .with("finite joins", fl.finite_join_preserving);
                    }
                    Structure::Convergence(u) => {
                        let fl = u.flags();
                        f = f.with("reflexive", fl.reflexive).with("unitary", fl.unitary).with("transitive", fl.transitive);
                    }
                }
                out.push(f);
            }
            Item::Modular { name, .. } => out.push(match env.modular(name) {
                Ok(m) => {
                    let c = cocomplete_check(&m)?;
                    Finding::new(format!("MODULAR {name}"), Verdict::Pass).with("cocomplete", c.cocomplete)
                }
                Err(Error::NotLawful(msg)) => Finding::new(format!("MODULAR {name}"), Verdict::Fail).with("reason", msg),
                Err(e) => return Err(e),
            }),
            _ => {}
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// queries

const VERIFY_OPS: &[&str] = &["evt", "open", "closed", "ucompact", "continuous", "morphism"];

fn usage(op: &str) -> &'static str {
    match op {
        "kan" => "kan left|right lhom|rhom VALUES REL CAT CAT  or  kan left|right CAT MAP REL CAT CAT",
        "evt" => "evt VALUES REL MODULAR CAT  or  evt MAP REL MODULAR CAT MODULAR",
        "open" | "closed" => "open|closed REL SPACE SPACE",
        "ucompact" => "ucompact REL SPACE",
        "continuous" => "continuous VALUES MODULAR lhom|rhom",
        "morphism" => "morphism MAP MODULAR MODULAR",
        _ => "",
    }
}

fn arity_ok(op: &str, n: usize) -> bool {
    match op {
        "kan" => n == 6,
        "evt" => n == 4 || n == 5,
        "open" | "closed" | "continuous" | "morphism" => n == 3,
        "ucompact" => n == 2,
        _ => false,
    }
}

fn check_queries(doc: &Document) -> Result<()> {
    for (line, item) in &doc.items {
        if let Item::Query { op, args } = item {
            if usage(op).is_empty() {
                return Err(Error::Parse { line: *line, col: 7, msg: format!("unknown query `{op}`") });
            }
            if !arity_ok(op, args.len()) {
                return Err(Error::Parse { line: *line, col: 7, msg: format!("usage: QUERY {}", usage(op)) });
            }
        }
    }
    Ok(())
}

fn semantic(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col: 1, msg: msg.into() }
}

/// Attaches the query line to errors that lack a location.
fn at<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } | Error::SelfCheck(_) => e,
        other => semantic(line, other.to_string()),
    })
}

fn run_queries(doc: &Document, env: &Env, ops: &[&str]) -> Result<Vec<Finding>> {
    let mut out = Vec::new();
    for (line, item) in &doc.items {
        let Item::Query { op, args } = item else { continue };
        if !ops.contains(&op.as_str()) {
            continue;
        }
        let subject = format!("line {line}: QUERY {op} {}", args.join(" "));
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let finding = at(*line, query(doc.quantale, env, *line, op, &a, subject))?;
        out.push(finding);
    }
    if out.is_empty() {
        return Err(semantic(0, format!("the document has no {} queries", ops.join("/"))));
    }
    Ok(out)
}

fn direction(s: &str, line: usize) -> Result<Direction> {
    match s {
        "left" => Ok(Direction::Left),
        "right" => Ok(Direction::Right),
        _ => Err(semantic(line, format!("expected left or right, found `{s}`"))),
    }
}

fn variance(s: &str) -> Option<Variance> {
    match s {
        "lhom" => Some(Variance::Lhom),
        "rhom" => Some(Variance::Rhom),
        _ => None,
    }
}

fn values<'a>(env: &'a Env, name: &str, line: usize) -> Result<&'a (FiniteSet, Vec<QValue>)> {
    env.values.get(name).ok_or_else(|| semantic(line, format!("undefined VALUES `{name}`")))
}

fn rel<'a>(env: &'a Env, name: &str, line: usize) -> Result<&'a crate::VRel> {
    env.rels.get(name).ok_or_else(|| semantic(line, format!("undefined relation `{name}`")))
}

fn map<'a>(env: &'a Env, name: &str, line: usize) -> Result<&'a crate::SetMap> {
    env.maps.get(name).ok_or_else(|| semantic(line, format!("undefined MAP `{name}`")))
}

fn modular(env: &Env, name: &str, line: usize) -> Result<ModularSpace> {
    if !env.modulars.contains_key(name) {
        return Err(semantic(line, format!("undefined modular space `{name}`")));
    }
    env.modular(name).map_err(|e| semantic(line, format!("`{name}`: {e}")))
}

fn same_set(a: &FiniteSet, b: &FiniteSet, what: &str, line: usize) -> Result<()> {
    if a != b {
        return Err(semantic(line, format!("{what} lives on {}, expected {}", a.name(), b.name())));
    }
    Ok(())
}

fn verdict(holds: bool) -> Verdict {
    if holds {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn join_names<'a>(items: impl Iterator<Item = (&'a str, String)>) -> String {
    items.map(|(n, v)| format!("{n} = {v}")).collect::<Vec<_>>().join(", ")
}

fn query(q: Quantale, env: &Env, line: usize, op: &str, a: &[&str], subject: String) -> Result<Finding> {
    let mut f = Finding::new(subject, Verdict::Info);
    match op {
        "kan" => {
            let dir = direction(a[0], line)?;
            let j = VProf::new(rel(env, a[3], line)?.clone(), env.category(a[4], line)?, env.category(a[5], line)?)?;
            let (dom, cod) = match dir {
                Direction::Left => (j.source.carrier().clone(), j.target.carrier().clone()),
                Direction::Right => (j.target.carrier().clone(), j.source.carrier().clone()),
            };
            let name = if dir == Direction::Left { "l" } else { "r" };
            if let Some(v) = variance(a[1]) {
                let (set, d) = values(env, a[2], line)?;
                same_set(set, &dom, a[2], line)?;
                let ext = kan_into_canonical(dir, v, d, &j)?;
                let bc = bc_check_canonical(dir, &ext, d, &j, &CanonicalTarget::new(q, v))?;
                let vals = cod.elements().iter().zip(&ext).map(|(n, e)| format!("{name}({n}) = {e}"));
                f = f
                    .with("extension", vals.collect::<Vec<_>>().join(", "))
                    .with("Beck-Chevalley gaps", join_names(cod.elements().iter().map(String::as_str).zip(bc.gaps.iter().map(|g| g.to_string()))))
                    .with("Beck-Chevalley holds", bc.holds);
            } else {
                let m = env.category(a[1], line)?;
                let d = map(env, a[2], line)?;
                same_set(d.source(), &dom, a[2], line)?;
                same_set(d.target(), m.carrier(), a[2], line)?;
                match kan_finite_search(dir, d.table(), &j, &m)? {
                    None => f = f.with("extension", "none exists"),
                    Some(ext) => {
                        let bc = bc_check(dir, &ext, d.table(), &j, &m)?;
                        let ms = m.carrier();
                        let vals = cod.elements().iter().zip(&ext).map(|(n, &e)| format!("{name}({n}) = {}", ms.element(e)));
                        f = f
                            .with("extension", vals.collect::<Vec<_>>().join(", "))
                            .with("Beck-Chevalley gaps", join_names(cod.elements().iter().map(String::as_str).zip(bc.gaps.iter().map(|g| g.to_string()))))
                            .with("Beck-Chevalley holds", bc.holds);
                    }
                }
            }
        }
        "evt" if a.len() == 4 => {
            let (set, d) = values(env, a[0], line)?;
            let space = modular(env, a[2], line)?;
            same_set(set, space.carrier(), a[0], line)?;
            let j = VProf::new(rel(env, a[1], line)?.clone(), space.cat().clone(), env.category(a[3], line)?)?;
            let bset = j.target.carrier().clone();
            let inst = EvtQuantaleInstance { seed: 0, trial: 0, quantale: q, a: space, j, d: d.clone() };
            let dg = evt_diagnose(&inst)?;
            let hyps = [
                ("(a) J discrete", dg.discrete),
                ("(b) J U-compact", dg.u_compact),
                ("(c) fibers up-directed", dg.directed.iter().all(|&b| b)),
                ("(d) k below sup of residuals", dg.condition_d.iter().all(|&b| b)),
            ];
            for (h, v) in hyps {
                f = f.with(h, v);
            }
            let names = || bset.elements().iter().map(String::as_str);
            f = f
                .with("extension", names().zip(&dg.extension).map(|(n, v)| format!("l({n}) = {v}")).collect::<Vec<_>>().join(", "))
                .with("Beck-Chevalley gaps", join_names(names().zip(dg.bc.gaps.iter().map(|g| g.to_string()))))
                .with("Beck-Chevalley holds", dg.bc.holds);
            if hyps.iter().all(|h| h.1) {
                f.verdict = verdict(dg.bc.holds);
            } else {
                f = f.with("conclusion", "not asserted: a hypothesis fails");
            }
        }
        "evt" => {
            let d = map(env, a[0], line)?.clone();
            let space = modular(env, a[2], line)?;
            let m = modular(env, a[4], line)?;
            let j = VProf::new(rel(env, a[1], line)?.clone(), space.cat().clone(), env.category(a[3], line)?)?;
            let r = verify_evt_closure(&EvtClosureInstance { seed: 0, trial: 0, a: space, j, d, m });
            f = from_report(f, &r)?;
        }
        "open" | "closed" => {
            let kind = if op == "open" { Kind::Open } else { Kind::Closed };
            let (j, sa, sb) = (rel(env, a[0], line)?, env.structure(a[1], line)?, env.structure(a[2], line)?);
            let r = open_closed_check(kind, j, &sa, &sb)?;
            f.verdict = verdict(r.holds);
            if let Some((t, y)) = r.witness {
                let tset = sa.monad().carrier(sa.carrier(), DEFAULT_POWERSET_CAP)?;
                f = f.with("fails at", format!("({}, {})", tset.element(t), sb.carrier().element(y)));
            }
        }
        "ucompact" => {
            let (j, s) = (rel(env, a[0], line)?, env.structure(a[1], line)?);
            let Structure::Convergence(u) = &s else {
                return Err(semantic(line, "U-compactness needs a convergence space"));
            };
            let w = u_compact_check(j, u)?;
            f.verdict = verdict(w.is_none());
            if let Some((x, y)) = w {
                f = f.with("fails at", format!("({}, {})", j.source().element(x), j.target().element(y)));
            }
        }
        "continuous" => {
            let (set, d) = values(env, a[0], line)?;
            let space = modular(env, a[1], line)?;
            same_set(set, space.carrier(), a[0], line)?;
            let v = variance(a[2]).ok_or_else(|| semantic(line, "expected lhom or rhom"))?;
            let w = canonical_morphism_witness(d, &space, &CanonicalSpace::new(q, v))?;
            f.verdict = verdict(w.is_none());
            if let Some(w) = w {
                f = f.with("fails at", failure_text(w, &space));
            }
        }
        "morphism" => {
            let (m, sa, sc) = (map(env, a[0], line)?, modular(env, a[1], line)?, modular(env, a[2], line)?);
            let w = morphism_witness(m, &sa, &sc)?;
            f.verdict = verdict(w.is_none());
            if let Some(w) = w {
                f = f.with("fails at", failure_text(w, &sa));
            }
        }
        _ => unreachable!("queries are validated on load"),
    }
    Ok(f)
}

fn failure_text(w: MorphismFailure, space: &ModularSpace) -> String {
    let s = space.carrier();
    match w {
        MorphismFailure::Functor(x, y) => format!("hom ({}, {})", s.element(x), s.element(y)),
        MorphismFailure::Structure(t, x) => {
            let tname = space
                .monad()
                .carrier(s, DEFAULT_POWERSET_CAP)
                .map(|ts| ts.element(t).to_string())
                .unwrap_or_else(|_| t.to_string());
            format!("structure ({tname}, {})", s.element(x))
        }
    }
}

fn from_report(mut f: Finding, r: &VerificationReport) -> Result<Finding> {
    for (h, v) in &r.hypotheses {
        f = f.with(h.clone(), v);
    }
    match &r.outcome {
        Outcome::Pass => f.verdict = Verdict::Pass,
        Outcome::Skip(why) => f = f.with("conclusion", format!("not asserted: {why}")),
        Outcome::Fail(why) => {
            f = f.with("reason", why);
            f.verdict = Verdict::Fail;
        }
        Outcome::Error(e) => return Err(Error::SelfCheck(e.clone())),
    }
    Ok(f)
}

/// Parses arguments, runs the command and returns the exit code. Errors go
/// to stderr.
pub fn main_with(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(o) => {
            print!("{}", o.stdout);
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
