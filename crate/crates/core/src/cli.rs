//! Command-line front end.
//!
//! `run` parses arguments and returns the text to print and the exit code,
//! so the binary and the tests share one code path. Exit codes: 0 success,
//! 1 negative verdict, 2 usage or parse error, 3 exhausted budget. Error
//! output is a single line starting with `error[<kind>]:`.

use crate::cfpo::{alt_rank, path, path_completion, validate_cfpo, PathResult};
use crate::poset::{
    automorphisms, orbits, parse_poset, render_poset, to_dot, validate_tree, Bounds, FinPoset,
    NodeId, PosetError, TreeViolation,
};
use crate::terms::{materialize, normalize, one_orbits, parse_term, SampleError, Term};
use crate::tree::{
    annotate, chain_types, check_categorical, materialize_tree, parse_spec, ramification_table,
    PairError, SampleBudget, SpecError, TreeSpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;

#[derive(Debug, Parser)]
#[command(
    name = "semilinear",
    version,
    about = "Countably categorical chains, trees and cycle-free orders"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Levels of attached copies in tree samples.
    #[arg(long, global = true, default_value_t = 2)]
    pub depth: usize,
    /// Copies realised for an `omega` multiplicity.
    #[arg(long, global = true, default_value_t = 2)]
    pub width: usize,
    /// Points per sampled chain.
    #[arg(long, global = true, default_value_t = 3)]
    pub size: usize,
    /// Largest chain count reported exactly.
    #[arg(long, global = true, default_value_t = 3)]
    pub cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Shorthand for `--format dot`.
    #[arg(long, global = true)]
    pub dot: bool,
    /// Largest structure built or searched.
    #[arg(long = "budget-nodes", global = true, default_value_t = 2000)]
    pub budget_nodes: usize,
}

impl RunConfig {
    fn format(&self) -> Format {
        if self.dot {
            Format::Dot
        } else {
            self.format
        }
    }

    fn bounds(&self) -> Bounds {
        Bounds {
            max_nodes: self.budget_nodes,
            ..Bounds::default()
        }
    }

    fn sample_budget(&self) -> SampleBudget {
        SampleBudget {
            depth: self.depth,
            width: self.width,
            size: self.size,
            max_nodes: self.budget_nodes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// Line-oriented `key: value` records.
    Records,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Linear order terms.
    #[command(subcommand)]
    Term(TermCmd),
    /// Recursively specified trees.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Finite posets.
    #[command(subcommand)]
    Poset(PosetCmd),
    /// Cycle-free partial orders.
    #[command(subcommand)]
    Cfpo(CfpoCmd),
}

#[derive(Debug, Subcommand)]
pub enum TermCmd {
    /// Print the normal form.
    Normalize { expr: String },
    /// Decide whether two terms denote isomorphic orders.
    Eq { left: String, right: String },
    /// List the 1-orbits of the normal form.
    Orbits { expr: String },
    /// Sample a finite chain from the term.
    Sample { expr: String },
}

#[derive(Debug, Subcommand)]
pub enum TreeCmd {
    /// Run the categoricity check.
    Check { file: String },
    /// List the maximal chain types.
    Chains { file: String },
    /// Print the ramification table.
    Table { file: String },
    /// Sample a finite tree.
    Sample { file: String },
    /// Decide whether two pairs of a sample lie in one 2-orbit.
    Orbit2 {
        file: String,
        x0: String,
        y0: String,
        x1: String,
        y1: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum PosetCmd {
    /// Check the tree or cycle-free axioms.
    Validate {
        file: String,
        #[arg(long, conflicts_with = "cfpo", required_unless_present = "cfpo")]
        tree: bool,
        #[arg(long)]
        cfpo: bool,
    },
    /// List the orbits on tuples.
    Orbits {
        file: String,
        #[arg(short = 'n', default_value_t = 1)]
        n: usize,
    },
    /// List the automorphisms.
    Auts { file: String },
}

#[derive(Debug, Subcommand)]
pub enum CfpoCmd {
    /// Length of the longest alternating sequence.
    AltRank { file: String },
    /// The unique path between two nodes of the path completion.
    Path { file: String, a: String, b: String },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl RunOutput {
    fn ok(stdout: String) -> Self {
        RunOutput {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn negative(stdout: String) -> Self {
        RunOutput {
            code: 1,
            stdout,
            stderr: String::new(),
        }
    }
}

/// A failed invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }

    pub fn code(&self) -> i32 {
        match self.kind {
            "budget" => 3,
            _ => 2,
        }
    }
}

impl From<PosetError> for CliError {
    fn from(e: PosetError) -> Self {
        match e {
            PosetError::Budget(_) => CliError::new("budget", e.to_string()),
            PosetError::NotATree(_) | PosetError::MissingMeet(..) => {
                CliError::new("input", e.to_string())
            }
            _ => CliError::new("parse", e.to_string()),
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Budget(_) => CliError::new("budget", e.to_string()),
            SpecError::InfiniteChainTypes(_) | SpecError::InfinitePredicates(_) => {
                CliError::new("infinite", e.to_string())
            }
            _ => CliError::new("parse", e.to_string()),
        }
    }
}

impl From<SampleError> for CliError {
    fn from(e: SampleError) -> Self {
        CliError::new("budget", e.to_string())
    }
}

impl From<PairError> for CliError {
    fn from(e: PairError) -> Self {
        match e {
            PairError::Poset(p) => p.into(),
            PairError::NotBelow(..) => CliError::new("usage", e.to_string()),
        }
    }
}

/// Runs the command line `args`, whose first item is the program name.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => RunOutput::ok(e.to_string()),
                _ => {
                    let first = e
                        .to_string()
                        .lines()
                        .next()
                        .unwrap_or("")
                        .trim_start_matches("error: ")
                        .to_string();
                    RunOutput {
                        code: 2,
                        stdout: String::new(),
                        stderr: format!("error[usage]: {first}\n"),
                    }
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(out) => out,
        Err(e) => RunOutput {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("error[{}]: {}\n", e.kind, e.message.replace('\n', " ")),
        },
    }
}

fn dispatch(cli: &Cli) -> Result<RunOutput, CliError> {
    let cfg = &cli.config;
    if cfg.size == 0 || cfg.width == 0 || cfg.budget_nodes == 0 {
        return Err(CliError::new(
            "usage",
            "size, width and budget-nodes must be positive",
        ));
    }
    match &cli.command {
        Command::Term(c) => cmd_term(c, cfg),
        Command::Tree(c) => cmd_tree(c, cfg),
        Command::Poset(c) => cmd_poset(c, cfg),
        Command::Cfpo(c) => cmd_cfpo(c, cfg),
    }
}

fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{path}: {e}")))
}

fn load_poset(path: &str) -> Result<FinPoset, CliError> {
    Ok(parse_poset(&read_file(path)?)?)
}

fn load_spec(path: &str) -> Result<TreeSpec, CliError> {
    Ok(parse_spec(&read_file(path)?)?)
}

fn term(expr: &str) -> Result<Term, CliError> {
    parse_term(expr).map_err(|e| CliError::new("parse", e.to_string()))
}

fn node(p: &FinPoset, name: &str) -> Result<NodeId, CliError> {
    p.id(name)
        .map_err(|e| CliError::new("usage", e.to_string()))
}

/// Key-value records for a poset: one line per node.
fn poset_records(p: &FinPoset) -> String {
    let mut out = String::new();
    for x in p.ids() {
        let n = p.node(x);
        let above: Vec<&str> = p.upper_covers(x).into_iter().map(|y| p.name(y)).collect();
        let _ = writeln!(
            out,
            "node: {} colour: {} irrational: {} covered-by: {}",
            n.name,
            n.colour.as_deref().unwrap_or("-"),
            if n.irrational { "yes" } else { "no" },
            if above.is_empty() {
                "-".to_string()
            } else {
                above.join(",")
            }
        );
    }
    out
}

fn emit_poset(p: &FinPoset, format: Format) -> String {
    match format {
        Format::Text => render_poset(p),
        Format::Records => poset_records(p),
        Format::Dot => to_dot(p),
    }
}

fn cmd_term(c: &TermCmd, cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let records = cfg.format() == Format::Records;
    match c {
        TermCmd::Normalize { expr } => {
            let nf = normalize(&term(expr)?);
            Ok(RunOutput::ok(if records {
                format!("normal-form: {nf}\n")
            } else {
                format!("{nf}\n")
            }))
        }
        TermCmd::Eq { left, right } => {
            let (l, r) = (normalize(&term(left)?), normalize(&term(right)?));
            let verdict = if l == r {
                "equivalent"
            } else {
                "not equivalent"
            };
            let text = if records {
                format!("left: {l}\nright: {r}\nverdict: {verdict}\n")
            } else {
                format!("{verdict}\n")
            };
            Ok(if l == r {
                RunOutput::ok(text)
            } else {
                RunOutput::negative(text)
            })
        }
        TermCmd::Orbits { expr } => {
            let nf = normalize(&term(expr)?);
            let list = one_orbits(&nf);
            let mut out = String::new();
            if records {
                let _ = writeln!(out, "normal-form: {nf}\ncount: {}", list.len());
            } else {
                let _ = writeln!(out, "{} orbits", list.len());
            }
            for d in &list {
                let path: Vec<String> = d.path.iter().map(ToString::to_string).collect();
                let path = if path.is_empty() {
                    "root".to_string()
                } else {
                    path.join(".")
                };
                let colour = singleton_at(&nf, &d.path);
                if records {
                    let _ = writeln!(out, "orbit: {} path: {path} colour: {colour}", d.index);
                } else {
                    let _ = writeln!(out, "orbit {}: colour {colour} at {path}", d.index);
                }
            }
            Ok(RunOutput::ok(out))
        }
        TermCmd::Sample { expr } => {
            let t = term(expr)?;
            let s = materialize(&t, cfg.size, cfg.seed)?;
            let p = s.to_poset();
            if records {
                let mut out = String::new();
                for (i, pt) in s.points.iter().enumerate() {
                    let adj = s
                        .adjacent
                        .get(i)
                        .map_or("-", |&a| if a { "yes" } else { "no" });
                    let _ = writeln!(
                        out,
                        "node: p{i} colour: {} orbit: {} adjacent-next: {adj}",
                        pt.colour.as_str(),
                        pt.orbit
                    );
                }
                Ok(RunOutput::ok(out))
            } else {
                Ok(RunOutput::ok(emit_poset(&p, cfg.format())))
            }
        }
    }
}

fn singleton_at(t: &Term, path: &[usize]) -> String {
    let mut cur = t;
    for &i in path {
        if let Term::Shuffle(parts) | Term::Concat(parts) = cur {
            cur = &parts[i];
        }
    }
    cur.to_string()
}

fn cmd_tree(c: &TreeCmd, cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let records = cfg.format() == Format::Records;
    match c {
        TreeCmd::Check { file } => {
            let spec = load_spec(file)?;
            let v = check_categorical(&spec, cfg.cap);
            let mut out = String::new();
            for w in spec.warnings() {
                let _ = writeln!(out, "warning: {w}");
            }
            if records {
                let _ = writeln!(
                    out,
                    "categorical: {}",
                    if v.categorical { "yes" } else { "no" }
                );
                for (k, cond) in v.conditions.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "condition-{}: {}",
                        k + 1,
                        outcome_record(&cond.outcome)
                    );
                }
            } else {
                let _ = write!(out, "{v}");
            }
            Ok(if v.categorical {
                RunOutput::ok(out)
            } else {
                RunOutput::negative(out)
            })
        }
        TreeCmd::Chains { file } => {
            let spec = load_spec(file)?;
            let mut out = String::new();
            for (m, t) in chain_types(&spec)?.iter().enumerate() {
                if records {
                    let _ = writeln!(out, "chain: {m} type: {t}");
                } else {
                    let _ = writeln!(out, "{t}");
                }
            }
            Ok(RunOutput::ok(out))
        }
        TreeCmd::Table { file } => {
            let spec = load_spec(file)?;
            let table = ramification_table(&spec, cfg.cap)?;
            if records {
                let mut out = String::new();
                for (m, t) in table.chain_types.iter().enumerate() {
                    let _ = writeln!(out, "chain: {m} type: {t}");
                }
                for p in &table.realised {
                    let _ = writeln!(out, "predicate: {p}");
                }
                Ok(RunOutput::ok(out))
            } else {
                Ok(RunOutput::ok(table.to_string()))
            }
        }
        TreeCmd::Sample { file } => {
            let spec = load_spec(file)?;
            let s = materialize_tree(&spec, &cfg.sample_budget(), cfg.seed)?;
            Ok(RunOutput::ok(emit_poset(&s.poset, cfg.format())))
        }
        TreeCmd::Orbit2 {
            file,
            x0,
            y0,
            x1,
            y1,
        } => {
            let spec = load_spec(file)?;
            let s = materialize_tree(&spec, &cfg.sample_budget(), cfg.seed)?;
            let p = &s.poset;
            let ann = annotate(p, cfg.cap)?;
            let pair0 = (node(p, x0)?, node(p, y0)?);
            let pair1 = (node(p, x1)?, node(p, y1)?);
            let eq = crate::tree::two_orbit_equiv(p, &ann, pair0, pair1)?;
            let verdict = if eq.equivalent {
                "equivalent"
            } else {
                "not equivalent"
            };
            let mut out = String::new();
            let _ = writeln!(out, "{}{verdict}", if records { "verdict: " } else { "" });
            for step in &eq.trace {
                let _ = writeln!(out, "{}{step}", if records { "step: " } else { "  " });
            }
            if let Some(map) = &eq.map {
                let moved: Vec<String> = map
                    .iter()
                    .enumerate()
                    .filter(|&(x, &y)| x != y)
                    .map(|(x, &y)| format!("{}->{}", p.name(x), p.name(y)))
                    .collect();
                let moved = if moved.is_empty() {
                    "identity".to_string()
                } else {
                    moved.join(" ")
                };
                let _ = writeln!(out, "map: {moved}");
            }
            Ok(if eq.equivalent {
                RunOutput::ok(out)
            } else {
                RunOutput::negative(out)
            })
        }
    }
}

fn outcome_record(o: &crate::tree::Outcome) -> String {
    use crate::tree::Outcome;
    match o {
        Outcome::Pass => "pass".into(),
        Outcome::Fail(w) => format!("fail {w}"),
        Outcome::Indeterminate(why) => format!("indeterminate {why}"),
    }
}

fn cmd_poset(c: &PosetCmd, cfg: &RunConfig) -> Result<RunOutput, CliError> {
    match c {
        PosetCmd::Validate { file, tree, .. } => {
            let p = load_poset(file)?;
            if *tree {
                let report = validate_tree(&p);
                if report.is_ok() {
                    return Ok(RunOutput::ok("tree: ok\n".into()));
                }
                let mut out = String::from("tree: no\n");
                for v in &report.violations {
                    let _ = match *v {
                        TreeViolation::DownwardBranching { x, y, z } => writeln!(
                            out,
                            "violation: {} and {} are below {} but incomparable",
                            p.name(x),
                            p.name(y),
                            p.name(z)
                        ),
                        TreeViolation::NoCommonLowerBound { x, y } => {
                            writeln!(
                                out,
                                "violation: {} and {} have no common lower bound",
                                p.name(x),
                                p.name(y)
                            )
                        }
                    };
                }
                Ok(RunOutput::negative(out))
            } else {
                let report = validate_cfpo(&p)?;
                match report.witness {
                    None => Ok(RunOutput::ok("cfpo: ok\n".into())),
                    Some((a, b)) => Ok(RunOutput::negative(format!(
                        "cfpo: no\nwitness: {} {} joined by two paths\n",
                        p.name(a),
                        p.name(b)
                    ))),
                }
            }
        }
        PosetCmd::Orbits { file, n } => {
            let p = load_poset(file)?;
            let report = orbits(&p, *n, &cfg.bounds())?;
            let mut out = format!("{} orbits\n", report.count);
            for (k, orbit) in report.orbits.iter().enumerate() {
                let tuples: Vec<String> = orbit
                    .iter()
                    .map(|t| {
                        format!(
                            "({})",
                            t.iter().map(|&x| p.name(x)).collect::<Vec<_>>().join(",")
                        )
                    })
                    .collect();
                let _ = writeln!(out, "orbit {k}: {}", tuples.join(" "));
            }
            Ok(RunOutput::ok(out))
        }
        PosetCmd::Auts { file } => {
            let p = load_poset(file)?;
            let auts = automorphisms(&p, &cfg.bounds())?;
            let mut out = format!("{} automorphisms\n", auts.len());
            for g in &auts {
                let images: Vec<String> = g.iter().map(|&y| p.name(y).to_string()).collect();
                let _ = writeln!(out, "{}", images.join(" "));
            }
            Ok(RunOutput::ok(out))
        }
    }
}

fn cmd_cfpo(c: &CfpoCmd, _cfg: &RunConfig) -> Result<RunOutput, CliError> {
    match c {
        CfpoCmd::AltRank { file } => {
            let p = load_poset(file)?;
            Ok(RunOutput::ok(format!("{}\n", alt_rank(&p)?)))
        }
        CfpoCmd::Path { file, a, b } => {
            let p = load_poset(file)?;
            let full = path_completion(&p)?;
            let (x, y) = (node(&full, a)?, node(&full, b)?);
            match path(&full, x, y) {
                PathResult::Unique(set) => {
                    let names: Vec<&str> = set.into_iter().map(|v| full.name(v)).collect();
                    Ok(RunOutput::ok(format!("{}\n", names.join(" "))))
                }
                PathResult::Ambiguous => Ok(RunOutput::negative("ambiguous (not a CFPO)\n".into())),
                PathResult::None => Ok(RunOutput::negative("no path\n".into())),
            }
        }
    }
}
