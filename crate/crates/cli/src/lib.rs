//! The `apt` command-line front end. Vertex ids are 1-based on input and
//! output; exit codes are 0 for YES, 1 for NO and 2 for any input error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use apt_core::graph::{parse_digraph, parse_graph};
use apt_core::oracle::{
    check_strong_extendibility, exact_max_acyclic_digraph, exact_value, ExtendibilityConfig, DEFAULT_HOM_BUDGET,
};
use apt_core::pipeline::{apt_decide_with, decide_structured, Decision};
use apt_core::reduction::ReductionOutcome;
use apt_core::structured::SolveOptions;
use apt_core::{mas_above_half, pt_bound, reduce, Certificate, Error, Graph, PropertySpec, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "apt", version, about = "Spanning subgraphs above the guaranteed edge bound")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether the graph has a spanning subgraph in the property
    /// with at least pt(G) + k edges.
    Decide(DecideArgs),
    /// Run the reduction rules only and report S and the remaining k.
    Reduce(ReduceArgs),
    /// Exact optimum by brute force (small graphs only).
    Oracle(OracleArgs),
    /// Search for a counterexample to strong extendibility and print a JSON
    /// report.
    VerifyProperty(VerifyArgs),
}

#[derive(Debug, Args)]
struct DecideArgs {
    /// Graph file.
    input: PathBuf,
    /// cut | color:<q> | hom:<target file> | acyclic | mas-half
    #[arg(long)]
    property: String,
    /// Edges required above the bound, at least 1.
    #[arg(short = 'k')]
    k: i64,
    /// Print a JSON object instead of text.
    #[arg(long)]
    json: bool,
    /// Print every rule application.
    #[arg(long)]
    trace: bool,
    /// Never answer YES from a large tournament block alone.
    #[arg(long)]
    no_spencer: bool,
    /// How to obtain the deletion set.
    #[arg(long, value_enum, default_value_t = SolverChoice::Auto)]
    solver: SolverChoice,
    /// Deletion set for `--solver structured`: 1-based ids.
    #[arg(long)]
    s_file: Option<PathBuf>,
    /// Worker threads for the structured solver.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverChoice {
    /// Reduce, then solve.
    Auto,
    /// Skip the reduction; needs `--s-file`.
    Structured,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    /// Graph file.
    input: PathBuf,
    /// λ as p/q with 0 < λ < 1.
    #[arg(long)]
    lambda: String,
    /// Edges required above the bound, at least 1.
    #[arg(short = 'k')]
    k: i64,
    /// Print every rule application.
    #[arg(long)]
    trace: bool,
    /// Print a JSON object instead of text.
    #[arg(long)]
    json: bool,
    /// Write S (1-based ids) to this file.
    #[arg(long)]
    s_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    /// Graph file.
    input: PathBuf,
    /// cut | color:<q> | hom:<target file> | acyclic | mas-half
    #[arg(long)]
    property: String,
    /// Also decide against pt(G) + k (m/2 + k for mas-half).
    #[arg(short = 'k')]
    k: Option<i64>,
    /// Print a JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// cut | color:<q> | hom:<target file> | acyclic
    #[arg(long)]
    property: String,
    /// Defaults to the property's own λ.
    #[arg(long)]
    lambda: Option<String>,
    /// Largest graph order to enumerate.
    #[arg(long, default_value_t = 4)]
    nmax: usize,
    /// Random weight functions per cut, on top of unit weights.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Seed for the random weights.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A failure that maps to exit code 2.
#[derive(Debug)]
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

type CliResult<T> = Result<T, InputError>;

enum PropertyArg {
    Spec(PropertySpec),
    MasHalf,
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    parse_graph(&read_file(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse_property(s: &str) -> CliResult<PropertyArg> {
    Ok(match s {
        "cut" => PropertyArg::Spec(PropertySpec::cut()),
        "acyclic" => PropertyArg::Spec(PropertySpec::acyclic()),
        "mas-half" => PropertyArg::MasHalf,
        _ => {
            if let Some(q) = s.strip_prefix("color:") {
                let q: usize = q.parse().map_err(|_| InputError(format!("bad colour count in {s:?}")))?;
                PropertyArg::Spec(PropertySpec::coloring(q)?)
            } else if let Some(file) = s.strip_prefix("hom:") {
                PropertyArg::Spec(PropertySpec::hom(read_graph(Path::new(file))?)?)
            } else {
                return Err(InputError(format!(
                    "unknown property {s:?}; expected cut, color:<q>, hom:<file>, acyclic or mas-half"
                )));
            }
        }
    })
}

/// Whitespace-separated 1-based ids; `#` starts a comment.
pub fn parse_vertex_set(text: &str, n: usize) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            let id: usize = tok.parse().map_err(|_| format!("line {}: bad vertex id {tok:?}", i + 1))?;
            if id == 0 || id > n {
                return Err(format!("line {}: vertex id {id} out of range 1..={n}", i + 1));
            }
            out.push(id - 1);
        }
    }
    Ok(out)
}

pub fn format_vertex_set(s: &[usize]) -> String {
    let ids: Vec<String> = s.iter().map(|v| (v + 1).to_string()).collect();
    format!("{}\n", ids.join(" "))
}

/// JSON shape of a decision, with 1-based ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionJson {
    pub answer: String,
    pub k_star: Option<String>,
    pub s_size: usize,
    pub s: Vec<usize>,
    /// Keys "1" to "4".
    pub rule_counts: std::collections::BTreeMap<String, usize>,
    pub solver: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    /// Rule applications, present with `--trace`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    /// Kept edges (arcs when directed) as 1-based pairs.
    pub edges: Vec<(usize, usize)>,
    /// `map[v - 1]` is the 1-based target vertex of `v`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<usize>>,
    /// Linear order of the vertices, 1-based.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
}

impl DecisionJson {
    /// The exit code this answer maps to.
    pub fn exit_code(&self) -> i32 {
        if self.answer == "YES" {
            EXIT_YES
        } else {
            EXIT_NO
        }
    }
}

fn solver_name(d: &Decision) -> String {
    serde_json::to_value(d.diagnostics.solver).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

fn decision_json(d: &Decision, edge_ends: &dyn Fn(usize) -> (usize, usize)) -> DecisionJson {
    let counts = d.diagnostics.rule_counts();
    DecisionJson {
        answer: d.answer.to_string(),
        k_star: d.diagnostics.k_star.as_ref().map(|k| k.to_string()),
        s_size: d.diagnostics.s.len(),
        s: d.diagnostics.s.iter().map(|v| v + 1).collect(),
        rule_counts: (1..=4).map(|i| (i.to_string(), counts[i - 1])).collect(),
        solver: solver_name(d),
        value: d.diagnostics.value,
        threshold: d.diagnostics.threshold.as_ref().map(|t| t.to_string()),
        witness: d.witness.as_ref().map(|w| {
            let one_based = |xs: &[usize]| xs.iter().map(|x| x + 1).collect::<Vec<_>>();
            WitnessJson {
                edges: w.edges.iter().map(|&i| edge_ends(i)).map(|(u, v)| (u + 1, v + 1)).collect(),
                map: match &w.certificate {
                    Certificate::Hom(m) => Some(one_based(m)),
                    Certificate::Order(_) => None,
                },
                order: match &w.certificate {
                    Certificate::Order(o) => Some(one_based(o)),
                    Certificate::Hom(_) => None,
                },
            }
        }),
        trace: None,
    }
}

fn write_decision_text(out: &mut String, j: &DecisionJson) {
    let _ = writeln!(out, "answer: {}", j.answer);
    if let Some(k) = &j.k_star {
        let _ = writeln!(out, "k_star: {k}");
    }
    let s: Vec<String> = j.s.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(out, "s: [{}] (size {})", s.join(" "), j.s_size);
    let counts: Vec<String> = j.rule_counts.iter().map(|(r, c)| format!("{r}:{c}")).collect();
    let _ = writeln!(out, "rule_counts: {}", counts.join(" "));
    let _ = writeln!(out, "solver: {}", j.solver);
    if let Some(v) = j.value {
        let _ = writeln!(out, "value: {v}");
    }
    if let Some(t) = &j.threshold {
        let _ = writeln!(out, "threshold: {t}");
    }
    if let Some(w) = &j.witness {
        let edges: Vec<String> = w.edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
        let _ = writeln!(out, "witness: {} edges: {}", w.edges.len(), edges.join(" "));
        if let Some(map) = &w.map {
            let pairs: Vec<String> = map.iter().enumerate().map(|(v, c)| format!("{}->{c}", v + 1)).collect();
            let _ = writeln!(out, "map: {}", pairs.join(" "));
        }
        if let Some(order) = &w.order {
            let ids: Vec<String> = order.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "order: {}", ids.join(" "));
        }
    }
}

fn trace_text(d: &Decision) -> String {
    d.diagnostics.trace.iter().map(|a| a.trace_line(1) + "\n").collect()
}

fn cmd_decide(a: &DecideArgs, out: &mut String) -> CliResult<i32> {
    let opts = SolveOptions { spencer: !a.no_spencer, jobs: a.jobs.max(1), ..SolveOptions::default() };
    let decision = match parse_property(&a.property)? {
        PropertyArg::MasHalf => {
            if a.solver == SolverChoice::Structured {
                return Err(InputError("mas-half has no structured solver".into()));
            }
            let d =
                parse_digraph(&read_file(&a.input)?).map_err(|e| InputError(format!("{}: {e}", a.input.display())))?;
            let decision = mas_above_half(&d, a.k)?;
            let arcs = d.arcs().to_vec();
            (decision, Box::new(move |i: usize| arcs[i]) as Box<dyn Fn(usize) -> (usize, usize)>)
        }
        PropertyArg::Spec(spec) => {
            let g = read_graph(&a.input)?;
            let decision = match a.solver {
                SolverChoice::Auto => {
                    if a.s_file.is_some() {
                        return Err(InputError("--s-file needs --solver structured".into()));
                    }
                    apt_decide_with(&g, a.k, &spec, &opts)?
                }
                SolverChoice::Structured => {
                    let path =
                        a.s_file.as_ref().ok_or_else(|| InputError("--solver structured needs --s-file".into()))?;
                    let s = parse_vertex_set(&read_file(path)?, g.n())
                        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
                    decide_structured(&g, &s, a.k, &spec, &opts)?
                }
            };
            let ends: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
            (decision, Box::new(move |i: usize| ends[i]) as Box<dyn Fn(usize) -> (usize, usize)>)
        }
    };
    let (decision, ends) = decision;
    let mut j = decision_json(&decision, &*ends);
    if a.trace && a.json {
        j.trace = Some(decision.diagnostics.trace.iter().map(|t| t.trace_line(1)).collect());
    }
    if a.trace && !a.json {
        out.push_str(&trace_text(&decision));
    }
    if a.json {
        out.push_str(&serde_json::to_string(&j).expect("serializable"));
        out.push('\n');
    } else {
        write_decision_text(out, &j);
    }
    Ok(decision.answer.exit_code())
}

#[derive(Serialize)]
struct ReduceJson {
    result: &'static str,
    k_star: Option<String>,
    s: Vec<usize>,
    trace: Vec<String>,
}

fn cmd_reduce(a: &ReduceArgs, out: &mut String) -> CliResult<i32> {
    let lambda: Rational = a.lambda.parse()?;
    let g = read_graph(&a.input)?;
    let outcome = reduce(&g, a.k, &lambda)?;
    let (result, k_star, s) = match &outcome {
        ReductionOutcome::EarlyYes { .. } => ("early-yes", None, Vec::new()),
        ReductionOutcome::Decomposition { s, k_star, .. } => ("decomposition", Some(k_star.to_string()), s.clone()),
    };
    if let Some(path) = &a.s_out {
        std::fs::write(path, format_vertex_set(&s)).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    }
    let trace: Vec<String> = outcome.trace().iter().map(|t| t.trace_line(1)).collect();
    if a.json {
        let j = ReduceJson { result, k_star, s: s.iter().map(|v| v + 1).collect(), trace };
        out.push_str(&serde_json::to_string(&j).expect("serializable"));
        out.push('\n');
        return Ok(0);
    }
    if a.trace {
        for line in &trace {
            out.push_str(line);
            out.push('\n');
        }
    }
    let _ = writeln!(out, "result: {result}");
    if let Some(k) = k_star {
        let _ = writeln!(out, "k_star: {k}");
    }
    let _ = write!(out, "s: {}", format_vertex_set(&s));
    Ok(0)
}

#[derive(Serialize)]
struct OracleJson {
    value: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    answer: Option<String>,
}

fn cmd_oracle(a: &OracleArgs, out: &mut String) -> CliResult<i32> {
    let (value, threshold) = match parse_property(&a.property)? {
        PropertyArg::MasHalf => {
            let d =
                parse_digraph(&read_file(&a.input)?).map_err(|e| InputError(format!("{}: {e}", a.input.display())))?;
            let value = exact_max_acyclic_digraph(&d)?.0;
            let threshold = a.k.map(|k| Rational::new(d.arcs().len() as i64, 2) + Rational::from_integer(k));
            (value, threshold)
        }
        PropertyArg::Spec(spec) => {
            let g = read_graph(&a.input)?;
            let value = exact_value(&g, &spec).map_err(|e| match e {
                Error::BudgetExceeded(m) => InputError(format!("{m} (oracle budget {DEFAULT_HOM_BUDGET})")),
                other => other.into(),
            })?;
            let threshold = match a.k {
                Some(k) => Some(pt_bound(&g, spec.lambda())? + Rational::from_integer(k)),
                None => None,
            };
            (value.0, threshold)
        }
    };
    let answer = threshold.as_ref().map(|t| Rational::from(value) >= *t);
    let code = match answer {
        Some(false) => EXIT_NO,
        _ => EXIT_YES,
    };
    let answer_text = answer.map(|y| if y { "YES" } else { "NO" }.to_string());
    if a.json {
        let j = OracleJson { value, threshold: threshold.map(|t| t.to_string()), answer: answer_text };
        out.push_str(&serde_json::to_string(&j).expect("serializable"));
        out.push('\n');
    } else {
        let _ = writeln!(out, "value: {value}");
        if let (Some(t), Some(ans)) = (threshold, answer_text) {
            let _ = writeln!(out, "threshold: {t}");
            let _ = writeln!(out, "answer: {ans}");
        }
    }
    Ok(code)
}

fn cmd_verify(a: &VerifyArgs, out: &mut String) -> CliResult<i32> {
    let PropertyArg::Spec(spec) = parse_property(&a.property)? else {
        return Err(InputError("mas-half is not a graph property".into()));
    };
    let lambda = match &a.lambda {
        Some(l) => l.parse()?,
        None => spec.lambda().clone(),
    };
    let cfg = ExtendibilityConfig::new(lambda, a.nmax, a.trials, a.seed);
    let mut report = check_strong_extendibility(&spec, &cfg)?;
    if let Some(cx) = report.counterexample.as_mut() {
        let shift = |(u, v): (usize, usize)| (u + 1, v + 1);
        cx.edges = cx.edges.iter().copied().map(shift).collect();
        cx.boundary = cx.boundary.iter().copied().map(shift).collect();
        cx.s = cx.s.iter().map(|v| v + 1).collect();
    }
    out.push_str(&serde_json::to_string(&report).expect("serializable"));
    out.push('\n');
    Ok(if report.counterexample.is_some() { EXIT_NO } else { EXIT_YES })
}

/// Runs the CLI on `args` (including the program name), writing normal
/// output to `stdout` and diagnostics to `stderr`; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut out = String::new();
    let result = match &cli.command {
        Command::Decide(a) => cmd_decide(a, &mut out),
        Command::Reduce(a) => cmd_reduce(a, &mut out),
        Command::Oracle(a) => cmd_oracle(a, &mut out),
        Command::VerifyProperty(a) => cmd_verify(a, &mut out),
    };
    match result {
        Ok(code) => {
            let _ = stdout.write_all(out.as_bytes());
            code
        }
        Err(InputError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
    }
}
