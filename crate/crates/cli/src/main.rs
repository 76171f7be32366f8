//! `permcycles`: generate, verify, analyze and search universal words and
//! cycles for permutations.
//!
//! Exit codes: 0 success, 1 a verification failed or a theorem check found
//! a witness, 2 bad parameters or input, 3 nothing found within budget.

mod manifest;

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permcycles_core::shortener::DEFAULT_CIRCUIT_BUDGET;
use permcycles_core::{
    build_clustered_graph, confirm_nonexistence, construct_restricted, double_edge_cycles,
    find_twins, generate_ucycle, generate_uword, search_parallel, verify, CoverageReport, Error,
    Mode, NonexistenceReport, PWord, SearchOutcome, SearchResult, SearchSpec, TheoremId,
    TheoremOptions, Verdict,
};
use serde_json::{json, Value};

use manifest::RunManifest;

#[derive(Parser, Debug)]
#[command(name = "permcycles", version, about = "Universal words and cycles for permutations")]
struct Cli {
    /// Write a JSON run manifest (command, parameters, version, output digest).
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a u-word, u-cycle or restricted-diamond word and verify it.
    Generate(GenerateArgs),
    /// Check a word in the p-word format for exact cover.
    Verify(VerifyArgs),
    /// Clusters, twins and double-edge cycles of the overlap graph.
    Analyze(AnalyzeArgs),
    /// Run a search spec or confirm a non-existence theorem.
    Search(SearchArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Uword,
    Ucycle,
    Restricted,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Inc,
    Dec,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    /// Number of double-edge cycles to collapse.
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Inc)]
    mode: ModeArg,
    /// Eulerian circuits to try (ucycle only).
    #[arg(long, default_value_t = DEFAULT_CIRCUIT_BUDGET)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Read the word from this file instead of standard input.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long)]
    n: usize,
    /// Also write the clustered graph in DOT format.
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Search spec file (key=value lines).
    #[arg(long, conflicts_with = "theorem", required_unless_present = "theorem")]
    spec: Option<PathBuf>,
    #[arg(long, requires = "n")]
    theorem: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Override the node budget.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Allow theorem instances far beyond desk scale.
    #[arg(long)]
    heavy: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// What a command produced: primary output and exit code.
struct Run {
    stdout: String,
    code: u8,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotFoundWithinBudget { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn bad(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Analyze(a) => analyze(a),
        Command::Search(a) => search(a),
    };
    match result {
        Ok(run) => {
            print!("{}", run.stdout);
            if let Some(path) = &cli.manifest {
                let args: Vec<String> = std::env::args().skip(1).collect();
                let m = RunManifest::new(&cli.command_name(), &args, &run.stdout);
                if let Err(e) = m.write(path) {
                    eprintln!("error: cannot write manifest {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(run.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

impl Cli {
    fn command_name(&self) -> String {
        match self.command {
            Command::Generate(_) => "generate",
            Command::Verify(_) => "verify",
            Command::Analyze(_) => "analyze",
            Command::Search(_) => "search",
        }
        .to_string()
    }
}

fn json_line(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json value");
    s.push('\n');
    s
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::ExactCover => "exact-cover",
        Verdict::Duplicates(_) => "duplicates",
        Verdict::Misses(_) => "misses",
    }
}

/// The word in the p-word format without its trailing newline.
fn grammar(u: &PWord) -> String {
    u.to_string().trim_end().to_string()
}

fn generate(a: &GenerateArgs) -> Result<Run, Failure> {
    let word = match a.kind {
        Kind::Uword => PWord::from_letters(&generate_uword(a.n, a.k)?, a.n, false)?,
        Kind::Ucycle => PWord::from_letters(&generate_ucycle(a.n, a.k, a.budget)?, a.n, true)?,
        Kind::Restricted => {
            let mode = match a.mode {
                ModeArg::Inc => Mode::Increasing,
                ModeArg::Dec => Mode::Decreasing,
            };
            construct_restricted(a.n, mode)?
        }
    };
    let report = verify(&word);
    let code = if report.is_exact_cover() { 0 } else { 1 };
    let stdout = match a.format {
        Format::Text => format!(
            "{}\n# verdict: {} (length {}, {} windows)\n",
            grammar(&word),
            verdict_name(&report.verdict),
            word.len(),
            word.window_count()
        ),
        Format::Json => json_line(json!({
            "schema": 1,
            "command": "generate",
            "kind": format!("{:?}", a.kind).to_lowercase(),
            "n": a.n,
            "k": a.k,
            "word": grammar(&word),
            "length": word.len(),
            "verdict": verdict_name(&report.verdict),
            "report": report,
        })),
    };
    Ok(Run { stdout, code })
}

fn verify_cmd(a: &VerifyArgs) -> Result<Run, Failure> {
    let text = match &a.file {
        Some(path) => fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| bad(format!("stdin: {e}")))?;
            s
        }
    };
    let word: PWord = text.parse()?;
    let report = verify(&word);
    let code = if report.is_exact_cover() { 0 } else { 1 };
    let stdout = match a.format {
        Format::Text => report_text(&report),
        Format::Json => json_line(json!({
            "schema": 1,
            "command": "verify",
            "word": grammar(&word),
            "verdict": verdict_name(&report.verdict),
            "report": report,
        })),
    };
    Ok(Run { stdout, code })
}

fn report_text(r: &CoverageReport) -> String {
    let mut out = format!(
        "verdict: {}\nn={} cyclic={} length={} windows={}\n",
        verdict_name(&r.verdict),
        r.n,
        u8::from(r.cyclic),
        r.length,
        r.window_count
    );
    let missing = r.missing();
    if !missing.is_empty() {
        let list: Vec<String> = missing.iter().map(|p| p.to_string()).collect();
        out += &format!("missing ({}): {}\n", list.len(), list.join(" "));
    }
    for d in r.duplicated() {
        let at: Vec<String> = d.windows.iter().map(|w| w.to_string()).collect();
        out += &format!("duplicate: {} at windows {}\n", d.perm, at.join(","));
    }
    match r.min_equal_gap {
        Some(g) => out += &format!("min equal-letter gap: {g}\n"),
        None => out += "min equal-letter gap: none\n",
    }
    for w in &r.warnings {
        out += &format!("warning: {w}\n");
    }
    out
}

fn analyze(a: &AnalyzeArgs) -> Result<Run, Failure> {
    let g = build_clustered_graph(a.n)?;
    let cycles = double_edge_cycles(&g)?;
    let mut clusters = Vec::new();
    for c in g.clusters() {
        let t = find_twins(c)?;
        clusters.push((c, t));
    }
    if let Some(path) = &a.dot {
        fs::write(path, g.to_dot()).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    }
    let stdout = match a.format {
        Format::Text => {
            let mut out = format!(
                "n={}\nclusters: {}\nedges: {}\nbalanced: {}\nstrongly connected: {}\n",
                a.n,
                g.cluster_count(),
                g.edges().len(),
                g.is_balanced(),
                g.is_strongly_connected()
            );
            for (c, t) in &clusters {
                let members: Vec<String> = c.members.iter().map(|m| m.to_string()).collect();
                out += &format!(
                    "cluster {}: {} | twins {} {}\n",
                    c.signature,
                    members.join(" "),
                    t.plus,
                    t.minus
                );
            }
            out += &format!("double-edge cycles: {}\n", cycles.len());
            for cy in &cycles {
                let sigs: Vec<String> = cy.signatures.iter().map(|s| s.to_string()).collect();
                out += &format!("cycle of length {}: {}\n", cy.len(), sigs.join(" -> "));
            }
            out
        }
        Format::Json => json_line(json!({
            "schema": 1,
            "command": "analyze",
            "n": a.n,
            "clusters": clusters.iter().map(|(c, t)| json!({
                "signature": c.signature.to_string(),
                "members": c.members.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "twins": [t.plus.to_string(), t.minus.to_string()],
            })).collect::<Vec<_>>(),
            "edges": g.edges().len(),
            "balanced": g.is_balanced(),
            "strongly_connected": g.is_strongly_connected(),
            "cycles": cycles.iter().map(|cy| cy.signatures.iter().map(|s| s.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
    };
    Ok(Run { stdout, code: 0 })
}

fn result_name(r: &SearchResult) -> &'static str {
    match r {
        SearchResult::Witness(_) => "witness",
        SearchResult::ExhaustedNoWitness => "exhausted-no-witness",
        SearchResult::BudgetExceeded => "budget-exceeded",
    }
}

fn outcome_json(o: &SearchOutcome) -> Value {
    json!({
        "verdict": result_name(&o.result),
        "witness": o.witness().map(grammar),
        "stats": o.stats,
    })
}

fn search(a: &SearchArgs) -> Result<Run, Failure> {
    if a.jobs == 0 {
        return Err(bad("--jobs must be at least 1"));
    }
    if let Some(path) = &a.spec {
        let text = fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        let mut spec: SearchSpec = text
            .parse()
            .map_err(|e: Error| bad(format!("{}: {e}", path.display())))?;
        if let Some(b) = a.budget {
            spec.budget = b;
        }
        let outcome = search_parallel(&spec, a.jobs)?;
        let code = match outcome.result {
            SearchResult::BudgetExceeded => 3,
            _ => 0,
        };
        let stdout = match a.format {
            Format::Json => json_line(json!({
                "schema": 1,
                "command": "search",
                "spec": spec,
                "outcome": outcome_json(&outcome),
            })),
            Format::Text => {
                let mut out = format!("{spec}verdict: {}\n", result_name(&outcome.result));
                if let Some(w) = outcome.witness() {
                    out += &format!("{}\n", grammar(w));
                }
                out += &format!("nodes: {}\n", outcome.stats.nodes);
                out
            }
        };
        return Ok(Run { stdout, code });
    }
    let id: TheoremId = a.theorem.as_deref().unwrap_or_default().parse()?;
    let n = a.n.ok_or_else(|| bad("--n is required with --theorem"))?;
    let mut opts = TheoremOptions {
        jobs: a.jobs,
        heavy: a.heavy,
        ..TheoremOptions::default()
    };
    if let Some(b) = a.budget {
        opts.budget = b;
    }
    let report = confirm_nonexistence(id, n, &opts)?;
    let code = if report.witness().is_some() {
        1
    } else if report.incomplete() {
        3
    } else {
        0
    };
    let stdout = match a.format {
        Format::Json => json_line(theorem_json(&report)),
        Format::Text => theorem_text(&report),
    };
    Ok(Run { stdout, code })
}

fn theorem_verdict(r: &NonexistenceReport) -> &'static str {
    if r.witness().is_some() {
        "witness"
    } else if r.confirmed() {
        "exhausted-no-witness"
    } else {
        "budget-exceeded"
    }
}

fn theorem_json(r: &NonexistenceReport) -> Value {
    json!({
        "schema": 1,
        "command": "search",
        "theorem": r.theorem,
        "n": r.n,
        "verdict": theorem_verdict(r),
        "cases": r.cases.iter().map(|c| json!({
            "label": c.label,
            "spec": c.spec,
            "structural": c.structural,
            "outcome": c.outcome.as_ref().map(outcome_json),
        })).collect::<Vec<_>>(),
        "stats": r.stats(),
    })
}

fn theorem_text(r: &NonexistenceReport) -> String {
    let mut out = format!("theorem {} n={}\nverdict: {}\n", r.theorem, r.n, theorem_verdict(r));
    for c in &r.cases {
        match (&c.structural, &c.outcome) {
            (Some(why), _) => out += &format!("  {}: structural: {why}\n", c.label),
            (None, Some(o)) => {
                out += &format!("  {}: {} ({} nodes)\n", c.label, result_name(&o.result), o.stats.nodes);
                if let Some(w) = o.witness() {
                    out += &format!("    {}\n", grammar(w).replace('\n', "\n    "));
                }
            }
            (None, None) => {}
        }
    }
    out
}
