use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jtower::config::{parse_config, InclusionConfig};
use jtower::report::Report;
use jtower::tl::{markov_trace, parse_expression, verify_word_identities, IdentityReport};
use jtower::tower::{
    bimodule_correspondence, cross_route_dims, jones_tower, principal_graph, standard_invariant, verify_corollary_2_3,
    verify_theorem_2_2, verify_tower_relations, Tower, DEFAULT_CAP,
};
use jtower::Error;

/// Correspondence checks at level `k` need `L²(M_{2k})`; above this dimension they are skipped.
const CORRESPONDENCE_LIMIT: usize = 1024;

#[derive(Parser)]
#[command(name = "jtower", version, about = "Jones towers of finite-dimensional inclusions and their verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Tower depth (overrides the config file).
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Residual tolerance (overrides the config file).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Largest allowed dimension of the top algebra of the tower.
    #[arg(long, global = true, env = "JTOWER_CAP")]
    cap: Option<usize>,
    /// Seed for sampled checks (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Args)]
struct Input {
    /// Inclusion spec file (TOML).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in inclusion: scalars-in-m2, scalars-in-c2, diag-in-m2, m2-in-m4, trivial.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the tower and check the Jones relations.
    Tower(Input),
    /// Check the isomorphism `J_n` between tensor powers of `L²(M)` and the tower.
    Theorem22 {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        n: usize,
    },
    /// Standard invariant, principal graph and bimodule correspondence.
    Invariant(Input),
    /// Symbolic Temperley–Lieb calculator.
    Tl {
        #[command(subcommand)]
        command: TlCommand,
    },
}

#[derive(Subcommand)]
enum TlCommand {
    /// Reduced form of an expression such as "e1 e0 e1" or "b * e0 + E3,1".
    NormalForm { expr: String },
    /// Markov trace of an expression.
    Trace {
        expr: String,
        /// Number of generators `e_0 … e_{level-1}` available (default: just enough).
        #[arg(long)]
        level: Option<usize>,
    },
    /// Exact check of the word identities up to `n`.
    Identities {
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

enum Failure {
    Usage(String),
    Resource(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Resource(e.to_string()),
            Error::Numerical(_) | Error::ModelViolation(_) | Error::NotAnAlgebra | Error::NotEquivariant(_) => {
                Failure::Check(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Rendered output and whether every check passed.
struct Output {
    json: Value,
    text: String,
    dot: Option<String>,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => match emit(&cli, &out) {
            Ok(()) if out.pass => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(1),
            Err(f) => fail(f),
        },
        Err(f) => fail(f),
    }
}

fn fail(f: Failure) -> ExitCode {
    let (code, msg) = match f {
        Failure::Usage(m) => (2, m),
        Failure::Resource(m) => (3, m),
        Failure::Check(m) => (1, m),
    };
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn emit(cli: &Cli, out: &Output) -> Result<(), Failure> {
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
        Format::Text => out.text.clone(),
        Format::Dot => out
            .dot
            .clone()
            .ok_or_else(|| Failure::Usage("--format dot is only available for invariant".into()))?,
    };
    match &cli.out {
        Some(path) => fs::write(path, body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Tower(input) => cmd_tower(&resolve(cli, input)?),
        Command::Theorem22 { input, n } => cmd_theorem22(&resolve(cli, input)?, *n),
        Command::Invariant(input) => cmd_invariant(&resolve(cli, input)?),
        Command::Tl { command } => cmd_tl(command),
    }
}

/// Config with command-line overrides applied and the cap resolved.
struct Resolved {
    config: InclusionConfig,
    cap: usize,
}

fn resolve(cli: &Cli, input: &Input) -> Result<Resolved, Failure> {
    let mut config = match (&input.config, &input.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            parse_config(&text).map_err(|e| match e {
                Error::Config { line, col, msg } => Failure::Usage(format!("{}:{line}:{col}: {msg}", path.display())),
                other => other.into(),
            })?
        }
        (None, Some(name)) => InclusionConfig::from_preset(name).map_err(|e| match e {
            Error::Config { msg, .. } => Failure::Usage(msg),
            other => other.into(),
        })?,
        (None, None) => return Err(Failure::Usage("give --config FILE or --preset NAME".into())),
    };
    if let Some(d) = cli.depth {
        config.depth = d;
    }
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::Usage("--tol must be positive".into()));
        }
        config.tol = t;
    }
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    let cap = cli.cap.or(config.cap).unwrap_or(DEFAULT_CAP);
    Ok(Resolved { config, cap })
}

fn header(command: &str, r: &Resolved, t: &Tower) -> Value {
    let incl = t.base_inclusion();
    json!({
        "schema": 1,
        "command": command,
        "environment": {
            "version": env!("CARGO_PKG_VERSION"),
            "seed": r.config.seed,
            "cap": r.cap,
            "tol": r.config.tol,
            "depth": r.config.depth,
        },
        "inclusion": {
            "name": r.config.name(),
            "n": incl.n.algebra.dims(),
            "m": incl.m.algebra.dims(),
            "lambda": incl.lambda(),
            "beta": incl.beta(),
            "trace_n": incl.n.trace.weights(),
            "trace_m": incl.m.trace.weights(),
        },
        "tower": {
            "dims": (-1..=t.depth() as isize).map(|k| t.algebra(k).algebra.dim()).collect::<Vec<_>>(),
        },
    })
}

fn text_header(command: &str, r: &Resolved, t: &Tower) -> String {
    let dims: Vec<String> = (-1..=t.depth() as isize).map(|k| t.algebra(k).algebra.dim().to_string()).collect();
    format!(
        "{command}: {} (beta = {}), depth {}, tol {:e}, seed {}\ndim M_k from N: {}\n",
        r.config.name(),
        fmt_f(t.beta()),
        t.depth(),
        r.config.tol,
        r.config.seed,
        dims.join(" ")
    )
}

fn fmt_f(x: f64) -> String {
    let r = x.round();
    if (x - r).abs() < 1e-12 {
        format!("{r}")
    } else {
        format!("{x:.12}")
    }
}

fn report_text(r: &Report) -> String {
    let mut s = String::new();
    for c in &r.checks {
        let params = serde_json::to_string(&c.parameters).expect("serializable");
        let status = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{status}  {:<20} {params}  residual {:.3e}  tol {:.1e}", c.check, c.max_residual, c.tolerance);
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    let _ = writeln!(s, "{}", if r.all_pass() { "all checks passed" } else { "some checks failed" });
    s
}

fn build(r: &Resolved) -> Result<Tower, Failure> {
    let incl = r.config.inclusion()?;
    Ok(jones_tower(&incl, r.config.depth, r.cap)?)
}

fn finish(mut json: Value, text: String, dot: Option<String>, report: Report) -> Output {
    let pass = report.all_pass();
    json["pass"] = json!(pass);
    json["report"] = json!(report);
    Output { json, text: text + &report_text(&report), dot, pass }
}

fn cmd_tower(r: &Resolved) -> Result<Output, Failure> {
    let t = build(r)?;
    let report = verify_tower_relations(&t, r.config.tol, r.config.seed);
    let mut json = header("tower", r, &t);
    json["tower"]["beta"] = json!(t.beta());
    Ok(finish(json, text_header("tower", r, &t), None, report))
}

fn cmd_theorem22(r: &Resolved, n: usize) -> Result<Output, Failure> {
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    if r.config.depth < 2 * n - 2 {
        return Err(Error::DepthInsufficient { required: 2 * n - 2, have: r.config.depth }.into());
    }
    let t = build(r)?;
    let (witness, mut report) = verify_theorem_2_2(&t, n, r.config.tol)?;
    report.extend(verify_corollary_2_3(&t, n, r.config.tol)?);
    let table: Vec<Value> =
        witness.generators.iter().map(|g| json!({"generator": g.name, "residual": g.residual})).collect();
    let mut json = header("theorem22", r, &t);
    json["n"] = json!(n);
    json["tensor_dim"] = json!(witness.space.dim());
    json["generators"] = json!(table);
    let mut text = text_header("theorem22", r, &t);
    let _ = writeln!(text, "n = {n}, dim L2(M)^(x{n}) = {}", witness.space.dim());
    let _ = writeln!(text, "{:<12} residual", "generator");
    for g in &witness.generators {
        let _ = writeln!(text, "{:<12} {:.3e}", g.name, g.residual);
    }
    Ok(finish(json, text, None, report))
}

fn cmd_invariant(r: &Resolved) -> Result<Output, Failure> {
    let t = build(r)?;
    t.require_depth(2)?;
    let inv = standard_invariant(&t)?;
    let graph = principal_graph(&t)?;
    let mut report = inv.consistency();
    report.extend(cross_route_dims(&t)?);
    report.exact("principal-graph", jtower::params! {"anomalies" => graph.anomalies.len()}, graph.anomalies.is_empty());
    for k in 1.. {
        if 2 * k > t.depth() {
            break;
        }
        if t.gns(2 * k as isize).dim() > CORRESPONDENCE_LIMIT {
            report.note(format!("correspondence at k = {k} skipped: dim L2(M_{}) above {CORRESPONDENCE_LIMIT}", 2 * k));
            continue;
        }
        report.extend(bimodule_correspondence(&t, k)?);
    }
    if graph.truncated {
        report.note(format!("principal graph may continue past depth {}", t.depth()));
    }
    let mut json = header("invariant", r, &t);
    json["standard_invariant"] = json!(inv);
    json["principal_graph"] = json!(graph);
    let mut text = text_header("invariant", r, &t);
    let row = |name: &str, levels: &[jtower::tower::LevelData]| {
        let cells: Vec<String> = levels.iter().map(|l| format!("{}{:?}", l.dim, l.summands)).collect();
        format!("{name:<8} {}\n", cells.join("  "))
    };
    text += &row("N'∩M_k", &inv.n_row);
    text += &row("M'∩M_k", &inv.m_row);
    let _ = writeln!(
        text,
        "principal graph: {} vertices ({} even), {} edges{}",
        graph.vertices.len(),
        graph.even_count(),
        graph.edges.len(),
        if graph.truncated { ", truncated" } else { "" }
    );
    Ok(finish(json, text, Some(graph.to_dot()), report))
}

fn cmd_tl(command: &TlCommand) -> Result<Output, Failure> {
    let parse = |e: &str| parse_expression(e).map_err(|err| Failure::Usage(format!("{err} in {e:?}")));
    match command {
        TlCommand::NormalForm { expr } => {
            let x = parse(expr)?;
            let result = x.to_string();
            let json = json!({"schema": 1, "command": "tl normal-form", "input": expr, "result": result});
            Ok(Output { json, text: result + "\n", dot: None, pass: true })
        }
        TlCommand::Trace { expr, level } => {
            let x = parse(expr)?;
            let level = level.unwrap_or_else(|| x.max_generator().map_or(0, |g| g as usize + 1));
            let tr = markov_trace(&x, level)?;
            let result = tr.to_string();
            let json = json!({"schema": 1, "command": "tl trace", "input": expr, "level": level, "result": result});
            Ok(Output { json, text: result + "\n", dot: None, pass: true })
        }
        TlCommand::Identities { n } => {
            let report = verify_word_identities(*n);
            Ok(identities_output(*n, &report))
        }
    }
}

fn identities_output(n: usize, report: &IdentityReport) -> Output {
    let mut text = String::new();
    for c in &report.checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(text, "{status}  {:<28} {}", c.identity, c.parameters);
        if !c.pass {
            let _ = writeln!(text, "      lhs = {}\n      rhs = {}", c.lhs, c.rhs);
        }
    }
    let pass = report.all_pass();
    let _ = writeln!(text, "{} identities checked, {}", report.checks.len(), if pass { "all exact" } else { "some failed" });
    let json = json!({"schema": 1, "command": "tl identities", "n": n, "pass": pass, "checks": report.checks});
    Output { json, text, dot: None, pass }
}
