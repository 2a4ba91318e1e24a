use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cliquenorm::bounds::{self, BoundReport};
use cliquenorm::graph::{sample_gnp, GnpParams, Graph};
use cliquenorm::moments::{self, EmpiricalConfig, StatParams};
use cliquenorm::montecarlo::{self, MCConfig, Standardization};
use cliquenorm::verify::{self, Gate};
use cliquenorm::{morse, StatisticKind, VERSION};

#[derive(Parser, Debug)]
#[command(
    name = "cliquenorm",
    version,
    about = "Counting statistics on random clique complexes"
)]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// Exact means and covariances of a statistic vector.
    Moments(MomentsArgs),
    /// Evaluate a normal-approximation bound.
    Bounds(BoundsArgs),
    /// Simulate a statistic vector and compare it with its normal limit.
    Simulate(SimulateArgs),
    /// Run a verification suite; exit 1 on any failing gate.
    Verify(VerifyArgs),
    /// Print the lexicographical matching and critical simplices of a graph.
    MorseDemo(MorseDemoArgs),
}

#[derive(Args, Debug, Serialize, Clone)]
struct StatArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: StatisticKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    d: usize,
    /// Link base size; the base is {1, ..., t}.
    #[arg(long)]
    t_size: Option<usize>,
}

impl StatArgs {
    fn params(&self) -> StatParams {
        StatParams {
            n: self.n,
            p: self.p,
            d: self.d,
            t_size: self.t_size,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct Output {
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct MomentsArgs {
    #[command(flatten)]
    stat: StatArgs,
    /// Also report the truncation tail bound at this threshold (critical only).
    #[arg(long = "K")]
    threshold: Option<usize>,
    /// Replicates for critical cross-covariances beyond the enumeration cap.
    #[arg(long, default_value_t = 20_000)]
    replicates: usize,
    #[arg(long, env = "CLIQUENORM_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Theorem {
    Critical,
    Link,
    Clique,
    Convex,
    Ustat,
    UstatNoX,
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    theorem: Theorem,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    t_size: Option<usize>,
    /// Smooth constant fed to the convex transfer.
    #[arg(long)]
    smooth_b: Option<f64>,
    /// Kernel orders k_i, comma separated.
    #[arg(long = "k", value_delimiter = ',')]
    k_vec: Vec<usize>,
    /// Variance constants alpha_i, comma separated.
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize, PartialEq)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum StandardizationArg {
    Analytic,
    Empirical,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    #[command(flatten)]
    stat: StatArgs,
    #[arg(long, default_value_t = 10_000)]
    replicates: usize,
    #[arg(long, env = "CLIQUENORM_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = StandardizationArg::Analytic)]
    standardization: StandardizationArg,
    /// `json` writes the run report, `csv` the sample table.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the sample table as CSV to this path.
    #[arg(long)]
    samples: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Suite {
    Oracle,
    MorseEquivalence,
    MorseExhaustive,
    /// The five-vertex worked example.
    #[value(name = "figure2")]
    #[serde(rename = "figure2")]
    FiveVertex,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 5)]
    n_max: usize,
    #[arg(long, default_value_t = 1000)]
    graphs: usize,
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[arg(long, env = "CLIQUENORM_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct MorseDemoArgs {
    /// Graph file: vertex count on the first line, then one `i j` edge per line.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Sample G(n, p) instead of reading a file.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, env = "CLIQUENORM_SEED", default_value_t = 0)]
    seed: u64,
    /// Largest simplex size whose pairs and criticals are listed.
    #[arg(long, default_value_t = 3)]
    k_cap: usize,
    #[command(flatten)]
    output: Output,
}

fn parse_kind(s: &str) -> Result<StatisticKind, String> {
    s.parse().map_err(|e: cliquenorm::Error| e.to_string())
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Verification,
}

impl From<cliquenorm::Error> for Failure {
    fn from(e: cliquenorm::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    version: &'a str,
    run_spec: &'a Command,
    result: T,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json<T: Serialize>(
    command: &Command,
    out: &Option<PathBuf>,
    result: T,
) -> Result<(), Failure> {
    let env = Envelope {
        version: VERSION,
        run_spec: command,
        result,
    };
    let mut text = serde_json::to_string_pretty(&env).map_err(|e| Failure::Usage(e.to_string()))?;
    text.push('\n');
    emit(out, &text)
}

fn run(command: &Command) -> Result<(), Failure> {
    match command {
        Command::Moments(a) => moments_cmd(command, a),
        Command::Bounds(a) => bounds_cmd(command, a),
        Command::Simulate(a) => simulate_cmd(command, a),
        Command::Verify(a) => verify_cmd(command, a),
        Command::MorseDemo(a) => morse_demo_cmd(a),
    }
}

#[derive(Serialize)]
struct MomentsResult {
    #[serde(flatten)]
    report: moments::MomentReport,
    /// One truncation tail bound per critical dimension `1..=d`.
    #[serde(skip_serializing_if = "Option::is_none")]
    tail_bounds: Option<Vec<f64>>,
}

fn moments_cmd(command: &Command, a: &MomentsArgs) -> Result<(), Failure> {
    let params = a.stat.params();
    params.validate(a.stat.kind)?;
    let report = moments::statistic_cov_matrix_with(
        a.stat.kind,
        &params,
        EmpiricalConfig {
            replicates: a.replicates,
            seed: a.seed,
        },
    )?;
    let tail_bounds = match a.threshold {
        Some(t) if a.stat.kind == StatisticKind::Critical => Some(
            (1..=params.d)
                .map(|k| moments::crit_tail_bound(params.n, k, params.p, t))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        Some(_) => return Err(Failure::Usage("--K applies to --kind critical only".into())),
        None => None,
    };
    emit_json(
        command,
        &a.output.out,
        MomentsResult {
            report,
            tail_bounds,
        },
    )
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("missing --{flag}")))
}

fn bounds_cmd(command: &Command, a: &BoundsArgs) -> Result<(), Failure> {
    let reports: Vec<BoundReport> = match a.theorem {
        Theorem::Critical => vec![bounds::crit_bound(
            need(a.n, "n")?,
            need(a.d, "d")?,
            need(a.p, "p")?,
        )?],
        Theorem::Link => {
            let b = bounds::link_bound(
                need(a.n, "n")?,
                need(a.t_size, "t-size")?,
                need(a.d, "d")?,
                need(a.p, "p")?,
            )?;
            vec![b.smooth, b.convex]
        }
        Theorem::Clique => {
            let b = bounds::clique_bound(need(a.n, "n")?, need(a.d, "d")?, need(a.p, "p")?)?;
            vec![b.smooth, b.convex]
        }
        Theorem::Convex => {
            let smooth = need(a.smooth_b, "smooth-b")?;
            if smooth.is_nan() || smooth < 0.0 {
                return Err(Failure::Usage("--smooth-b must be nonnegative".into()));
            }
            let d = need(a.d, "d")?;
            let value = bounds::convex_bound(d, smooth);
            vec![BoundReport {
                name: "convex".into(),
                value,
                rate_exponent: None,
                vacuous: value >= bounds::VACUOUS_THRESHOLD,
                params: [
                    ("d".to_string(), d as f64),
                    ("smooth_value".to_string(), smooth),
                ]
                .into_iter()
                .collect(),
                smoothness_class: bounds::SmoothnessClass::Convex,
            }]
        }
        Theorem::Ustat => vec![bounds::ustat_bound(
            &a.k_vec,
            &a.alpha,
            need(a.beta, "beta")?,
        )?],
        Theorem::UstatNoX => vec![bounds::ustat_no_x_bound(
            &a.k_vec,
            &a.alpha,
            need(a.beta, "beta")?,
        )?],
    };
    emit_json(command, &a.output.out, reports)
}

fn write_csv(path: Option<&Path>, header: &[String], body: &[Vec<f64>]) -> Result<(), Failure> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let fail = |e: csv::Error| Failure::Usage(e.to_string());
        w.write_record(header).map_err(fail)?;
        for row in body {
            w.write_record(row.iter().map(|x| x.to_string()))
                .map_err(fail)?;
        }
        w.flush()?;
    }
    let text = String::from_utf8(buf).expect("csv output is UTF-8");
    emit(&path.map(Path::to_path_buf), &text)
}

fn simulate_cmd(command: &Command, a: &SimulateArgs) -> Result<(), Failure> {
    let cfg = MCConfig {
        kind: a.stat.kind,
        params: a.stat.params(),
        replicates: a.replicates,
        master_seed: a.seed,
        standardization: match a.standardization {
            StandardizationArg::Analytic => Standardization::Analytic,
            StandardizationArg::Empirical => Standardization::Empirical,
        },
    };
    cfg.validate()?;
    if a.format == Format::Csv || a.samples.is_some() {
        let samples = montecarlo::simulate_vectors(&cfg)?;
        let (header, body) = montecarlo::sample_table(cfg.kind, &samples);
        if let Some(path) = &a.samples {
            write_csv(Some(path), &header, &body)?;
        }
        if a.format == Format::Csv {
            return write_csv(a.output.out.as_deref(), &header, &body);
        }
    }
    let report = montecarlo::run_pipeline(&cfg)?;
    emit_json(command, &a.output.out, report)
}

#[derive(Serialize)]
struct VerifyResult {
    passed: bool,
    gates: Vec<Gate>,
}

fn verify_cmd(command: &Command, a: &VerifyArgs) -> Result<(), Failure> {
    let gates = match a.suite {
        Suite::Oracle => verify::oracle_suite(a.n_max)?,
        Suite::MorseEquivalence => verify::morse_equivalence_suite(a.graphs, a.n, a.seed)?,
        Suite::MorseExhaustive => verify::morse_exhaustive_suite(a.n)?,
        Suite::FiveVertex => verify::five_vertex_suite()?,
    };
    let passed = verify::all_pass(&gates);
    for g in &gates {
        eprintln!("{}: {}", g.verdict, g.name);
    }
    emit_json(command, &a.output.out, VerifyResult { passed, gates })?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn morse_demo_cmd(a: &MorseDemoArgs) -> Result<(), Failure> {
    let g = match (&a.graph, a.n) {
        (Some(path), _) => Graph::parse(&fs::read_to_string(path)?)?,
        (None, Some(n)) => sample_gnp(&GnpParams::new(n, a.p, a.seed)?),
        (None, None) => verify::five_vertex_graph(),
    };
    let cap = a.k_cap.min(g.n());
    let m = morse::lex_matching(&g, cap)?;
    let mut text = String::new();
    let mut pairs: Vec<_> = m.pairs().iter().filter(|(_, t)| t.len() <= cap).collect();
    pairs.sort_by(|x, y| (x.0.len(), &x.0).cmp(&(y.0.len(), &y.0)));
    for (s, t) in pairs {
        text.push_str(&format!(
            "{} -> {}\n",
            join(s.vertices()),
            join(t.vertices())
        ));
    }
    for s in morse::critical_simplices(&g, cap)? {
        text.push_str(&format!("critical {}\n", join(s.vertices())));
    }
    emit(&a.output.out, &text)
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
