//! `crs`: parameter sweeps, analytic/Monte-Carlo comparison, coverage
//! queries, coded-caching placement dumps and figure data.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use crs_core::caching::{cc_delivery_schedule, cc_place, subfiles_of_file, CcConfig, Request};
use crs_core::config::Settings;
use crs_core::model::{stream_powers, ReceiverClass, SinrKind};
use crs_core::montecarlo::{estimate_coverages, CoverageQuery};
use crs_core::rates::RateEngine;
use crs_core::sweep::{self, format_sig, Grid, Methods, ModeSelector, SweepSpec, SweepVar};
use crs_core::CrsError;

/// Environment variable overriding the Monte-Carlo seed.
const SEED_ENV: &str = "CRS_SEED";

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_COMPARISON: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "crs", version, about = "Caching-aided rate splitting: analysis, simulation and figure data")]
struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Override one configuration key (repeatable), e.g. `--set alpha=3`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Monte-Carlo seed; overrides the config file and the CRS_SEED variable.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monte-Carlo worker threads.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep one variable and write the rate table as CSV.
    Sweep(SweepArgs),
    /// Compare the analytic and Monte-Carlo rows of a sweep table.
    Compare {
        /// CSV produced by `sweep --methods both`.
        csv: PathBuf,
    },
    /// Coverage probabilities of the SINR distributions.
    Coverage(CoverageArgs),
    /// Coded-caching placement and XOR delivery schedule.
    Placement(PlacementArgs),
    /// Data for one of the pre-canned figures (fig3 .. fig9).
    Figure(FigureArgs),
    /// Print the effective configuration.
    Config,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// beta, rho, u or P.
    #[arg(long)]
    var: String,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long, default_value_t = 19)]
    points: usize,
    /// all-mpc, cc-mpc, mpc-cc, all-cc or all.
    #[arg(long, default_value = "all")]
    mode: String,
    /// Restrict to subcase labels such as `XOR/EFR+IIC_e` (repeatable).
    #[arg(long = "subcase")]
    subcases: Vec<String>,
    /// Comma-separated: analytic, mc, both, asymptotic.
    #[arg(long, default_value = "analytic")]
    methods: String,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoverageArgs {
    /// SINR kind (common, private, private-interf and their -iic forms); all when omitted.
    #[arg(long)]
    kind: Option<String>,
    /// center or edge; both when omitted.
    #[arg(long)]
    class: Option<String>,
    /// Thresholds (repeatable).
    #[arg(long = "t", required = true)]
    thresholds: Vec<f64>,
    /// Add Monte-Carlo estimates.
    #[arg(long)]
    mc: bool,
}

#[derive(Args, Debug)]
struct PlacementArgs {
    #[arg(short = 'k', long = "receivers")]
    k: u32,
    #[arg(short = 'm', long = "cache")]
    m: u32,
    #[arg(short = 'n', long = "depth")]
    n: u32,
    /// Requested file rank of each receiver, comma-separated; receiver i
    /// requests rank i (wrapping at N) by default.
    #[arg(long, value_delimiter = ',')]
    demand: Vec<u32>,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// fig3 .. fig9.
    name: String,
    /// Directory receiving one CSV per curve family.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Override the figure's methods (analytic, mc, both, asymptotic).
    #[arg(long)]
    methods: Option<String>,
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<CrsError> for Failure {
    fn from(e: CrsError) -> Self {
        let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_USAGE };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure { code: EXIT_USAGE, message: format!("cannot read {}: {e}", path.display()) })
}

/// Defaults, then the config file, then CRS_SEED, then `--set`, then
/// `--seed` / `--workers`.
fn settings(cli: &Cli) -> Result<Settings, Failure> {
    let mut s = Settings::default();
    if let Some(path) = &cli.config {
        s.apply_text(&read_file(path)?)?;
    }
    if let Ok(seed) = std::env::var(SEED_ENV) {
        s.apply("seed", seed.trim()).map_err(|e| Failure { code: EXIT_USAGE, message: format!("{SEED_ENV}: {e}") })?;
    }
    for assignment in &cli.set {
        s.apply_assignment(assignment)?;
    }
    if let Some(seed) = cli.seed {
        s.sim.seed = seed;
    }
    if cli.workers.is_some() {
        s.sim.workers = cli.workers;
    }
    s.validate()?;
    Ok(s)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p)
                .map_err(|e| Failure { code: EXIT_USAGE, message: format!("cannot write {}: {e}", p.display()) })?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run_sweep(args: &SweepArgs, settings: Settings) -> Result<(), Failure> {
    let spec = SweepSpec {
        modes: args.mode.parse::<ModeSelector>()?,
        subcases: args.subcases.clone(),
        methods: args.methods.parse::<Methods>()?,
        ..SweepSpec::new(args.var.parse::<SweepVar>()?, Grid::new(args.from, args.to, args.points), settings)
    };
    spec.validate()?;
    let rows = sweep::run_sweep(&spec)?;
    let mut out = output(args.out.as_deref())?;
    sweep::write_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run_compare(path: &Path) -> Result<(), Failure> {
    let file = File::open(path)
        .map_err(|e| Failure { code: EXIT_USAGE, message: format!("cannot read {}: {e}", path.display()) })?;
    let summary = sweep::compare_csv(file)?;
    println!("{summary}");
    if summary.passed() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_COMPARISON,
            message: format!(
                "analytic and Monte-Carlo rows disagree by more than {} standard errors",
                crs_core::validation::Z_LIMIT
            ),
        })
    }
}

fn run_coverage(args: &CoverageArgs, settings: Settings) -> Result<(), Failure> {
    let kinds = match &args.kind {
        Some(k) => vec![k.parse::<SinrKind>()?],
        None => SinrKind::ALL.to_vec(),
    };
    let classes = match &args.class {
        Some(c) => vec![c.parse::<ReceiverClass>()?],
        None => ReceiverClass::ALL.to_vec(),
    };
    let params = &settings.params;
    let split = settings.split()?;
    let engine = RateEngine::new(params, split)?;
    let queries: Vec<CoverageQuery> = kinds
        .iter()
        .flat_map(|&kind| classes.iter().map(move |&class| (kind, class)))
        .flat_map(|(kind, class)| args.thresholds.iter().map(move |&t| CoverageQuery { kind, class, t }))
        .collect();
    let estimates = if args.mc {
        Some(estimate_coverages(&queries, params, &stream_powers(params.power, split), &settings.sim)?)
    } else {
        None
    };
    let mut out = output(None)?;
    writeln!(out, "kind,class,t,bound,analytic,mc,stderr")?;
    for (i, q) in queries.iter().enumerate() {
        let (mc, se) = estimates.as_ref().map_or((f64::NAN, f64::NAN), |e| (e[i].value, e[i].stderr));
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            q.kind,
            q.class,
            format_sig(q.t),
            format_sig(engine.dist(q.kind, q.class).theta()),
            format_sig(engine.coverage(q.kind, q.class, q.t)),
            format_sig(mc),
            format_sig(se)
        )?;
    }
    out.flush()?;
    Ok(())
}

fn braces<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    format!("{{{}}}", items.into_iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", "))
}

fn run_placement(args: &PlacementArgs) -> Result<(), Failure> {
    let cfg = CcConfig::new(args.k, args.m, args.n)?;
    let placement = cc_place(&cfg);
    let demand: Vec<u32> = if args.demand.is_empty() {
        (0..cfg.receivers()).map(|i| i % cfg.depth() + 1).collect()
    } else {
        args.demand.clone()
    };
    let requests: Vec<Request> =
        demand.iter().enumerate().map(|(i, &rank)| Request { receiver: i as u32 + 1, rank }).collect();
    let schedule = cc_delivery_schedule(&cfg, &requests)?;

    let mut out = output(None)?;
    writeln!(
        out,
        "K={} M={} N={} t={} subfiles per file={}",
        cfg.receivers(),
        cfg.cache_size(),
        cfg.depth(),
        cfg.replication(),
        cfg.subfiles_per_file()
    )?;
    for f in 1..=cfg.depth() {
        writeln!(out, "Λ_{f} = {}", braces(subfiles_of_file(&cfg, f)))?;
    }
    for i in 1..=cfg.receivers() {
        for f in 1..=cfg.depth() {
            writeln!(out, "T_{{{f},{i}}} = {}", braces(placement.stored(f, i)))?;
        }
    }
    writeln!(out, "demand: {}", demand.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))?;
    for tx in &schedule.transmissions {
        writeln!(out, "{tx}")?;
    }
    let ratio = |r: num_rational::Ratio<u64>| format_sig(*r.numer() as f64 / *r.denom() as f64);
    writeln!(out, "total load: {}", ratio(schedule.total_load()))?;
    writeln!(out, "per-receiver load: {}", ratio(schedule.per_receiver_load()))?;
    out.flush()?;
    Ok(())
}

fn run_figure(args: &FigureArgs, settings: Settings) -> Result<(), Failure> {
    let series = sweep::figure(&args.name, &settings)?;
    std::fs::create_dir_all(&args.out_dir)?;
    for mut s in series {
        if let Some(m) = &args.methods {
            s.spec.methods = m.parse()?;
        }
        let rows = sweep::run_sweep(&s.spec)?;
        let path = args.out_dir.join(format!("{}.csv", s.name));
        let mut out = output(Some(&path))?;
        sweep::write_csv(&rows, &mut out)?;
        out.flush()?;
        println!("{}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Compare { csv } => run_compare(csv),
        Command::Placement(args) => run_placement(args),
        Command::Sweep(args) => run_sweep(args, settings(&cli)?),
        Command::Coverage(args) => run_coverage(args, settings(&cli)?),
        Command::Figure(args) => run_figure(args, settings(&cli)?),
        Command::Config => {
            print!("{}", settings(&cli)?.to_text());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
