//! Command implementations behind the `realbench` binary.
//!
//! Each subcommand is a plain function over parsed arguments so that it can
//! be exercised in-process by tests.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use realbench::bench::{self, BenchConfig};
use realbench::io::{self, Grid};
use realbench::{generate_instance, Engine, EngineConfig, Error, FunctionId, Precision};

/// Evaluations per engine call in `eval`.
const EVAL_CHUNK: usize = 1024;

#[derive(Debug, Parser)]
#[command(
    name = "realbench",
    version,
    about = "Real-parameter benchmark suite: instances, evaluation, grids, timing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write instance files.
    Gen(GenArgs),
    /// Evaluate a points file.
    Eval(EvalArgs),
    /// Sample a 2-D function on a square mesh.
    Grid(GridArgs),
    /// Time batched evaluation against one-point calls.
    Bench(BenchArgs),
}

/// A function id, or `all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FnChoice {
    All,
    One(FunctionId),
}

impl FromStr for FnChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(FnChoice::All);
        }
        parse_function(s).map(FnChoice::One)
    }
}

fn parse_function(s: &str) -> Result<FunctionId, String> {
    let id: usize = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a function id"))?;
    FunctionId::from_index(id).map_err(|e| e.to_string())
}

/// `all`, `cec14`, or a comma-separated list of ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnSet(pub Vec<FunctionId>);

impl FromStr for FnSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(FnSet(FunctionId::ALL.to_vec())),
            "cec14" => Ok(FnSet(bench::cec14_functions())),
            _ => s
                .split(',')
                .map(parse_function)
                .collect::<Result<_, _>>()
                .map(FnSet),
        }
    }
}

/// `lo:hi` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{t}` is not a number"))
        };
        let span = Span {
            lo: num(lo)?,
            hi: num(hi)?,
        };
        if !span.lo.is_finite() || !span.hi.is_finite() || span.lo >= span.hi {
            return Err(format!("range `{s}` must satisfy lo < hi"));
        }
        Ok(span)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Function id (0-36) or `all`.
    #[arg(long = "fn")]
    pub function: FnChoice,
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "fn", value_parser = parse_function)]
    pub function: FunctionId,
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Comma-separated points, one per row.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Values file, one per row.
    #[arg(long)]
    pub out: PathBuf,
    /// Run the whole pipeline in single precision.
    #[arg(long)]
    pub single: bool,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long = "fn", value_parser = parse_function)]
    pub function: FunctionId,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = "-100:100", allow_hyphen_values = true)]
    pub range: Span,
    /// Mesh nodes per axis.
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,32,64,96")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = bench::PROTOCOL_BATCH)]
    pub batch: usize,
    #[arg(long, default_value_t = bench::PROTOCOL_RUNS)]
    pub runs: usize,
    /// `all`, `cec14` or a comma-separated id list.
    #[arg(long, default_value = "cec14")]
    pub fns: FnSet,
    #[arg(long)]
    pub single: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Report file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn precision(single: bool) -> Precision {
    if single {
        Precision::Single
    } else {
        Precision::Double
    }
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen(a) => cmd_gen(&a).map(|written| {
            for path in written {
                println!("{}", path.display());
            }
        }),
        Command::Eval(a) => cmd_eval(&a),
        Command::Grid(a) => cmd_grid(&a).map(drop),
        Command::Bench(a) => cmd_bench(&a),
    }
}

pub fn instance_file_name(function: FunctionId, dim: usize, seed: u64) -> String {
    format!(
        "f{:02}_{}_d{dim}_s{seed}.txt",
        function.index(),
        function.name().to_ascii_lowercase()
    )
}

/// Writes one instance file per requested function and returns their paths.
///
/// With `all`, functions that need a larger dimension are skipped with a
/// note on standard error.
pub fn cmd_gen(args: &GenArgs) -> anyhow::Result<Vec<PathBuf>> {
    let ids = match args.function {
        FnChoice::All => FunctionId::ALL.to_vec(),
        FnChoice::One(id) => vec![id],
    };
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut written = Vec::new();
    for id in ids {
        let inst = match generate_instance(id, args.dim, args.seed) {
            Err(Error::DimensionTooSmall { .. }) if args.function == FnChoice::All => {
                eprintln!("skipping {id}: needs dimension {}", id.min_dim());
                continue;
            }
            other => other.with_context(|| format!("generating function {}", id.index()))?,
        };
        let path = args.out.join(instance_file_name(id, args.dim, args.seed));
        io::store_instance(&inst, &path).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}

pub fn cmd_eval(args: &EvalArgs) -> anyhow::Result<()> {
    let precision = precision(args.single);
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let rows = io::parse_points(&text, args.dim)
        .with_context(|| format!("in {}", args.input.display()))?;
    let config = EngineConfig::new(args.dim, EVAL_CHUNK.min(rows.len()), args.seed)
        .with_precision(precision);
    let engine = Engine::initialize(config)?;
    let id = args.function;
    if !engine.is_enabled(id) {
        return Err(Error::DimensionTooSmall {
            function: id,
            dim: args.dim,
            min: id.min_dim(),
        }
        .into());
    }
    let rendered = match precision {
        Precision::Double => {
            let mut values = Vec::with_capacity(rows.len());
            for chunk in rows.chunks(EVAL_CHUNK) {
                let flat: Vec<f64> = chunk.iter().flatten().copied().collect();
                values.extend(engine.evaluate_double(id, &flat)?);
            }
            io::render_values(&values)
        }
        Precision::Single => {
            let mut values = Vec::with_capacity(rows.len());
            for chunk in rows.chunks(EVAL_CHUNK) {
                let flat: Vec<f32> = chunk.iter().flatten().map(|&v| v as f32).collect();
                values.extend(engine.evaluate_single(id, &flat)?);
            }
            io::render_values(&values)
        }
    };
    fs::write(&args.out, rendered).with_context(|| format!("writing {}", args.out.display()))?;
    Ok(())
}

/// Samples `function` at D = 2 on a `steps × steps` mesh over `[lo, hi]²`.
pub fn compute_grid(
    function: FunctionId,
    seed: u64,
    span: Span,
    steps: usize,
) -> realbench::Result<Grid> {
    if function.needs_hybrid_split() {
        return Err(Error::UnsupportedAtDim2(function));
    }
    if steps < 2 {
        return Err(Error::InvalidConfig("a grid needs at least 2 steps".into()));
    }
    let engine = Engine::initialize(EngineConfig::new(2, steps, seed))?;
    let nodes: Vec<f64> = (0..steps)
        .map(|k| io::mesh_node(span.lo, span.hi, steps, k))
        .collect();
    let mut values = Vec::with_capacity(steps * steps);
    let mut row = Vec::with_capacity(2 * steps);
    for &x2 in &nodes {
        row.clear();
        for &x1 in &nodes {
            row.extend([x1, x2]);
        }
        values.extend(engine.evaluate_double(function, &row)?);
    }
    Ok(Grid {
        function,
        seed,
        lo: span.lo,
        hi: span.hi,
        steps,
        values,
    })
}

pub fn cmd_grid(args: &GridArgs) -> anyhow::Result<Grid> {
    let grid = compute_grid(args.function, args.seed, args.range, args.steps)?;
    io::write_grid(&grid, &args.out).with_context(|| format!("writing {}", args.out.display()))?;
    Ok(grid)
}

pub fn bench_config(args: &BenchArgs) -> BenchConfig {
    BenchConfig {
        dims: args.dims.clone(),
        batch: args.batch,
        runs: args.runs,
        functions: args.fns.0.clone(),
        precision: precision(args.single),
        seed: args.seed,
    }
}

pub fn cmd_bench(args: &BenchArgs) -> anyhow::Result<()> {
    let config = bench_config(args);
    if let Some(&dim) = config.dims.iter().find(|&&d| d < 2) {
        bail!("dimension {dim} is below the minimum of 2");
    }
    let report = bench::run_protocol(&config)?;
    let csv = report.to_csv()?;
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => std::io::stdout().write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
