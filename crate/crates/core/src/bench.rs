//! Throughput harness: batched engine calls against a sequential
//! one-point-per-call baseline over the same data.
//!
//! Each (function, dimension) row draws `runs` batches of uniform points from
//! the search domain with a seeded generator. The first [`WARMUP_BATCHES`]
//! batches are evaluated but neither timed nor checksummed. Timing uses
//! [`Instant`], which is monotonic.

use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{FunctionId, CEC14_SUBSET, SEARCH_LOWER, SEARCH_UPPER};
use crate::engine::{Engine, EngineConfig, Precision};
use crate::error::{Error, Result};

pub const WARMUP_BATCHES: usize = 3;

/// Dimensions of the reference protocol.
pub const PROTOCOL_DIMS: [usize; 4] = [10, 32, 64, 96];
pub const PROTOCOL_BATCH: usize = 50;
pub const PROTOCOL_RUNS: usize = 1000;

/// The 30 functions shared with the CEC'14 suite.
pub fn cec14_functions() -> Vec<FunctionId> {
    CEC14_SUBSET
        .iter()
        .map(|&i| FunctionId::from_index(i).expect("subset ids are valid"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub dims: Vec<usize>,
    pub batch: usize,
    pub runs: usize,
    pub functions: Vec<FunctionId>,
    pub precision: Precision,
    pub seed: u64,
}

impl BenchConfig {
    /// The reference protocol: batch 50, 1000 runs, dims 10/32/64/96, the CEC'14 subset.
    pub fn protocol(precision: Precision, seed: u64) -> Self {
        BenchConfig {
            dims: PROTOCOL_DIMS.to_vec(),
            batch: PROTOCOL_BATCH,
            runs: PROTOCOL_RUNS,
            functions: cec14_functions(),
            precision,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.dims.is_empty() {
            return bad("at least one dimension is required");
        }
        if self.functions.is_empty() {
            return bad("at least one function is required");
        }
        if self.batch == 0 || self.runs == 0 {
            return bad("batch and runs must be positive");
        }
        Ok(())
    }
}

/// FNV-1a over the bit patterns of evaluated values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checksum(u64);

impl Checksum {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;

    pub fn new() -> Self {
        Checksum(Self::OFFSET)
    }

    pub fn push_bits(&mut self, bits: u64) {
        for byte in bits.to_le_bytes() {
            self.0 ^= u64::from(byte);
            self.0 = self.0.wrapping_mul(Self::PRIME);
        }
    }

    pub fn push(&mut self, values: &[f64]) {
        values.iter().for_each(|v| self.push_bits(v.to_bits()));
    }

    pub fn push_single(&mut self, values: &[f32]) {
        values
            .iter()
            .for_each(|v| self.push_bits(u64::from(v.to_bits())));
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl Default for Checksum {
    fn default() -> Self {
        Checksum::new()
    }
}

impl fmt::Display for Checksum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub function: FunctionId,
    pub dim: usize,
    pub precision: Precision,
    pub batch: usize,
    pub runs: usize,
    pub total_evals: usize,
    /// Mean batched time per evaluation.
    pub batch_ns_per_eval: f64,
    /// Fastest batch, per evaluation.
    pub batch_min_ns_per_eval: f64,
    pub baseline_ns_per_eval: f64,
    /// `baseline_ns_per_eval / batch_ns_per_eval`.
    pub ratio: f64,
    pub evals_per_sec: f64,
    pub checksum: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalReport {
    pub rows: Vec<ReportRow>,
}

const HEADER: [&str; 13] = [
    "fn",
    "name",
    "dim",
    "precision",
    "batch",
    "runs",
    "total_evals",
    "batch_ns_per_eval",
    "batch_min_ns_per_eval",
    "baseline_ns_per_eval",
    "ratio",
    "evals_per_sec",
    "checksum",
];

impl EvalReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.into());
        w.write_record(HEADER).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.function.index().to_string(),
                r.function.name().to_string(),
                r.dim.to_string(),
                r.precision.to_string(),
                r.batch.to_string(),
                r.runs.to_string(),
                r.total_evals.to_string(),
                format!("{:.3}", r.batch_ns_per_eval),
                format!("{:.3}", r.batch_min_ns_per_eval),
                format!("{:.3}", r.baseline_ns_per_eval),
                format!("{:.4}", r.ratio),
                format!("{:.1}", r.evals_per_sec),
                format!("{:016x}", r.checksum),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("report is ASCII"))
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv()?)?;
        Ok(())
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| Error::parse(1, e.to_string()))?
            .clone();
        if headers.iter().ne(HEADER) {
            return Err(Error::parse(1, "unexpected report header"));
        }
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let line = i + 2;
            let r = record.map_err(|e| Error::parse(line, e.to_string()))?;
            let num = |k: usize| -> Result<f64> {
                r[k].parse()
                    .map_err(|_| Error::parse(line, format!("bad number `{}`", &r[k])))
            };
            let int = |k: usize| -> Result<usize> {
                r[k].parse()
                    .map_err(|_| Error::parse(line, format!("bad integer `{}`", &r[k])))
            };
            let precision = match &r[3] {
                "single" => Precision::Single,
                "double" => Precision::Double,
                other => return Err(Error::parse(line, format!("bad precision `{other}`"))),
            };
            rows.push(ReportRow {
                function: FunctionId::from_index(int(0)?)?,
                dim: int(2)?,
                precision,
                batch: int(4)?,
                runs: int(5)?,
                total_evals: int(6)?,
                batch_ns_per_eval: num(7)?,
                batch_min_ns_per_eval: num(8)?,
                baseline_ns_per_eval: num(9)?,
                ratio: num(10)?,
                evals_per_sec: num(11)?,
                checksum: u64::from_str_radix(&r[12], 16)
                    .map_err(|_| Error::parse(line, "bad checksum"))?,
            });
        }
        Ok(EvalReport { rows })
    }
}

/// Seeded uniform batches for one (function, dimension) row.
struct Batches {
    rng: ChaCha8Rng,
    len: usize,
}

impl Batches {
    fn new(seed: u64, function: FunctionId, dim: usize, batch: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((function.index() as u64) << 32) | dim as u64);
        Batches {
            rng,
            len: batch * dim,
        }
    }

    fn next(&mut self) -> Vec<f64> {
        (0..self.len)
            .map(|_| self.rng.random_range(SEARCH_LOWER..=SEARCH_UPPER))
            .collect()
    }
}

enum Data {
    Double(Vec<f64>),
    Single(Vec<f32>),
}

impl Data {
    fn new(points: Vec<f64>, precision: Precision) -> Self {
        match precision {
            Precision::Double => Data::Double(points),
            Precision::Single => Data::Single(points.iter().map(|&v| v as f32).collect()),
        }
    }

    fn evaluate(&self, engine: &Engine, id: FunctionId, sum: Option<&mut Checksum>) -> Result<()> {
        match self {
            Data::Double(p) => {
                let v = engine.evaluate_double(id, p)?;
                if let Some(sum) = sum {
                    sum.push(&v);
                }
            }
            Data::Single(p) => {
                let v = engine.evaluate_single(id, p)?;
                if let Some(sum) = sum {
                    sum.push_single(&v);
                }
            }
        }
        Ok(())
    }

    fn evaluate_each(&self, engine: &Engine, id: FunctionId, dim: usize) -> Result<()> {
        match self {
            Data::Double(p) => p
                .chunks(dim)
                .try_for_each(|x| engine.evaluate_double(id, x).map(drop)),
            Data::Single(p) => p
                .chunks(dim)
                .try_for_each(|x| engine.evaluate_single(id, x).map(drop)),
        }
    }
}

fn engine_for(config: &BenchConfig, dim: usize) -> Result<Engine> {
    let cfg = EngineConfig::new(dim, config.batch, config.seed).with_precision(config.precision);
    Engine::initialize(cfg)
}

/// Times one function on an engine built for `batch`-sized calls.
pub fn measure(
    engine: &Engine,
    function: FunctionId,
    batch: usize,
    runs: usize,
    seed: u64,
) -> Result<ReportRow> {
    let dim = engine.dim();
    let precision = engine.config().precision;
    let mut batches = Batches::new(seed, function, dim, batch);
    for _ in 0..WARMUP_BATCHES {
        let data = Data::new(batches.next(), precision);
        data.evaluate(engine, function, None)?;
        data.evaluate_each(engine, function, dim)?;
    }
    let mut sum = Checksum::new();
    let mut batched = Duration::ZERO;
    let mut fastest = Duration::MAX;
    let mut sequential = Duration::ZERO;
    for _ in 0..runs {
        let data = Data::new(batches.next(), precision);
        let start = Instant::now();
        data.evaluate(engine, function, Some(&mut sum))?;
        let elapsed = start.elapsed();
        batched += elapsed;
        fastest = fastest.min(elapsed);

        let start = Instant::now();
        data.evaluate_each(engine, function, dim)?;
        sequential += start.elapsed();
    }
    let total_evals = batch * runs;
    let per_eval = |d: Duration, n: usize| d.as_nanos() as f64 / n as f64;
    let batch_ns = per_eval(batched, total_evals).max(f64::MIN_POSITIVE);
    let baseline_ns = per_eval(sequential, total_evals);
    Ok(ReportRow {
        function,
        dim,
        precision,
        batch,
        runs,
        total_evals,
        batch_ns_per_eval: batch_ns,
        batch_min_ns_per_eval: per_eval(fastest, batch),
        baseline_ns_per_eval: baseline_ns,
        ratio: baseline_ns / batch_ns,
        evals_per_sec: 1e9 / batch_ns,
        checksum: sum.value(),
    })
}

/// Runs the protocol for every dimension and function in `config`.
///
/// Functions not available at a dimension (hybrids below D = 10) are skipped.
pub fn run_protocol(config: &BenchConfig) -> Result<EvalReport> {
    config.validate()?;
    let mut rows = Vec::new();
    for &dim in &config.dims {
        let engine = engine_for(config, dim)?;
        for &function in &config.functions {
            if engine.is_enabled(function) {
                rows.push(measure(
                    &engine,
                    function,
                    config.batch,
                    config.runs,
                    config.seed,
                )?);
            }
        }
    }
    Ok(EvalReport { rows })
}

/// The checksums `run_protocol` would report, computed without any timing.
pub fn checksums(config: &BenchConfig) -> Result<Vec<(FunctionId, usize, u64)>> {
    config.validate()?;
    let mut out = Vec::new();
    for &dim in &config.dims {
        let engine = engine_for(config, dim)?;
        for &function in &config.functions {
            if !engine.is_enabled(function) {
                continue;
            }
            let mut batches = Batches::new(config.seed, function, dim, config.batch);
            for _ in 0..WARMUP_BATCHES {
                batches.next();
            }
            let mut sum = Checksum::new();
            for _ in 0..config.runs {
                Data::new(batches.next(), config.precision).evaluate(
                    &engine,
                    function,
                    Some(&mut sum),
                )?;
            }
            out.push((function, dim, sum.value()));
        }
    }
    Ok(out)
}
