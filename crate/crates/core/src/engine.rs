//! Batch evaluation front-end: `initialize`, `evaluate` in single or double
//! precision, `dispose`.
//!
//! All instances are generated once at initialization and compiled into
//! precision-specific plans. Batches are split across points only; every point
//! is evaluated sequentially with a fixed reduction order, so a value never
//! depends on the batch it arrived in or on the number of worker threads.

use std::fmt;

use rayon::prelude::*;

use crate::catalog::{FunctionId, F_OPT, MIN_DIM};
use crate::error::{Error, Result};
use crate::plan::Plan;
use crate::real::Real;
use crate::transforms::{generate_instance, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Precision {
    Single,
    #[default]
    Double,
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Precision::Single => "single",
            Precision::Double => "double",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub dim: usize,
    /// Largest batch a single `evaluate` call accepts.
    pub max_concurrency: usize,
    pub seed: u64,
    /// Precision used by [`Engine::evaluate_rows`].
    pub precision: Precision,
}

impl EngineConfig {
    pub fn new(dim: usize, max_concurrency: usize, seed: u64) -> Self {
        EngineConfig {
            dim,
            max_concurrency,
            seed,
            precision: Precision::Double,
        }
    }

    pub fn with_precision(self, precision: Precision) -> Self {
        EngineConfig { precision, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < MIN_DIM {
            return Err(Error::InvalidConfig(format!(
                "dim must be at least {MIN_DIM}, got {}",
                self.dim
            )));
        }
        if self.max_concurrency == 0 {
            return Err(Error::InvalidConfig(
                "max_concurrency must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Points {
    Single(Vec<f32>),
    Double(Vec<f64>),
}

/// `count` points of dimension `dim`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointBatch {
    dim: usize,
    points: Points,
}

impl PointBatch {
    pub fn new(dim: usize, points: Points) -> Result<Self> {
        let len = match &points {
            Points::Single(v) => v.len(),
            Points::Double(v) => v.len(),
        };
        if dim == 0 || len == 0 {
            return Err(Error::EmptyInput);
        }
        if !len.is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: len % dim,
            });
        }
        let finite = match &points {
            Points::Single(v) => v.iter().all(|x| x.is_finite()),
            Points::Double(v) => v.iter().all(|x| x.is_finite()),
        };
        if !finite {
            return Err(Error::NonFiniteInput);
        }
        Ok(PointBatch { dim, points })
    }

    pub fn double(dim: usize, data: Vec<f64>) -> Result<Self> {
        PointBatch::new(dim, Points::Double(data))
    }

    pub fn single(dim: usize, data: Vec<f32>) -> Result<Self> {
        PointBatch::new(dim, Points::Single(data))
    }

    pub fn from_rows(rows: &[Vec<f64>], precision: Precision) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        let flat = rows.iter().flatten().copied();
        match precision {
            Precision::Double => PointBatch::double(dim, flat.collect()),
            Precision::Single => PointBatch::single(dim, flat.map(|v| v as f32).collect()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        match &self.points {
            Points::Single(v) => v.len() / self.dim,
            Points::Double(v) => v.len() / self.dim,
        }
    }

    pub fn precision(&self) -> Precision {
        match self.points {
            Points::Single(_) => Precision::Single,
            Points::Double(_) => Precision::Double,
        }
    }

    pub fn points(&self) -> &Points {
        &self.points
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Values {
    Single(Vec<f32>),
    Double(Vec<f64>),
}

/// Function values including the `F_OPT` bias, one per input point.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub values: Values,
}

impl EvalResult {
    pub fn len(&self) -> usize {
        match &self.values {
            Values::Single(v) => v.len(),
            Values::Double(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Values widened to `f64` (exact for both precisions).
    pub fn to_f64(&self) -> Vec<f64> {
        match &self.values {
            Values::Single(v) => v.iter().map(|&x| x as f64).collect(),
            Values::Double(v) => v.clone(),
        }
    }
}

#[derive(Debug)]
struct Compiled {
    instance: Instance,
    double: Plan<f64>,
    single: Plan<f32>,
}

#[derive(Debug)]
pub struct Engine {
    config: EngineConfig,
    disabled: Vec<FunctionId>,
    functions: Option<Vec<Option<Compiled>>>,
}

impl Engine {
    /// Generates and compiles every function available at `config.dim`.
    ///
    /// Functions that need a larger dimension are disabled rather than
    /// failing initialization; see [`Engine::disabled`].
    pub fn initialize(config: EngineConfig) -> Result<Self> {
        config.validate()?;
        let mut disabled = Vec::new();
        let mut functions = Vec::with_capacity(FunctionId::ALL.len());
        for id in FunctionId::ALL {
            if config.dim < id.min_dim() {
                disabled.push(id);
                functions.push(None);
                continue;
            }
            let instance = generate_instance(id, config.dim, config.seed)?;
            functions.push(Some(Compiled {
                double: Plan::new(&instance)?,
                single: Plan::new(&instance)?,
                instance,
            }));
        }
        Ok(Engine {
            config,
            disabled,
            functions: Some(functions),
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.config.dim
    }

    /// Functions unavailable at this engine's dimension.
    pub fn disabled(&self) -> &[FunctionId] {
        &self.disabled
    }

    pub fn enabled(&self) -> Vec<FunctionId> {
        FunctionId::ALL
            .into_iter()
            .filter(|id| !self.disabled.contains(id))
            .collect()
    }

    pub fn is_enabled(&self, id: FunctionId) -> bool {
        !self.disabled.contains(&id)
    }

    pub fn is_disposed(&self) -> bool {
        self.functions.is_none()
    }

    fn compiled(&self, id: FunctionId) -> Result<&Compiled> {
        let functions = self.functions.as_ref().ok_or(Error::UseAfterDispose)?;
        functions[id.index()]
            .as_ref()
            .ok_or(Error::DisabledFunction(id))
    }

    pub fn instance(&self, id: FunctionId) -> Result<&Instance> {
        self.compiled(id).map(|c| &c.instance)
    }

    fn check_batch(&self, len: usize) -> Result<usize> {
        let dim = self.config.dim;
        if len == 0 {
            return Err(Error::EmptyInput);
        }
        if !len.is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: len % dim,
            });
        }
        let count = len / dim;
        if count > self.config.max_concurrency {
            return Err(Error::BatchTooLarge {
                count,
                max: self.config.max_concurrency,
            });
        }
        Ok(count)
    }

    /// Evaluates a batch in the batch's own precision.
    pub fn evaluate(&self, id: FunctionId, batch: &PointBatch) -> Result<EvalResult> {
        if batch.dim() != self.config.dim {
            return Err(Error::DimensionMismatch {
                expected: self.config.dim,
                found: batch.dim(),
            });
        }
        let values = match batch.points() {
            Points::Double(v) => Values::Double(self.evaluate_double(id, v)?),
            Points::Single(v) => Values::Single(self.evaluate_single(id, v)?),
        };
        Ok(EvalResult { values })
    }

    /// Double-precision evaluation of row-major points.
    pub fn evaluate_double(&self, id: FunctionId, points: &[f64]) -> Result<Vec<f64>> {
        let compiled = self.compiled(id)?;
        self.check_batch(points.len())?;
        run(&compiled.double, points, self.config.dim)
    }

    /// Single-precision evaluation of row-major points; the whole pipeline runs in `f32`.
    pub fn evaluate_single_precision(&self, id: FunctionId, points: &[f32]) -> Result<Vec<f32>> {
        let compiled = self.compiled(id)?;
        self.check_batch(points.len())?;
        run(&compiled.single, points, self.config.dim)
    }

    pub fn evaluate_single(&self, id: FunctionId, points: &[f32]) -> Result<Vec<f32>> {
        self.evaluate_single_precision(id, points)
    }

    /// Evaluates rows in the configured precision; values are returned widened to `f64`.
    pub fn evaluate_rows(&self, id: FunctionId, rows: &[Vec<f64>]) -> Result<Vec<f64>> {
        let batch = PointBatch::from_rows(rows, self.config.precision)?;
        self.evaluate(id, &batch).map(|r| r.to_f64())
    }

    /// Releases all instance data. Later evaluations fail with [`Error::UseAfterDispose`].
    pub fn dispose(&mut self) {
        self.functions = None;
    }
}

fn run<T: Real>(plan: &Plan<T>, points: &[T], dim: usize) -> Result<Vec<T>> {
    if points.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    let bias = T::lit(F_OPT);
    let mut out = Vec::with_capacity(points.len() / dim);
    // With a single worker, handing the batch to the pool only adds a thread
    // switch; the per-point results are the same either way.
    if points.len() == dim || rayon::current_num_threads() == 1 {
        out.extend(points.chunks_exact(dim).map(|x| plan.eval(x) + bias));
    } else {
        points
            .par_chunks_exact(dim)
            .map(|x| plan.eval(x) + bias)
            .collect_into_vec(&mut out);
    }
    Ok(out)
}
