//! Text persistence for instances, point batches, values and 2-D grids.
//!
//! Every number is written in scientific notation with enough significant
//! digits (17 for `f64`, 9 for `f32`) to parse back to the identical bit
//! pattern. Rust's float formatting is platform independent, so the same data
//! always produces the same bytes.
//!
//! # Instance format
//!
//! ```text
//! realbench-instance 1
//! instance
//! function <id> <NAME>
//! dim <D>
//! seed <S>
//! shift <D values>
//! rotation | hybrid
//! permutation <D indices>
//! groups <n_1> ... <n_k>
//! row <n_k values>        (n_k rows per group, groups in order)
//! end
//! ```
//!
//! A composition replaces the rotation section with `components <n>` followed
//! by `n` nested `instance ... end` sections. Blank lines and lines starting
//! with `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::catalog::FunctionId;
use crate::engine::{PointBatch, Points, Precision};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::transforms::{BlockRotation, Instance, Matrix, Structure};

pub const FORMAT_MAGIC: &str = "realbench-instance";
pub const FORMAT_VERSION: u32 = 1;

/// Formats `v` with exactly enough digits for a bit-exact round trip.
pub fn render_real<T: Real>(v: T) -> String {
    format!("{:.*e}", T::DIGITS - 1, v)
}

fn push_values<T: Real>(out: &mut String, key: &str, values: &[T]) {
    out.push_str(key);
    for &v in values {
        out.push(' ');
        out.push_str(&render_real(v));
    }
    out.push('\n');
}

fn render_into(out: &mut String, inst: &Instance) {
    out.push_str("instance\n");
    let _ = writeln!(
        out,
        "function {} {}",
        inst.function.index(),
        inst.function.name()
    );
    let _ = writeln!(out, "dim {}", inst.dim);
    let _ = writeln!(out, "seed {}", inst.seed);
    push_values(out, "shift", &inst.shift);
    let mut rotation = |kind: &str, r: &BlockRotation| {
        out.push_str(kind);
        out.push('\n');
        out.push_str("permutation");
        for p in r.permutation() {
            let _ = write!(out, " {p}");
        }
        out.push_str("\ngroups");
        for s in r.sizes() {
            let _ = write!(out, " {s}");
        }
        out.push('\n');
        for block in r.blocks() {
            for i in 0..block.size() {
                push_values(out, "row", block.row(i));
            }
        }
    };
    match &inst.structure {
        Structure::Basic(r) => rotation("rotation", r),
        Structure::Hybrid(r) => rotation("hybrid", r),
        Structure::Composition(parts) => {
            let _ = writeln!(out, "components {}", parts.len());
            for part in parts {
                render_into(out, part);
            }
        }
    }
    out.push_str("end\n");
}

/// Renders an instance in the versioned text format.
pub fn render_instance(inst: &Instance) -> String {
    let mut out = format!("{FORMAT_MAGIC} {FORMAT_VERSION}\n");
    render_into(&mut out, inst);
    out
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Lines { lines, pos: 0 }
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(0, |l| l.0)
    }

    /// Next line, split into its keyword and the remaining tokens.
    fn next(&mut self, keyword: &str) -> Result<(usize, Vec<&'a str>)> {
        let Some(&(line, text)) = self.lines.get(self.pos) else {
            return Err(Error::parse(
                self.last_line() + 1,
                format!("unexpected end of file, expected `{keyword}`"),
            ));
        };
        let mut tokens = text.split_whitespace();
        let head = tokens.next().unwrap_or_default();
        if head != keyword {
            return Err(Error::parse(
                line,
                format!("expected `{keyword}`, found `{head}`"),
            ));
        }
        self.pos += 1;
        Ok((line, tokens.collect()))
    }

    fn peek_keyword(&self) -> Option<&'a str> {
        self.lines
            .get(self.pos)
            .and_then(|(_, l)| l.split_whitespace().next())
    }

    fn single<T: FromStr>(&mut self, keyword: &str) -> Result<T> {
        let (line, tokens) = self.next(keyword)?;
        match tokens.as_slice() {
            [t] => parse_token(line, t),
            _ => Err(Error::parse(
                line,
                format!("`{keyword}` takes exactly one value"),
            )),
        }
    }

    fn list<T: FromStr>(&mut self, keyword: &str, expected: Option<usize>) -> Result<Vec<T>> {
        let (line, tokens) = self.next(keyword)?;
        if let Some(n) = expected {
            if tokens.len() != n {
                return Err(Error::parse(
                    line,
                    format!("`{keyword}` has {} values, expected {n}", tokens.len()),
                ));
            }
        }
        tokens.iter().map(|t| parse_token(line, t)).collect()
    }
}

fn parse_token<T: FromStr>(line: usize, token: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid number `{token}`")))
}

fn parse_rotation(lines: &mut Lines<'_>, dim: usize) -> Result<BlockRotation> {
    let permutation: Vec<usize> = lines.list("permutation", Some(dim))?;
    let (line, tokens) = lines.next("groups")?;
    let sizes: Vec<usize> = tokens
        .iter()
        .map(|t| parse_token(line, t))
        .collect::<Result<_>>()?;
    if sizes.iter().sum::<usize>() != dim || sizes.contains(&0) {
        return Err(Error::parse(
            line,
            "group sizes do not add up to the dimension",
        ));
    }
    let mut blocks = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let mut data = Vec::with_capacity(n * n);
        for _ in 0..n {
            data.extend(lines.list::<f64>("row", Some(n))?);
        }
        blocks.push(Matrix::from_rows(n, data)?);
    }
    BlockRotation::from_parts(permutation, sizes, blocks)
}

fn parse_instance_body(lines: &mut Lines<'_>) -> Result<Instance> {
    lines.next("instance")?;
    let (line, tokens) = lines.next("function")?;
    let function = match tokens.as_slice() {
        [id, name] => {
            let f = FunctionId::from_index(parse_token(line, id)?)
                .map_err(|e| Error::parse(line, e.to_string()))?;
            if f.name() != *name {
                return Err(Error::parse(
                    line,
                    format!("function {} is named {}, not {name}", f.index(), f.name()),
                ));
            }
            f
        }
        _ => return Err(Error::parse(line, "expected `function <id> <name>`")),
    };
    let dim: usize = lines.single("dim")?;
    if dim == 0 {
        return Err(Error::parse(line + 1, "dimension must be positive"));
    }
    let seed: u64 = lines.single("seed")?;
    let shift: Vec<f64> = lines.list("shift", Some(dim))?;
    let structure = match lines.peek_keyword() {
        Some("rotation") => {
            lines.next("rotation")?;
            Structure::Basic(parse_rotation(lines, dim)?)
        }
        Some("hybrid") => {
            lines.next("hybrid")?;
            Structure::Hybrid(parse_rotation(lines, dim)?)
        }
        Some("components") => {
            let n: usize = lines.single("components")?;
            let parts = (0..n)
                .map(|_| parse_instance_body(lines))
                .collect::<Result<Vec<_>>>()?;
            Structure::Composition(parts)
        }
        _ => {
            let at = lines
                .lines
                .get(lines.pos)
                .map_or(lines.last_line() + 1, |l| l.0);
            return Err(Error::parse(
                at,
                "expected `rotation`, `hybrid` or `components`",
            ));
        }
    };
    lines.next("end")?;
    Ok(Instance {
        function,
        dim,
        seed,
        shift,
        structure,
    })
}

/// Parses and validates an instance in the text format.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = Lines::new(text);
    let (line, tokens) = lines.next(FORMAT_MAGIC)?;
    let version: u32 = match tokens.as_slice() {
        [v] => parse_token(line, v)?,
        _ => return Err(Error::parse(line, "missing format version")),
    };
    if version != FORMAT_VERSION {
        return Err(Error::parse(
            line,
            format!("unsupported format version {version}"),
        ));
    }
    let inst = parse_instance_body(&mut lines)?;
    if let Some(&(line, _)) = lines.lines.get(lines.pos) {
        return Err(Error::parse(line, "trailing content after instance"));
    }
    inst.validate()?;
    Ok(inst)
}

pub fn store_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, render_instance(inst))?;
    Ok(())
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    parse_instance(&fs::read_to_string(path)?)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => Error::parse(
            line,
            format!("row has {len} columns, previous rows have {expected_len}"),
        ),
        other => Error::parse(line, format!("{other:?}")),
    }
}

/// Parses comma-separated points, one per row, into rows of width `dim`.
pub fn parse_points(text: &str, dim: usize) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != dim {
            return Err(Error::parse(
                line,
                format!("row has {} columns, expected {dim}", record.len()),
            ));
        }
        let row = record
            .iter()
            .map(|t| parse_token::<f64>(line, t))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(rows)
}

/// Reads a points file as a batch in the requested precision.
pub fn read_points_as(
    path: impl AsRef<Path>,
    dim: usize,
    precision: Precision,
) -> Result<PointBatch> {
    let rows = parse_points(&fs::read_to_string(path)?, dim)?;
    PointBatch::from_rows(&rows, precision)
}

pub fn read_points(path: impl AsRef<Path>, dim: usize) -> Result<PointBatch> {
    read_points_as(path, dim, Precision::Double)
}

/// One comma-separated row per point.
pub fn render_points(batch: &PointBatch) -> String {
    fn rows<T: Real>(data: &[T], dim: usize) -> String {
        let mut out = String::new();
        for row in data.chunks(dim) {
            let cells: Vec<String> = row.iter().map(|&v| render_real(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
    match batch.points() {
        Points::Double(v) => rows(v, batch.dim()),
        Points::Single(v) => rows(v, batch.dim()),
    }
}

pub fn write_points(batch: &PointBatch, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, render_points(batch))?;
    Ok(())
}

/// One value per line.
pub fn render_values<T: Real>(values: &[T]) -> String {
    let mut out = String::new();
    for &v in values {
        out.push_str(&render_real(v));
        out.push('\n');
    }
    out
}

pub fn write_values<T: Real>(values: &[T], path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, render_values(values))?;
    Ok(())
}

pub fn parse_values<T: Real + FromStr>(text: &str) -> Result<Vec<T>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_token(i + 1, l.trim()))
        .collect()
}

pub fn read_values<T: Real + FromStr>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    parse_values(&fs::read_to_string(path)?)
}

/// K×K function values over the square mesh `[lo, hi]²`.
///
/// `values[i * steps + j]` is the value at `(x₁, x₂) = (node(j), node(i))`,
/// so rows run along the second coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub function: FunctionId,
    pub seed: u64,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub values: Vec<f64>,
}

impl Grid {
    /// Coordinate of mesh node `k`.
    pub fn node(&self, k: usize) -> f64 {
        mesh_node(self.lo, self.hi, self.steps, k)
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.steps + j]
    }

    /// Mesh point with the smallest value, as `(x₁, x₂)`.
    pub fn argmin(&self) -> (f64, f64) {
        let k = self
            .values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0, |(k, _)| k);
        (self.node(k % self.steps), self.node(k / self.steps))
    }

    pub fn cell(&self) -> f64 {
        if self.steps > 1 {
            (self.hi - self.lo) / (self.steps - 1) as f64
        } else {
            0.0
        }
    }
}

pub fn mesh_node(lo: f64, hi: f64, steps: usize, k: usize) -> f64 {
    if steps <= 1 {
        return lo;
    }
    if k + 1 == steps {
        return hi;
    }
    lo + (hi - lo) * k as f64 / (steps - 1) as f64
}

/// Renders a grid: `#` metadata lines, then `steps` rows of comma-separated values.
pub fn render_grid(grid: &Grid) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# function {} {}",
        grid.function.index(),
        grid.function.name()
    );
    let _ = writeln!(out, "# seed {}", grid.seed);
    let _ = writeln!(out, "# dim 2");
    let _ = writeln!(
        out,
        "# range {}:{}",
        render_real(grid.lo),
        render_real(grid.hi)
    );
    let _ = writeln!(out, "# steps {}", grid.steps);
    let _ = writeln!(out, "# layout row i = x2 node i, column j = x1 node j");
    for row in grid.values.chunks(grid.steps.max(1)) {
        let cells: Vec<String> = row.iter().map(|&v| render_real(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_grid(grid: &Grid, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, render_grid(grid))?;
    Ok(())
}
