//! Instance generation and the shift/scale/rotate input pipeline.
//!
//! All random data of an instance is a pure function of `(function id, dim,
//! seed)`. Each datum (shift vector, variable grouping, every rotation block,
//! every composition component) draws from its own ChaCha20 stream: the key is
//! expanded from `seed`, the 64-bit stream number is a SplitMix64 hash of the
//! function id, the dimension and a purpose path.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::catalog::{FunctionId, Recipe, TransformSpec, SHIFT_BOUND};
use crate::error::{Error, Result};
use crate::hybrid;
use crate::real::{dot, Real};

/// Residual gate for orthonormality checks.
pub const ORTHONORMAL_TOL: f64 = 1e-10;
/// A column whose residual norm falls below this is treated as linearly dependent.
pub const RANK_TOL: f64 = 1e-12;

const TAG_SHIFT: u64 = 1;
const TAG_GROUPING: u64 = 2;
const TAG_BLOCK: u64 = 3;
const TAG_COMPONENT: u64 = 4;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives independent RNG streams for one instance.
#[derive(Debug, Clone)]
struct Streams {
    seed: u64,
    function: FunctionId,
    dim: usize,
    prefix: Vec<u64>,
}

impl Streams {
    fn new(function: FunctionId, dim: usize, seed: u64) -> Self {
        Streams {
            seed,
            function,
            dim,
            prefix: Vec::new(),
        }
    }

    fn child(&self, tag: u64, index: u64) -> Self {
        let mut prefix = self.prefix.clone();
        prefix.extend([tag, index]);
        Streams {
            prefix,
            ..self.clone()
        }
    }

    fn rng(&self, tag: u64, index: u64) -> ChaCha20Rng {
        let mut h = splitmix64(self.function.index() as u64);
        h = splitmix64(h ^ self.dim as u64);
        for &p in self.prefix.iter().chain([tag, index].iter()) {
            h = splitmix64(h ^ p);
        }
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(h);
        rng
    }
}

/// Standard normal draw via Box-Muller; uses `libm` so the bits do not depend on
/// the platform math library.
fn standard_normal(rng: &mut impl Rng) -> f64 {
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * std::f64::consts::PI * u2)
}

fn uniform_shift(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|_| rng.random_range(-SHIFT_BOUND..=SHIFT_BOUND))
        .collect()
}

fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Matrix { n, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n).map(|r| dot(self.row(r), v)).collect()
    }

    /// max |MᵀM − I| over all entries.
    pub fn orthonormality_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += self[(k, i)] * self[(k, j)];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.n + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.n + c]
    }
}

/// Orthonormalizes the columns of `raw` with modified Gram-Schmidt plus one
/// re-orthogonalization pass.
///
/// Returns [`Error::RankDeficient`] when a column's residual norm drops below
/// [`RANK_TOL`]; callers redraw the random matrix.
pub fn gram_schmidt(raw: &Matrix) -> Result<Matrix> {
    let n = raw.size();
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|c| (0..n).map(|r| raw[(r, c)]).collect())
        .collect();
    for j in 0..n {
        let (done, rest) = cols.split_at_mut(j);
        let v = &mut rest[0];
        for _pass in 0..2 {
            for q in done.iter() {
                let proj: f64 = q.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm.is_nan() || norm < RANK_TOL {
            return Err(Error::RankDeficient);
        }
        v.iter_mut().for_each(|x| *x /= norm);
    }
    let mut q = Matrix::zeros(n);
    for (c, col) in cols.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            q[(r, c)] = v;
        }
    }
    Ok(q)
}

fn random_orthogonal(rng: &mut impl Rng, n: usize) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| standard_normal(rng)).collect();
        let raw = Matrix { n, data };
        if let Ok(q) = gram_schmidt(&raw) {
            return q;
        }
    }
}

/// Sizes of the three variable groups: ⌈D/3⌉, ⌈(D−⌈D/3⌉)/2⌉ and the rest.
/// Empty groups (only possible for D = 2) are dropped.
pub fn rotation_block_sizes(dim: usize) -> Vec<usize> {
    let first = dim.div_ceil(3);
    let second = (dim - first).div_ceil(2);
    let third = dim - first - second;
    [first, second, third]
        .into_iter()
        .filter(|&s| s > 0)
        .collect()
}

/// Orthogonal matrix that is block-diagonal after a permutation of the variables.
///
/// Group `k` holds the variables `permutation[offset_k .. offset_k + sizes[k]]`
/// and is rotated by `blocks[k]`. The dense equivalent is kept alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockRotation {
    permutation: Vec<usize>,
    sizes: Vec<usize>,
    blocks: Vec<Matrix>,
    dense: Matrix,
}

impl BlockRotation {
    pub fn from_parts(
        permutation: Vec<usize>,
        sizes: Vec<usize>,
        blocks: Vec<Matrix>,
    ) -> Result<Self> {
        let dim = permutation.len();
        if !is_permutation(&permutation) {
            return Err(Error::CorruptInstance(
                "permutation is not a bijection".into(),
            ));
        }
        if sizes.len() != blocks.len() || sizes.iter().sum::<usize>() != dim || sizes.contains(&0) {
            return Err(Error::CorruptInstance(
                "block sizes do not partition the dimension".into(),
            ));
        }
        let mut dense = Matrix::zeros(dim);
        let mut offset = 0;
        for (&size, block) in sizes.iter().zip(&blocks) {
            if block.size() != size {
                return Err(Error::CorruptInstance(format!(
                    "block of size {} declared as {size}",
                    block.size()
                )));
            }
            let idx = &permutation[offset..offset + size];
            for i in 0..size {
                for j in 0..size {
                    dense[(idx[i], idx[j])] = block[(i, j)];
                }
            }
            offset += size;
        }
        Ok(BlockRotation {
            permutation,
            sizes,
            blocks,
            dense,
        })
    }

    fn generate(streams: &Streams, sizes: Vec<usize>) -> Self {
        let dim = sizes.iter().sum();
        let permutation = random_permutation(&mut streams.rng(TAG_GROUPING, 0), dim);
        let blocks = sizes
            .iter()
            .enumerate()
            .map(|(k, &s)| random_orthogonal(&mut streams.rng(TAG_BLOCK, k as u64), s))
            .collect();
        BlockRotation::from_parts(permutation, sizes, blocks)
            .expect("generated rotation is well formed")
    }

    pub fn dim(&self) -> usize {
        self.permutation.len()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    /// The full D×D rotation.
    pub fn matrix(&self) -> &Matrix {
        &self.dense
    }

    /// Variable indices of group `k`, in block order.
    pub fn group(&self, k: usize) -> &[usize] {
        let offset: usize = self.sizes[..k].iter().sum();
        &self.permutation[offset..offset + self.sizes[k]]
    }

    /// Worst orthonormality residual over all blocks.
    pub fn residual(&self) -> f64 {
        self.blocks
            .iter()
            .map(Matrix::orthonormality_residual)
            .fold(0.0, f64::max)
    }
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &i in p {
        if i >= p.len() || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// How an instance's random data is laid out.
#[derive(Debug, Clone, PartialEq)]
pub enum Structure {
    /// Rotation of a basic function (three groups).
    Basic(BlockRotation),
    /// Variable split of a hybrid: group `k` feeds component `k`, rotated by its block.
    Hybrid(BlockRotation),
    /// One sub-instance per component; each sub-instance's shift is that component's optimum.
    Composition(Vec<Instance>),
}

/// All random data defining one concrete function.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub function: FunctionId,
    pub dim: usize,
    pub seed: u64,
    /// Location of the optimum (for compositions, the first component's optimum).
    pub shift: Vec<f64>,
    pub structure: Structure,
}

impl Instance {
    pub fn rotation(&self) -> Option<&BlockRotation> {
        match &self.structure {
            Structure::Basic(r) => Some(r),
            _ => None,
        }
    }

    pub fn hybrid_layout(&self) -> Option<&BlockRotation> {
        match &self.structure {
            Structure::Hybrid(r) => Some(r),
            _ => None,
        }
    }

    pub fn components(&self) -> &[Instance] {
        match &self.structure {
            Structure::Composition(c) => c,
            _ => &[],
        }
    }

    pub fn component_optima(&self) -> Option<Vec<&[f64]>> {
        match &self.structure {
            Structure::Composition(c) => Some(c.iter().map(|i| i.shift.as_slice()).collect()),
            _ => None,
        }
    }

    /// Checks every structural invariant: orthonormal blocks, bijective
    /// permutations, consistent sizes and a layout matching the catalog.
    pub fn validate(&self) -> Result<()> {
        let corrupt = |m: String| Err(Error::CorruptInstance(m));
        if self.shift.len() != self.dim {
            return corrupt(format!(
                "shift has {} entries, dim is {}",
                self.shift.len(),
                self.dim
            ));
        }
        if self.shift.iter().any(|v| !v.is_finite()) {
            return corrupt("non-finite shift".into());
        }
        let check_rotation = |r: &BlockRotation| -> Result<()> {
            if r.dim() != self.dim {
                return Err(Error::CorruptInstance("rotation dimension mismatch".into()));
            }
            let res = r.residual();
            if res.is_nan() || res >= ORTHONORMAL_TOL {
                return Err(Error::CorruptInstance(format!(
                    "rotation not orthonormal (residual {res:e})"
                )));
            }
            Ok(())
        };
        match (&self.function.entry().recipe, &self.structure) {
            (Recipe::Basic { .. }, Structure::Basic(r)) => {
                check_rotation(r)?;
                if r.sizes() != rotation_block_sizes(self.dim) {
                    return corrupt("rotation groups do not match the dimension".into());
                }
                Ok(())
            }
            (Recipe::Hybrid(h), Structure::Hybrid(r)) => {
                check_rotation(r)?;
                if r.sizes() != hybrid::partition(self.function, h, self.dim)? {
                    return corrupt("hybrid split does not match recipe".into());
                }
                Ok(())
            }
            (Recipe::Composition(c), Structure::Composition(parts)) => {
                if parts.len() != c.components.len() {
                    return corrupt("composition component count does not match recipe".into());
                }
                for (part, &id) in parts.iter().zip(c.components) {
                    if part.function != id || part.dim != self.dim {
                        return corrupt(format!(
                            "component {} does not match recipe",
                            part.function
                        ));
                    }
                    part.validate()?;
                }
                if parts[0].shift != self.shift {
                    return corrupt(
                        "composition shift differs from first component optimum".into(),
                    );
                }
                Ok(())
            }
            _ => corrupt(format!(
                "structure does not match recipe of {}",
                self.function
            )),
        }
    }
}

/// Generates the instance of `function` at `dim` for `seed`.
pub fn generate_instance(function: FunctionId, dim: usize, seed: u64) -> Result<Instance> {
    let min = function.min_dim();
    if dim < min {
        return Err(Error::DimensionTooSmall { function, dim, min });
    }
    build(
        function,
        dim,
        seed,
        &Streams::new(function, dim, seed),
        None,
    )
}

fn build(
    function: FunctionId,
    dim: usize,
    seed: u64,
    streams: &Streams,
    forced_shift: Option<Vec<f64>>,
) -> Result<Instance> {
    let shift = || {
        forced_shift
            .clone()
            .unwrap_or_else(|| uniform_shift(&mut streams.rng(TAG_SHIFT, 0), dim))
    };
    let (shift, structure) = match &function.entry().recipe {
        Recipe::Basic { .. } => (
            shift(),
            Structure::Basic(BlockRotation::generate(streams, rotation_block_sizes(dim))),
        ),
        Recipe::Hybrid(recipe) => {
            let sizes = hybrid::partition(function, recipe, dim)?;
            (
                shift(),
                Structure::Hybrid(BlockRotation::generate(streams, sizes)),
            )
        }
        Recipe::Composition(recipe) => {
            let mut parts = Vec::with_capacity(recipe.components.len());
            for (i, &component) in recipe.components.iter().enumerate() {
                // The third component's optimum sits at the origin.
                let forced = (i == 2).then(|| vec![0.0; dim]);
                let child = streams.child(TAG_COMPONENT, i as u64);
                parts.push(build(component, dim, seed, &child, forced)?);
            }
            (parts[0].shift.clone(), Structure::Composition(parts))
        }
    };
    Ok(Instance {
        function,
        dim,
        seed,
        shift,
        structure,
    })
}

/// z = R(scale·(x − shift) + pre) + post, with R = I for unrotated transforms.
///
/// `rotation` is a row-major D×D matrix; `scratch` and `out` have length D.
#[inline]
#[allow(clippy::too_many_arguments)]
pub(crate) fn transform_into<T: Real>(
    x: &[T],
    shift: &[T],
    scale: T,
    pre: T,
    post: T,
    rotation: Option<&[T]>,
    scratch: &mut [T],
    out: &mut [T],
) {
    let d = x.len();
    match rotation {
        Some(r) => {
            for i in 0..d {
                scratch[i] = scale * (x[i] - shift[i]) + pre;
            }
            for (row, o) in r.chunks_exact(d).zip(out.iter_mut()) {
                *o = dot(row, scratch) + post;
            }
        }
        None => {
            for i in 0..d {
                out[i] = scale * (x[i] - shift[i]) + pre + post;
            }
        }
    }
}

/// Applies a basic function's input transform to `x`.
pub fn apply_transform(x: &[f64], inst: &Instance, spec: &TransformSpec) -> Result<Vec<f64>> {
    if x.len() != inst.dim {
        return Err(Error::DimensionMismatch {
            expected: inst.dim,
            found: x.len(),
        });
    }
    let rotation = inst.rotation().ok_or_else(|| {
        Error::InvalidConfig(format!("{} has no single input rotation", inst.function))
    })?;
    let mut scratch = vec![0.0; x.len()];
    let mut out = vec![0.0; x.len()];
    transform_into(
        x,
        &inst.shift,
        spec.scale,
        spec.pre_offset,
        spec.post_offset,
        spec.rotate.then(|| rotation.matrix().as_slice()),
        &mut scratch,
        &mut out,
    );
    Ok(out)
}
