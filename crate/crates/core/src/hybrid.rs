//! Hybrid functions: the shifted variables are permuted, split into parts by
//! percentage, and every part is fed to a different basic function with its
//! own scaling and rotation. The part values are summed.

use crate::catalog::{FunctionId, HybridRecipe, Recipe, HYBRID_MIN_DIM};
use crate::error::{Error, Result};
use crate::kernels::Prepared;
use crate::plan::cast;
use crate::real::Real;
use crate::transforms::{generate_instance, transform_into, BlockRotation, Instance, Matrix};

/// Part sizes: `n_i = ⌈p_i·D⌉` for all but the last part, which takes the rest.
///
/// When the ceilings leave nothing for the last part (H5/H6 at D = 11), one
/// variable is moved to it from the largest earlier part (the later one on ties).
pub fn partition(function: FunctionId, recipe: &HybridRecipe, dim: usize) -> Result<Vec<usize>> {
    let too_small = || Error::DimensionTooSmall {
        function,
        dim,
        min: HYBRID_MIN_DIM,
    };
    if dim < HYBRID_MIN_DIM {
        return Err(too_small());
    }
    let (head, _) = recipe.percentages.split_at(recipe.percentages.len() - 1);
    let mut sizes: Vec<usize> = head
        .iter()
        .map(|&p| (p as usize * dim).div_ceil(100))
        .collect();
    let mut used: usize = sizes.iter().sum();
    while used >= dim {
        let donor = (0..sizes.len())
            .filter(|&i| sizes[i] > 1)
            .max_by_key(|&i| (sizes[i], i))
            .ok_or_else(too_small)?;
        sizes[donor] -= 1;
        used -= 1;
    }
    sizes.push(dim - used);
    Ok(sizes)
}

/// A hybrid function bound to concrete random data.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridSpec {
    pub function: FunctionId,
    pub fractions: Vec<f64>,
    pub components: Vec<FunctionId>,
    /// Permutation, part sizes and the per-part rotations.
    pub layout: BlockRotation,
}

impl HybridSpec {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn sizes(&self) -> &[usize] {
        self.layout.sizes()
    }

    pub fn permutation(&self) -> &[usize] {
        self.layout.permutation()
    }

    pub fn block_rotations(&self) -> &[Matrix] {
        self.layout.blocks()
    }

    pub fn from_instance(inst: &Instance) -> Result<Self> {
        let (Recipe::Hybrid(recipe), Some(layout)) =
            (&inst.function.entry().recipe, inst.hybrid_layout())
        else {
            return Err(Error::InvalidConfig(format!(
                "{} is not a hybrid instance",
                inst.function
            )));
        };
        Ok(HybridSpec {
            function: inst.function,
            fractions: recipe.fractions(),
            components: recipe.components.to_vec(),
            layout: layout.clone(),
        })
    }
}

pub fn build_hybrid(function: FunctionId, dim: usize, seed: u64) -> Result<HybridSpec> {
    if !matches!(function.entry().recipe, Recipe::Hybrid(_)) {
        return Err(Error::InvalidConfig(format!(
            "{function} is not a hybrid function"
        )));
    }
    HybridSpec::from_instance(&generate_instance(function, dim, seed)?)
}

/// Hybrid value at `x` without the `F_OPT` bias.
pub fn eval_hybrid(spec: &HybridSpec, x: &[f64], inst: &Instance) -> Result<f64> {
    if x.len() != inst.dim || spec.layout.dim() != inst.dim {
        return Err(Error::DimensionMismatch {
            expected: inst.dim,
            found: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    Ok(HybridPlan::new(&inst.shift, spec).eval(x))
}

#[derive(Debug, Clone)]
struct Part<T> {
    kernel: Prepared<T>,
    indices: Vec<usize>,
    scale: T,
    pre: T,
    post: T,
    rotation: Vec<T>,
}

#[derive(Debug, Clone)]
pub(crate) struct HybridPlan<T> {
    shift: Vec<T>,
    parts: Vec<Part<T>>,
    widest: usize,
}

impl<T: Real> HybridPlan<T> {
    pub(crate) fn new(shift: &[f64], spec: &HybridSpec) -> Self {
        let parts: Vec<Part<T>> = spec
            .components
            .iter()
            .enumerate()
            .map(|(k, id)| {
                let entry = id.entry();
                let t = entry.transform().expect("hybrid parts are basic functions");
                let indices = spec.layout.group(k).to_vec();
                Part {
                    kernel: entry.kernel().unwrap().prepare(indices.len()),
                    indices,
                    scale: T::lit(t.scale),
                    pre: T::lit(t.pre_offset),
                    post: T::lit(t.post_offset),
                    rotation: cast(spec.layout.blocks()[k].as_slice()),
                }
            })
            .collect();
        let widest = parts.iter().map(|p| p.indices.len()).max().unwrap_or(0);
        HybridPlan {
            shift: cast(shift),
            parts,
            widest,
        }
    }

    pub(crate) fn eval(&self, x: &[T]) -> T {
        let w = self.widest;
        let mut buf = vec![T::zero(); 4 * w];
        let (xs, rest) = buf.split_at_mut(w);
        let (ss, rest) = rest.split_at_mut(w);
        let (scratch, z) = rest.split_at_mut(w);
        let mut total = T::zero();
        for part in &self.parts {
            let n = part.indices.len();
            for (j, &idx) in part.indices.iter().enumerate() {
                xs[j] = x[idx];
                ss[j] = self.shift[idx];
            }
            transform_into(
                &xs[..n],
                &ss[..n],
                part.scale,
                part.pre,
                part.post,
                Some(&part.rotation),
                &mut scratch[..n],
                &mut z[..n],
            );
            total = total + part.kernel.eval(&z[..n]);
        }
        total
    }
}
