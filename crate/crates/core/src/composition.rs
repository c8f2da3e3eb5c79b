//! Composition functions: a distance-weighted blend of shifted component
//! functions, `F(x) = Σ ω_i (λ_i G_i(x) + bias_i)`.
//!
//! Raw weights are `w_i = exp(-d_i² / (2 D σ_i²)) / d_i` with `d_i` the
//! distance to component `i`'s optimum. They are normalized in log space, so
//! the blend stays defined even where every raw weight underflows. At a
//! component optimum the weights collapse to the indicator of that component.

use crate::catalog::{FunctionId, Recipe};
use crate::error::{Error, Result};
use crate::plan::{cast, Plan};
use crate::real::Real;
use crate::transforms::{generate_instance, Instance};

/// Distances below this count as sitting exactly on a component optimum.
pub const COINCIDENCE_DISTANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CompositionSpec {
    pub function: FunctionId,
    pub sigma: Vec<f64>,
    pub lambda: Vec<f64>,
    pub bias: Vec<f64>,
    pub components: Vec<FunctionId>,
    pub optima: Vec<Vec<f64>>,
}

impl CompositionSpec {
    pub fn from_instance(inst: &Instance) -> Result<Self> {
        let Recipe::Composition(recipe) = &inst.function.entry().recipe else {
            return Err(Error::InvalidConfig(format!(
                "{} is not a composition",
                inst.function
            )));
        };
        Ok(CompositionSpec {
            function: inst.function,
            sigma: recipe.sigma.to_vec(),
            lambda: recipe.lambda.to_vec(),
            bias: recipe.bias.to_vec(),
            components: recipe.components.to_vec(),
            optima: inst.components().iter().map(|c| c.shift.clone()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

pub fn build_composition(function: FunctionId, dim: usize, seed: u64) -> Result<CompositionSpec> {
    CompositionSpec::from_instance(&generate_instance(function, dim, seed)?)
}

/// Normalized blend weights; sums to one.
pub(crate) fn weights_into<T: Real>(x: &[T], optima: &[Vec<T>], spread: &[T], out: &mut [T]) {
    let mut nearest = 0;
    let mut nearest_d2 = T::infinity();
    for (i, opt) in optima.iter().enumerate() {
        let d2 = x
            .iter()
            .zip(opt)
            .fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b));
        if d2 < nearest_d2 {
            nearest_d2 = d2;
            nearest = i;
        }
        // log w_i, with spread_i = 2 D σ_i²
        out[i] = -T::lit(0.5) * d2.ln() - d2 / spread[i];
    }
    let tiny = T::lit(COINCIDENCE_DISTANCE);
    if nearest_d2 < tiny * tiny {
        out.iter_mut().for_each(|w| *w = T::zero());
        out[nearest] = T::one();
        return;
    }
    let max = out.iter().copied().fold(T::neg_infinity(), T::max);
    let mut total = T::zero();
    for w in out.iter_mut() {
        *w = (*w - max).exp();
        total = total + *w;
    }
    out.iter_mut().for_each(|w| *w = *w / total);
}

/// Normalized weights ω of `x` against the component optima.
pub fn composition_weights(
    x: &[f64],
    spec: &CompositionSpec,
    optima: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let dim = x.len();
    if let Some(bad) = optima.iter().find(|o| o.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: bad.len(),
            found: dim,
        });
    }
    if optima.len() != spec.len() {
        return Err(Error::InvalidConfig(
            "optima count differs from component count".into(),
        ));
    }
    let spread = spreads::<f64>(&spec.sigma, dim);
    let mut out = vec![0.0; spec.len()];
    weights_into(x, optima, &spread, &mut out);
    Ok(out)
}

fn spreads<T: Real>(sigma: &[f64], dim: usize) -> Vec<T> {
    sigma
        .iter()
        .map(|&s| T::lit(2.0) * T::from_usize(dim) * T::lit(s) * T::lit(s))
        .collect()
}

/// Composition value at `x` without the `F_OPT` bias.
pub fn eval_composition(spec: &CompositionSpec, x: &[f64], inst: &Instance) -> Result<f64> {
    if x.len() != inst.dim {
        return Err(Error::DimensionMismatch {
            expected: inst.dim,
            found: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    if spec.function != inst.function {
        return Err(Error::InvalidConfig(
            "spec and instance describe different functions".into(),
        ));
    }
    Ok(CompositionPlan::new(inst)?.eval(x))
}

#[derive(Debug, Clone)]
struct Part<T> {
    lambda: T,
    bias: T,
    function: Plan<T>,
}

#[derive(Debug, Clone)]
pub(crate) struct CompositionPlan<T> {
    optima: Vec<Vec<T>>,
    spread: Vec<T>,
    parts: Vec<Part<T>>,
}

impl<T: Real> CompositionPlan<T> {
    pub(crate) fn new(inst: &Instance) -> Result<Self> {
        let spec = CompositionSpec::from_instance(inst)?;
        let parts = inst
            .components()
            .iter()
            .zip(spec.lambda.iter().zip(&spec.bias))
            .map(|(component, (&lambda, &bias))| {
                Ok(Part {
                    lambda: T::lit(lambda),
                    bias: T::lit(bias),
                    function: Plan::new(component)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CompositionPlan {
            optima: spec.optima.iter().map(|o| cast(o)).collect(),
            spread: spreads(&spec.sigma, inst.dim),
            parts,
        })
    }

    pub(crate) fn eval(&self, x: &[T]) -> T {
        let mut w = [T::zero(); 8];
        let n = self.parts.len();
        weights_into(x, &self.optima, &self.spread, &mut w[..n]);
        self.parts
            .iter()
            .zip(&w[..n])
            .fold(T::zero(), |acc, (part, &omega)| {
                acc + omega * (part.lambda * part.function.eval(x) + part.bias)
            })
    }
}
