//! Precision-specific evaluation plans compiled from an [`Instance`].

use crate::catalog::Recipe;
use crate::composition::CompositionPlan;
use crate::error::Result;
use crate::hybrid::{HybridPlan, HybridSpec};
use crate::kernels::Prepared;
use crate::real::Real;
use crate::transforms::{transform_into, Instance};

pub(crate) fn cast<T: Real>(v: &[f64]) -> Vec<T> {
    v.iter().map(|&x| T::lit(x)).collect()
}

#[derive(Debug, Clone)]
pub(crate) struct BasicPlan<T> {
    kernel: Prepared<T>,
    shift: Vec<T>,
    scale: T,
    pre: T,
    post: T,
    rotation: Option<Vec<T>>,
}

impl<T: Real> BasicPlan<T> {
    fn eval(&self, x: &[T]) -> T {
        let d = x.len();
        let mut buf = vec![T::zero(); 2 * d];
        let (scratch, z) = buf.split_at_mut(d);
        transform_into(
            x,
            &self.shift,
            self.scale,
            self.pre,
            self.post,
            self.rotation.as_deref(),
            scratch,
            z,
        );
        self.kernel.eval(z)
    }
}

/// Everything needed to evaluate one function in precision `T`, without the bias.
#[derive(Debug, Clone)]
pub(crate) enum Plan<T> {
    Basic(BasicPlan<T>),
    Hybrid(HybridPlan<T>),
    Composition(CompositionPlan<T>),
}

impl<T: Real> Plan<T> {
    pub(crate) fn new(inst: &Instance) -> Result<Self> {
        Ok(match &inst.function.entry().recipe {
            Recipe::Basic { kernel, transform } => {
                let rotation = inst
                    .rotation()
                    .filter(|_| transform.rotate)
                    .map(|r| cast(r.matrix().as_slice()));
                Plan::Basic(BasicPlan {
                    kernel: kernel.prepare(inst.dim),
                    shift: cast(&inst.shift),
                    scale: T::lit(transform.scale),
                    pre: T::lit(transform.pre_offset),
                    post: T::lit(transform.post_offset),
                    rotation,
                })
            }
            Recipe::Hybrid(_) => Plan::Hybrid(HybridPlan::new(
                &inst.shift,
                &HybridSpec::from_instance(inst)?,
            )),
            Recipe::Composition(_) => Plan::Composition(CompositionPlan::new(inst)?),
        })
    }

    #[inline]
    pub(crate) fn eval(&self, x: &[T]) -> T {
        match self {
            Plan::Basic(p) => p.eval(x),
            Plan::Hybrid(p) => p.eval(x),
            Plan::Composition(p) => p.eval(x),
        }
    }
}
