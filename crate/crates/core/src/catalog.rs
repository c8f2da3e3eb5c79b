//! Static registry of the 37 suite functions.
//!
//! Every entry is keyed by its table number (0..=36). Basic functions carry the
//! kernel and the input transform that maps the search domain onto the
//! kernel's natural domain; hybrid and composition entries carry the recipe
//! they are assembled from.

use std::fmt;

use crate::error::{Error, Result};
use crate::kernels::Kernel;

/// Lower bound of every coordinate of the search domain.
pub const SEARCH_LOWER: f64 = -100.0;
/// Upper bound of every coordinate of the search domain.
pub const SEARCH_UPPER: f64 = 100.0;
/// Constant added to every function so that the global minimum value is 100.
pub const F_OPT: f64 = 100.0;
/// Shift vectors are drawn uniformly from `[-SHIFT_BOUND, SHIFT_BOUND]^D`.
pub const SHIFT_BOUND: f64 = 70.0;
/// Smallest dimension that admits a hybrid split.
pub const HYBRID_MIN_DIM: usize = 10;
/// Smallest dimension any function accepts.
pub const MIN_DIM: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Unimodal,
    BasicMultimodal,
    Hybrid,
    Composition,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Unimodal => "unimodal",
            Category::BasicMultimodal => "basic-multimodal",
            Category::Hybrid => "hybrid",
            Category::Composition => "composition",
        })
    }
}

macro_rules! function_ids {
    ($($variant:ident = $idx:literal => $name:literal,)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        #[repr(u8)]
        pub enum FunctionId {
            $($variant = $idx,)*
        }

        impl FunctionId {
            pub const ALL: [FunctionId; 37] = [$(FunctionId::$variant,)*];

            /// Symbolic identifier, e.g. `SPHERE` or `HYBRID1`.
            pub fn name(self) -> &'static str {
                match self {
                    $(FunctionId::$variant => $name,)*
                }
            }
        }
    };
}

function_ids! {
    Sphere = 0 => "SPHERE",
    Ellipsoid = 1 => "ELLIPSOID",
    Elliptic = 2 => "ELLIPTIC",
    Discus = 3 => "DISCUS",
    Cigar = 4 => "CIGAR",
    Powers = 5 => "POWERS",
    SharpValley = 6 => "SHARPV",
    Step = 7 => "STEP",
    Weierstrass = 8 => "WEIERSTRASS",
    Griewank = 9 => "GRIEWANK",
    RastriginUnrotated = 10 => "RARSTRIGIN_U",
    Rastrigin = 11 => "RARSTRIGIN",
    SchafferF7 = 12 => "SCHAFFERSF7",
    GriewankRosenbrock = 13 => "GRIE_ROSEN",
    Rosenbrock = 14 => "ROSENBROCK",
    SchwefelUnrotated = 15 => "SCHWEFEL_U",
    Schwefel = 16 => "SCHWEFEL",
    Katsuura = 17 => "KATSUURA",
    Lunacek = 18 => "LUNACEK",
    Ackley = 19 => "ACKLEY",
    HappyCat = 20 => "HAPPYCAT",
    HgBat = 21 => "HGBAT",
    SchafferF6 = 22 => "SCHAFFERSF6",
    Hybrid1 = 23 => "HYBRID1",
    Hybrid2 = 24 => "HYBRID2",
    Hybrid3 = 25 => "HYBRID3",
    Hybrid4 = 26 => "HYBRID4",
    Hybrid5 = 27 => "HYBRID5",
    Hybrid6 = 28 => "HYBRID6",
    Composition1 = 29 => "COMPOSITION1",
    Composition2 = 30 => "COMPOSITION2",
    Composition3 = 31 => "COMPOSITION3",
    Composition4 = 32 => "COMPOSITION4",
    Composition5 = 33 => "COMPOSITION5",
    Composition6 = 34 => "COMPOSITION6",
    Composition7 = 35 => "COMPOSITION7",
    Composition8 = 36 => "COMPOSITION8",
}

/// The 30 ids shared with the CEC 2014 suite; the set used by the throughput protocol.
pub const CEC14_SUBSET: [usize; 30] = [
    3, 4, 5, 8, 9, 10, 11, 13, 14, 15, 16, 17, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30, 31,
    32, 33, 34, 35, 36,
];

impl FunctionId {
    pub fn from_index(index: usize) -> Result<Self> {
        FunctionId::ALL
            .get(index)
            .copied()
            .ok_or(Error::UnknownFunction(index))
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn category(self) -> Category {
        match self.index() {
            0..=6 => Category::Unimodal,
            7..=22 => Category::BasicMultimodal,
            23..=28 => Category::Hybrid,
            _ => Category::Composition,
        }
    }

    pub fn is_basic(self) -> bool {
        matches!(
            self.category(),
            Category::Unimodal | Category::BasicMultimodal
        )
    }

    /// True for hybrids and for compositions built from hybrids.
    pub fn needs_hybrid_split(self) -> bool {
        match &self.entry().recipe {
            Recipe::Basic { .. } => false,
            Recipe::Hybrid(_) => true,
            Recipe::Composition(c) => c.components.iter().any(|c| c.needs_hybrid_split()),
        }
    }

    /// Smallest dimension this function can be instantiated at.
    pub fn min_dim(self) -> usize {
        if self.needs_hybrid_split() {
            HYBRID_MIN_DIM
        } else {
            MIN_DIM
        }
    }

    pub fn entry(self) -> &'static CatalogEntry {
        &CATALOG[self.index()]
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name(), self.index())
    }
}

/// Input transform of a basic function: `z = R(scale * (x - x_opt) + pre) + post`,
/// with the offsets applied to every coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSpec {
    pub scale: f64,
    pub rotate: bool,
    pub pre_offset: f64,
    pub post_offset: f64,
}

impl TransformSpec {
    const fn rotated(scale: f64) -> Self {
        TransformSpec {
            scale,
            rotate: true,
            pre_offset: 0.0,
            post_offset: 0.0,
        }
    }

    const fn unrotated(scale: f64) -> Self {
        TransformSpec {
            scale,
            rotate: false,
            pre_offset: 0.0,
            post_offset: 0.0,
        }
    }

    const fn post(self, post_offset: f64) -> Self {
        TransformSpec {
            post_offset,
            ..self
        }
    }

    const fn pre(self, pre_offset: f64) -> Self {
        TransformSpec { pre_offset, ..self }
    }
}

/// Variables are permuted and split by percentage; each part goes to a different basic function.
#[derive(Debug, PartialEq)]
pub struct HybridRecipe {
    /// Share of the variables per component, in percent. Sums to 100.
    pub percentages: &'static [u32],
    pub components: &'static [FunctionId],
}

impl HybridRecipe {
    pub fn fractions(&self) -> Vec<f64> {
        self.percentages.iter().map(|&p| p as f64 / 100.0).collect()
    }
}

#[derive(Debug, PartialEq)]
pub struct CompositionRecipe {
    pub sigma: &'static [f64],
    pub lambda: &'static [f64],
    pub bias: &'static [f64],
    pub components: &'static [FunctionId],
}

#[derive(Debug, PartialEq)]
pub enum Recipe {
    Basic {
        kernel: Kernel,
        transform: TransformSpec,
    },
    Hybrid(HybridRecipe),
    Composition(CompositionRecipe),
}

#[derive(Debug, PartialEq)]
pub struct CatalogEntry {
    pub id: FunctionId,
    pub title: &'static str,
    /// Free-text landscape note.
    pub note: &'static str,
    pub recipe: Recipe,
}

impl CatalogEntry {
    pub fn transform(&self) -> Option<&TransformSpec> {
        match &self.recipe {
            Recipe::Basic { transform, .. } => Some(transform),
            _ => None,
        }
    }

    pub fn kernel(&self) -> Option<Kernel> {
        match &self.recipe {
            Recipe::Basic { kernel, .. } => Some(*kernel),
            _ => None,
        }
    }
}

/// Looks up the catalog row for a numeric id.
pub fn lookup(id: usize) -> Result<&'static CatalogEntry> {
    FunctionId::from_index(id).map(FunctionId::entry)
}

const EASY: &str = "optimum easy to track";
const HARD: &str = "optimum hard to track";
const ADEQUATE: &str = "adequate global structure";
const WEAK: &str = "weak global structure";
const HYBRID: &str = "subsets of variables see different basic functions";
const COMPOSED: &str = "resembles the nearest component close to its optimum";

use FunctionId as F;

const fn basic(
    id: FunctionId,
    title: &'static str,
    note: &'static str,
    kernel: Kernel,
    transform: TransformSpec,
) -> CatalogEntry {
    CatalogEntry {
        id,
        title,
        note,
        recipe: Recipe::Basic { kernel, transform },
    }
}

const fn hybrid(
    id: FunctionId,
    title: &'static str,
    percentages: &'static [u32],
    components: &'static [FunctionId],
) -> CatalogEntry {
    CatalogEntry {
        id,
        title,
        note: HYBRID,
        recipe: Recipe::Hybrid(HybridRecipe {
            percentages,
            components,
        }),
    }
}

const fn composition(
    id: FunctionId,
    title: &'static str,
    sigma: &'static [f64],
    lambda: &'static [f64],
    bias: &'static [f64],
    components: &'static [FunctionId],
) -> CatalogEntry {
    CatalogEntry {
        id,
        title,
        note: COMPOSED,
        recipe: Recipe::Composition(CompositionRecipe {
            sigma,
            lambda,
            bias,
            components,
        }),
    }
}

const BIAS3: &[f64] = &[0.0, 100.0, 200.0];
const BIAS5: &[f64] = &[0.0, 100.0, 200.0, 300.0, 400.0];

static CATALOG: [CatalogEntry; 37] = [
    basic(
        F::Sphere,
        "Rotated Sphere",
        EASY,
        Kernel::Sphere,
        TransformSpec::rotated(1.0),
    ),
    basic(
        F::Ellipsoid,
        "Rotated Ellipsoid",
        EASY,
        Kernel::Ellipsoid,
        TransformSpec::rotated(1.0),
    ),
    basic(
        F::Elliptic,
        "Rotated Elliptic",
        HARD,
        Kernel::Elliptic,
        TransformSpec::rotated(1.0),
    ),
    basic(
        F::Discus,
        "Rotated Discus",
        HARD,
        Kernel::Discus,
        TransformSpec::rotated(1.0),
    ),
    basic(
        F::Cigar,
        "Rotated Bent Cigar",
        HARD,
        Kernel::Cigar,
        TransformSpec::rotated(1.0),
    ),
    basic(
        F::Powers,
        "Rotated Different Powers",
        HARD,
        Kernel::Powers,
        TransformSpec::rotated(0.01),
    ),
    basic(
        F::SharpValley,
        "Rotated Sharp Valley",
        HARD,
        Kernel::SharpValley,
        TransformSpec::rotated(1.0),
    ),
    basic(
        F::Step,
        "Rotated Step",
        ADEQUATE,
        Kernel::Step,
        TransformSpec::rotated(1.0),
    ),
    basic(
        F::Weierstrass,
        "Rotated Weierstrass",
        ADEQUATE,
        Kernel::Weierstrass,
        TransformSpec::rotated(0.005),
    ),
    basic(
        F::Griewank,
        "Rotated Griewank",
        ADEQUATE,
        Kernel::Griewank,
        TransformSpec::rotated(6.0),
    ),
    basic(
        F::RastriginUnrotated,
        "Rastrigin",
        ADEQUATE,
        Kernel::Rastrigin,
        TransformSpec::unrotated(0.0512),
    ),
    basic(
        F::Rastrigin,
        "Rotated Rastrigin",
        ADEQUATE,
        Kernel::Rastrigin,
        TransformSpec::rotated(0.0512),
    ),
    basic(
        F::SchafferF7,
        "Rotated Schaffer's F7",
        ADEQUATE,
        Kernel::SchafferF7,
        TransformSpec::rotated(1.0),
    ),
    basic(
        F::GriewankRosenbrock,
        "Rotated Expanded Griewank plus Rosenbrock",
        ADEQUATE,
        Kernel::GriewankRosenbrock,
        TransformSpec::rotated(0.05).post(1.0),
    ),
    basic(
        F::Rosenbrock,
        "Rotated Rosenbrock",
        WEAK,
        Kernel::Rosenbrock,
        TransformSpec::rotated(0.02048).post(1.0),
    ),
    basic(
        F::SchwefelUnrotated,
        "Modified Schwefel",
        WEAK,
        Kernel::Schwefel,
        TransformSpec::unrotated(10.0),
    ),
    basic(
        F::Schwefel,
        "Rotated Modified Schwefel",
        WEAK,
        Kernel::Schwefel,
        TransformSpec::rotated(10.0),
    ),
    basic(
        F::Katsuura,
        "Rotated Katsuura",
        WEAK,
        Kernel::Katsuura,
        TransformSpec::rotated(0.05),
    ),
    basic(
        F::Lunacek,
        "Rotated Lunacek bi-Rastrigin",
        WEAK,
        Kernel::Lunacek,
        TransformSpec::rotated(0.1).pre(2.5),
    ),
    basic(
        F::Ackley,
        "Rotated Ackley",
        WEAK,
        Kernel::Ackley,
        TransformSpec::rotated(1.0),
    ),
    basic(
        F::HappyCat,
        "Rotated HappyCat",
        WEAK,
        Kernel::HappyCat,
        TransformSpec::rotated(0.05).post(-1.0),
    ),
    basic(
        F::HgBat,
        "Rotated HGBat",
        WEAK,
        Kernel::HgBat,
        TransformSpec::rotated(0.05).post(-1.0),
    ),
    basic(
        F::SchafferF6,
        "Rotated Expanded Schaffer's F6",
        WEAK,
        Kernel::SchafferF6,
        TransformSpec::rotated(1.0),
    ),
    hybrid(
        F::Hybrid1,
        "Hybrid Function 1",
        &[30, 30, 40],
        &[F::Schwefel, F::Rastrigin, F::Elliptic],
    ),
    hybrid(
        F::Hybrid2,
        "Hybrid Function 2",
        &[30, 30, 40],
        &[F::Cigar, F::HgBat, F::Rastrigin],
    ),
    hybrid(
        F::Hybrid3,
        "Hybrid Function 3",
        &[20, 20, 30, 30],
        &[F::Griewank, F::Weierstrass, F::Rosenbrock, F::SchafferF6],
    ),
    hybrid(
        F::Hybrid4,
        "Hybrid Function 4",
        &[20, 20, 30, 30],
        &[F::HgBat, F::Discus, F::GriewankRosenbrock, F::Rastrigin],
    ),
    hybrid(
        F::Hybrid5,
        "Hybrid Function 5",
        &[10, 20, 20, 20, 30],
        &[
            F::SchafferF6,
            F::HgBat,
            F::Rosenbrock,
            F::Schwefel,
            F::Elliptic,
        ],
    ),
    hybrid(
        F::Hybrid6,
        "Hybrid Function 6",
        &[10, 20, 20, 20, 30],
        &[
            F::Katsuura,
            F::HappyCat,
            F::GriewankRosenbrock,
            F::Schwefel,
            F::Ackley,
        ],
    ),
    composition(
        F::Composition1,
        "Composition Function 1",
        &[10.0, 20.0, 30.0, 40.0, 50.0],
        &[1e-10, 1e-6, 1e-26, 1e-6, 1e-6],
        BIAS5,
        &[F::Rosenbrock, F::Elliptic, F::Cigar, F::Discus, F::Elliptic],
    ),
    composition(
        F::Composition2,
        "Composition Function 2",
        &[15.0, 15.0, 15.0],
        &[1.0, 1.0, 1.0],
        BIAS3,
        &[F::Schwefel, F::Rastrigin, F::HgBat],
    ),
    composition(
        F::Composition3,
        "Composition Function 3",
        &[20.0, 50.0, 40.0],
        &[0.25, 1.0, 1e-7],
        BIAS3,
        &[F::Schwefel, F::Rastrigin, F::Elliptic],
    ),
    composition(
        F::Composition4,
        "Composition Function 4",
        &[20.0, 15.0, 10.0, 10.0, 40.0],
        &[2.5e-2, 0.1, 1e-8, 0.25, 1.0],
        BIAS5,
        &[
            F::Schwefel,
            F::HappyCat,
            F::Elliptic,
            F::Weierstrass,
            F::Griewank,
        ],
    ),
    composition(
        F::Composition5,
        "Composition Function 5",
        &[15.0, 15.0, 15.0, 15.0, 15.0],
        &[10.0, 10.0, 2.5, 2.5, 1e-6],
        BIAS5,
        &[
            F::HgBat,
            F::Rastrigin,
            F::Elliptic,
            F::Weierstrass,
            F::Schwefel,
        ],
    ),
    composition(
        F::Composition6,
        "Composition Function 6",
        &[10.0, 20.0, 30.0, 40.0, 50.0],
        &[2.5, 10.0, 2.5, 5e-4, 1e-6],
        BIAS5,
        &[
            F::GriewankRosenbrock,
            F::HappyCat,
            F::Schwefel,
            F::SchafferF6,
            F::Elliptic,
        ],
    ),
    composition(
        F::Composition7,
        "Composition Function 7",
        &[10.0, 30.0, 50.0],
        &[1.0, 1.0, 1.0],
        BIAS3,
        &[F::Hybrid1, F::Hybrid2, F::Hybrid3],
    ),
    composition(
        F::Composition8,
        "Composition Function 8",
        &[10.0, 30.0, 50.0],
        &[1.0, 1.0, 1.0],
        BIAS3,
        &[F::Hybrid4, F::Hybrid5, F::Hybrid6],
    ),
];
