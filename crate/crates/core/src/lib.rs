//! A suite of 37 shifted and rotated real-parameter test functions on
//! `[-100, 100]^D`, with hybrid and composition constructions, a batch
//! evaluation engine in single and double precision, text persistence and a
//! throughput harness.
//!
//! ```
//! use realbench::{Engine, EngineConfig, FunctionId};
//!
//! let engine = Engine::initialize(EngineConfig::new(10, 50, 1)).unwrap();
//! let optimum = engine.instance(FunctionId::Sphere).unwrap().shift.clone();
//! assert_eq!(engine.evaluate_double(FunctionId::Sphere, &optimum).unwrap(), vec![100.0]);
//! ```

pub mod bench;
pub mod catalog;
pub mod composition;
pub mod engine;
pub mod error;
pub mod hybrid;
pub mod io;
pub mod kernels;
mod plan;
pub mod real;
pub mod transforms;

pub use catalog::{lookup, Category, FunctionId, CEC14_SUBSET, F_OPT};
pub use engine::{Engine, EngineConfig, EvalResult, PointBatch, Points, Precision, Values};
pub use error::{Error, Result};
pub use kernels::Kernel;
pub use real::Real;
pub use transforms::{generate_instance, Instance};
