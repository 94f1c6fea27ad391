//! Exact welfare solvers, hardness gadget generators and structural checkers
//! for fair division with ternary (three-valued) valuations.

pub mod analysis;
pub mod error;
pub mod format;
pub mod model;
pub mod reductions;
pub mod regime;
pub mod solvers;
pub mod welfare;

pub use error::{Error, Result};
pub use model::{
    evaluate_allocation, validate_instance, AdditiveProfile, Allocation, Diagnostic, Instance, Oracle, SetFunction,
    SubmodularProfile, TabularOracle, ValueSet, Valuation,
};
pub use regime::{classify_regime, Regime, RegimeTag};
pub use welfare::{
    compare_allocations, egalitarian_welfare, nash_score, utilitarian_welfare, NashScore, Objective,
};
