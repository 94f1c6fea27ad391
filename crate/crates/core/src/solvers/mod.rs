//! Exact optimization (brute force and branch-and-bound) and transfer-based
//! local search for Nash and egalitarian welfare.

mod enumerate;
mod eval;
mod local;
mod search;

use std::fmt;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::model::Allocation;
use crate::welfare::{NashScore, Objective};

pub use enumerate::{enumerate_optima, enumerate_optima_capped, DEFAULT_ENUMERATION_CAP};
pub use local::local_search;
pub use search::{partial_bounds, solve_exact, PartialBounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Brute,
    BnB,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Method::Brute),
            "bnb" => Ok(Method::BnB),
            other => Err(Error::InvalidInput(format!("unknown method '{other}'"))),
        }
    }
}

/// Search budget. Defaults: 10^9 nodes, 600 seconds, 1 worker.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveLimits {
    pub max_nodes: u64,
    pub max_seconds: Duration,
    pub parallel_workers: usize,
    bound_scale: f64,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits {
            max_nodes: 1_000_000_000,
            max_seconds: Duration::from_secs(600),
            parallel_workers: 1,
            bound_scale: 1.0,
        }
    }
}

impl SolveLimits {
    pub fn with_max_nodes(mut self, nodes: u64) -> Self {
        self.max_nodes = nodes;
        self
    }

    pub fn with_max_seconds(mut self, seconds: Duration) -> Self {
        self.max_seconds = seconds;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.parallel_workers = workers;
        self
    }

    /// Multiplies the Nash pruning bound by `scale` and drops the safety
    /// margin. Only meant for mutation tests of the cross-check harness.
    #[doc(hidden)]
    pub fn with_bound_mutation(mut self, scale: f64) -> Self {
        self.bound_scale = scale;
        self
    }

    pub(crate) fn bound_scale(&self) -> f64 {
        self.bound_scale
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.max_nodes == 0 || self.parallel_workers == 0 || self.max_seconds.is_zero() {
            return Err(Error::InvalidInput("solve limits must all be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Proved,
    LimitReached,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Proved => "proved",
            SolveStatus::LimitReached => "limit-reached",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectiveValue {
    Nash(NashScore),
    Egalitarian(i64),
}

impl fmt::Display for ObjectiveValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveValue::Nash(s) => write!(f, "nash welfare {s}"),
            ObjectiveValue::Egalitarian(v) => write!(f, "egalitarian welfare {v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptResult {
    pub objective: Objective,
    pub value: ObjectiveValue,
    pub allocation: Allocation,
    pub nodes: u64,
    pub status: SolveStatus,
}

/// Whether moving an item worth `loss` to agent i and `gain` to agent j
/// improves the pair's Nash product: `(u_i - loss)(u_j + gain) > u_i u_j`
/// (`>=` when `strict` is false).
pub fn improving_move(u_i: i64, loss: i64, u_j: i64, gain: i64, strict: bool) -> bool {
    let after = (u_i as i128 - loss as i128) * (u_j as i128 + gain as i128);
    let before = u_i as i128 * u_j as i128;
    if strict {
        after > before
    } else {
        after >= before
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn improving_move_examples() {
        assert!(improving_move(4, 1, 2, 2, true));
        // (b, c) = (1, 2): u_i = c + b, u_j = c, both sides 6
        assert!(!improving_move(3, 1, 2, 1, true));
        assert!(improving_move(3, 1, 2, 1, false));
        // (2*1 - 1)(4 + 2) = 6 < 8
        assert!(!improving_move(2, 1, 4, 2, true));
        assert!(!improving_move(2, 1, 4, 2, false));
    }

    #[test]
    fn limits_must_be_positive() {
        assert!(SolveLimits::default().check().is_ok());
        assert!(SolveLimits::default().with_workers(0).check().is_err());
        assert!(SolveLimits::default().with_max_nodes(0).check().is_err());
    }
}
