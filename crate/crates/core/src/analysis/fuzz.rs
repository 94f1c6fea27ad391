use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::solvers::{enumerate_optima, local_search, solve_exact, Method, SolveLimits, SolveStatus};
use crate::welfare::Objective;

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_agents: usize,
    pub max_items: usize,
    pub workers: usize,
    /// Passed to the branch and bound runs; see
    /// [`SolveLimits::with_bound_mutation`].
    pub bound_mutation: Option<f64>,
}

impl FuzzConfig {
    pub fn new(seed: u64, trials: usize) -> Self {
        FuzzConfig { seed, trials, max_agents: 4, max_items: 8, workers: 1, bound_mutation: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub trial: usize,
    /// Seed that regenerates the trial's instance via [`fuzz_instance`].
    pub trial_seed: u64,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzSummary {
    pub seed: u64,
    pub trials: usize,
    pub nsw_trials: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl fmt::Display for FuzzSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "seed {}: {} trials ({} with nash welfare), {} discrepancies",
            self.seed,
            self.trials,
            self.nsw_trials,
            self.discrepancies.len()
        )?;
        for d in &self.discrepancies {
            writeln!(f, "  trial {} (seed {}): {}: {}", d.trial, d.trial_seed, d.check, d.detail)?;
        }
        Ok(())
    }
}

/// Per-trial seed derived from the master seed: the first output of the
/// master ChaCha8 stream numbered `trial`.
pub fn trial_seed(master: u64, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(trial as u64);
    rng.next_u64()
}

/// The random instance of one trial: up to `max_agents` agents and
/// `max_items` items with `n^m <= 10^7`, valued by a random ternary set.
/// Half of the value sets are goods triples `0 <= a < b < c <= 6`, the
/// others are drawn from `-5..=5`.
pub fn fuzz_instance(trial_seed: u64, max_agents: usize, max_items: usize) -> Result<Instance> {
    if max_agents == 0 || max_items == 0 {
        return Err(Error::InvalidInput("fuzz caps must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let n = rng.gen_range(1..=max_agents);
    let mut m = rng.gen_range(1..=max_items);
    while (n as f64).powi(m as i32) > 1e7 {
        m -= 1;
    }
    let (lo, hi) = if rng.gen_bool(0.5) { (0, 6) } else { (-5, 5) };
    let mut values = Vec::new();
    while values.len() < 3 {
        let v = rng.gen_range(lo..=hi);
        if !values.contains(&v) {
            values.push(v);
        }
    }
    values.sort_unstable();
    let matrix = (0..n).map(|_| (0..m).map(|_| values[rng.gen_range(0..3)]).collect()).collect();
    Instance::from_matrix(matrix, &values)
}

/// Cross-checks the solvers on seeded random instances: branch and bound
/// against brute force for both objectives (Nash only when no value is
/// negative), argmax invariance under scaling by 2 and 3, and that local
/// search leaves an optimum unchanged.
pub fn fuzz_cross_check(config: &FuzzConfig) -> Result<FuzzSummary> {
    let workers = config.workers.max(1).min(config.trials.max(1));
    let next = AtomicUsize::new(0);
    let found: Mutex<Vec<Discrepancy>> = Mutex::new(Vec::new());
    let nsw = AtomicUsize::new(0);
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let trial = next.fetch_add(1, Ordering::Relaxed);
                if trial >= config.trials {
                    break;
                }
                match run_trial(config, trial) {
                    Ok((ds, checked_nsw)) => {
                        if checked_nsw {
                            nsw.fetch_add(1, Ordering::Relaxed);
                        }
                        found.lock().expect("fuzz worker panicked").extend(ds);
                    }
                    Err(e) => {
                        failure.lock().expect("fuzz worker panicked").get_or_insert(e);
                    }
                }
            });
        }
    });
    if let Some(e) = failure.into_inner().expect("fuzz worker panicked") {
        return Err(e);
    }
    let mut discrepancies = found.into_inner().expect("fuzz worker panicked");
    discrepancies.sort_by(|x, y| (x.trial, &x.check).cmp(&(y.trial, &y.check)));
    Ok(FuzzSummary { seed: config.seed, trials: config.trials, nsw_trials: nsw.into_inner(), discrepancies })
}

fn run_trial(config: &FuzzConfig, trial: usize) -> Result<(Vec<Discrepancy>, bool)> {
    let seed = trial_seed(config.seed, trial);
    let instance = fuzz_instance(seed, config.max_agents, config.max_items)?;
    let mut out = Vec::new();
    let mut report = |check: String, detail: String| {
        out.push(Discrepancy { trial, trial_seed: seed, check, detail });
    };
    let mut limits = SolveLimits::default();
    if let Some(scale) = config.bound_mutation {
        limits = limits.with_bound_mutation(scale);
    }
    let nsw_ok = !instance.has_negative_value();
    let objectives: &[Objective] = if nsw_ok { &[Objective::Nsw, Objective::Mew] } else { &[Objective::Mew] };
    for &objective in objectives {
        let name = objective.name();
        let brute = solve_exact(&instance, objective, Method::Brute, &SolveLimits::default())?;
        let bnb = solve_exact(&instance, objective, Method::BnB, &limits)?;
        if brute.status != SolveStatus::Proved || bnb.status != SolveStatus::Proved {
            report(format!("{name}/status"), format!("brute {}, bnb {}", brute.status, bnb.status));
        }
        if brute.value != bnb.value {
            report(format!("{name}/bnb-vs-brute"), format!("brute {}, bnb {}", brute.value, bnb.value));
        } else if brute.allocation != bnb.allocation {
            report(
                format!("{name}/tie-break"),
                format!("brute {:?}, bnb {:?}", brute.allocation.assignment(), bnb.allocation.assignment()),
            );
        }

        let optima = enumerate_optima(&instance, objective)?;
        for lambda in [2, 3] {
            let scaled = enumerate_optima(&instance.scaled(lambda)?, objective)?;
            if scaled != optima {
                report(
                    format!("{name}/scaling"),
                    format!("x{lambda}: {} optima before, {} after", optima.len(), scaled.len()),
                );
            }
        }

        let polished = local_search(&instance, &brute.allocation, objective)?;
        if polished != brute.allocation {
            report(
                format!("{name}/local-search"),
                format!("{:?} moved to {:?}", brute.allocation.assignment(), polished.assignment()),
            );
        }
    }
    Ok((out, nsw_ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_is_empty() {
        let s = fuzz_cross_check(&FuzzConfig::new(1, 0)).unwrap();
        assert!(s.discrepancies.is_empty());
        assert_eq!(s.trials, 0);
    }

    #[test]
    fn trial_seeds_are_stable() {
        assert_eq!(trial_seed(1, 5), trial_seed(1, 5));
        assert_ne!(trial_seed(1, 5), trial_seed(1, 6));
        assert_eq!(fuzz_instance(9, 4, 8).unwrap(), fuzz_instance(9, 4, 8).unwrap());
    }

    #[test]
    fn short_run_is_clean() {
        let mut config = FuzzConfig::new(3, 40);
        config.workers = 2;
        let s = fuzz_cross_check(&config).unwrap();
        assert!(s.discrepancies.is_empty(), "{s}");
    }
}
