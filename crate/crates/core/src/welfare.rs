//! Welfare objectives with exact comparison.
//!
//! Nash welfare is compared on `(zero_count, product)`: fewer agents at or
//! below zero wins, then the larger exact product of the positive utilities.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{evaluate_allocation, Allocation, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    Nsw,
    Mew,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::Nsw => "nsw",
            Objective::Mew => "mew",
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nsw" | "mnw" => Ok(Objective::Nsw),
            "mew" => Ok(Objective::Mew),
            other => Err(Error::InvalidInput(format!("unknown objective '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NashScore {
    zero_count: usize,
    product: BigUint,
    agents: usize,
}

impl NashScore {
    pub fn zero_count(&self) -> usize {
        self.zero_count
    }

    /// Exact product of the positive utilities (1 when there are none).
    pub fn product(&self) -> &BigUint {
        &self.product
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    /// Natural log of the positive product.
    pub fn ln_product(&self) -> f64 {
        ln_biguint(&self.product)
    }

    /// Geometric mean of all utilities; 0 as soon as one agent is at or below zero.
    pub fn geometric_mean(&self) -> f64 {
        if self.zero_count > 0 || self.agents == 0 {
            return 0.0;
        }
        (self.ln_product() / self.agents as f64).exp()
    }

    /// The geometric mean when it is an integer.
    pub fn exact_geometric_mean(&self) -> Option<BigUint> {
        if self.agents == 0 {
            return None;
        }
        if self.zero_count > 0 {
            return Some(BigUint::zero());
        }
        let root = self.product.nth_root(self.agents as u32);
        (root.pow(self.agents as u32) == self.product).then_some(root)
    }
}

impl PartialEq for NashScore {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for NashScore {}

impl PartialOrd for NashScore {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NashScore {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .zero_count
            .cmp(&self.zero_count)
            .then_with(|| self.product.cmp(&other.product))
    }
}

impl fmt::Display for NashScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact_geometric_mean() {
            Some(g) if self.zero_count == 0 => write!(f, "{g}")?,
            _ => write!(f, "{:.6}", self.geometric_mean())?,
        }
        write!(f, " (zero agents {}, product {})", self.zero_count, self.product)
    }
}

pub fn nash_score(utilities: &[i64]) -> NashScore {
    let mut product = BigUint::one();
    let mut zero_count = 0;
    for &u in utilities {
        if u <= 0 {
            zero_count += 1;
        } else {
            product *= BigUint::from(u as u64);
        }
    }
    NashScore { zero_count, product, agents: utilities.len() }
}

pub fn egalitarian_welfare(utilities: &[i64]) -> Result<i64> {
    utilities
        .iter()
        .copied()
        .min()
        .ok_or_else(|| Error::InvalidInput("egalitarian welfare of an empty profile".into()))
}

pub fn utilitarian_welfare(utilities: &[i64]) -> Result<i64> {
    if utilities.is_empty() {
        return Err(Error::InvalidInput("utilitarian welfare of an empty profile".into()));
    }
    Ok(utilities.iter().sum())
}

pub(crate) fn ensure_defined(instance: &Instance, objective: Objective) -> Result<()> {
    if objective == Objective::Nsw && instance.has_negative_value() {
        return Err(Error::ObjectiveUndefined(
            "Nash welfare needs non-negative item values".into(),
        ));
    }
    Ok(())
}

/// Orders `x1` against `x2` under the objective (Greater means `x1` is better).
pub fn compare_allocations(
    instance: &Instance,
    x1: &Allocation,
    x2: &Allocation,
    objective: Objective,
) -> Result<Ordering> {
    ensure_defined(instance, objective)?;
    let u1 = evaluate_allocation(instance, x1)?;
    let u2 = evaluate_allocation(instance, x2)?;
    Ok(compare_utilities(&u1, &u2, objective))
}

pub(crate) fn compare_utilities(u1: &[i64], u2: &[i64], objective: Objective) -> Ordering {
    match objective {
        Objective::Nsw => nash_score(u1).cmp(&nash_score(u2)),
        Objective::Mew => u1.iter().min().cmp(&u2.iter().min()),
    }
}

pub(crate) fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equal_utilities() {
        let s = nash_score(&[2, 2]);
        assert_eq!(s.zero_count(), 0);
        assert_eq!(s.product(), &BigUint::from(4u32));
        assert_eq!(s.exact_geometric_mean(), Some(BigUint::from(2u32)));
    }

    #[test]
    fn zero_utility_ranks_below_any_positive_profile() {
        let s = nash_score(&[0, 5]);
        assert_eq!((s.zero_count(), s.product().clone()), (1, BigUint::from(5u32)));
        assert!(s < nash_score(&[1, 1]));
    }

    #[test]
    fn equal_products_tie() {
        assert_eq!(nash_score(&[1, 4]).cmp(&nash_score(&[2, 2])), Ordering::Equal);
    }

    #[test]
    fn min_and_sum() {
        assert_eq!(egalitarian_welfare(&[3, 1, 2]).unwrap(), 1);
        assert_eq!(utilitarian_welfare(&[3, 1, 2]).unwrap(), 6);
        assert_eq!(egalitarian_welfare(&[0, 0]).unwrap(), 0);
        assert_eq!(utilitarian_welfare(&[0, 0]).unwrap(), 0);
        assert!(matches!(egalitarian_welfare(&[]), Err(Error::InvalidInput(_))));
        assert!(matches!(utilitarian_welfare(&[]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn compare_by_objective() {
        let inst = Instance::from_matrix(vec![vec![1, 1, 0], vec![0, 0, 2]], &[0, 1, 2]).unwrap();
        // utilities [2, 2] vs [1, 2]
        let x1 = Allocation::new(vec![0, 0, 1]);
        let x2 = Allocation::new(vec![0, 1, 1]);
        assert_eq!(
            compare_allocations(&inst, &x1, &x2, Objective::Nsw).unwrap(),
            Ordering::Greater
        );
        assert_eq!(compare_utilities(&[2, 2], &[1, 4], Objective::Nsw), Ordering::Equal);
        assert_eq!(compare_utilities(&[0, 9], &[1, 1], Objective::Nsw), Ordering::Less);
        assert_eq!(compare_utilities(&[1, 3], &[2, 2], Objective::Mew), Ordering::Less);
    }

    #[test]
    fn nsw_undefined_with_negative_values() {
        let inst = Instance::from_matrix(vec![vec![-1, 2]], &[-1, 0, 2]).unwrap();
        let x = Allocation::new(vec![0, 0]);
        assert!(matches!(
            compare_allocations(&inst, &x, &x, Objective::Nsw),
            Err(Error::ObjectiveUndefined(_))
        ));
        assert_eq!(compare_allocations(&inst, &x, &x, Objective::Mew).unwrap(), Ordering::Equal);
    }

    #[test]
    fn ln_of_large_products() {
        let big = BigUint::from(3u32).pow(2000);
        let expected = 2000.0 * 3f64.ln();
        assert!((ln_biguint(&big) - expected).abs() < 1e-9 * expected);
    }

    proptest! {
        #[test]
        fn increasing_a_positive_utility_increases_score(
            utils in prop::collection::vec(0i64..20, 1..6),
            idx in 0usize..6,
            bump in 1i64..5,
        ) {
            let idx = idx % utils.len();
            let mut better = utils.clone();
            better[idx] += bump;
            prop_assert!(nash_score(&better) > nash_score(&utils));
        }
    }
}
