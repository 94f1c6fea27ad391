//! Instances, valuation profiles and allocations.
//!
//! Additive profiles hold an explicit `n × m` matrix. Submodular profiles hold
//! one set-function oracle per agent, evaluated on item bitmasks, so they are
//! limited to 64 items (tabular oracles to 20).

use std::fmt;

use crate::error::{Error, Result};
use crate::reductions::rx3c::Rx3cGadget;

/// Largest item count a tabular oracle may carry (its table has `2^m` entries).
pub const MAX_TABULAR_ITEMS: usize = 20;
/// Largest item count for any oracle-backed profile.
pub const MAX_ORACLE_ITEMS: usize = 64;

/// The 2 or 3 distinct integers every value (or marginal gain) is drawn from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValueSet(Vec<i64>);

impl ValueSet {
    pub fn new(values: &[i64]) -> Result<Self> {
        if values.len() != 2 && values.len() != 3 {
            return Err(Error::InvalidValueSet(format!(
                "expected 2 or 3 values, got {}",
                values.len()
            )));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidValueSet(format!(
                "values must be strictly increasing: {values:?}"
            )));
        }
        if values.iter().all(|&v| v == 0) {
            return Err(Error::InvalidValueSet("values are all zero".into()));
        }
        Ok(ValueSet(values.to_vec()))
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn contains(&self, value: i64) -> bool {
        self.0.contains(&value)
    }

    pub fn min(&self) -> i64 {
        self.0[0]
    }

    pub fn max(&self) -> i64 {
        *self.0.last().unwrap()
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A set function over the items `0..item_count()`, evaluated on bitmasks.
pub trait SetFunction {
    fn item_count(&self) -> usize;
    fn value(&self, bundle: u64) -> i64;

    fn marginal(&self, bundle: u64, item: usize) -> i64 {
        self.value(bundle | (1 << item)) - self.value(bundle)
    }
}

/// One agent's row of an additive profile viewed as a set function.
#[derive(Debug, Clone, Copy)]
pub struct AdditiveRow<'a>(pub &'a [i64]);

impl SetFunction for AdditiveRow<'_> {
    fn item_count(&self) -> usize {
        self.0.len()
    }

    fn value(&self, bundle: u64) -> i64 {
        bits(bundle).map(|o| self.0[o]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveProfile {
    matrix: Vec<Vec<i64>>,
    items: usize,
    value_set: ValueSet,
}

impl AdditiveProfile {
    /// Checks the matrix shape only; value-set membership is reported by
    /// [`validate_instance`].
    pub fn new(matrix: Vec<Vec<i64>>, value_set: ValueSet) -> Result<Self> {
        let Some(first) = matrix.first() else {
            return Err(Error::InvalidInput("an instance needs at least one agent".into()));
        };
        let items = first.len();
        if let Some((agent, row)) = matrix.iter().enumerate().find(|(_, r)| r.len() != items) {
            return Err(Error::InvalidInput(format!(
                "row {agent} has {} entries, expected {items}",
                row.len()
            )));
        }
        Ok(AdditiveProfile { matrix, items, value_set })
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn value(&self, agent: usize, item: usize) -> i64 {
        self.matrix[agent][item]
    }

    pub fn value_set(&self) -> &ValueSet {
        &self.value_set
    }

    pub fn agents(&self) -> usize {
        self.matrix.len()
    }

    pub fn items(&self) -> usize {
        self.items
    }
}

/// Explicit value for every subset of the items, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabularOracle {
    items: usize,
    table: Vec<i64>,
}

impl TabularOracle {
    pub fn new(items: usize, table: Vec<i64>) -> Result<Self> {
        if items > MAX_TABULAR_ITEMS {
            return Err(Error::TooLarge(format!(
                "tabular oracles support at most {MAX_TABULAR_ITEMS} items, got {items}"
            )));
        }
        if table.len() != 1 << items {
            return Err(Error::InvalidInput(format!(
                "tabular oracle over {items} items needs {} entries, got {}",
                1u64 << items,
                table.len()
            )));
        }
        Ok(TabularOracle { items, table })
    }

    /// Tabulates any set function.
    pub fn from_fn(items: usize, f: impl Fn(u64) -> i64) -> Result<Self> {
        if items > MAX_TABULAR_ITEMS {
            return Err(Error::TooLarge(format!(
                "tabular oracles support at most {MAX_TABULAR_ITEMS} items, got {items}"
            )));
        }
        let table = (0..1u64 << items).map(f).collect();
        Ok(TabularOracle { items, table })
    }

    pub fn table(&self) -> &[i64] {
        &self.table
    }
}

impl SetFunction for TabularOracle {
    fn item_count(&self) -> usize {
        self.items
    }

    fn value(&self, bundle: u64) -> i64 {
        self.table[bundle as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Oracle {
    Tabular(TabularOracle),
    Rx3cGadget(Rx3cGadget),
}

impl SetFunction for Oracle {
    fn item_count(&self) -> usize {
        match self {
            Oracle::Tabular(t) => t.item_count(),
            Oracle::Rx3cGadget(g) => g.item_count(),
        }
    }

    fn value(&self, bundle: u64) -> i64 {
        match self {
            Oracle::Tabular(t) => t.value(bundle),
            Oracle::Rx3cGadget(g) => g.value(bundle),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmodularProfile {
    oracles: Vec<Oracle>,
    items: usize,
    marginal_set: ValueSet,
}

impl SubmodularProfile {
    pub fn new(oracles: Vec<Oracle>, marginal_set: ValueSet) -> Result<Self> {
        let Some(first) = oracles.first() else {
            return Err(Error::InvalidInput("an instance needs at least one agent".into()));
        };
        let items = first.item_count();
        if items > MAX_ORACLE_ITEMS {
            return Err(Error::TooLarge(format!(
                "oracle profiles support at most {MAX_ORACLE_ITEMS} items, got {items}"
            )));
        }
        if let Some((agent, o)) = oracles.iter().enumerate().find(|(_, o)| o.item_count() != items) {
            return Err(Error::InvalidInput(format!(
                "oracle {agent} covers {} items, expected {items}",
                o.item_count()
            )));
        }
        Ok(SubmodularProfile { oracles, items, marginal_set })
    }

    pub fn oracles(&self) -> &[Oracle] {
        &self.oracles
    }

    pub fn marginal_set(&self) -> &ValueSet {
        &self.marginal_set
    }

    pub fn agents(&self) -> usize {
        self.oracles.len()
    }

    pub fn items(&self) -> usize {
        self.items
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    Additive(AdditiveProfile),
    Submodular(SubmodularProfile),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    valuation: Valuation,
}

impl Instance {
    pub fn additive(profile: AdditiveProfile) -> Self {
        Instance { valuation: Valuation::Additive(profile) }
    }

    pub fn submodular(profile: SubmodularProfile) -> Self {
        Instance { valuation: Valuation::Submodular(profile) }
    }

    /// Convenience constructor for additive instances.
    pub fn from_matrix(matrix: Vec<Vec<i64>>, values: &[i64]) -> Result<Self> {
        Ok(Instance::additive(AdditiveProfile::new(matrix, ValueSet::new(values)?)?))
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn agents(&self) -> usize {
        match &self.valuation {
            Valuation::Additive(p) => p.agents(),
            Valuation::Submodular(p) => p.agents(),
        }
    }

    pub fn items(&self) -> usize {
        match &self.valuation {
            Valuation::Additive(p) => p.items(),
            Valuation::Submodular(p) => p.items(),
        }
    }

    /// The declared value set (additive) or marginal set (submodular).
    pub fn value_set(&self) -> &ValueSet {
        match &self.valuation {
            Valuation::Additive(p) => p.value_set(),
            Valuation::Submodular(p) => p.marginal_set(),
        }
    }

    /// True when some agent can see a negative value: any negative matrix
    /// entry, or a negative declared marginal for oracle profiles.
    pub fn has_negative_value(&self) -> bool {
        match &self.valuation {
            Valuation::Additive(p) => p.matrix().iter().flatten().any(|&v| v < 0),
            Valuation::Submodular(p) => p.marginal_set().min() < 0,
        }
    }

    pub fn bundle_value(&self, agent: usize, bundle: &[usize]) -> i64 {
        match &self.valuation {
            Valuation::Additive(p) => bundle.iter().map(|&o| p.value(agent, o)).sum(),
            Valuation::Submodular(p) => p.oracles()[agent].value(mask_of(bundle)),
        }
    }

    /// Multiplies every additive entry (and the value set) by `factor`.
    pub fn scaled(&self, factor: i64) -> Result<Instance> {
        if factor <= 0 {
            return Err(Error::InvalidInput("scaling factor must be positive".into()));
        }
        match &self.valuation {
            Valuation::Additive(p) => {
                let matrix = p
                    .matrix()
                    .iter()
                    .map(|row| row.iter().map(|v| v * factor).collect())
                    .collect();
                let values: Vec<i64> = p.value_set().values().iter().map(|v| v * factor).collect();
                Instance::from_matrix(matrix, &values)
            }
            Valuation::Submodular(_) => {
                Err(Error::InvalidInput("only additive instances can be scaled".into()))
            }
        }
    }
}

/// Total assignment of every item to one agent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Allocation(Vec<usize>);

impl Allocation {
    pub fn new(assignment: Vec<usize>) -> Self {
        Allocation(assignment)
    }

    pub fn assignment(&self) -> &[usize] {
        &self.0
    }

    pub fn owner(&self, item: usize) -> usize {
        self.0[item]
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    pub fn check(&self, instance: &Instance) -> Result<()> {
        if self.0.len() != instance.items() {
            return Err(Error::InvalidAllocation(format!(
                "allocation covers {} items, instance has {}",
                self.0.len(),
                instance.items()
            )));
        }
        let n = instance.agents();
        if let Some((item, agent)) = self.0.iter().enumerate().find(|(_, &a)| a >= n) {
            return Err(Error::InvalidAllocation(format!(
                "item {item} assigned to agent {agent}, but there are only {n} agents"
            )));
        }
        Ok(())
    }

    pub fn bundles(&self, agents: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); agents];
        for (item, &agent) in self.0.iter().enumerate() {
            out[agent].push(item);
        }
        out
    }
}

/// Utility of every agent for its bundle.
pub fn evaluate_allocation(instance: &Instance, allocation: &Allocation) -> Result<Vec<i64>> {
    allocation.check(instance)?;
    let n = instance.agents();
    match instance.valuation() {
        Valuation::Additive(p) => {
            let mut utils = vec![0; n];
            for (item, &agent) in allocation.assignment().iter().enumerate() {
                utils[agent] += p.value(agent, item);
            }
            Ok(utils)
        }
        Valuation::Submodular(p) => {
            let mut masks = vec![0u64; n];
            for (item, &agent) in allocation.assignment().iter().enumerate() {
                masks[agent] |= 1 << item;
            }
            Ok(p.oracles().iter().zip(masks).map(|(o, m)| o.value(m)).collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    EntryOutsideValueSet { agent: usize, item: usize, value: i64 },
    EmptyBundleNonZero { agent: usize, value: i64 },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::EntryOutsideValueSet { agent, item, value } => {
                write!(f, "agent {agent}, item {item}: value {value} is outside the value set")
            }
            Diagnostic::EmptyBundleNonZero { agent, value } => {
                write!(f, "agent {agent}: empty bundle has value {value}, expected 0")
            }
        }
    }
}

/// Lists every violation of the instance's declared constraints; empty means ok.
pub fn validate_instance(instance: &Instance) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    match instance.valuation() {
        Valuation::Additive(p) => {
            for (agent, row) in p.matrix().iter().enumerate() {
                for (item, &value) in row.iter().enumerate() {
                    if !p.value_set().contains(value) {
                        out.push(Diagnostic::EntryOutsideValueSet { agent, item, value });
                    }
                }
            }
        }
        Valuation::Submodular(p) => {
            for (agent, oracle) in p.oracles().iter().enumerate() {
                let value = oracle.value(0);
                if value != 0 {
                    out.push(Diagnostic::EmptyBundleNonZero { agent, value });
                }
            }
        }
    }
    out
}

pub(crate) fn mask_of(items: &[usize]) -> u64 {
    items.iter().fold(0u64, |m, &o| m | (1 << o))
}

/// Iterates the set bit positions of `mask` in increasing order.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_set_rejects_bad_input() {
        assert!(ValueSet::new(&[0, 1, 2]).is_ok());
        assert!(matches!(ValueSet::new(&[1, 1]), Err(Error::InvalidValueSet(_))));
        assert!(matches!(ValueSet::new(&[2, 1, 3]), Err(Error::InvalidValueSet(_))));
        assert!(matches!(ValueSet::new(&[1]), Err(Error::InvalidValueSet(_))));
        assert!(matches!(ValueSet::new(&[0, 1, 2, 3]), Err(Error::InvalidValueSet(_))));
    }

    #[test]
    fn diagonal_allocation_utilities() {
        let inst = Instance::from_matrix(vec![vec![2, 0], vec![0, 2]], &[0, 1, 2]).unwrap();
        let utils = evaluate_allocation(&inst, &Allocation::new(vec![0, 1])).unwrap();
        assert_eq!(utils, vec![2, 2]);
    }

    #[test]
    fn dimension_mismatch_is_invalid_allocation() {
        let inst = Instance::from_matrix(vec![vec![2, 0], vec![0, 2]], &[0, 1, 2]).unwrap();
        assert!(matches!(
            evaluate_allocation(&inst, &Allocation::new(vec![0])),
            Err(Error::InvalidAllocation(_))
        ));
        assert!(matches!(
            evaluate_allocation(&inst, &Allocation::new(vec![0, 2])),
            Err(Error::InvalidAllocation(_))
        ));
    }

    #[test]
    fn entry_outside_value_set_is_diagnosed() {
        let inst = Instance::from_matrix(vec![vec![0, 1], vec![5, 2]], &[0, 1, 2]).unwrap();
        assert_eq!(
            validate_instance(&inst),
            vec![Diagnostic::EntryOutsideValueSet { agent: 1, item: 0, value: 5 }]
        );
    }

    #[test]
    fn non_normalized_tabular_oracle_is_diagnosed() {
        let oracle = TabularOracle::new(1, vec![1, 2]).unwrap();
        let profile =
            SubmodularProfile::new(vec![Oracle::Tabular(oracle)], ValueSet::new(&[0, 1]).unwrap())
                .unwrap();
        assert_eq!(
            validate_instance(&Instance::submodular(profile)),
            vec![Diagnostic::EmptyBundleNonZero { agent: 0, value: 1 }]
        );
    }

    #[test]
    fn empty_item_list_is_a_valid_instance() {
        let inst = Instance::from_matrix(vec![vec![], vec![]], &[0, 1]).unwrap();
        assert_eq!(inst.items(), 0);
        assert!(validate_instance(&inst).is_empty());
        assert_eq!(evaluate_allocation(&inst, &Allocation::new(vec![])).unwrap(), vec![0, 0]);
    }

    #[test]
    fn ragged_matrix_rejected() {
        assert!(Instance::from_matrix(vec![vec![0, 1], vec![1]], &[0, 1]).is_err());
        assert!(Instance::from_matrix(vec![], &[0, 1]).is_err());
    }
}
