use super::eval::{Eval, Key, Scorer};
use crate::error::{Error, Result};
use crate::model::{Allocation, Instance};
use crate::welfare::{ensure_defined, Objective};

/// Largest `n^m` that [`enumerate_optima`] accepts by default.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Every optimal allocation, in lexicographic order of the assignment vector.
pub fn enumerate_optima(instance: &Instance, objective: Objective) -> Result<Vec<Allocation>> {
    enumerate_optima_capped(instance, objective, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_optima_capped(instance: &Instance, objective: Objective, cap: u64) -> Result<Vec<Allocation>> {
    ensure_defined(instance, objective)?;
    let (n, m) = (instance.agents(), instance.items());
    let total = (n as u64).checked_pow(m as u32).filter(|&t| t <= cap);
    if total.is_none() {
        return Err(Error::TooLarge(format!("{n}^{m} allocations exceed the cap of {cap}")));
    }
    let eval = Eval::new(instance);
    let mut walk = Walk {
        eval,
        scorer: Scorer::new(objective, &eval.caps()),
        owner: vec![0; m],
        util: vec![0; n],
        mask: vec![0; n],
        best: None,
        optima: Vec::new(),
    };
    walk.dfs(0);
    Ok(walk.optima.into_iter().map(Allocation::new).collect())
}

struct Walk<'a> {
    eval: Eval<'a>,
    scorer: Scorer,
    owner: Vec<usize>,
    util: Vec<i64>,
    mask: Vec<u64>,
    best: Option<Key>,
    optima: Vec<Vec<usize>>,
}

impl Walk<'_> {
    fn dfs(&mut self, item: usize) {
        if item == self.eval.m {
            let key = self.scorer.key(&self.util);
            match &self.best {
                Some(b) if key < *b => {}
                Some(b) if key == *b => self.optima.push(self.owner.clone()),
                _ => {
                    self.best = Some(key);
                    self.optima = vec![self.owner.clone()];
                }
            }
            return;
        }
        for a in 0..self.eval.n {
            let old = self.util[a];
            self.util[a] = self.eval.add(a, old, self.mask[a], item);
            self.mask[a] |= self.eval.bit(item);
            self.owner[item] = a;
            self.dfs(item + 1);
            self.mask[a] &= !self.eval.bit(item);
            self.util[a] = old;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let single = Instance::from_matrix(vec![vec![1, 1]], &[0, 1]).unwrap();
        assert_eq!(enumerate_optima(&single, Objective::Nsw).unwrap().len(), 1);
        let diag = Instance::from_matrix(vec![vec![2, 0], vec![0, 2]], &[0, 1, 2]).unwrap();
        assert_eq!(
            enumerate_optima(&diag, Objective::Nsw).unwrap(),
            vec![Allocation::new(vec![0, 1])]
        );
        let tie = Instance::from_matrix(vec![vec![1], vec![1]], &[0, 1]).unwrap();
        assert_eq!(enumerate_optima(&tie, Objective::Nsw).unwrap().len(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let inst = Instance::from_matrix(vec![vec![1; 30], vec![1; 30]], &[0, 1]).unwrap();
        assert!(matches!(enumerate_optima(&inst, Objective::Mew), Err(Error::TooLarge(_))));
    }
}
