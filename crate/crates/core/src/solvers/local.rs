use super::eval::{Eval, Scorer};
use crate::error::Result;
use crate::model::{Allocation, Instance};
use crate::welfare::{ensure_defined, nash_score, Objective};

/// Applies strictly improving single-item transfers, then pairwise swaps,
/// until neither exists. The first improving move in index order is taken.
pub fn local_search(instance: &Instance, start: &Allocation, objective: Objective) -> Result<Allocation> {
    ensure_defined(instance, objective)?;
    start.check(instance)?;
    let eval = Eval::new(instance);
    Ok(Allocation::new(local_search_owner(&eval, objective, start.assignment().to_vec())))
}

pub(crate) fn local_search_owner(eval: &Eval, objective: Objective, mut owner: Vec<usize>) -> Vec<usize> {
    let mut util = eval.utilities(&owner);
    let mut mask = eval.masks(&owner);
    while let Some(mv) = find_move(eval, objective, &owner, &util, &mask) {
        match mv {
            Move::Transfer { item, to, ui, uj } => {
                let from = owner[item];
                util[from] = ui;
                util[to] = uj;
                mask[from] &= !eval.bit(item);
                mask[to] |= eval.bit(item);
                owner[item] = to;
            }
            Move::Swap { o1, o2, ui, uj } => {
                let (i, j) = (owner[o1], owner[o2]);
                util[i] = ui;
                util[j] = uj;
                mask[i] = (mask[i] & !eval.bit(o1)) | eval.bit(o2);
                mask[j] = (mask[j] & !eval.bit(o2)) | eval.bit(o1);
                owner.swap(o1, o2);
            }
        }
    }
    owner
}

enum Move {
    Transfer { item: usize, to: usize, ui: i64, uj: i64 },
    Swap { o1: usize, o2: usize, ui: i64, uj: i64 },
}

fn find_move(eval: &Eval, objective: Objective, owner: &[usize], util: &[i64], mask: &[u64]) -> Option<Move> {
    let m = owner.len();
    for item in 0..m {
        let i = owner[item];
        let ui = eval.remove(i, util[i], mask[i], item);
        for j in (0..eval.n).filter(|&j| j != i) {
            let uj = eval.add(j, util[j], mask[j], item);
            if pair_improves(objective, util, i, ui, j, uj) {
                return Some(Move::Transfer { item, to: j, ui, uj });
            }
        }
    }
    for o1 in 0..m {
        for o2 in o1 + 1..m {
            let (i, j) = (owner[o1], owner[o2]);
            if i == j {
                continue;
            }
            let ui = eval.exchange(i, util[i], mask[i], o1, o2);
            let uj = eval.exchange(j, util[j], mask[j], o2, o1);
            if pair_improves(objective, util, i, ui, j, uj) {
                return Some(Move::Swap { o1, o2, ui, uj });
            }
        }
    }
    None
}

/// Whether changing agents i and j to utilities `ui`, `uj` strictly improves
/// the objective. For Nash welfare only the pair matters, since the other
/// agents contribute the same zero count and product to both sides.
fn pair_improves(objective: Objective, util: &[i64], i: usize, ui: i64, j: usize, uj: i64) -> bool {
    match objective {
        Objective::Nsw => nash_score(&[ui, uj]) > nash_score(&[util[i], util[j]]),
        Objective::Mew => {
            let rest = (0..util.len()).filter(|&k| k != i && k != j).map(|k| util[k]).min();
            let before = rest.map_or(util[i].min(util[j]), |r| r.min(util[i]).min(util[j]));
            let after = rest.map_or(ui.min(uj), |r| r.min(ui).min(uj));
            after > before
        }
    }
}

/// Assigns items in `order`, each to the agent whose resulting utility
/// vector scores best (ties: larger gain, then lower index).
pub(crate) fn greedy(eval: &Eval, objective: Objective, order: &[usize]) -> Vec<usize> {
    let scorer = Scorer::exact(objective);
    let mut owner = vec![0; eval.m];
    let mut util = vec![0i64; eval.n];
    let mut mask = vec![0u64; eval.n];
    let mut trial = util.clone();
    for &item in order {
        let mut choice: Option<(usize, i64)> = None;
        let mut choice_key = None;
        for a in 0..eval.n {
            let ua = eval.add(a, util[a], mask[a], item);
            trial.copy_from_slice(&util);
            trial[a] = ua;
            let key = scorer.key(&trial);
            let gain = ua - util[a];
            let better = match (&choice_key, choice) {
                (None, _) => true,
                (Some(k), Some((_, g))) => key > *k || (key == *k && gain > g),
                _ => unreachable!(),
            };
            if better {
                choice = Some((a, gain));
                choice_key = Some(key);
            }
        }
        let (a, _) = choice.expect("at least one agent");
        util[a] = eval.add(a, util[a], mask[a], item);
        mask[a] |= eval.bit(item);
        owner[item] = a;
    }
    owner
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::evaluate_allocation;

    #[test]
    fn reaches_diagonal_from_zero_start() {
        let inst = Instance::from_matrix(vec![vec![2, 0], vec![0, 2]], &[0, 1, 2]).unwrap();
        let out = local_search(&inst, &Allocation::new(vec![0, 0]), Objective::Nsw).unwrap();
        assert_eq!(evaluate_allocation(&inst, &out).unwrap(), vec![2, 2]);
    }

    #[test]
    fn optimum_is_fixed_point() {
        let inst = Instance::from_matrix(vec![vec![2, 1, 0], vec![0, 1, 2]], &[0, 1, 2]).unwrap();
        let opt = Allocation::new(vec![0, 0, 1]);
        assert_eq!(local_search(&inst, &opt, Objective::Nsw).unwrap(), opt);
        assert_eq!(local_search(&inst, &opt, Objective::Mew).unwrap(), opt);
    }

    #[test]
    fn swap_escapes_transfer_optimum() {
        // no single transfer helps under the egalitarian objective, a swap does
        let inst = Instance::from_matrix(vec![vec![1, 2], vec![2, 1]], &[0, 1, 2]).unwrap();
        let out = local_search(&inst, &Allocation::new(vec![0, 1]), Objective::Mew).unwrap();
        assert_eq!(out, Allocation::new(vec![1, 0]));
    }
}
