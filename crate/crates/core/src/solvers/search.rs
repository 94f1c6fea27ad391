use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Mutex;
use std::time::Instant;

use super::eval::{Eval, Key, Scorer};
use super::local::{greedy, local_search_owner};
use super::{Method, ObjectiveValue, OptResult, SolveLimits, SolveStatus};
use crate::error::{Error, Result};
use crate::model::{evaluate_allocation, Allocation, Instance};
use crate::welfare::{ensure_defined, nash_score, Objective};

/// Subtrees are split off until at least this many roots exist.
const SPLIT_ROOTS: usize = 64;
const UNASSIGNED: usize = usize::MAX;

pub fn solve_exact(
    instance: &Instance,
    objective: Objective,
    method: Method,
    limits: &SolveLimits,
) -> Result<OptResult> {
    limits.check()?;
    ensure_defined(instance, objective)?;
    let ctx = Ctx::new(instance, objective, method, limits);
    let deadline = Instant::now() + limits.max_seconds;
    let timed_out = AtomicBool::new(false);

    let start = greedy(&ctx.eval, objective, &ctx.order);
    let start = local_search_owner(&ctx.eval, objective, start);
    let incumbent = Best::of(&ctx, &start);

    let (roots, split_nodes) = ctx.split(&incumbent);
    let results: Mutex<Vec<Option<SubResult>>> = Mutex::new(vec![None; roots.len()]);
    let next = AtomicUsize::new(0);
    let workers = limits.parallel_workers.min(roots.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, AtomicOrdering::Relaxed);
                if idx >= roots.len() {
                    break;
                }
                let mut s = Search::new(&ctx, incumbent.clone(), limits.max_nodes, deadline, &timed_out);
                s.replay(&roots[idx]);
                s.dfs(roots[idx].len());
                let out = SubResult { best: s.best, nodes: s.nodes, aborted: s.aborted };
                results.lock().expect("worker panicked")[idx] = Some(out);
            });
        }
    });

    let mut best = incumbent;
    let mut nodes = split_nodes;
    let mut aborted = false;
    for r in results.into_inner().expect("worker panicked").into_iter().flatten() {
        nodes += r.nodes;
        aborted |= r.aborted;
        best.merge(r.best);
    }
    let status = if aborted || nodes > limits.max_nodes || timed_out.load(AtomicOrdering::Relaxed) {
        SolveStatus::LimitReached
    } else {
        SolveStatus::Proved
    };
    let allocation = Allocation::new(best.assign);
    let util = evaluate_allocation(instance, &allocation)?;
    let value = match objective {
        Objective::Nsw => ObjectiveValue::Nash(nash_score(&util)),
        Objective::Mew => ObjectiveValue::Egalitarian(util.iter().copied().min().unwrap_or(0)),
    };
    Ok(OptResult { objective, value, allocation, nodes, status })
}

/// Pruning bounds at a partial assignment (`None` = unassigned item).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PartialBounds {
    /// Every completion has at least `min_zero_count` agents at or below
    /// zero; a completion attaining exactly that many has positive-product
    /// log at most `ln_product_bound`.
    Nash { min_zero_count: usize, ln_product_bound: f64 },
    /// Every completion has egalitarian welfare at most `upper`.
    Egalitarian { upper: i64 },
}

pub fn partial_bounds(
    instance: &Instance,
    objective: Objective,
    partial: &[Option<usize>],
) -> Result<PartialBounds> {
    ensure_defined(instance, objective)?;
    if partial.len() != instance.items() {
        return Err(Error::InvalidAllocation(format!(
            "partial assignment has {} entries, expected {}",
            partial.len(),
            instance.items()
        )));
    }
    let eval = Eval::new(instance);
    let caps = eval.caps();
    let mut util = vec![0i64; eval.n];
    let mut mask = vec![0u64; eval.n];
    let mut rem_pos = vec![0i64; eval.n];
    let mut rem_max = 0i64;
    for (o, slot) in partial.iter().enumerate() {
        match *slot {
            Some(a) if a < eval.n => {
                util[a] = eval.add(a, util[a], mask[a], o);
                mask[a] |= eval.bit(o);
            }
            Some(a) => return Err(Error::InvalidAllocation(format!("agent {a} out of range"))),
            None => {
                for (i, r) in rem_pos.iter_mut().enumerate() {
                    *r += caps[i][o].max(0);
                }
                rem_max += (0..eval.n).map(|i| caps[i][o].max(0)).max().unwrap_or(0);
            }
        }
    }
    Ok(match objective {
        Objective::Mew => PartialBounds::Egalitarian { upper: mew_bound(&util, &rem_pos) },
        Objective::Nsw => {
            let (zeros, ln) = nash_bound(&util, &rem_pos, rem_max, 1.0);
            PartialBounds::Nash { min_zero_count: zeros, ln_product_bound: ln }
        }
    })
}

fn mew_bound(util: &[i64], rem_pos: &[i64]) -> i64 {
    util.iter().zip(rem_pos).map(|(u, r)| u + r).min().unwrap_or(0)
}

/// Lower bound on the zero count and upper bound on the log positive
/// product (AM-GM on the utility sum, and the per-agent product of caps).
fn nash_bound(util: &[i64], rem_pos: &[i64], rem_max: i64, scale: f64) -> (usize, f64) {
    let mut zeros = 0;
    let mut sum = rem_max;
    let mut ln_caps = 0.0;
    for (&u, &r) in util.iter().zip(rem_pos) {
        sum += u.max(0);
        if u + r <= 0 {
            zeros += 1;
        } else {
            ln_caps += ((u + r) as f64).ln();
        }
    }
    let p = util.len() - zeros;
    if p == 0 {
        return (zeros, 0.0);
    }
    if sum < p as i64 {
        // p positive integer utilities cannot fit under this sum
        return (zeros + 1, f64::INFINITY);
    }
    let amgm = p as f64 * (sum as f64 / p as f64).ln();
    (zeros, amgm.min(ln_caps) + scale.ln())
}

struct Ctx<'a> {
    eval: Eval<'a>,
    objective: Objective,
    scorer: Scorer,
    bnb: bool,
    bound_scale: f64,
    caps: Vec<Vec<i64>>,
    /// Per item, the largest positive cap over agents.
    max_cap: Vec<i64>,
    order: Vec<usize>,
    class: Vec<usize>,
    pos_in_class: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl<'a> Ctx<'a> {
    fn new(instance: &'a Instance, objective: Objective, method: Method, limits: &SolveLimits) -> Self {
        let eval = Eval::new(instance);
        let caps = eval.caps();
        let (n, m) = (eval.n, eval.m);
        let max_cap: Vec<i64> =
            (0..m).map(|o| (0..n).map(|i| caps[i][o].max(0)).max().unwrap_or(0)).collect();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&o| std::cmp::Reverse((0..n).map(|i| caps[i][o]).max().unwrap_or(0)));
        let bnb = method == Method::BnB;
        let class = if bnb { eval.classes() } else { (0..n).collect() };
        let classes = class.iter().copied().max().map_or(0, |c| c + 1);
        let mut members = vec![Vec::new(); classes];
        let mut pos_in_class = vec![0; n];
        for a in 0..n {
            pos_in_class[a] = members[class[a]].len();
            members[class[a]].push(a);
        }
        Ctx {
            scorer: Scorer::new(objective, &caps),
            eval,
            objective,
            bnb,
            bound_scale: limits.bound_scale(),
            caps,
            max_cap,
            order,
            class,
            pos_in_class,
            members,
        }
    }

    /// Maps agents to the lexicographically smallest assignment in their
    /// symmetry orbit.
    fn canonical(&self, owner: &[usize]) -> Vec<usize> {
        let mut map = vec![UNASSIGNED; self.eval.n];
        let mut used = vec![0; self.members.len()];
        owner
            .iter()
            .map(|&a| {
                if map[a] == UNASSIGNED {
                    let c = self.class[a];
                    map[a] = self.members[c][used[c]];
                    used[c] += 1;
                }
                map[a]
            })
            .collect()
    }

    /// Breadth-first expansion to a fixed set of subtree roots. Depends only
    /// on the instance and incumbent, never on the worker count.
    fn split(&self, incumbent: &Best) -> (Vec<Vec<usize>>, u64) {
        let never = AtomicBool::new(false);
        let far = Instant::now() + std::time::Duration::from_secs(u32::MAX as u64);
        let mut roots: Vec<Vec<usize>> = vec![Vec::new()];
        let mut nodes = 0u64;
        let mut depth = 0;
        while roots.len() < SPLIT_ROOTS && depth < self.eval.m {
            let mut next = Vec::new();
            for prefix in &roots {
                let mut s = Search::new(self, incumbent.clone(), u64::MAX, far, &never);
                s.replay(prefix);
                nodes += 1;
                if s.prunes() {
                    continue;
                }
                for a in s.candidates(depth) {
                    let mut p = prefix.clone();
                    p.push(a);
                    next.push(p);
                }
            }
            roots = next;
            depth += 1;
        }
        (roots, nodes)
    }
}

#[derive(Clone)]
struct Best {
    key: Key,
    ln: f64,
    assign: Vec<usize>,
}

impl Best {
    fn of(ctx: &Ctx, owner: &[usize]) -> Self {
        let key = ctx.scorer.key(&ctx.eval.utilities(owner));
        Best { ln: key.ln_product(), key, assign: ctx.canonical(owner) }
    }

    fn merge(&mut self, other: Best) {
        if other.key > self.key || (other.key == self.key && other.assign < self.assign) {
            *self = other;
        }
    }
}

#[derive(Clone)]
struct SubResult {
    best: Best,
    nodes: u64,
    aborted: bool,
}

struct Search<'c, 'a> {
    ctx: &'c Ctx<'a>,
    owner: Vec<usize>,
    util: Vec<i64>,
    mask: Vec<u64>,
    count: Vec<u32>,
    class_used: Vec<usize>,
    rem_pos: Vec<i64>,
    rem_max: i64,
    best: Best,
    nodes: u64,
    budget: u64,
    deadline: Instant,
    timed_out: &'c AtomicBool,
    aborted: bool,
}

impl<'c, 'a> Search<'c, 'a> {
    fn new(
        ctx: &'c Ctx<'a>,
        best: Best,
        budget: u64,
        deadline: Instant,
        timed_out: &'c AtomicBool,
    ) -> Self {
        let n = ctx.eval.n;
        let rem_pos = (0..n).map(|i| ctx.caps[i].iter().map(|&v| v.max(0)).sum()).collect();
        Search {
            ctx,
            owner: vec![UNASSIGNED; ctx.eval.m],
            util: vec![0; n],
            mask: vec![0; n],
            count: vec![0; n],
            class_used: vec![0; ctx.members.len()],
            rem_pos,
            rem_max: ctx.max_cap.iter().sum(),
            best,
            nodes: 0,
            budget,
            deadline,
            timed_out,
            aborted: false,
        }
    }

    fn replay(&mut self, prefix: &[usize]) {
        for (depth, &a) in prefix.iter().enumerate() {
            self.assign(a, self.ctx.order[depth]);
        }
    }

    fn candidates(&self, _depth: usize) -> Vec<usize> {
        (0..self.ctx.eval.n)
            .filter(|&a| self.ctx.pos_in_class[a] <= self.class_used[self.ctx.class[a]])
            .collect()
    }

    fn assign(&mut self, a: usize, item: usize) {
        let ctx = self.ctx;
        self.owner[item] = a;
        if self.count[a] == 0 {
            self.class_used[ctx.class[a]] += 1;
        }
        self.count[a] += 1;
        self.util[a] = ctx.eval.add(a, self.util[a], self.mask[a], item);
        self.mask[a] |= ctx.eval.bit(item);
        for (i, r) in self.rem_pos.iter_mut().enumerate() {
            *r -= ctx.caps[i][item].max(0);
        }
        self.rem_max -= ctx.max_cap[item];
    }

    fn unassign(&mut self, a: usize, item: usize, old_util: i64) {
        let ctx = self.ctx;
        self.owner[item] = UNASSIGNED;
        self.count[a] -= 1;
        if self.count[a] == 0 {
            self.class_used[ctx.class[a]] -= 1;
        }
        self.util[a] = old_util;
        self.mask[a] &= !ctx.eval.bit(item);
        for (i, r) in self.rem_pos.iter_mut().enumerate() {
            *r += ctx.caps[i][item].max(0);
        }
        self.rem_max += ctx.max_cap[item];
    }

    fn prunes(&self) -> bool {
        if !self.ctx.bnb {
            return false;
        }
        match self.ctx.objective {
            Objective::Mew => Key::Mew(mew_bound(&self.util, &self.rem_pos)) < self.best.key,
            Objective::Nsw => {
                let scale = self.ctx.bound_scale;
                let (zeros, ln) = nash_bound(&self.util, &self.rem_pos, self.rem_max, scale);
                let best_zeros = self.best.key.zeros();
                if zeros != best_zeros {
                    return zeros > best_zeros;
                }
                let margin = if scale == 1.0 { 1e-12 * ln.abs().max(1.0) + 1e-12 } else { 0.0 };
                ln + margin < self.best.ln
            }
        }
    }

    fn dfs(&mut self, depth: usize) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        if self.nodes & 0xfff == 0
            && (self.timed_out.load(AtomicOrdering::Relaxed) || Instant::now() > self.deadline)
        {
            self.timed_out.store(true, AtomicOrdering::Relaxed);
            self.aborted = true;
            return;
        }
        if depth == self.ctx.eval.m {
            self.leaf();
            return;
        }
        if self.prunes() {
            return;
        }
        let item = self.ctx.order[depth];
        for a in self.candidates(depth) {
            let old = self.util[a];
            self.assign(a, item);
            self.dfs(depth + 1);
            self.unassign(a, item, old);
            if self.aborted {
                return;
            }
        }
    }

    fn leaf(&mut self) {
        let key = self.ctx.scorer.key(&self.util);
        if key < self.best.key {
            return;
        }
        let assign = self.ctx.canonical(&self.owner);
        if key > self.best.key || assign < self.best.assign {
            self.best = Best { ln: key.ln_product(), key, assign };
        }
    }
}
