use std::cmp::Reverse;

use crate::model::{Instance, Oracle, SetFunction, Valuation};
use crate::welfare::{nash_score, NashScore, Objective};

#[derive(Clone, Copy)]
enum Kind<'a> {
    Additive(&'a [Vec<i64>]),
    Oracle(&'a [Oracle]),
}

/// Incremental utility evaluation. Bundles are tracked as bitmasks only for
/// oracle profiles; additive profiles ignore the mask arguments.
#[derive(Clone, Copy)]
pub(crate) struct Eval<'a> {
    kind: Kind<'a>,
    pub n: usize,
    pub m: usize,
}

impl<'a> Eval<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        let kind = match instance.valuation() {
            Valuation::Additive(p) => Kind::Additive(p.matrix()),
            Valuation::Submodular(p) => Kind::Oracle(p.oracles()),
        };
        Eval { kind, n: instance.agents(), m: instance.items() }
    }

    pub fn add(&self, agent: usize, util: i64, mask: u64, item: usize) -> i64 {
        match self.kind {
            Kind::Additive(v) => util + v[agent][item],
            Kind::Oracle(o) => o[agent].value(mask | (1 << item)),
        }
    }

    pub fn remove(&self, agent: usize, util: i64, mask: u64, item: usize) -> i64 {
        match self.kind {
            Kind::Additive(v) => util - v[agent][item],
            Kind::Oracle(o) => o[agent].value(mask & !(1 << item)),
        }
    }

    /// Utility after giving up `out` and receiving `inn`.
    pub fn exchange(&self, agent: usize, util: i64, mask: u64, out: usize, inn: usize) -> i64 {
        match self.kind {
            Kind::Additive(v) => util - v[agent][out] + v[agent][inn],
            Kind::Oracle(o) => o[agent].value((mask & !(1 << out)) | (1 << inn)),
        }
    }

    pub fn bit(&self, item: usize) -> u64 {
        match self.kind {
            Kind::Additive(_) => 0,
            Kind::Oracle(_) => 1 << item,
        }
    }

    pub fn masks(&self, owner: &[usize]) -> Vec<u64> {
        let mut masks = vec![0u64; self.n];
        for (o, &a) in owner.iter().enumerate() {
            masks[a] |= self.bit(o);
        }
        masks
    }

    pub fn utilities(&self, owner: &[usize]) -> Vec<i64> {
        match self.kind {
            Kind::Additive(v) => {
                let mut u = vec![0; self.n];
                for (o, &a) in owner.iter().enumerate() {
                    u[a] += v[a][o];
                }
                u
            }
            Kind::Oracle(o) => {
                let masks = self.masks(owner);
                (0..self.n).map(|a| o[a].value(masks[a])).collect()
            }
        }
    }

    /// `cap[agent][item]`: an upper bound on the marginal of `item` for
    /// `agent` over every bundle.
    pub fn caps(&self) -> Vec<Vec<i64>> {
        match self.kind {
            Kind::Additive(v) => v.to_vec(),
            Kind::Oracle(o) => o.iter().map(|f| oracle_caps(f, self.m)).collect(),
        }
    }

    /// Class id per agent; agents with identical valuations share a class.
    /// Ids are numbered by first appearance.
    pub fn classes(&self) -> Vec<usize> {
        let mut class = vec![usize::MAX; self.n];
        let mut next = 0;
        for a in 0..self.n {
            if class[a] != usize::MAX {
                continue;
            }
            class[a] = next;
            for b in a + 1..self.n {
                if class[b] == usize::MAX && self.identical(a, b) {
                    class[b] = next;
                }
            }
            next += 1;
        }
        class
    }

    fn identical(&self, a: usize, b: usize) -> bool {
        match self.kind {
            Kind::Additive(v) => v[a] == v[b],
            Kind::Oracle(o) => o[a] == o[b],
        }
    }
}

fn oracle_caps(f: &Oracle, m: usize) -> Vec<i64> {
    match f {
        Oracle::Rx3cGadget(g) => (0..m).map(|o| g.max_marginal(o)).collect(),
        Oracle::Tabular(t) => {
            let mut caps = vec![i64::MIN; m];
            for mask in 0..(1u64 << m) {
                let base = t.value(mask);
                for (o, cap) in caps.iter_mut().enumerate() {
                    if mask & (1 << o) == 0 {
                        *cap = (*cap).max(t.value(mask | (1 << o)) - base);
                    }
                }
            }
            caps
        }
    }
}

/// Totally ordered objective score. Variants are never mixed within a search.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Key {
    Mew(i64),
    Small(Reverse<usize>, u128),
    Big(NashScore),
}

impl Key {
    pub fn zeros(&self) -> usize {
        match self {
            Key::Mew(_) => 0,
            Key::Small(z, _) => z.0,
            Key::Big(s) => s.zero_count(),
        }
    }

    pub fn ln_product(&self) -> f64 {
        match self {
            Key::Mew(_) => 0.0,
            Key::Small(_, p) => (*p as f64).ln(),
            Key::Big(s) => s.ln_product(),
        }
    }
}

#[derive(Clone, Copy)]
pub(crate) struct Scorer {
    pub objective: Objective,
    small: bool,
}

impl Scorer {
    /// Uses 128-bit products when every achievable product fits.
    pub fn new(objective: Objective, caps: &[Vec<i64>]) -> Self {
        let log2: f64 = caps
            .iter()
            .map(|row| (row.iter().map(|&v| v.max(0)).sum::<i64>().max(1) as f64).log2())
            .sum();
        Scorer { objective, small: log2 < 120.0 }
    }

    /// Always uses big-integer products.
    pub fn exact(objective: Objective) -> Self {
        Scorer { objective, small: false }
    }

    pub fn key(&self, util: &[i64]) -> Key {
        match self.objective {
            Objective::Mew => Key::Mew(util.iter().copied().min().unwrap_or(0)),
            Objective::Nsw if self.small => {
                let mut zeros = 0;
                let mut product = 1u128;
                for &u in util {
                    if u <= 0 {
                        zeros += 1;
                    } else {
                        product *= u as u128;
                    }
                }
                Key::Small(Reverse(zeros), product)
            }
            Objective::Nsw => Key::Big(nash_score(util)),
        }
    }
}
