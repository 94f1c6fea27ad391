use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{bits, SetFunction, TabularOracle, ValueSet};

/// Exhaustive checks enumerate every bundle, so they stop at this many items.
pub const MAX_CHECK_ITEMS: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    Submodularity,
    MarginalSet,
    OrderNeutrality,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::Submodularity => "submodularity",
            ViolationKind::MarginalSet => "marginal-set",
            ViolationKind::OrderNeutrality => "order-neutrality",
        }
    }
}

/// A witness that an oracle leaves some class.
///
/// `values` holds the marginals involved:
/// - submodularity: `[Δ(S, o), Δ(T, o)]` with `Δ(S, o) < Δ(T, o)`;
/// - marginal set: `[Δ(S, o)]`;
/// - order neutrality: `[Δ(S, o), Δ(S+o, o'), Δ(S, o'), Δ(S+o', o)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub s: Vec<usize>,
    pub t: Option<Vec<usize>>,
    pub o: usize,
    pub o2: Option<usize>,
    pub values: Vec<i64>,
}

impl Violation {
    /// Re-evaluates the witness bundles and checks they yield the recorded
    /// numbers and still violate the property.
    pub fn reproduces(&self, oracle: &impl SetFunction, value_set: Option<&ValueSet>) -> bool {
        let s = mask(&self.s);
        let d = |bundle: u64, o: usize| oracle.marginal(bundle, o);
        match self.kind {
            ViolationKind::Submodularity => {
                let Some(t) = &self.t else { return false };
                let t = mask(t);
                let got = vec![d(s, self.o), d(t, self.o)];
                s & !t == 0 && got == self.values && got[0] < got[1]
            }
            ViolationKind::MarginalSet => {
                let got = d(s, self.o);
                vec![got] == self.values && value_set.is_none_or(|vs| !vs.contains(got))
            }
            ViolationKind::OrderNeutrality => {
                let Some(o2) = self.o2 else { return false };
                let got = vec![d(s, self.o), d(s | 1 << self.o, o2), d(s, o2), d(s | 1 << o2, self.o)];
                got == self.values && sorted_pair(got[0], got[1]) != sorted_pair(got[2], got[3])
            }
        }
    }
}

fn mask(items: &[usize]) -> u64 {
    items.iter().fold(0, |m, &o| m | 1 << o)
}

fn sorted_pair(x: i64, y: i64) -> [i64; 2] {
    [x.max(y), x.min(y)]
}

fn fmt_set(items: &[usize]) -> String {
    let parts: Vec<String> = items.iter().map(|o| o.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Formats a two-element multiset largest first, e.g. `{1, -1}`.
pub fn fmt_multiset(x: i64, y: i64) -> String {
    let [hi, lo] = sorted_pair(x, y);
    format!("{{{hi}, {lo}}}")
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = fmt_set(&self.s);
        match self.kind {
            ViolationKind::Submodularity => write!(
                f,
                "submodularity: S = {s}, T = {}, o = {}: marginal {} at S < {} at T",
                fmt_set(self.t.as_deref().unwrap_or(&[])),
                self.o,
                self.values[0],
                self.values[1]
            ),
            ViolationKind::MarginalSet => {
                write!(f, "marginal-set: S = {s}, o = {}: marginal {} outside the set", self.o, self.values[0])
            }
            ViolationKind::OrderNeutrality => write!(
                f,
                "order-neutrality: S = {s}, o = {}, o' = {}: {} vs {}",
                self.o,
                self.o2.unwrap_or(0),
                fmt_multiset(self.values[0], self.values[1]),
                fmt_multiset(self.values[2], self.values[3])
            ),
        }
    }
}

/// Values of all `2^m` bundles.
fn table(oracle: &impl SetFunction) -> Result<(usize, Vec<i64>)> {
    let m = oracle.item_count();
    if m > MAX_CHECK_ITEMS {
        return Err(Error::TooLarge(format!(
            "exhaustive checks support at most {MAX_CHECK_ITEMS} items, got {m}"
        )));
    }
    Ok((m, (0..1u64 << m).map(|s| oracle.value(s)).collect()))
}

/// All `(S, T, o)` with `S ⊆ T`, `o ∉ T` and `Δ(S, o) < Δ(T, o)`, ordered by
/// `o`, then `T`, then `S`.
pub fn check_submodularity(oracle: &impl SetFunction) -> Result<Vec<Violation>> {
    let (m, v) = table(oracle)?;
    let full = (1u64 << m) - 1;
    let mut out = Vec::new();
    for o in 0..m {
        let ob = 1u64 << o;
        let rest = full & !ob;
        let mut t = 0u64;
        loop {
            let dt = v[(t | ob) as usize] - v[t as usize];
            // submasks of t, ascending
            let mut s = 0u64;
            loop {
                let ds = v[(s | ob) as usize] - v[s as usize];
                if ds < dt {
                    out.push(Violation {
                        kind: ViolationKind::Submodularity,
                        s: bits(s).collect(),
                        t: Some(bits(t).collect()),
                        o,
                        o2: None,
                        values: vec![ds, dt],
                    });
                }
                if s == t {
                    break;
                }
                s = (s.wrapping_sub(t)) & t;
            }
            if t == rest {
                break;
            }
            t = (t.wrapping_sub(rest)) & rest;
        }
    }
    Ok(out)
}

/// All `(S, o)` whose marginal lies outside `value_set`, ordered by `S`
/// then `o`.
pub fn check_marginal_set(oracle: &impl SetFunction, value_set: &ValueSet) -> Result<Vec<Violation>> {
    let (m, v) = table(oracle)?;
    let mut out = Vec::new();
    for s in 0..1u64 << m {
        for o in (0..m).filter(|&o| s >> o & 1 == 0) {
            let d = v[(s | 1 << o) as usize] - v[s as usize];
            if !value_set.contains(d) {
                out.push(Violation {
                    kind: ViolationKind::MarginalSet,
                    s: bits(s).collect(),
                    t: None,
                    o,
                    o2: None,
                    values: vec![d],
                });
            }
        }
    }
    Ok(out)
}

/// Adjacent-swap test: for every `S` and `o ≠ o' ∉ S`, adding `o` then `o'`
/// must produce the same multiset of marginals as adding `o'` then `o`. By
/// bubble-sorting any two insertion orders this is equivalent to order
/// neutrality. Returns the first failure (bundles ascending, then pairs
/// `o < o'`), labelled so that the order `o, o'` gives the multiset with the
/// larger top element.
pub fn check_order_neutrality(oracle: &impl SetFunction) -> Result<Option<Violation>> {
    let (m, v) = table(oracle)?;
    for s in 0..1u64 << m {
        let d = |bundle: u64, o: usize| v[(bundle | 1 << o) as usize] - v[bundle as usize];
        for o in (0..m).filter(|&o| s >> o & 1 == 0) {
            for o2 in (o + 1..m).filter(|&o2| s >> o2 & 1 == 0) {
                let first = [d(s, o), d(s | 1 << o, o2)];
                let second = [d(s, o2), d(s | 1 << o2, o)];
                let (p, q) = (sorted_pair(first[0], first[1]), sorted_pair(second[0], second[1]));
                if p != q {
                    let (o, o2, values) = if p >= q {
                        (o, o2, vec![first[0], first[1], second[0], second[1]])
                    } else {
                        (o2, o, vec![second[0], second[1], first[0], first[1]])
                    };
                    return Ok(Some(Violation {
                        kind: ViolationKind::OrderNeutrality,
                        s: bits(s).collect(),
                        t: None,
                        o,
                        o2: Some(o2),
                        values,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Order neutrality straight from the definition: every insertion order of
/// every bundle yields the same multiset of marginals. Exponential in the
/// bundle size; meant for cross-checking [`check_order_neutrality`].
pub fn order_neutral_by_permutations(oracle: &impl SetFunction) -> Result<bool> {
    let (m, v) = table(oracle)?;
    if m > 7 {
        return Err(Error::TooLarge(format!("permutation check supports at most 7 items, got {m}")));
    }
    for s in 0..1u64 << m {
        let items: Vec<usize> = bits(s).collect();
        let mut reference: Option<Vec<i64>> = None;
        let mut perm = items.clone();
        let mut ok = true;
        permute(&mut perm, 0, &mut |order| {
            let mut bundle = 0u64;
            let mut marginals: Vec<i64> = order
                .iter()
                .map(|&o| {
                    let d = v[(bundle | 1 << o) as usize] - v[bundle as usize];
                    bundle |= 1 << o;
                    d
                })
                .collect();
            marginals.sort_unstable();
            match &reference {
                None => reference = Some(marginals),
                Some(r) => ok &= *r == marginals,
            }
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Two two-marginal decompositions over `{-1, 0, c}` sharing a sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionClash {
    pub sum: i64,
    pub pairs: Vec<(i64, i64)>,
}

/// Whether every sum of two marginals from `{-1, 0, c}` determines the
/// unordered pair. `None` means it does.
pub fn check_unique_decomposition(c: i64) -> Result<Option<DecompositionClash>> {
    if c < 1 {
        return Err(Error::InvalidInput(format!("c must be at least 1, got {c}")));
    }
    let vals = [-1, 0, c];
    let mut pairs: Vec<(i64, (i64, i64))> = Vec::new();
    for i in 0..3 {
        for j in i..3 {
            pairs.push((vals[i] + vals[j], (vals[j], vals[i])));
        }
    }
    pairs.sort();
    for w in pairs.windows(2) {
        if w[0].0 == w[1].0 {
            let sum = w[0].0;
            let mut clash: Vec<(i64, i64)> = pairs.iter().filter(|p| p.0 == sum).map(|p| p.1).collect();
            clash.sort_by(|x, y| y.cmp(x));
            return Ok(Some(DecompositionClash { sum, pairs: clash }));
        }
    }
    Ok(None)
}

/// A random `{-1, 0, c}`-submodular set function on `m` items.
///
/// Items are split into blocks. A block is either scored by `c` times the
/// rank of a random graphic matroid (edges between a few vertices), or by a
/// concave function of how many of its items are present whose increments
/// run through `c`, then `0`, then `-1`.
pub fn random_ternary_submodular(rng: &mut impl Rng, m: usize, c: i64) -> Result<TabularOracle> {
    if m > crate::model::MAX_TABULAR_ITEMS {
        return Err(Error::TooLarge(format!("tabular oracles hold at most {} items", crate::model::MAX_TABULAR_ITEMS)));
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    enum Block {
        Graphic { items: Vec<usize>, edges: Vec<(usize, usize)>, vertices: usize },
        Concave { items: Vec<usize>, steps: Vec<i64> },
    }
    let mut blocks = Vec::new();
    let mut rest = &order[..];
    while !rest.is_empty() {
        let size = rng.gen_range(1..=rest.len().min(5));
        let (items, tail) = rest.split_at(size);
        rest = tail;
        if rng.gen_bool(0.5) {
            let vertices = rng.gen_range(2..=4);
            let edges = items
                .iter()
                .map(|_| {
                    let u = rng.gen_range(0..vertices);
                    let mut w = rng.gen_range(0..vertices - 1);
                    if w >= u {
                        w += 1;
                    }
                    (u, w)
                })
                .collect();
            blocks.push(Block::Graphic { items: items.to_vec(), edges, vertices });
        } else {
            let mut steps: Vec<i64> = (0..items.len()).map(|_| [c, 0, -1][rng.gen_range(0..3)]).collect();
            steps.sort_unstable_by(|x, y| y.cmp(x));
            blocks.push(Block::Concave { items: items.to_vec(), steps });
        }
    }
    TabularOracle::from_fn(m, |bundle| {
        blocks
            .iter()
            .map(|b| match b {
                Block::Graphic { items, edges, vertices } => {
                    let mut parent: Vec<usize> = (0..*vertices).collect();
                    fn find(p: &mut [usize], x: usize) -> usize {
                        let mut r = x;
                        while p[r] != r {
                            r = p[r];
                        }
                        r
                    }
                    let mut rank = 0;
                    for (idx, &o) in items.iter().enumerate() {
                        if bundle >> o & 1 == 1 {
                            let (u, w) = edges[idx];
                            let (ru, rw) = (find(&mut parent, u), find(&mut parent, w));
                            if ru != rw {
                                parent[ru] = rw;
                                rank += 1;
                            }
                        }
                    }
                    c * rank
                }
                Block::Concave { items, steps } => {
                    let count = items.iter().filter(|&&o| bundle >> o & 1 == 1).count();
                    steps[..count].iter().sum()
                }
            })
            .sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AdditiveRow;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn additive_rows_pass() {
        let row = [-1, 0, 2, 2, -1];
        let o = AdditiveRow(&row);
        assert!(check_submodularity(&o).unwrap().is_empty());
        assert!(check_marginal_set(&o, &ValueSet::new(&[-1, 0, 2]).unwrap()).unwrap().is_empty());
        assert_eq!(check_order_neutrality(&o).unwrap(), None);
    }

    #[test]
    fn planted_increasing_marginal() {
        // v = 1 only on the full pair: the second item is worth more late.
        let o = TabularOracle::new(2, vec![0, 0, 0, 1]).unwrap();
        let v = check_submodularity(&o).unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|x| x.reproduces(&o, None)));
        assert_eq!(v[0].values, vec![0, 1]);
    }

    #[test]
    fn decomposition() {
        let clash = check_unique_decomposition(1).unwrap().unwrap();
        assert_eq!(clash.sum, 0);
        assert_eq!(clash.pairs, vec![(1, -1), (0, 0)]);
        for c in 2..=10 {
            assert_eq!(check_unique_decomposition(c).unwrap(), None);
        }
        assert!(check_unique_decomposition(0).is_err());
    }

    #[test]
    fn random_oracles_are_in_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for c in [2, 3, 5] {
            for m in 1..=6 {
                let o = random_ternary_submodular(&mut rng, m, c).unwrap();
                assert!(check_submodularity(&o).unwrap().is_empty());
                assert!(check_marginal_set(&o, &ValueSet::new(&[-1, 0, c]).unwrap()).unwrap().is_empty());
                assert!(order_neutral_by_permutations(&o).unwrap());
            }
        }
    }
}
