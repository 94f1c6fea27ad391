use super::bounds::{compute_bounds, BoundKind, BoundParams};
use super::{Label, ReducedInstance, ReductionKind, Rx3cInstance, SourceRef};
use crate::error::{Error, Result};
use crate::model::{mask_of, Instance, Oracle, SetFunction, SubmodularProfile, ValueSet};

/// Valuation of the agent for triple `F` in the exact-cover gadget.
///
/// Items: element `e` has copies `2e` and `2e + 1`, covers are
/// `6k..7k`, paddings `7k..9k`. With `P` paddings, `C` covers, `t` distinct
/// elements of `F` present, `d` surplus copies of `F`'s elements and `x`
/// copies of other elements,
/// `v(S) = P - x - d - max(0, C - 1) + [C >= 1] (1 - t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rx3cGadget {
    k: usize,
    triple: [usize; 3],
}

impl Rx3cGadget {
    pub fn new(k: usize, triple: [usize; 3]) -> Result<Self> {
        if k == 0 || 9 * k > 64 {
            return Err(Error::TooLarge(format!("gadget oracles need 1 <= k <= 7, got {k}")));
        }
        if let Some(e) = triple.iter().find(|&&e| e >= 3 * k) {
            return Err(Error::InvalidInput(format!("element {} outside the universe of size {}", e + 1, 3 * k)));
        }
        Ok(Rx3cGadget { k, triple })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn triple(&self) -> [usize; 3] {
        self.triple
    }

    pub fn cover_items(&self) -> std::ops::Range<usize> {
        6 * self.k..7 * self.k
    }

    pub fn padding_items(&self) -> std::ops::Range<usize> {
        7 * self.k..9 * self.k
    }

    fn range_mask(r: std::ops::Range<usize>) -> u64 {
        r.fold(0, |m, o| m | (1u64 << o))
    }

    /// Largest marginal the item can contribute to any bundle.
    pub fn max_marginal(&self, item: usize) -> i64 {
        if item < 6 * self.k {
            if self.triple.contains(&(item / 2)) {
                0
            } else {
                -1
            }
        } else {
            1
        }
    }
}

impl SetFunction for Rx3cGadget {
    fn item_count(&self) -> usize {
        9 * self.k
    }

    fn value(&self, bundle: u64) -> i64 {
        let p = (bundle & Self::range_mask(self.padding_items())).count_ones() as i64;
        let c = (bundle & Self::range_mask(self.cover_items())).count_ones() as i64;
        let (mut t, mut d, mut x) = (0, 0, 0);
        for e in 0..3 * self.k {
            let copies = ((bundle >> (2 * e)) & 3).count_ones() as i64;
            if self.triple.contains(&e) {
                if copies > 0 {
                    t += 1;
                    d += copies - 1;
                }
            } else {
                x += copies;
            }
        }
        let cover_term = if c >= 1 { 1 - t } else { 0 };
        p - x - d - (c - 1).max(0) + cover_term
    }
}

/// Evaluates the gadget for triple `f` (0-indexed elements) on the bundle.
pub fn rx3c_gadget_value(f: [usize; 3], bundle: &[usize], k: usize) -> Result<i64> {
    let gadget = Rx3cGadget::new(k, f)?;
    if let Some(o) = bundle.iter().find(|&&o| o >= 9 * k) {
        return Err(Error::InvalidInput(format!("item {o} outside the gadget's {} items", 9 * k)));
    }
    Ok(gadget.value(mask_of(bundle)))
}

/// One agent per triple; `6k` element copies, `k` covers, `2k` paddings.
pub fn gen_mew_rx3c(source: &Rx3cInstance) -> Result<ReducedInstance> {
    let k = source.k();
    let oracles = source
        .triples()
        .iter()
        .map(|&t| Rx3cGadget::new(k, t).map(Oracle::Rx3cGadget))
        .collect::<Result<Vec<_>>>()?;
    let instance = Instance::submodular(SubmodularProfile::new(oracles, ValueSet::new(&[-1, 0, 1])?)?);

    let agents = (1..=3 * k).map(|t| Label::new(format!("F{t}"), "triple")).collect();
    let mut items = Vec::with_capacity(9 * k);
    for e in 1..=3 * k {
        items.push(Label::new(format!("e{e}"), "element"));
        items.push(Label::new(format!("e{e}'"), "element"));
    }
    items.extend((1..=k).map(|j| Label::new(format!("cover{j}"), "cover")));
    items.extend((1..=2 * k).map(|j| Label::new(format!("pad{j}"), "padding")));

    Ok(ReducedInstance {
        kind: ReductionKind::MewRx3c,
        instance,
        agents,
        items,
        certificate: compute_bounds(BoundKind::MewRx3c, &BoundParams::new(&[-1, 0, 1]))?,
        source: SourceRef::Rx3c(source.clone()),
        params: vec![("k".into(), k as i64)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        let f = [0, 1, 2];
        assert_eq!(rx3c_gadget_value(f, &[0, 2, 4], 1), Ok(0));
        assert_eq!(rx3c_gadget_value(f, &[0, 1, 2, 4], 1), Ok(-1));
        assert_eq!(rx3c_gadget_value(f, &[6], 1), Ok(1));
        assert_eq!(rx3c_gadget_value(f, &[6, 0], 1), Ok(0));
        assert_eq!(rx3c_gadget_value(f, &[7, 0, 2, 4], 1), Ok(1));
        assert_eq!(rx3c_gadget_value(f, &[6, 7], 1), Ok(2));
        assert!(rx3c_gadget_value(f, &[9], 1).is_err());
    }

    #[test]
    fn max_marginal_dominates() {
        let g = Rx3cGadget::new(2, [0, 2, 4]).unwrap();
        for bundle in 0u64..1 << 18 {
            for o in 0..18 {
                if bundle >> o & 1 == 0 {
                    assert!(g.marginal(bundle, o) <= g.max_marginal(o));
                }
            }
        }
    }
}
