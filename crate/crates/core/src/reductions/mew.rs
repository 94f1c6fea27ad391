use std::ops::Range;

use num_integer::Integer;

use super::bounds::{compute_bounds, BoundKind, BoundParams};
use super::{abc_params, sat_agent_labels, Cnf2p2n, Label, ReducedInstance, ReductionKind, SourceRef, VariableItems};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::regime::{classify_regime, RegimeTag};

/// Egalitarian gadget for goods `0 <= a < b < c`: 4n agents, 7n items, plus
/// n paddings when `2b > c` and `a > 0`.
pub fn gen_mew_goods(phi: &Cnf2p2n, a: i64, b: i64, c: i64) -> Result<ReducedInstance> {
    let regime = classify_regime(&[a, b, c])?;
    if !regime.tag.is_goods_triple() {
        return Err(Error::WrongRegime(format!("the goods gadget needs 0 <= a < b < c, got ({a}, {b}, {c})")));
    }
    let n = phi.variables();
    let m = phi.clauses().len();
    let vars = VariableItems { per_var: 5 };
    let specials = 5 * n;
    let paddings = if 2 * b > c && a > 0 { n } else { 0 };
    let total = 7 * n + paddings;

    let mut items = vars.labels(n, &["clog"]);
    items.extend((1..=2 * n).map(|i| Label::new(format!("d{i}"), "special")));
    items.extend((1..=paddings).map(|i| Label::new(format!("pad{i}"), "padding")));

    let mut matrix = Vec::with_capacity(4 * n);
    for v in 1..=n as i64 {
        for lit in [v, -v] {
            let mut row = vec![a; total];
            for o in vars.copies(lit) {
                row[o] = b;
            }
            row[(v as usize - 1) * 5 + 4] = c;
            matrix.push(row);
        }
    }
    for (j, clause) in phi.clauses().iter().enumerate() {
        let mut row = vec![a; total];
        for &lit in clause {
            for o in vars.copies(lit) {
                row[o] = b;
            }
        }
        row[specials + j] = b;
        matrix.push(row);
    }
    for i in 0..2 * n - m {
        let mut row = vec![a; total];
        for o in vars.all_literals(n) {
            row[o] = b;
        }
        row[specials + m + i] = b;
        matrix.push(row);
    }

    Ok(ReducedInstance {
        kind: ReductionKind::MewGoods,
        instance: Instance::from_matrix(matrix, &[a, b, c])?,
        agents: sat_agent_labels(phi),
        items,
        certificate: compute_bounds(BoundKind::MewGoods, &BoundParams::new(&[a, b, c]))?,
        source: SourceRef::Cnf(phi.clone()),
        params: abc_params(a, b, c),
    })
}

/// Item layout of the two mixed-manna gadgets: 4n literal items, then
/// special groups (one per sink pair, one per clause agent, one per dummy),
/// then paddings.
pub(crate) struct GroupLayout {
    pub n: usize,
    pub m: usize,
    pub sink_group: usize,
    pub other_group: usize,
}

impl GroupLayout {
    pub fn sink_specials(&self, v: usize) -> Range<usize> {
        let start = 4 * self.n + v * self.sink_group;
        start..start + self.sink_group
    }

    /// Special group of clause agent `j`; dummies continue at `j = m + i`.
    pub fn other_specials(&self, j: usize) -> Range<usize> {
        let start = 4 * self.n + self.n * self.sink_group + j * self.other_group;
        start..start + self.other_group
    }

    pub fn paddings_start(&self) -> usize {
        4 * self.n + self.n * self.sink_group + 2 * self.n * self.other_group
    }

    fn special_labels(&self) -> Vec<Label> {
        let mut out = Vec::new();
        for v in 1..=self.n {
            out.extend((1..=self.sink_group).map(|s| Label::new(format!("sp{v}.{s}"), "special")));
        }
        for j in 1..=self.m {
            out.extend((1..=self.other_group).map(|s| Label::new(format!("spC{j}.{s}"), "special")));
        }
        for i in 1..=2 * self.n - self.m {
            out.extend((1..=self.other_group).map(|s| Label::new(format!("sps{i}.{s}"), "special")));
        }
        out
    }
}

/// Rows for sink, clause, and dummy agents where the literal and special
/// items they care about get `hi` and everything else `lo`.
fn grouped_rows(phi: &Cnf2p2n, layout: &GroupLayout, total: usize, hi: i64, lo: i64) -> Vec<Vec<i64>> {
    let n = layout.n;
    let m = layout.m;
    let vars = VariableItems { per_var: 4 };
    let mut matrix = Vec::with_capacity(4 * n);
    for v in 1..=n as i64 {
        for lit in [v, -v] {
            let mut row = vec![lo; total];
            for o in vars.copies(lit) {
                row[o] = hi;
            }
            row[layout.sink_specials(v as usize - 1)].fill(hi);
            matrix.push(row);
        }
    }
    for (j, clause) in phi.clauses().iter().enumerate() {
        let mut row = vec![lo; total];
        for &lit in clause {
            for o in vars.copies(lit) {
                row[o] = hi;
            }
        }
        row[layout.other_specials(j)].fill(hi);
        matrix.push(row);
    }
    for i in 0..2 * n - m {
        let mut row = vec![lo; total];
        for o in vars.all_literals(n) {
            row[o] = hi;
        }
        row[layout.other_specials(m + i)].fill(hi);
        matrix.push(row);
    }
    matrix
}

/// Egalitarian gadget for `{a, c}` with `a < 0 < c`, `|a| > |c|`. The pair
/// is first divided by `gcd(|a|, c)`; the instance has 4n agents and
/// `3cn + 3|a|n` items.
pub fn gen_mew_mixed(phi: &Cnf2p2n, a: i64, c: i64) -> Result<ReducedInstance> {
    if !(a < 0 && 0 < c && a.unsigned_abs() > c.unsigned_abs()) {
        return Err(Error::WrongRegime(format!("the mixed gadget needs a < 0 < c and |a| > |c|, got ({a}, {c})")));
    }
    let g = a.abs().gcd(&c);
    let (a, c) = (a / g, c / g);
    let n = phi.variables();
    let layout = GroupLayout {
        n,
        m: phi.clauses().len(),
        sink_group: a.unsigned_abs() as usize - 2,
        other_group: a.unsigned_abs() as usize - 1,
    };
    let pads = 3 * c as usize * n;
    let total = layout.paddings_start() + pads;

    let mut items = VariableItems { per_var: 4 }.labels(n, &[]);
    items.extend(layout.special_labels());
    items.extend((1..=pads).map(|i| Label::new(format!("pad{i}"), "padding")));

    let matrix = grouped_rows(phi, &layout, total, c, a);
    Ok(ReducedInstance {
        kind: ReductionKind::MewMixed,
        instance: Instance::from_matrix(matrix, &[a, c])?,
        agents: sat_agent_labels(phi),
        items,
        certificate: compute_bounds(BoundKind::MewMixed, &BoundParams::new(&[a, c]))?,
        source: SourceRef::Cnf(phi.clone()),
        params: vec![("a".into(), a), ("c".into(), c)],
    })
}

/// Egalitarian gadget for `{2b, b, -k* b}` with `b < 0`, `k* >= 2`: 4n agents
/// and `3nk* + 3n` items.
pub fn gen_mew_two_negative(phi: &Cnf2p2n, b: i64, kstar: i64) -> Result<ReducedInstance> {
    if b >= 0 || kstar < 2 {
        return Err(Error::WrongRegime(format!("the two-negative gadget needs b < 0 and k* >= 2, got b = {b}, k* = {kstar}")));
    }
    let (a, c) = (2 * b, -kstar * b);
    debug_assert_eq!(classify_regime(&[a, b, c]).map(|r| r.tag), Ok(RegimeTag::TwoNegative));
    let n = phi.variables();
    let m = phi.clauses().len();
    let layout = GroupLayout { n, m, sink_group: kstar as usize - 2, other_group: kstar as usize - 1 };
    let pad0 = layout.paddings_start();
    let total = pad0 + 3 * n;

    let mut items = VariableItems { per_var: 4 }.labels(n, &[]);
    items.extend(layout.special_labels());
    items.extend((1..=n).map(|v| Label::new(format!("pad{v}"), "padding")));
    items.extend((1..=m).map(|j| Label::new(format!("padC{j}"), "padding")));
    items.extend((1..=2 * n - m).map(|i| Label::new(format!("pads{i}"), "padding")));

    let mut matrix = grouped_rows(phi, &layout, total, b, a);
    for (agent, row) in matrix.iter_mut().enumerate() {
        let pad = if agent < 2 * n { pad0 + agent / 2 } else { pad0 + n + (agent - 2 * n) };
        row[pad] = c;
    }
    let mut params = abc_params(a, b, c);
    params.push(("kstar".into(), kstar));
    Ok(ReducedInstance {
        kind: ReductionKind::MewTwoNegative,
        instance: Instance::from_matrix(matrix, &[a, b, c])?,
        agents: sat_agent_labels(phi),
        items,
        certificate: compute_bounds(BoundKind::MewTwoNegative, &BoundParams::new(&[a, b, c]))?,
        source: SourceRef::Cnf(phi.clone()),
        params,
    })
}
