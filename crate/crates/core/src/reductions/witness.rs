use super::mew::GroupLayout;
use super::source::literal_true;
use super::{Cnf2p2n, Graph3Reg, ReducedInstance, ReductionKind, Rx3cInstance, SourceRef, VariableItems, WitnessData};
use crate::error::{Error, Result};
use crate::model::Allocation;

/// Builds the allocation the forward direction of a reduction produces from
/// a source certificate (satisfying assignment, vertex cover, exact cover).
pub fn build_witness(reduced: &ReducedInstance, data: &WitnessData) -> Result<Allocation> {
    let m = reduced.instance.items();
    let mut owner: Vec<Option<usize>> = vec![None; m];
    match (&reduced.source, data) {
        (SourceRef::Cnf(phi), WitnessData::Assignment(sigma)) => {
            if sigma.len() != phi.variables() {
                return Err(Error::InvalidWitness(format!(
                    "assignment has {} values, formula has {} variables",
                    sigma.len(),
                    phi.variables()
                )));
            }
            if !phi.satisfies(sigma) {
                return Err(Error::InvalidWitness(format!(
                    "assignment leaves {} clause(s) unsatisfied",
                    phi.unsatisfied(sigma)
                )));
            }
            sat_witness(reduced, phi, sigma, &mut owner)?;
        }
        (SourceRef::Graph { graph, k }, WitnessData::VertexCover(cover)) => {
            vc_witness(reduced, graph, *k, cover, &mut owner)?;
        }
        (SourceRef::Rx3c(source), WitnessData::ExactCover(chosen)) => {
            rx3c_witness(source, chosen, &mut owner)?;
        }
        _ => {
            return Err(Error::InvalidWitness(format!("witness kind does not match the {} reduction", reduced.kind)))
        }
    }
    let assignment = owner
        .iter()
        .enumerate()
        .map(|(o, a)| a.ok_or_else(|| Error::InvalidWitness(format!("item {} left unallocated", reduced.items[o].name))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Allocation::new(assignment))
}

fn param(reduced: &ReducedInstance, name: &str) -> i64 {
    reduced.params.iter().find(|(k, _)| k == name).map(|(_, v)| *v).unwrap_or(0)
}

/// Lowest-index unallocated copy among the given literals.
fn take_literal(owner: &mut [Option<usize>], vars: &VariableItems, lits: impl Iterator<Item = i64>, agent: usize) -> bool {
    let free = lits.flat_map(|l| vars.copies(l)).filter(|&o| owner[o].is_none()).min();
    match free {
        Some(o) => {
            owner[o] = Some(agent);
            true
        }
        None => false,
    }
}

fn give(owner: &mut [Option<usize>], items: impl IntoIterator<Item = usize>, agent: usize) {
    for o in items {
        owner[o] = Some(agent);
    }
}

fn sat_witness(reduced: &ReducedInstance, phi: &Cnf2p2n, sigma: &[bool], owner: &mut [Option<usize>]) -> Result<()> {
    let n = phi.variables();
    let m = phi.clauses().len();
    let dummies = 2 * n - m;
    let goods = matches!(reduced.kind, ReductionKind::MnwSat | ReductionKind::MewGoods);
    let vars = VariableItems { per_var: if goods { 5 } else { 4 } };
    let layout = match reduced.kind {
        ReductionKind::MewMixed => {
            let a = param(reduced, "a").unsigned_abs() as usize;
            Some(GroupLayout { n, m, sink_group: a - 2, other_group: a - 1 })
        }
        ReductionKind::MewTwoNegative => {
            let k = param(reduced, "kstar") as usize;
            Some(GroupLayout { n, m, sink_group: k - 2, other_group: k - 1 })
        }
        _ => None,
    };
    let pad_run = match reduced.kind {
        ReductionKind::MewMixed => param(reduced, "c") as usize,
        _ => 1,
    };
    let mut next_pad = layout.as_ref().map_or(0, |l| l.paddings_start());
    let mut take_pads = |owner: &mut [Option<usize>], agent: usize| {
        give(owner, next_pad..next_pad + pad_run, agent);
        next_pad += pad_run;
    };

    // Sinks: the false side absorbs the false literal's copies.
    for v in 0..n {
        let lit = v as i64 + 1;
        let (true_side, false_side) = if sigma[v] { (2 * v, 2 * v + 1) } else { (2 * v + 1, 2 * v) };
        let false_lit = if sigma[v] { -lit } else { lit };
        if goods {
            owner[v * 5 + 4] = Some(true_side);
            give(owner, vars.copies(false_lit), false_side);
        } else {
            give(owner, vars.copies(false_lit), false_side);
            give(owner, layout.as_ref().unwrap().sink_specials(v), false_side);
            take_pads(owner, false_side);
        }
    }

    let specials = 5 * n;
    for (j, clause) in phi.clauses().iter().enumerate() {
        let agent = 2 * n + j;
        let satisfied = clause.iter().copied().filter(|&l| literal_true(l, sigma));
        if !take_literal(owner, &vars, satisfied, agent) {
            return Err(Error::InvalidWitness(format!("no free literal copy for clause {}", j + 1)));
        }
        match &layout {
            None => owner[specials + j] = Some(agent),
            Some(l) => {
                give(owner, l.other_specials(j), agent);
                take_pads(owner, agent);
            }
        }
    }
    for i in 0..dummies {
        let agent = 2 * n + m + i;
        let all = (1..=n as i64).flat_map(|v| [v, -v]);
        if !take_literal(owner, &vars, all, agent) {
            return Err(Error::InvalidWitness(format!("no free literal copy for dummy {}", i + 1)));
        }
        match &layout {
            None => owner[specials + m + i] = Some(agent),
            Some(l) => {
                give(owner, l.other_specials(m + i), agent);
                take_pads(owner, agent);
            }
        }
    }

    match reduced.kind {
        ReductionKind::MnwSat => {
            for i in 0..4 * n {
                owner[7 * n + i] = Some(4 * n + i);
            }
        }
        ReductionKind::MewGoods => {
            // Paddings (present only when a > 0 and 2b > c) follow the clogs.
            for v in 0..n {
                if 7 * n + v < owner.len() {
                    owner[7 * n + v] = owner[v * 5 + 4];
                }
            }
        }
        _ => {}
    }
    Ok(())
}

fn vc_witness(
    reduced: &ReducedInstance,
    graph: &Graph3Reg,
    k: usize,
    cover: &[usize],
    owner: &mut [Option<usize>],
) -> Result<()> {
    let nv = graph.vertices();
    if let Some(v) = cover.iter().find(|&&v| v >= nv) {
        return Err(Error::InvalidWitness(format!("vertex {} out of range", v + 1)));
    }
    if !graph.is_cover(cover) {
        return Err(Error::InvalidWitness("vertex set does not cover every edge".into()));
    }
    let mut chosen: Vec<usize> = cover.to_vec();
    chosen.sort_unstable();
    chosen.dedup();
    if chosen.len() > k {
        return Err(Error::InvalidWitness(format!("cover has {} vertices, more than k = {k}", chosen.len())));
    }
    for v in 0..nv {
        if chosen.len() == k {
            break;
        }
        if !chosen.contains(&v) {
            chosen.push(v);
        }
    }
    chosen.sort_unstable();

    let ne = graph.edges().len();
    let per_cover = match reduced.kind {
        ReductionKind::MnwBivalued3c => param(reduced, "c") as usize,
        _ => 1,
    };
    let specials = ne + per_cover * k;
    for (j, &v) in chosen.iter().enumerate() {
        give(owner, ne + j * per_cover..ne + (j + 1) * per_cover, v);
    }
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        if !chosen.contains(&u) {
            owner[e] = Some(u);
        } else if !chosen.contains(&v) {
            owner[e] = Some(v);
        }
    }
    let dummies = 3 * k - 3 * nv / 2;
    for i in 0..dummies {
        let agent = nv + i;
        give(owner, [specials + 2 * i, specials + 2 * i + 1], agent);
        let e = (0..ne).find(|&e| owner[e].is_none()).ok_or_else(|| {
            Error::InvalidWitness(format!("no edge left for dummy {}", i + 1))
        })?;
        owner[e] = Some(agent);
    }
    Ok(())
}

fn rx3c_witness(source: &Rx3cInstance, chosen: &[usize], owner: &mut [Option<usize>]) -> Result<()> {
    if !source.is_exact_cover(chosen) {
        return Err(Error::InvalidWitness("chosen triples are not an exact cover".into()));
    }
    let k = source.k();
    let mut picked = chosen.to_vec();
    picked.sort_unstable();
    for (j, &t) in picked.iter().enumerate() {
        owner[6 * k + j] = Some(t);
    }
    let mut pad = 7 * k;
    for (t, triple) in source.triples().iter().enumerate() {
        if picked.contains(&t) {
            continue;
        }
        owner[pad] = Some(t);
        pad += 1;
        for &e in triple {
            let copy = if owner[2 * e].is_none() { 2 * e } else { 2 * e + 1 };
            owner[copy] = Some(t);
        }
    }
    Ok(())
}
