use super::bounds::{compute_bounds, BoundKind, BoundParams};
use super::{abc_params, Graph3Reg, Label, ReducedInstance, ReductionKind, SourceRef};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::regime::{classify_regime, RegimeTag};

fn check_k(graph: &Graph3Reg, k: usize) -> Result<()> {
    let nv = graph.vertices();
    if 2 * k < nv || k > nv {
        return Err(Error::InvalidSource(format!("k = {k} outside [|V|/2, |V|] = [{}, {nv}]", nv / 2)));
    }
    Ok(())
}

fn edge_labels(graph: &Graph3Reg) -> Vec<Label> {
    graph.edges().iter().map(|(u, v)| Label::new(format!("e{}-{}", u + 1, v + 1), "edge")).collect()
}

fn agent_labels(graph: &Graph3Reg, dummies: usize) -> Vec<Label> {
    let mut agents: Vec<Label> = (1..=graph.vertices()).map(|v| Label::new(format!("node{v}"), "node")).collect();
    agents.extend((1..=dummies).map(|i| Label::new(format!("dummy{i}"), "dummy")));
    agents
}

/// Nash welfare gadget for `0 <= a < b`, `2b < c`: `3k - |V|/2` agents and
/// `7k - 3|V|/2` items (edges, then covers, then specials).
pub fn gen_mnw_vc(graph: &Graph3Reg, k: usize, a: i64, b: i64, c: i64) -> Result<ReducedInstance> {
    let regime = classify_regime(&[a, b, c])?;
    if regime.tag != RegimeTag::GoodsVc {
        return Err(Error::WrongRegime(format!(
            "the vertex-cover gadget needs 0 <= a < b and 2b < c, got ({a}, {b}, {c}) in {}",
            regime.tag
        )));
    }
    check_k(graph, k)?;
    let nv = graph.vertices();
    let ne = graph.edges().len();
    let dummies = 3 * k - 3 * nv / 2;
    let covers = ne;
    let specials = covers + k;
    let total = specials + 2 * dummies;

    let mut items = edge_labels(graph);
    items.extend((1..=k).map(|j| Label::new(format!("cover{j}"), "cover")));
    items.extend((1..=2 * dummies).map(|j| Label::new(format!("sp{j}"), "special")));

    let mut matrix = Vec::new();
    for v in 0..nv {
        let mut row = vec![a; total];
        for (e, &(x, y)) in graph.edges().iter().enumerate() {
            if x == v || y == v {
                row[e] = b;
            }
        }
        row[covers..specials].fill(c);
        matrix.push(row);
    }
    for i in 0..dummies {
        let mut row = vec![a; total];
        row[..ne].fill(b);
        row[covers..specials].fill(c);
        row[specials + 2 * i] = b;
        row[specials + 2 * i + 1] = b;
        matrix.push(row);
    }

    Ok(ReducedInstance {
        kind: ReductionKind::MnwVc,
        instance: Instance::from_matrix(matrix, &[a, b, c])?,
        agents: agent_labels(graph, dummies),
        items,
        certificate: compute_bounds(BoundKind::Vc, &BoundParams::new(&[a, b, c]).with_graph(nv, k))?,
        source: SourceRef::Graph { graph: graph.clone(), k },
        params: abc_params(a, b, c),
    })
}

/// Nash welfare gadget for `{3, c}` with `c > 3`, `3 ∤ c`: `3k - |V|/2`
/// agents and `6k + ck - 3|V|/2` items (edges, then covers, then specials).
pub fn gen_mnw_bivalued3c(graph: &Graph3Reg, k: usize, c: i64) -> Result<ReducedInstance> {
    let regime = classify_regime(&[3, c])?;
    if regime.tag != RegimeTag::GoodsVc3c {
        return Err(Error::WrongRegime(format!("the {{3, c}} gadget needs c > 3 and 3 ∤ c, got c = {c}")));
    }
    check_k(graph, k)?;
    let nv = graph.vertices();
    let ne = graph.edges().len();
    let dummies = 3 * k - 3 * nv / 2;
    let cover_count = c as usize * k;
    let specials = ne + cover_count;
    let total = specials + 2 * dummies;

    let mut items = edge_labels(graph);
    items.extend((1..=cover_count).map(|j| Label::new(format!("cover{j}"), "cover")));
    items.extend((1..=2 * dummies).map(|j| Label::new(format!("sp{j}"), "special")));

    let mut matrix = Vec::new();
    for v in 0..nv {
        let mut row = vec![3; total];
        for (e, &(x, y)) in graph.edges().iter().enumerate() {
            if x == v || y == v {
                row[e] = c;
            }
        }
        matrix.push(row);
    }
    for i in 0..dummies {
        let mut row = vec![3; total];
        row[..ne].fill(c);
        row[specials + 2 * i] = c;
        row[specials + 2 * i + 1] = c;
        matrix.push(row);
    }

    Ok(ReducedInstance {
        kind: ReductionKind::MnwBivalued3c,
        instance: Instance::from_matrix(matrix, &[3, c])?,
        agents: agent_labels(graph, dummies),
        items,
        certificate: compute_bounds(BoundKind::Vc3c, &BoundParams::new(&[3, c]).with_graph(nv, k))?,
        source: SourceRef::Graph { graph: graph.clone(), k },
        params: vec![("c".into(), c)],
    })
}
