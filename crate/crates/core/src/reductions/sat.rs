use super::bounds::{compute_bounds, BoundKind, BoundParams};
use super::{abc_params, sat_agent_labels, Cnf2p2n, Label, ReducedInstance, ReductionKind, SourceRef, VariableItems};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::regime::{classify_regime, RegimeTag};

/// Nash welfare gadget for `0 <= a < b < c <= 2b`: 8n agents, 11n items.
pub fn gen_mnw_sat(phi: &Cnf2p2n, a: i64, b: i64, c: i64) -> Result<ReducedInstance> {
    let regime = classify_regime(&[a, b, c])?;
    let kind = match regime.tag {
        RegimeTag::GoodsCase1 => BoundKind::SatCase1,
        RegimeTag::GoodsCase2 => BoundKind::SatCase2,
        other => {
            return Err(Error::WrongRegime(format!(
                "the SAT gadget needs 0 <= a < b < c <= 2b, got ({a}, {b}, {c}) in {other}"
            )))
        }
    };
    let n = phi.variables();
    let m = phi.clauses().len();
    let vars = VariableItems { per_var: 5 };
    let type1 = 5 * n;
    let type2 = type1 + 2 * n;
    let items_total = type2 + 4 * n;

    let mut items = vars.labels(n, &["clog"]);
    items.extend((1..=2 * n).map(|i| Label::new(format!("d{i}"), "specialI")));
    items.extend((1..=4 * n).map(|i| Label::new(format!("dhat{i}"), "specialII")));
    let mut agents = sat_agent_labels(phi);
    agents.extend((1..=4 * n).map(|i| Label::new(format!("t{i}"), "dummyII")));

    let mut matrix = Vec::with_capacity(8 * n);
    for v in 1..=n as i64 {
        for lit in [v, -v] {
            let mut row = vec![a; items_total];
            for o in vars.copies(lit) {
                row[o] = b;
            }
            row[(v as usize - 1) * 5 + 4] = c;
            matrix.push(row);
        }
    }
    for (j, clause) in phi.clauses().iter().enumerate() {
        let mut row = vec![a; items_total];
        for &lit in clause {
            for o in vars.copies(lit) {
                row[o] = b;
            }
        }
        row[type1 + j] = b;
        matrix.push(row);
    }
    for i in 0..2 * n - m {
        let mut row = vec![a; items_total];
        for o in vars.all_literals(n) {
            row[o] = b;
        }
        row[type1 + m + i] = b;
        matrix.push(row);
    }
    for i in 0..4 * n {
        let mut row = vec![a; items_total];
        for o in vars.all_literals(n) {
            row[o] = b;
        }
        row[type2 + i] = c;
        matrix.push(row);
    }

    Ok(ReducedInstance {
        kind: ReductionKind::MnwSat,
        instance: Instance::from_matrix(matrix, &[a, b, c])?,
        agents,
        items,
        certificate: compute_bounds(kind, &BoundParams::new(&[a, b, c]))?,
        source: SourceRef::Cnf(phi.clone()),
        params: abc_params(a, b, c),
    })
}
