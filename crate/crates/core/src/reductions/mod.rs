//! Gadget constructions that turn source problems (2P2N-3SAT, vertex cover
//! on 3-regular graphs, restricted exact 3-cover) into allocation instances,
//! together with witness allocations and gap certificates.

pub mod bounds;
mod mew;
pub mod rx3c;
mod sat;
pub mod source;
mod vc;
mod witness;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::Instance;

pub use bounds::{compute_bounds, BoundKind, BoundParams, CertValue, GapCertificate, PowerExpr};
pub use mew::{gen_mew_goods, gen_mew_mixed, gen_mew_two_negative};
pub use rx3c::{gen_mew_rx3c, rx3c_gadget_value, Rx3cGadget};
pub use sat::gen_mnw_sat;
pub use source::{Cnf2p2n, Graph3Reg, Rx3cInstance};
pub use vc::{gen_mnw_bivalued3c, gen_mnw_vc};
pub use witness::build_witness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    MnwSat,
    MnwVc,
    MnwBivalued3c,
    MewGoods,
    MewMixed,
    MewTwoNegative,
    MewRx3c,
}

impl ReductionKind {
    pub const ALL: [ReductionKind; 7] = [
        ReductionKind::MnwSat,
        ReductionKind::MnwVc,
        ReductionKind::MnwBivalued3c,
        ReductionKind::MewGoods,
        ReductionKind::MewMixed,
        ReductionKind::MewTwoNegative,
        ReductionKind::MewRx3c,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReductionKind::MnwSat => "mnw-sat",
            ReductionKind::MnwVc => "mnw-vc",
            ReductionKind::MnwBivalued3c => "mnw-3c",
            ReductionKind::MewGoods => "mew-goods",
            ReductionKind::MewMixed => "mew-mixed",
            ReductionKind::MewTwoNegative => "mew-two-negative",
            ReductionKind::MewRx3c => "mew-rx3c",
        }
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReductionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReductionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown reduction '{s}'")))
    }
}

/// Stable name and gadget role of an agent or item.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Label {
    pub name: String,
    pub role: String,
}

impl Label {
    pub fn new(name: impl Into<String>, role: impl Into<String>) -> Self {
        Label { name: name.into(), role: role.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceRef {
    Cnf(Cnf2p2n),
    Graph { graph: Graph3Reg, k: usize },
    Rx3c(Rx3cInstance),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub kind: ReductionKind,
    pub instance: Instance,
    pub agents: Vec<Label>,
    pub items: Vec<Label>,
    pub certificate: GapCertificate,
    pub source: SourceRef,
    /// Generator parameters by name, e.g. `a`, `b`, `c`, `kstar`.
    pub params: Vec<(String, i64)>,
}

impl ReducedInstance {
    pub fn agents_with_role<'a>(&'a self, role: &'a str) -> impl Iterator<Item = usize> + 'a {
        self.agents.iter().enumerate().filter(move |(_, l)| l.role == role).map(|(i, _)| i)
    }

    pub fn items_with_role<'a>(&'a self, role: &'a str) -> impl Iterator<Item = usize> + 'a {
        self.items.iter().enumerate().filter(move |(_, l)| l.role == role).map(|(i, _)| i)
    }
}

/// Source-side certificate used to build a witness allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessData {
    /// Truth value per variable (index 0 is variable 1).
    Assignment(Vec<bool>),
    /// 0-indexed vertices.
    VertexCover(Vec<usize>),
    /// 0-indexed triple indices.
    ExactCover(Vec<usize>),
}

/// Literal item layout shared by the SAT-based gadgets: per variable, the
/// items `x, x', ~x, ~x'` followed by `extra` more items.
pub(crate) struct VariableItems {
    pub per_var: usize,
}

impl VariableItems {
    /// The two copies of the literal `lit` (DIMACS sign convention).
    pub fn copies(&self, lit: i64) -> [usize; 2] {
        let base = (lit.unsigned_abs() as usize - 1) * self.per_var + if lit > 0 { 0 } else { 2 };
        [base, base + 1]
    }

    pub fn all_literals(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (0..n).flat_map(move |v| (0..4).map(move |j| v * self.per_var + j))
    }

    pub fn labels(&self, n: usize, extra: &[&str]) -> Vec<Label> {
        let mut out = Vec::new();
        for v in 1..=n {
            out.push(Label::new(format!("x{v}"), "literal"));
            out.push(Label::new(format!("x{v}'"), "literal"));
            out.push(Label::new(format!("~x{v}"), "literal"));
            out.push(Label::new(format!("~x{v}'"), "literal"));
            for role in extra {
                out.push(Label::new(format!("{role}{v}"), *role));
            }
        }
        out
    }
}

/// Sink and clause/dummy agent labels shared by the SAT-based gadgets.
pub(crate) fn sat_agent_labels(phi: &Cnf2p2n) -> Vec<Label> {
    let n = phi.variables();
    let m = phi.clauses().len();
    let mut out = Vec::new();
    for v in 1..=n {
        out.push(Label::new(format!("pos{v}"), "pos"));
        out.push(Label::new(format!("neg{v}"), "neg"));
    }
    for j in 1..=m {
        out.push(Label::new(format!("C{j}"), "clause"));
    }
    for i in 1..=2 * n - m {
        out.push(Label::new(format!("s{i}"), "dummyI"));
    }
    out
}

pub(crate) fn abc_params(a: i64, b: i64, c: i64) -> Vec<(String, i64)> {
    vec![("a".into(), a), ("b".into(), b), ("c".into(), c)]
}
