use std::cmp::Ordering;
use std::fmt;

use crate::error::Result;
use crate::model::{evaluate_allocation, Allocation};
use crate::reductions::bounds::gamma;
use crate::reductions::{build_witness, CertValue, ReducedInstance, SourceRef, WitnessData};
use crate::solvers::{solve_exact, Method, ObjectiveValue, OptResult, SolveLimits, SolveStatus};
use crate::welfare::{nash_score, Objective};

/// Largest `n^m` for which the backward direction is attempted.
pub const BACKWARD_SEARCH_CAP: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Confirmed,
    ForwardOnly,
    Refuted,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Confirmed => "confirmed",
            Verdict::ForwardOnly => "forward-only",
            Verdict::Refuted => "refuted",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What the caller knows about the source instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapInput {
    /// A YES certificate for the source.
    Yes(WitnessData),
    /// The source is claimed to be a NO instance.
    No,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForwardCheck {
    pub allocation: Allocation,
    pub utilities: Vec<i64>,
    pub value: ObjectiveValue,
    pub yes_value: CertValue,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackwardCheck {
    pub optimum: OptResult,
    pub bound: CertValue,
    /// `None` when the solver hit a limit or the comparison was too close to
    /// call without exact arithmetic.
    pub holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub forward: Option<ForwardCheck>,
    pub backward: Option<BackwardCheck>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

/// Checks one direction of a reduction's gap on a concrete instance.
///
/// For a YES input the witness allocation is built and evaluated exactly; it
/// must reach the certificate's YES value. For a NO input the source is
/// first checked to really be a NO instance (brute force on the source
/// side), then the instance is solved exactly: a proved Nash optimum must
/// not exceed the NO bound, a proved egalitarian optimum must stay below
/// the YES value. Solver limits give `ForwardOnly`; only exact results can
/// give `Refuted`.
pub fn verify_gap(reduced: &ReducedInstance, input: &GapInput, limits: &SolveLimits) -> Result<GapReport> {
    let cert = &reduced.certificate;
    let mut notes = Vec::new();
    match input {
        GapInput::Yes(data) => {
            let allocation = build_witness(reduced, data)?;
            let utilities = evaluate_allocation(&reduced.instance, &allocation)?;
            let (value, holds) = match (&cert.yes_value, cert.objective) {
                (CertValue::Nash(yes), _) => {
                    let score = nash_score(&utilities);
                    // exact evaluation; a failed comparison means the
                    // expression had no exact form and floats tied
                    let holds = yes.cmp_geometric_mean(&score).is_some_and(|o| o != Ordering::Less);
                    (ObjectiveValue::Nash(score), holds)
                }
                (CertValue::Egalitarian(yes), _) => {
                    let min = utilities.iter().copied().min().unwrap_or(0);
                    (ObjectiveValue::Egalitarian(min), min >= *yes)
                }
            };
            let verdict = if holds { Verdict::Confirmed } else { Verdict::Refuted };
            if !holds {
                notes.push("witness allocation falls short of the YES value".into());
            }
            let forward = ForwardCheck { allocation, utilities, value, yes_value: cert.yes_value.clone(), holds };
            Ok(GapReport { forward: Some(forward), backward: None, notes, verdict })
        }
        GapInput::No => {
            let source_no = source_is_no(reduced);
            match source_no {
                Some(true) => {}
                Some(false) => {
                    notes.push("source is not a NO instance; the NO bound does not apply".into());
                    return Ok(GapReport { forward: None, backward: None, notes, verdict: Verdict::ForwardOnly });
                }
                None => notes.push("source too large to confirm it is a NO instance".into()),
            }
            let space = (reduced.instance.agents() as f64).powf(reduced.instance.items() as f64);
            if space > BACKWARD_SEARCH_CAP {
                notes.push(format!(
                    "search space {}^{} is beyond exact solving",
                    reduced.instance.agents(),
                    reduced.instance.items()
                ));
                return Ok(GapReport { forward: None, backward: None, notes, verdict: Verdict::ForwardOnly });
            }
            let optimum = solve_exact(&reduced.instance, cert.objective, Method::BnB, limits)?;
            let holds = if optimum.status != SolveStatus::Proved {
                notes.push("solver limit reached before the optimum was proved".into());
                None
            } else {
                match (&optimum.value, &cert.no_bound, &cert.yes_value) {
                    (ObjectiveValue::Nash(score), CertValue::Nash(no), _) => {
                        let cmp = no.cmp_geometric_mean(score);
                        if cmp.is_none() {
                            notes.push("optimum and NO bound agree to float precision".into());
                        }
                        cmp.map(|o| o != Ordering::Greater)
                    }
                    (ObjectiveValue::Egalitarian(v), _, CertValue::Egalitarian(yes)) => Some(v < yes),
                    _ => None,
                }
            };
            let verdict = match holds {
                Some(true) => Verdict::Confirmed,
                Some(false) if source_no == Some(true) => Verdict::Refuted,
                _ => Verdict::ForwardOnly,
            };
            if cert.objective == Objective::Nsw && holds == Some(false) {
                notes.push("proved optimum exceeds the NO bound".into());
            }
            let backward = BackwardCheck { optimum, bound: cert.no_bound.clone(), holds };
            Ok(GapReport { forward: None, backward: Some(backward), notes, verdict })
        }
    }
}

/// Whether the source instance is a NO instance in the sense the gap needs,
/// decided by brute force; `None` when the source is too large.
fn source_is_no(reduced: &ReducedInstance) -> Option<bool> {
    match &reduced.source {
        SourceRef::Cnf(phi) => {
            let n = phi.variables();
            if n > 20 {
                return None;
            }
            let sat = (0..1u32 << n).any(|bits| {
                let sigma: Vec<bool> = (0..n).map(|v| bits >> v & 1 == 1).collect();
                phi.satisfies(&sigma)
            });
            Some(!sat)
        }
        SourceRef::Graph { graph, k } => {
            let nv = graph.vertices();
            if nv > 24 {
                return None;
            }
            // every k-subset must leave at least gamma |E| edges uncovered
            let ne = graph.edges().len();
            let mut best = 0usize;
            for s in 0..1u32 << nv {
                if s.count_ones() as usize != *k {
                    continue;
                }
                let covered = graph.edges().iter().filter(|&&(u, v)| s >> u & 1 == 1 || s >> v & 1 == 1).count();
                best = best.max(covered);
            }
            let uncovered = num_rational::BigRational::from_integer(((ne - best) as i64).into());
            Some(uncovered >= gamma() * num_rational::BigRational::from_integer((ne as i64).into()))
        }
        SourceRef::Rx3c(source) => {
            let t = source.triples().len();
            if t > 24 {
                return None;
            }
            let k = source.k();
            let found = (0..1u32 << t).any(|s| {
                s.count_ones() as usize == k && source.is_exact_cover(&crate::model::bits(s as u64).collect::<Vec<_>>())
            });
            Some(!found)
        }
    }
}

impl fmt::Display for GapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(fw) = &self.forward {
            writeln!(f, "forward: witness utilities {:?}", fw.utilities)?;
            writeln!(f, "forward: witness {}", describe(&fw.value))?;
            writeln!(f, "forward: yes value {}", fw.yes_value)?;
            writeln!(f, "forward: {}", if fw.holds { "holds" } else { "fails" })?;
        }
        if let Some(bw) = &self.backward {
            writeln!(f, "backward: optimum {} ({}, {} nodes)", describe(&bw.optimum.value), bw.optimum.status, bw.optimum.nodes)?;
            writeln!(f, "backward: no bound {}", bw.bound)?;
            let state = match bw.holds {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "undecided",
            };
            writeln!(f, "backward: {state}")?;
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        write!(f, "verdict: {}", self.verdict)
    }
}

/// One-line rendering of an objective value, with the geometric mean for
/// Nash welfare.
pub fn describe(value: &ObjectiveValue) -> String {
    match value {
        ObjectiveValue::Nash(s) => {
            let exact = s.exact_geometric_mean().map(|g| format!(" (exactly {g})")).unwrap_or_default();
            format!(
                "nash product {} over {} agents, {} non-positive, geometric mean {:.10}{exact}",
                s.product(),
                s.agents(),
                s.zero_count(),
                s.geometric_mean()
            )
        }
        ObjectiveValue::Egalitarian(v) => format!("egalitarian welfare {v}"),
    }
}
