//! Checkers for structural properties of valuations, the exchange
//! inequalities behind the gadget proofs, end-to-end gap verification and
//! solver cross-check fuzzing.

mod fuzz;
mod gap;
mod lemmas;
mod structure;

pub use fuzz::{fuzz_cross_check, fuzz_instance, trial_seed, Discrepancy, FuzzConfig, FuzzSummary};
pub use gap::{describe, verify_gap, BackwardCheck, ForwardCheck, GapInput, GapReport, Verdict, BACKWARD_SEARCH_CAP};
pub use lemmas::{check_transfer_lemmas, LemmaCheck, LemmaReport};
pub use structure::{
    check_marginal_set, check_order_neutrality, check_submodularity, check_unique_decomposition, fmt_multiset,
    order_neutral_by_permutations, random_ternary_submodular, DecompositionClash, Violation, ViolationKind,
    MAX_CHECK_ITEMS,
};
