use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ternfair::analysis::{
    check_marginal_set, check_order_neutrality, check_submodularity, check_transfer_lemmas, fuzz_cross_check,
    order_neutral_by_permutations, random_ternary_submodular, verify_gap, FuzzConfig, GapInput, Verdict,
};
use ternfair::reductions::{gen_mew_rx3c, gen_mnw_vc, Graph3Reg, Rx3cGadget, Rx3cInstance, WitnessData};
use ternfair::solvers::SolveLimits;
use ternfair::{SetFunction, TabularOracle, ValueSet};

fn gadget_k1() -> Rx3cGadget {
    Rx3cGadget::new(1, [0, 1, 2]).unwrap()
}

/// Cover count, distinct triple elements present, for the gadget's layout.
fn cover_and_classes(g: &Rx3cGadget, bundle: &[usize]) -> (usize, usize) {
    let k = g.k();
    let covers = bundle.iter().filter(|&&o| g.cover_items().contains(&o)).count();
    let classes = g.triple().iter().filter(|&&e| bundle.contains(&(2 * e)) || bundle.contains(&(2 * e + 1))).count();
    assert!(bundle.iter().all(|&o| o < 9 * k));
    (covers, classes)
}

#[test]
fn rx3c_marginals_leave_the_set_exactly_on_cover_additions() {
    let g = gadget_k1();
    let marginals = check_marginal_set(&g, &ValueSet::new(&[-1, 0, 1]).unwrap()).unwrap();
    assert!(!marginals.is_empty());
    for v in &marginals {
        assert!(g.cover_items().contains(&v.o));
        assert_eq!(cover_and_classes(&g, &v.s), (0, 3));
        assert_eq!(v.values, vec![-2]);
        assert!(v.reproduces(&g, Some(&ValueSet::new(&[-1, 0, 1]).unwrap())));
    }
    // independent count: subsets of the 6 copies hitting all 3 classes (3^3),
    // times any padding subset (4)
    assert_eq!(marginals.len(), 27 * 4);
    // with a single cover item no submodularity violation is possible
    assert!(check_submodularity(&g).unwrap().is_empty());
}

#[test]
fn rx3c_submodularity_fails_only_against_the_family_at_k2() {
    let source = Rx3cInstance::new(2, vec![[0, 1, 2], [3, 4, 5], [0, 1, 3], [2, 4, 5], [0, 2, 4], [1, 3, 5]]).unwrap();
    let g = Rx3cGadget::new(2, source.triples()[0]).unwrap();
    // restrict to 12 items by evaluating through a tabular copy on a subset:
    // copies of elements 0..3 (items 0..6), covers 12,13, paddings 14,15
    let keep = [0, 1, 2, 3, 4, 5, 6, 7, 12, 13, 14, 15];
    let sub = TabularOracle::from_fn(keep.len(), |mask| {
        let full = keep.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0u64, |m, (_, &o)| m | 1 << o);
        g.value(full)
    })
    .unwrap();
    let violations = check_submodularity(&sub).unwrap();
    assert!(!violations.is_empty());
    for v in &violations {
        let s: Vec<usize> = v.s.iter().map(|&i| keep[i]).collect();
        let t: Vec<usize> = v.t.as_ref().unwrap().iter().map(|&i| keep[i]).collect();
        assert!(g.cover_items().contains(&keep[v.o]));
        assert_eq!(cover_and_classes(&g, &s), (0, 3));
        assert!(cover_and_classes(&g, &t).0 >= 1);
        assert_eq!(v.values, vec![-2, -1]);
    }
}

#[test]
fn rx3c_order_neutrality_witness() {
    let v = check_order_neutrality(&gadget_k1()).unwrap().unwrap();
    assert!(v.s.is_empty());
    assert_eq!(v.o, 6);
    assert_eq!(v.values, vec![1, -1, 0, 0]);
}

#[test]
fn adjacent_swaps_agree_with_permutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..150 {
        let m = 1 + trial % 6;
        let oracle = if trial % 3 == 0 {
            let table = (0..1u64 << m).map(|s| if s == 0 { 0 } else { rand::Rng::gen_range(&mut rng, -2..=3) }).collect();
            TabularOracle::new(m, table).unwrap()
        } else {
            random_ternary_submodular(&mut rng, m, [1, 2, 3][trial % 3]).unwrap()
        };
        let swaps = check_order_neutrality(&oracle).unwrap().is_none();
        assert_eq!(swaps, order_neutral_by_permutations(&oracle).unwrap(), "trial {trial}");
    }
}

#[test]
fn transfer_lemmas_example_triples() {
    assert!(check_transfer_lemmas(0, 1, 2).unwrap().passed());
    assert!(check_transfer_lemmas(1, 2, 3).unwrap().passed());
    assert!(check_transfer_lemmas(0, 1, 3).unwrap().passed());
}

#[test]
fn gap_verdicts_on_small_fixtures() {
    let k33 = Graph3Reg::new(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect()).unwrap();
    let yes = gen_mnw_vc(&k33, 3, 0, 1, 3).unwrap();
    let report = verify_gap(&yes, &GapInput::Yes(WitnessData::VertexCover(vec![0, 1, 2])), &SolveLimits::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed, "{report}");

    let k4 = Graph3Reg::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let no = gen_mnw_vc(&k4, 2, 0, 1, 3).unwrap();
    let report = verify_gap(&no, &GapInput::No, &SolveLimits::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed, "{report}");

    // K3,3 has a 3-cover, so calling it a NO instance is rejected, not refuted
    let report = verify_gap(&yes, &GapInput::No, &SolveLimits::default()).unwrap();
    assert_eq!(report.verdict, Verdict::ForwardOnly, "{report}");

    let rx = gen_mew_rx3c(&Rx3cInstance::new(1, vec![[0, 1, 2]; 3]).unwrap()).unwrap();
    let report = verify_gap(&rx, &GapInput::Yes(WitnessData::ExactCover(vec![2])), &SolveLimits::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed, "{report}");
}

#[test]
fn limit_reached_is_never_refuted() {
    let k4 = Graph3Reg::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let no = gen_mnw_vc(&k4, 2, 0, 1, 3).unwrap();
    let report = verify_gap(&no, &GapInput::No, &SolveLimits::default().with_max_nodes(3)).unwrap();
    assert_eq!(report.verdict, Verdict::ForwardOnly, "{report}");
}

#[test]
fn fuzz_detects_a_broken_bound() {
    let mut config = FuzzConfig::new(1, 300);
    config.workers = 4;
    config.bound_mutation = Some(0.5);
    let summary = fuzz_cross_check(&config).unwrap();
    assert!(summary.discrepancies.iter().any(|d| d.check.starts_with("nsw/")), "{summary}");
}
