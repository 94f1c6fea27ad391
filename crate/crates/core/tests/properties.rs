use proptest::prelude::*;

use ternfair::format::{load_instance, store_instance, InstanceDocument};
use ternfair::solvers::{partial_bounds, PartialBounds};
use ternfair::{egalitarian_welfare, evaluate_allocation, nash_score, Allocation, Instance, Objective};

/// Small additive instance over a goods triple: (instance, n, m).
fn goods_instance() -> impl Strategy<Value = (Instance, usize, usize)> {
    (1usize..=3, 1usize..=5, 0i64..=2, 1i64..=2, 1i64..=3).prop_flat_map(|(n, m, a, db, dc)| {
        let values = [a, a + db, a + db + dc];
        proptest::collection::vec(proptest::collection::vec(0usize..3, m), n).prop_map(move |idx| {
            let matrix = idx.iter().map(|row| row.iter().map(|&i| values[i]).collect()).collect();
            (Instance::from_matrix(matrix, &values).unwrap(), n, m)
        })
    })
}

fn completions(n: usize, partial: &[Option<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for slot in partial {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                let owners: Vec<usize> = match slot {
                    Some(a) => vec![*a],
                    None => (0..n).collect(),
                };
                owners.into_iter().map(move |a| {
                    let mut p = prefix.clone();
                    p.push(a);
                    p
                })
            })
            .collect();
    }
    out
}

proptest! {
    #[test]
    fn partial_bounds_never_cut_a_completion(
        (inst, n, m) in goods_instance(),
        mask in proptest::collection::vec(proptest::option::of(0usize..3), 5),
    ) {
        let partial: Vec<Option<usize>> = mask.into_iter().take(m).map(|o| o.map(|a| a % n)).collect();
        for objective in [Objective::Nsw, Objective::Mew] {
            let bound = partial_bounds(&inst, objective, &partial).unwrap();
            for owner in completions(n, &partial) {
                let util = evaluate_allocation(&inst, &Allocation::new(owner)).unwrap();
                match bound {
                    PartialBounds::Nash { min_zero_count, ln_product_bound } => {
                        let s = nash_score(&util);
                        prop_assert!(s.zero_count() >= min_zero_count);
                        if s.zero_count() == min_zero_count {
                            prop_assert!(s.ln_product() <= ln_product_bound + 1e-9);
                        }
                    }
                    PartialBounds::Egalitarian { upper } => {
                        prop_assert!(egalitarian_welfare(&util).unwrap() <= upper);
                    }
                }
            }
        }
    }

    #[test]
    fn nash_order_ignores_agent_order_and_scaling(
        u in proptest::collection::vec(0i64..7, 1..6),
        v in proptest::collection::vec(0i64..7, 1..6),
        lambda in 1i64..5,
    ) {
        let v: Vec<i64> = v.into_iter().chain(std::iter::repeat(1)).take(u.len()).collect();
        let mut r = u.clone();
        r.reverse();
        prop_assert_eq!(nash_score(&u), nash_score(&r));
        let scale = |x: &[i64]| x.iter().map(|y| y * lambda).collect::<Vec<_>>();
        prop_assert_eq!(nash_score(&u).cmp(&nash_score(&v)), nash_score(&scale(&u)).cmp(&nash_score(&scale(&v))));
    }

    #[test]
    fn documents_round_trip((inst, _, _) in goods_instance()) {
        let text = store_instance(&InstanceDocument::plain(inst.clone()));
        let back = load_instance(&text).unwrap();
        prop_assert_eq!(&back.instance, &inst);
        prop_assert_eq!(store_instance(&back), text);
    }
}
