//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Criteria that go through the command line call
//! `run_cli` in-process; the rest use the library directly.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ternfair::analysis::{
    check_marginal_set, check_order_neutrality, check_submodularity, check_transfer_lemmas,
    check_unique_decomposition, fuzz_cross_check, random_ternary_submodular, verify_gap, FuzzConfig, GapInput, Verdict,
};
use ternfair::reductions::{
    build_witness, gen_mew_goods, gen_mew_mixed, gen_mew_rx3c, gen_mew_two_negative, gen_mnw_sat, gen_mnw_vc,
    CertValue, Cnf2p2n, Graph3Reg, ReducedInstance, Rx3cGadget, Rx3cInstance, WitnessData,
};
use ternfair::solvers::{local_search, solve_exact, Method, ObjectiveValue, SolveLimits, SolveStatus};
use ternfair::{evaluate_allocation, nash_score, Objective, SetFunction, ValueSet};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("ternfair").chain(args.iter().copied());
    let code = ternfair_cli::run_cli_with_env(argv, None, &mut out, &mut Vec::new());
    (code, String::from_utf8_lossy(&out).into_owned())
}

/// Value of the `ratio: <expr> ~ <float>` line of `bounds` output.
fn printed_ratio(out: &str) -> Option<(String, f64)> {
    let line = out.lines().find_map(|l| l.strip_prefix("ratio: "))?;
    let (expr, approx) = line.split_once(" ~ ")?;
    Some((expr.to_string(), approx.trim().parse().ok()?))
}

fn formula() -> Cnf2p2n {
    Cnf2p2n::new(3, vec![[1, 2, 3], [1, -2, -3], [-1, 2, -3], [-1, -2, 3]]).unwrap()
}

fn k33() -> Graph3Reg {
    Graph3Reg::new(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect()).unwrap()
}

fn c1_ratio_constants() -> Outcome {
    let mut notes = Vec::new();
    for (args, expr, lo, hi) in [
        (["bounds", "sat-case1", "--values", "0,1,2", "--epsilon", "0"], "(4/3)^(1/6096)", 1.000045, 1.000050),
        (["bounds", "vc-corollary", "--values", "0,1,3", "--epsilon", "0"], "(9/8)^(1/891)", 1.000130, 1.000134),
    ] {
        let (code, out) = cli(&args);
        ensure(code == 0, || format!("{} exited {code}", args[1]))?;
        let (got, approx) = printed_ratio(&out).ok_or_else(|| format!("no ratio line in: {out}"))?;
        ensure(got == expr, || format!("{}: ratio {got}, expected {expr}", args[1]))?;
        ensure((lo..=hi).contains(&approx), || format!("{}: {approx} outside [{lo}, {hi}]", args[1]))?;
        notes.push(format!("{} = {got} ~ {approx:.7}", args[1]));
    }
    Ok(notes.join(", "))
}

fn nash_of(value: &ObjectiveValue) -> Option<&ternfair::NashScore> {
    match value {
        ObjectiveValue::Nash(s) => Some(s),
        _ => None,
    }
}

fn c2_vc_yes_side() -> Outcome {
    let r = gen_mnw_vc(&k33(), 3, 0, 1, 3).map_err(err)?;
    let witness = build_witness(&r, &WitnessData::VertexCover(vec![0, 1, 2])).map_err(err)?;
    let wscore = nash_score(&evaluate_allocation(&r.instance, &witness).map_err(err)?);
    let opt = solve_exact(&r.instance, Objective::Nsw, Method::BnB, &SolveLimits::default()).map_err(err)?;
    ensure(opt.status == SolveStatus::Proved, || "branch and bound did not finish".into())?;
    let oscore = nash_of(&opt.value).ok_or("not a Nash value")?;
    // (c^k (3b)^(2k - |V|/2))^(1 / (3k - |V|/2)) with c=3, b=1, k=3, |V|=6:
    // the 6th power is 3^3 * 3^3 = 729
    let CertValue::Nash(yes) = &r.certificate.yes_value else { return Err("not a Nash certificate".into()) };
    ensure(yes.pow_exact(6) == Some(num_rational_int(729)), || format!("certificate yes value {yes}"))?;
    for (what, s) in [("witness", &wscore), ("optimum", oscore)] {
        ensure(s.agents() == 6 && s.zero_count() == 0 && s.product() == &729u32.into(), || format!("{what} {s}"))?;
        ensure(yes.cmp_geometric_mean(s) == Some(Ordering::Equal), || format!("{what} differs from the yes value"))?;
    }
    Ok(format!("witness and proved optimum both exactly 3 ({} nodes)", opt.nodes))
}

fn num_rational_int(v: i64) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(v.into())
}

fn c3_vc_no_side() -> Outcome {
    let k4 = Graph3Reg::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).map_err(err)?;
    let r = gen_mnw_vc(&k4, 2, 0, 1, 3).map_err(err)?;
    ensure(r.instance.agents() == 4 && r.instance.items() == 8, || "expected 4 agents, 8 items".into())?;
    let opt = solve_exact(&r.instance, Objective::Nsw, Method::Brute, &SolveLimits::default()).map_err(err)?;
    ensure(opt.status == SolveStatus::Proved, || "brute force did not finish".into())?;
    let s = nash_of(&opt.value).ok_or("not a Nash value")?;
    // geometric mean below 3 means product below 3^4
    ensure(*s < nash_score(&[3, 3, 3, 3]), || format!("optimum {s} is not below 3"))?;
    let report = verify_gap(&r, &GapInput::No, &SolveLimits::default()).map_err(err)?;
    ensure(report.verdict == Verdict::Confirmed, || format!("gap check: {report}"))?;
    Ok(format!("optimum over 4^8 allocations has product {} (mean {:.6}) < 81", s.product(), s.geometric_mean()))
}

fn c4_sat_forward() -> Outcome {
    let r = gen_mnw_sat(&formula(), 0, 1, 2).map_err(err)?;
    let alloc = build_witness(&r, &WitnessData::Assignment(vec![true; 3])).map_err(err)?;
    let s = nash_score(&evaluate_allocation(&r.instance, &alloc).map_err(err)?);
    ensure(s.agents() == 24 && s.zero_count() == 0, || format!("witness {s}"))?;
    ensure(s.product() == &(num_bigint::BigUint::from(1u32) << 24), || format!("product {}", s.product()))?;
    ensure(s.exact_geometric_mean() == Some(2u32.into()), || "geometric mean is not exactly 2".into())?;
    let CertValue::Nash(yes) = &r.certificate.yes_value else { return Err("not a Nash certificate".into()) };
    ensure(yes.cmp_geometric_mean(&s) == Some(Ordering::Equal), || format!("yes value {yes}"))?;
    let polished = local_search(&r.instance, &alloc, Objective::Nsw).map_err(err)?;
    ensure(polished == alloc, || "local search moved the witness".into())?;
    Ok("witness product 2^24 over 24 agents, fixed point of local search".into())
}

fn c5_rx3c() -> Outcome {
    let source = Rx3cInstance::new(1, vec![[0, 1, 2]; 3]).map_err(err)?;
    let r = gen_mew_rx3c(&source).map_err(err)?;
    let opt = solve_exact(&r.instance, Objective::Mew, Method::Brute, &SolveLimits::default()).map_err(err)?;
    ensure(opt.status == SolveStatus::Proved, || "brute force did not finish".into())?;
    ensure(opt.value == ObjectiveValue::Egalitarian(1), || format!("optimum {}", opt.value))?;
    let g = Rx3cGadget::new(1, [0, 1, 2]).map_err(err)?;
    let mask = |items: &[usize]| items.iter().fold(0u64, |m, &o| m | 1 << o);
    // items: element e has copies 2e, 2e+1; the cover is item 6
    let spots = [("{i,j,k}", mask(&[0, 2, 4]), 0), ("{i,i',j,k}", mask(&[0, 1, 2, 4]), -1), ("{cover}", mask(&[6]), 1)];
    for (name, bundle, want) in spots {
        let got = g.value(bundle);
        ensure(got == want, || format!("v_F({name}) = {got}, expected {want}"))?;
    }
    Ok("brute force over 3^9 gives MEW 1; spot values 0, -1, 1".into())
}

fn c6_mew_witnesses() -> Outcome {
    let phi = formula();
    let sigma = WitnessData::Assignment(vec![true; 3]);
    let cases: Vec<(&str, ReducedInstance, i64)> = vec![
        ("goods c>=2b (0,1,2)", gen_mew_goods(&phi, 0, 1, 2).map_err(err)?, 2),
        ("goods a=0 (0,2,3)", gen_mew_goods(&phi, 0, 2, 3).map_err(err)?, 3),
        ("goods a>0 (1,2,3)", gen_mew_goods(&phi, 1, 2, 3).map_err(err)?, 4),
        ("mixed (-2,1)", gen_mew_mixed(&phi, -2, 1).map_err(err)?, 0),
        ("two-negative (b=-1,k*=2)", gen_mew_two_negative(&phi, -1, 2).map_err(err)?, 0),
    ];
    let mut notes = Vec::new();
    for (name, r, want) in cases {
        ensure(r.certificate.yes_value == CertValue::Egalitarian(want), || {
            format!("{name}: yes value {}, expected {want}", r.certificate.yes_value)
        })?;
        let fw = verify_gap(&r, &GapInput::Yes(sigma.clone()), &SolveLimits::default()).map_err(err)?;
        ensure(fw.verdict == Verdict::Confirmed, || format!("{name}: {fw}"))?;
        let bw = verify_gap(&r, &GapInput::No, &SolveLimits::default()).map_err(err)?;
        ensure(bw.verdict == Verdict::ForwardOnly, || format!("{name}: backward {}", bw.verdict))?;
        notes.push(format!("{name}={want}"));
    }
    Ok(format!("witnesses meet yes values ({}); backward reported forward-only", notes.join(", ")))
}

fn c7_order_neutrality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..200 {
        let c = [2, 3, 5][trial % 3];
        let m = 1 + trial % 8;
        let oracle = random_ternary_submodular(&mut rng, m, c).map_err(err)?;
        let set = ValueSet::new(&[-1, 0, c]).map_err(err)?;
        ensure(check_submodularity(&oracle).map_err(err)?.is_empty(), || format!("trial {trial}: not submodular"))?;
        ensure(check_marginal_set(&oracle, &set).map_err(err)?.is_empty(), || format!("trial {trial}: marginal outside"))?;
        if let Some(v) = check_order_neutrality(&oracle).map_err(err)? {
            return Err(format!("trial {trial} (c={c}, m={m}): {v}"));
        }
    }
    let v = check_order_neutrality(&Rx3cGadget::new(1, [0, 1, 2]).map_err(err)?)
        .map_err(err)?
        .ok_or("rx3c gadget passed order neutrality")?;
    let mut first = [v.values[0], v.values[1]];
    let mut second = [v.values[2], v.values[3]];
    first.sort_unstable();
    second.sort_unstable();
    ensure(first == [-1, 1] && second == [0, 0], || format!("rx3c witness {v}"))?;
    for c in 2..=10 {
        ensure(check_unique_decomposition(c).map_err(err)?.is_none(), || format!("c={c} has a clash"))?;
    }
    let clash = check_unique_decomposition(1).map_err(err)?.ok_or("c=1 has no clash")?;
    ensure(clash.sum == 0, || format!("c=1 clash at sum {}", clash.sum))?;
    Ok("200 random oracles order neutral; gadget witness {1, -1} vs {0, 0}; unique sums for c in 2..=10, c=1 clashes at 0".into())
}

fn c8_gadget_probe() -> Outcome {
    let g = Rx3cGadget::new(1, [0, 1, 2]).map_err(err)?;
    let covers = g.cover_items();
    // the family: bundles without a cover that hold a copy of each of the
    // triple's three elements, extended by a cover item
    let in_family = |s: &[usize], o: usize| {
        let t = (0..3).filter(|e| s.contains(&(2 * e)) || s.contains(&(2 * e + 1))).count();
        covers.contains(&o) && !s.iter().any(|x| covers.contains(x)) && t == 3
    };
    let sub = check_submodularity(&g).map_err(err)?;
    ensure(sub.iter().all(|v| in_family(&v.s, v.o)), || "submodularity violation outside the family".into())?;
    let marg = check_marginal_set(&g, &ValueSet::new(&[-1, 0, 1]).map_err(err)?).map_err(err)?;
    ensure(marg.iter().all(|v| in_family(&v.s, v.o)), || "marginal violation outside the family".into())?;
    let mut family = 0;
    for s in 0..1u64 << 9 {
        let items: Vec<usize> = (0..9).filter(|o| s >> o & 1 == 1).collect();
        for o in covers.clone().filter(|o| s >> o & 1 == 0) {
            if in_family(&items, o) {
                family += 1;
                ensure(marg.iter().any(|v| v.s == items && v.o == o), || format!("family member {items:?}+{o} not reported"))?;
            }
        }
    }
    ensure(marg.len() == family, || format!("{} marginal violations, family has {family}", marg.len()))?;
    Ok(format!(
        "{} marginal violations = the whole family; {} submodularity violations (one cover item cannot form a pair)",
        marg.len(),
        sub.len()
    ))
}

fn c9_lemma_grid() -> Outcome {
    let mut count = 0;
    for c in 0..=12 {
        for b in 0..c {
            for a in 0..b {
                let report = check_transfer_lemmas(a, b, c).map_err(err)?;
                ensure(report.passed(), || format!("({a}, {b}, {c}):\n{report}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} triples, all chains hold"))
}

fn c10_fuzz() -> Outcome {
    let mut config = FuzzConfig::new(20_240_601, 1000);
    config.workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let summary = fuzz_cross_check(&config).map_err(err)?;
    ensure(summary.discrepancies.is_empty(), || summary.to_string())?;
    Ok(format!("{} trials ({} with nash welfare), 0 discrepancies", summary.trials, summary.nsw_trials))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("ratio constants", c1_ratio_constants, Duration::from_secs(1)),
        ("mnw-vc gap, yes side", c2_vc_yes_side, Duration::from_secs(300)),
        ("mnw-vc gap, no side", c3_vc_no_side, Duration::from_secs(60)),
        ("mnw-sat forward", c4_sat_forward, Duration::from_secs(60)),
        ("mew-rx3c", c5_rx3c, Duration::from_secs(60)),
        ("mew witnesses", c6_mew_witnesses, Duration::from_secs(60)),
        ("order neutrality", c7_order_neutrality, Duration::from_secs(60)),
        ("gadget class probe", c8_gadget_probe, Duration::from_secs(60)),
        ("transfer-lemma grid", c9_lemma_grid, Duration::from_secs(60)),
        ("oracle equivalence fuzz", c10_fuzz, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
