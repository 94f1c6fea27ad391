//! Command-line surface of the workbench. `run_cli` does all the work so
//! tests can drive it without spawning processes.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ternfair::analysis::{
    check_marginal_set, check_order_neutrality, check_submodularity, check_transfer_lemmas,
    check_unique_decomposition, describe, fuzz_cross_check, verify_gap, FuzzConfig, GapInput, Verdict, Violation,
};
use ternfair::format::results::{
    bounds_doc, check_doc, decomposition_doc, fuzz_doc, gap_doc, lemma_doc, solve_doc,
};
use ternfair::format::{
    load_instance, parse_source, parse_witness, store_instance, to_canonical, InstanceDocument, JsonValue, Source,
    SourceKind,
};
use ternfair::reductions::bounds::parse_rational;
use ternfair::reductions::{
    compute_bounds, gen_mew_goods, gen_mew_mixed, gen_mew_rx3c, gen_mew_two_negative, gen_mnw_bivalued3c,
    gen_mnw_sat, gen_mnw_vc, BoundKind, BoundParams, ReducedInstance, ReductionKind, Rx3cGadget,
};
use ternfair::solvers::{solve_exact, Method, SolveLimits, SolveStatus};
use ternfair::{evaluate_allocation, validate_instance, Error, Objective, Oracle, SetFunction, ValueSet, Valuation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
pub const EXIT_REFUTED: i32 = 4;

/// Environment variable holding the default worker count for `solve` and
/// `fuzz`.
pub const WORKERS_ENV: &str = "TERNFAIR_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "ternfair", version, about = "Welfare solvers, hardness gadgets and structure checks for ternary fair division")]
struct Cli {
    /// Output style: human-readable text or a canonical JSON document.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Doc,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a reduced instance from a source problem file.
    Gen(GenArgs),
    /// Solve an instance document exactly.
    Solve(SolveArgs),
    /// Check the gap of a generated instance against a witness or a NO claim.
    VerifyGap(VerifyArgs),
    /// Structural checks on oracles and value triples.
    Check(CheckArgs),
    /// Closed-form gap certificate for a reduction kind.
    Bounds(BoundsArgs),
    /// Seeded cross-check of the solvers on random instances.
    Fuzz(FuzzArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// mnw-sat, mnw-vc, mnw-3c, mew-goods, mew-mixed, mew-two-negative or mew-rx3c.
    reduction: String,
    /// Comma-separated values, e.g. 0,1,3 or -2,1.
    #[arg(long, allow_hyphen_values = true)]
    values: Option<String>,
    #[arg(long)]
    source: PathBuf,
    /// Cover size for graph sources.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct LimitArgs {
    #[arg(long)]
    max_nodes: Option<u64>,
    #[arg(long)]
    max_seconds: Option<u64>,
    /// Worker threads; defaults to $TERNFAIR_WORKERS or 1.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    objective: String,
    #[arg(long, default_value = "bnb")]
    method: String,
    #[command(flatten)]
    limits: LimitArgs,
    file: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Witness for a YES source: DIMACS model, vertex list or triple list.
    #[arg(long, conflicts_with = "no")]
    witness: Option<PathBuf>,
    /// Treat the source as a NO instance and check the backward bound.
    #[arg(long)]
    no: bool,
    #[command(flatten)]
    limits: LimitArgs,
    file: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Submodular,
    OrderNeutral,
    Marginals,
    Lemmas,
    Decomposition,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(value_enum)]
    property: CheckKind,
    /// Built-in oracle; only `rx3c` is available.
    #[arg(long)]
    oracle: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    /// 1-indexed triple of the gadget agent; defaults to 1,2,3.
    #[arg(long)]
    triple: Option<String>,
    /// Instance document whose agent's oracle is checked.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// 0-indexed agent of `--instance`.
    #[arg(long, default_value_t = 0)]
    agent: usize,
    /// Value triple for `lemmas`, or the marginal set for `marginals`.
    #[arg(long, allow_hyphen_values = true)]
    values: Option<String>,
    /// Top value for `decomposition`.
    #[arg(long)]
    c: Option<i64>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    kind: String,
    #[arg(long, allow_hyphen_values = true)]
    values: String,
    /// Slack below 1/2032, as an integer, fraction or decimal.
    #[arg(long, default_value = "0")]
    epsilon: String,
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args, Debug)]
struct FuzzArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value_t = 4)]
    max_agents: usize,
    #[arg(long, default_value_t = 8)]
    max_items: usize,
    #[arg(long)]
    workers: Option<usize>,
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

struct Ctx<'a> {
    format: OutputFormat,
    out: &'a mut dyn Write,
    env_workers: Option<String>,
}

impl Ctx<'_> {
    fn line(&mut self, text: impl AsRef<str>) -> Result<(), Failure> {
        writeln!(self.out, "{}", text.as_ref()).map_err(|e| Failure::Invalid(format!("cannot write output: {e}")))
    }

    fn doc(&mut self, value: &JsonValue) -> Result<(), Failure> {
        let text = to_canonical(value);
        self.out.write_all(text.as_bytes()).map_err(|e| Failure::Invalid(format!("cannot write output: {e}")))
    }

    fn limits(&self, args: &LimitArgs) -> Result<SolveLimits, Failure> {
        let mut limits = SolveLimits::default().with_workers(self.workers(args.workers)?);
        if let Some(n) = args.max_nodes {
            limits = limits.with_max_nodes(n);
        }
        if let Some(s) = args.max_seconds {
            limits = limits.with_max_seconds(Duration::from_secs(s));
        }
        Ok(limits)
    }

    fn workers(&self, flag: Option<usize>) -> Result<usize, Failure> {
        match (flag, &self.env_workers) {
            (Some(w), _) => Ok(w),
            (None, Some(env)) => env
                .trim()
                .parse()
                .map_err(|_| Failure::Invalid(format!("{WORKERS_ENV} must be a positive integer, got '{env}'"))),
            (None, None) => Ok(1),
        }
    }
}

/// Runs the command line with `argv` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_cli<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_cli_with_env(argv, std::env::var(WORKERS_ENV).ok(), out, err)
}

/// As [`run_cli`], with the worker environment variable passed explicitly.
pub fn run_cli_with_env<I, S>(argv: I, env_workers: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut ctx = Ctx { format: cli.format, out, env_workers };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(&mut ctx, a),
        Command::Solve(a) => cmd_solve(&mut ctx, a),
        Command::VerifyGap(a) => cmd_verify(&mut ctx, a),
        Command::Check(a) => cmd_check(&mut ctx, a),
        Command::Bounds(a) => cmd_bounds(&mut ctx, a),
        Command::Fuzz(a) => cmd_fuzz(&mut ctx, a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Invalid(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INVALID
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn parse_values(text: &str) -> Result<Vec<i64>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim().parse().map_err(|_| Failure::Invalid(format!("bad value '{t}' in --values (expected integers like 0,1,3)")))
        })
        .collect()
}

fn load_doc(path: &Path) -> Result<InstanceDocument, Failure> {
    load_instance(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn source_kind(kind: ReductionKind) -> SourceKind {
    match kind {
        ReductionKind::MnwVc | ReductionKind::MnwBivalued3c => SourceKind::Graph3Reg,
        ReductionKind::MewRx3c => SourceKind::Rx3c,
        _ => SourceKind::Cnf2p2n,
    }
}

fn generate(kind: ReductionKind, values: Option<&[i64]>, source: Source, k: Option<usize>) -> Result<ReducedInstance, Failure> {
    let need = |n: usize| -> Result<&[i64], Failure> {
        match values {
            Some(v) if v.len() == n => Ok(v),
            Some(v) => Err(Failure::Invalid(format!("{kind} takes {n} values, got {}", v.len()))),
            None => Err(Failure::Invalid(format!("{kind} needs --values"))),
        }
    };
    let need_k = || k.ok_or_else(|| Failure::Invalid(format!("{kind} needs --k")));
    let r = match (kind, source) {
        (ReductionKind::MnwSat, Source::Cnf(phi)) => {
            let v = need(3)?;
            gen_mnw_sat(&phi, v[0], v[1], v[2])?
        }
        (ReductionKind::MewGoods, Source::Cnf(phi)) => {
            let v = need(3)?;
            gen_mew_goods(&phi, v[0], v[1], v[2])?
        }
        (ReductionKind::MewMixed, Source::Cnf(phi)) => {
            let v = need(2)?;
            gen_mew_mixed(&phi, v[0], v[1])?
        }
        (ReductionKind::MewTwoNegative, Source::Cnf(phi)) => {
            // values 2b, b, -k* b
            let v = need(3)?;
            let b = v[1];
            if b >= 0 || v[0] != 2 * b || v[2] % b != 0 {
                return Err(Failure::Invalid(format!("{kind} expects values 2b,b,-k*b with b < 0, got {v:?}")));
            }
            gen_mew_two_negative(&phi, b, -v[2] / b)?
        }
        (ReductionKind::MnwVc, Source::Graph(g)) => {
            let v = need(3)?;
            gen_mnw_vc(&g, need_k()?, v[0], v[1], v[2])?
        }
        (ReductionKind::MnwBivalued3c, Source::Graph(g)) => {
            let v = need(2)?;
            if v[0] != 3 {
                return Err(Failure::Invalid(format!("{kind} expects values 3,c, got {v:?}")));
            }
            gen_mnw_bivalued3c(&g, need_k()?, v[1])?
        }
        (ReductionKind::MewRx3c, Source::Rx3c(r)) => {
            if let Some(v) = values {
                if v != [-1, 0, 1] {
                    return Err(Failure::Invalid(format!("{kind} only uses values -1,0,1, got {v:?}")));
                }
            }
            gen_mew_rx3c(&r)?
        }
        _ => unreachable!("source kind follows the reduction"),
    };
    Ok(r)
}

fn cmd_gen(ctx: &mut Ctx, a: GenArgs) -> CmdResult {
    let kind: ReductionKind = a.reduction.parse()?;
    let values = a.values.as_deref().map(parse_values).transpose()?;
    let text = read(&a.source)?;
    let source =
        parse_source(source_kind(kind), &text).map_err(|e| Failure::Invalid(format!("{}: {e}", a.source.display())))?;
    let reduced = generate(kind, values.as_deref(), source, a.k)?;
    let diagnostics = validate_instance(&reduced.instance);
    if let Some(d) = diagnostics.first() {
        return Err(Failure::Invalid(format!("generated instance fails validation: {d}")));
    }
    let doc = store_instance(&InstanceDocument::from_reduced(&reduced));
    match &a.out {
        Some(path) => {
            std::fs::write(path, &doc).map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display())))?;
            if ctx.format == OutputFormat::Text {
                let cert = &reduced.certificate;
                ctx.line(format!(
                    "wrote {}: {} with {} agents, {} items",
                    path.display(),
                    kind,
                    reduced.instance.agents(),
                    reduced.instance.items()
                ))?;
                ctx.line(format!("yes value: {}", cert.yes_value))?;
                ctx.line(format!("no bound: {}", cert.no_bound))?;
            } else {
                ctx.out.write_all(doc.as_bytes()).map_err(|e| Failure::Invalid(e.to_string()))?;
            }
        }
        None => ctx.out.write_all(doc.as_bytes()).map_err(|e| Failure::Invalid(e.to_string()))?,
    }
    Ok(EXIT_OK)
}

fn parse_objective(s: &str) -> Result<Objective, Failure> {
    match s {
        "nsw" => Ok(Objective::Nsw),
        "mew" => Ok(Objective::Mew),
        other => Err(Failure::Invalid(format!("unknown objective '{other}' (expected nsw or mew)"))),
    }
}

fn cmd_solve(ctx: &mut Ctx, a: SolveArgs) -> CmdResult {
    let objective = parse_objective(&a.objective)?;
    let method: Method = a.method.parse()?;
    let limits = ctx.limits(&a.limits)?;
    let doc = load_doc(&a.file)?;
    let result = solve_exact(&doc.instance, objective, method, &limits)?;
    let utilities = evaluate_allocation(&doc.instance, &result.allocation)?;
    if ctx.format == OutputFormat::Doc {
        ctx.doc(&solve_doc(&result, &a.method, &utilities))?;
    } else {
        ctx.line(format!("status: {} after {} nodes", result.status, result.nodes))?;
        ctx.line(format!("optimum: {}", describe(&result.value)))?;
        let bundles = result.allocation.bundles(doc.instance.agents());
        for (agent, bundle) in bundles.iter().enumerate() {
            let names: Vec<&str> = bundle.iter().map(|&o| doc.items[o].name.as_str()).collect();
            ctx.line(format!("  {} ({}): [{}]", doc.agents[agent].name, utilities[agent], names.join(" ")))?;
        }
    }
    Ok(if result.status == SolveStatus::LimitReached { EXIT_LIMIT } else { EXIT_OK })
}

fn cmd_verify(ctx: &mut Ctx, a: VerifyArgs) -> CmdResult {
    let doc = load_doc(&a.file)?;
    let reduced = doc.to_reduced().map_err(|e| Failure::Invalid(format!("{}: {e}", a.file.display())))?;
    let input = match (&a.witness, a.no) {
        (Some(path), false) => GapInput::Yes(
            parse_witness(&reduced.source, &read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?,
        ),
        (None, true) => GapInput::No,
        _ => return Err(Failure::Invalid("verify-gap needs exactly one of --witness FILE or --no".into())),
    };
    let limits = ctx.limits(&a.limits)?;
    let report = verify_gap(&reduced, &input, &limits)?;
    if ctx.format == OutputFormat::Doc {
        ctx.doc(&gap_doc(&report))?;
    } else {
        ctx.line(report.to_string())?;
    }
    let limited = report.backward.as_ref().is_some_and(|b| b.optimum.status == SolveStatus::LimitReached);
    Ok(match report.verdict {
        Verdict::Refuted => EXIT_REFUTED,
        _ if limited => EXIT_LIMIT,
        _ => EXIT_OK,
    })
}

/// The oracle a structural check runs on, with a description.
enum Subject {
    Gadget(Rx3cGadget),
    Agent(Oracle, Option<ValueSet>),
}

fn check_subject(a: &CheckArgs) -> Result<(Subject, String), Failure> {
    match (&a.oracle, &a.instance) {
        (Some(name), None) => {
            if name != "rx3c" {
                return Err(Failure::Invalid(format!("unknown oracle '{name}' (only rx3c is built in)")));
            }
            let k = a.k.ok_or_else(|| Failure::Invalid("--oracle rx3c needs --k".into()))?;
            let triple = match &a.triple {
                None => [0, 1, 2],
                Some(t) => {
                    let v = parse_values(t)?;
                    let arr: [i64; 3] = v.try_into().map_err(|_| Failure::Invalid("--triple takes three elements".into()))?;
                    if arr.iter().any(|&e| e < 1) {
                        return Err(Failure::Invalid("--triple elements are 1-indexed".into()));
                    }
                    arr.map(|e| e as usize - 1)
                }
            };
            let g = Rx3cGadget::new(k, triple)?;
            let t = g.triple();
            Ok((Subject::Gadget(g), format!("rx3c gadget k={k} triple {{{}, {}, {}}}", t[0] + 1, t[1] + 1, t[2] + 1)))
        }
        (None, Some(path)) => {
            let doc = load_doc(path)?;
            if a.agent >= doc.instance.agents() {
                return Err(Failure::Invalid(format!("agent {} out of range 0..{}", a.agent, doc.instance.agents())));
            }
            let name = format!("{} agent {}", path.display(), doc.agents[a.agent].name);
            match doc.instance.valuation() {
                Valuation::Submodular(p) => {
                    Ok((Subject::Agent(p.oracles()[a.agent].clone(), Some(p.marginal_set().clone())), name))
                }
                Valuation::Additive(p) => {
                    let row = p.matrix()[a.agent].clone();
                    let m = row.len();
                    let table = ternfair::TabularOracle::from_fn(m, |mask| {
                        (0..m).filter(|o| mask >> o & 1 == 1).map(|o| row[o]).sum()
                    })?;
                    Ok((Subject::Agent(Oracle::Tabular(table), Some(p.value_set().clone())), name))
                }
            }
        }
        _ => Err(Failure::Invalid("give exactly one of --oracle rx3c --k K or --instance FILE".into())),
    }
}

fn run_structural(property: CheckKind, oracle: &impl SetFunction, set: Option<ValueSet>) -> Result<Vec<Violation>, Failure> {
    Ok(match property {
        CheckKind::Submodular => check_submodularity(oracle)?,
        CheckKind::OrderNeutral => check_order_neutrality(oracle)?.into_iter().collect(),
        CheckKind::Marginals => {
            let set = set.ok_or_else(|| Failure::Invalid("marginals needs a value set (--values)".into()))?;
            check_marginal_set(oracle, &set)?
        }
        _ => unreachable!("only structural properties reach here"),
    })
}

fn cmd_check(ctx: &mut Ctx, a: CheckArgs) -> CmdResult {
    match a.property {
        CheckKind::Lemmas => {
            let v = parse_values(a.values.as_deref().ok_or_else(|| Failure::Invalid("lemmas needs --values a,b,c".into()))?)?;
            let [x, y, z]: [i64; 3] = v.try_into().map_err(|_| Failure::Invalid("lemmas takes three values".into()))?;
            let report = check_transfer_lemmas(x, y, z)?;
            if ctx.format == OutputFormat::Doc {
                ctx.doc(&lemma_doc(&report))?;
            } else {
                ctx.line(report.to_string())?;
            }
            Ok(EXIT_OK)
        }
        CheckKind::Decomposition => {
            let c = a.c.ok_or_else(|| Failure::Invalid("decomposition needs --c".into()))?;
            let clash = check_unique_decomposition(c)?;
            if ctx.format == OutputFormat::Doc {
                ctx.doc(&decomposition_doc(c, clash.as_ref()))?;
            } else {
                match clash {
                    None => ctx.line(format!("{{-1, 0, {c}}}: every sum of two marginals has a unique decomposition"))?,
                    Some(cl) => {
                        let pairs: Vec<String> =
                            cl.pairs.iter().map(|&(x, y)| ternfair::analysis::fmt_multiset(x, y)).collect();
                        ctx.line(format!("{{-1, 0, {c}}}: sum {} decomposes as {}", cl.sum, pairs.join(" and ")))?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        property => {
            let (subject, name) = check_subject(&a)?;
            let explicit = a.values.as_deref().map(parse_values).transpose()?.map(|v| ValueSet::new(&v)).transpose()?;
            let violations = match subject {
                Subject::Gadget(g) => {
                    let set = explicit.or_else(|| ValueSet::new(&[-1, 0, 1]).ok());
                    run_structural(property, &g, set)?
                }
                Subject::Agent(o, set) => run_structural(property, &o, explicit.or(set))?,
            };
            let pname = match property {
                CheckKind::Submodular => "submodular",
                CheckKind::OrderNeutral => "order-neutral",
                _ => "marginals",
            };
            if ctx.format == OutputFormat::Doc {
                ctx.doc(&check_doc(pname, &name, &violations))?;
            } else if violations.is_empty() {
                ctx.line(format!("{name}: {pname} holds"))?;
            } else {
                ctx.line(format!("{name}: {pname} fails, {} violation(s)", violations.len()))?;
                for v in &violations {
                    ctx.line(format!("  {v}"))?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn cmd_bounds(ctx: &mut Ctx, a: BoundsArgs) -> CmdResult {
    let kind: BoundKind = a.kind.parse()?;
    let values = parse_values(&a.values)?;
    let mut params = BoundParams::new(&values).with_epsilon(parse_rational(&a.epsilon)?);
    match (a.vertices, a.k) {
        (Some(v), Some(k)) => params = params.with_graph(v, k),
        (None, None) => {}
        _ => return Err(Failure::Invalid("--vertices and --k go together".into())),
    }
    let cert = compute_bounds(kind, &params)?;
    if ctx.format == OutputFormat::Doc {
        ctx.doc(&bounds_doc(&cert))?;
        return Ok(EXIT_OK);
    }
    ctx.line(format!("{kind} {:?}: regime {}, objective {}", cert.values, cert.regime, cert.objective.name()))?;
    if let Some((v, k)) = cert.graph {
        ctx.line(format!("graph: |V| = {v}, k = {k}"))?;
    }
    ctx.line(format!("epsilon: {}", cert.epsilon))?;
    ctx.line(format!("yes value: {}", cert.yes_value))?;
    ctx.line(format!("no bound: {}", cert.no_bound))?;
    match &cert.ratio {
        Some(r) => {
            let approx = r.approx();
            let truncated = (approx * 1e5).floor() / 1e5;
            ctx.line(format!("ratio: {r} ~ {approx:.10}"))?;
            ctx.line(format!("ratio to five decimals (rounded down): {truncated:.5}"))?;
        }
        None => ctx.line("ratio: none (the NO bound is not positive)")?,
    }
    Ok(EXIT_OK)
}

fn cmd_fuzz(ctx: &mut Ctx, a: FuzzArgs) -> CmdResult {
    let mut config = FuzzConfig::new(a.seed, a.trials);
    config.max_agents = a.max_agents;
    config.max_items = a.max_items;
    config.workers = ctx.workers(a.workers)?;
    let summary = fuzz_cross_check(&config)?;
    if ctx.format == OutputFormat::Doc {
        ctx.doc(&fuzz_doc(&summary))?;
    } else {
        ctx.out.write_all(summary.to_string().as_bytes()).map_err(|e| Failure::Invalid(e.to_string()))?;
    }
    Ok(if summary.discrepancies.is_empty() { EXIT_OK } else { EXIT_REFUTED })
}
