//! `horn`: command-line front end for horn-core.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use horn_core::golden::{run_example, ExampleReport, EXAMPLES};
use horn_core::horn::{InequalityLabel, DEFAULT_DEPTH_BOUND};
use horn_core::lr::{IntersectionNumber, SaturationReport};
use horn_core::parabolic::{hn_certificate, HnOutcome};
use horn_core::pointcount::{sample_counts, samples_csv, FlagSample};
use horn_core::probe::{
    build_filtration, certify_nonzero, FiltrationReport, PrimeField, ProbeFlags, ProbeReport,
    ProbeVerdict, DEFAULT_PRIME,
};
use horn_core::{Error, HornEngine, HornVerdict, Mode, NonvanishingTable, Partition, ProblemTuple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const EXIT_NONZERO: u8 = 0;
const EXIT_ZERO: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_DISAGREE: u8 = 3;
const EXIT_GENERICITY: u8 = 4;
const EXIT_LIMIT: u8 = 5;
const EXIT_CANDIDATES: u8 = 6;
const EXIT_USAGE: u8 = 64;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(
    name = "horn",
    version,
    about = "Decide nonvanishing of Schubert class products and produce certificates"
)]
struct Cli {
    /// Prime for the finite-field probe.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    /// Random flag trials per probe.
    #[arg(long, global = true, default_value_t = 3,
          value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest r the Horn recursion will descend into.
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH_BOUND)]
    depth: usize,
    /// Inequality set: B (all nonvanishing tuples) or C (point classes only).
    #[arg(long, global = true, default_value = "B")]
    mode: Mode,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, value_enum, default_value_t = Engine::All)]
    engine: Engine,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Oracle,
    Horn,
    Probe,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Is the product of the tuple's classes nonzero? Exit 0 yes, 1 no,
    /// 2 inconclusive (probe), 3 engines disagree.
    Nonzero {
        /// Tuple such as "1,4;2,3@4".
        tuple: String,
    },
    /// List the inequality labels (d, K) for tuples in Gr(r, n).
    Inequalities { r: usize, n: usize, s: usize },
    /// Run the four worked examples against their reference values.
    Examples,
    /// Compare nonvanishing of a product with that of its N-fold scaling.
    Saturation {
        /// Partitions separated by ';', parts by ',', e.g. "1;1;2".
        #[arg(long)]
        partitions: String,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        width: usize,
        #[arg(long, default_value_t = 2)]
        factor: usize,
    },
    /// Harder–Narasimhan certificate for a tuple.
    Hn { tuple: String },
    /// Kernel filtration certificate at random flags.
    Filtration { tuple: String },
    /// Point counts over F_q for random flags, as CSV.
    Count {
        tuple: String,
        #[arg(long, default_value_t = 5)]
        q: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Dump the nonvanishing table of Gr(d, r) for s factors.
    Table { d: usize, r: usize, s: usize },
    /// Compare all engines on every tuple of Gr(r, n).
    #[command(hide = true)]
    Sweep { r: usize, n: usize, s: usize },
}

#[derive(Clone, Serialize)]
struct RunConfig {
    prime: u64,
    trials: usize,
    seed: u64,
    depth: usize,
    mode: Mode,
}

struct Ctx {
    config: RunConfig,
    field: PrimeField,
    engine: HornEngine,
    format: Format,
    which: Engine,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::GenericityFailure(_) => EXIT_GENERICITY,
            Error::DepthExceeded { .. } | Error::SizeExceeded { .. } => EXIT_LIMIT,
            Error::CandidatesExhausted => EXIT_CANDIDATES,
            Error::IdentityViolation { .. } => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report types serialize")
    );
}

#[derive(Serialize)]
struct WithConfig<'a, T: Serialize> {
    #[serde(flatten)]
    body: &'a T,
    config: &'a RunConfig,
}

impl Ctx {
    fn emit<T: Serialize>(&self, body: &T) {
        print_json(&WithConfig {
            body,
            config: &self.config,
        });
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.config.seed)
    }
}

fn parse_tuple(s: &str) -> Result<ProblemTuple, Failure> {
    s.parse().map_err(Failure::from)
}

#[derive(Serialize)]
struct OracleReport {
    nonzero: bool,
    intersection_number: IntersectionNumber,
}

#[derive(Serialize)]
struct NonzeroReport {
    problem: ProblemTuple,
    expected_dim: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    horn: Option<HornVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    probe: Option<ProbeReport>,
    /// `None` unless more than one engine ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
    exit: u8,
}

fn cmd_nonzero(ctx: &Ctx, tuple: &str) -> Outcome {
    let problem = parse_tuple(tuple)?;
    let all = ctx.which == Engine::All;
    let oracle = (all || ctx.which == Engine::Oracle).then(|| {
        let oracle = ctx.engine.oracle();
        OracleReport {
            nonzero: oracle.is_nonzero_product(&problem),
            intersection_number: oracle.intersection_number(&problem),
        }
    });
    let horn = if all || ctx.which == Engine::Horn {
        Some(ctx.engine.horn_decide(&problem, ctx.config.mode)?)
    } else {
        None
    };
    let probe = (all || ctx.which == Engine::Probe)
        .then(|| certify_nonzero(&problem, ctx.config.trials, ctx.field, &mut ctx.rng()));
    let certified = probe
        .as_ref()
        .map(|p| p.verdict == ProbeVerdict::CertifiedNonzero);

    let (agree, exit) = match (&oracle, &horn, certified) {
        (Some(o), Some(h), Some(c)) => {
            // the probe only ever certifies; abstaining is not a disagreement
            let agree = o.nonzero == h.nonzero && (!c || o.nonzero);
            let exit = match (agree, o.nonzero) {
                (false, _) => EXIT_DISAGREE,
                (true, true) => EXIT_NONZERO,
                (true, false) => EXIT_ZERO,
            };
            (Some(agree), exit)
        }
        (Some(o), None, None) => (None, bool_exit(o.nonzero)),
        (None, Some(h), None) => (None, bool_exit(h.nonzero)),
        (None, None, Some(c)) => {
            let exit = if c {
                EXIT_NONZERO
            } else if problem.expected_dim() < 0 {
                EXIT_ZERO
            } else {
                EXIT_INCONCLUSIVE
            };
            (None, exit)
        }
        _ => unreachable!("exactly one engine or all of them"),
    };

    let report = NonzeroReport {
        expected_dim: problem.expected_dim(),
        problem,
        oracle,
        horn,
        probe,
        agree,
        exit,
    };
    if ctx.format == Format::Json {
        ctx.emit(&report);
        return Ok(exit);
    }
    let p = &report.problem;
    println!(
        "problem {p} in Gr({}, {}), expected dimension {}",
        p.r(),
        p.n(),
        report.expected_dim
    );
    if let Some(o) = &report.oracle {
        print!("oracle: {}", zero_word(o.nonzero));
        if o.intersection_number.top_degree {
            print!(" (intersection number {})", o.intersection_number.value);
        }
        println!();
    }
    if let Some(h) = &report.horn {
        print!("horn ({}): {}", h.mode, zero_word(h.nonzero));
        if let Some(w) = &h.witness {
            print!(
                ", violated d={} K={} value {}",
                w.d,
                w.ktuple_string(),
                w.value
            );
        }
        println!();
    }
    if let Some(pr) = &report.probe {
        let verdict = match pr.verdict {
            ProbeVerdict::CertifiedNonzero => "CERTIFIED_NONZERO",
            ProbeVerdict::Inconclusive => "INCONCLUSIVE",
        };
        println!(
            "probe: {verdict}, ranks {:?} (p={}, seed {})",
            pr.observed_ranks, pr.prime, ctx.config.seed
        );
    }
    if let Some(agree) = report.agree {
        println!("engines agree: {agree}");
    }
    Ok(exit)
}

fn bool_exit(nonzero: bool) -> u8 {
    if nonzero {
        EXIT_NONZERO
    } else {
        EXIT_ZERO
    }
}

fn zero_word(nonzero: bool) -> &'static str {
    if nonzero {
        "nonzero"
    } else {
        "zero"
    }
}

#[derive(Serialize)]
struct InequalityList {
    r: usize,
    n: usize,
    s: usize,
    mode: Mode,
    count: usize,
    inequalities: Vec<InequalityLabel>,
}

fn cmd_inequalities(ctx: &Ctx, r: usize, n: usize, s: usize) -> Outcome {
    let mode = ctx.config.mode;
    let inequalities = ctx.engine.enumerate_inequalities(r, n, s, mode)?;
    if ctx.format == Format::Json {
        ctx.emit(&InequalityList {
            r,
            n,
            s,
            mode,
            count: inequalities.len(),
            inequalities,
        });
    } else {
        println!(
            "{} inequalities for Gr({r}, {n}), s={s}, mode {mode}",
            inequalities.len()
        );
        for label in &inequalities {
            let k: Vec<String> = label.ktuple.iter().map(|k| k.to_string()).collect();
            println!("d={} K={}", label.d, k.join(";"));
        }
    }
    Ok(0)
}

fn cmd_examples(ctx: &Ctx) -> Outcome {
    let reports: Vec<ExampleReport> = EXAMPLES
        .iter()
        .map(|ex| {
            run_example(
                ex,
                &ctx.engine,
                ctx.field,
                ctx.config.trials,
                ctx.config.seed,
            )
        })
        .collect::<Result<_, _>>()?;
    for rep in &reports {
        if ctx.format == Format::Json {
            // one compact object per line
            println!(
                "{}",
                serde_json::to_string(&WithConfig {
                    body: rep,
                    config: &ctx.config
                })
                .expect("report types serialize")
            );
            continue;
        }
        println!(
            "{} {} ({}) seed {} attempts {}",
            if rep.pass { "PASS" } else { "FAIL" },
            rep.name,
            rep.problem,
            rep.seed,
            rep.attempts
        );
        if let Some(o) = &rep.observed {
            println!(
                "  hom rank {} (expected {}), kernel dim {} at {}, filtration depth {}, verified {}",
                o.hom_rank,
                o.expected_dim,
                o.kernel_dim,
                o.kernel_positions.join(";"),
                o.filtration_depth,
                o.filtration_verified
            );
        }
        for m in &rep.mismatches {
            println!("  mismatch: {m}");
        }
    }
    Ok(if reports.iter().all(|r| r.pass) { 0 } else { 1 })
}

#[derive(Serialize)]
struct SaturationOutput<'a> {
    partitions: &'a [Partition],
    rows: usize,
    width: usize,
    factor: usize,
    #[serde(flatten)]
    report: SaturationReport,
    equivalent: bool,
}

fn cmd_saturation(
    ctx: &Ctx,
    partitions: &str,
    rows: usize,
    width: usize,
    factor: usize,
) -> Outcome {
    let parts: Vec<Partition> = partitions
        .split(';')
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    let report = ctx
        .engine
        .oracle()
        .saturation_check(&parts, rows, width, factor)?;
    let equivalent = report.equivalent();
    if ctx.format == Format::Json {
        ctx.emit(&SaturationOutput {
            partitions: &parts,
            rows,
            width,
            factor,
            report,
            equivalent,
        });
    } else {
        println!(
            "P1 (width {width}): {}, P2 (factor {factor}, width {}): {}",
            report.p1,
            factor * width,
            report.p2
        );
        println!("equivalent: {}/{}", report.p1, report.p2);
    }
    Ok(if equivalent { 0 } else { EXIT_DISAGREE })
}

#[derive(Serialize)]
struct HnOutput {
    problem: ProblemTuple,
    #[serde(flatten)]
    outcome: HnOutcome,
}

fn cmd_hn(ctx: &Ctx, tuple: &str) -> Outcome {
    let problem = parse_tuple(tuple)?;
    let outcome = hn_certificate(&problem, &ctx.engine)?;
    if ctx.format == Format::Json {
        ctx.emit(&HnOutput { problem, outcome });
        return Ok(0);
    }
    match &outcome {
        HnOutcome::Semistable => println!("{problem}: semistable"),
        HnOutcome::CodimensionViolated { violated } => println!(
            "{problem}: total codimension too large, value {}",
            violated.value
        ),
        HnOutcome::Unstable(cert) => {
            let l: Vec<String> = cert.ltuple.iter().map(|x| x.to_string()).collect();
            println!(
                "{problem}: contradictor d={} K={} slope {}",
                cert.contradictor.d,
                cert.violated.ktuple_string(),
                cert.contradictor.slope
            );
            println!(
                "  violated inequality value {}, L={}, point check {}",
                cert.violated.value,
                l.join(";"),
                cert.point_check
            );
        }
        HnOutcome::UnstableWithinBound {
            contradictor,
            point_check,
        } => {
            let k: Vec<String> = contradictor.ktuple.iter().map(|x| x.to_string()).collect();
            println!(
                "{problem}: unstable, contradictor d={} K={} slope {} within bound, point check {point_check}",
                contradictor.d,
                k.join(";"),
                contradictor.slope
            );
        }
    }
    Ok(0)
}

fn cmd_filtration(ctx: &Ctx, tuple: &str) -> Outcome {
    let problem = parse_tuple(tuple)?;
    let mut last = None;
    for attempt in 0..=horn_core::golden::MAX_RESEEDS as u64 {
        let seed = ctx.config.seed.wrapping_add(attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let flags = ProbeFlags::random(&problem, ctx.field, &mut rng);
        match build_filtration(&problem, &flags, &mut rng) {
            Ok(cert) => {
                let report = FiltrationReport::new(seed, ctx.field, &problem, &flags, &cert)?;
                let passed = report.check.passed();
                if ctx.format == Format::Json {
                    ctx.emit(&report);
                } else {
                    print_filtration(&report);
                }
                return Ok(if passed { 0 } else { 1 });
            }
            Err(e @ Error::GenericityFailure(_)) => last = Some(e),
            Err(e) => return Err(e.into()),
        }
    }
    Err(last.expect("loop ran at least once").into())
}

fn print_filtration(rep: &FiltrationReport) {
    let join = |v: &[horn_core::SchubertIndex]| {
        v.iter()
            .map(|x| format!("{{{x}}}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!(
        "{}: hom rank {} (expected {}), depth {}, seed {}, p={}",
        rep.problem, rep.hom_rank, rep.expected_dim, rep.h, rep.seed, rep.prime
    );
    for (u, dim) in rep.dims.iter().enumerate() {
        println!(
            "  S^({u}) dim {dim}: positions {} in [n]: {}",
            join(&rep.positions[u]),
            join(&rep.ambient_positions[u])
        );
    }
    let c = &rep.check;
    println!(
        "  structure {}, rigid bottom {}, containment {}, rank identity {}",
        c.structure, c.rigid_bottom, c.containment, c.rank_identity
    );
    for f in &c.failures {
        println!("  failure: {f}");
    }
}

#[derive(Serialize)]
struct CountOutput {
    problem: ProblemTuple,
    q: u64,
    intersection_number: IntersectionNumber,
    samples: Vec<FlagSample>,
}

fn cmd_count(ctx: &Ctx, tuple: &str, q: u64, samples: usize) -> Outcome {
    let problem = parse_tuple(tuple)?;
    let rows = sample_counts(&problem, q, samples, ctx.config.seed)?;
    if ctx.format == Format::Json {
        ctx.emit(&CountOutput {
            intersection_number: ctx.engine.oracle().intersection_number(&problem),
            problem,
            q,
            samples: rows,
        });
    } else {
        print!("{}", samples_csv(&rows));
    }
    Ok(0)
}

fn cmd_table(ctx: &Ctx, d: usize, r: usize, s: usize) -> Outcome {
    if d > r {
        return Err(Error::ShapeMismatch(format!("d={d} exceeds r={r}")).into());
    }
    let table: std::sync::Arc<NonvanishingTable> = ctx.engine.build_table(d, r, s, Mode::B)?;
    if ctx.format == Format::Json {
        print_json(table.as_ref());
    } else {
        println!(
            "Gr({d}, {r}), s={s}: {} nonvanishing tuples, {} point tuples",
            table.tuples.len(),
            table.point_tuples.len()
        );
        for t in &table.tuples {
            let k: Vec<String> = t.iter().map(|x| x.to_string()).collect();
            let mark = if table.point_tuples.contains(t) {
                " *"
            } else {
                ""
            };
            println!("{}{mark}", k.join(";"));
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct SweepSummary {
    r: usize,
    n: usize,
    s: usize,
    tuples: usize,
    nonzero: usize,
    certified: usize,
    disagreements: Vec<String>,
}

fn cmd_sweep(ctx: &Ctx, r: usize, n: usize, s: usize) -> Outcome {
    if r > n {
        return Err(Error::ShapeMismatch(format!("r={r} exceeds n={n}")).into());
    }
    let mut rng = ctx.rng();
    let mut summary = SweepSummary {
        r,
        n,
        s,
        tuples: 0,
        nonzero: 0,
        certified: 0,
        disagreements: Vec::new(),
    };
    for problem in ProblemTuple::all(r, n, s) {
        summary.tuples += 1;
        let oracle = ctx.engine.oracle().is_nonzero_product(&problem);
        let b = ctx.engine.horn_decide(&problem, Mode::B)?.nonzero;
        let c = ctx.engine.horn_decide(&problem, Mode::C)?.nonzero;
        let certified = certify_nonzero(&problem, ctx.config.trials, ctx.field, &mut rng).verdict
            == ProbeVerdict::CertifiedNonzero;
        summary.nonzero += oracle as usize;
        summary.certified += certified as usize;
        if oracle != b || b != c || (certified && !oracle) {
            summary.disagreements.push(format!(
                "{problem}: oracle={oracle} B={b} C={c} certified={certified}"
            ));
        }
    }
    if ctx.format == Format::Json {
        ctx.emit(&summary);
    } else {
        println!(
            "Gr({r}, {n}), s={s}: {} tuples, {} nonzero, {} certified, {} disagreements",
            summary.tuples,
            summary.nonzero,
            summary.certified,
            summary.disagreements.len()
        );
        for d in &summary.disagreements {
            println!("  {d}");
        }
    }
    Ok(if summary.disagreements.is_empty() {
        0
    } else {
        EXIT_DISAGREE
    })
}

fn run(cli: Cli) -> Outcome {
    let field = PrimeField::new(cli.prime)?;
    let ctx = Ctx {
        config: RunConfig {
            prime: cli.prime,
            trials: cli.trials as usize,
            seed: cli.seed,
            depth: cli.depth,
            mode: cli.mode,
        },
        field,
        engine: HornEngine::new(cli.depth),
        format: cli.format,
        which: cli.engine,
    };
    match &cli.command {
        Command::Nonzero { tuple } => cmd_nonzero(&ctx, tuple),
        Command::Inequalities { r, n, s } => cmd_inequalities(&ctx, *r, *n, *s),
        Command::Examples => cmd_examples(&ctx),
        Command::Saturation {
            partitions,
            rows,
            width,
            factor,
        } => cmd_saturation(&ctx, partitions, *rows, *width, *factor),
        Command::Hn { tuple } => cmd_hn(&ctx, tuple),
        Command::Filtration { tuple } => cmd_filtration(&ctx, tuple),
        Command::Count { tuple, q, samples } => cmd_count(&ctx, tuple, *q, *samples),
        Command::Table { d, r, s } => cmd_table(&ctx, *d, *r, *s),
        Command::Sweep { r, n, s } => cmd_sweep(&ctx, *r, *n, *s),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
