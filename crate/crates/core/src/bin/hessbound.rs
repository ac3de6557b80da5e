use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hessbound::bench::{self, BenchOptions, EQ_TOL};
use hessbound::propagate::{propagate_with, PropagateOptions};
use hessbound::spectral::{self, HERTZ_ROHN_CAP};
use hessbound::{
    count, parse, BenchError, Codelist, CostTable, EvalError, IntervalBox, Method, Mode,
    SpectralBounds, SpectralError,
};

/// Guaranteed eigenvalue bounds for Hessians of scalar functions on boxes.
#[derive(Parser)]
#[command(name = "hessbound", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print spectral bounds of the Hessian over a box, one `method lo hi` line per method.
    Bounds(BoundsArgs),
    /// Print the codelist of an expression; with --box, also the per-line enclosures.
    Codelist(CodelistArgs),
    /// Print per-line operation counts and the totals N_A, N_G and dNA.
    Count(CountArgs),
    /// Run the benchmark over a corpus and write CSV and markdown reports.
    Bench(BenchArgs),
    /// Inner estimate of the spectrum from point Hessians at sample points.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct ExprArgs {
    /// Expression in x1, x2, ... (e.g. "exp(x1 - 2*x2^2)").
    #[arg(long, allow_hyphen_values = true)]
    expr: String,
    /// Number of variables; inferred from the box or the expression if omitted.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    expr: ExprArgs,
    /// Box as `lo,hi;lo,hi;...`.
    #[arg(long = "box", allow_hyphen_values = true)]
    domain: String,
    /// Comma-separated subset of A (arithmetic), G (Gershgorin), H (Hertz-Rohn).
    #[arg(long, default_value = "A,G,H")]
    methods: String,
    /// Significant digits of the printed bounds.
    #[arg(long, default_value_t = 6)]
    digits: usize,
    /// Largest dimension for which Hertz-Rohn runs.
    #[arg(long, default_value_t = HERTZ_ROHN_CAP)]
    hr_cap: usize,
    /// Relative outward inflation of every intermediate enclosure.
    #[arg(long)]
    inflate: Option<f64>,
}

#[derive(Args)]
struct CodelistArgs {
    #[command(flatten)]
    expr: ExprArgs,
    #[arg(long = "box", allow_hyphen_values = true)]
    domain: Option<String>,
    #[arg(long, default_value_t = 6)]
    digits: usize,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    expr: ExprArgs,
    /// Cost table config replacing the built-in one.
    #[arg(long)]
    cost_table: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Corpus file (`name; n; lo1,hi1,...; expression` lines or a JSON array).
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory for trials.csv, aggregate.csv, ranking.csv and report.md.
    #[arg(long, default_value = "bench-out")]
    out: PathBuf,
    /// Pinned boxes, `name: lo,hi;lo,hi;...` per line.
    #[arg(long)]
    boxes_file: Option<PathBuf>,
    #[arg(long)]
    cost_table: Option<PathBuf>,
    /// Relative tolerance under which two bounds are classed equal.
    #[arg(long, default_value_t = EQ_TOL)]
    eq_tol: f64,
    #[arg(long, default_value_t = HERTZ_ROHN_CAP)]
    hr_cap: usize,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    expr: ExprArgs,
    #[arg(long = "box", allow_hyphen_values = true)]
    domain: String,
    /// Halton points; box vertices are added for n <= 10.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 6)]
    digits: usize,
}

/// Exit codes.
const USAGE: u8 = 1;
const DOMAIN: u8 = 2;
const CAP: u8 = 3;
const OTHER: u8 = 4;

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl ToString) -> Failure {
    Failure {
        code,
        msg: msg.to_string(),
    }
}

fn eval_failure(e: EvalError) -> Failure {
    let code = match e {
        EvalError::Domain { .. } | EvalError::PointDomain { .. } => DOMAIN,
        EvalError::DimensionMismatch { .. } | EvalError::NonFinitePoint => USAGE,
        _ => OTHER,
    };
    fail(code, e)
}

fn spectral_failure(e: SpectralError) -> Failure {
    match e {
        SpectralError::DimensionCap { .. } => fail(CAP, e),
        SpectralError::Eval(inner) => eval_failure(inner),
        other => fail(OTHER, other),
    }
}

fn bench_failure(e: BenchError) -> Failure {
    match e {
        BenchError::Parse { .. } | BenchError::Corpus { .. } => fail(USAGE, e),
        BenchError::Spectral {
            source: SpectralError::DimensionCap { .. },
            ..
        } => fail(CAP, e),
        other => fail(OTHER, other),
    }
}

/// Formats like C's `%.{digits}g`.
fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!(
            "{}e{}{:02}",
            trim_zeros(mant),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Largest `xK` index in the expression.
fn infer_vars(expr: &str) -> usize {
    let b = expr.as_bytes();
    let mut n = 0;
    let mut i = 0;
    while i < b.len() {
        let boundary = i == 0 || !(b[i - 1].is_ascii_alphanumeric() || b[i - 1] == b'_');
        if b[i] == b'x' && boundary {
            let start = i + 1;
            let mut j = start;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            let word_end = j == b.len() || !(b[j].is_ascii_alphanumeric() || b[j] == b'_');
            if j > start && word_end {
                n = n.max(expr[start..j].parse().unwrap_or(0));
            }
            i = j.max(i + 1);
        } else {
            i += 1;
        }
    }
    n
}

fn parse_box(text: &str) -> Result<IntervalBox, Failure> {
    IntervalBox::parse(text).map_err(|e| fail(USAGE, format!("bad box: {e}")))
}

fn load_codelist(args: &ExprArgs, domain: Option<&IntervalBox>) -> Result<Codelist, Failure> {
    let n = match (args.n, domain) {
        (Some(n), Some(d)) if n != d.dim() => {
            return Err(fail(
                USAGE,
                format!("--n {n} disagrees with the box dimension {}", d.dim()),
            ))
        }
        (Some(n), _) => n,
        (None, Some(d)) => d.dim(),
        (None, None) => infer_vars(&args.expr).max(1),
    };
    parse(&args.expr, n).map_err(|e| fail(USAGE, e))
}

fn load_cost_table(path: Option<&Path>) -> Result<CostTable, Failure> {
    match path {
        None => Ok(CostTable::default()),
        Some(p) => {
            let text =
                fs::read_to_string(p).map_err(|e| fail(USAGE, format!("{}: {e}", p.display())))?;
            CostTable::parse(&text).map_err(|e| fail(USAGE, format!("{}: {e}", p.display())))
        }
    }
}

fn print_bounds(b: &SpectralBounds, digits: usize) {
    println!(
        "{} {} {}",
        b.method.tag(),
        fmt_sig(b.lo, digits),
        fmt_sig(b.hi, digits)
    );
}

fn cmd_bounds(args: &BoundsArgs) -> Result<(), Failure> {
    let mut methods = Vec::new();
    for tag in args
        .methods
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
    {
        match Method::from_tag(tag) {
            Some(m @ (Method::Arithmetic | Method::Gershgorin | Method::HertzRohn)) => {
                methods.push(m)
            }
            _ => {
                return Err(fail(
                    USAGE,
                    format!("unknown method `{tag}`; use A, G or H"),
                ))
            }
        }
    }
    let domain = parse_box(&args.domain)?;
    let cl = load_codelist(&args.expr, Some(&domain))?;
    if methods.contains(&Method::HertzRohn) && cl.n_vars() > args.hr_cap {
        return Err(spectral_failure(SpectralError::DimensionCap {
            n: cl.n_vars(),
            cap: args.hr_cap,
        }));
    }
    let needs_hessian = methods.iter().any(|m| *m != Method::Arithmetic);
    let mode = match (methods.contains(&Method::Arithmetic), needs_hessian) {
        (true, true) => Mode::Both,
        (false, _) => Mode::Hessian,
        (true, false) => Mode::Eigen,
    };
    let opts = PropagateOptions {
        inflate: args.inflate,
    };
    let trace = propagate_with(&cl, &domain, mode, &opts).map_err(eval_failure)?;
    for m in methods {
        let b = match m {
            Method::Arithmetic => spectral::arithmetic(&trace).expect("eigen mode selected"),
            Method::Gershgorin => spectral::gershgorin(trace.hessian().expect("hessian mode")),
            _ => {
                let h = trace.hessian().expect("hessian mode");
                spectral::hertz_rohn_report(h, args.hr_cap)
                    .map_err(spectral_failure)?
                    .bounds
            }
        };
        print_bounds(&b, args.digits);
    }
    Ok(())
}

fn cmd_codelist(args: &CodelistArgs) -> Result<(), Failure> {
    let domain = args.domain.as_deref().map(parse_box).transpose()?;
    let cl = load_codelist(&args.expr, domain.as_ref())?;
    let Some(domain) = domain else {
        print!("{}", cl.dump());
        return Ok(());
    };
    let trace =
        propagate_with(&cl, &domain, Mode::Eigen, &Default::default()).map_err(eval_failure)?;
    let d = args.digits;
    for (text, line) in cl.dump().lines().zip(trace.lines()) {
        let eig = line.eig.expect("eigen mode");
        println!(
            "{text:<28} val [{}, {}]  eig [{}, {}]",
            fmt_sig(line.val.lo(), d),
            fmt_sig(line.val.hi(), d),
            fmt_sig(eig.lo(), d),
            fmt_sig(eig.hi(), d)
        );
    }
    Ok(())
}

fn cmd_count(args: &CountArgs) -> Result<(), Failure> {
    let table = load_cost_table(args.cost_table.as_deref())?;
    let cl = load_codelist(&args.expr, None)?;
    println!("{}", count(&cl, cl.n_vars(), &table));
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<(), Failure> {
    let cases = bench::load_corpus(&args.corpus).map_err(bench_failure)?;
    let pinned = match &args.boxes_file {
        Some(p) => {
            let text =
                fs::read_to_string(p).map_err(|e| fail(USAGE, format!("{}: {e}", p.display())))?;
            bench::parse_boxes(&text).map_err(bench_failure)?
        }
        None => Default::default(),
    };
    for name in pinned.keys() {
        if !cases.iter().any(|c| &c.name == name) {
            eprintln!("warning: pinned boxes for unknown case `{name}`");
        }
    }
    let opts = BenchOptions {
        trials: args.trials,
        seed: args.seed,
        hertz_rohn_cap: args.hr_cap,
        pinned,
        jobs: args.jobs,
        eq_tol: args.eq_tol,
        cost_table: load_cost_table(args.cost_table.as_deref())?,
    };
    let run = bench::run_corpus(&cases, &opts).map_err(bench_failure)?;
    bench::write_outputs(&run, &args.out).map_err(bench_failure)?;
    let infeasible: u32 = run.cases.iter().map(|c| c.tally.infeasible).sum();
    if infeasible > 0 {
        eprintln!("{infeasible} trial(s) infeasible after resampling");
    }
    match run.aggregate.rows.last() {
        Some(all) => println!(
            "{} cases: - {:.2}%  o {:.2}%  + {:.2}%  ++ {:.2}%  N_A/N_G {:.2}%  dNA/N_G {:.2}%",
            all.cases,
            all.percent[0],
            all.percent[1],
            all.percent[2],
            all.percent[3],
            all.ratio_a_g_mean,
            all.ratio_delta_g_mean
        ),
        None => println!("0 cases"),
    }
    eprintln!("wrote reports to {}", args.out.display());
    Ok(())
}

fn cmd_oracle(args: &OracleArgs) -> Result<(), Failure> {
    let domain = parse_box(&args.domain)?;
    let cl = load_codelist(&args.expr, Some(&domain))?;
    let b = spectral::sampled_oracle(&cl, &domain, args.samples).map_err(spectral_failure)?;
    print_bounds(&b, args.digits);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(USAGE);
        }
    };
    let result = match &cli.cmd {
        Cmd::Bounds(a) => cmd_bounds(a),
        Cmd::Codelist(a) => cmd_codelist(a),
        Cmd::Count(a) => cmd_count(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
