//! Benchmark harness: random boxes, three-method comparison, classification,
//! per-case tallies and per-dimension aggregation.
//!
//! Every trial draws from its own ChaCha stream seeded from
//! `(seed, case name, trial index)`, so serial and parallel runs produce the
//! same records in the same order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::codelist::{parse, Codelist};
use crate::costmodel::{count, CostReport, CostTable};
use crate::error::{BenchError, EvalError, NotContained, SpectralError};
use crate::interval::{Interval, IntervalBox};
use crate::spectral::{bound_all, AllBounds, BoundOptions, SpectralBounds, HERTZ_ROHN_CAP};

/// Relative tolerance under which two bounds count as equal.
pub const EQ_TOL: f64 = 1e-12;

/// Extra draws per trial when a box leaves the function's domain.
pub const MAX_RESAMPLES: usize = 10;

/// One benchmark function.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionCase {
    pub name: String,
    pub n: usize,
    pub domain: IntervalBox,
    pub expression: String,
}

impl FunctionCase {
    pub fn new(name: &str, domain: IntervalBox, expression: &str) -> Self {
        FunctionCase {
            name: name.to_string(),
            n: domain.dim(),
            domain,
            expression: expression.to_string(),
        }
    }

    pub fn codelist(&self) -> Result<Codelist, BenchError> {
        parse(&self.expression, self.n).map_err(|source| BenchError::Parse {
            case: self.name.clone(),
            source,
        })
    }
}

#[derive(Deserialize)]
struct JsonCase {
    name: String,
    n: usize,
    domain: Vec<[f64; 2]>,
    expression: String,
}

/// Parses a corpus: either `name; n; lo1,hi1,…,lon,hin; expression` lines
/// (blank lines and `#` comments ignored) or a JSON array of objects with
/// fields `name`, `n`, `domain` (list of `[lo, hi]`) and `expression`.
pub fn parse_corpus(text: &str) -> Result<Vec<FunctionCase>, BenchError> {
    if text.trim_start().starts_with('[') {
        let raw: Vec<JsonCase> = serde_json::from_str(text)?;
        return raw
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let bounds: Vec<(f64, f64)> = c.domain.iter().map(|d| (d[0], d[1])).collect();
                make_case(i + 1, &c.name, c.n, &bounds, &c.expression)
            })
            .collect();
    }
    let mut cases = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let line_no = idx + 1;
        let fields: Vec<&str> = line.splitn(4, ';').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(BenchError::Corpus {
                line: line_no,
                msg: "expected `name; n; lo1,hi1,...; expression`".into(),
            });
        }
        let n: usize = fields[1].parse().map_err(|_| BenchError::Corpus {
            line: line_no,
            msg: format!("`{}` is not a dimension", fields[1]),
        })?;
        let nums: Vec<f64> = fields[2]
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| BenchError::Corpus {
                line: line_no,
                msg: "malformed domain bounds".into(),
            })?;
        if !nums.len().is_multiple_of(2) {
            return Err(BenchError::Corpus {
                line: line_no,
                msg: "domain needs lo,hi pairs".into(),
            });
        }
        let bounds: Vec<(f64, f64)> = nums.chunks(2).map(|p| (p[0], p[1])).collect();
        cases.push(make_case(line_no, fields[0], n, &bounds, fields[3])?);
    }
    Ok(cases)
}

fn make_case(
    line: usize,
    name: &str,
    n: usize,
    bounds: &[(f64, f64)],
    expression: &str,
) -> Result<FunctionCase, BenchError> {
    let corpus = |msg: String| BenchError::Corpus { line, msg };
    if name.is_empty() {
        return Err(corpus("empty case name".into()));
    }
    if bounds.len() != n {
        return Err(corpus(format!(
            "case `{name}` declares n = {n} but has {} domain intervals",
            bounds.len()
        )));
    }
    let domain = IntervalBox::from_bounds(bounds).map_err(|e| corpus(e.to_string()))?;
    let case = FunctionCase::new(name, domain, expression);
    case.codelist()?;
    Ok(case)
}

pub fn load_corpus(path: &Path) -> Result<Vec<FunctionCase>, BenchError> {
    parse_corpus(&fs::read_to_string(path)?)
}

/// Parses pinned boxes, one per line: `name: lo,hi;lo,hi;…`. A name may
/// appear on several lines; its boxes are kept in file order.
pub fn parse_boxes(text: &str) -> Result<BTreeMap<String, Vec<IntervalBox>>, BenchError> {
    let mut out: BTreeMap<String, Vec<IntervalBox>> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, spec) = line.split_once(':').ok_or_else(|| BenchError::Corpus {
            line: idx + 1,
            msg: "expected `name: lo,hi;lo,hi;...`".into(),
        })?;
        let b = IntervalBox::parse(spec).map_err(|e| BenchError::Corpus {
            line: idx + 1,
            msg: e.to_string(),
        })?;
        out.entry(name.trim().to_string()).or_default().push(b);
    }
    Ok(out)
}

/// Class of one bound comparison between the arithmetic (A), Gershgorin (G)
/// and Hertz–Rohn (H) results.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    /// A is looser than G.
    Minus,
    /// A equals G.
    Circle,
    /// A is tighter than G but not tighter than H.
    Plus,
    /// A is tighter than H.
    PlusPlus,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 4] = [
        ClassLabel::Minus,
        ClassLabel::Circle,
        ClassLabel::Plus,
        ClassLabel::PlusPlus,
    ];

    /// ASCII label used in CSV output.
    pub fn label(self) -> &'static str {
        match self {
            ClassLabel::Minus => "-",
            ClassLabel::Circle => "o",
            ClassLabel::Plus => "+",
            ClassLabel::PlusPlus => "++",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Classifies the lower and upper bounds of `a` against `g` and `h`, treating
/// bounds within [`EQ_TOL`] (relative) as equal.
pub fn classify(
    a: &SpectralBounds,
    g: &SpectralBounds,
    h: &SpectralBounds,
) -> Result<(ClassLabel, ClassLabel), NotContained> {
    classify_with(a, g, h, EQ_TOL)
}

/// [`classify`] with an explicit relative equality tolerance.
pub fn classify_with(
    a: &SpectralBounds,
    g: &SpectralBounds,
    h: &SpectralBounds,
    tol: f64,
) -> Result<(ClassLabel, ClassLabel), NotContained> {
    let approx_eq = |x: f64, y: f64| (x - y).abs() <= tol * x.abs().max(y.abs());
    let below = |x: f64, y: f64| x <= y || approx_eq(x, y);
    if !(below(g.lo, h.lo) && below(h.hi, g.hi)) {
        return Err(NotContained {
            g_lo: g.lo,
            g_hi: g.hi,
            h_lo: h.lo,
            h_hi: h.hi,
        });
    }
    let lo = if approx_eq(a.lo, g.lo) {
        ClassLabel::Circle
    } else if a.lo < g.lo {
        ClassLabel::Minus
    } else if below(a.lo, h.lo) {
        ClassLabel::Plus
    } else {
        ClassLabel::PlusPlus
    };
    let hi = if approx_eq(a.hi, g.hi) {
        ClassLabel::Circle
    } else if a.hi > g.hi {
        ClassLabel::Minus
    } else if below(h.hi, a.hi) {
        ClassLabel::Plus
    } else {
        ClassLabel::PlusPlus
    };
    Ok((lo, hi))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Independent random stream for one trial of one case.
pub fn trial_rng(seed: u64, case: &str, trial: usize) -> ChaCha8Rng {
    let s = splitmix(splitmix(splitmix(seed) ^ fnv1a(case)) ^ trial as u64);
    ChaCha8Rng::seed_from_u64(s)
}

/// A random sub-box of `domain`: per dimension, two uniform draws sorted into
/// `[lo, hi]`.
pub fn random_box<R: Rng + ?Sized>(domain: &IntervalBox, rng: &mut R) -> IntervalBox {
    let dims = domain
        .dims()
        .iter()
        .map(|d| {
            let u = d.lo() + rng.gen::<f64>() * d.width();
            let v = d.lo() + rng.gen::<f64>() * d.width();
            let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
            Interval::new(lo.clamp(d.lo(), d.hi()), hi.clamp(d.lo(), d.hi()))
                .expect("sorted draws inside a finite domain")
        })
        .collect();
    IntervalBox::new(dims).expect("domain is nonempty")
}

/// `count` random sub-boxes of `domain` from one seeded stream.
pub fn random_boxes(domain: &IntervalBox, count: usize, seed: u64) -> Vec<IntervalBox> {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed));
    (0..count).map(|_| random_box(domain, &mut rng)).collect()
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub trials: usize,
    pub seed: u64,
    pub hertz_rohn_cap: usize,
    /// Pinned boxes per case name; a case listed here uses exactly these
    /// boxes instead of random ones.
    pub pinned: BTreeMap<String, Vec<IntervalBox>>,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    /// Relative tolerance for the `o` class.
    pub eq_tol: f64,
    pub cost_table: CostTable,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            trials: 100,
            seed: 0,
            hertz_rohn_cap: HERTZ_ROHN_CAP,
            pinned: BTreeMap::new(),
            jobs: None,
            eq_tol: EQ_TOL,
            cost_table: CostTable::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub case: String,
    pub trial: usize,
    /// The box the bounds refer to (the last one tried if infeasible).
    pub domain: IntervalBox,
    /// Boxes drawn for this slot, including the accepted one.
    pub attempts: usize,
    /// `None` if every attempt left the function's domain.
    pub bounds: Option<AllBounds>,
    pub class_lo: Option<ClassLabel>,
    pub class_hi: Option<ClassLabel>,
}

impl TrialRecord {
    pub fn feasible(&self) -> bool {
        self.bounds.is_some()
    }
}

/// Class counts of one case over its feasible trials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub case: String,
    pub n: usize,
    /// Indexed by [`ClassLabel`] order: `-`, `o`, `+`, `++`.
    pub lo: [u32; 4],
    pub hi: [u32; 4],
    pub feasible: u32,
    pub infeasible: u32,
}

impl Tally {
    fn add(&mut self, r: &TrialRecord) {
        match (r.class_lo, r.class_hi) {
            (Some(l), Some(h)) => {
                self.lo[l.index()] += 1;
                self.hi[h.index()] += 1;
                self.feasible += 1;
            }
            _ => self.infeasible += 1,
        }
    }

    /// Combined lower and upper count of one class.
    pub fn both(&self, c: ClassLabel) -> u32 {
        self.lo[c.index()] + self.hi[c.index()]
    }

    /// Percentage of one class over all lower and upper labels.
    pub fn percent(&self, c: ClassLabel) -> f64 {
        if self.feasible == 0 {
            return 0.0;
        }
        100.0 * f64::from(self.both(c)) / f64::from(2 * self.feasible)
    }
}

fn is_infeasible(e: &SpectralError) -> bool {
    matches!(
        e,
        SpectralError::Eval(
            EvalError::Domain { .. } | EvalError::PointDomain { .. } | EvalError::Overflow { .. }
        )
    )
}

fn run_slot(
    case: &FunctionCase,
    cl: &Codelist,
    trial: usize,
    boxes: &mut dyn Iterator<Item = IntervalBox>,
    opts: &BoundOptions,
    eq_tol: f64,
) -> Result<TrialRecord, BenchError> {
    let mut attempts = 0;
    let mut last = case.domain.clone();
    for b in boxes {
        attempts += 1;
        match bound_all(cl, &b, opts) {
            Ok(bounds) => {
                let (lo, hi) = classify_with(
                    &bounds.arithmetic,
                    &bounds.gershgorin,
                    &bounds.hertz_rohn,
                    eq_tol,
                )
                .map_err(|source| BenchError::Inconsistent {
                    case: case.name.clone(),
                    source,
                })?;
                return Ok(TrialRecord {
                    case: case.name.clone(),
                    trial,
                    domain: b,
                    attempts,
                    bounds: Some(bounds),
                    class_lo: Some(lo),
                    class_hi: Some(hi),
                });
            }
            Err(e) if is_infeasible(&e) => last = b,
            Err(source) => {
                return Err(BenchError::Spectral {
                    case: case.name.clone(),
                    source,
                })
            }
        }
    }
    Ok(TrialRecord {
        case: case.name.clone(),
        trial,
        domain: last,
        attempts,
        bounds: None,
        class_lo: None,
        class_hi: None,
    })
}

/// Runs all trials of one case. Pinned boxes replace random sampling and are
/// never resampled.
pub fn run_case(
    case: &FunctionCase,
    opts: &BenchOptions,
) -> Result<(Vec<TrialRecord>, Tally), BenchError> {
    let cl = case.codelist()?;
    let bound_opts = BoundOptions {
        hertz_rohn_cap: opts.hertz_rohn_cap,
        inflate: None,
    };
    let records: Vec<TrialRecord> = match opts.pinned.get(&case.name) {
        Some(boxes) => boxes
            .par_iter()
            .enumerate()
            .map(|(t, b)| {
                run_slot(
                    case,
                    &cl,
                    t,
                    &mut std::iter::once(b.clone()),
                    &bound_opts,
                    opts.eq_tol,
                )
            })
            .collect::<Result<_, _>>()?,
        None => (0..opts.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(opts.seed, &case.name, t);
                let mut draws = std::iter::repeat_with(|| random_box(&case.domain, &mut rng))
                    .take(1 + MAX_RESAMPLES);
                run_slot(case, &cl, t, &mut draws, &bound_opts, opts.eq_tol)
            })
            .collect::<Result<_, _>>()?,
    };
    let mut tally = Tally {
        case: case.name.clone(),
        n: case.n,
        ..Tally::default()
    };
    for r in &records {
        tally.add(r);
    }
    Ok((records, tally))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseResult {
    pub case: FunctionCase,
    pub records: Vec<TrialRecord>,
    pub tally: Tally,
    pub cost: CostReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRun {
    pub cases: Vec<CaseResult>,
    pub aggregate: AggregateReport,
}

/// Runs every case and aggregates.
pub fn run_corpus(cases: &[FunctionCase], opts: &BenchOptions) -> Result<BenchRun, BenchError> {
    let work = || -> Result<Vec<CaseResult>, BenchError> {
        cases
            .par_iter()
            .map(|case| {
                let (records, tally) = run_case(case, opts)?;
                let cost = count(&case.codelist()?, case.n, &opts.cost_table);
                Ok(CaseResult {
                    case: case.clone(),
                    records,
                    tally,
                    cost,
                })
            })
            .collect()
    };
    let results = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| BenchError::ThreadPool(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    let tallies: Vec<Tally> = results.iter().map(|r| r.tally.clone()).collect();
    let reports: Vec<CostReport> = results.iter().map(|r| r.cost.clone()).collect();
    let aggregate = aggregate(&tallies, &reports);
    Ok(BenchRun {
        cases: results,
        aggregate,
    })
}

/// One row of the per-dimension summary. Percentages average lower and upper
/// labels together; ratios are in percent.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateRow {
    /// Dimension as text, or `all`.
    pub label: String,
    pub cases: usize,
    /// Cases with at least one feasible trial; the class means run over these.
    pub cases_with_trials: usize,
    /// Mean percentage per class, in [`ClassLabel`] order.
    pub percent: [f64; 4],
    pub ratio_a_g_mean: f64,
    pub ratio_a_g_std: f64,
    pub ratio_delta_g_mean: f64,
    pub ratio_delta_g_std: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankedCase {
    pub rank: usize,
    pub tally: Tally,
    pub cost: CostReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AggregateReport {
    pub rows: Vec<AggregateRow>,
    pub ranking: Vec<RankedCase>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn summarize(label: String, group: &[(&Tally, &CostReport)]) -> AggregateRow {
    let with_trials: Vec<&Tally> = group
        .iter()
        .map(|(t, _)| *t)
        .filter(|t| t.feasible > 0)
        .collect();
    let mut percent = [0.0; 4];
    if !with_trials.is_empty() {
        for c in ClassLabel::ALL {
            percent[c.index()] =
                with_trials.iter().map(|t| t.percent(c)).sum::<f64>() / with_trials.len() as f64;
        }
    }
    let ag: Vec<f64> = group.iter().map(|(_, r)| 100.0 * r.ratio_a_g()).collect();
    let dg: Vec<f64> = group
        .iter()
        .map(|(_, r)| 100.0 * r.ratio_delta_g())
        .collect();
    let (ratio_a_g_mean, ratio_a_g_std) = mean_std(&ag);
    let (ratio_delta_g_mean, ratio_delta_g_std) = mean_std(&dg);
    AggregateRow {
        label,
        cases: group.len(),
        cases_with_trials: with_trials.len(),
        percent,
        ratio_a_g_mean,
        ratio_a_g_std,
        ratio_delta_g_mean,
        ratio_delta_g_std,
    }
}

/// Per-dimension rows, an `all` row and the ranked case list.
///
/// Cases rank by their combined `++` count, then `+`, then `o` (all
/// descending), then `-` (ascending), then name.
pub fn aggregate(tallies: &[Tally], reports: &[CostReport]) -> AggregateReport {
    assert_eq!(tallies.len(), reports.len(), "one cost report per tally");
    let pairs: Vec<(&Tally, &CostReport)> = tallies.iter().zip(reports).collect();
    let mut by_n: BTreeMap<usize, Vec<(&Tally, &CostReport)>> = BTreeMap::new();
    for p in &pairs {
        by_n.entry(p.0.n).or_default().push(*p);
    }
    let mut rows: Vec<AggregateRow> = by_n
        .iter()
        .map(|(n, g)| summarize(n.to_string(), g))
        .collect();
    if !pairs.is_empty() {
        rows.push(summarize("all".into(), &pairs));
    }

    let mut order: Vec<usize> = (0..tallies.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&tallies[i], &tallies[j]);
        b.both(ClassLabel::PlusPlus)
            .cmp(&a.both(ClassLabel::PlusPlus))
            .then(b.both(ClassLabel::Plus).cmp(&a.both(ClassLabel::Plus)))
            .then(b.both(ClassLabel::Circle).cmp(&a.both(ClassLabel::Circle)))
            .then(a.both(ClassLabel::Minus).cmp(&b.both(ClassLabel::Minus)))
            .then(a.case.cmp(&b.case))
    });
    let ranking = order
        .into_iter()
        .enumerate()
        .map(|(r, i)| RankedCase {
            rank: r + 1,
            tally: tallies[i].clone(),
            cost: reports[i].clone(),
        })
        .collect();
    AggregateReport { rows, ranking }
}

pub const TRIALS_HEADER: [&str; 11] = [
    "case", "trial", "feasible", "lo_A", "hi_A", "lo_G", "hi_G", "lo_H", "hi_H", "class_lo",
    "class_hi",
];

/// Writes the per-trial CSV.
pub fn write_trials_csv<W: std::io::Write>(run: &BenchRun, out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRIALS_HEADER)?;
    for r in run.cases.iter().flat_map(|c| &c.records) {
        let mut row = vec![
            r.case.clone(),
            r.trial.to_string(),
            r.feasible().to_string(),
        ];
        match &r.bounds {
            Some(b) => {
                for s in [&b.arithmetic, &b.gershgorin, &b.hertz_rohn] {
                    row.push(s.lo.to_string());
                    row.push(s.hi.to_string());
                }
            }
            None => row.extend(std::iter::repeat_n(String::new(), 6)),
        }
        row.push(r.class_lo.map_or("", ClassLabel::label).to_string());
        row.push(r.class_hi.map_or("", ClassLabel::label).to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the per-dimension summary CSV.
pub fn write_aggregate_csv<W: std::io::Write>(
    report: &AggregateReport,
    out: W,
) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "cases",
        "cases_with_trials",
        "minus_pct",
        "circle_pct",
        "plus_pct",
        "plusplus_pct",
        "na_ng_mean_pct",
        "na_ng_std_pct",
        "dna_ng_mean_pct",
        "dna_ng_std_pct",
    ])?;
    for row in &report.rows {
        let mut rec = vec![
            row.label.clone(),
            row.cases.to_string(),
            row.cases_with_trials.to_string(),
        ];
        rec.extend(row.percent.iter().map(|p| format!("{p:.4}")));
        for v in [
            row.ratio_a_g_mean,
            row.ratio_a_g_std,
            row.ratio_delta_g_mean,
            row.ratio_delta_g_std,
        ] {
            rec.push(format!("{v:.4}"));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the ranked per-case CSV.
pub fn write_ranking_csv<W: std::io::Write>(
    report: &AggregateReport,
    out: W,
) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "rank",
        "case",
        "n",
        "feasible",
        "infeasible",
        "lo_minus",
        "lo_circle",
        "lo_plus",
        "lo_plusplus",
        "hi_minus",
        "hi_circle",
        "hi_plus",
        "hi_plusplus",
        "n_a",
        "n_g",
        "delta_n_a",
    ])?;
    for r in &report.ranking {
        let t = &r.tally;
        let mut rec = vec![
            r.rank.to_string(),
            t.case.clone(),
            t.n.to_string(),
            t.feasible.to_string(),
            t.infeasible.to_string(),
        ];
        rec.extend(t.lo.iter().chain(&t.hi).map(u32::to_string));
        rec.extend([r.cost.n_a, r.cost.n_g, r.cost.delta_n_a].map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Markdown report with the ranked cases and the per-dimension summary.
pub fn markdown_report(report: &AggregateReport) -> String {
    let mut s = String::from("# Benchmark summary\n\n## Cases\n\n");
    s.push_str(
        "| rank | case | n | lower - | lower o | lower + | lower ++ | upper - | upper o | upper + | upper ++ | N_A | N_G | dN_A |\n",
    );
    s.push_str("|---:|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n");
    for r in &report.ranking {
        let t = &r.tally;
        let _ = write!(s, "| {} | {} | {} |", r.rank, t.case, t.n);
        for v in t.lo.iter().chain(&t.hi) {
            let _ = write!(s, " {v} |");
        }
        let _ = writeln!(
            s,
            " {} | {} | {} |",
            r.cost.n_a, r.cost.n_g, r.cost.delta_n_a
        );
    }
    s.push_str("\n## By dimension\n\n");
    s.push_str(
        "| n | cases | - % | o % | + % | ++ % | N_A/N_G mean % | std | dN_A/N_G mean % | std |\n",
    );
    s.push_str("|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n");
    for row in &report.rows {
        let _ = write!(s, "| {} | {} |", row.label, row.cases);
        for p in row.percent {
            let _ = write!(s, " {p:.2} |");
        }
        let _ = writeln!(
            s,
            " {:.2} | {:.2} | {:.2} | {:.2} |",
            row.ratio_a_g_mean, row.ratio_a_g_std, row.ratio_delta_g_mean, row.ratio_delta_g_std
        );
    }
    s
}

/// Writes `trials.csv`, `aggregate.csv`, `ranking.csv` and `report.md` into `dir`.
pub fn write_outputs(run: &BenchRun, dir: &Path) -> Result<(), BenchError> {
    fs::create_dir_all(dir)?;
    write_trials_csv(run, fs::File::create(dir.join("trials.csv"))?)?;
    write_aggregate_csv(&run.aggregate, fs::File::create(dir.join("aggregate.csv"))?)?;
    write_ranking_csv(&run.aggregate, fs::File::create(dir.join("ranking.csv"))?)?;
    fs::write(dir.join("report.md"), markdown_report(&run.aggregate))?;
    Ok(())
}
