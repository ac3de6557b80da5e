use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const EXAMPLE: &str = "exp(x1-2*x2^2+3*x3^3)";
const EXAMPLE_BOX: &str = "-0.3,0.2;-0.1,0.6;-0.4,0.5";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hessbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn round3(s: &str) -> f64 {
    (s.parse::<f64>().unwrap() * 1000.0).round() / 1000.0
}

#[test]
fn bounds_for_the_worked_example() {
    let o = run(&[
        "bounds",
        "--expr",
        EXAMPLE,
        "--box",
        EXAMPLE_BOX,
        "--methods",
        "A,G,H",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out.lines().map(|l| l.split(' ').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][0], "A");
    assert_eq!((round3(rows[0][1]), round3(rows[0][2])), (-19.904, 37.004));
    // The printed G and H values were computed from the Hessian rounded to
    // three decimals; rounding three entries moves them by at most 1.5e-3.
    let near = |s: &str, want: f64| (s.parse::<f64>().unwrap() - want).abs() <= 1.5e-3;
    assert_eq!(rows[1][0], "G");
    assert!(near(rows[1][1], -26.391) && near(rows[1][2], 38.587));
    assert_eq!(rows[2][0], "H");
    assert!(near(rows[2][1], -20.597) && near(rows[2][2], 29.603));
    // six significant digits by default
    assert_eq!(rows[0][1], "-19.9039");
}

#[test]
fn bounds_respects_method_selection_and_digits() {
    let o = run(&[
        "bounds",
        "--expr",
        EXAMPLE,
        "--box",
        EXAMPLE_BOX,
        "--methods",
        "H",
        "--digits",
        "3",
    ]);
    assert_eq!(stdout(&o), "H -20.6 29.6\n");
}

#[test]
fn affine_input_prints_zeros() {
    let o = run(&["bounds", "--expr", "3*x1 - x2 + 2", "--box", "0,1;-1,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "A 0 0\nG 0 0\nH 0 0\n");
}

#[test]
fn exit_codes() {
    let o = run(&["bounds", "--expr", "ln(x1)", "--box", "-1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
    let o = run(&["bounds", "--expr", "x1 +", "--box", "0,1"]);
    assert_eq!(o.status.code(), Some(1));
    let big = vec!["0,1"; 17].join(";");
    let o = run(&["bounds", "--expr", "x1*x2", "--box", &big]);
    assert_eq!(o.status.code(), Some(3));
    // without Hertz-Rohn the cap does not apply
    let o = run(&[
        "bounds",
        "--expr",
        "x1*x2",
        "--box",
        &big,
        "--methods",
        "A,G",
    ]);
    assert!(o.status.success());
    let o = run(&["bounds", "--expr", "x1", "--box", "1,0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn count_prints_the_totals() {
    let o = run(&["count", "--expr", EXAMPLE]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("N_A=163 N_G=326 dNA=73"), "{out}");
    assert!(out.contains("N_A/N_G=50.00%"), "{out}");
    let o = run(&["count", "--expr", "x1"]);
    assert!(stdout(&o).contains("N_A=0 "));
}

#[test]
fn count_ratio_falls_with_dimension() {
    let mut last = f64::INFINITY;
    for n in [2, 4, 8, 16] {
        let expr: Vec<String> = (1..=n).map(|i| format!("x{i}^2")).collect();
        let out = stdout(&run(&["count", "--expr", &expr.join(" + ")]));
        let pct = out
            .split_whitespace()
            .find_map(|w| w.strip_prefix("N_A/N_G="))
            .unwrap()
            .trim_end_matches('%')
            .parse::<f64>()
            .unwrap();
        assert!(pct < last, "n = {n}: {pct} >= {last}");
        last = pct;
    }
}

#[test]
fn count_accepts_a_cost_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.txt");
    fs::write(&path, hessbound::CostTable::literal().to_config()).unwrap();
    let o = run(&[
        "count",
        "--expr",
        EXAMPLE,
        "--cost-table",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("N_G=326"));
    fs::write(&path, "offset x").unwrap();
    let o = run(&[
        "count",
        "--expr",
        EXAMPLE,
        "--cost-table",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn codelist_dump_and_trace() {
    let o = run(&["codelist", "--expr", EXAMPLE]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 10);
    assert!(out.contains("y10 = exp(y9)"));
    let o = run(&["codelist", "--expr", EXAMPLE, "--box", EXAMPLE_BOX]);
    let last = stdout(&o).lines().last().unwrap().to_string();
    assert!(last.contains("eig [-19.9039, 37.0043]"), "{last}");
}

#[test]
fn oracle_lies_inside_the_bounds() {
    let o = run(&[
        "oracle",
        "--expr",
        EXAMPLE,
        "--box",
        EXAMPLE_BOX,
        "--samples",
        "200",
    ]);
    let out = stdout(&o);
    let f: Vec<f64> = out
        .split_whitespace()
        .skip(1)
        .map(|s| s.parse().unwrap())
        .collect();
    assert!(out.starts_with("O "));
    assert!(f[0] >= -20.597 && f[1] <= 29.603 && f[0] <= f[1]);
}

#[test]
fn bench_is_deterministic_across_runs_and_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = data("demo3.txt");
    let mut outputs = Vec::new();
    for (k, jobs) in ["1", "1", "4"].iter().enumerate() {
        let out = dir.path().join(k.to_string());
        let o = run(&[
            "bench",
            "--corpus",
            &corpus,
            "--trials",
            "30",
            "--jobs",
            jobs,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let files: Vec<Vec<u8>> = ["trials.csv", "aggregate.csv", "ranking.csv", "report.md"]
            .iter()
            .map(|f| fs::read(out.join(f)).unwrap())
            .collect();
        outputs.push(files);
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let trials = String::from_utf8(outputs[0][0].clone()).unwrap();
    assert_eq!(trials.lines().count(), 1 + 3 * 30);
}

#[test]
fn bench_with_pinned_boxes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t6");
    let o = run(&[
        "bench",
        "--corpus",
        &data("illustrative.txt"),
        "--boxes-file",
        &data("illustrative_boxes.txt"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let trials = fs::read_to_string(out.join("trials.csv")).unwrap();
    let rows: Vec<&str> = trials.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].ends_with(",++,+"), "{}", rows[0]);
    assert!(rows[3].ends_with(",-,++"), "{}", rows[3]);
}

#[test]
fn bench_on_an_empty_corpus_writes_headers_only() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("empty.txt");
    fs::write(&corpus, "# nothing here\n").unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "bench",
        "--corpus",
        corpus.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let trials = fs::read_to_string(out.join("trials.csv")).unwrap();
    assert_eq!(
        trials,
        "case,trial,feasible,lo_A,hi_A,lo_G,hi_G,lo_H,hi_H,class_lo,class_hi\n"
    );
}

#[test]
fn bench_rejects_a_malformed_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("bad.txt");
    fs::write(&corpus, "f; 2; 0,1; x1*x2\n").unwrap();
    let o = run(&[
        "bench",
        "--corpus",
        corpus.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}
