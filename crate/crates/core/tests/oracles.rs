mod common;

use common::{
    eig_extremes, gen_function, random_box, random_interval_matrix, random_point, within,
};
use hessbound::bench::{self, BenchOptions, ClassLabel, FunctionCase};
use hessbound::costmodel::Column;
use hessbound::spectral::{
    self, alpha_bb_underestimate, bound_all, gershgorin, hertz_rohn, sampled_oracle,
    sym_eigenvalues, SymMatrix,
};
use hessbound::{CostTable, IntervalBox, OpClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn jacobi_agrees_with_nalgebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let n = rng.gen_range(1..=10);
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-10.0..10.0);
                m[i * n + j] = v;
                m[j * n + i] = v;
            }
        }
        let fro = m.iter().map(|v| v * v).sum::<f64>().sqrt();
        let ours = sym_eigenvalues(&SymMatrix::from_row_major(n, m.clone())).unwrap();
        let (lo, hi) = eig_extremes(n, &m);
        let tol = 1e-9 * fro.max(1.0);
        let ours_lo = ours.iter().cloned().fold(f64::INFINITY, f64::min);
        let ours_hi = ours.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(
            (ours_lo - lo).abs() <= tol && (ours_hi - hi).abs() <= tol,
            "{ours:?} vs [{lo}, {hi}]"
        );
    }
}

#[test]
fn hertz_rohn_lies_inside_gershgorin() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let n = rng.gen_range(1..=7);
        let h = random_interval_matrix(&mut rng, n);
        let hr = hertz_rohn(&h).unwrap();
        let g = gershgorin(&h);
        assert!(
            within(hr.lo, g.lo, g.hi) && within(hr.hi, g.lo, g.hi),
            "{hr:?} vs {g:?}"
        );
        // the midpoint matrix belongs to the set
        let mid = h.midpoints();
        let (lo, hi) = eig_extremes(n, &mid);
        assert!(within(lo, hr.lo, hr.hi) && within(hi, hr.lo, hr.hi));
    }
}

#[test]
fn sampled_oracle_lies_inside_every_method() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..60 {
        let n = rng.gen_range(1..=4);
        let (_, cl) = gen_function(&mut rng, n, 3);
        let b = random_box(&mut rng, n, 1.5);
        let all = bound_all(&cl, &b, &Default::default()).unwrap();
        let o = sampled_oracle(&cl, &b, 64).unwrap();
        for m in [all.arithmetic, all.gershgorin, all.hertz_rohn] {
            assert!(
                within(o.lo, m.lo, m.hi) && within(o.hi, m.lo, m.hi),
                "{o:?} vs {m:?}"
            );
        }
    }
}

#[test]
fn alpha_bb_is_a_convex_underestimator() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..60 {
        let n = rng.gen_range(1..=3);
        let (e, cl) = gen_function(&mut rng, n, 3);
        let b = random_box(&mut rng, n, 1.5);
        let lam = bound_all(&cl, &b, &Default::default())
            .unwrap()
            .arithmetic
            .lo;
        let u = |x: &[f64]| alpha_bb_underestimate(&cl, &b, lam, x).unwrap();
        for v in b.vertices() {
            let (a, f) = (u(&v), e.eval(&v));
            assert!((a - f).abs() <= 1e-9 * (1.0 + f.abs()), "{e}: vertex {v:?}");
        }
        for _ in 0..30 {
            let x = random_point(&mut rng, &b);
            let y = random_point(&mut rng, &b);
            let f = e.eval(&x);
            assert!(
                u(&x) <= f + 1e-9 * (1.0 + f.abs()),
                "{e}: not below at {x:?}"
            );
            let m: Vec<f64> = x.iter().zip(&y).map(|(p, q)| 0.5 * (p + q)).collect();
            let chord = 0.5 * (u(&x) + u(&y));
            assert!(
                u(&m) <= chord + 1e-8 * (1.0 + chord.abs()),
                "{e}: not convex"
            );
        }
    }
    let cl = hessbound::parse("x1^2", 1).unwrap();
    let b = IntervalBox::parse("0,1").unwrap();
    assert!(matches!(
        alpha_bb_underestimate(&cl, &b, -1.0, &[2.0]),
        Err(hessbound::SpectralError::PointOutsideBox)
    ));
}

#[test]
fn cost_growth_is_linear_for_eig_and_quadratic_for_hess() {
    let t = CostTable::default();
    for op in OpClass::ALL {
        let (h64, h128) = (t.cost(op, Column::Hess, 64), t.cost(op, Column::Hess, 128));
        if h64 > 0 {
            let r = h128 as f64 / h64 as f64;
            assert!((r - 4.0).abs() <= 0.4, "{} hess ratio {r}", op.name());
        }
        let (e64, e128) = (t.cost(op, Column::Eig, 64), t.cost(op, Column::Eig, 128));
        if e128 > e64 {
            let r = e128 as f64 / e64 as f64;
            assert!((r - 2.0).abs() <= 0.2, "{} eig ratio {r}", op.name());
        }
    }
}

fn small_corpus() -> Vec<FunctionCase> {
    bench::parse_corpus(include_str!("../data/demo3.txt")).unwrap()
}

#[test]
fn parallel_and_serial_runs_agree() {
    let cases = small_corpus();
    let run = |jobs| {
        let opts = BenchOptions {
            trials: 20,
            seed: 7,
            jobs: Some(jobs),
            ..Default::default()
        };
        bench::run_corpus(&cases, &opts).unwrap()
    };
    let (one, four) = (run(1), run(4));
    assert_eq!(one, four);
    let mut a = Vec::new();
    let mut b = Vec::new();
    bench::write_trials_csv(&one, &mut a).unwrap();
    bench::write_trials_csv(&four, &mut b).unwrap();
    assert_eq!(a, b);
}

#[test]
fn tallies_partition_feasible_trials() {
    let opts = BenchOptions {
        trials: 25,
        ..Default::default()
    };
    let run = bench::run_corpus(&small_corpus(), &opts).unwrap();
    for c in &run.cases {
        let t = &c.tally;
        assert_eq!(t.lo.iter().sum::<u32>(), t.feasible);
        assert_eq!(t.hi.iter().sum::<u32>(), t.feasible);
        assert_eq!(t.feasible + t.infeasible, 25);
        for r in c.records.iter().filter(|r| r.feasible()) {
            let b = r.bounds.as_ref().unwrap();
            assert!(within(b.hertz_rohn.lo, b.gershgorin.lo, b.gershgorin.hi));
            assert!(within(b.hertz_rohn.hi, b.gershgorin.lo, b.gershgorin.hi));
            assert!(r.domain.is_subset_of(&c.case.domain));
        }
    }
    for row in &run.aggregate.rows {
        let total: f64 = row.percent.iter().sum();
        assert!((total - 100.0).abs() < 1e-9, "{}: {total}", row.label);
    }
}

#[test]
fn zero_trials_give_empty_records() {
    let opts = BenchOptions {
        trials: 0,
        ..Default::default()
    };
    let (records, tally) = bench::run_case(&small_corpus()[0], &opts).unwrap();
    assert!(records.is_empty());
    assert_eq!((tally.feasible, tally.infeasible), (0, 0));
    assert_eq!(tally.lo, [0; 4]);
}

#[test]
fn pinned_box_reproduces_the_printed_column() {
    let case = FunctionCase::new(
        "illustrative-2",
        IntervalBox::parse("1,2;0.5,2;0.5,2").unwrap(),
        "x1/(x1 + 0.2*x2^2) - 2*x2/(x2 + 0.3*x3^3)",
    );
    let mut opts = BenchOptions::default();
    opts.pinned.insert(
        case.name.clone(),
        vec![IntervalBox::parse("1.5,1.6;0.6,1.1;1.0,1.6").unwrap()],
    );
    let (records, _) = bench::run_case(&case, &opts).unwrap();
    assert_eq!(records.len(), 1);
    let b = records[0].bounds.as_ref().unwrap();
    let near = |x: f64, want: f64| (x - want).abs() <= 5e-4;
    assert!(near(b.arithmetic.lo, -45.014) && near(b.arithmetic.hi, 17.624));
    assert!(near(b.gershgorin.lo, -40.725) && near(b.gershgorin.hi, 19.507));
    assert!(near(b.hertz_rohn.lo, -33.691) && near(b.hertz_rohn.hi, 18.897));
    assert_eq!(
        (records[0].class_lo, records[0].class_hi),
        (Some(ClassLabel::Minus), Some(ClassLabel::PlusPlus))
    );
    let again = spectral::bound_all(
        &case.codelist().unwrap(),
        &records[0].domain,
        &Default::default(),
    );
    assert_eq!(again.unwrap(), *b);
}
