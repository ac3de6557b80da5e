//! Hertz-Rohn vertex matrices for a symmetric interval matrix, next to the
//! Gershgorin bound of the same matrix.

use hessbound::spectral::{gershgorin, hertz_rohn_report, sign_column, vertex_pair};
use hessbound::{Interval, IntervalMatrix};

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

fn main() {
    let h = IntervalMatrix::from_rows(&[
        vec![iv(0.298, 1.777), iv(-4.265, 0.711), iv(0.0, 3.999)],
        vec![iv(-4.265, 0.711), iv(-7.109, 3.128), iv(-9.597, 1.599)],
        vec![iv(0.0, 3.999), iv(-9.597, 1.599), iv(-12.795, 24.991)],
    ])
    .unwrap();

    for k in 1..=4 {
        let p = vertex_pair(&h, k);
        assert_eq!(p.sign_column, sign_column(3, k));
        println!("k={k} signs {:?}", p.sign_column);
        for i in 0..3 {
            let l: Vec<String> = (0..3).map(|j| format!("{:>8.3}", p.l.get(i, j))).collect();
            let u: Vec<String> = (0..3).map(|j| format!("{:>8.3}", p.u.get(i, j))).collect();
            println!("  L {}    U {}", l.join(""), u.join(""));
        }
    }
    let r = hertz_rohn_report(&h, 16).unwrap();
    println!(
        "H = [{:.3}, {:.3}] from L({}) and U({}), {} matrices",
        r.bounds.lo, r.bounds.hi, r.argmin, r.argmax, r.vertex_matrices
    );
    let g = gershgorin(&h);
    println!("G = [{:.3}, {:.3}]", g.lo, g.hi);
}
