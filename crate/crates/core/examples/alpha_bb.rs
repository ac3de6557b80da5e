//! Convex underestimator of a nonconvex function from a lower spectral bound.

use hessbound::spectral::{alpha_bb_underestimate, bound_all};
use hessbound::{parse, IntervalBox};

fn main() {
    let f = parse("x1^4 - 3*x1^2 + x1", 1).unwrap();
    let b = IntervalBox::parse("-2,2").unwrap();
    let bounds = bound_all(&f, &b, &Default::default()).unwrap();
    let lam = bounds.arithmetic.lo.max(bounds.gershgorin.lo);
    println!("lower curvature bound {lam:.3}");
    println!("{:>6} {:>10} {:>10}", "x", "f", "convex");
    for i in 0..=8 {
        let x = -2.0 + 0.5 * f64::from(i);
        let fx = f.eval_point(&[x]).unwrap();
        let u = alpha_bb_underestimate(&f, &b, lam, &[x]).unwrap();
        println!("{x:>6.2} {fx:>10.4} {u:>10.4}");
    }
}
