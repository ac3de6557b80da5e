//! Interval operations and the closed-form eigenvalue enclosures of the
//! rank-one and symmetrized rank-two outer products.

use hessbound::interval::{lambda_aat, lambda_abba};
use hessbound::{Interval, IntervalVector};

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

fn main() {
    let x = iv(-1.0, 2.0);
    println!("x        = {x}");
    println!("x * x    = {}", x * x);
    println!("x^2      = {}", x.square());
    println!("x^3      = {}", x.cube());
    println!("exp(x)   = {}", x.exp());
    println!("1/(x+2)  = {}", x.add_const(2.0).one_over().unwrap());
    println!("ln(x)    : {}", x.ln().unwrap_err());

    let a = IntervalVector::new(vec![iv(-1.0, 2.0), iv(0.5, 1.0)]);
    let b = IntervalVector::new(vec![iv(0.0, 1.0), iv(-3.0, -2.0)]);
    println!("eig(a aT)       in {}", lambda_aat(&a));
    println!("eig(a bT + b aT) in {}", lambda_abba(&a, &b).unwrap());
}
