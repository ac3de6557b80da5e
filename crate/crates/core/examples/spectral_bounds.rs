//! All three spectral bounds for one function on one box.
//!
//! ```text
//! cargo run --example spectral_bounds
//! ```

use hessbound::spectral::{bound_all, BoundOptions};
use hessbound::{parse, IntervalBox};

fn main() {
    let f = parse("exp(x1 - 2*x2^2 + 3*x3^3)", 3).expect("valid expression");
    let b = IntervalBox::parse("-0.3,0.2;-0.1,0.6;-0.4,0.5").expect("valid box");
    let all = bound_all(&f, &b, &BoundOptions::default()).expect("defined on the box");

    println!("box {b}");
    for m in [&all.arithmetic, &all.gershgorin, &all.hertz_rohn] {
        println!(
            "{:>2}  [{:>10.5}, {:>10.5}]  width {:.3}",
            m.method.tag(),
            m.lo,
            m.hi,
            m.width()
        );
    }
}
