//! Compare the guaranteed bounds with an inner estimate from point Hessians.

use hessbound::spectral::{bound_all, sampled_oracle};
use hessbound::{parse, IntervalBox};

fn main() {
    let f = parse("sqrt(1 + x1^2 + x2^2) * exp(0.3*x1*x2)", 2).unwrap();
    let b = IntervalBox::parse("-1,1;-0.5,1.5").unwrap();
    let all = bound_all(&f, &b, &Default::default()).unwrap();
    let inner = sampled_oracle(&f, &b, 2000).unwrap();
    println!("sampled  [{:.4}, {:.4}]", inner.lo, inner.hi);
    for m in [all.arithmetic, all.gershgorin, all.hertz_rohn] {
        let slack = (inner.lo - m.lo) + (m.hi - inner.hi);
        println!(
            "{:>7}  [{:.4}, {:.4}]  overestimate {slack:.4}",
            m.method.tag(),
            m.lo,
            m.hi
        );
    }
}
