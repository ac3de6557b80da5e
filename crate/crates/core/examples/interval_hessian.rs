//! Propagate value, gradient, interval Hessian and eigenvalue enclosure
//! through the extended codelist, line by line.

use hessbound::{parse, propagate, Interval, IntervalBox, Mode};

fn show(x: Interval) -> String {
    format!("[{:>8.4}, {:>8.4}]", x.lo(), x.hi())
}

fn main() {
    let f = parse("exp(x1 - 2*x2^2 + 3*x3^3)", 3).unwrap();
    let b = IntervalBox::parse("-0.3,0.2;-0.1,0.6;-0.4,0.5").unwrap();
    let t = propagate(&f, &b, Mode::Both).unwrap();

    for (text, line) in f.dump().lines().zip(t.lines()) {
        println!(
            "{text:<18} value {}  eig {}",
            show(line.val),
            show(line.eig.unwrap())
        );
    }

    let h = t.hessian().unwrap();
    println!(
        "\ngradient  {}",
        t.gradient()
            .iter()
            .map(|g| show(*g))
            .collect::<Vec<_>>()
            .join(" ")
    );
    println!("Hessian");
    for i in 0..h.dim() {
        let row: Vec<String> = (0..h.dim()).map(|j| show(h.get(i, j))).collect();
        println!("          {}", row.join(" "));
    }
}
