//! Parse an expression into a codelist, print it, evaluate it at a point.

use hessbound::parse;

fn main() {
    let f = parse("x1/(x1 + 0.2*x2^2) - 2*x2/(x2 + 0.3*x3^3)", 3).unwrap();
    print!("{}", f.dump());
    println!("{} lines, result in y{}", f.len(), f.result() + 1);
    println!(
        "f(1.5, 0.8, 1.2) = {}",
        f.eval_point(&[1.5, 0.8, 1.2]).unwrap()
    );

    // repeated subexpressions are merged on request
    let g = parse("exp(x1*x2) + exp(x1*x2)^2", 2).unwrap();
    println!("{} lines before dedup, {} after", g.len(), g.dedup().len());

    for bad in ["x1 +", "x4", "ln(x1) ^ 0.5"] {
        println!("{bad:>14}: {}", parse(bad, 3).unwrap_err());
    }
}
