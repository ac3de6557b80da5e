//! Static operation counts and how the ratio N_A/N_G falls with dimension.

use hessbound::costmodel::HERTZ_ROHN_COMPLEXITY;
use hessbound::{count, default_cost_table, parse, CostTable};

fn main() {
    let table = default_cost_table();
    let f = parse("exp(x1 - 2*x2^2 + 3*x3^3)", 3).unwrap();
    println!("{}\n", count(&f, 3, &table));

    println!("sum of squares:");
    for n in [2, 4, 8, 16, 32, 64] {
        let text: Vec<String> = (1..=n).map(|i| format!("x{i}^2")).collect();
        let r = count(&parse(&text.join(" + "), n).unwrap(), n, &table);
        println!(
            "  n={n:<3} N_A={:<7} N_G={:<8} N_A/N_G={:.1}%",
            r.n_a,
            r.n_g,
            100.0 * r.ratio_a_g()
        );
    }

    let literal = CostTable::literal();
    println!(
        "\nliteral table, same function: N_G={}",
        count(&f, 3, &literal).n_g
    );
    println!("Hertz-Rohn: {HERTZ_ROHN_COMPLEXITY}");
}
