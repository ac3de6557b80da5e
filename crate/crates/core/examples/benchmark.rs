//! Run the benchmark on the small demo corpus and print the markdown report.

use hessbound::bench::{self, BenchOptions};

fn main() {
    let corpus = bench::parse_corpus(include_str!("../data/demo3.txt")).unwrap();
    let opts = BenchOptions {
        trials: 50,
        seed: 1,
        ..Default::default()
    };
    let run = bench::run_corpus(&corpus, &opts).unwrap();
    for c in &run.cases {
        println!(
            "{:<14} feasible {:>3}  infeasible {}",
            c.case.name, c.tally.feasible, c.tally.infeasible
        );
    }
    println!();
    print!("{}", bench::markdown_report(&run.aggregate));
}
