//! Static operation counts for the eigenvalue arithmetic and for the
//! interval-Hessian-plus-Gershgorin pipeline.
//!
//! Counts are table lookups per codelist line and depend only on the line
//! kinds and the dimension, never on the box. One operation is one real
//! addition, multiplication or comparison, or one elementary function call.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::codelist::{Codelist, OpClass, OpKind};
use crate::error::CostTableError;

/// Complexity class of the Hertz–Rohn method; it has no per-line table.
pub const HERTZ_ROHN_COMPLEXITY: &str = "O(2^n n^3)";

const DEFAULT_CONFIG: &str = include_str!("../data/cost_table.txt");
const LITERAL_CONFIG: &str = include_str!("../data/cost_table_literal.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Column {
    Val,
    Grad,
    Eig,
    Hess,
}

impl Column {
    pub const ALL: [Column; 4] = [Column::Val, Column::Grad, Column::Eig, Column::Hess];

    pub fn name(self) -> &'static str {
        match self {
            Column::Val => "val",
            Column::Grad => "grad",
            Column::Eig => "eig",
            Column::Hess => "hess",
        }
    }

    pub fn from_name(s: &str) -> Option<Column> {
        Column::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// `c0 + c1·m + c2·m(m+1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CostPoly {
    pub c0: i64,
    pub c1: i64,
    pub c2: i64,
}

impl CostPoly {
    pub const fn new(c0: i64, c1: i64, c2: i64) -> Self {
        CostPoly { c0, c1, c2 }
    }

    pub fn eval(&self, m: i64) -> i64 {
        self.c0 + self.c1 * m + self.c2 * m * (m + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Cell {
    poly: CostPoly,
    calibrated: bool,
}

/// Cost coefficients per operation kind and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostTable {
    offset: i64,
    cells: BTreeMap<(OpClass, Column), Cell>,
    gershgorin: CostPoly,
}

/// The four counts of one line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LineCost {
    pub val: u64,
    pub grad: u64,
    pub eig: u64,
    pub hess: u64,
}

impl CostTable {
    /// Parses the plain-text config format of `data/cost_table.txt`.
    pub fn parse(text: &str) -> Result<Self, CostTableError> {
        let mut offset = 0;
        let mut cells = BTreeMap::new();
        let mut gershgorin = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let (body, comment) = match raw.split_once('#') {
                Some((b, c)) => (b, c),
                None => (raw, ""),
            };
            let words: Vec<&str> = body.split_whitespace().collect();
            if words.is_empty() {
                continue;
            }
            let err = |msg: String| CostTableError::Syntax { line: line_no, msg };
            let ints = |ws: &[&str]| -> Result<Vec<i64>, CostTableError> {
                ws.iter()
                    .map(|w| {
                        w.parse::<i64>()
                            .map_err(|_| err(format!("`{w}` is not an integer")))
                    })
                    .collect()
            };
            match words[0] {
                "offset" => {
                    let v = ints(&words[1..])?;
                    if v.len() != 1 {
                        return Err(err("`offset` takes one integer".into()));
                    }
                    offset = v[0];
                }
                "gershgorin" => {
                    let v = ints(&words[1..])?;
                    if v.len() != 3 {
                        return Err(err("`gershgorin` takes three coefficients".into()));
                    }
                    gershgorin = Some(CostPoly::new(v[0], v[1], v[2]));
                }
                name => {
                    let op = OpClass::from_name(name)
                        .ok_or_else(|| err(format!("unknown operation `{name}`")))?;
                    let col = words
                        .get(1)
                        .and_then(|c| Column::from_name(c))
                        .ok_or_else(|| err("expected a column: val, grad, eig or hess".into()))?;
                    let v = ints(&words[2..])?;
                    if v.len() != 3 {
                        return Err(err("expected three coefficients c0 c1 c2".into()));
                    }
                    let cell = Cell {
                        poly: CostPoly::new(v[0], v[1], v[2]),
                        calibrated: comment.contains("calibrated"),
                    };
                    if cells.insert((op, col), cell).is_some() {
                        return Err(err(format!("duplicate row for {name} {}", col.name())));
                    }
                }
            }
        }
        for op in OpClass::ALL {
            for col in Column::ALL {
                if !cells.contains_key(&(op, col)) {
                    return Err(CostTableError::Missing {
                        op: op.name(),
                        column: col.name(),
                    });
                }
            }
        }
        let gershgorin = gershgorin.ok_or(CostTableError::Missing {
            op: "gershgorin",
            column: "overhead",
        })?;
        Ok(CostTable {
            offset,
            cells,
            gershgorin,
        })
    }

    /// The literal-coefficient table with the index shift removed; kept for
    /// sensitivity comparisons.
    pub fn literal() -> Self {
        Self::parse(LITERAL_CONFIG).expect("shipped literal cost table parses")
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn poly(&self, op: OpClass, col: Column) -> CostPoly {
        self.cells[&(op, col)].poly
    }

    pub fn is_calibrated(&self, op: OpClass, col: Column) -> bool {
        self.cells[&(op, col)].calibrated
    }

    /// Cost of one cell at dimension `n`, clamped at zero.
    pub fn cost(&self, op: OpClass, col: Column, n: usize) -> u64 {
        let m = (n as i64 + self.offset).max(0);
        self.poly(op, col).eval(m).max(0) as u64
    }

    pub fn line_cost(&self, op: OpClass, n: usize) -> LineCost {
        LineCost {
            val: self.cost(op, Column::Val, n),
            grad: self.cost(op, Column::Grad, n),
            eig: self.cost(op, Column::Eig, n),
            hess: self.cost(op, Column::Hess, n),
        }
    }

    /// Cost of the Gershgorin step on an assembled `n × n` interval Hessian.
    pub fn gershgorin_overhead(&self, n: usize) -> u64 {
        self.gershgorin.eval(n as i64).max(0) as u64
    }

    /// Serializes back to the config format; `parse` round-trips it.
    pub fn to_config(&self) -> String {
        let mut out = format!("offset {}\n", self.offset);
        for ((op, col), cell) in &self.cells {
            let _ = write!(
                out,
                "{:<10} {:<4} {} {} {}",
                op.name(),
                col.name(),
                cell.poly.c0,
                cell.poly.c1,
                cell.poly.c2
            );
            out.push_str(if cell.calibrated {
                "   # calibrated\n"
            } else {
                "\n"
            });
        }
        let g = self.gershgorin;
        let _ = writeln!(out, "gershgorin {} {} {}", g.c0, g.c1, g.c2);
        out
    }
}

impl Default for CostTable {
    fn default() -> Self {
        default_cost_table()
    }
}

/// The shipped table: reproduces the per-line counts of the worked example.
pub fn default_cost_table() -> CostTable {
    CostTable::parse(DEFAULT_CONFIG).expect("shipped cost table parses")
}

#[derive(Clone, Debug, PartialEq)]
pub struct LineReport {
    /// Zero-based codelist line index.
    pub index: usize,
    pub op: OpKind,
    pub cost: LineCost,
}

/// Operation counts for one codelist at one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct CostReport {
    pub n: usize,
    /// Operation lines only; variable lines cost nothing.
    pub per_line: Vec<LineReport>,
    /// `N_A`: values, gradients and eigenvalue enclosures.
    pub n_a: u64,
    /// `N_G`: values, gradients, interval Hessians and the Gershgorin step.
    pub n_g: u64,
    /// `ΔN_A`: eigenvalue enclosures alone.
    pub delta_n_a: u64,
    /// `N(φ)`: one operation per line for a point evaluation.
    pub n_phi: u64,
    pub gershgorin_overhead: u64,
}

impl CostReport {
    pub fn total(&self) -> LineCost {
        self.per_line
            .iter()
            .fold(LineCost::default(), |acc, l| LineCost {
                val: acc.val + l.cost.val,
                grad: acc.grad + l.cost.grad,
                eig: acc.eig + l.cost.eig,
                hess: acc.hess + l.cost.hess,
            })
    }

    /// `N_A / N_G`.
    pub fn ratio_a_g(&self) -> f64 {
        self.n_a as f64 / self.n_g as f64
    }

    /// `ΔN_A / N_G`.
    pub fn ratio_delta_g(&self) -> f64 {
        self.delta_n_a as f64 / self.n_g as f64
    }
}

impl fmt::Display for CostReport {
    /// Per-line table followed by the totals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>4}  {:<10} {:>8} {:>8} {:>8} {:>8}",
            "k", "op", "val", "grad", "eig", "hess"
        )?;
        for l in &self.per_line {
            writeln!(
                f,
                "{:>4}  {:<10} {:>8} {:>8} {:>8} {:>8}",
                l.index + 1,
                l.op.name(),
                l.cost.val,
                l.cost.grad,
                l.cost.eig,
                l.cost.hess
            )?;
        }
        let t = self.total();
        writeln!(
            f,
            "{:>4}  {:<10} {:>8} {:>8} {:>8} {:>8}",
            "sum", "", t.val, t.grad, t.eig, t.hess
        )?;
        writeln!(
            f,
            "N_A={} N_G={} dNA={}",
            self.n_a, self.n_g, self.delta_n_a
        )?;
        write!(
            f,
            "N_A/N_G={:.2}% dNA/N_G={:.2}%",
            100.0 * self.ratio_a_g(),
            100.0 * self.ratio_delta_g()
        )
    }
}

/// Counts operations of `cl` at dimension `n` under `table`.
pub fn count(cl: &Codelist, n: usize, table: &CostTable) -> CostReport {
    let per_line: Vec<LineReport> = cl
        .lines()
        .iter()
        .enumerate()
        .filter(|(_, l)| !matches!(l.op, OpKind::Var(_)))
        .map(|(index, l)| LineReport {
            index,
            op: l.op,
            cost: table.line_cost(l.op.class(), n),
        })
        .collect();
    let mut report = CostReport {
        n,
        per_line,
        n_a: 0,
        n_g: 0,
        delta_n_a: 0,
        n_phi: cl.len() as u64,
        gershgorin_overhead: table.gershgorin_overhead(n),
    };
    let t = report.total();
    report.n_a = t.val + t.grad + t.eig;
    report.delta_n_a = t.eig;
    report.n_g = t.val + t.grad + t.hess + report.gershgorin_overhead;
    report
}

/// `N_A ≤ N_G`.
pub fn complexity_predicate(report: &CostReport) -> bool {
    report.n_a <= report.n_g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codelist::parse;

    #[test]
    fn worked_example_per_line_counts() {
        let t = default_cost_table();
        let expect = [
            (OpClass::Square, [5, 18, 19, 60]),
            (OpClass::Cube, [2, 23, 29, 86]),
            (OpClass::MulByConst, [2, 4, 2, 6]),
            (OpClass::Add, [2, 4, 2, 6]),
            (OpClass::Exp, [2, 16, 17, 54]),
        ];
        for (op, [v, g, e, h]) in expect {
            assert_eq!(
                t.line_cost(op, 3),
                LineCost {
                    val: v,
                    grad: g,
                    eig: e,
                    hess: h
                },
                "{op:?}"
            );
        }
        assert_eq!(t.line_cost(OpClass::Var, 7), LineCost::default());
    }

    #[test]
    fn worked_example_totals() {
        let cl = parse("exp(x1 - 2*x2^2 + 3*x3^3)", 3).unwrap();
        let r = count(&cl, 3, &default_cost_table());
        assert_eq!(r.per_line.len(), 7);
        assert_eq!(r.n_a, 163);
        assert_eq!(r.delta_n_a, 73);
        assert_eq!(r.total().val, 17);
        assert_eq!(r.total().grad, 73);
        assert_eq!(r.total().hess, 224);
        assert_eq!(r.gershgorin_overhead, 12);
        assert_eq!(r.n_g, 326);
        assert!(complexity_predicate(&r));
    }

    #[test]
    fn variable_only_costs_nothing() {
        let cl = parse("x1", 1).unwrap();
        for n in [1, 3, 10] {
            let r = count(&cl, n, &default_cost_table());
            assert_eq!((r.n_a, r.delta_n_a), (0, 0));
            assert_eq!(r.n_g, r.gershgorin_overhead);
            assert!(complexity_predicate(&r));
        }
    }

    #[test]
    fn literal_table_drops_the_shift() {
        let t = CostTable::literal();
        assert_eq!(t.cost(OpClass::Mul, Column::Hess, 3), 228);
        assert_eq!(
            default_cost_table().cost(OpClass::Mul, Column::Hess, 3),
            114
        );
        assert_eq!(t.gershgorin_overhead(3), 12);
    }

    #[test]
    fn eig_never_exceeds_hess() {
        for t in [default_cost_table(), CostTable::literal()] {
            for op in OpClass::ALL {
                for n in 2..=50 {
                    assert!(
                        t.cost(op, Column::Eig, n) <= t.cost(op, Column::Hess, n),
                        "{op:?} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn config_round_trips() {
        let t = default_cost_table();
        let again = CostTable::parse(&t.to_config()).unwrap();
        assert_eq!(t, again);
        assert!(t.is_calibrated(OpClass::Exp, Column::Grad));
        assert!(!t.is_calibrated(OpClass::Exp, Column::Hess));
    }

    #[test]
    fn config_errors() {
        assert!(matches!(
            CostTable::parse("offset x"),
            Err(CostTableError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            CostTable::parse("sin val 1 2 3"),
            Err(CostTableError::Syntax { .. })
        ));
        assert!(matches!(
            CostTable::parse("var val 0 0 0\n"),
            Err(CostTableError::Missing { .. })
        ));
        let dup = format!("{DEFAULT_CONFIG}\nvar val 0 0 0\n");
        assert!(matches!(
            CostTable::parse(&dup),
            Err(CostTableError::Syntax { .. })
        ));
    }
}
