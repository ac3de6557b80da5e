//! Test oracles that share no code with the library: a random expression
//! generator, a plain `f64` evaluator, second-order forward AD on dense
//! jets, dense symmetric eigenvalues via nalgebra and a brute-force vertex
//! search for interval matrices.
#![allow(dead_code)]

use std::fmt;

use hessbound::{parse, Codelist, Interval, IntervalBox, IntervalMatrix};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

#[derive(Clone, Debug)]
pub enum Expr {
    Var(usize),
    Const(f64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// The denominator is kept away from zero by construction.
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
    Sqrt(Box<Expr>),
    Ln(Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Const(c) if *c < 0.0 => write!(f, "({c:?})"),
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, k) => write!(f, "({a})^{k}"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Ln(a) => write!(f, "ln({a})"),
        }
    }
}

fn bx(e: Expr) -> Box<Expr> {
    Box::new(e)
}

/// `c + e²` with `c ≥ 0.5`; positive under any interval evaluation.
fn positive<R: Rng>(rng: &mut R, n: usize, depth: u32) -> Expr {
    let c = rng.gen_range(0.5..2.0);
    Expr::Add(
        bx(Expr::Const(c)),
        bx(Expr::Pow(bx(gen_expr(rng, n, depth)), 2)),
    )
}

/// Random expression over `x1..xn` that is defined everywhere, including
/// under interval evaluation, and stays moderate on boxes inside `[-2, 2]ⁿ`.
pub fn gen_expr<R: Rng>(rng: &mut R, n: usize, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.8) {
            Expr::Var(rng.gen_range(0..n))
        } else {
            Expr::Const((rng.gen_range(-3.0..3.0f64) * 4.0).round() / 4.0)
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..11) {
        0 | 1 => Expr::Add(bx(gen_expr(rng, n, d)), bx(gen_expr(rng, n, d))),
        2 => Expr::Sub(bx(gen_expr(rng, n, d)), bx(gen_expr(rng, n, d))),
        3 | 4 => Expr::Mul(bx(gen_expr(rng, n, d)), bx(gen_expr(rng, n, d))),
        5 => Expr::Div(
            bx(gen_expr(rng, n, d)),
            bx(positive(rng, n, d.saturating_sub(1))),
        ),
        6 => Expr::Pow(bx(gen_expr(rng, n, d)), rng.gen_range(2..=4)),
        7 => {
            let s = rng.gen_range(0.1..0.5);
            Expr::Exp(bx(Expr::Mul(
                bx(Expr::Const(s)),
                bx(gen_expr(rng, n, d.min(1))),
            )))
        }
        8 => Expr::Sqrt(bx(positive(rng, n, d.saturating_sub(1)))),
        9 => Expr::Ln(bx(positive(rng, n, d.saturating_sub(1)))),
        _ => Expr::Neg(bx(gen_expr(rng, n, d))),
    }
}

/// A random expression that parses to a non-constant codelist.
pub fn gen_function<R: Rng>(rng: &mut R, n: usize, depth: u32) -> (Expr, Codelist) {
    loop {
        let e = gen_expr(rng, n, depth);
        if let Ok(cl) = parse(&e.to_string(), n) {
            return (e, cl);
        }
    }
}

impl Expr {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Var(i) => x[*i],
            Expr::Const(c) => *c,
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, k) => a.eval(x).powi(*k as i32),
            Expr::Exp(a) => a.eval(x).exp(),
            Expr::Sqrt(a) => a.eval(x).sqrt(),
            Expr::Ln(a) => a.eval(x).ln(),
        }
    }

    pub fn jet(&self, x: &[f64]) -> Jet {
        let n = x.len();
        match self {
            Expr::Var(i) => Jet::var(n, *i, x[*i]),
            Expr::Const(c) => Jet::constant(n, *c),
            Expr::Neg(a) => a.jet(x).scale(-1.0),
            Expr::Add(a, b) => a.jet(x).add(&b.jet(x)),
            Expr::Sub(a, b) => a.jet(x).add(&b.jet(x).scale(-1.0)),
            Expr::Mul(a, b) => a.jet(x).mul(&b.jet(x)),
            Expr::Div(a, b) => {
                let v = b.jet(x);
                let r = v.v;
                a.jet(x)
                    .mul(&v.chain(1.0 / r, -1.0 / (r * r), 2.0 / (r * r * r)))
            }
            Expr::Pow(a, k) => {
                let j = a.jet(x);
                let (u, k) = (j.v, *k as i32);
                let kf = f64::from(k);
                j.chain(
                    u.powi(k),
                    kf * u.powi(k - 1),
                    kf * (kf - 1.0) * u.powi(k - 2),
                )
            }
            Expr::Exp(a) => {
                let j = a.jet(x);
                let e = j.v.exp();
                j.chain(e, e, e)
            }
            Expr::Sqrt(a) => {
                let j = a.jet(x);
                let s = j.v.sqrt();
                j.chain(s, 0.5 / s, -0.25 / (s * j.v))
            }
            Expr::Ln(a) => {
                let j = a.jet(x);
                let u = j.v;
                j.chain(u.ln(), 1.0 / u, -1.0 / (u * u))
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Const(_) => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) | Expr::Sqrt(a) | Expr::Ln(a) => {
                1 + a.size()
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }
}

/// Value, gradient and dense row-major Hessian.
#[derive(Clone, Debug)]
pub struct Jet {
    pub v: f64,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
}

impl Jet {
    pub fn constant(n: usize, c: f64) -> Jet {
        Jet {
            v: c,
            g: vec![0.0; n],
            h: vec![0.0; n * n],
        }
    }

    pub fn var(n: usize, i: usize, x: f64) -> Jet {
        let mut j = Jet::constant(n, x);
        j.g[i] = 1.0;
        j
    }

    fn n(&self) -> usize {
        self.g.len()
    }

    pub fn add(&self, o: &Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            g: self.g.iter().zip(&o.g).map(|(a, b)| a + b).collect(),
            h: self.h.iter().zip(&o.h).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            v: s * self.v,
            g: self.g.iter().map(|a| s * a).collect(),
            h: self.h.iter().map(|a| s * a).collect(),
        }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let n = self.n();
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] = self.v * o.h[i * n + j]
                    + o.v * self.h[i * n + j]
                    + self.g[i] * o.g[j]
                    + o.g[i] * self.g[j];
            }
        }
        Jet {
            v: self.v * o.v,
            g: (0..n).map(|i| self.v * o.g[i] + o.v * self.g[i]).collect(),
            h,
        }
    }

    /// `f(self)` given `f`, `f'` and `f''` at `self.v`.
    pub fn chain(&self, f0: f64, f1: f64, f2: f64) -> Jet {
        let n = self.n();
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] = f1 * self.h[i * n + j] + f2 * self.g[i] * self.g[j];
            }
        }
        Jet {
            v: f0,
            g: self.g.iter().map(|a| f1 * a).collect(),
            h,
        }
    }
}

/// Extreme eigenvalues of a symmetric row-major matrix.
pub fn eig_extremes(n: usize, m: &[f64]) -> (f64, f64) {
    let eig = SymmetricEigen::new(DMatrix::from_row_slice(n, n, m)).eigenvalues;
    (eig.min(), eig.max())
}

/// Extreme eigenvalues over every symmetric matrix whose upper-triangle
/// entries sit at an endpoint of the corresponding interval entry.
pub fn vertex_brute_force(h: &IntervalMatrix) -> (f64, f64) {
    let n = h.dim();
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut m = vec![0.0; n * n];
    for mask in 0u32..(1 << slots.len()) {
        for (s, &(i, j)) in slots.iter().enumerate() {
            let e = h.get(i, j);
            let v = if mask & (1 << s) == 0 { e.lo() } else { e.hi() };
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
        let (a, b) = eig_extremes(n, &m);
        lo = lo.min(a);
        hi = hi.max(b);
    }
    (lo, hi)
}

pub fn random_interval_matrix<R: Rng>(rng: &mut R, n: usize) -> IntervalMatrix {
    IntervalMatrix::from_upper(n, |_, _| {
        let lo = rng.gen_range(-5.0..5.0);
        let w = if rng.gen_bool(0.15) {
            0.0
        } else {
            rng.gen_range(0.0..3.0)
        };
        Interval::new(lo, lo + w).unwrap()
    })
}

/// A random sub-box of `[-r, r]ⁿ`.
pub fn random_box<R: Rng>(rng: &mut R, n: usize, r: f64) -> IntervalBox {
    let bounds: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let a = rng.gen_range(-r..r);
            let b = rng.gen_range(-r..r);
            (a.min(b), a.max(b))
        })
        .collect();
    IntervalBox::from_bounds(&bounds).unwrap()
}

/// A uniform point of `b`.
pub fn random_point<R: Rng>(rng: &mut R, b: &IntervalBox) -> Vec<f64> {
    b.dims()
        .iter()
        .map(|d| {
            if d.width() > 0.0 {
                rng.gen_range(d.lo()..=d.hi())
            } else {
                d.lo()
            }
        })
        .collect()
}

/// `x` lies in `[lo, hi]` up to a relative slack for rounding.
pub fn within(x: f64, lo: f64, hi: f64) -> bool {
    let slack = |b: f64| 1e-9 * (1.0 + b.abs());
    x >= lo - slack(lo) && x <= hi + slack(hi)
}

pub fn within_interval(x: f64, i: Interval) -> bool {
    within(x, i.lo(), i.hi())
}
