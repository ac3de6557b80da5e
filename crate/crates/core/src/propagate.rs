//! Forward propagation of interval values, gradients and second-order data
//! through a codelist.
//!
//! Each line carries `[y_k]`, `[y'_k]` and, depending on [`Mode`], either the
//! interval Hessian `[y''_k]`, the eigenvalue enclosure `[λ_k]`, or both. The
//! eigenvalue path replaces every outer product `[a][a]ᵀ` by
//! [`lambda_aat`] and every symmetrized pair `[a][b]ᵀ + [b][a]ᵀ` by
//! [`lambda_abba`], so it never forms an `n × n` matrix.

use crate::codelist::{Codelist, OpKind};
use crate::error::{DomainError, EvalError};
use crate::interval::{
    lambda_aat, lambda_abba, Interval, IntervalBox, IntervalMatrix, IntervalVector,
};

/// Which second-order quantity to propagate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Hessian,
    Eigen,
    Both,
}

impl Mode {
    fn hessian(self) -> bool {
        matches!(self, Mode::Hessian | Mode::Both)
    }

    fn eigen(self) -> bool {
        matches!(self, Mode::Eigen | Mode::Both)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PropagateOptions {
    /// Relative outward inflation applied to every line's results.
    pub inflate: Option<f64>,
}

/// Data of a single line.
#[derive(Clone, Debug, PartialEq)]
pub struct LineTrace {
    pub val: Interval,
    pub grad: IntervalVector,
    pub hess: Option<IntervalMatrix>,
    pub eig: Option<Interval>,
}

/// All lines of a propagated codelist.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalTrace {
    mode: Mode,
    lines: Vec<LineTrace>,
    result: usize,
}

impl EvalTrace {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn lines(&self) -> &[LineTrace] {
        &self.lines
    }

    pub fn result_line(&self) -> &LineTrace {
        &self.lines[self.result]
    }

    pub fn value(&self) -> Interval {
        self.result_line().val
    }

    pub fn gradient(&self) -> &IntervalVector {
        &self.result_line().grad
    }

    /// The interval Hessian; `None` in [`Mode::Eigen`].
    pub fn hessian(&self) -> Option<&IntervalMatrix> {
        self.result_line().hess.as_ref()
    }

    /// The eigenvalue enclosure `[λ_A]`; `None` in [`Mode::Hessian`].
    pub fn eigen(&self) -> Option<Interval> {
        self.result_line().eig
    }
}

/// Propagates `cl` over `domain` with default options.
pub fn propagate(cl: &Codelist, domain: &IntervalBox, mode: Mode) -> Result<EvalTrace, EvalError> {
    propagate_with(cl, domain, mode, &PropagateOptions::default())
}

pub fn propagate_with(
    cl: &Codelist,
    domain: &IntervalBox,
    mode: Mode,
    opts: &PropagateOptions,
) -> Result<EvalTrace, EvalError> {
    let n = cl.n_vars();
    if domain.dim() != n {
        return Err(EvalError::DimensionMismatch {
            expected: n,
            got: domain.dim(),
        });
    }
    let mut lines: Vec<LineTrace> = Vec::with_capacity(cl.len());
    for (k, line) in cl.lines().iter().enumerate() {
        let op = line.op;
        let dom = |source: DomainError| EvalError::Domain {
            line: k,
            op: op.name(),
            source,
        };
        let mut t = match op {
            OpKind::Var(v) => LineTrace {
                val: domain.dims()[v],
                grad: IntervalVector::unit(n, v),
                hess: mode.hessian().then(|| IntervalMatrix::zeros(n)),
                eig: mode.eigen().then_some(Interval::ZERO),
            },
            OpKind::AddConst(c) => {
                let a = &lines[line.a()];
                LineTrace {
                    val: a.val.add_const(c),
                    grad: a.grad.clone(),
                    hess: a.hess.clone(),
                    eig: a.eig,
                }
            }
            OpKind::MulByConst(c) => {
                let a = &lines[line.a()];
                LineTrace {
                    val: a.val.mul_by_const(c),
                    grad: a.grad.mul_by_const(c),
                    hess: a.hess.as_ref().map(|h| h.mul_by_const(c)),
                    eig: a.eig.map(|l| l.mul_by_const(c)),
                }
            }
            OpKind::Add => {
                let (a, b) = (&lines[line.a()], &lines[line.b()]);
                LineTrace {
                    val: a.val + b.val,
                    grad: a.grad.add(&b.grad),
                    hess: both(&a.hess, &b.hess).map(|(ha, hb)| ha.add(hb)),
                    eig: both(&a.eig, &b.eig).map(|(la, lb)| *la + *lb),
                }
            }
            OpKind::Mul => {
                let (a, b) = (&lines[line.a()], &lines[line.b()]);
                let hess = both(&a.hess, &b.hess).map(|(ha, hb)| {
                    hb.scale(a.val)
                        .add(&ha.scale(b.val))
                        .add(&IntervalMatrix::outer_sym_pair(&a.grad, &b.grad))
                });
                let eig = match both(&a.eig, &b.eig) {
                    Some((la, lb)) => {
                        let pair = lambda_abba(&a.grad, &b.grad)
                            .expect("gradients share the codelist dimension");
                        Some(a.val * *lb + b.val * *la + pair)
                    }
                    None => None,
                };
                LineTrace {
                    val: a.val * b.val,
                    grad: b.grad.scale(a.val).add(&a.grad.scale(b.val)),
                    hess,
                    eig,
                }
            }
            _ => {
                let a = &lines[line.a()];
                unary(op, a, dom)?
            }
        };
        if let Some(eps) = opts.inflate {
            t = inflate(t, eps);
        }
        let finite = t.val.is_finite()
            && t.grad.is_finite()
            && t.hess.as_ref().is_none_or(IntervalMatrix::is_finite)
            && t.eig.is_none_or(|l| l.is_finite());
        if !finite {
            return Err(EvalError::Overflow {
                line: k,
                op: op.name(),
            });
        }
        lines.push(t);
    }
    Ok(EvalTrace {
        mode,
        lines,
        result: cl.result(),
    })
}

fn both<'a, T>(a: &'a Option<T>, b: &'a Option<T>) -> Option<(&'a T, &'a T)> {
    a.as_ref().zip(b.as_ref())
}

fn inflate(t: LineTrace, eps: f64) -> LineTrace {
    LineTrace {
        val: t.val.inflate(eps),
        grad: t.grad.inflate(eps),
        hess: t.hess.map(|h| h.inflate(eps)),
        eig: t.eig.map(|l| l.inflate(eps)),
    }
}

/// Rules for the nonlinear unary operations. `a` is the argument line `j`;
/// `yk` is the new value.
fn unary(
    op: OpKind,
    a: &LineTrace,
    dom: impl Fn(DomainError) -> EvalError,
) -> Result<LineTrace, EvalError> {
    let yj = a.val;
    let g = &a.grad;
    let outer = || IntervalMatrix::outer(g);
    let laat = || lambda_aat(g);
    let t = match op {
        OpKind::OneOver => {
            let yk = yj.one_over().map_err(&dom)?;
            let yk2 = yk.square();
            LineTrace {
                val: yk,
                grad: g.scale(-yk2),
                hess: a.hess.as_ref().map(|h| {
                    outer()
                        .scale(yk.mul_by_const(2.0))
                        .add(&h.mul_by_const(-1.0))
                        .scale(yk2)
                }),
                eig: a
                    .eig
                    .map(|l| yk2 * (yk.mul_by_const(2.0) * laat() + l.mul_by_const(-1.0))),
            }
        }
        OpKind::Square => LineTrace {
            val: yj.square(),
            grad: g.scale(yj.mul_by_const(2.0)),
            hess: a
                .hess
                .as_ref()
                .map(|h| outer().add(&h.scale(yj)).mul_by_const(2.0)),
            eig: a.eig.map(|l| (laat() + yj * l).mul_by_const(2.0)),
        },
        OpKind::Cube => {
            let s = yj.mul_by_const(3.0);
            LineTrace {
                val: yj.cube(),
                grad: g.scale(yj.square().mul_by_const(3.0)),
                hess: a
                    .hess
                    .as_ref()
                    .map(|h| outer().mul_by_const(2.0).add(&h.scale(yj)).scale(s)),
                eig: a.eig.map(|l| s * (laat().mul_by_const(2.0) + yj * l)),
            }
        }
        OpKind::PowNat(m) => {
            let mf = f64::from(m);
            let s = yj.pow_nat(m - 2).mul_by_const(mf);
            LineTrace {
                val: yj.pow_nat(m),
                grad: g.scale(yj.pow_nat(m - 1).mul_by_const(mf)),
                hess: a
                    .hess
                    .as_ref()
                    .map(|h| outer().mul_by_const(mf - 1.0).add(&h.scale(yj)).scale(s)),
                eig: a.eig.map(|l| s * (laat().mul_by_const(mf - 1.0) + yj * l)),
            }
        }
        OpKind::Sqrt => {
            let yk = yj.sqrt().map_err(&dom)?;
            let s = yk.mul_by_const(2.0).one_over().map_err(&dom)?;
            let r = yj.mul_by_const(-2.0).one_over().map_err(&dom)?;
            LineTrace {
                val: yk,
                grad: g.scale(s),
                hess: a.hess.as_ref().map(|h| h.add(&outer().scale(r)).scale(s)),
                eig: a.eig.map(|l| s * (l + r * laat())),
            }
        }
        OpKind::Exp => {
            let yk = yj.exp();
            LineTrace {
                val: yk,
                grad: g.scale(yk),
                hess: a.hess.as_ref().map(|h| outer().add(h).scale(yk)),
                eig: a.eig.map(|l| yk * (laat() + l)),
            }
        }
        OpKind::Ln => {
            let yk = yj.ln().map_err(&dom)?;
            let r = yj.one_over().map_err(&dom)?;
            let nr = r.mul_by_const(-1.0);
            LineTrace {
                val: yk,
                grad: g.scale(r),
                hess: a.hess.as_ref().map(|h| h.add(&outer().scale(nr)).scale(r)),
                eig: a.eig.map(|l| r * (l + nr * laat())),
            }
        }
        OpKind::Var(_)
        | OpKind::AddConst(_)
        | OpKind::MulByConst(_)
        | OpKind::Add
        | OpKind::Mul => {
            unreachable!("linear and binary rules are handled by the caller")
        }
    };
    Ok(t)
}

/// Interval Hessian on the degenerate box `[x, x]`; its midpoints are the
/// Hessian at `x` up to rounding.
pub fn hessian_at_point(cl: &Codelist, x: &[f64]) -> Result<IntervalMatrix, EvalError> {
    if x.len() != cl.n_vars() {
        return Err(EvalError::DimensionMismatch {
            expected: cl.n_vars(),
            got: x.len(),
        });
    }
    let point = IntervalBox::point(x).map_err(|_| EvalError::NonFinitePoint)?;
    let trace = propagate(cl, &point, Mode::Hessian)?;
    Ok(trace
        .hessian()
        .cloned()
        .expect("Hessian mode fills the Hessian"))
}
