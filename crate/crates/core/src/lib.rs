//! Guaranteed bounds on the eigenvalues of Hessian matrices over boxes.
//!
//! A scalar function is parsed into a [`Codelist`] and propagated over an
//! [`IntervalBox`] with interval arithmetic. From the result, three methods
//! bound every eigenvalue of every Hessian on the box:
//!
//! * eigenvalue arithmetic, which propagates an eigenvalue enclosure per line
//!   ([`propagate::Mode::Eigen`]);
//! * interval Gershgorin on the interval Hessian ([`spectral::gershgorin`]);
//! * Hertz–Rohn vertex matrices on the interval Hessian
//!   ([`spectral::hertz_rohn`]), tight for the interval matrix but
//!   exponential in `n`.
//!
//! ```
//! use hessbound::{parse, IntervalBox, spectral};
//!
//! let f = parse("exp(x1 - 2*x2^2 + 3*x3^3)", 3).unwrap();
//! let b = IntervalBox::parse("-0.3,0.2;-0.1,0.6;-0.4,0.5").unwrap();
//! let all = spectral::bound_all(&f, &b, &Default::default()).unwrap();
//! assert!(all.hertz_rohn.is_subset_of(&all.gershgorin));
//! ```
//!
//! [`costmodel`] counts the operations each pipeline needs and [`bench`]
//! compares the methods on random boxes.

pub mod bench;
pub mod codelist;
pub mod costmodel;
pub mod error;
pub mod interval;
pub mod propagate;
pub mod spectral;

pub use codelist::{parse, Codelist, Line, OpClass, OpKind};
pub use costmodel::{count, default_cost_table, CostReport, CostTable};
pub use error::{
    BenchError, CostTableError, DomainError, EvalError, IntervalError, ParseError, SpectralError,
};
pub use interval::{Interval, IntervalBox, IntervalMatrix, IntervalVector};
pub use propagate::{hessian_at_point, propagate, EvalTrace, Mode};
pub use spectral::{Method, SpectralBounds};
