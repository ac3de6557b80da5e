//! Closed-interval arithmetic over `f64` endpoints.
//!
//! All endpoint arithmetic uses the default round-to-nearest mode. The
//! enclosures are therefore exact up to rounding; callers that need strictly
//! conservative results can widen every result with [`Interval::inflate`].
//!
//! Besides scalar intervals this module provides interval vectors, symmetric
//! interval matrices, hyperrectangles and the two outer-product spectrum
//! bounds [`lambda_aat`] and [`lambda_abba`] used by the eigenvalue
//! arithmetic.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use crate::error::{DomainError, IntervalError};

/// A closed interval `[lo, hi]` with finite endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Checked constructor: both endpoints finite and `lo <= hi`.
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::NonFinite { lo, hi });
        }
        if lo > hi {
            return Err(IntervalError::Inverted { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval `[x, x]`.
    ///
    /// # Panics
    /// If `x` is not finite.
    pub fn point(x: f64) -> Self {
        assert!(
            x.is_finite(),
            "point interval needs a finite value, got {x}"
        );
        Interval { lo: x, hi: x }
    }

    /// Builds an interval from endpoints that are already known to be ordered.
    /// Arithmetic results go through here; they may overflow to infinity,
    /// which [`Interval::is_finite`] reports.
    #[inline]
    pub(crate) fn raw(lo: f64, hi: f64) -> Self {
        debug_assert!(
            lo <= hi || lo.is_nan() || hi.is_nan(),
            "inverted interval [{lo}, {hi}]"
        );
        Interval { lo, hi }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Largest absolute value of any member.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn add_const(self, c: f64) -> Self {
        Interval::raw(self.lo + c, self.hi + c)
    }

    /// `c·[a]`; endpoints swap when `c < 0`.
    pub fn mul_by_const(self, c: f64) -> Self {
        if c >= 0.0 {
            Interval::raw(c * self.lo, c * self.hi)
        } else {
            Interval::raw(c * self.hi, c * self.lo)
        }
    }

    /// `1/[b]`, defined only when `0 ∉ [b]`.
    pub fn one_over(self) -> Result<Self, DomainError> {
        if self.contains_zero() {
            return Err(DomainError::ZeroInDivisor {
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(Interval::raw(1.0 / self.hi, 1.0 / self.lo))
    }

    /// Natural power `[a]^m`.
    pub fn pow_nat(self, m: u32) -> Self {
        match m {
            0 => Interval::ONE,
            1 => self,
            _ => {
                let e = m as i32;
                if self.lo > 0.0 || m % 2 == 1 {
                    Interval::raw(self.lo.powi(e), self.hi.powi(e))
                } else if self.hi < 0.0 {
                    Interval::raw(self.hi.powi(e), self.lo.powi(e))
                } else {
                    Interval::raw(0.0, (-self.lo).max(self.hi).powi(e))
                }
            }
        }
    }

    pub fn square(self) -> Self {
        self.pow_nat(2)
    }

    pub fn cube(self) -> Self {
        self.pow_nat(3)
    }

    pub fn sqrt(self) -> Result<Self, DomainError> {
        if self.lo < 0.0 {
            return Err(DomainError::NegativeSqrt {
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(Interval::raw(self.lo.sqrt(), self.hi.sqrt()))
    }

    pub fn exp(self) -> Self {
        Interval::raw(self.lo.exp(), self.hi.exp())
    }

    /// Natural logarithm; requires `lo > 0` so the result stays finite.
    pub fn ln(self) -> Result<Self, DomainError> {
        if self.lo <= 0.0 {
            return Err(DomainError::NonPositiveLn {
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(Interval::raw(self.lo.ln(), self.hi.ln()))
    }

    /// Widens both endpoints outward by the relative amount `eps`.
    pub fn inflate(self, eps: f64) -> Self {
        if eps <= 0.0 {
            return self;
        }
        Interval::raw(self.lo - eps * self.lo.abs(), self.hi + eps * self.hi.abs())
    }

    /// Smallest interval containing both operands.
    pub fn hull(self, other: Interval) -> Self {
        Interval::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }
}

impl Add for Interval {
    type Output = Interval;

    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval::raw(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl Mul for Interval {
    type Output = Interval;

    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::raw(lo, hi)
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval::raw(-self.hi, -self.lo)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "[{:.*}, {:.*}]", p, self.lo, p, self.hi),
            None => write!(f, "[{}, {}]", self.lo, self.hi),
        }
    }
}

/// Sum of `max(a̲ᵢ², āᵢ²)`, the largest possible squared norm of a member.
fn max_norm_sq(a: &IntervalVector) -> f64 {
    a.iter().map(|x| (x.lo * x.lo).max(x.hi * x.hi)).sum()
}

/// Spectrum bound for the rank-one matrices `a aᵀ`, `a ∈ [a]`.
///
/// The eigenvalues of `a aᵀ` are `0` (multiplicity `n − 1`) and `‖a‖²`, so the
/// lower endpoint is exactly zero.
pub fn lambda_aat(a: &IntervalVector) -> Interval {
    Interval::raw(0.0, max_norm_sq(a))
}

/// Spectrum bound for the symmetrized rank-two matrices `a bᵀ + b aᵀ`.
///
/// Their nonzero eigenvalues are `a·b ± ‖a‖‖b‖`; the bound is
/// `[−β, β] + Σ [aᵢ][bᵢ]` with `β² = (Σ max aᵢ²)(Σ max bᵢ²)`.
pub fn lambda_abba(a: &IntervalVector, b: &IntervalVector) -> Result<Interval, IntervalError> {
    if a.len() != b.len() {
        return Err(IntervalError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let beta = (max_norm_sq(a) * max_norm_sq(b)).sqrt();
    let dot = a
        .iter()
        .zip(b.iter())
        .fold(Interval::ZERO, |acc, (x, y)| acc + *x * *y);
    Ok(Interval::raw(-beta, beta) + dot)
}

/// Interval vector; used for interval gradients.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalVector(Vec<Interval>);

impl IntervalVector {
    pub fn new(entries: Vec<Interval>) -> Self {
        IntervalVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        IntervalVector(vec![Interval::ZERO; n])
    }

    /// The point vector `e⁽ᵏ⁾`.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = Interval::ONE;
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.0
    }

    pub fn add(&self, other: &IntervalVector) -> IntervalVector {
        debug_assert_eq!(self.len(), other.len());
        IntervalVector(self.0.iter().zip(&other.0).map(|(a, b)| *a + *b).collect())
    }

    /// Componentwise `[s]·[vᵢ]`.
    pub fn scale(&self, s: Interval) -> IntervalVector {
        IntervalVector(self.0.iter().map(|v| s * *v).collect())
    }

    pub fn mul_by_const(&self, c: f64) -> IntervalVector {
        IntervalVector(self.0.iter().map(|v| v.mul_by_const(c)).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(Interval::is_finite)
    }

    pub fn inflate(&self, eps: f64) -> IntervalVector {
        IntervalVector(self.0.iter().map(|v| v.inflate(eps)).collect())
    }
}

impl std::ops::Index<usize> for IntervalVector {
    type Output = Interval;

    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

/// Symmetric `n × n` interval matrix, stored densely in row-major order.
///
/// Every constructor fills the upper triangle and mirrors it, so entry
/// `(i, j)` and entry `(j, i)` are always the same interval.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalMatrix {
    n: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    /// The all-`[0, 0]` matrix `[Z, Z]`.
    pub fn zeros(n: usize) -> Self {
        IntervalMatrix {
            n,
            data: vec![Interval::ZERO; n * n],
        }
    }

    /// Builds the matrix from `f(i, j)` evaluated for `i <= j` only.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> Interval) -> Self {
        let mut data = vec![Interval::ZERO; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        IntervalMatrix { n, data }
    }

    /// Builds a matrix from row-major bounds, checking symmetry.
    pub fn from_rows(rows: &[Vec<Interval>]) -> Result<Self, IntervalError> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(IntervalError::DimensionMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            for (j, x) in row.iter().enumerate().take(i) {
                if *x != rows[j][i] {
                    return Err(IntervalError::Asymmetric { row: i, col: j });
                }
            }
        }
        Ok(IntervalMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Interval {
        self.data[i * self.n + j]
    }

    pub fn add(&self, other: &IntervalMatrix) -> IntervalMatrix {
        debug_assert_eq!(self.n, other.n);
        IntervalMatrix::from_upper(self.n, |i, j| self.get(i, j) + other.get(i, j))
    }

    /// Entrywise `[s]·[Mᵢⱼ]`.
    pub fn scale(&self, s: Interval) -> IntervalMatrix {
        IntervalMatrix::from_upper(self.n, |i, j| s * self.get(i, j))
    }

    pub fn mul_by_const(&self, c: f64) -> IntervalMatrix {
        IntervalMatrix::from_upper(self.n, |i, j| self.get(i, j).mul_by_const(c))
    }

    /// `[a][a]ᵀ`: entry `(i, j)` is `[aᵢ][aⱼ]` off the diagonal and `[aᵢ]²`
    /// on it, so diagonal entries are never negative.
    pub fn outer(a: &IntervalVector) -> IntervalMatrix {
        IntervalMatrix::from_upper(
            a.len(),
            |i, j| {
                if i == j {
                    a[i].square()
                } else {
                    a[i] * a[j]
                }
            },
        )
    }

    /// `[a][b]ᵀ + [b][a]ᵀ`.
    pub fn outer_sym_pair(a: &IntervalVector, b: &IntervalVector) -> IntervalMatrix {
        debug_assert_eq!(a.len(), b.len());
        IntervalMatrix::from_upper(a.len(), |i, j| a[i] * b[j] + b[i] * a[j])
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(Interval::is_finite)
    }

    pub fn inflate(&self, eps: f64) -> IntervalMatrix {
        IntervalMatrix::from_upper(self.n, |i, j| self.get(i, j).inflate(eps))
    }

    /// Entrywise midpoints as a dense row-major array.
    pub fn midpoints(&self) -> Vec<f64> {
        self.data.iter().map(Interval::mid).collect()
    }

    /// Largest entry width.
    pub fn max_width(&self) -> f64 {
        self.data.iter().map(Interval::width).fold(0.0, f64::max)
    }
}

/// Axis-aligned hyperrectangle `[x̲₁, x̄₁] × … × [x̲ₙ, x̄ₙ]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalBox(Vec<Interval>);

impl IntervalBox {
    pub fn new(dims: Vec<Interval>) -> Result<Self, IntervalError> {
        if dims.is_empty() {
            return Err(IntervalError::EmptyBox);
        }
        Ok(IntervalBox(dims))
    }

    /// Builds a box from `(lo, hi)` pairs.
    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self, IntervalError> {
        let dims = bounds
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(dims)
    }

    /// Degenerate box `[x, x]`.
    pub fn point(x: &[f64]) -> Result<Self, IntervalError> {
        let dims = x
            .iter()
            .map(|&v| Interval::new(v, v))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(dims)
    }

    /// Parses `lo,hi;lo,hi;…`.
    pub fn parse(text: &str) -> Result<Self, IntervalError> {
        let mut dims = Vec::new();
        for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let mut it = part.split(',').map(str::trim);
            let (lo, hi) = match (it.next(), it.next(), it.next()) {
                (Some(lo), Some(hi), None) => (lo, hi),
                _ => return Err(IntervalError::Syntax(part.to_string())),
            };
            let lo: f64 = lo
                .parse()
                .map_err(|_| IntervalError::Syntax(part.to_string()))?;
            let hi: f64 = hi
                .parse()
                .map_err(|_| IntervalError::Syntax(part.to_string()))?;
            dims.push(Interval::new(lo, hi)?);
        }
        Self::new(dims)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dims(&self) -> &[Interval] {
        &self.0
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && self.0.iter().zip(x).all(|(d, v)| d.contains(*v))
    }

    pub fn is_subset_of(&self, other: &IntervalBox) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a.is_subset_of(b))
    }

    /// All `2ⁿ` corners, in binary counting order (bit `i` selects the upper
    /// endpoint of dimension `i`).
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..1usize << n)
            .map(|mask| {
                self.0
                    .iter()
                    .enumerate()
                    .map(|(i, d)| if mask >> i & 1 == 1 { d.hi } else { d.lo })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for IntervalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{},{}", d.lo, d.hi)?;
        }
        Ok(())
    }
}
