//! Spectral bounds for interval Hessians and the numerical pieces they need.

use std::fmt;

use rayon::prelude::*;

use crate::codelist::Codelist;
use crate::error::{EvalError, SpectralError};
use crate::interval::{IntervalBox, IntervalMatrix};
use crate::propagate::{hessian_at_point, propagate_with, EvalTrace, Mode, PropagateOptions};

/// Default dimension limit for [`hertz_rohn`].
pub const HERTZ_ROHN_CAP: usize = 16;

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Arithmetic,
    Gershgorin,
    HertzRohn,
    SampledOracle,
}

impl Method {
    /// One-letter tag: `A`, `G`, `H` or `O`.
    pub fn tag(self) -> &'static str {
        match self {
            Method::Arithmetic => "A",
            Method::Gershgorin => "G",
            Method::HertzRohn => "H",
            Method::SampledOracle => "O",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Method> {
        match tag.trim().to_ascii_uppercase().as_str() {
            "A" => Some(Method::Arithmetic),
            "G" => Some(Method::Gershgorin),
            "H" => Some(Method::HertzRohn),
            "O" => Some(Method::SampledOracle),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// `[λ̲, λ̄]` produced by one method.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralBounds {
    pub lo: f64,
    pub hi: f64,
    pub method: Method,
}

impl SpectralBounds {
    pub fn new(lo: f64, hi: f64, method: Method) -> Self {
        debug_assert!(lo <= hi, "inverted spectral bounds [{lo}, {hi}]");
        SpectralBounds { lo, hi, method }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_subset_of(&self, other: &SpectralBounds) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

/// Dense real symmetric matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Wraps row-major data. Symmetry is checked by the eigensolver.
    ///
    /// # Panics
    /// If `data.len() != n * n`.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "expected {n}x{n} entries");
        SymMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        Self::from_row_major(n, rows.iter().flatten().copied().collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi.
pub fn sym_eigenvalues(m: &SymMatrix) -> Result<Vec<f64>, SpectralError> {
    let n = m.n;
    if m.data.iter().any(|x| !x.is_finite()) {
        return Err(SpectralError::NonFinite);
    }
    let norm = m.frobenius();
    for i in 0..n {
        for j in 0..i {
            if (m.get(i, j) - m.get(j, i)).abs() > JACOBI_TOL * norm {
                return Err(SpectralError::Asymmetric { row: i, col: j });
            }
        }
    }
    let mut a = m.data.clone();
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = avg;
            a[j * n + i] = avg;
        }
    }
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off(&a) <= JACOBI_TOL * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// `(λ_min, λ_max)` of a symmetric matrix.
pub fn sym_eig_extremes(m: &SymMatrix) -> Result<(f64, f64), SpectralError> {
    let ev = sym_eigenvalues(m)?;
    match (ev.first(), ev.last()) {
        (Some(&lo), Some(&hi)) => Ok((lo, hi)),
        _ => Ok((0.0, 0.0)),
    }
}

/// Gershgorin radii `rᵢ = Σ_{j≠i} max(−H̲ᵢⱼ, H̄ᵢⱼ)`.
pub fn gershgorin_radii(h: &IntervalMatrix) -> Vec<f64> {
    let n = h.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let e = h.get(i, j);
                    (-e.lo()).max(e.hi())
                })
                .sum()
        })
        .collect()
}

/// Interval Gershgorin bounds `[min(H̲ᵢᵢ − rᵢ), max(H̄ᵢᵢ + rᵢ)]`.
pub fn gershgorin(h: &IntervalMatrix) -> SpectralBounds {
    let r = gershgorin_radii(h);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, ri) in r.iter().enumerate() {
        let d = h.get(i, i);
        lo = lo.min(d.lo() - ri);
        hi = hi.max(d.hi() + ri);
    }
    if h.dim() == 0 {
        return SpectralBounds::new(0.0, 0.0, Method::Gershgorin);
    }
    SpectralBounds::new(lo, hi, Method::Gershgorin)
}

/// Sign column `k` (1-based, `1 ≤ k ≤ 2ⁿ⁻¹`): entry `i < n − 1` is `−1` iff
/// bit `i` of `k − 1` is set; the last entry is always `+1`.
pub fn sign_column(n: usize, k: usize) -> Vec<i8> {
    (0..n)
        .map(|i| {
            if i + 1 < n && (k - 1) >> i & 1 == 1 {
                -1
            } else {
                1
            }
        })
        .collect()
}

/// The vertex matrices `L⁽ᵏ⁾` and `U⁽ᵏ⁾` of one sign column.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexMatrixPair {
    pub l: SymMatrix,
    pub u: SymMatrix,
    pub sign_column: Vec<i8>,
}

/// Builds `L⁽ᵏ⁾` (lower endpoint where `sᵢsⱼ = 1` and on the diagonal,
/// upper elsewhere) and `U⁽ᵏ⁾` (the opposite endpoints).
pub fn vertex_pair(h: &IntervalMatrix, k: usize) -> VertexMatrixPair {
    let n = h.dim();
    let s = sign_column(n, k);
    let mut l = vec![0.0; n * n];
    let mut u = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let e = h.get(i, j);
            if i == j || s[i] * s[j] == 1 {
                l[i * n + j] = e.lo();
                u[i * n + j] = e.hi();
            } else {
                l[i * n + j] = e.hi();
                u[i * n + j] = e.lo();
            }
        }
    }
    VertexMatrixPair {
        l: SymMatrix::from_row_major(n, l),
        u: SymMatrix::from_row_major(n, u),
        sign_column: s,
    }
}

/// Hertz–Rohn result with the attaining sign columns (1-based, first on ties).
#[derive(Clone, Debug, PartialEq)]
pub struct HertzRohnReport {
    pub bounds: SpectralBounds,
    pub argmin: usize,
    pub argmax: usize,
    /// Number of vertex matrices examined, `2ⁿ`.
    pub vertex_matrices: usize,
}

/// Tight bounds for a symmetric interval matrix; `n` must not exceed
/// [`HERTZ_ROHN_CAP`].
pub fn hertz_rohn(h: &IntervalMatrix) -> Result<SpectralBounds, SpectralError> {
    hertz_rohn_report(h, HERTZ_ROHN_CAP).map(|r| r.bounds)
}

pub fn hertz_rohn_report(h: &IntervalMatrix, cap: usize) -> Result<HertzRohnReport, SpectralError> {
    let n = h.dim();
    if n > cap {
        return Err(SpectralError::DimensionCap { n, cap });
    }
    if !h.is_finite() {
        return Err(SpectralError::NonFinite);
    }
    if n == 0 {
        return Ok(HertzRohnReport {
            bounds: SpectralBounds::new(0.0, 0.0, Method::HertzRohn),
            argmin: 1,
            argmax: 1,
            vertex_matrices: 0,
        });
    }
    let columns = 1usize << (n - 1);
    let solve = |k: usize| -> Result<(f64, f64), SpectralError> {
        let pair = vertex_pair(h, k);
        let (lmin, _) = sym_eig_extremes(&pair.l)?;
        let (_, umax) = sym_eig_extremes(&pair.u)?;
        Ok((lmin, umax))
    };
    let extremes: Vec<(f64, f64)> = if n >= 8 {
        (1..=columns)
            .into_par_iter()
            .map(solve)
            .collect::<Result<_, _>>()?
    } else {
        (1..=columns).map(solve).collect::<Result<_, _>>()?
    };
    let (mut lo, mut hi) = extremes[0];
    let (mut argmin, mut argmax) = (1, 1);
    for (idx, &(l, u)) in extremes.iter().enumerate().skip(1) {
        if l < lo {
            lo = l;
            argmin = idx + 1;
        }
        if u > hi {
            hi = u;
            argmax = idx + 1;
        }
    }
    Ok(HertzRohnReport {
        bounds: SpectralBounds::new(lo, hi, Method::HertzRohn),
        argmin,
        argmax,
        vertex_matrices: 2 * columns,
    })
}

/// The αBB underestimator `φ(x) − ½ λ̲ Σ (x̲ᵢ − xᵢ)(x̄ᵢ − xᵢ)`; returns `φ(x)`
/// unchanged when `lambda_lo ≥ 0`.
pub fn alpha_bb_underestimate(
    cl: &Codelist,
    domain: &IntervalBox,
    lambda_lo: f64,
    x: &[f64],
) -> Result<f64, SpectralError> {
    if x.len() != domain.dim() || !domain.contains(x) {
        return Err(SpectralError::PointOutsideBox);
    }
    let phi = cl.eval_point(x)?;
    if lambda_lo >= 0.0 {
        return Ok(phi);
    }
    let q: f64 = domain
        .dims()
        .iter()
        .zip(x)
        .map(|(d, &xi)| (d.lo() - xi) * (d.hi() - xi))
        .sum();
    Ok(phi - 0.5 * lambda_lo * q)
}

fn first_primes(count: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut c = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&p| p * p <= c)
            .all(|&p| !c.is_multiple_of(p))
        {
            primes.push(c);
        }
        c += 1;
    }
    primes
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// Halton points mapped into `domain`, skipping the origin of the sequence.
pub fn halton_points(domain: &IntervalBox, count: usize) -> Vec<Vec<f64>> {
    let primes = first_primes(domain.dim());
    (1..=count as u64)
        .map(|i| {
            domain
                .dims()
                .iter()
                .zip(&primes)
                .map(|(d, &p)| d.lo() + radical_inverse(i, p) * d.width())
                .collect()
        })
        .collect()
}

/// Inner approximation of the Hessian spectrum over `domain`: extreme
/// eigenvalues of point Hessians at `samples` Halton points plus all box
/// vertices when `n ≤ 10`. Points outside the function's domain are skipped.
pub fn sampled_oracle(
    cl: &Codelist,
    domain: &IntervalBox,
    samples: usize,
) -> Result<SpectralBounds, SpectralError> {
    if domain.dim() != cl.n_vars() {
        return Err(EvalError::DimensionMismatch {
            expected: cl.n_vars(),
            got: domain.dim(),
        }
        .into());
    }
    let mut points = halton_points(domain, samples);
    if domain.dim() <= 10 {
        points.extend(domain.vertices());
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for x in &points {
        let h = match hessian_at_point(cl, x) {
            Ok(h) => h,
            Err(
                EvalError::Domain { .. }
                | EvalError::PointDomain { .. }
                | EvalError::Overflow { .. },
            ) => continue,
            Err(e) => return Err(e.into()),
        };
        let m = SymMatrix::from_row_major(h.dim(), h.midpoints());
        let (a, b) = sym_eig_extremes(&m)?;
        lo = lo.min(a);
        hi = hi.max(b);
    }
    if lo > hi {
        return Err(SpectralError::NoFeasibleSample);
    }
    Ok(SpectralBounds::new(lo, hi, Method::SampledOracle))
}

/// Options for [`bound_all`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundOptions {
    pub hertz_rohn_cap: usize,
    pub inflate: Option<f64>,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            hertz_rohn_cap: HERTZ_ROHN_CAP,
            inflate: None,
        }
    }
}

/// Bounds from all three methods on one box.
#[derive(Clone, Debug, PartialEq)]
pub struct AllBounds {
    pub arithmetic: SpectralBounds,
    pub gershgorin: SpectralBounds,
    pub hertz_rohn: SpectralBounds,
}

/// Arithmetic bounds from a trace propagated in [`Mode::Eigen`] or [`Mode::Both`].
pub fn arithmetic(trace: &EvalTrace) -> Option<SpectralBounds> {
    trace
        .eigen()
        .map(|l| SpectralBounds::new(l.lo(), l.hi(), Method::Arithmetic))
}

/// Propagates once in [`Mode::Both`] and applies all three methods.
pub fn bound_all(
    cl: &Codelist,
    domain: &IntervalBox,
    opts: &BoundOptions,
) -> Result<AllBounds, SpectralError> {
    let n = cl.n_vars();
    if n > opts.hertz_rohn_cap {
        return Err(SpectralError::DimensionCap {
            n,
            cap: opts.hertz_rohn_cap,
        });
    }
    let trace = propagate_with(
        cl,
        domain,
        Mode::Both,
        &PropagateOptions {
            inflate: opts.inflate,
        },
    )?;
    let h = trace.hessian().expect("Both mode fills the Hessian");
    Ok(AllBounds {
        arithmetic: arithmetic(&trace).expect("Both mode fills the eigen bound"),
        gershgorin: gershgorin(h),
        hertz_rohn: hertz_rohn_report(h, opts.hertz_rohn_cap)?.bounds,
    })
}
