//! Perron–Frobenius eigendata of nonnegative irreducible matrices.
//!
//! The eigenvalue is enclosed by Collatz–Wielandt bounds: for any positive
//! vector `x`, `min_i (Mx)_i / x_i <= ρ(M) <= max_i (Mx)_i / x_i`. The bounds
//! are evaluated on `M = B/s + cI`, which is primitive whenever `B` is
//! irreducible, and widened by a relative floating point slack.

use alloc::vec;
use alloc::vec::Vec;

use crate::cycles;
use crate::linalg::SparseMatrix;
use crate::math;
use crate::{Error, Result};

/// Matrices up to this size use repeated squaring instead of power
/// iteration.
const DENSE_LIMIT: usize = 96;
const MAX_SQUARINGS: usize = 80;
const MAX_POWER_STEPS: usize = 400_000;

/// Perron root with a certified enclosure and positive eigenvectors, each
/// scaled so its first entry is one.
#[derive(Clone, Debug, PartialEq)]
pub struct PerronData {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    /// Right eigenvector.
    pub r: Vec<f64>,
    /// Left eigenvector.
    pub l: Vec<f64>,
    /// Bound on `‖B r − λ r‖_∞` with `λ` the midpoint.
    pub residual: f64,
    pub iterations: usize,
}

impl PerronData {
    /// Midpoint of the enclosure.
    pub fn lambda(&self) -> f64 {
        0.5 * (self.lambda_lo + self.lambda_hi)
    }

    pub fn width(&self) -> f64 {
        self.lambda_hi - self.lambda_lo
    }
}

struct OneSided {
    lower: f64,
    upper: f64,
    vector: Vec<f64>,
    iterations: usize,
}

/// Computes the Perron root and eigenvectors of `b`. The enclosure width is
/// at most `tol * max(1, λ)`.
pub fn perron(b: &SparseMatrix, tol: f64) -> Result<PerronData> {
    let n = b.dim();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    if b.min_entry() < 0.0 {
        return Err(Error::BadMatrix("negative entry".into()));
    }
    let (_, ncomp) = cycles::scc(&b.support(), 0);
    if ncomp != 1 || (0..n).any(|i| b.row_len(i) == 0) {
        return Err(Error::NotIrreducible);
    }
    let r = one_sided(b, tol)?;
    let l = one_sided(&b.transpose(), tol)?;
    let lower = r.lower.max(l.lower);
    let upper = r.upper.min(l.upper);
    let (lower, upper) = if lower <= upper {
        (lower, upper)
    } else {
        (r.lower.min(l.lower), r.upper.max(l.upper))
    };
    let mid = 0.5 * (lower + upper);
    let mut y = vec![0.0; n];
    b.mul_vec(&r.vector, &mut y);
    let mut residual = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..n {
        residual = residual.max(math::abs(y[i] - mid * r.vector[i]));
        scale = scale.max(math::abs(y[i]));
    }
    let residual = residual + 4.0 * (max_row_nnz(b) as f64 + 2.0) * f64::EPSILON * scale;
    Ok(PerronData {
        lambda_lo: lower,
        lambda_hi: upper,
        r: r.vector,
        l: l.vector,
        residual,
        iterations: r.iterations + l.iterations,
    })
}

fn max_row_nnz(b: &SparseMatrix) -> usize {
    (0..b.dim()).map(|i| b.row_len(i)).max().unwrap_or(0)
}

/// Collatz–Wielandt quotients of `M = B/s + cI` at `x`.
fn cw_bounds(b: &SparseMatrix, s: f64, c: f64, x: &[f64], work: &mut [f64]) -> (f64, f64) {
    b.mul_vec(x, work);
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for i in 0..x.len() {
        let q = (work[i] / s + c * x[i]) / x[i];
        lo = lo.min(q);
        hi = hi.max(q);
    }
    (lo, hi)
}

fn one_sided(b: &SparseMatrix, tol: f64) -> Result<OneSided> {
    let n = b.dim();
    let s = (0..n)
        .map(|i| b.row(i).map(|(_, v)| v).sum::<f64>())
        .fold(0.0f64, f64::max);
    let min_row = (0..n)
        .map(|i| b.row(i).map(|(_, v)| v).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    let c = 0.5 * (min_row / s).max(1e-3);
    let slack = 4.0 * (max_row_nnz(b) as f64 + 3.0) * f64::EPSILON;

    let to_lambda = |lo: f64, hi: f64| {
        let lo = (lo * (1.0 - slack) - c) * s;
        let hi = (hi * (1.0 + slack) - c) * s;
        (lo.max(0.0), hi)
    };
    let converged = |lo: f64, hi: f64| hi - lo <= tol * hi.max(1.0);

    // the slack alone may already exceed the requested width
    let floor = 2.0 * slack * (1.0 + c) * s;
    if floor > tol * (s * (1.0 + c)).max(1.0) && floor > tol {
        return Err(Error::ToleranceUnreachable { slack: floor, tol });
    }

    let mut work = vec![0.0; n];
    let mut x = vec![1.0; n];
    let mut iterations = 0usize;

    if n <= DENSE_LIMIT {
        let mut m = b.to_dense();
        for (i, row) in m.iter_mut().enumerate() {
            for v in row.iter_mut() {
                *v /= s;
            }
            row[i] += c;
        }
        for _ in 0..MAX_SQUARINGS {
            iterations += 1;
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = m[i].iter().sum::<f64>();
            }
            normalize(&mut x);
            if x.iter().all(|&v| v > 0.0) {
                let (lo, hi) = cw_bounds(b, s, c, &x, &mut work);
                let (l, h) = to_lambda(lo, hi);
                if converged(l, h) {
                    return Ok(finish(l, h, x, iterations));
                }
            }
            m = square_normalized(&m);
        }
    }

    let mut y = vec![0.0; n];
    let mut best: Option<(f64, f64)> = None;
    for _ in 0..MAX_POWER_STEPS {
        iterations += 1;
        b.mul_vec(&x, &mut y);
        for i in 0..n {
            y[i] = y[i] / s + c * x[i];
        }
        core::mem::swap(&mut x, &mut y);
        normalize(&mut x);
        if iterations % 8 == 0 && x.iter().all(|&v| v > 0.0) {
            let (lo, hi) = cw_bounds(b, s, c, &x, &mut work);
            let (l, h) = to_lambda(lo, hi);
            if converged(l, h) {
                return Ok(finish(l, h, x, iterations));
            }
            best = Some((l, h));
        }
    }
    let width = best.map_or(f64::INFINITY, |(l, h)| h - l);
    Err(Error::NotConverged { width, tol })
}

fn finish(lower: f64, upper: f64, mut x: Vec<f64>, iterations: usize) -> OneSided {
    let f = x[0];
    for v in x.iter_mut() {
        *v /= f;
    }
    OneSided {
        lower,
        upper,
        vector: x,
        iterations,
    }
}

fn normalize(x: &mut [f64]) {
    let m = x.iter().fold(0.0f64, |a, &b| a.max(b));
    if m > 0.0 {
        for v in x.iter_mut() {
            *v /= m;
        }
    }
}

fn square_normalized(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let a = m[i][k];
            if a == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += a * m[k][j];
            }
        }
    }
    let mx = out.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    if mx > 0.0 {
        for v in out.iter_mut().flatten() {
            *v /= mx;
        }
    }
    out
}

/// Spectral radius lower bound `min_i (Bx)_i/x_i` for a positive vector.
pub fn collatz_wielandt(b: &SparseMatrix, x: &[f64]) -> (f64, f64) {
    let mut y = vec![0.0; b.dim()];
    b.mul_vec(x, &mut y);
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for i in 0..x.len() {
        let q = y[i] / x[i];
        lo = lo.min(q);
        hi = hi.max(q);
    }
    (lo, hi)
}

/// Maximin characterisation of the Perron root over a grid on the positive
/// part of the unit sphere: `max_x min_i (B M x)_i / (M x)_i` with
/// `M = (I + B)^(d-1)`. Every grid value is a lower bound. Only for `d <= 3`.
pub fn perron_maximin_oracle(b: &SparseMatrix, grid_density: usize) -> Result<f64> {
    let d = b.dim();
    if d == 0 || d > 3 {
        return Err(Error::InvalidArgument("maximin oracle needs 1 <= d <= 3"));
    }
    if grid_density == 0 {
        return Err(Error::InvalidArgument("grid density must be positive"));
    }
    let dense = b.to_dense();
    let mut m: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _ in 1..d {
        let mut next = vec![vec![0.0; d]; d];
        for i in 0..d {
            for k in 0..d {
                let ipb = dense[i][k] + if i == k { 1.0 } else { 0.0 };
                for j in 0..d {
                    next[i][j] += ipb * m[k][j];
                }
            }
        }
        m = next;
    }
    let apply = |a: &[Vec<f64>], x: &[f64]| -> Vec<f64> {
        a.iter()
            .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
            .collect()
    };
    let quotient = |x: &[f64]| -> f64 {
        let y = apply(&m, x);
        let by = apply(&dense, &y);
        (0..d).fold(f64::INFINITY, |acc, i| {
            if y[i] > 0.0 {
                acc.min(by[i] / y[i])
            } else {
                acc
            }
        })
    };
    let half_pi = core::f64::consts::FRAC_PI_2;
    let mut best = 0.0f64;
    match d {
        1 => best = dense[0][0],
        2 => {
            for i in 0..=grid_density {
                let t = half_pi * i as f64 / grid_density as f64;
                best = best.max(quotient(&[math::cos(t), math::sin(t)]));
            }
        }
        _ => {
            let side = math::sqrt(grid_density as f64).max(1.0) as usize;
            for i in 0..=side {
                let a = half_pi * i as f64 / side as f64;
                for j in 0..=side {
                    let c = half_pi * j as f64 / side as f64;
                    let x = [math::cos(a) * math::cos(c), math::sin(a) * math::cos(c), math::sin(c)];
                    best = best.max(quotient(&x));
                }
            }
        }
    }
    Ok(best)
}
