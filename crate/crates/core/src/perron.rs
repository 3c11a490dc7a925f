//! Perron–Frobenius data of irreducible nonnegative matrices.
//!
//! The f64 entry point runs power iteration on `M + I` (primitive whenever
//! `M` is irreducible) and falls back to Noda's inverse iteration with
//! Collatz–Wielandt shifts when the spectral gap is too small for power
//! iteration to reach the tolerance. The same Noda routine runs in
//! arbitrary precision for the large-`t` equilibrium computations, where
//! the leading eigenvalues agree to hundreds of digits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::numeric::HpFloat;

pub const PERRON_TOL: f64 = 1e-12;
pub const POWER_MAX_ITER: usize = 100_000;
const NODA_MAX_ITER: usize = 200;

#[derive(Clone, Debug, Serialize)]
pub struct PerronData {
    pub lambda: f64,
    /// Right eigenvector, normalised to sum one.
    pub right: Vec<f64>,
    /// Left eigenvector, normalised so that `left · right = 1`.
    pub left: Vec<f64>,
}

impl PerronData {
    pub fn entropy(&self) -> f64 {
        self.lambda.ln()
    }
}

/// Minimal arithmetic needed by the Noda iteration.
pub(crate) trait PerronNum: Clone {
    fn zero_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn is_pos(&self) -> bool;
    fn lt(&self, o: &Self) -> bool;
    fn from_f64_like(&self, v: f64) -> Self;
}

impl PerronNum for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_pos(&self) -> bool {
        *self > 0.0 && self.is_finite()
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn from_f64_like(&self, v: f64) -> Self {
        v
    }
}

impl PerronNum for HpFloat {
    fn zero_like(&self) -> Self {
        HpFloat::ZERO.with_precision(self.precision()).value()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_pos(&self) -> bool {
        *self > self.zero_like()
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn from_f64_like(&self, v: f64) -> Self {
        HpFloat::try_from(v)
            .expect("finite")
            .with_precision(self.precision())
            .value()
    }
}

fn matvec<N: PerronNum>(m: &[Vec<N>], x: &[N]) -> Vec<N> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(x[0].zero_like(), |acc, (a, b)| acc.add(&a.mul(b)))
        })
        .collect()
}

fn collatz_bounds<N: PerronNum>(m: &[Vec<N>], x: &[N]) -> (N, N) {
    let y = matvec(m, x);
    let mut lo: Option<N> = None;
    let mut hi: Option<N> = None;
    for (yi, xi) in y.iter().zip(x) {
        let r = yi.div(xi);
        if lo.as_ref().is_none_or(|l| r.lt(l)) {
            lo = Some(r.clone());
        }
        if hi.as_ref().is_none_or(|h| h.lt(&r)) {
            hi = Some(r);
        }
    }
    (lo.expect("nonempty"), hi.expect("nonempty"))
}

/// Solve `(sigma I - m) z = rhs` by elimination without pivoting.
///
/// For `sigma` above the spectral radius the matrix is a nonsingular
/// M-matrix and every pivot is positive; `None` signals that this failed,
/// which happens once `sigma` is within working precision of the root.
fn solve_shifted<N: PerronNum>(m: &[Vec<N>], sigma: &N, rhs: &[N]) -> Option<Vec<N>> {
    let n = m.len();
    let mut a: Vec<Vec<N>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let neg = m[i][j].zero_like().sub(&m[i][j]);
                    if i == j {
                        sigma.add(&neg)
                    } else {
                        neg
                    }
                })
                .collect()
        })
        .collect();
    let mut b = rhs.to_vec();
    for col in 0..n {
        if !a[col][col].is_pos() {
            return None;
        }
        for row in col + 1..n {
            if !a[row][col].is_pos() && !a[row][col].lt(&a[row][col].zero_like()) {
                continue;
            }
            let f = a[row][col].div(&a[col][col]);
            for j in col..n {
                let v = a[row][j].sub(&f.mul(&a[col][j]));
                a[row][j] = v;
            }
            let v = b[row].sub(&f.mul(&b[col]));
            b[row] = v;
        }
    }
    let mut z = b.clone();
    for i in (0..n).rev() {
        let mut s = b[i].clone();
        for j in i + 1..n {
            s = s.sub(&a[i][j].mul(&z[j]));
        }
        z[i] = s.div(&a[i][i]);
    }
    z.iter().all(PerronNum::is_pos).then_some(z)
}

fn normalize_sum<N: PerronNum>(x: &mut [N]) {
    let s = x.iter().fold(x[0].zero_like(), |acc, v| acc.add(v));
    for v in x.iter_mut() {
        *v = v.div(&s);
    }
}

/// Noda iteration. Returns `(lambda, x, relative Collatz–Wielandt gap)`.
pub(crate) fn noda<N: PerronNum>(m: &[Vec<N>], mut x: Vec<N>, rel_tol: &N) -> (N, Vec<N>, N) {
    normalize_sum(&mut x);
    let (mut lo, mut hi) = collatz_bounds(m, &x);
    for _ in 0..NODA_MAX_ITER {
        let gap = hi.sub(&lo).div(&hi);
        if !rel_tol.lt(&gap) {
            break;
        }
        let Some(mut z) = solve_shifted(m, &hi, &x) else {
            break;
        };
        normalize_sum(&mut z);
        let (nlo, nhi) = collatz_bounds(m, &z);
        // The upper bound is monotone for exact arithmetic; stop when rounding breaks it.
        if hi.lt(&nhi) {
            break;
        }
        x = z;
        lo = nlo;
        hi = nhi;
    }
    let gap = hi.sub(&lo).div(&hi);
    let two = hi.from_f64_like(2.0);
    (hi.add(&lo).div(&two), x, gap)
}

fn transpose<N: Clone>(m: &[Vec<N>]) -> Vec<Vec<N>> {
    let n = m.len();
    (0..n).map(|j| (0..n).map(|i| m[i][j].clone()).collect()).collect()
}

fn check_input(m: &[Vec<f64>]) -> Result<()> {
    let n = m.len();
    if n == 0 {
        return Err(Error::invalid("empty matrix"));
    }
    for row in m {
        if row.len() != n {
            return Err(Error::invalid("matrix is not square"));
        }
        if row.iter().any(|&a| !(a >= 0.0) || !a.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite and nonnegative"));
        }
    }
    if m.iter().all(|r| r.iter().all(|&a| a == 0.0)) {
        return Err(Error::invalid("zero matrix"));
    }
    if !Digraph::from_weights(m).is_irreducible() {
        return Err(Error::Reducible("decompose into strongly connected components first".into()));
    }
    Ok(())
}

fn relative_residual(m: &[Vec<f64>], x: &[f64], lambda: f64) -> f64 {
    let y = matvec(m, x);
    let scale = x.iter().fold(0.0f64, |a, v| a.max(v.abs())) * lambda;
    y.iter()
        .zip(x)
        .map(|(yi, xi)| (yi - lambda * xi).abs())
        .fold(0.0, f64::max)
        / scale
}

fn right_vector(m: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
    let n = m.len();
    let mut x = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    let mut converged = false;
    for it in 0..POWER_MAX_ITER {
        // (M + I) x
        let mut y = matvec(m, &x);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += xi;
        }
        let s: f64 = y.iter().sum();
        y.iter_mut().for_each(|v| *v /= s);
        x = y;
        if it % 8 == 7 {
            let (lo, hi) = collatz_bounds(m, &x);
            lambda = 0.5 * (lo + hi);
            if x.iter().all(|&v| v > 0.0) && (hi - lo) <= PERRON_TOL * hi {
                converged = true;
                break;
            }
        }
        if it >= 2000 && it % 512 == 0 {
            // Slow geometric convergence; let the Noda iteration finish the job.
            break;
        }
    }
    if !converged || x.iter().any(|&v| v <= 0.0) {
        if x.iter().any(|&v| v <= 0.0) {
            x = vec![1.0 / n as f64; n];
        }
        let (l, nx, _) = noda(m, x, &(PERRON_TOL * 1e-2));
        lambda = l;
        x = nx;
    }
    let res = relative_residual(m, &x, lambda);
    if !(res <= PERRON_TOL) || x.iter().any(|&v| v <= 0.0) {
        return Err(Error::numeric("Perron iteration did not converge", res));
    }
    normalize_sum(&mut x);
    Ok((lambda, x))
}

/// Perron root with right and left eigenvectors of an irreducible nonnegative matrix.
pub fn perron_data(m: &[Vec<f64>]) -> Result<PerronData> {
    check_input(m)?;
    let (lambda, right) = right_vector(m)?;
    let (_, mut left) = right_vector(&transpose(m))?;
    let s: f64 = left.iter().zip(&right).map(|(a, b)| a * b).sum();
    left.iter_mut().for_each(|v| *v /= s);
    Ok(PerronData { lambda, right, left })
}

/// Perron root of a 0/1 matrix as f64.
pub fn spectral_radius_01(m: &[Vec<u8>]) -> Result<f64> {
    let f: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|&a| a as f64).collect()).collect();
    perron_data(&f).map(|p| p.lambda)
}

/// High precision Perron data: `(lambda, right, left, relative gap)`.
pub(crate) fn perron_hp(m: &[Vec<HpFloat>], rel_tol: &HpFloat) -> (HpFloat, Vec<HpFloat>, Vec<HpFloat>, HpFloat) {
    let n = m.len();
    let bits = m.iter().flatten().map(HpFloat::precision).max().unwrap_or(64).max(64);
    let one = HpFloat::ONE.with_precision(bits).value();
    let start: Vec<HpFloat> = vec![one; n];
    let (lambda, right, gap_r) = noda(m, start.clone(), rel_tol);
    let (_, left, gap_l) = noda(&transpose(m), start, rel_tol);
    let gap = if PerronNum::lt(&gap_r, &gap_l) { gap_l } else { gap_r };
    (lambda, right, left, gap)
}
