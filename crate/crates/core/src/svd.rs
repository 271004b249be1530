//! Singular value decomposition at any precision level.
//!
//! A Householder QR first reduces `W` to its square triangular factor; the
//! factor is then diagonalized by one-sided (Hestenes) Jacobi rotations.
//! Each sweep visits all column pairs in round-robin tournament order, so the
//! pairs of one round are disjoint and may be rotated concurrently without
//! changing a single bit of the result.

use rayon::prelude::*;

use crate::linalg::Matrix;
use crate::precision::{PScalar, PrecisionLevel};
use crate::Error;

/// Sweep cap.
pub const MAX_SWEEPS: usize = 60;

#[derive(Clone, Debug)]
pub struct SvdResult {
    /// `m × k` left vectors, `k = min(rows, cols)`.
    pub u: Matrix,
    /// All `cols(W)` singular values, descending (trailing zeros when `rows < cols`).
    pub sigma: Vec<PScalar>,
    /// `n × n` right vectors.
    pub v: Matrix,
    pub level: PrecisionLevel,
    /// Largest normalized column inner product after the last sweep.
    pub off_diagonal: f64,
    pub sweeps: usize,
}

impl SvdResult {
    /// Columns `r..n` of `V`: a basis of the numerical nullspace for rank `r`.
    pub fn nullspace(&self, r: usize) -> Matrix {
        let n = self.v.cols();
        self.v.select_cols(&(r..n).collect::<Vec<_>>())
    }

    pub fn sigma_f64(&self) -> Vec<f64> {
        self.sigma.iter().map(PScalar::to_f64).collect()
    }
}

/// Rotation threshold on `|a_i·a_j| / (‖a_i‖‖a_j‖)`.
pub fn jacobi_tolerance(level: PrecisionLevel) -> PScalar {
    match level {
        PrecisionLevel::DoubleNative => PScalar::from_f64(1e-15, level),
        _ => level.tol_scalar(2),
    }
}

fn dot(a: &[PScalar], b: &[PScalar]) -> PScalar {
    let mut s = a[0].zero_like();
    for (x, y) in a.iter().zip(b) {
        s += x.clone() * y;
    }
    s
}

/// Householder reflectors and the `n × n` triangular factor (columns stored).
fn householder(w: &Matrix, level: PrecisionLevel) -> (Vec<Vec<PScalar>>, Vec<Vec<PScalar>>) {
    let (m, n) = (w.rows().max(w.cols()), w.cols());
    // zero-padded copy, column-major
    let mut a: Vec<Vec<PScalar>> = (0..n)
        .map(|j| (0..m).map(|i| if i < w.rows() { w[(i, j)].clone() } else { PScalar::zero(level) }).collect())
        .collect();
    let mut reflectors = Vec::with_capacity(n);
    for k in 0..n {
        let x = &a[k][k..];
        let norm = dot(x, x).sqrt();
        let mut v: Vec<PScalar> = x.to_vec();
        if !norm.is_zero() {
            let alpha = if v[0].is_sign_negative() { -norm } else { norm };
            v[0] += &alpha;
        }
        let vv = dot(&v, &v);
        if !vv.is_zero() {
            let two = PScalar::from_int(2, level);
            for col in a.iter_mut().skip(k) {
                let f = two.clone() * dot(&v, &col[k..]) / &vv;
                for (c, vi) in col[k..].iter_mut().zip(&v) {
                    *c -= f.clone() * vi;
                }
            }
        }
        reflectors.push(v);
    }
    let r = a.into_iter().map(|col| col[..n].to_vec()).collect();
    (reflectors, r)
}

/// Rotates one column pair; returns the normalized inner product seen before rotating.
///
/// Columns with squared norm at or below `floor` are rounding noise and are left alone.
fn rotate(ai: &mut [PScalar], aj: &mut [PScalar], vi: &mut [PScalar], vj: &mut [PScalar], tol: &PScalar, floor: &PScalar) -> PScalar {
    let alpha = dot(ai, ai);
    let beta = dot(aj, aj);
    if alpha <= *floor || beta <= *floor {
        return alpha.zero_like();
    }
    let gamma = dot(ai, aj);
    let scale = (alpha.clone() * &beta).sqrt();
    let off = gamma.abs() / &scale;
    if off <= *tol {
        return off;
    }
    let one = alpha.one_like();
    let two = alpha.lit(2.0);
    let zeta = (beta - alpha) / (gamma * two);
    let t = zeta.signum() / (zeta.abs() + (one.clone() + zeta.square()).sqrt());
    let c = one.clone() / (one + t.square()).sqrt();
    let s = c.clone() * &t;
    for (x, y) in ai.iter_mut().zip(aj.iter_mut()).chain(vi.iter_mut().zip(vj.iter_mut())) {
        let xi = x.clone();
        *x = c.clone() * &xi - s.clone() * &*y;
        *y = s.clone() * &xi + c.clone() * &*y;
    }
    off
}

/// Round-robin schedule: `n - 1` (or `n` for odd `n`) rounds of disjoint pairs.
fn tournament(n: usize) -> Vec<Vec<(usize, usize)>> {
    let m = n + n % 2;
    let mut players: Vec<usize> = (0..m).collect();
    let mut rounds = Vec::with_capacity(m - 1);
    for _ in 0..m.saturating_sub(1) {
        let mut round = Vec::with_capacity(m / 2);
        for k in 0..m / 2 {
            let (a, b) = (players[k], players[m - 1 - k]);
            if a < n && b < n {
                round.push((a.min(b), a.max(b)));
            }
        }
        rounds.push(round);
        // keep the first player fixed, rotate the rest
        let last = players.pop().expect("non-empty");
        players.insert(1, last);
    }
    rounds
}

/// SVD with the global rayon pool.
pub fn svd(w: &Matrix, level: PrecisionLevel) -> Result<SvdResult, Error> {
    svd_impl(w, level, true)
}

/// SVD on a dedicated pool of `workers` threads (1 = strictly sequential).
pub fn svd_with_workers(w: &Matrix, level: PrecisionLevel, workers: usize) -> Result<SvdResult, Error> {
    if workers <= 1 {
        return svd_impl(w, level, false);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Validation(format!("thread pool: {e}")))?;
    pool.install(|| svd_impl(w, level, true))
}

fn svd_impl(w: &Matrix, level: PrecisionLevel, parallel: bool) -> Result<SvdResult, Error> {
    let w = w.convert(level);
    let (m, n) = (w.rows(), w.cols());
    if !w.max_abs().is_finite() {
        return Err(Error::Validation("matrix has non-finite entries".into()));
    }
    let (reflectors, mut a) = householder(&w, level);
    let mut v: Vec<Vec<PScalar>> = (0..n)
        .map(|j| (0..n).map(|i| PScalar::from_int((i == j) as i64, level)).collect())
        .collect();
    let tol = jacobi_tolerance(level);
    let eps = match level {
        PrecisionLevel::DoubleNative => PScalar::from_f64(f64::EPSILON, level),
        _ => level.tol_scalar(0),
    };
    let frob2 = a.iter().fold(PScalar::zero(level), |s, c| s + dot(c, c));
    let floor = eps.square() * frob2;
    let rounds = tournament(n);
    let mut sweeps = 0;
    let off = loop {
        if sweeps == MAX_SWEEPS {
            return Err(Error::SvdNoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        let mut off = PScalar::zero(level);
        for round in &rounds {
            let mut work: Vec<_> = round
                .iter()
                .map(|&(i, j)| {
                    (
                        std::mem::take(&mut a[i]),
                        std::mem::take(&mut a[j]),
                        std::mem::take(&mut v[i]),
                        std::mem::take(&mut v[j]),
                    )
                })
                .collect();
            let offs: Vec<PScalar> = if parallel {
                work.par_iter_mut().map(|(ai, aj, vi, vj)| rotate(ai, aj, vi, vj, &tol, &floor)).collect()
            } else {
                work.iter_mut().map(|(ai, aj, vi, vj)| rotate(ai, aj, vi, vj, &tol, &floor)).collect()
            };
            for (&(i, j), (ai, aj, vi, vj)) in round.iter().zip(work) {
                a[i] = ai;
                a[j] = aj;
                v[i] = vi;
                v[j] = vj;
            }
            for o in offs {
                off = off.max(o);
            }
        }
        if off <= tol {
            break off;
        }
    };

    let mut sig: Vec<(PScalar, usize)> = a.iter().enumerate().map(|(j, c)| (dot(c, c).sqrt(), j)).collect();
    // descending, ties by original position for determinism
    sig.sort_by(|x, y| y.0.partial_cmp(&x.0).expect("finite").then(x.1.cmp(&y.1)));

    // left vectors in the triangular space, completed where sigma is at the noise floor
    let mut ur: Vec<Vec<PScalar>> = Vec::with_capacity(n);
    for (s, j) in &sig {
        if s.square() > floor {
            let inv = s.one_like() / s;
            ur.push(a[*j].iter().map(|x| x.clone() * &inv).collect());
        } else {
            ur.push(complete(&ur, n, level));
        }
    }
    // back to m-space: U = H_0 ... H_{n-1} [U_r; 0]
    let mm = m.max(n);
    let mut u: Vec<Vec<PScalar>> = ur
        .into_iter()
        .map(|c| c.into_iter().chain((n..mm).map(|_| PScalar::zero(level))).collect())
        .collect();
    let two = PScalar::from_int(2, level);
    for col in u.iter_mut() {
        for (k, h) in reflectors.iter().enumerate().rev() {
            let hh = dot(h, h);
            if hh.is_zero() {
                continue;
            }
            let f = two.clone() * dot(h, &col[k..]) / &hh;
            for (c, hi) in col[k..].iter_mut().zip(h) {
                *c -= f.clone() * hi;
            }
        }
    }
    let u = Matrix::from_fn(m, m.min(n), |i, j| u[j][i].clone());
    let vm = Matrix::from_fn(n, n, |i, k| v[sig[k].1][i].clone());
    Ok(SvdResult { u, sigma: sig.into_iter().map(|(s, _)| s).collect(), v: vm, level, off_diagonal: off.to_f64(), sweeps })
}

/// A unit vector orthogonal to `basis` (Gram-Schmidt over coordinate vectors).
fn complete(basis: &[Vec<PScalar>], n: usize, level: PrecisionLevel) -> Vec<PScalar> {
    let mut best: Option<(PScalar, Vec<PScalar>)> = None;
    for k in 0..n {
        let mut e: Vec<PScalar> = (0..n).map(|i| PScalar::from_int((i == k) as i64, level)).collect();
        for _ in 0..2 {
            for b in basis {
                let p = dot(b, &e);
                for (x, y) in e.iter_mut().zip(b) {
                    *x -= p.clone() * y;
                }
            }
        }
        let norm = dot(&e, &e).sqrt();
        if best.as_ref().map_or(true, |(bn, _)| norm > *bn) {
            best = Some((norm, e));
        }
    }
    let (norm, e) = best.expect("n > 0");
    let inv = norm.one_like() / norm;
    e.into_iter().map(|x| x * &inv).collect()
}
