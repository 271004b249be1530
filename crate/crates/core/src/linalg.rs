//! Small dense linear algebra over [`PScalar`].

use std::ops::{Index, IndexMut};

use crate::precision::{PScalar, PrecisionLevel};

/// 3-vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Vec3(pub [PScalar; 3]);

impl Vec3 {
    pub fn zero(level: PrecisionLevel) -> Self {
        Vec3([PScalar::zero(level), PScalar::zero(level), PScalar::zero(level)])
    }

    pub fn new(x: PScalar, y: PScalar, z: PScalar) -> Self {
        Vec3([x, y, z])
    }

    pub fn level(&self) -> PrecisionLevel {
        self.0[0].level()
    }

    pub fn add(&self, o: &Vec3) -> Vec3 {
        Vec3([&self.0[0] + &o.0[0], &self.0[1] + &o.0[1], &self.0[2] + &o.0[2]])
    }

    pub fn sub(&self, o: &Vec3) -> Vec3 {
        Vec3([&self.0[0] - &o.0[0], &self.0[1] - &o.0[1], &self.0[2] - &o.0[2]])
    }

    pub fn scale(&self, s: &PScalar) -> Vec3 {
        Vec3([&self.0[0] * s, &self.0[1] * s, &self.0[2] * s])
    }

    pub fn neg(&self) -> Vec3 {
        Vec3([-&self.0[0], -&self.0[1], -&self.0[2]])
    }

    pub fn dot(&self, o: &Vec3) -> PScalar {
        &self.0[0] * &o.0[0] + &self.0[1] * &o.0[1] + &self.0[2] * &o.0[2]
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &o.0;
        Vec3([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
    }

    pub fn norm(&self) -> PScalar {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> PScalar {
        self.0[0].abs().max(self.0[1].abs()).max(self.0[2].abs())
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.0[0].to_f64(), self.0[1].to_f64(), self.0[2].to_f64()]
    }
}

/// 3×3 matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat3(pub [[PScalar; 3]; 3]);

impl Mat3 {
    pub fn identity(level: PrecisionLevel) -> Self {
        let z = || PScalar::zero(level);
        let o = || PScalar::one(level);
        Mat3([[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]])
    }

    pub fn zero(level: PrecisionLevel) -> Self {
        let z = || PScalar::zero(level);
        Mat3([[z(), z(), z()], [z(), z(), z()], [z(), z(), z()]])
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> PScalar) -> Self {
        Mat3([
            [f(0, 0), f(0, 1), f(0, 2)],
            [f(1, 0), f(1, 1), f(1, 2)],
            [f(2, 0), f(2, 1), f(2, 2)],
        ])
    }

    pub fn mul(&self, o: &Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| &self.0[i][0] * &o.0[0][j] + &self.0[i][1] * &o.0[1][j] + &self.0[i][2] * &o.0[2][j])
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        let r = |i: usize| &self.0[i][0] * &v.0[0] + &self.0[i][1] * &v.0[1] + &self.0[i][2] * &v.0[2];
        Vec3([r(0), r(1), r(2)])
    }

    pub fn transpose(&self) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn add(&self, o: &Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| &self.0[i][j] + &o.0[i][j])
    }

    pub fn scale(&self, s: &PScalar) -> Mat3 {
        Mat3::from_fn(|i, j| &self.0[i][j] * s)
    }

    /// Rotation by `angle` about the unit axis `a` (Rodrigues).
    pub fn rotation(a: &Vec3, angle: &PScalar) -> Mat3 {
        let s = angle.sin();
        let c1 = angle.one_like() - angle.cos();
        let k = Mat3::skew(a);
        let k2 = k.mul(&k);
        Mat3::identity(angle.level()).add(&k.scale(&s)).add(&k2.scale(&c1))
    }

    pub fn skew(a: &Vec3) -> Mat3 {
        let z = a.0[0].zero_like();
        let [x, y, w] = &a.0;
        Mat3([
            [z.clone(), -w, y.clone()],
            [w.clone(), z.clone(), -x],
            [-y, x.clone(), z],
        ])
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3([self.0[0][j].clone(), self.0[1][j].clone(), self.0[2][j].clone()])
    }

    /// max |(MᵀM − I)_ij|
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.transpose().mul(self);
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g.0[i][j].to_f64() - target).abs());
            }
        }
        worst
    }

    pub fn det(&self) -> PScalar {
        let m = &self.0;
        &m[0][0] * &(&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * &(&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * &(&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<PScalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, level: PrecisionLevel) -> Self {
        Matrix { rows, cols, data: vec![PScalar::zero(level); rows * cols] }
    }

    pub fn identity(n: usize, level: PrecisionLevel) -> Self {
        let mut m = Self::zeros(n, n, level);
        for i in 0..n {
            m[(i, i)] = PScalar::one(level);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> PScalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_f64(rows: usize, cols: usize, vals: &[f64], level: PrecisionLevel) -> Self {
        assert_eq!(vals.len(), rows * cols);
        Self::from_fn(rows, cols, |i, j| PScalar::from_f64(vals[i * cols + j], level))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn level(&self) -> Option<PrecisionLevel> {
        self.data.first().map(PScalar::level)
    }

    pub fn row(&self, i: usize) -> &[PScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<PScalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in matrix product");
        Matrix::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = self[(i, 0)].zero_like();
            for k in 0..self.cols {
                acc += &self[(i, k)] * &o[(k, j)];
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[PScalar]) -> Vec<PScalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc += a * b;
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &o[(i, j)])
    }

    /// Rows selected by index, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    /// Stacks row blocks vertically.
    pub fn vstack(blocks: &[Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Matrix { rows, cols, data }
    }

    /// max_ij |a_ij|
    pub fn max_abs(&self) -> PScalar {
        let mut m = self.data[0].abs();
        for v in &self.data[1..] {
            let a = v.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// Induced ∞-norm (max absolute row sum).
    pub fn norm_inf(&self) -> PScalar {
        let mut best = self.data[0].zero_like();
        for i in 0..self.rows {
            let mut s = best.zero_like();
            for v in self.row(i) {
                s += v.abs();
            }
            if s > best {
                best = s;
            }
        }
        best
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(PScalar::to_f64).collect()).collect()
    }

    pub fn convert(&self, level: PrecisionLevel) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v.convert(level)).collect() }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = PScalar;
    fn index(&self, (i, j): (usize, usize)) -> &PScalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut PScalar {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting of a square matrix.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Returns `None` when a pivot is exactly zero.
    pub fn new(a: &Matrix) -> Option<Lu> {
        assert_eq!(a.rows, a.cols, "LU needs a square matrix");
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].abs();
            for i in k + 1..n {
                let v = lu[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best.is_zero() {
                return None;
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)].clone();
            for i in k + 1..n {
                let f = &lu[(i, k)] / &pivot;
                for j in k + 1..n {
                    let t = &f * &lu[(k, j)];
                    lu[(i, j)] -= t;
                }
                lu[(i, k)] = f;
            }
        }
        Some(Lu { lu, perm })
    }

    pub fn solve(&self, b: &[PScalar]) -> Vec<PScalar> {
        let n = self.lu.rows;
        let mut x: Vec<PScalar> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for i in 0..n {
            for j in 0..i {
                let t = &self.lu[(i, j)] * &x[j];
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = &self.lu[(i, j)] * &x[j];
                x[i] -= t;
            }
            x[i] = &x[i] / &self.lu[(i, i)];
        }
        x
    }

    /// Solves for every column of `b`.
    pub fn solve_matrix(&self, b: &Matrix) -> Matrix {
        let n = self.lu.rows;
        let mut out = Matrix::zeros(n, b.cols, b.data[0].level());
        for j in 0..b.cols {
            let x = self.solve(&b.col(j));
            for (i, v) in x.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }

    pub fn inverse(&self) -> Matrix {
        let n = self.lu.rows;
        self.solve_matrix(&Matrix::identity(n, self.lu.data[0].level()))
    }
}

/// ∞-norm condition number via an explicit inverse; `None` if singular.
pub fn condition_inf(a: &Matrix) -> Option<PScalar> {
    let lu = Lu::new(a)?;
    Some(a.norm_inf() * lu.inverse().norm_inf())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_and_inverts() {
        let lvl = PrecisionLevel::Decimal(30);
        let a = Matrix::from_f64(3, 3, &[0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0], lvl);
        let lu = Lu::new(&a).unwrap();
        let x = lu.solve(&[PScalar::from_int(3, lvl), PScalar::from_int(2, lvl), PScalar::from_int(4, lvl)]);
        let back = a.mul_vec(&x);
        assert!((back[0].clone() - PScalar::from_int(3, lvl)).abs() < lvl.tol_scalar(3));
        let id = a.mul(&lu.inverse());
        assert!(id.sub(&Matrix::identity(3, lvl)).max_abs() < lvl.tol_scalar(3));
        assert!(Lu::new(&Matrix::zeros(2, 2, lvl)).is_none());
    }

    #[test]
    fn rodrigues_is_orthonormal() {
        let lvl = PrecisionLevel::DoubleNative;
        let s = PScalar::from_f64(1.0 / 3f64.sqrt(), lvl);
        let axis = Vec3::new(s.clone(), s.clone(), s);
        let r = Mat3::rotation(&axis, &PScalar::from_f64(0.7, lvl));
        assert!(r.orthonormality_defect() < 1e-15);
        assert!((r.det().to_f64() - 1.0).abs() < 1e-15);
        let v = r.mul_vec(&axis);
        assert!(v.sub(&axis).max_abs().to_f64() < 1e-15);
    }
}
