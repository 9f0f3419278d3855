//! Integer and rational dense linear algebra.
//!
//! Small exact kernels used throughout the crate: Hermite and Smith normal
//! forms with transformation matrices, fraction-free determinants, ranks,
//! saturated integer kernels, and rational Gauss-Jordan inversion. Matrices
//! here are at most 20x20 (plus tall generator stacks), so the plain
//! elementary-operation algorithms are entirely adequate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

/// Dense matrix over the arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq)]
pub struct IMat {
    rows: usize,
    cols: usize,
    a: Vec<BigInt>,
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat {
            rows,
            cols,
            a: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = IMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IMat::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IMat {
        IMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &IMat) -> IMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let lik = &self[(i, k)];
                if lik.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = lik * &rhs[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| i64::try_from(&self[(i, j)]).ok())
                    .collect()
            })
            .collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.a.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.rows {
            self.a.swap(k * self.cols + i, k * self.cols + j);
        }
    }

    /// row[i] += q * row[j]
    fn add_row_mul(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for k in 0..self.cols {
            let t = q * &self[(j, k)];
            self[(i, k)] += t;
        }
    }

    /// col[i] += q * col[j]
    fn add_col_mul(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for k in 0..self.rows {
            let t = q * &self[(k, j)];
            self[(k, i)] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            let t = -self[(i, k)].clone();
            self[(i, k)] = t;
        }
    }

    /// Row-style Hermite normal form; zero rows are dropped, so the result's
    /// rows are a basis of the lattice generated by the input rows.
    pub fn hnf(&self) -> IMat {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivot_row = 0;
        for col in 0..cols {
            if pivot_row == rows {
                break;
            }
            // Euclidean reduction of the column below pivot_row.
            loop {
                let mut best: Option<usize> = None;
                for r in pivot_row..rows {
                    if !m[(r, col)].is_zero() {
                        let better = match best {
                            None => true,
                            Some(b) => m[(r, col)].abs() < m[(b, col)].abs(),
                        };
                        if better {
                            best = Some(r);
                        }
                    }
                }
                let Some(b) = best else { break };
                m.swap_rows(pivot_row, b);
                if m[(pivot_row, col)].is_negative() {
                    m.negate_row(pivot_row);
                }
                let mut done = true;
                for r in pivot_row + 1..rows {
                    if !m[(r, col)].is_zero() {
                        let q = -(&m[(r, col)] / &m[(pivot_row, col)]);
                        m.add_row_mul(r, pivot_row, &q);
                        if !m[(r, col)].is_zero() {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if m[(pivot_row, col)].is_zero() {
                continue;
            }
            // Reduce entries above the pivot to the canonical range [0, pivot).
            for r in 0..pivot_row {
                let q = -m[(r, col)].div_floor(&m[(pivot_row, col)]);
                m.add_row_mul(r, pivot_row, &q);
            }
            pivot_row += 1;
        }
        let mut out = IMat::zeros(pivot_row, cols);
        for i in 0..pivot_row {
            for j in 0..cols {
                out[(i, j)] = m[(i, j)].clone();
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.hnf().rows
    }

    /// Determinant by the Bareiss fraction-free algorithm.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[(r, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Smith normal form: unimodular `u`, `v` with `u * self * v = d` and `d`
    /// diagonal with a divisibility chain of nonnegative entries.
    pub fn snf(&self) -> Snf {
        let mut d = self.clone();
        let mut u = IMat::identity(self.rows);
        let mut v = IMat::identity(self.cols);
        let n = self.rows.min(self.cols);

        for t in 0..n {
            // Move a minimal-magnitude nonzero entry of the remaining block
            // to (t, t), then clear its row and column.
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..d.rows {
                    for j in t..d.cols {
                        if !d[(i, j)].is_zero() {
                            let better = match best {
                                None => true,
                                Some(b) => d[(i, j)].abs() < d[b].abs(),
                            };
                            if better {
                                best = Some((i, j));
                            }
                        }
                    }
                }
                let Some((bi, bj)) = best else { break };
                d.swap_rows(t, bi);
                u.swap_rows(t, bi);
                d.swap_cols(t, bj);
                v.swap_cols(t, bj);
                let mut clean = true;
                for i in t + 1..d.rows {
                    if !d[(i, t)].is_zero() {
                        let q = -(&d[(i, t)] / &d[(t, t)]);
                        d.add_row_mul(i, t, &q);
                        u.add_row_mul(i, t, &q);
                        if !d[(i, t)].is_zero() {
                            clean = false;
                        }
                    }
                }
                for j in t + 1..d.cols {
                    if !d[(t, j)].is_zero() {
                        let q = -(&d[(t, j)] / &d[(t, t)]);
                        d.add_col_mul(j, t, &q);
                        v.add_col_mul(j, t, &q);
                        if !d[(t, j)].is_zero() {
                            clean = false;
                        }
                    }
                }
                if clean {
                    break;
                }
            }
            if d[(t, t)].is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
        }

        // Enforce the divisibility chain d[t] | d[t+1].
        loop {
            let mut fixed = true;
            for t in 0..n.saturating_sub(1) {
                let (a, b) = (d[(t, t)].clone(), d[(t + 1, t + 1)].clone());
                if a.is_zero() && !b.is_zero() {
                    d.swap_rows(t, t + 1);
                    u.swap_rows(t, t + 1);
                    d.swap_cols(t, t + 1);
                    v.swap_cols(t, t + 1);
                    fixed = false;
                } else if !a.is_zero() && !(&b % &a).is_zero() {
                    // Standard 2x2 gcd step: add column t+1 to column t, then
                    // re-diagonalize the 2x2 block by row/col reduction.
                    d.add_col_mul(t, t + 1, &BigInt::one());
                    v.add_col_mul(t, t + 1, &BigInt::one());
                    loop {
                        if d[(t + 1, t)].is_zero() {
                            break;
                        }
                        let q = -(&d[(t, t)] / &d[(t + 1, t)]);
                        // Reduce (t,t) modulo (t+1,t) via row ops, then swap.
                        d.add_row_mul(t, t + 1, &q);
                        u.add_row_mul(t, t + 1, &q);
                        d.swap_rows(t, t + 1);
                        u.swap_rows(t, t + 1);
                    }
                    // Clear the fill-in at (t, t+1).
                    let q = -(&d[(t, t + 1)] / &d[(t, t)]);
                    d.add_col_mul(t + 1, t, &q);
                    v.add_col_mul(t + 1, t, &q);
                    if d[(t, t)].is_negative() {
                        d.negate_row(t);
                        u.negate_row(t);
                    }
                    if d[(t + 1, t + 1)].is_negative() {
                        d.negate_row(t + 1);
                        u.negate_row(t + 1);
                    }
                    fixed = false;
                }
            }
            if fixed {
                break;
            }
        }

        Snf { u, d, v }
    }

    /// Elementary divisors (nonzero diagonal of the Smith form).
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        let snf = self.snf();
        let n = self.rows.min(self.cols);
        (0..n)
            .map(|t| snf.d[(t, t)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    /// Rows spanning the saturated integer kernel `{x : self * x^T = 0}`.
    pub fn kernel_rows(&self) -> IMat {
        let snf = self.snf();
        let r = (0..self.rows.min(self.cols))
            .filter(|&t| !snf.d[(t, t)].is_zero())
            .count();
        // Kernel = span of the columns of v with zero diagonal entry.
        IMat::from_fn(self.cols - r, self.cols, |i, j| snf.v[(j, r + i)].clone())
    }

    /// Solves `lambda * self = target` over the integers, if possible.
    pub fn solve_row(&self, target: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(target.len(), self.cols);
        let snf = self.snf();
        // lambda * a = e  with  u a v = d  becomes  mu * d = e * v,
        // mu = lambda * u^{-1}.
        let f = {
            let mut f = vec![BigInt::zero(); self.cols];
            for (j, fj) in f.iter_mut().enumerate() {
                *fj = (0..self.cols).map(|k| &target[k] * &snf.v[(k, j)]).sum();
            }
            f
        };
        let mut mu = vec![BigInt::zero(); self.rows];
        for j in 0..self.cols {
            let dj = if j < self.rows {
                snf.d[(j, j)].clone()
            } else {
                BigInt::zero()
            };
            if dj.is_zero() {
                if !f[j].is_zero() {
                    return None;
                }
            } else {
                if !(&f[j] % &dj).is_zero() {
                    return None;
                }
                mu[j] = &f[j] / &dj;
            }
        }
        // lambda = mu * u
        let mut lambda = vec![BigInt::zero(); self.rows];
        for (j, lj) in lambda.iter_mut().enumerate() {
            *lj = (0..self.rows).map(|k| &mu[k] * &snf.u[(k, j)]).sum();
        }
        Some(lambda)
    }

    /// Inverse of a matrix with determinant +-1, via rational elimination.
    pub fn inverse_unimodular(&self) -> Option<IMat> {
        RMat::from_imat(self).inverse()?.to_imat()
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.a[i * self.cols + j]
    }
}

impl std::fmt::Debug for IMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Result of `IMat::snf`: `u * a * v = d`.
pub struct Snf {
    pub u: IMat,
    pub d: IMat,
    pub v: IMat,
}

/// Dense matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RMat {
    rows: usize,
    cols: usize,
    a: Vec<Rational>,
}

impl RMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMat {
            rows,
            cols,
            a: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = RMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_imat(m: &IMat) -> Self {
        RMat::from_fn(m.rows(), m.cols(), |i, j| {
            Rational::from_bigint(m[(i, j)].clone())
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, rhs: &RMat) -> RMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = RMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &t;
                }
            }
        }
        out
    }

    /// Gauss-Jordan inverse; `None` for singular input.
    pub fn inverse(&self) -> Option<RMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = RMat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero())?;
            for k in 0..n {
                m.a.swap(col * n + k, pivot * n + k);
                inv.a.swap(col * n + k, pivot * n + k);
            }
            let p = m[(col, col)].clone();
            for k in 0..n {
                m[(col, k)] = &m[(col, k)] / &p;
                inv[(col, k)] = &inv[(col, k)] / &p;
            }
            for r in 0..n {
                if r == col || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for k in 0..n {
                    let t = &factor * &m[(col, k)];
                    m[(r, k)] = &m[(r, k)] - &t;
                    let t = &factor * &inv[(col, k)];
                    inv[(r, k)] = &inv[(r, k)] - &t;
                }
            }
        }
        Some(inv)
    }

    /// Converts to an integer matrix if every entry has denominator 1.
    pub fn to_imat(&self) -> Option<IMat> {
        let mut out = IMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].to_integer()?;
            }
        }
        Some(out)
    }
}

impl std::ops::Index<(usize, usize)> for RMat {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.a[i * self.cols + j]
    }
}
