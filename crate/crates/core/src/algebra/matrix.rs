use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Result of fraction-free Gauss–Jordan elimination.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// `(row, column)` of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
    /// Common value of every pivot entry after elimination (1 if there are none).
    pub pivot_value: BigInt,
}

/// Fraction-free Gauss–Jordan elimination in place.
///
/// Only columns `< pivot_cols` may hold pivots; all columns are updated, so
/// trailing columns act as right-hand sides. After the call each pivot
/// column is zero except for its pivot, and all pivots share the value
/// `pivot_value`. Rows past the last pivot are zero in the pivot region.
pub fn fraction_free_gauss_jordan(m: &mut [Vec<BigInt>], pivot_cols: usize) -> Echelon {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols.min(cols) {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let piv = m[r][c].clone();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m[i][c].clone();
            for j in 0..cols {
                if j == c {
                    continue;
                }
                let num = &piv * &m[i][j] - &factor * &m[r][j];
                debug_assert!(num.is_multiple_of(&prev));
                m[i][j] = num / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = piv;
        pivots.push((r, c));
        r += 1;
    }
    Echelon {
        pivots,
        pivot_value: prev,
    }
}

/// Exact rank of an integer matrix.
pub fn int_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    fraction_free_gauss_jordan(&mut m, cols).pivots.len()
}

/// Dense matrix of arbitrary-precision rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigRationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl BigRationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BigRationalMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        BigRationalMatrix { rows, cols, data }
    }

    pub fn from_integers(rows: &[Vec<BigInt>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_fn(rows.len(), cols, |i, j| BigRational::from_integer(rows[i][j].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        BigRationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| !self[(i, j)].is_zero())
                    .fold(BigRational::zero(), |acc, j| acc + &self[(i, j)] * &v[j])
            })
            .collect())
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Determinant by Gaussian elimination over the rationals.
    pub fn determinant(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = BigRational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Ok(BigRational::zero());
            };
            if p != k {
                m.swap_rows(p, k);
                det = -det;
            }
            let piv = m[(k, k)].clone();
            det *= &piv;
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = &m[(i, k)] / &piv;
                for j in k..n {
                    let v = &m[(k, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss–Jordan over the rationals; `None` if singular.
    pub fn inverse(&self) -> Result<Option<Self>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Ok(None);
            };
            m.swap_rows(p, k);
            inv.swap_rows(p, k);
            let piv = m[(k, k)].clone();
            for j in 0..n {
                m[(k, j)] /= &piv;
                inv[(k, j)] /= &piv;
            }
            for i in 0..n {
                if i == k || m[(i, k)].is_zero() {
                    continue;
                }
                let f = m[(i, k)].clone();
                for j in 0..n {
                    let a = &m[(k, j)] * &f;
                    m[(i, j)] -= a;
                    let b = &inv[(k, j)] * &f;
                    inv[(i, j)] -= b;
                }
            }
        }
        Ok(Some(inv))
    }

    /// Principal submatrix on `idx`.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for BigRationalMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for BigRationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &BigRationalMatrix {
    type Output = BigRationalMatrix;
    fn mul(self, rhs: &BigRationalMatrix) -> BigRationalMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimensions");
        let mut out = BigRationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    if !rhs[(k, j)].is_zero() {
                        out[(i, j)] += a * &rhs[(k, j)];
                    }
                }
            }
        }
        out
    }
}

impl Add for &BigRationalMatrix {
    type Output = BigRationalMatrix;
    fn add(self, rhs: &BigRationalMatrix) -> BigRationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum dimensions");
        BigRationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &BigRationalMatrix {
    type Output = BigRationalMatrix;
    fn sub(self, rhs: &BigRationalMatrix) -> BigRationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference dimensions");
        BigRationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Solve `M x = b` exactly. Returns `None` when the system is inconsistent;
/// free variables are set to zero. The solution is verified before return.
pub fn solve_rational_system(m: &BigRationalMatrix, b: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            found: b.len(),
        });
    }
    // Clear denominators row by row to get an integer augmented system.
    let mut aug: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let row: Vec<&BigRational> = (0..m.cols).map(|j| &m[(i, j)]).chain([&b[i]]).collect();
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| (*x * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let ech = fraction_free_gauss_jordan(&mut aug, m.cols);
    let rank = ech.pivots.len();
    if aug[rank..].iter().any(|row| !row[m.cols].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); m.cols];
    for &(r, c) in &ech.pivots {
        x[c] = BigRational::new(aug[r][m.cols].clone(), ech.pivot_value.clone());
    }
    if m.mul_vec(&x)? != b {
        return Err(Error::InvariantViolation("exact solve failed verification".into()));
    }
    Ok(Some(x))
}
