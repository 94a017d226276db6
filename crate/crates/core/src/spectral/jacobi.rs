//! Cyclic Jacobi eigensolver for dense symmetric matrices.
//!
//! Each rotation in the `(p, q)` plane annihilates `a_pq`. Sweeps visit the
//! pairs in a fixed order, so the output depends only on the input bits.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (unsorted) and the matrix whose columns are the matching
/// orthonormal eigenvectors.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let mut m = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.norm().max(1.0);
    let target = 1e-15 * scale;
    for _sweep in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&m);
        if off <= target {
            return Ok(((0..n).map(|i| m[(i, i)]).collect(), v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let off = off_diagonal_norm(&m);
    if off <= target {
        return Ok(((0..n).map(|i| m[(i, i)]).collect(), v));
    }
    Err(Error::ConvergenceFailure {
        sweeps: MAX_SWEEPS,
        off_norm: off,
    })
}

fn off_diagonal_norm(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)] * m[(i, j)];
            }
        }
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_random_symmetric() {
        let n = 9;
        let a = DMatrix::from_fn(n, n, |i, j| ((i * 7 + j * 7 + i * j) % 5) as f64 - 2.0);
        let vals = symmetric_eigen(&a).unwrap();
        let (lam, v) = vals;
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(lam));
        let rec = &v * d * v.transpose();
        assert!((rec - &a).norm() < 1e-12);
        assert!((v.transpose() * &v - DMatrix::identity(n, n)).norm() < 1e-12);
    }

    #[test]
    fn deterministic() {
        let a = DMatrix::from_fn(6, 6, |i, j| if (i as i64 - j as i64).abs() == 1 { 1.0 } else { 0.0 });
        let (l1, v1) = symmetric_eigen(&a).unwrap();
        let (l2, v2) = symmetric_eigen(&a).unwrap();
        assert_eq!(l1, l2);
        assert_eq!(v1, v2);
    }
}
