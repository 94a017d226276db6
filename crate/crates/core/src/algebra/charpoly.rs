//! Division-free characteristic polynomial (Berkowitz).
//!
//! For the leading block `A_k` and the next row/column `R, S` of `A`, the
//! characteristic polynomial of `A_{k+1}` is a lower-triangular Toeplitz
//! matrix with first column `1, -a_kk, -R S, -R A_k S, ..., -R A_k^{k-1} S`
//! applied to the coefficient vector of `A_k`. Only ring operations are
//! used, so every intermediate is an exact integer.

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::IntPoly;
use crate::graph::Graph;

/// Integer type with overflow-aware arithmetic.
trait Ring: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
}

impl Ring for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
}

/// Coefficients of `det(tI - A)` in descending degree, or `None` on overflow.
fn berkowitz<T: Ring>(g: &Graph) -> Option<Vec<T>> {
    let n = g.n();
    let lower: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).filter(|&w| w < v).collect()).collect();
    let mut c: Vec<T> = vec![T::one()];
    for k in 0..n {
        // Toeplitz column: 1, -a_kk (= 0, no loops), then -R A_k^j S.
        let mut col: Vec<T> = Vec::with_capacity(k + 2);
        col.push(T::one());
        col.push(T::zero());
        let mut v: Vec<T> = vec![T::zero(); k];
        for &w in &lower[k] {
            v[w] = T::one();
        }
        for j in 0..k {
            let mut rv = T::zero();
            for &w in &lower[k] {
                rv = rv.add(&v[w])?;
            }
            col.push(rv.neg()?);
            if j + 1 < k {
                let mut next = vec![T::zero(); k];
                for (i, slot) in next.iter_mut().enumerate() {
                    let mut s = T::zero();
                    for w in g.neighbors(i).take_while(|&w| w < k) {
                        s = s.add(&v[w])?;
                    }
                    *slot = s;
                }
                v = next;
            }
        }
        let mut next = Vec::with_capacity(k + 2);
        for i in 0..k + 2 {
            let mut s = T::zero();
            for (j, cj) in c.iter().enumerate().take(i.min(k) + 1) {
                if i - j < col.len() {
                    s = s.add(&col[i - j].mul(cj)?)?;
                }
            }
            next.push(s);
        }
        c = next;
    }
    Some(c)
}

/// `det(tI - A)` for the adjacency matrix of `g`.
pub fn char_poly(g: &Graph) -> IntPoly {
    let desc: Vec<BigInt> = match berkowitz::<i128>(g) {
        Some(c) => c.into_iter().map(BigInt::from).collect(),
        None => berkowitz::<BigInt>(g).expect("big integers do not overflow"),
    };
    IntPoly::new(desc.into_iter().rev().collect())
}

#[cfg(test)]
pub(crate) fn char_poly_bigint(g: &Graph) -> IntPoly {
    IntPoly::new(berkowitz::<BigInt>(g).expect("no overflow").into_iter().rev().collect())
}
