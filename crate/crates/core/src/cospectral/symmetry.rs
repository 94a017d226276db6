use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::analyzer::apply_poly_to_vertex;
use crate::algebra::{fraction_free_gauss_jordan, rational_adjacency, BigRationalMatrix, RatPoly};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::krylov_columns;

/// `[e_a, Ae_a, …, A^{s-1}e_a | I_n]` after fraction-free Gauss–Jordan, so
/// that the coordinates of every `e_b` in the Krylov basis can be read off
/// one column at a time.
#[derive(Debug, Clone)]
pub(crate) struct KrylovSolve {
    s: usize,
    aug: Vec<Vec<BigInt>>,
    pivot: BigInt,
}

impl KrylovSolve {
    pub(crate) fn new(g: &Graph, a: usize, s: usize) -> Result<KrylovSolve> {
        let n = g.n();
        let mut e = vec![BigInt::zero(); n];
        e[a] = BigInt::one();
        let cols = krylov_columns(g, &e, s);
        let mut aug: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigInt> = cols.iter().map(|c| c[i].clone()).collect();
                row.extend((0..n).map(|j| BigInt::from((i == j) as u8)));
                row
            })
            .collect();
        let ech = fraction_free_gauss_jordan(&mut aug, s);
        if ech.pivots.len() != s || ech.pivots.iter().enumerate().any(|(j, &(r, c))| r != j || c != j) {
            return Err(Error::InvariantViolation(format!(
                "walk matrix of {a} has rank {} but support size {s}",
                ech.pivots.len()
            )));
        }
        Ok(KrylovSolve {
            s,
            aug,
            pivot: ech.pivot_value,
        })
    }

    /// Numerators `c` with `Σ_j (c_j / pivot) A^j e_a = e_b`, or `None` if
    /// `e_b` is outside the walk module of `a`.
    pub(crate) fn solve_integer(&self, b: usize) -> Option<Vec<BigInt>> {
        let col = self.s + b;
        if self.aug[self.s..].iter().any(|row| !row[col].is_zero()) {
            return None;
        }
        Some((0..self.s).map(|j| self.aug[j][col].clone()).collect())
    }

    pub(crate) fn pivot(&self) -> &BigInt {
        &self.pivot
    }
}

/// `Q = p(A)` with `Q² = I` and `Qe_a = e_b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryMatrix {
    pub a: usize,
    pub b: usize,
    poly: RatPoly,
    /// True when the minimal-degree solution had to be adjusted off the
    /// support of `a` to make `p² ≡ 1 (mod ψ)`.
    pub lifted: bool,
}

/// Outcome of the exact identities for `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SymmetryCheck {
    pub involution: bool,
    pub commutes: bool,
    pub maps_a_to_b: bool,
    pub symmetric: bool,
}

impl SymmetryCheck {
    pub fn all(&self) -> bool {
        self.involution && self.commutes && self.maps_a_to_b && self.symmetric
    }
}

impl SymmetryMatrix {
    pub(crate) fn new(a: usize, b: usize, poly: RatPoly, lifted: bool) -> SymmetryMatrix {
        SymmetryMatrix { a, b, poly, lifted }
    }

    pub fn poly(&self) -> &RatPoly {
        &self.poly
    }

    pub fn matrix(&self, g: &Graph) -> Result<BigRationalMatrix> {
        self.poly.eval_matrix(&rational_adjacency(g))
    }

    /// `p(A)e_a` without forming `p(A)`.
    pub fn image_of_a(&self, g: &Graph) -> Vec<BigRational> {
        apply_poly_to_vertex(g, &self.poly, self.a)
    }

    pub fn verify(&self, g: &Graph) -> Result<SymmetryCheck> {
        let n = g.n();
        let a = rational_adjacency(g);
        let q = self.poly.eval_matrix(&a)?;
        let id = BigRationalMatrix::identity(n);
        let eb: Vec<BigRational> = (0..n)
            .map(|i| BigRational::from_integer(BigInt::from((i == self.b) as u8)))
            .collect();
        Ok(SymmetryCheck {
            involution: &q * &q == id,
            commutes: &q * &a == &a * &q,
            maps_a_to_b: q.column(self.a) == eb,
            symmetric: q.is_symmetric(),
        })
    }
}
