//! Exact arithmetic: integer and rational polynomials, reduced rational
//! functions, rational matrices, characteristic and minimal polynomials.

mod charpoly;
mod matrix;
mod poly;
mod qpoly;
mod ratfn;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

pub use charpoly::char_poly;
pub use matrix::{bareiss_determinant, fraction_free_gauss_jordan, int_rank, solve_rational_system, BigRationalMatrix, Echelon};
pub use poly::IntPoly;
pub use qpoly::{ratpoly_from_i64s, RatPoly};
pub use ratfn::{reduce_rational_function, RationalFn};

use crate::error::Result;
use crate::graph::Graph;

/// `p / gcd(p, p')`, primitive with positive leading coefficient.
pub fn square_free_part(p: &IntPoly) -> Result<IntPoly> {
    p.square_free_part()
}

/// Multiplicity of 0 as a root of `p`.
pub fn zero_multiplicity(p: &IntPoly) -> Result<usize> {
    p.zero_multiplicity()
}

/// Minimal polynomial of the adjacency matrix together with its discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalPolynomial {
    pub psi: IntPoly,
    #[serde(serialize_with = "serialize_bigint")]
    pub disc: BigInt,
}

pub(crate) fn serialize_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// For symmetric `A` the minimal polynomial is the square-free part of `φ`.
/// `ψ(A) = 0` is checked exactly before returning.
pub fn minimal_polynomial(g: &Graph) -> Result<MinimalPolynomial> {
    let phi = char_poly(g);
    minimal_polynomial_from_char_poly(g, &phi)
}

pub(crate) fn minimal_polynomial_from_char_poly(g: &Graph, phi: &IntPoly) -> Result<MinimalPolynomial> {
    let psi = phi.square_free_part()?;
    if !annihilates(&psi, g) {
        return Err(crate::Error::InvariantViolation(format!("ψ = {psi} does not annihilate A")));
    }
    let disc = psi.discriminant()?;
    Ok(MinimalPolynomial { psi, disc })
}

/// Exact check that `p(A) = 0`, via Horner on integer matrices.
pub fn annihilates(p: &IntPoly, g: &Graph) -> bool {
    let n = g.n();
    let zero = BigInt::from(0);
    let mut acc: Vec<Vec<BigInt>> = vec![vec![zero.clone(); n]; n];
    for c in p.coeffs().iter().rev() {
        // acc = acc * A + c I
        let mut next = vec![vec![zero.clone(); n]; n];
        for (i, row) in acc.iter().enumerate() {
            for j in 0..n {
                let mut s = BigInt::from(0);
                for k in g.neighbors(j) {
                    s += &row[k];
                }
                next[i][j] = s;
            }
        }
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c;
        }
        acc = next;
    }
    acc.iter().flatten().all(|x| *x == zero)
}

/// Adjacency matrix as exact rationals.
pub fn rational_adjacency(g: &Graph) -> BigRationalMatrix {
    BigRationalMatrix::from_fn(g.n(), g.n(), |i, j| {
        BigRational::from_integer(BigInt::from(g.has_edge(i, j) as u8))
    })
}
