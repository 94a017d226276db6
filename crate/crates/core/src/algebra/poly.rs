use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::matrix::bareiss_determinant;
use crate::error::{Error, Result};

/// Polynomial in `t` with arbitrary-precision integer coefficients,
/// stored in ascending degree. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> IntPoly {
        IntPoly::default()
    }

    pub fn one() -> IntPoly {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> IntPoly {
        IntPoly::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> IntPoly {
        IntPoly::from_i64s(&[0, 1])
    }

    /// `c * t^d`.
    pub fn monomial(c: BigInt, d: usize) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); d];
        coeffs.push(c);
        IntPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Remainder of `lc(d)^e * self` on division by `d`, for a suitable `e`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> Result<IntPoly> {
        let dd = d.degree().ok_or(Error::ZeroPolynomial)?;
        let lc = d.leading().expect("nonzero").clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let top = r.last().expect("nonempty").clone();
            for c in r.iter_mut() {
                *c *= &lc;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] -= &top * dc;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Ok(IntPoly::new(r))
    }

    /// `self / d` when the division is exact over the integers.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let ds = self.degree()?;
        if ds < dd {
            return None;
        }
        let lc = d.leading()?;
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); ds - dd + 1];
        for k in (0..=ds - dd).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (quot, rem) = top.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] -= &quot * dc;
            }
            q[k] = quot;
        }
        if r.iter().all(Zero::is_zero) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Greatest common divisor over the rationals, normalised to be primitive
    /// with positive leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).expect("b nonzero");
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
    }

    /// `p / gcd(p, p')`, primitive with positive leading coefficient.
    pub fn square_free_part(&self) -> Result<IntPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative());
        Ok(self
            .primitive_part()
            .div_exact(&g)
            .expect("primitive gcd divides exactly")
            .primitive_part())
    }

    pub fn is_square_free(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.gcd(&self.derivative()).degree() == Some(0))
    }

    /// Yun's square-free factorisation: primitive factors `f_k` with
    /// `pp(self) = Π f_k^k` up to sign, listed with their multiplicity `k`;
    /// constant factors are dropped.
    ///
    /// Every division is by a primitive gcd, which is exact over the integers.
    pub fn square_free_decomposition(&self) -> Result<Vec<(IntPoly, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.primitive_part();
        let exact = |p: &IntPoly, d: &IntPoly| p.div_exact(d).expect("primitive gcd divides exactly");
        let fd = f.derivative();
        let a0 = f.gcd(&fd);
        let mut b = exact(&f, &a0);
        let mut c = exact(&fd, &a0);
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut k = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            b = exact(&b, &a);
            c = exact(&d, &a);
            d = &c - &b.derivative();
            k += 1;
        }
        Ok(out)
    }

    /// Multiplicity of 0 as a root.
    pub fn zero_multiplicity(&self) -> Result<usize> {
        self.coeffs.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroPolynomial)
    }

    /// Sylvester resultant `Res(self, other)`.
    pub fn resultant(&self, other: &IntPoly) -> Result<BigInt> {
        let m = self.degree().ok_or(Error::ZeroPolynomial)?;
        let n = other.degree().ok_or(Error::ZeroPolynomial)?;
        if m == 0 {
            return Ok(num_traits::pow(self.coeffs[0].clone(), n));
        }
        if n == 0 {
            return Ok(num_traits::pow(other.coeffs[0].clone(), m));
        }
        let size = m + n;
        let mut rows = Vec::with_capacity(size);
        for (poly, deg, shifts) in [(self, m, n), (other, n, m)] {
            for s in 0..shifts {
                let mut row = vec![BigInt::zero(); size];
                for i in 0..=deg {
                    row[s + i] = poly.coeffs[deg - i].clone();
                }
                rows.push(row);
            }
        }
        Ok(bareiss_determinant(rows))
    }

    /// `(-1)^{m(m-1)/2} Res(p, p') / lc(p)`; equals `Π_{i<j} (r_i - r_j)^2` for monic `p`.
    pub fn discriminant(&self) -> Result<BigInt> {
        let m = self.degree().ok_or(Error::ZeroPolynomial)?;
        if m == 0 {
            return Ok(BigInt::one());
        }
        let res = self.resultant(&self.derivative())?;
        let lc = self.leading().expect("nonzero");
        let (q, r) = res.div_rem(lc);
        debug_assert!(r.is_zero());
        Ok(if (m * (m - 1) / 2) % 2 == 1 { -q } else { q })
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }

    /// Power sums `p_k = Σ r_i^k`, `k = 0..count`, over the roots of a monic polynomial.
    pub fn power_sums(&self, count: usize) -> Result<Vec<BigInt>> {
        let m = self.degree().ok_or(Error::ZeroPolynomial)?;
        if !self.is_monic() {
            return Err(Error::InvariantViolation("power sums need a monic polynomial".into()));
        }
        // t^m + a_{m-1} t^{m-1} + ... + a_0; Newton: p_k = -(Σ_{i=1}^{min(k-1,m)} a_{m-i} p_{k-i}) - [k<=m] k a_{m-k}.
        let a = |i: usize| &self.coeffs[m - i];
        let mut p: Vec<BigInt> = Vec::with_capacity(count);
        for k in 0..count {
            if k == 0 {
                p.push(BigInt::from(m));
                continue;
            }
            let mut s = BigInt::zero();
            for i in 1..=(k - 1).min(m) {
                s += a(i) * &p[k - i];
            }
            if k <= m {
                s += a(k) * BigInt::from(k);
            }
            p.push(-s);
        }
        Ok(p)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_decimal_strings().serialize(s)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}
