use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::poly::IntPoly;
use crate::error::{Error, Result};

/// A ratio of integer polynomials in lowest terms.
///
/// Normal form: `gcd(num, den) = 1` over the rationals, the integer gcd of
/// all coefficients of `num` and `den` together is 1, and `den` has a
/// positive leading coefficient. Equal functions have equal normal forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RationalFn {
    num: IntPoly,
    den: IntPoly,
}

impl RationalFn {
    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    /// Value at a rational point; `ZeroDenominator` at a pole.
    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.eval_rational(x);
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.eval_rational(x) / d)
    }

    /// All poles simple, i.e. the reduced denominator is square-free.
    pub fn poles_simple(&self) -> bool {
        self.den.is_square_free().expect("denominator is nonzero")
    }
}

/// Reduce `num / den` to the normal form of [`RationalFn`].
pub fn reduce_rational_function(num: &IntPoly, den: &IntPoly) -> Result<RationalFn> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok(RationalFn {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        });
    }
    let g = num.gcd(den);
    let mut n = num.div_exact(&g).expect("primitive gcd divides");
    let mut d = den.div_exact(&g).expect("primitive gcd divides");
    let content: BigInt = n.content().gcd(&d.content());
    let sign = if d.leading().is_some_and(Signed::is_negative) {
        -BigInt::from(1)
    } else {
        BigInt::from(1)
    };
    let k = &content * &sign;
    n = IntPoly::new(n.coeffs().iter().map(|c| c / &k).collect());
    d = IntPoly::new(d.coeffs().iter().map(|c| c / &k).collect());
    Ok(RationalFn { num: n, den: d })
}
