use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::{BaseField, BaseFieldKind, Field, FieldError};

/// The rational numbers with arbitrary-precision, always-reduced fractions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

impl BaseField for Rationals {
    fn kind(&self) -> BaseFieldKind {
        BaseFieldKind::Rationals
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<BigRational, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R, window: u64) -> BigRational {
        let w = window.max(1) as i64;
        self.from_i64(rng.gen_range(-w..=w))
    }

    fn to_u64(&self, _a: &BigRational) -> Option<u64> {
        None
    }

    fn is_irreducible(&self, m: &[BigRational]) -> Result<bool, FieldError> {
        super::upoly::is_irreducible_q(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_stay_reduced() {
        let q = Rationals;
        let a = q.parse_elem("2/4").unwrap();
        assert_eq!(q.format(&a), "1/2");
        let b = q.parse_elem("-3").unwrap();
        assert_eq!(q.format(&q.mul(&a, &b)), "-3/2");
    }
}
