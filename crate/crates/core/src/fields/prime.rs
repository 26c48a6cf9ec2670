use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::{BaseField, BaseFieldKind, Field, FieldError};

/// The prime field `F_p` for a prime `p < 2^31`, elements in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    fn reduce_big(&self, n: &BigInt) -> u32 {
        let p = BigInt::from(self.p);
        n.mod_floor(&p).to_u32().unwrap()
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (*a as u64 + self.p as u64 - *b as u64) as u32
        }
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i64) as u32)
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
    #[inline]
    fn sub_mul(&self, a: &u32, b: &u32, c: &u32) -> u32 {
        let p = self.p as u64;
        let prod = (*b as u64 * *c as u64) % p;
        ((*a as u64 + p - prod) % p) as u32
    }
}

impl BaseField for PrimeField {
    fn kind(&self) -> BaseFieldKind {
        BaseFieldKind::Prime(self.p)
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<u32, FieldError> {
        let d = self.reduce_big(den);
        let di = self.inv(&d).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(&self.reduce_big(num), &di))
    }

    fn order(&self) -> Option<u64> {
        Some(self.p as u64)
    }

    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.p).collect())
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R, _window: u64) -> u32 {
        rng.gen_range(0..self.p)
    }

    fn to_u64(&self, a: &u32) -> Option<u64> {
        Some(*a as u64)
    }

    fn is_irreducible(&self, m: &[u32]) -> Result<bool, FieldError> {
        Ok(super::upoly::is_irreducible_fp(self, m))
    }
}
