//! Exact coefficient fields.
//!
//! Everything downstream is written against the [`Field`] trait, a
//! context-style interface: elements are plain values and every operation
//! goes through a field object. Base fields (`Q`, `F_p`) additionally
//! implement [`BaseField`], and the Galois extension `k'` of a base field is
//! a [`GaloisExtension`].

mod extension;
mod prime;
mod rational;
mod table;
pub mod upoly;

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use extension::{ExtElement, GaloisExtension, SimpleExtension};
pub use prime::PrimeField;
pub use rational::Rationals;
pub use table::TableField;
pub(crate) use prime::is_prime as is_prime_u64;

/// Errors raised while building or using fields.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("modulus must be monic of degree at least 1")]
    BadModulus,
    #[error("modulus is reducible over the base field")]
    ReducibleModulus,
    #[error("irreducibility of the modulus over Q could not be decided")]
    IrreducibilityInconclusive,
    #[error("automorphism {index} does not send x to a root of the modulus")]
    AutomorphismNotARoot { index: usize },
    #[error("expected {expected} automorphisms (one per Galois group element), got {got}")]
    AutomorphismCount { expected: usize, got: usize },
    #[error("automorphism composition disagrees with the group table at ({g}, {h})")]
    CompositionTableMismatch { g: usize, h: usize },
    #[error("the fixed field of the automorphisms has dimension {0} over the base field")]
    FixedFieldTooLarge(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse field element '{0}'")]
    Parse(String),
}

/// A field, given as a context object acting on plain element values.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    /// Text form of an element (the coefficient syntax of the polynomial grammar).
    fn format(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `a - b * c`, the inner step of every elimination loop.
    fn sub_mul(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(b, c))
    }

    /// Negative elements are printed with a leading `-` (only `Q` has them).
    fn is_negative(&self, _a: &Self::Elem) -> bool {
        false
    }

    /// True when the formatted element needs parentheses inside a product.
    fn is_compound(&self, _a: &Self::Elem) -> bool {
        false
    }
}

/// Which prime field (or `Q`) a base field is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseFieldKind {
    Rationals,
    Prime(u32),
}

impl BaseFieldKind {
    pub fn characteristic(&self) -> u64 {
        match self {
            BaseFieldKind::Rationals => 0,
            BaseFieldKind::Prime(p) => *p as u64,
        }
    }

    /// Parses `Q` or `F<p>` (also accepts `QQ`, `GF(p)`, `F_p`).
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let t = s.trim();
        if t == "Q" || t == "QQ" {
            return Ok(BaseFieldKind::Rationals);
        }
        let digits = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("F_"))
            .or_else(|| t.strip_prefix('F'))
            .ok_or_else(|| FieldError::Parse(s.to_string()))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| FieldError::Parse(s.to_string()))?;
        PrimeField::new(p)?;
        Ok(BaseFieldKind::Prime(p as u32))
    }
}

impl std::fmt::Display for BaseFieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BaseFieldKind::Rationals => write!(f, "Q"),
            BaseFieldKind::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// A prime field: `Q` or `F_p`.
pub trait BaseField: Field {
    fn kind(&self) -> BaseFieldKind;

    /// The image of the fraction `num / den`.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem, FieldError>;

    /// Number of elements, `None` for `Q`.
    fn order(&self) -> Option<u64>;

    /// All elements in canonical order (finite fields only).
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    /// A random element: uniform over `F_p`, uniform integer in
    /// `[-window, window]` over `Q`.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R, window: u64) -> Self::Elem;

    /// The canonical integer representative in `[0, p)` for prime fields.
    fn to_u64(&self, a: &Self::Elem) -> Option<u64>;

    /// Irreducibility of a monic polynomial (coefficients lowest first).
    fn is_irreducible(&self, m: &[Self::Elem]) -> Result<bool, FieldError>;

    fn parse_elem(&self, s: &str) -> Result<Self::Elem, FieldError> {
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, t),
        };
        let (n, d) = match body.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (body, "1"),
        };
        let num: BigInt = n.parse().map_err(|_| FieldError::Parse(s.to_string()))?;
        let den: BigInt = d.parse().map_err(|_| FieldError::Parse(s.to_string()))?;
        let num = if neg { -num } else { num };
        self.from_ratio(&num, &den)
    }
}
