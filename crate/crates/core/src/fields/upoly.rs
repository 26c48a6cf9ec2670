//! Dense univariate polynomials (coefficient vectors, lowest degree first)
//! and the irreducibility tests used to validate extension moduli.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::prime::is_prime;
use super::{Field, FieldError, PrimeField};

pub fn trim<F: Field>(f: &F, mut a: Vec<F::Elem>) -> Vec<F::Elem> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

/// Degree, `None` for the zero polynomial. Expects a trimmed vector.
pub fn degree<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trim(f, out)
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let nb: Vec<F::Elem> = b.iter().map(|c| f.neg(c)).collect();
    add(f, a, &nb)
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

pub fn scale<F: Field>(f: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), trim(f, r));
    }
    let mut q = vec![f.zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = f.mul(&r[k + db], &lead_inv);
        if f.is_zero(&c) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = f.sub_mul(&r[k + j], &c, bj);
        }
        q[k] = c;
    }
    r.truncate(db);
    (trim(f, q), trim(f, r))
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    divrem(f, a, b).1
}

pub fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let li = f.inv(l).expect("nonzero leading coefficient");
            scale(f, a, &li)
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = trim(f, a.to_vec());
    let mut y = trim(f, b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn derivative<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    trim(
        f,
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect(),
    )
}

pub fn eval<F: Field>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter()
        .rev()
        .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn mulmod<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod<F: Field>(f: &F, a: &[F::Elem], mut e: u128, m: &[F::Elem]) -> Vec<F::Elem> {
    let mut base = rem(f, a, m);
    let mut acc = rem(f, &[f.one()], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        e >>= 1;
    }
    acc
}

fn x_poly<F: Field>(f: &F) -> Vec<F::Elem> {
    vec![f.zero(), f.one()]
}

/// Ben-Or irreducibility test over `F_p`: a polynomial of degree `n` is
/// irreducible iff `gcd(x^(p^i) - x, m) = 1` for `i = 1..n/2`.
pub fn is_irreducible_fp(f: &PrimeField, m: &[u32]) -> bool {
    let m = trim(f, m.to_vec());
    let Some(n) = degree(&m) else { return false };
    if n == 0 {
        return false;
    }
    let m = monic(f, &m);
    let x = x_poly(f);
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        h = powmod(f, &h, f.p() as u128, &m);
        let g = gcd(f, &sub(f, &h, &x), &m);
        if degree(&g).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}

/// Degrees of the irreducible factors of a squarefree polynomial over `F_p`
/// (distinct-degree factorization).
pub fn factor_degrees_fp(f: &PrimeField, m: &[u32]) -> Vec<usize> {
    let mut rest = monic(f, &trim(f, m.to_vec()));
    let x = x_poly(f);
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut i = 0;
    while degree(&rest).unwrap_or(0) >= 2 * (i + 1) {
        i += 1;
        h = powmod(f, &h, f.p() as u128, &rest);
        let g = gcd(f, &sub(f, &h, &x), &rest);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 {
            out.extend(std::iter::repeat_n(i, dg / i));
            rest = divrem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
        }
    }
    if let Some(d) = degree(&rest) {
        if d > 0 {
            out.push(d);
        }
    }
    out
}

/// Finds the lexicographically first monic irreducible polynomial of
/// degree `n` over `F_p`.
pub fn find_irreducible_fp(f: &PrimeField, n: usize) -> Vec<u32> {
    if n == 1 {
        return vec![0, 1];
    }
    let p = f.p() as u64;
    let mut counter: u64 = 0;
    loop {
        let mut c = counter;
        let mut poly: Vec<u32> = (0..n)
            .map(|_| {
                let d = (c % p) as u32;
                c /= p;
                d
            })
            .collect();
        poly.push(1);
        if poly[0] != 0 && is_irreducible_fp(f, &poly) {
            return poly;
        }
        counter += 1;
    }
}

/// Turns a monic rational polynomial into a monic integer polynomial with the
/// same splitting behaviour (substitution `x = y / D`).
fn monic_integer_form(m: &[BigRational]) -> Vec<BigInt> {
    let n = m.len() - 1;
    let den = m
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    (0..=n)
        .map(|i| {
            let scaled = &m[i] * BigRational::from_integer(den.pow((n - i) as u32));
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect()
}

fn int_eval(g: &[BigInt], x: &BigInt) -> BigInt {
    g.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Integer root search for a monic integer polynomial. `Ok(true)` if a root
/// exists, `Err(())` if the constant term is too large to enumerate.
fn has_integer_root(g: &[BigInt]) -> Result<bool, ()> {
    if g[0].is_zero() {
        return Ok(true);
    }
    let divs = small_divisors(&g[0]).ok_or(())?;
    Ok(divs
        .iter()
        .any(|d| int_eval(g, d).is_zero() || int_eval(g, &-d).is_zero()))
}

/// Quartic closed form: does a monic integer quartic split into two monic
/// integer quadratics?
fn quartic_has_quadratic_factor(g: &[BigInt]) -> Result<bool, ()> {
    let (a0, a1, a2, a3) = (&g[0], &g[1], &g[2], &g[3]);
    let divs = small_divisors(a0).ok_or(())?;
    let all: Vec<BigInt> = divs.iter().flat_map(|d| [d.clone(), -d]).collect();
    for b in &all {
        let d = a0 / b;
        // (x^2 + a x + b)(x^2 + c x + d): a + c = a3, ac + b + d = a2, ad + bc = a1
        if &d != b {
            let num = a1 - b * a3;
            let den = &d - b;
            if !(&num % &den).is_zero() {
                continue;
            }
            let a = num / den;
            let c = a3 - &a;
            if &a * &c + b + &d == *a2 {
                return Ok(true);
            }
        } else {
            if a1 != &(b * a3) {
                continue;
            }
            // a + c = a3, ac = a2 - 2b: roots of t^2 - a3 t + (a2 - 2b)
            let disc = a3 * a3 - BigInt::from(4) * (a2 - BigInt::from(2) * b);
            if disc.is_negative() {
                continue;
            }
            let s = disc.sqrt();
            if &s * &s == disc && ((a3 + &s) % BigInt::from(2)).is_zero() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Subset sums of factor degrees strictly between 0 and `n`.
fn proper_subset_sums(degs: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in degs {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// Irreducibility over `Q` of a monic polynomial.
///
/// Combines the rational root test, a closed form for quartics, and factor
/// degree patterns modulo small primes (a degree `d` rational factor forces
/// a subset of factor degrees summing to `d` modulo every good prime).
/// Returns `Err(IrreducibilityInconclusive)` when none of these decides.
pub fn is_irreducible_q(m: &[BigRational]) -> Result<bool, FieldError> {
    let n = m.len().checked_sub(1).ok_or(FieldError::BadModulus)?;
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let g = monic_integer_form(m);
    let root = has_integer_root(&g);
    if root == Ok(true) {
        return Ok(false);
    }
    if root.is_ok() && n <= 3 {
        return Ok(true);
    }
    if n == 4 {
        if let (Ok(false), Ok(q)) = (root, quartic_has_quadratic_factor(&g)) {
            return Ok(!q);
        }
    }
    // Degree patterns modulo primes.
    let mut possible = vec![true; n + 1];
    let mut good_primes = 0;
    for p in (3u64..2000).filter(|&p| is_prime(p)) {
        let fp = PrimeField::new(p).unwrap();
        let pbig = BigInt::from(p);
        let gp: Vec<u32> = g
            .iter()
            .map(|c| c.mod_floor(&pbig).to_u32().unwrap())
            .collect();
        let gp = trim(&fp, gp);
        let sqfree = gcd(&fp, &gp, &derivative(&fp, &gp));
        if degree(&sqfree) != Some(0) {
            continue;
        }
        good_primes += 1;
        let degs = factor_degrees_fp(&fp, &gp);
        if degs.len() == 1 {
            return Ok(true);
        }
        let reach = proper_subset_sums(&degs, n);
        for d in 1..n {
            possible[d] &= reach[d];
        }
        if (1..n).all(|d| !possible[d]) {
            return Ok(true);
        }
        if good_primes >= 40 {
            break;
        }
    }
    Err(FieldError::IrreducibilityInconclusive)
}
