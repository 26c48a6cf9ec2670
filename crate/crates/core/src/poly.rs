//! Sparse multivariate polynomials over any [`Field`].
//!
//! Terms are kept sorted in descending graded-lexicographic order
//! (`T0 > T1 > ...`), which is also the printing order. Gröbner computations
//! re-sort into their own orders inside [`crate::ideals`].

use std::cmp::Ordering;
use std::collections::HashMap;

use smallvec::SmallVec;

use crate::fields::{BaseField, ExtElement, Field, GaloisExtension};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("matrix is {rows}x{cols} but the polynomial has {nvars} variables")]
    DimensionMismatch { rows: usize, cols: usize, nvars: usize },
    #[error("expected {expected} substitution images, got {got}")]
    ArityMismatch { expected: usize, got: usize },
}

/// An exponent vector with its cached total degree.
///
/// The derived order compares degree first, then exponents
/// lexicographically: graded lex with `T0` largest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    deg: u32,
    exps: SmallVec<[u16; 8]>,
}

impl Monomial {
    pub fn new(exps: &[u16]) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { deg, exps: exps.into() }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { deg: 0, exps: SmallVec::from_elem(0, nvars) }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            deg: self.deg + other.deg,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            deg: other.deg - self.deg,
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u16; 8]> = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect();
        Monomial { deg: exps.iter().map(|&e| e as u32).sum(), exps }
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// The variable `i` if this is `T_i^e` with `e >= 1`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut it = self.exps.iter().enumerate().filter(|(_, &e)| e > 0);
        match (it.next(), it.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }

    /// Bit `i % 64` set when variable `i` occurs.
    pub fn support_mask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | 1 << (i % 64))
    }

    /// Reindexes into `nvars` variables, placing variable `i` at `offset + i`.
    pub fn shifted(&self, nvars: usize, offset: usize) -> Monomial {
        let mut exps = SmallVec::from_elem(0u16, nvars);
        exps[offset..offset + self.exps.len()].copy_from_slice(&self.exps);
        Monomial { deg: self.deg, exps }
    }

    /// Keeps the variables in `range`, renumbered from zero.
    pub fn restricted(&self, range: std::ops::Range<usize>) -> Monomial {
        Monomial::new(&self.exps[range])
    }

    pub fn format(&self, prefix: char) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("{prefix}{i}")),
                _ => parts.push(format!("{prefix}{i}^{e}")),
            }
        }
        parts.join("*")
    }
}

/// All monomials of degree `d` in `nvars` variables, in descending graded
/// lexicographic order (`T0^d` first).
pub fn monomial_basis(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; nvars];
    fill(&mut exps, 0, d, &mut out);
    out
}

fn fill(exps: &mut Vec<u16>, i: usize, left: u32, out: &mut Vec<Monomial>) {
    let n = exps.len();
    if n == 0 {
        if left == 0 {
            out.push(Monomial::new(exps));
        }
        return;
    }
    if i == n - 1 {
        exps[i] = left as u16;
        out.push(Monomial::new(exps));
        return;
    }
    for e in (0..=left).rev() {
        exps[i] = e as u16;
        fill(exps, i + 1, left - e, out);
    }
    exps[i] = 0;
}

/// Number of monomials of degree `d` in `nvars` variables.
pub fn monomial_count(nvars: usize, d: u32) -> u128 {
    if nvars == 0 {
        return (d == 0) as u128;
    }
    binomial(nvars as u128 - 1 + d as u128, d as u128)
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// A polynomial in `nvars` variables with no stored zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly<E> {
    nvars: usize,
    terms: Vec<(Monomial, E)>,
}

impl<E: Clone + PartialEq> MultiPoly<E> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: Vec::new() }
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, nvars: usize, c: E) -> Self {
        Self::from_terms(f, nvars, vec![(Monomial::one(nvars), c)])
    }

    pub fn var<F: Field<Elem = E>>(f: &F, nvars: usize, i: usize) -> Self {
        MultiPoly { nvars, terms: vec![(Monomial::var(nvars, i), f.one())] }
    }

    pub fn term<F: Field<Elem = E>>(f: &F, m: Monomial, c: E) -> Self {
        Self::from_terms(f, m.nvars(), vec![(m, c)])
    }

    /// Combines repeated monomials, drops zeros and sorts.
    pub fn from_terms<F: Field<Elem = E>>(f: &F, nvars: usize, terms: Vec<(Monomial, E)>) -> Self {
        let mut acc: HashMap<Monomial, E> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity");
            match acc.get_mut(&m) {
                Some(x) => *x = f.add(x, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(f, nvars, acc)
    }

    fn from_map<F: Field<Elem = E>>(f: &F, nvars: usize, acc: HashMap<Monomial, E>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { nvars, terms }
    }

    /// Wraps terms already sorted descending with distinct monomials and no zeros.
    pub fn from_sorted_unchecked(nvars: usize, terms: Vec<(Monomial, E)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        MultiPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, E)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, E)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading term in graded lex order.
    pub fn leading(&self) -> Option<&(Monomial, E)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.degree() == m.degree()),
        }
    }

    /// Coefficient of `m` (zero if absent).
    pub fn coeff<F: Field<Elem = E>>(&self, f: &F, m: &Monomial) -> E {
        match self.terms.binary_search_by(|(t, _)| m.cmp(t)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => f.zero(),
        }
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect() }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, s: &E) -> Self {
        if f.is_zero(s) {
            return Self::zero(self.nvars);
        }
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), f.mul(c, s))).collect() }
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.merge(f, other, |a, b| f.add(a, b), |b| b.clone())
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.merge(f, other, |a, b| f.sub(a, b), |b| f.neg(b))
    }

    fn merge<F: Field<Elem = E>>(
        &self,
        f: &F,
        other: &Self,
        both: impl Fn(&E, &E) -> E,
        right: impl Fn(&E) -> E,
    ) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.0.cmp(&b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.0.clone(), right(&b.1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = both(&a.1, &b.1);
                    if !f.is_zero(&c) {
                        out.push((a.0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), right(c))));
        MultiPoly { nvars: self.nvars, terms: out }
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut acc: HashMap<Monomial, E> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = f.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(x) => *x = f.add(x, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(f, self.nvars, acc)
    }

    pub fn mul_term<F: Field<Elem = E>>(&self, f: &F, m: &Monomial, c: &E) -> Self {
        if f.is_zero(c) {
            return Self::zero(self.nvars);
        }
        // multiplying by a monomial preserves the graded lex order
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, x)| (t.mul(m), f.mul(x, c))).collect(),
        }
    }

    pub fn pow<F: Field<Elem = E>>(&self, f: &F, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(f, self.nvars, f.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base);
            }
        }
        acc
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, point: &[E]) -> E {
        assert_eq!(point.len(), self.nvars);
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                if e > 0 {
                    t = f.mul(&t, &f.pow(x, e as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    pub fn map_coeffs<T: Clone + PartialEq, G: Field<Elem = T>>(&self, g: &G, func: impl Fn(&E) -> T) -> MultiPoly<T> {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let d = func(c);
                    (!g.is_zero(&d)).then(|| (m.clone(), d))
                })
                .collect(),
        }
    }

    /// `f(T * M)`: substitutes `T_i -> sum_j T_j M[j][i]`.
    pub fn substitute_linear<F: Field<Elem = E>>(&self, f: &F, m: &Matrix<E>) -> Result<Self, PolyError> {
        let n = self.nvars;
        if m.nrows() != n || m.ncols() != n {
            return Err(PolyError::DimensionMismatch { rows: m.nrows(), cols: m.ncols(), nvars: n });
        }
        if let Some(cols) = m.monomial_columns(f) {
            // T_i -> c_i T_{r_i}: a relabelling with scalars
            let terms = self
                .terms
                .iter()
                .map(|(mono, c)| {
                    let mut exps = SmallVec::<[u16; 8]>::from_elem(0, n);
                    let mut coef = c.clone();
                    for (i, &e) in mono.exps().iter().enumerate() {
                        if e > 0 {
                            let (r, s) = &cols[i];
                            exps[*r] += e;
                            coef = f.mul(&coef, &f.pow(s, e as u64));
                        }
                    }
                    (Monomial { deg: mono.deg, exps }, coef)
                })
                .collect();
            return Ok(Self::from_terms(f, n, terms));
        }
        let images: Vec<Self> = (0..n)
            .map(|i| {
                let terms = (0..n).map(|j| (Monomial::var(n, j), m.get(j, i).clone())).collect();
                Self::from_terms(f, n, terms)
            })
            .collect();
        self.substitute(f, &images)
    }

    /// `f(p_0, ..., p_{n-1})` where the `p_i` live in a common ring.
    pub fn substitute<F: Field<Elem = E>>(&self, f: &F, images: &[Self]) -> Result<Self, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::ArityMismatch { expected: self.nvars, got: images.len() });
        }
        let target = images.first().map_or(0, |p| p.nvars);
        let mut powers: Vec<Vec<Self>> = images.iter().map(|p| vec![Self::constant(f, target, f.one()), p.clone()]).collect();
        let mut acc: HashMap<Monomial, E> = HashMap::new();
        for (mono, c) in &self.terms {
            let mut t = Self::constant(f, target, c.clone());
            for (i, &e) in mono.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(f, &images[i]);
                    powers[i].push(next);
                }
                t = t.mul(f, &powers[i][e as usize]);
            }
            for (m, x) in t.terms {
                match acc.get_mut(&m) {
                    Some(y) => *y = f.add(y, &x),
                    None => {
                        acc.insert(m, x);
                    }
                }
            }
        }
        Ok(Self::from_map(f, target, acc))
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative<F: Field<Elem = E>>(&self, f: &F, i: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps()[i] > 0)
            .map(|(m, c)| {
                let mut exps: SmallVec<[u16; 8]> = m.exps.clone();
                let e = exps[i];
                exps[i] -= 1;
                (Monomial { deg: m.deg - 1, exps }, f.mul(c, &f.from_i64(e as i64)))
            })
            .collect();
        Self::from_terms(f, self.nvars, terms)
    }

    /// Embeds into `nvars` variables, placing variable `i` at `offset + i`.
    pub fn shifted(&self, nvars: usize, offset: usize) -> Self {
        MultiPoly {
            nvars,
            terms: self.terms.iter().map(|(m, c)| (m.shifted(nvars, offset), c.clone())).collect(),
        }
    }

    /// Multiplies by a unit so the leading coefficient is one.
    pub fn monic<F: Field<Elem = E>>(&self, f: &F) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(f, &f.inv(c).expect("nonzero leading coefficient")),
        }
    }

    /// Text form: `coeff*T0^a*T1 + ...`, every term carrying its coefficient.
    pub fn format<F: Field<Elem = E>>(&self, f: &F, prefix: char) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = f.is_negative(c);
            let shown = if neg { f.neg(c) } else { c.clone() };
            let mut coef = f.format(&shown);
            if f.is_compound(&shown) {
                coef = format!("({coef})");
            }
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&coef);
            if m.degree() > 0 {
                out.push('*');
                out.push_str(&m.format(prefix));
            }
        }
        out
    }
}

/// Applies `sigma_g` to every coefficient.
pub fn twist_coefficients<B: BaseField>(
    p: &MultiPoly<ExtElement<B::Elem>>,
    ext: &GaloisExtension<B>,
    g: usize,
) -> MultiPoly<ExtElement<B::Elem>> {
    if g == ext.gamma().identity() {
        return p.clone();
    }
    p.map_coeffs(ext, |c| ext.apply_automorphism(g, c))
}

/// The `c x c` minors of a matrix of polynomials, rows chosen as all of
/// `rows` and columns ranging over every `c`-subset.
pub fn maximal_minors<F: Field>(f: &F, m: &[Vec<MultiPoly<F::Elem>>]) -> Vec<MultiPoly<F::Elem>> {
    let c = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for cols in subsets(ncols, c) {
        out.push(determinant(f, m, &cols));
    }
    out
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Determinant of the square submatrix on the given columns (Laplace expansion).
fn determinant<F: Field>(f: &F, m: &[Vec<MultiPoly<F::Elem>>], cols: &[usize]) -> MultiPoly<F::Elem> {
    let nv = m[0][0].nvars();
    fn rec<F: Field>(f: &F, m: &[Vec<MultiPoly<F::Elem>>], row: usize, cols: &[usize], nv: usize) -> MultiPoly<F::Elem> {
        if cols.is_empty() {
            return MultiPoly::constant(f, nv, f.one());
        }
        let mut acc = MultiPoly::zero(nv);
        for (k, &c) in cols.iter().enumerate() {
            if m[row][c].is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = m[row][c].mul(f, &rec(f, m, row + 1, &rest, nv));
            acc = if k % 2 == 0 { acc.add(f, &term) } else { acc.sub(f, &term) };
        }
        acc
    }
    rec(f, m, 0, cols, nv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{PrimeField, Rationals};

    fn q(n: i64) -> num_rational::BigRational {
        Rationals.from_i64(n)
    }

    #[test]
    fn monomial_basis_order_and_counts() {
        let b = monomial_basis(2, 2);
        let shown: Vec<_> = b.iter().map(|m| m.format('T')).collect();
        assert_eq!(shown, vec!["T0^2", "T0*T1", "T1^2"]);
        assert_eq!(monomial_basis(2, 1).len(), 2);
        // C(7,2) by direct enumeration
        assert_eq!(monomial_basis(6, 2).len(), 21);
        assert_eq!(monomial_count(6, 2), 21);
        assert_eq!(monomial_basis(0, 0).len(), 1);
    }

    #[test]
    fn substitute_linear_examples() {
        let f = Rationals;
        let t0 = MultiPoly::var(&f, 2, 0);
        let t1 = MultiPoly::var(&f, 2, 1);
        let swap = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
        assert_eq!(t0.substitute_linear(&f, &swap).unwrap(), t1);
        let sq = t0.mul(&f, &t0);
        assert_eq!(sq.substitute_linear(&f, &Matrix::identity(&f, 2)).unwrap(), sq);
        let shear = Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(0), q(1)]]);
        let got = t0.mul(&f, &t1).substitute_linear(&f, &shear).unwrap();
        assert_eq!(got.format(&f, 'T'), "1*T0^2 + 1*T0*T1");
        let bad = Matrix::identity(&f, 3);
        assert!(t0.substitute_linear(&f, &bad).is_err());
    }

    #[test]
    fn formatting_signs_and_constants() {
        let f = Rationals;
        let p = MultiPoly::from_terms(
            &f,
            2,
            vec![
                (Monomial::new(&[1, 0]), q(-3)),
                (Monomial::new(&[0, 0]), Rationals.parse_elem("1/2").unwrap()),
                (Monomial::new(&[0, 2]), q(2)),
            ],
        );
        assert_eq!(p.format(&f, 'T'), "2*T1^2 - 3*T0 + 1/2");
        assert_eq!(MultiPoly::<num_rational::BigRational>::zero(2).format(&f, 'U'), "0");
    }

    #[test]
    fn derivative_and_minors() {
        let f = PrimeField::new(5).unwrap();
        let x = MultiPoly::var(&f, 2, 0);
        let y = MultiPoly::var(&f, 2, 1);
        let p = x.pow(&f, 3).add(&f, &x.mul(&f, &y));
        assert_eq!(p.derivative(&f, 0).format(&f, 'T'), "3*T0^2 + 1*T1");
        let m = vec![vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]];
        let minors = maximal_minors(&f, &m);
        assert_eq!(minors.len(), 1);
        assert_eq!(minors[0], x.mul(&f, &x).sub(&f, &y.mul(&f, &y)));
        assert_eq!(subsets(4, 2).len(), 6);
    }
}
