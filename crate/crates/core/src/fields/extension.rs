use smallvec::SmallVec;

use super::upoly;
use super::{BaseField, Field, FieldError};
use crate::groups::FiniteGroup;
use crate::linalg;

/// An element of `k[x]/(m(x))` in power-basis coordinates
/// `1, x, ..., x^(deg m - 1)`. Always exactly `deg m` coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtElement<E>(pub SmallVec<[E; 4]>);

impl<E> ExtElement<E> {
    pub fn coords(&self) -> &[E] {
        &self.0
    }
}

/// A primitive extension `k[x]/(m(x))` with an irreducible monic modulus.
#[derive(Debug, Clone)]
pub struct SimpleExtension<B: BaseField> {
    base: B,
    modulus: Vec<B::Elem>,
}

impl<B: BaseField> SimpleExtension<B> {
    /// Validates that `modulus` is monic of degree at least 1 and irreducible.
    pub fn new(base: B, modulus: Vec<B::Elem>) -> Result<Self, FieldError> {
        let modulus = upoly::trim(&base, modulus);
        match modulus.last() {
            Some(l) if modulus.len() >= 2 && base.is_one(l) => {}
            _ => return Err(FieldError::BadModulus),
        }
        if !base.is_irreducible(&modulus)? {
            return Err(FieldError::ReducibleModulus);
        }
        Ok(SimpleExtension { base, modulus })
    }

    /// Skips the irreducibility check; for moduli produced by a search that
    /// already established irreducibility.
    pub(crate) fn new_unchecked(base: B, modulus: Vec<B::Elem>) -> Self {
        SimpleExtension { base, modulus }
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn modulus(&self) -> &[B::Elem] {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn embed(&self, c: &B::Elem) -> ExtElement<B::Elem> {
        let mut v: SmallVec<[B::Elem; 4]> = SmallVec::from_elem(self.base.zero(), self.degree());
        v[0] = c.clone();
        ExtElement(v)
    }

    /// The class of `x`.
    pub fn generator(&self) -> ExtElement<B::Elem> {
        self.from_poly(&[self.base.zero(), self.base.one()])
    }

    /// `x^i` reduced.
    pub fn basis_element(&self, i: usize) -> ExtElement<B::Elem> {
        let mut v = vec![self.base.zero(); i + 1];
        v[i] = self.base.one();
        self.from_poly(&v)
    }

    /// Reduces a polynomial in `x` modulo the modulus.
    pub fn from_poly(&self, p: &[B::Elem]) -> ExtElement<B::Elem> {
        let r = upoly::rem(&self.base, p, &self.modulus);
        let mut v: SmallVec<[B::Elem; 4]> = SmallVec::from_elem(self.base.zero(), self.degree());
        for (i, c) in r.into_iter().enumerate() {
            v[i] = c;
        }
        ExtElement(v)
    }

    pub fn from_coords(&self, coords: &[B::Elem]) -> ExtElement<B::Elem> {
        assert_eq!(coords.len(), self.degree());
        ExtElement(coords.iter().cloned().collect())
    }

    /// The element lies in the embedded copy of the base field.
    pub fn is_base(&self, a: &ExtElement<B::Elem>) -> bool {
        a.0[1..].iter().all(|c| self.base.is_zero(c))
    }

    /// Evaluates a base-field polynomial at an element.
    pub fn eval_poly(&self, p: &[B::Elem], a: &ExtElement<B::Elem>) -> ExtElement<B::Elem> {
        p.iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, a), &self.embed(c)))
    }
}

impl<B: BaseField> Field for SimpleExtension<B> {
    type Elem = ExtElement<B::Elem>;

    fn zero(&self) -> Self::Elem {
        ExtElement(SmallVec::from_elem(self.base.zero(), self.degree()))
    }
    fn one(&self) -> Self::Elem {
        self.embed(&self.base.one())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.0.iter().all(|c| self.base.is_zero(c))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        ExtElement(a.0.iter().zip(&b.0).map(|(x, y)| self.base.add(x, y)).collect())
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        ExtElement(a.0.iter().zip(&b.0).map(|(x, y)| self.base.sub(x, y)).collect())
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        ExtElement(a.0.iter().map(|x| self.base.neg(x)).collect())
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = self.degree();
        if n == 1 {
            return ExtElement(SmallVec::from_elem(self.base.mul(&a.0[0], &b.0[0]), 1));
        }
        let f = &self.base;
        let mut t: SmallVec<[B::Elem; 8]> = SmallVec::from_elem(f.zero(), 2 * n - 1);
        for (i, x) in a.0.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                t[i + j] = f.add(&t[i + j], &f.mul(x, y));
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = std::mem::replace(&mut t[k], f.zero());
            if f.is_zero(&c) {
                continue;
            }
            for j in 0..n {
                t[k - n + j] = f.sub_mul(&t[k - n + j], &c, &self.modulus[j]);
            }
        }
        t.truncate(n);
        ExtElement(t.into_iter().collect())
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return None;
        }
        let f = &self.base;
        // extended Euclid: track s with s * a = r (mod m)
        let mut r0 = self.modulus.clone();
        let mut r1 = upoly::trim(f, a.0.to_vec());
        let mut s0: Vec<B::Elem> = Vec::new();
        let mut s1: Vec<B::Elem> = vec![f.one()];
        while !r1.is_empty() {
            let (q, r) = upoly::divrem(f, &r0, &r1);
            let s = upoly::sub(f, &s0, &upoly::mul(f, &q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant since the modulus is irreducible
        let c = f.inv(&r0[0])?;
        Some(self.from_poly(&upoly::scale(f, &s0, &c)))
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.embed(&self.base.from_i64(n))
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn is_negative(&self, a: &Self::Elem) -> bool {
        self.is_base(a) && self.base.is_negative(&a.0[0])
    }
    fn is_compound(&self, a: &Self::Elem) -> bool {
        !self.is_base(a)
    }
    fn format(&self, a: &Self::Elem) -> String {
        if self.is_base(a) {
            return self.base.format(&a.0[0]);
        }
        let f = &self.base;
        let mut out = String::new();
        for (i, c) in a.0.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let neg = f.is_negative(c);
            let body = if neg { f.format(&f.neg(c)) } else { f.format(c) };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit = i > 0 && body == "1";
            if !unit {
                out.push_str(&body);
            }
            let star = if unit { "" } else { "*" };
            match i {
                0 => {}
                1 => out.push_str(&format!("{star}x")),
                _ => out.push_str(&format!("{star}x^{i}")),
            }
        }
        out
    }
}

/// A finite Galois extension `k'|k` presented as `k[x]/(m)`, together with
/// its automorphisms indexed by the elements of an abstract group `Gamma`.
///
/// `sigma(g)` composed with `sigma(h)` equals `sigma(g*h)` for the group
/// multiplication of `Gamma`, so `Gamma` acts on `k'` from the left.
#[derive(Debug, Clone)]
pub struct GaloisExtension<B: BaseField> {
    field: SimpleExtension<B>,
    gamma: FiniteGroup,
    /// Image of `x` under the automorphism of each group element.
    autos: Vec<ExtElement<B::Elem>>,
    /// Matrix (row-major, `[i][j]` = coordinate `i` of `sigma(x^j)`) of each automorphism.
    matrices: Vec<Vec<Vec<B::Elem>>>,
}

impl<B: BaseField> GaloisExtension<B> {
    /// Builds and validates `k[x]/(m)` with the listed automorphisms.
    ///
    /// `autos[j]` is the image of `x` under one automorphism, and
    /// `gamma_iso[g] = j` assigns it to group element `g`.
    pub fn new(
        base: B,
        modulus: Vec<B::Elem>,
        autos: Vec<ExtElement<B::Elem>>,
        gamma: FiniteGroup,
        gamma_iso: &[usize],
    ) -> Result<Self, FieldError> {
        let field = SimpleExtension::new(base, modulus)?;
        let n = gamma.order();
        if autos.len() != n || gamma_iso.len() != n {
            return Err(FieldError::AutomorphismCount { expected: n, got: autos.len() });
        }
        let mut seen = vec![false; n];
        for &j in gamma_iso {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(FieldError::AutomorphismCount { expected: n, got: autos.len() });
            }
        }
        let deg = field.degree();
        let mut ordered = Vec::with_capacity(n);
        for &j in gamma_iso {
            let img = &autos[j];
            if img.0.len() != deg {
                return Err(FieldError::AutomorphismNotARoot { index: j });
            }
            if !field.is_zero(&field.eval_poly(field.modulus(), img)) {
                return Err(FieldError::AutomorphismNotARoot { index: j });
            }
            ordered.push(img.clone());
        }
        let matrices = ordered
            .iter()
            .map(|img| automorphism_matrix(&field, img))
            .collect();
        let ext = GaloisExtension { field, gamma, autos: ordered, matrices };
        for g in 0..n {
            for h in 0..n {
                let lhs = ext.apply_automorphism(g, &ext.autos[h]);
                let gh = ext.gamma.mul(g, h);
                if lhs != ext.autos[gh] {
                    return Err(FieldError::CompositionTableMismatch { g, h });
                }
            }
        }
        let fixed = ext.fixed_field_dimension();
        if fixed != 1 {
            return Err(FieldError::FixedFieldTooLarge(fixed));
        }
        Ok(ext)
    }

    /// The trivial extension `k'|k = k|k` with `Gamma = 1`.
    pub fn trivial(base: B) -> Self {
        let modulus = vec![base.zero(), base.one()];
        let field = SimpleExtension::new_unchecked(base, modulus);
        let id = field.zero();
        let matrices = vec![automorphism_matrix(&field, &id)];
        GaloisExtension { field, gamma: FiniteGroup::cyclic(1), autos: vec![id], matrices }
    }

    pub fn field(&self) -> &SimpleExtension<B> {
        &self.field
    }

    pub fn base(&self) -> &B {
        self.field.base()
    }

    pub fn modulus(&self) -> &[B::Elem] {
        self.field.modulus()
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn gamma(&self) -> &FiniteGroup {
        &self.gamma
    }

    /// Image of `x` under the automorphism of group element `g`.
    pub fn automorphism_image(&self, g: usize) -> &ExtElement<B::Elem> {
        &self.autos[g]
    }

    pub fn embed(&self, c: &B::Elem) -> ExtElement<B::Elem> {
        self.field.embed(c)
    }

    pub fn basis_element(&self, i: usize) -> ExtElement<B::Elem> {
        self.field.basis_element(i)
    }

    pub fn from_coords(&self, c: &[B::Elem]) -> ExtElement<B::Elem> {
        self.field.from_coords(c)
    }

    pub fn is_base(&self, a: &ExtElement<B::Elem>) -> bool {
        self.field.is_base(a)
    }

    /// Applies the automorphism assigned to `g` (a ring automorphism fixing `k`).
    pub fn apply_automorphism(&self, g: usize, a: &ExtElement<B::Elem>) -> ExtElement<B::Elem> {
        if g == self.gamma.identity() {
            return a.clone();
        }
        let f = self.base();
        let m = &self.matrices[g];
        ExtElement(
            m.iter()
                .map(|row| {
                    row.iter()
                        .zip(&a.0)
                        .fold(f.zero(), |acc, (r, c)| f.add(&acc, &f.mul(r, c)))
                })
                .collect(),
        )
    }

    /// Dimension over `k` of the elements fixed by every automorphism.
    pub fn fixed_field_dimension(&self) -> usize {
        let f = self.base();
        let n = self.degree();
        let mut rows = Vec::new();
        for m in &self.matrices {
            for (i, row) in m.iter().enumerate() {
                rows.push(
                    row.iter()
                        .enumerate()
                        .map(|(j, c)| if i == j { f.sub(c, &f.one()) } else { c.clone() })
                        .collect::<Vec<_>>(),
                );
            }
        }
        n - linalg::rank(f, rows, n)
    }
}

fn automorphism_matrix<B: BaseField>(
    field: &SimpleExtension<B>,
    img: &ExtElement<B::Elem>,
) -> Vec<Vec<B::Elem>> {
    let n = field.degree();
    let mut cols = Vec::with_capacity(n);
    let mut power = field.one();
    for _ in 0..n {
        cols.push(power.clone());
        power = field.mul(&power, img);
    }
    (0..n).map(|i| (0..n).map(|j| cols[j].0[i].clone()).collect()).collect()
}

impl<B: BaseField> Field for GaloisExtension<B> {
    type Elem = ExtElement<B::Elem>;

    fn zero(&self) -> Self::Elem {
        self.field.zero()
    }
    fn one(&self) -> Self::Elem {
        self.field.one()
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.field.is_zero(a)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.field.add(a, b)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.field.sub(a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.field.neg(a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.field.mul(a, b)
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        self.field.inv(a)
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.field.from_i64(n)
    }
    fn characteristic(&self) -> u64 {
        self.field.characteristic()
    }
    fn format(&self, a: &Self::Elem) -> String {
        self.field.format(a)
    }
    fn is_negative(&self, a: &Self::Elem) -> bool {
        self.field.is_negative(a)
    }
    fn is_compound(&self, a: &Self::Elem) -> bool {
        self.field.is_compound(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{PrimeField, Rationals};

    fn qi() -> GaloisExtension<Rationals> {
        let q = Rationals;
        let m = vec![q.one(), q.zero(), q.one()];
        let field = SimpleExtension::new(q, m.clone()).unwrap();
        let x = field.generator();
        let autos = vec![x.clone(), field.neg(&x)];
        GaloisExtension::new(q, m, autos, FiniteGroup::cyclic(2), &[0, 1]).unwrap()
    }

    fn f9() -> GaloisExtension<PrimeField> {
        let f3 = PrimeField::new(3).unwrap();
        let m = vec![1, 0, 1];
        let field = SimpleExtension::new(f3, m.clone()).unwrap();
        let x = field.generator();
        let frob = field.pow(&x, 3);
        GaloisExtension::new(f3, m, vec![x, frob], FiniteGroup::cyclic(2), &[0, 1]).unwrap()
    }

    #[test]
    fn gaussian_rationals_conjugation() {
        let k = qi();
        let a = k.from_coords(&[Rationals.from_i64(2), Rationals.from_i64(3)]);
        let b = k.apply_automorphism(1, &a);
        assert_eq!(k.format(&b), "2 - 3*x");
        assert_eq!(k.apply_automorphism(0, &a), a);
    }

    #[test]
    fn frobenius_on_f9_negates_x() {
        let k = f9();
        let x = k.field().generator();
        // x^3 = x * x^2 = -x modulo x^2 + 1
        assert_eq!(k.apply_automorphism(1, &x), k.neg(&x));
        assert_eq!(k.automorphism_image(1), &k.neg(&x));
    }

    #[test]
    fn frobenius_is_a_ring_map_on_all_of_f9() {
        let k = f9();
        let all: Vec<_> = (0..9u32).map(|i| k.from_coords(&[i % 3, i / 3])).collect();
        for a in &all {
            for b in &all {
                let s = k.apply_automorphism(1, &k.add(a, b));
                assert_eq!(s, k.add(&k.apply_automorphism(1, a), &k.apply_automorphism(1, b)));
                let p = k.apply_automorphism(1, &k.mul(a, b));
                assert_eq!(p, k.mul(&k.apply_automorphism(1, a), &k.apply_automorphism(1, b)));
            }
            if !k.is_zero(a) {
                assert_eq!(k.mul(a, &k.inv(a).unwrap()), k.one());
            }
        }
    }

    #[test]
    fn rejects_reducible_modulus() {
        let q = Rationals;
        let m = vec![q.from_i64(-1), q.zero(), q.one()];
        let err = SimpleExtension::new(q, m).unwrap_err();
        assert_eq!(err, FieldError::ReducibleModulus);
    }

    #[test]
    fn rejects_bad_automorphisms() {
        let q = Rationals;
        let m = vec![q.one(), q.zero(), q.one()];
        let field = SimpleExtension::new(q, m.clone()).unwrap();
        let x = field.generator();
        // x -> x + 1 is not a root of x^2 + 1
        let bad = field.add(&x, &field.one());
        let err = GaloisExtension::new(q, m.clone(), vec![x.clone(), bad], FiniteGroup::cyclic(2), &[0, 1])
            .unwrap_err();
        assert_eq!(err, FieldError::AutomorphismNotARoot { index: 1 });
        // two identities: consistent table but the fixed field is everything
        let err = GaloisExtension::new(q, m, vec![x.clone(), x], FiniteGroup::cyclic(2), &[0, 1])
            .unwrap_err();
        assert_eq!(err, FieldError::FixedFieldTooLarge(2));
    }

    #[test]
    fn rejects_composition_mismatch() {
        // F_25 = F_5[x]/(x^2 - 2), Frobenius assigned to the identity of Z/2
        let f5 = PrimeField::new(5).unwrap();
        let m = vec![3, 0, 1];
        let field = SimpleExtension::new(f5, m.clone()).unwrap();
        let x = field.generator();
        let frob = field.pow(&x, 5);
        let err = GaloisExtension::new(f5, m, vec![x, frob], FiniteGroup::cyclic(2), &[1, 0])
            .unwrap_err();
        assert!(matches!(err, FieldError::CompositionTableMismatch { .. }));
    }
}
