//! Linear representations `tau: E -> GL_{n+1}(k)` paired with the Galois
//! data `pi: E -> Gamma`, which together define the semilinear action.

use std::collections::VecDeque;

use crate::fields::upoly;
use crate::fields::{BaseField, BaseFieldKind, ExtElement, Field, GaloisExtension, PrimeField, SimpleExtension};
use crate::groups::GroupExtension;
use crate::linalg::{kernel_dim, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error("Galois group of the field and Gamma of the extension differ")]
    GammaMismatch,
    #[error("expected {expected} matrices, got {got}")]
    MatrixCount { expected: usize, got: usize },
    #[error("matrix for {0} is not square of the common size")]
    BadShape(String),
    #[error("tau({g}*{h}) != tau({g})*tau({h})")]
    NotHomomorphism { g: String, h: String },
    #[error("generator images are inconsistent at {0}")]
    InconsistentGenerators(String),
    #[error("generators do not generate the group")]
    NotGenerating,
    #[error("{0} is not in the geometric subgroup G")]
    NotInG(String),
    #[error("fast path unavailable: characteristic divides the order of {0}")]
    BadCharacteristic(String),
    #[error("the group must have at least two elements")]
    TooSmall,
}

/// `tau` on every element of `E`, with the extension and field data.
#[derive(Debug, Clone)]
pub struct SemilinearRep<B: BaseField> {
    ext: GaloisExtension<B>,
    grpext: GroupExtension,
    mats: Vec<Matrix<B::Elem>>,
    ext_mats: Vec<Matrix<ExtElement<B::Elem>>>,
    copies: usize,
}

/// Outcome of the nonscalar and faithfulness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepCertificate {
    pub faithful: bool,
    pub nonscalar: bool,
    pub failure: Option<String>,
}

impl RepCertificate {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl<B: BaseField> SemilinearRep<B> {
    /// Validates `tau(gh) = tau(g) tau(h)`, `tau(1) = I` and shapes.
    pub fn new(ext: GaloisExtension<B>, grpext: GroupExtension, mats: Vec<Matrix<B::Elem>>) -> Result<Self, RepError> {
        if ext.gamma() != &grpext.gamma {
            return Err(RepError::GammaMismatch);
        }
        let e = &grpext.e;
        if mats.len() != e.order() {
            return Err(RepError::MatrixCount { expected: e.order(), got: mats.len() });
        }
        let n = mats[0].nrows();
        for (g, m) in mats.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n || n == 0 {
                return Err(RepError::BadShape(e.label(g).to_string()));
            }
        }
        let f = ext.base();
        for g in 0..e.order() {
            for h in 0..e.order() {
                if mats[g].mul(f, &mats[h]) != mats[e.mul(g, h)] {
                    return Err(RepError::NotHomomorphism {
                        g: e.label(g).to_string(),
                        h: e.label(h).to_string(),
                    });
                }
            }
        }
        let ext_mats = embed_all(&ext, &mats);
        Ok(SemilinearRep { ext, grpext, mats, ext_mats, copies: 1 })
    }

    /// Extends matrices given on generators to all of `E`.
    pub fn from_generators(
        ext: GaloisExtension<B>,
        grpext: GroupExtension,
        gens: Vec<(usize, Matrix<B::Elem>)>,
    ) -> Result<Self, RepError> {
        let e = &grpext.e;
        let f = ext.base().clone();
        let n = gens.first().map_or(0, |(_, m)| m.nrows());
        if gens.iter().any(|(_, m)| m.nrows() != n || m.ncols() != n) || n == 0 {
            return Err(RepError::BadShape("generator".into()));
        }
        let mut mats: Vec<Option<Matrix<B::Elem>>> = vec![None; e.order()];
        mats[e.identity()] = Some(Matrix::identity(&f, n));
        let mut queue = VecDeque::from([e.identity()]);
        while let Some(x) = queue.pop_front() {
            for (g, m) in &gens {
                let y = e.mul(x, *g);
                let my = mats[x].as_ref().unwrap().mul(&f, m);
                match &mats[y] {
                    None => {
                        mats[y] = Some(my);
                        queue.push_back(y);
                    }
                    Some(old) if *old != my => {
                        return Err(RepError::InconsistentGenerators(e.label(y).to_string()));
                    }
                    _ => {}
                }
            }
        }
        let mats: Option<Vec<_>> = mats.into_iter().collect();
        Self::new(ext, grpext, mats.ok_or(RepError::NotGenerating)?)
    }

    /// The regular representation: `tau(g)` sends `T_i` to `T_{g i}`, i.e.
    /// `tau(g)[x][y] = 1` exactly when `x = g y`.
    pub fn regular(ext: GaloisExtension<B>, grpext: GroupExtension) -> Result<Self, RepError> {
        let e = &grpext.e;
        if e.order() < 2 {
            return Err(RepError::TooSmall);
        }
        let f = ext.base().clone();
        let mats = (0..e.order())
            .map(|g| Matrix::from_fn(e.order(), e.order(), |x, y| if x == e.mul(g, y) { f.one() } else { f.zero() }))
            .collect();
        Self::new(ext, grpext, mats)
    }

    /// Direct sum of `m` copies (block-diagonal matrices).
    pub fn sum_copies(&self, m: usize) -> Self {
        assert!(m >= 1);
        let f = self.ext.base();
        let mats: Vec<_> = self.mats.iter().map(|a| a.block_diag_copies(f, m)).collect();
        SemilinearRep {
            ext: self.ext.clone(),
            grpext: self.grpext.clone(),
            ext_mats: embed_all(&self.ext, &mats),
            mats,
            copies: self.copies * m,
        }
    }

    pub fn ext(&self) -> &GaloisExtension<B> {
        &self.ext
    }

    pub fn grpext(&self) -> &GroupExtension {
        &self.grpext
    }

    pub fn base(&self) -> &B {
        self.ext.base()
    }

    /// `n + 1`, the number of homogeneous coordinates.
    pub fn dim(&self) -> usize {
        self.mats[0].nrows()
    }

    /// How many copies of the originally supplied representation this is.
    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn matrix(&self, g: usize) -> &Matrix<B::Elem> {
        &self.mats[g]
    }

    pub fn matrices(&self) -> &[Matrix<B::Elem>] {
        &self.mats
    }

    /// `tau(g)` with entries embedded in `k'`.
    pub fn ext_matrix(&self, g: usize) -> &Matrix<ExtElement<B::Elem>> {
        &self.ext_mats[g]
    }

    /// True when every `tau(g)` has one nonzero entry per column, so the
    /// action sends monomials to multiples of monomials.
    pub fn is_monomial(&self) -> bool {
        let f = self.base();
        self.mats.iter().all(|m| m.monomial_columns(f).is_some())
    }

    /// `sigma` index in `Gamma` of the element `g` of `E`.
    pub fn pi(&self, g: usize) -> usize {
        self.grpext.pi.apply(g)
    }

    /// Passes iff `tau` is injective and `tau(g)` is not scalar for `g != 1`.
    pub fn nonscalar_faithful_check(&self) -> RepCertificate {
        let f = self.base();
        let e = &self.grpext.e;
        let mut cert = RepCertificate { faithful: true, nonscalar: true, failure: None };
        for g in 0..e.order() {
            if g == e.identity() {
                continue;
            }
            if self.mats[g].is_identity(f) {
                cert.faithful = false;
                cert.failure.get_or_insert_with(|| format!("tau({}) is the identity", e.label(g)));
            }
            if let Some(c) = self.mats[g].as_scalar(f) {
                cert.nonscalar = false;
                cert.failure
                    .get_or_insert_with(|| format!("tau({}) = {} * I is scalar", e.label(g), f.format(&c)));
            }
        }
        cert
    }

    /// Dimension of the projective fixed locus of `tau(g)` over an algebraic
    /// closure: the largest eigenvalue multiplicity minus one.
    ///
    /// Eigenvalues of `tau(g)` are `ord(g)`-th roots of unity. Over `Q`
    /// conjugate roots share a multiplicity, read off from
    /// `dim ker Phi_e(tau(g)) / phi(e)`. Over `F_p` the matrix is brought into
    /// `F_{p^f}` containing the roots of unity. Errors when the
    /// characteristic divides `ord(g)`; callers then fall back to Gröbner.
    pub fn bad_locus_dim_fast(&self, g: usize) -> Result<i64, RepError> {
        let e = &self.grpext.e;
        if g == e.identity() || self.grpext.iota_image().binary_search(&g).is_err() {
            return Err(RepError::NotInG(e.label(g).to_string()));
        }
        let o = e.element_order(g) as u64;
        let f = self.base();
        let p = f.characteristic();
        if p != 0 && o % p == 0 {
            return Err(RepError::BadCharacteristic(e.label(g).to_string()));
        }
        let m = &self.mats[g];
        let n = m.nrows();
        let best = match f.kind() {
            BaseFieldKind::Rationals => divisors(o)
                .into_iter()
                .map(|d| {
                    let phi: Vec<B::Elem> = cyclotomic(d).into_iter().map(|c| f.from_i64(c)).collect();
                    let pm = matrix_poly(f, &phi, m);
                    kernel_dim(f, pm.to_rows(), n) / (phi.len() - 1)
                })
                .max()
                .unwrap_or(0),
            BaseFieldKind::Prime(p) => {
                let fp = PrimeField::new(p as u64).expect("prime");
                let mp = m.map(|x| f.to_u64(x).expect("prime field element") as u32);
                max_eigen_multiplicity_fp(&fp, &mp, o)
            }
        };
        Ok(best as i64 - 1)
    }
}

fn embed_all<B: BaseField>(ext: &GaloisExtension<B>, mats: &[Matrix<B::Elem>]) -> Vec<Matrix<ExtElement<B::Elem>>> {
    mats.iter().map(|m| m.map(|c| ext.embed(c))).collect()
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest first.
pub fn cyclotomic(n: u64) -> Vec<i64> {
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        let den = cyclotomic(d);
        num = int_exact_div(&num, &den);
    }
    num
}

/// Division by a monic integer polynomial with zero remainder.
fn int_exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// `p(M)` by Horner's rule.
fn matrix_poly<F: Field>(f: &F, p: &[F::Elem], m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let n = m.nrows();
    let mut acc = Matrix::from_fn(n, n, |_, _| f.zero());
    for c in p.iter().rev() {
        acc = acc.mul(f, m);
        for i in 0..n {
            let v = f.add(acc.get(i, i), c);
            acc.set(i, i, v);
        }
    }
    acc
}

fn max_eigen_multiplicity_fp(fp: &PrimeField, m: &Matrix<u32>, o: u64) -> usize {
    let p = fp.p() as u64;
    // smallest f with o | p^f - 1
    let mut deg = 1usize;
    let mut pw = p % o;
    while pw != 1 % o {
        pw = pw * p % o;
        deg += 1;
    }
    let modulus = upoly::find_irreducible_fp(fp, deg);
    let k = SimpleExtension::new(*fp, modulus).expect("irreducible by construction");
    let q_minus_1 = (p as u128).pow(deg as u32) - 1;
    let zeta = primitive_root_of_unity(&k, o, q_minus_1);
    let n = m.nrows();
    let mk = m.map(|x| k.embed(x));
    let mut best = 0;
    let mut z = k.one();
    for _ in 0..o {
        let shifted = Matrix::from_fn(n, n, |i, j| if i == j { k.sub(mk.get(i, j), &z) } else { mk.get(i, j).clone() });
        best = best.max(kernel_dim(&k, shifted.to_rows(), n));
        z = k.mul(&z, &zeta);
    }
    best
}

/// An element of exact multiplicative order `o` in a field with `q` elements.
fn primitive_root_of_unity(k: &SimpleExtension<PrimeField>, o: u64, q_minus_1: u128) -> <SimpleExtension<PrimeField> as Field>::Elem {
    let p = k.base().p() as u64;
    let deg = k.degree();
    let e = (q_minus_1 / o as u128) as u64;
    let prime_factors: Vec<u64> = divisors(o).into_iter().filter(|&d| d > 1 && crate::fields::is_prime_u64(d)).collect();
    for code in 1u64.. {
        let mut c = code;
        let coords: Vec<u32> = (0..deg)
            .map(|_| {
                let d = (c % p) as u32;
                c /= p;
                d
            })
            .collect();
        let a = k.from_coords(&coords);
        let z = k.pow(&a, e);
        if prime_factors.iter().all(|&r| !k.is_one(&k.pow(&z, o / r))) {
            return z;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{FiniteGroup, GroupExtension};

    fn f5_geometric(n: usize) -> (GaloisExtension<PrimeField>, GroupExtension) {
        let f = PrimeField::new(5).unwrap();
        (GaloisExtension::trivial(f), GroupExtension::geometric(FiniteGroup::cyclic(n)))
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn regular_rep_of_z2_and_z4() {
        let (k, g) = f5_geometric(2);
        let rep = SemilinearRep::regular(k, g).unwrap();
        assert_eq!(rep.matrix(1).to_rows(), vec![vec![0, 1], vec![1, 0]]);
        assert!(rep.nonscalar_faithful_check().passed());
        assert_eq!(rep.bad_locus_dim_fast(1), Ok(0));
        let boosted = rep.sum_copies(3);
        assert_eq!(boosted.dim(), 6);
        assert_eq!(boosted.bad_locus_dim_fast(1), Ok(2));
        let (k, g) = f5_geometric(4);
        let rep4 = SemilinearRep::regular(k, g).unwrap();
        // the generator sends T0 to T1
        assert_eq!(*rep4.matrix(1).get(1, 0), 1);
        assert_eq!(rep4.bad_locus_dim_fast(2), Ok(1));
        assert_eq!(rep4.bad_locus_dim_fast(1), Ok(0));
        assert_eq!(rep4.sum_copies(2).dim(), 8);
    }

    #[test]
    fn rotation_fails_diagonal_character_passes() {
        let (k, g) = f5_geometric(4);
        let rot = Matrix::from_rows(vec![vec![0, 1], vec![4, 0]]);
        let rep = SemilinearRep::from_generators(k.clone(), g.clone(), vec![(1, rot)]).unwrap();
        let cert = rep.nonscalar_faithful_check();
        assert!(!cert.nonscalar);
        assert!(cert.failure.unwrap().contains("tau(2)"));
        let diag = Matrix::from_rows(vec![vec![2, 0], vec![0, 1]]);
        let rep = SemilinearRep::from_generators(k, g, vec![(1, diag)]).unwrap();
        assert!(rep.nonscalar_faithful_check().passed());
        assert_eq!(rep.bad_locus_dim_fast(2), Ok(0));
    }

    #[test]
    fn rational_fast_path_uses_cyclotomic_kernels() {
        let q = crate::fields::Rationals;
        let k = GaloisExtension::trivial(q);
        let g = GroupExtension::geometric(FiniteGroup::cyclic(4));
        let rep = SemilinearRep::regular(k, g).unwrap().sum_copies(2);
        // each eigenvalue 1, i, -1, -i has multiplicity 2
        assert_eq!(rep.bad_locus_dim_fast(1), Ok(1));
        assert_eq!(rep.bad_locus_dim_fast(2), Ok(3));
    }

    #[test]
    fn bad_characteristic_and_twisted_elements_are_refused() {
        let f = PrimeField::new(2).unwrap();
        let rep = SemilinearRep::regular(GaloisExtension::trivial(f), GroupExtension::geometric(FiniteGroup::cyclic(2))).unwrap();
        assert!(matches!(rep.bad_locus_dim_fast(1), Err(RepError::BadCharacteristic(_))));
        assert!(matches!(rep.bad_locus_dim_fast(0), Err(RepError::NotInG(_))));
    }
}
