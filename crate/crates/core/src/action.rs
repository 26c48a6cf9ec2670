//! The semilinear action `(g f)(T) = sigma_{pi(g)}( f(T tau(g)) )` on
//! `k'[T_0..T_n]`, its invariants, and the generation certificate for the
//! Veronese subring of invariants.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::fields::{BaseField, ExtElement, Field, GaloisExtension};
use crate::linalg::{rref, SparseEchelon, SparseVec};
use crate::poly::{monomial_basis, twist_coefficients, Monomial, MultiPoly};
use crate::rep::SemilinearRep;

/// Polynomials with coefficients in `k'`.
pub type ExtPoly<B> = MultiPoly<ExtElement<<B as Field>::Elem>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error("characteristic {p} divides the group order {order}")]
    ModularCharacteristic { p: u64, order: usize },
}

/// Refuses groups whose order is divisible by the characteristic.
pub fn check_nonmodular<B: BaseField>(rep: &SemilinearRep<B>) -> Result<(), ActionError> {
    let p = rep.base().characteristic();
    let order = rep.grpext().e.order();
    if p != 0 && order as u64 % p == 0 {
        return Err(ActionError::ModularCharacteristic { p, order });
    }
    Ok(())
}

/// `g . f`: substitute `T -> T tau(g)`, then apply `sigma_{pi(g)}` to the coefficients.
pub fn act<B: BaseField>(rep: &SemilinearRep<B>, g: usize, f: &ExtPoly<B>) -> ExtPoly<B> {
    let sub = f
        .substitute_linear(rep.ext(), rep.ext_matrix(g))
        .expect("polynomial lives in the representation's ring");
    twist_coefficients(&sub, rep.ext(), rep.pi(g))
}

/// `|E|^{-1} sum_g g . f`, the projector onto invariants.
pub fn reynolds<B: BaseField>(rep: &SemilinearRep<B>, f: &ExtPoly<B>) -> Result<ExtPoly<B>, ActionError> {
    check_nonmodular(rep)?;
    Ok(average(rep, f, 0..rep.grpext().e.order()))
}

fn average<B: BaseField>(rep: &SemilinearRep<B>, f: &ExtPoly<B>, elems: impl Iterator<Item = usize>) -> ExtPoly<B> {
    let ext = rep.ext();
    let mut acc = MultiPoly::zero(f.nvars());
    let mut count = 0i64;
    for g in elems {
        acc = acc.add(ext, &act(rep, g, f));
        count += 1;
    }
    acc.scale(ext, &ext.inv(&ext.from_i64(count)).expect("nonmodular"))
}

/// Numbering of `k`-coordinates of `k'[T]`: monomial `m` and power-basis
/// index `c` get column `index(m) * [k':k] + c`, monomials numbered on first sight.
#[derive(Debug, Clone, Default)]
pub struct CoordMap {
    deg: usize,
    index: HashMap<Monomial, usize>,
    monos: Vec<Monomial>,
}

impl CoordMap {
    pub fn new(deg: usize) -> Self {
        CoordMap { deg, index: HashMap::new(), monos: Vec::new() }
    }

    /// Pre-numbers monomials in the given order.
    pub fn with_monomials(deg: usize, monos: Vec<Monomial>) -> Self {
        let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        CoordMap { deg, index, monos }
    }

    fn slot(&mut self, m: &Monomial) -> usize {
        if let Some(&i) = self.index.get(m) {
            return i;
        }
        self.monos.push(m.clone());
        self.index.insert(m.clone(), self.monos.len() - 1);
        self.monos.len() - 1
    }

    pub fn to_sparse<E: Clone + PartialEq, B: Field<Elem = E>>(&mut self, base: &B, p: &MultiPoly<ExtElement<E>>) -> SparseVec<E> {
        let mut v = Vec::with_capacity(p.len() * self.deg);
        for (m, c) in p.terms() {
            let i = self.slot(m);
            for (j, x) in c.coords().iter().enumerate() {
                if !base.is_zero(x) {
                    v.push((i * self.deg + j, x.clone()));
                }
            }
        }
        v.sort_unstable_by_key(|(c, _)| *c);
        v
    }

    pub fn from_sparse<B: BaseField>(&self, ext: &GaloisExtension<B>, nvars: usize, v: &[(usize, B::Elem)]) -> ExtPoly<B> {
        let mut coords: HashMap<usize, Vec<B::Elem>> = HashMap::new();
        for (col, x) in v {
            let e = coords.entry(col / self.deg).or_insert_with(|| vec![ext.base().zero(); self.deg]);
            e[col % self.deg] = x.clone();
        }
        let terms = coords
            .into_iter()
            .map(|(i, c)| (self.monos[i].clone(), ext.from_coords(&c)))
            .collect();
        MultiPoly::from_terms(ext, nvars, terms)
    }
}

/// Reynolds images spanning the degree-`d` invariants over `k`.
///
/// For monomial representations `R(a * (h . m))` is a `k`-multiple of
/// `R(sigma^{-1}(a) m)`, so one monomial per orbit suffices.
fn invariant_spanning_set<B: BaseField>(rep: &SemilinearRep<B>, d: u32, mut sink: impl FnMut(ExtPoly<B>) -> bool) {
    let ext = rep.ext();
    let n = rep.dim();
    let monomial = rep.is_monomial();
    let order = rep.grpext().e.order();
    let mut covered: HashSet<Monomial> = HashSet::new();
    for m in monomial_basis(n, d) {
        if covered.contains(&m) {
            continue;
        }
        if monomial {
            let unit = MultiPoly::term(ext, m.clone(), ext.one());
            for g in 0..order {
                for (t, _) in act(rep, g, &unit).terms() {
                    covered.insert(t.clone());
                }
            }
        }
        for c in 0..ext.degree() {
            let p = MultiPoly::term(ext, m.clone(), ext.basis_element(c));
            if sink(average(rep, &p, 0..order)) {
                return;
            }
        }
    }
}

/// A `k`-basis of `(k'[T]_d)^E` in reduced row echelon form with respect
/// to the `k`-coordinates ordered by graded lex monomials, then power basis.
pub fn invariant_basis<B: BaseField>(rep: &SemilinearRep<B>, d: u32) -> Result<Vec<ExtPoly<B>>, ActionError> {
    check_nonmodular(rep)?;
    let ext = rep.ext();
    let n = rep.dim();
    let monos = monomial_basis(n, d);
    let ncols = monos.len() * ext.degree();
    let mut coords = CoordMap::with_monomials(ext.degree(), monos);
    let base = ext.base();
    let mut rows = Vec::new();
    invariant_spanning_set(rep, d, |p| {
        let mut row = vec![base.zero(); ncols];
        for (c, x) in coords.to_sparse(base, &p) {
            row[c] = x;
        }
        rows.push(row);
        false
    });
    rref(base, &mut rows, ncols);
    Ok(rows
        .iter()
        .map(|r| {
            let sparse: Vec<_> = r.iter().cloned().enumerate().filter(|(_, x)| !base.is_zero(x)).collect();
            coords.from_sparse(ext, n, &sparse)
        })
        .collect())
}

/// `dim_k (k'[T]_d)^E`, by sparse elimination (suitable for large `d`).
pub fn invariant_dim<B: BaseField>(rep: &SemilinearRep<B>, d: u32) -> Result<usize, ActionError> {
    check_nonmodular(rep)?;
    let ext = rep.ext();
    let mut coords = CoordMap::new(ext.degree());
    let mut ech = SparseEchelon::new(ext.base().clone());
    invariant_spanning_set(rep, d, |p| {
        ech.insert(coords.to_sparse(ext.base(), &p));
        false
    });
    Ok(ech.rank())
}

/// One degree of the generation certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationStep {
    pub j: u32,
    pub degree: u32,
    /// `dim_k A_{jd}`.
    pub invariant_dim: usize,
    /// `dim_k A_d A_{(j-1)d}`.
    pub product_dim: usize,
    pub passed: bool,
}

/// Checks `A_{jd} = A_d A_{(j-1)d}` for `j = 2..J`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationCertificate {
    pub d: u32,
    pub j_max: u32,
    pub steps: Vec<GenerationStep>,
    pub passed: bool,
}

/// The quotient map `[f_0 : ... : f_s]` given by a basis of degree-`d` invariants.
#[derive(Debug, Clone)]
pub struct QuotientMapData<B: BaseField> {
    pub d: u32,
    pub fs: Vec<ExtPoly<B>>,
    pub gen_cert: Option<GenerationCertificate>,
}

impl<B: BaseField> QuotientMapData<B> {
    /// `s`, so that the map lands in `P^s`; `-1` when there are no invariants.
    pub fn s(&self) -> i64 {
        self.fs.len() as i64 - 1
    }
}

/// Default certificate range: `max(2, ceil((n+1) |E| / d))`.
pub fn default_j(nvars: usize, group_order: usize, d: u32) -> u32 {
    let num = (nvars * group_order) as u32;
    num.div_ceil(d).max(2)
}

/// Verifies `A_{jd} = A_d . A_{(j-1)d}` for `j = 2..=j_max`, stopping at the first failure.
pub fn generation_certificate<B: BaseField>(
    rep: &SemilinearRep<B>,
    fs: &[ExtPoly<B>],
    d: u32,
    j_max: u32,
) -> Result<GenerationCertificate, ActionError> {
    check_nonmodular(rep)?;
    let ext = rep.ext();
    let base = ext.base();
    let n = rep.dim();
    let mut prev: Vec<ExtPoly<B>> = fs.to_vec();
    let mut steps = Vec::new();
    let mut passed = true;
    for j in 2..=j_max {
        let target = invariant_dim(rep, j * d)?;
        let mut coords = CoordMap::new(ext.degree());
        let mut ech = SparseEchelon::new(base.clone());
        'fill: for b in &prev {
            for a in fs {
                if ech.rank() == target {
                    break 'fill;
                }
                ech.insert(coords.to_sparse(base, &a.mul(ext, b)));
            }
        }
        let ok = ech.rank() == target;
        steps.push(GenerationStep { j, degree: j * d, invariant_dim: target, product_dim: ech.rank(), passed: ok });
        if !ok {
            passed = false;
            break;
        }
        prev = ech.rows().iter().map(|r| coords.from_sparse(ext, n, r)).collect();
    }
    Ok(GenerationCertificate { d, j_max, steps, passed })
}

/// Both sides of the descent identity in degree `d`:
/// `(dim_{k'} (k'[T]_d)^G, dim_k (k'[T]_d)^E)`.
pub fn descent_dims<B: BaseField>(rep: &SemilinearRep<B>, d: u32) -> Result<(usize, usize), ActionError> {
    check_nonmodular(rep)?;
    let ext = rep.ext();
    let geometric: Vec<usize> = rep.grpext().iota_image();
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    let mut ech = SparseEchelon::new(ext.clone());
    for m in monomial_basis(rep.dim(), d) {
        let p = MultiPoly::term(ext, m, ext.one());
        let r = average(rep, &p, geometric.iter().copied());
        let mut v: Vec<_> = r
            .terms()
            .iter()
            .map(|(t, c)| {
                let next = index.len();
                (*index.entry(t.clone()).or_insert(next), c.clone())
            })
            .collect();
        v.sort_unstable_by_key(|(c, _)| *c);
        ech.insert(v);
    }
    Ok((ech.rank(), invariant_dim(rep, d)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{PrimeField, Rationals, SimpleExtension};
    use crate::groups::{FiniteGroup, GroupExtension};
    use crate::linalg::Matrix;

    fn swap_rep(copies: usize) -> SemilinearRep<PrimeField> {
        let f = PrimeField::new(5).unwrap();
        SemilinearRep::regular(GaloisExtension::trivial(f), GroupExtension::geometric(FiniteGroup::cyclic(2)))
            .unwrap()
            .sum_copies(copies)
    }

    fn gaussian() -> GaloisExtension<Rationals> {
        let q = Rationals;
        let m = vec![q.one(), q.zero(), q.one()];
        let k = SimpleExtension::new(q, m.clone()).unwrap();
        let x = k.generator();
        GaloisExtension::new(q, m, vec![x.clone(), k.neg(&x)], FiniteGroup::cyclic(2), &[0, 1]).unwrap()
    }

    #[test]
    fn swap_acts_on_variables() {
        let rep = swap_rep(1);
        let k = rep.ext();
        let t0 = MultiPoly::var(k, 2, 0);
        assert_eq!(act(&rep, 1, &t0), MultiPoly::var(k, 2, 1));
        assert_eq!(act(&rep, 0, &t0), t0);
        let r = reynolds(&rep, &t0).unwrap();
        // (T0 + T1)/2 with 1/2 = 3 in F_5
        assert_eq!(r.format(k, 'T'), "3*T0 + 3*T1");
    }

    #[test]
    fn conjugation_only_kills_i_t0() {
        let k = gaussian();
        let grp = GroupExtension::pure_galois(FiniteGroup::cyclic(2));
        let one = Matrix::identity(k.base(), 1);
        let rep = SemilinearRep::new(k.clone(), grp, vec![one.clone(), one]).unwrap();
        let it0 = MultiPoly::term(&k, Monomial::new(&[1]), k.field().generator());
        assert!(reynolds(&rep, &it0).unwrap().is_zero());
        assert_eq!(act(&rep, 1, &it0), it0.neg(&k));
    }

    #[test]
    fn twisted_regular_z4_over_gaussians() {
        let k = gaussian();
        let grp = GroupExtension {
            g: FiniteGroup::cyclic(2),
            e: FiniteGroup::cyclic(4),
            gamma: FiniteGroup::cyclic(2),
            iota: crate::groups::GroupHom::new(vec![0, 2]),
            pi: crate::groups::GroupHom::new(vec![0, 1, 0, 1]),
        };
        let rep = SemilinearRep::regular(k.clone(), grp).unwrap();
        let it0 = MultiPoly::term(&k, Monomial::new(&[1, 0, 0, 0]), k.field().generator());
        let got = act(&rep, 1, &it0);
        assert_eq!(got.format(&k, 'T'), "(-x)*T1");
        assert_eq!(act(&rep, 1, &act(&rep, 1, &it0)), act(&rep, 2, &it0));
    }

    #[test]
    fn swap_invariants_in_degree_two() {
        let rep = swap_rep(1);
        let basis = invariant_basis(&rep, 2).unwrap();
        let shown: Vec<_> = basis.iter().map(|p| p.format(rep.ext(), 'T')).collect();
        assert_eq!(shown, vec!["1*T0^2 + 1*T1^2", "1*T0*T1"]);
        let cert = generation_certificate(&rep, &basis, 2, 3).unwrap();
        assert!(cert.passed);
        assert_eq!(cert.steps[0].invariant_dim, 3);
    }

    #[test]
    fn block_swap_has_twelve_quadratic_invariants() {
        let rep = swap_rep(3);
        assert_eq!(invariant_basis(&rep, 2).unwrap().len(), 12);
        assert_eq!(invariant_dim(&rep, 2).unwrap(), 12);
    }

    #[test]
    fn sign_action_fails_in_degree_one() {
        let f = PrimeField::new(5).unwrap();
        let grp = GroupExtension::geometric(FiniteGroup::cyclic(2));
        let rep = SemilinearRep::new(
            GaloisExtension::trivial(f),
            grp,
            vec![Matrix::from_rows(vec![vec![1]]), Matrix::from_rows(vec![vec![4]])],
        )
        .unwrap();
        let b1 = invariant_basis(&rep, 1).unwrap();
        assert!(b1.is_empty());
        assert!(!generation_certificate(&rep, &b1, 1, 2).unwrap().passed);
        let b2 = invariant_basis(&rep, 2).unwrap();
        assert!(generation_certificate(&rep, &b2, 2, 3).unwrap().passed);
    }

    #[test]
    fn modular_characteristic_is_refused() {
        let f = PrimeField::new(2).unwrap();
        let rep =
            SemilinearRep::regular(GaloisExtension::trivial(f), GroupExtension::geometric(FiniteGroup::cyclic(2))).unwrap();
        assert!(matches!(invariant_basis(&rep, 2), Err(ActionError::ModularCharacteristic { p: 2, order: 2 })));
    }

    #[test]
    fn default_j_range() {
        assert_eq!(default_j(6, 2, 2), 6);
        assert_eq!(default_j(2, 2, 2), 2);
        assert_eq!(default_j(6, 4, 4), 6);
    }
}
