//! Finite groups given by multiplication tables, homomorphisms, extensions
//! `1 -> G -> E -> Gamma -> 1`, and the reduction that replaces `E` by a
//! finite quotient `E/H` with `E` recovered as a fiber product.
//!
//! Elements are indices `0..order`. Everything is exhaustive, which is fine
//! for the tiny groups this crate handles (order at most about 100).

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("multiplication table is not {0}x{0} with entries below {0}")]
    MalformedTable(usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(String),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("map has {got} entries, expected {expected}")]
    MapLength { expected: usize, got: usize },
    #[error("map is not a homomorphism: f({a}*{b}) != f({a})*f({b})")]
    NotHomomorphism { a: String, b: String },
    #[error("iota is not injective: {a} and {b} have the same image")]
    NotInjective { a: String, b: String },
    #[error("pi is not surjective: {0} is not in the image")]
    NotSurjective(String),
    #[error("image of iota differs from the kernel of pi at {0}")]
    NotExact(String),
    #[error("unknown element label '{0}'")]
    UnknownLabel(String),
}

/// A finite group as a full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = labels.len();
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupError::MalformedTable(n));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| GroupError::NoInverse(labels[a].clone()))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(
                            labels[a].clone(),
                            labels[b].clone(),
                            labels[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(FiniteGroup { labels, table, identity, inverses })
    }

    fn from_trusted(labels: Vec<String>, table: Vec<Vec<usize>>) -> Self {
        Self::from_table(labels, table).expect("internally built table is a group")
    }

    /// `Z/n` with elements labelled `0..n-1`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let labels = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_trusted(labels, table)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `S_n` on permutations in lexicographic order; `a*b` applies `b` first.
    pub fn symmetric(n: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
        let mut out = Vec::new();
        while let Some(p) = perms.pop() {
            out.push(p.clone());
            // next permutation in lexicographic order
            let mut q = p;
            if let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| q[i] < q[i + 1]) {
                let j = (i + 1..n).rev().find(|&j| q[j] > q[i]).unwrap();
                q.swap(i, j);
                q[i + 1..].reverse();
                perms.push(q);
            }
        }
        let index: HashMap<Vec<usize>, usize> =
            out.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let table = out
            .iter()
            .map(|a| {
                out.iter()
                    .map(|b| index[&b.iter().map(|&x| a[x]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        let labels = out
            .iter()
            .map(|p| p.iter().map(|x| x.to_string()).collect::<String>())
            .collect();
        Self::from_trusted(labels, table)
    }

    /// `A x B`, element `(a, b)` at index `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let mut labels = Vec::with_capacity(na * nb);
        for x in 0..na {
            for y in 0..nb {
                labels.push(format!("({},{})", a.labels[x], b.labels[y]));
            }
        }
        let table = (0..na * nb)
            .map(|p| {
                (0..na * nb)
                    .map(|q| a.mul(p / nb, q / nb) * nb + b.mul(p % nb, q % nb))
                    .collect()
            })
            .collect();
        Self::from_trusted(labels, table)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of(&self, label: &str) -> Result<usize, GroupError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| GroupError::UnknownLabel(label.to_string()))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The subgroup generated by `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                let b = self.mul(a, g);
                if !inside[b] {
                    inside[b] = true;
                    queue.push_back(b);
                }
            }
        }
        (0..self.order()).filter(|&a| inside[a]).collect()
    }

    /// Every subgroup, found by closing each known subgroup under one more element.
    pub fn all_subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::from([vec![self.identity]]);
        found.insert(vec![self.identity]);
        while let Some(s) = queue.pop_front() {
            for g in 0..self.order() {
                if s.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = s.clone();
                gens.push(g);
                let t = self.closure(&gens);
                if found.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        let mut out: Vec<_> = found.into_iter().collect();
        out.sort_by_key(|s| (s.len(), s.clone()));
        out
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        (0..self.order()).all(|g| {
            sub.iter()
                .all(|&h| sub.binary_search(&self.mul(self.mul(g, h), self.inv(g))).is_ok())
        })
    }

    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        self.all_subgroups().into_iter().filter(|s| self.is_normal(s)).collect()
    }

    /// `G/N` for a normal subgroup `N`, with the projection `G -> G/N`.
    /// Cosets are numbered by their smallest element, in increasing order.
    pub fn quotient(&self, normal: &[usize]) -> (FiniteGroup, Vec<usize>) {
        let mut proj = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if proj[g] != usize::MAX {
                continue;
            }
            for &h in normal {
                proj[self.mul(g, h)] = reps.len();
            }
            reps.push(g);
        }
        let labels = reps
            .iter()
            .map(|&g| if normal.len() == 1 { self.labels[g].clone() } else { format!("{}N", self.labels[g]) })
            .collect();
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| proj[self.mul(a, b)]).collect())
            .collect();
        (Self::from_trusted(labels, table), proj)
    }

    /// The subgroup on the listed elements, with its inclusion map.
    pub fn subgroup(&self, elems: &[usize]) -> (FiniteGroup, Vec<usize>) {
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let labels = elems.iter().map(|&e| self.labels[e].clone()).collect();
        let table = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| pos[&self.mul(a, b)]).collect())
            .collect();
        (Self::from_trusted(labels, table), elems.to_vec())
    }

    /// Multiset of element orders, a cheap isomorphism invariant.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<_> = (0..self.order()).map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    /// A small generating set, chosen greedily by decreasing element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut cand: Vec<usize> = (0..self.order()).collect();
        cand.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for a in cand {
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }
}

/// A map between finite groups, stored as the image of each element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub images: Vec<usize>,
}

impl GroupHom {
    pub fn new(images: Vec<usize>) -> Self {
        GroupHom { images }
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    pub fn check(&self, dom: &FiniteGroup, cod: &FiniteGroup) -> Result<(), GroupError> {
        if self.images.len() != dom.order() {
            return Err(GroupError::MapLength { expected: dom.order(), got: self.images.len() });
        }
        if self.images.iter().any(|&x| x >= cod.order()) {
            return Err(GroupError::MalformedTable(cod.order()));
        }
        for a in 0..dom.order() {
            for b in 0..dom.order() {
                if self.apply(dom.mul(a, b)) != cod.mul(self.apply(a), self.apply(b)) {
                    return Err(GroupError::NotHomomorphism {
                        a: dom.label(a).to_string(),
                        b: dom.label(b).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn kernel(&self, dom: &FiniteGroup, cod: &FiniteGroup) -> Vec<usize> {
        (0..dom.order()).filter(|&a| self.apply(a) == cod.identity()).collect()
    }
}

/// An extension `1 -> G -> E -> Gamma -> 1` of finite groups.
#[derive(Debug, Clone)]
pub struct GroupExtension {
    pub g: FiniteGroup,
    pub e: FiniteGroup,
    pub gamma: FiniteGroup,
    pub iota: GroupHom,
    pub pi: GroupHom,
}

/// Which exactness conditions an extension satisfies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionCertificate {
    pub iota_hom: bool,
    pub pi_hom: bool,
    pub injective: bool,
    pub surjective: bool,
    pub exact: bool,
    /// The first violated condition, with witnesses.
    pub failure: Option<String>,
}

impl ExtensionCertificate {
    pub fn valid(&self) -> bool {
        self.failure.is_none()
    }
}

impl GroupExtension {
    /// The extension `1 -> 1 -> E -> E -> 1` with `G` trivial.
    pub fn pure_galois(gamma: FiniteGroup) -> Self {
        let n = gamma.order();
        GroupExtension {
            g: FiniteGroup::trivial(),
            e: gamma.clone(),
            iota: GroupHom::new(vec![gamma.identity()]),
            pi: GroupHom::new((0..n).collect()),
            gamma,
        }
    }

    /// The extension `1 -> G -> G -> 1 -> 1`.
    pub fn geometric(g: FiniteGroup) -> Self {
        let n = g.order();
        GroupExtension {
            e: g.clone(),
            iota: GroupHom::new((0..n).collect()),
            pi: GroupHom::new(vec![0; n]),
            g,
            gamma: FiniteGroup::trivial(),
        }
    }

    /// Checks every condition and records which hold.
    pub fn certificate(&self) -> ExtensionCertificate {
        let iota_res = self.iota.check(&self.g, &self.e);
        let pi_res = self.pi.check(&self.e, &self.gamma);
        let mut cert = ExtensionCertificate {
            iota_hom: iota_res.is_ok(),
            pi_hom: pi_res.is_ok(),
            injective: false,
            surjective: false,
            exact: false,
            failure: None,
        };
        let mut failures = Vec::new();
        if let Err(e) = iota_res {
            failures.push(format!("iota: {e}"));
        }
        if let Err(e) = pi_res {
            failures.push(format!("pi: {e}"));
        }
        if cert.iota_hom && cert.pi_hom {
            match self.injectivity() {
                Ok(()) => cert.injective = true,
                Err(e) => failures.push(e.to_string()),
            }
            match self.surjectivity() {
                Ok(()) => cert.surjective = true,
                Err(e) => failures.push(e.to_string()),
            }
            match self.exactness() {
                Ok(()) => cert.exact = true,
                Err(e) => failures.push(e.to_string()),
            }
        }
        cert.failure = failures.into_iter().next();
        cert
    }

    /// Like [`certificate`](Self::certificate) but stops at the first violation.
    pub fn validate(&self) -> Result<(), GroupError> {
        self.iota.check(&self.g, &self.e)?;
        self.pi.check(&self.e, &self.gamma)?;
        self.injectivity()?;
        self.surjectivity()?;
        self.exactness()
    }

    fn injectivity(&self) -> Result<(), GroupError> {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for a in 0..self.g.order() {
            if let Some(&b) = seen.get(&self.iota.apply(a)) {
                return Err(GroupError::NotInjective {
                    a: self.g.label(b).to_string(),
                    b: self.g.label(a).to_string(),
                });
            }
            seen.insert(self.iota.apply(a), a);
        }
        Ok(())
    }

    fn surjectivity(&self) -> Result<(), GroupError> {
        let mut hit = vec![false; self.gamma.order()];
        for a in 0..self.e.order() {
            hit[self.pi.apply(a)] = true;
        }
        match hit.iter().position(|&h| !h) {
            Some(x) => Err(GroupError::NotSurjective(self.gamma.label(x).to_string())),
            None => Ok(()),
        }
    }

    fn exactness(&self) -> Result<(), GroupError> {
        let image = self.iota_image();
        for a in 0..self.e.order() {
            let in_kernel = self.pi.apply(a) == self.gamma.identity();
            if in_kernel != image.binary_search(&a).is_ok() {
                return Err(GroupError::NotExact(self.e.label(a).to_string()));
            }
        }
        Ok(())
    }

    /// `iota(G)` as a sorted list of elements of `E`.
    pub fn iota_image(&self) -> Vec<usize> {
        let mut v: Vec<_> = self.iota.images.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The elements of `E` lying in `iota(G)` other than the identity.
    pub fn nontrivial_geometric(&self) -> Vec<usize> {
        self.iota_image().into_iter().filter(|&a| a != self.e.identity()).collect()
    }
}

/// A normal subgroup `H` of `E` meeting `iota(G)` trivially, with `H' = pi(H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionSubgroup {
    pub h: Vec<usize>,
    pub h_prime: Vec<usize>,
    /// `(h, pi(h))` for each element of `H`; `pi` restricted to `H` is injective.
    pub iso: Vec<(usize, usize)>,
}

/// All normal subgroups `H` of `E` with `H ∩ iota(G) = 1`.
///
/// Since `ker pi = iota(G)`, `pi` maps each such `H` isomorphically onto its
/// image, which is normal in `Gamma` because `pi` is surjective.
pub fn find_section_subgroups(ext: &GroupExtension) -> Vec<SectionSubgroup> {
    let image = ext.iota_image();
    ext.e
        .normal_subgroups()
        .into_iter()
        .filter(|h| h.iter().all(|a| *a == ext.e.identity() || image.binary_search(a).is_err()))
        .map(|h| {
            let iso: Vec<_> = h.iter().map(|&a| (a, ext.pi.apply(a))).collect();
            let mut h_prime: Vec<_> = iso.iter().map(|&(_, b)| b).collect();
            h_prime.sort_unstable();
            SectionSubgroup { h, h_prime, iso }
        })
        .collect()
}

/// The data of `E ≅ (E/H) ×_{Gamma/H'} Gamma`.
#[derive(Debug, Clone)]
pub struct FiberProduct {
    /// `E/H`.
    pub e_tilde: FiniteGroup,
    /// `E -> E/H`.
    pub q: Vec<usize>,
    /// `Gamma/H'`.
    pub gamma_bar: FiniteGroup,
    /// `Gamma -> Gamma/H'`.
    pub gamma_proj: Vec<usize>,
    /// The fiber product, as a subgroup of `E/H x Gamma`.
    pub fiber: FiniteGroup,
    /// `(x, y)` pair of each fiber product element.
    pub pairs: Vec<(usize, usize)>,
    /// An isomorphism `E -> fiber` commuting with the maps to `E/H` and `Gamma`.
    pub iso: Option<Vec<usize>>,
}

/// Builds `E/H`, `Gamma/H'` and their fiber product over `Gamma/H'`, and
/// searches for an isomorphism from `E` that is compatible with both projections.
pub fn fiber_product_reconstruct(ext: &GroupExtension, section: &SectionSubgroup) -> FiberProduct {
    let (e_tilde, q) = ext.e.quotient(&section.h);
    let (gamma_bar, gamma_proj) = ext.gamma.quotient(&section.h_prime);
    // E/H -> Gamma/H' induced by pi
    let mut pi_bar = vec![usize::MAX; e_tilde.order()];
    for a in 0..ext.e.order() {
        pi_bar[q[a]] = gamma_proj[ext.pi.apply(a)];
    }
    let product = FiniteGroup::direct_product(&e_tilde, &ext.gamma);
    let ng = ext.gamma.order();
    let elems: Vec<usize> = (0..product.order())
        .filter(|&p| pi_bar[p / ng] == gamma_proj[p % ng])
        .collect();
    let pairs: Vec<_> = elems.iter().map(|&p| (p / ng, p % ng)).collect();
    let (fiber, _) = product.subgroup(&elems);
    let iso = find_isomorphism_with(&ext.e, &fiber, |a, b| {
        pairs[b] == (q[a], ext.pi.apply(a))
    });
    FiberProduct { e_tilde, q, gamma_bar, gamma_proj, fiber, pairs, iso }
}

/// Searches for an isomorphism `A -> B` with `allowed(a, f(a))` for every `a`.
///
/// Backtracks over images of a generating set, pruning by element order.
pub fn find_isomorphism_with(
    a: &FiniteGroup,
    b: &FiniteGroup,
    allowed: impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    if a.order() != b.order() || a.order_profile() != b.order_profile() {
        return None;
    }
    let gens = a.generators();
    let ord_a: Vec<_> = gens.iter().map(|&g| a.element_order(g)).collect();
    let ord_b: Vec<_> = (0..b.order()).map(|x| b.element_order(x)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .zip(&ord_a)
        .map(|(&g, &o)| (0..b.order()).filter(|&x| ord_b[x] == o && allowed(g, x)).collect())
        .collect();
    let mut choice = Vec::with_capacity(gens.len());
    search(a, b, &gens, &candidates, &mut choice, &allowed)
}

fn search(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    choice: &mut Vec<usize>,
    allowed: &impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    if choice.len() == gens.len() {
        let map = extend_to_hom(a, b, gens, choice)?;
        let mut hit = vec![false; b.order()];
        for (x, &y) in map.iter().enumerate() {
            if hit[y] || !allowed(x, y) {
                return None;
            }
            hit[y] = true;
        }
        return Some(map);
    }
    for &c in &candidates[choice.len()] {
        choice.push(c);
        if let Some(m) = search(a, b, gens, candidates, choice, allowed) {
            return Some(m);
        }
        choice.pop();
    }
    None
}

/// Extends generator images along the Cayley graph; `None` if inconsistent.
fn extend_to_hom(a: &FiniteGroup, b: &FiniteGroup, gens: &[usize], imgs: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; a.order()];
    map[a.identity()] = b.identity();
    let mut queue = VecDeque::from([a.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&g, &h) in gens.iter().zip(imgs) {
            let y = a.mul(x, g);
            let fy = b.mul(map[x], h);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4_over_z2() -> GroupExtension {
        GroupExtension {
            g: FiniteGroup::cyclic(2),
            e: FiniteGroup::cyclic(4),
            gamma: FiniteGroup::cyclic(2),
            iota: GroupHom::new(vec![0, 2]),
            pi: GroupHom::new(vec![0, 1, 0, 1]),
        }
    }

    fn split(g: &FiniteGroup, gamma: &FiniteGroup) -> GroupExtension {
        let e = FiniteGroup::direct_product(g, gamma);
        let ng = gamma.order();
        GroupExtension {
            iota: GroupHom::new((0..g.order()).map(|a| a * ng + gamma.identity()).collect()),
            pi: GroupHom::new((0..e.order()).map(|p| p % ng).collect()),
            g: g.clone(),
            gamma: gamma.clone(),
            e,
        }
    }

    #[test]
    fn rejects_non_groups() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert_eq!(
            FiniteGroup::from_table(labels.clone(), vec![vec![0, 1], vec![1, 1]]),
            Err(GroupError::NoInverse("b".into()))
        );
        assert_eq!(
            FiniteGroup::from_table(labels, vec![vec![0, 1], vec![1, 2]]),
            Err(GroupError::MalformedTable(2))
        );
    }

    #[test]
    fn symmetric_group_of_degree_three() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.order_profile(), vec![1, 2, 2, 2, 3, 3]);
        assert_eq!(s3.all_subgroups().len(), 6);
        assert_eq!(s3.normal_subgroups().len(), 3);
    }

    #[test]
    fn extension_validation() {
        assert!(z4_over_z2().validate().is_ok());
        let z2 = FiniteGroup::cyclic(2);
        assert!(split(&z2, &z2).validate().is_ok());
        // squaring map Z/4 -> Z/4 is not surjective
        let bad = GroupExtension {
            g: FiniteGroup::cyclic(2),
            e: FiniteGroup::cyclic(4),
            gamma: FiniteGroup::cyclic(4),
            iota: GroupHom::new(vec![0, 2]),
            pi: GroupHom::new(vec![0, 2, 0, 2]),
        };
        assert_eq!(bad.validate(), Err(GroupError::NotSurjective("1".into())));
        let cert = bad.certificate();
        assert!(cert.injective && !cert.surjective && !cert.valid());
    }

    #[test]
    fn sections_of_z4_over_z2() {
        let ext = z4_over_z2();
        let hs = find_section_subgroups(&ext);
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].h, vec![0]);
        let fp = fiber_product_reconstruct(&ext, &hs[0]);
        assert_eq!(fp.fiber.order(), 4);
        assert!(fp.iso.is_some());
    }

    #[test]
    fn split_extension_has_complement() {
        let z2 = FiniteGroup::cyclic(2);
        let z3 = FiniteGroup::cyclic(3);
        let ext = split(&z2, &z3);
        let hs = find_section_subgroups(&ext);
        let complement: Vec<usize> = vec![0, 1, 2];
        let h = hs.iter().find(|s| s.h == complement).expect("{1} x Gamma qualifies");
        assert_eq!(h.h_prime, vec![0, 1, 2]);
        let fp = fiber_product_reconstruct(&ext, h);
        assert_eq!(fp.e_tilde.order(), 2);
        assert_eq!(fp.gamma_bar.order(), 1);
        assert!(fp.iso.is_some());
    }

    #[test]
    fn trivial_gamma_only_trivial_section() {
        let ext = GroupExtension::geometric(FiniteGroup::cyclic(2));
        assert!(ext.validate().is_ok());
        let hs = find_section_subgroups(&ext);
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].h, vec![0]);
    }

    #[test]
    fn isomorphism_search_distinguishes_groups() {
        let z6 = FiniteGroup::cyclic(6);
        let s3 = FiniteGroup::symmetric(3);
        let z2z3 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
        assert!(find_isomorphism_with(&z6, &z2z3, |_, _| true).is_some());
        assert!(find_isomorphism_with(&z6, &s3, |_, _| true).is_none());
        let z4 = FiniteGroup::cyclic(4);
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert!(find_isomorphism_with(&z4, &v4, |_, _| true).is_none());
    }
}
