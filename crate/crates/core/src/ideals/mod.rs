//! Gröbner bases and the ideal-theoretic queries built on them: normal
//! forms, elimination, saturation by the irrelevant ideal, projective
//! dimension and emptiness, and the Jacobian certificate for complete
//! intersections.
//!
//! Emptiness and dimension are read off leading terms. A projective
//! scheme `V_+(I)` is empty exactly when `LT(I)` contains a pure power of
//! every variable, and `dim R/I = dim R/LT(I)`. Because the leading terms
//! of any elements of `I` lie in `LT(I)`, both tests can stop as soon as a
//! partial basis already decides them.

mod groebner;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::fields::Field;
use crate::poly::{maximal_minors, Monomial, MultiPoly};
use groebner::{normal_form_terms, Engine, Key, OrdPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdealError {
    #[error("Gröbner budget exceeded: {what} above {limit}")]
    Budget { what: &'static str, limit: usize },
    #[error("generator {0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error("generator {index} has {got} variables, expected {expected}")]
    Arity { index: usize, expected: usize, got: usize },
}

/// A monomial order.
///
/// `Grevlex` compares total degree, then prefers the smaller exponent in the
/// last variable where the two differ. `BlockElim(k)` compares the first `k`
/// variables by grevlex and breaks ties with grevlex on the rest, so any
/// monomial involving the first block beats every monomial free of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonomialOrder {
    Grevlex,
    BlockElim(usize),
}

impl MonomialOrder {
    /// A key whose lexicographic order is this monomial order.
    pub(crate) fn key(&self, m: &Monomial) -> Key {
        let e = m.exps();
        let mut k: Key = SmallVec::with_capacity(e.len() + 2);
        let mut block = |range: std::ops::Range<usize>| {
            k.push(e[range.clone()].iter().map(|&x| x as i32).sum());
            k.extend(e[range].iter().rev().map(|&x| -(x as i32)));
        };
        match *self {
            MonomialOrder::Grevlex => block(0..e.len()),
            MonomialOrder::BlockElim(b) => {
                let b = b.min(e.len());
                block(0..b);
                block(b..e.len());
            }
        }
        k
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }
}

/// Resource caps for a Buchberger run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbBudget {
    pub max_pairs: usize,
    pub max_basis: usize,
    /// Largest sugar degree processed.
    pub max_degree: u32,
    /// Largest support of a polynomial under reduction.
    pub max_terms: usize,
    /// Stop quietly at the degree cap, marking the result partial, instead
    /// of failing.
    pub allow_partial: bool,
}

impl Default for GbBudget {
    fn default() -> Self {
        GbBudget { max_pairs: 2_000_000, max_basis: 100_000, max_degree: 200, max_terms: 5_000_000, allow_partial: false }
    }
}

/// Early termination rules, checked against the leading monomials found so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopRule {
    Never,
    /// Stop once the leading terms contain a pure power of every variable.
    Empty,
    /// Stop once the leading terms show `dim Proj <= bound`.
    DimAtMost(i64),
}

/// A Gröbner basis, reduced when `complete` is set.
#[derive(Debug, Clone)]
pub struct GroebnerBasis<E> {
    order: MonomialOrder,
    nvars: usize,
    polys: Vec<OrdPoly<E>>,
    complete: bool,
}

impl<E: Clone + PartialEq> GroebnerBasis<E> {
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// False if the run stopped early or hit the degree cap; the elements are
    /// then members of the ideal but need not form a basis.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Basis elements, ascending by leading monomial.
    pub fn polys(&self) -> Vec<MultiPoly<E>> {
        self.polys.iter().map(|p| to_multi(self.nvars, &p.terms)).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p.lm().clone()).collect()
    }

    pub fn normal_form<F: Field<Elem = E>>(&self, f: &F, p: &MultiPoly<E>) -> MultiPoly<E> {
        let refs: Vec<&OrdPoly<E>> = self.polys.iter().collect();
        to_multi(self.nvars, &normal_form_terms(f, self.order, &refs, p.terms().to_vec()))
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, p: &MultiPoly<E>) -> bool {
        self.normal_form(f, p).is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(|p| p.lm().degree() == 0)
    }

    /// Krull dimension of `R/I` (`-1` for the unit ideal).
    pub fn krull_dimension(&self) -> i64 {
        krull_dimension(&self.leading_monomials(), self.nvars)
    }

    /// Dimension of `V_+(I)`, `-1` when empty.
    pub fn projective_dimension(&self) -> i64 {
        (self.krull_dimension() - 1).max(-1)
    }
}

fn to_multi<E: Clone + PartialEq>(nvars: usize, terms: &[(Monomial, E)]) -> MultiPoly<E> {
    let mut t = terms.to_vec();
    t.sort_by(|a, b| b.0.cmp(&a.0));
    MultiPoly::from_sorted_unchecked(nvars, t)
}

/// Krull dimension of `R / (ms)`: the largest set of variables containing the
/// support of no monomial in `ms`. Computed as `n` minus a minimum hitting
/// set of the supports, by branch and bound.
pub fn krull_dimension(ms: &[Monomial], nvars: usize) -> i64 {
    assert!(nvars <= 128, "too many variables for the dimension search");
    let mut sets: Vec<u128> = Vec::new();
    for m in ms {
        let s = m.exps().iter().enumerate().filter(|(_, &e)| e > 0).fold(0u128, |a, (i, _)| a | 1 << i);
        if s == 0 {
            return -1;
        }
        sets.push(s);
    }
    sets.sort_by_key(|s| s.count_ones());
    sets.dedup();
    let mut minimal: Vec<u128> = Vec::new();
    for s in sets {
        if !minimal.iter().any(|&t| t & s == t) {
            minimal.push(s);
        }
    }
    fn hit(sets: &[u128], chosen: u128, size: usize, best: &mut usize) {
        if size >= *best {
            return;
        }
        let Some(&open) = sets.iter().find(|&&s| s & chosen == 0) else {
            *best = size;
            return;
        };
        let mut bits = open;
        while bits != 0 {
            let b = bits & bits.wrapping_neg();
            hit(sets, chosen | b, size + 1, best);
            bits &= bits - 1;
        }
    }
    let mut best = nvars;
    hit(&minimal, 0, 0, &mut best);
    (nvars - best) as i64
}

/// A homogeneous ideal with an optional cached Gröbner basis.
#[derive(Debug, Clone)]
pub struct HomIdeal<E> {
    nvars: usize,
    gens: Vec<MultiPoly<E>>,
    cached: Option<GroebnerBasis<E>>,
}

impl<E: Clone + PartialEq> HomIdeal<E> {
    pub fn new(nvars: usize, gens: Vec<MultiPoly<E>>) -> Result<Self, IdealError> {
        for (i, g) in gens.iter().enumerate() {
            if g.nvars() != nvars {
                return Err(IdealError::Arity { index: i, expected: nvars, got: g.nvars() });
            }
            if !g.is_homogeneous() {
                return Err(IdealError::NotHomogeneous(i));
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(HomIdeal { nvars, gens, cached: None })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[MultiPoly<E>] {
        &self.gens
    }

    pub fn cached_basis(&self) -> Option<&GroebnerBasis<E>> {
        self.cached.as_ref()
    }

    /// Computes and stores a complete Gröbner basis.
    pub fn with_basis<F: Field<Elem = E>>(mut self, f: &F, order: MonomialOrder, budget: &GbBudget) -> Result<Self, IdealError> {
        self.cached = Some(groebner_basis(f, &self, order, budget)?);
        Ok(self)
    }

    /// The ideal generated by both generator lists.
    pub fn sum(&self, other: &[MultiPoly<E>]) -> Result<Self, IdealError> {
        let mut gens = self.gens.clone();
        gens.extend(other.iter().cloned());
        HomIdeal::new(self.nvars, gens)
    }
}

fn run<F: Field>(
    f: &F,
    nvars: usize,
    gens: &[MultiPoly<F::Elem>],
    order: MonomialOrder,
    budget: &GbBudget,
    stop: StopRule,
) -> Result<GroebnerBasis<F::Elem>, IdealError> {
    let r = Engine::new(f, order, budget, nvars).run(gens, &stop)?;
    Ok(GroebnerBasis { order, nvars, polys: r.basis, complete: r.complete })
}

/// The reduced Gröbner basis of `I`.
pub fn groebner_basis<F: Field>(
    f: &F,
    ideal: &HomIdeal<F::Elem>,
    order: MonomialOrder,
    budget: &GbBudget,
) -> Result<GroebnerBasis<F::Elem>, IdealError> {
    if let Some(gb) = ideal.cached.as_ref().filter(|gb| gb.order == order && gb.complete) {
        return Ok(gb.clone());
    }
    run(f, ideal.nvars, &ideal.gens, order, &GbBudget { allow_partial: false, ..budget.clone() }, StopRule::Never)
}

/// Remainder of `p` on division by a grevlex Gröbner basis of `I`.
pub fn normal_form<F: Field>(
    f: &F,
    p: &MultiPoly<F::Elem>,
    ideal: &HomIdeal<F::Elem>,
    budget: &GbBudget,
) -> Result<MultiPoly<F::Elem>, IdealError> {
    Ok(groebner_basis(f, ideal, MonomialOrder::Grevlex, budget)?.normal_form(f, p))
}

/// Whether `V_+(I)` is empty over the algebraic closure.
pub fn is_projectively_empty<F: Field>(f: &F, ideal: &HomIdeal<F::Elem>, budget: &GbBudget) -> Result<bool, IdealError> {
    if let Some(gb) = ideal.cached.as_ref().filter(|gb| gb.complete) {
        return Ok(gb.projective_dimension() < 0);
    }
    let strict = GbBudget { allow_partial: false, ..budget.clone() };
    let gb = run(f, ideal.nvars, &ideal.gens, MonomialOrder::Grevlex, &strict, StopRule::Empty)?;
    Ok(krull_dimension(&gb.leading_monomials(), ideal.nvars) <= 0)
}

/// `dim V_+(I)`, with `-1` for the empty set.
pub fn projective_dimension<F: Field>(f: &F, ideal: &HomIdeal<F::Elem>, budget: &GbBudget) -> Result<i64, IdealError> {
    Ok(groebner_basis(f, ideal, MonomialOrder::Grevlex, budget)?.projective_dimension())
}

/// Whether `dim V_+(I) <= bound`, stopping as soon as the leading terms decide it.
pub fn dimension_at_most<F: Field>(
    f: &F,
    ideal: &HomIdeal<F::Elem>,
    bound: i64,
    budget: &GbBudget,
) -> Result<bool, IdealError> {
    let strict = GbBudget { allow_partial: false, ..budget.clone() };
    let stop = if bound < 0 { StopRule::Empty } else { StopRule::DimAtMost(bound) };
    let gb = run(f, ideal.nvars, &ideal.gens, MonomialOrder::Grevlex, &strict, stop)?;
    Ok(krull_dimension(&gb.leading_monomials(), ideal.nvars) - 1 <= bound)
}

/// Elimination of the first `k` variables from arbitrary (not necessarily
/// homogeneous) generators. Returns generators of `I ∩ k[x_k..]` in the
/// remaining variables, and whether the run completed; with
/// `budget.allow_partial` a degree-capped run returns the eliminated elements
/// found so far.
pub fn eliminate_polys<F: Field>(
    f: &F,
    nvars: usize,
    gens: &[MultiPoly<F::Elem>],
    k: usize,
    budget: &GbBudget,
) -> Result<(Vec<MultiPoly<F::Elem>>, bool), IdealError> {
    let gb = run(f, nvars, gens, MonomialOrder::BlockElim(k), budget, StopRule::Never)?;
    let out = gb
        .polys
        .iter()
        .filter(|p| p.lm().exps()[..k].iter().all(|&e| e == 0))
        .map(|p| {
            let terms: Vec<(Monomial, F::Elem)> = p.terms.iter().map(|(m, c)| (m.restricted(k..nvars), c.clone())).collect();
            to_multi(nvars - k, &terms)
        })
        .collect();
    Ok((out, gb.complete))
}

/// `I ∩ k[T_k, .., T_n]`, renumbered from zero.
pub fn eliminate<F: Field>(
    f: &F,
    ideal: &HomIdeal<F::Elem>,
    first_block: usize,
    budget: &GbBudget,
) -> Result<HomIdeal<F::Elem>, IdealError> {
    let strict = GbBudget { allow_partial: false, ..budget.clone() };
    let (gens, _) = eliminate_polys(f, ideal.nvars, &ideal.gens, first_block, &strict)?;
    HomIdeal::new(ideal.nvars - first_block, gens)
}

/// Polynomials in one extra leading variable `t`.
fn lift<F: Field>(f: &F, p: &MultiPoly<F::Elem>, t_factor: Option<(i64, i64)>) -> MultiPoly<F::Elem> {
    let n = p.nvars() + 1;
    let base = p.shifted(n, 1);
    match t_factor {
        None => base,
        Some((a, b)) => {
            // (a*t + b) * p
            let lin = MultiPoly::var(f, n, 0)
                .scale(f, &f.from_i64(a))
                .add(f, &MultiPoly::constant(f, n, f.from_i64(b)));
            lin.mul(f, &base)
        }
    }
}

fn drop_t<F: Field>(gb: &GroebnerBasis<F::Elem>) -> Vec<MultiPoly<F::Elem>> {
    let n = gb.nvars;
    gb.polys
        .iter()
        .filter(|p| p.lm().exps()[0] == 0)
        .map(|p| {
            let terms: Vec<(Monomial, F::Elem)> = p.terms.iter().map(|(m, c)| (m.restricted(1..n), c.clone())).collect();
            to_multi(n - 1, &terms)
        })
        .collect()
}

/// `(I : T_i^∞)` via elimination of `t` from `(I, t*T_i - 1)`.
pub fn saturate_variable<F: Field>(
    f: &F,
    nvars: usize,
    gens: &[MultiPoly<F::Elem>],
    i: usize,
    budget: &GbBudget,
) -> Result<Vec<MultiPoly<F::Elem>>, IdealError> {
    let n = nvars + 1;
    let mut g: Vec<MultiPoly<F::Elem>> = gens.iter().map(|p| lift(f, p, None)).collect();
    let tt = MultiPoly::term(f, Monomial::var(n, 0).mul(&Monomial::var(n, i + 1)), f.one());
    g.push(tt.sub(f, &MultiPoly::constant(f, n, f.one())));
    Ok(drop_t::<F>(&run(f, n, &g, MonomialOrder::BlockElim(1), budget, StopRule::Never)?))
}

/// `I ∩ J` via elimination of `t` from `t*I + (1 - t)*J`.
pub fn intersect<F: Field>(
    f: &F,
    nvars: usize,
    a: &[MultiPoly<F::Elem>],
    b: &[MultiPoly<F::Elem>],
    budget: &GbBudget,
) -> Result<Vec<MultiPoly<F::Elem>>, IdealError> {
    let mut g: Vec<MultiPoly<F::Elem>> = a.iter().map(|p| lift(f, p, Some((1, 0)))).collect();
    g.extend(b.iter().map(|p| lift(f, p, Some((-1, 1)))));
    Ok(drop_t::<F>(&run(f, nvars + 1, &g, MonomialOrder::BlockElim(1), budget, StopRule::Never)?))
}

/// `(I : (T_0, .., T_n)^∞)` as the intersection of the variable saturations.
/// Returned with a reduced grevlex basis cached; the unit ideal comes back as `(1)`.
pub fn saturate_irrelevant<F: Field>(
    f: &F,
    ideal: &HomIdeal<F::Elem>,
    budget: &GbBudget,
) -> Result<HomIdeal<F::Elem>, IdealError> {
    let strict = GbBudget { allow_partial: false, ..budget.clone() };
    let n = ideal.nvars;
    let mut acc: Option<Vec<MultiPoly<F::Elem>>> = None;
    for i in 0..n {
        let s = saturate_variable(f, n, &ideal.gens, i, &strict)?;
        acc = Some(match acc {
            None => s,
            Some(prev) => intersect(f, n, &prev, &s, &strict)?,
        });
    }
    let gens = acc.unwrap_or_else(|| vec![MultiPoly::constant(f, 0, f.one())]);
    HomIdeal::new(n, gens)?.with_basis(f, MonomialOrder::Grevlex, &strict)
}

/// Result of the Jacobian criterion for `V_+(g_1, .., g_c)` in `P^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianCertificate {
    pub codim: usize,
    pub expected_dim: i64,
    /// The computed dimension, or the expected one when an upper bound and
    /// the principal ideal theorem pin it down.
    pub dim: i64,
    pub dim_ok: bool,
    pub smooth: bool,
}

impl JacobianCertificate {
    pub fn passed(&self) -> bool {
        self.dim_ok && self.smooth
    }
}

/// Checks that `g_1..g_c` cut out a smooth complete intersection of
/// dimension `n - c`: the dimension is `n - c`, and adding all `c x c` minors
/// of the Jacobian matrix gives the empty set.
///
/// For `c <= n` every component has dimension at least `n - c`, so an upper
/// bound found from partial leading terms settles the dimension.
pub fn jacobian_smooth_certificate<F: Field>(
    f: &F,
    nvars: usize,
    gens: &[MultiPoly<F::Elem>],
    budget: &GbBudget,
) -> Result<JacobianCertificate, IdealError> {
    let c = gens.len();
    let n = nvars as i64 - 1;
    let expected = n - c as i64;
    let ideal = HomIdeal::new(nvars, gens.to_vec())?;
    let (dim, dim_ok) = if c as i64 <= n {
        if dimension_at_most(f, &ideal, expected, budget)? {
            (expected, true)
        } else {
            let d = projective_dimension(f, &ideal, budget)?;
            (d, false)
        }
    } else {
        let d = projective_dimension(f, &ideal, budget)?;
        (d, d == expected)
    };
    let jac: Vec<Vec<MultiPoly<F::Elem>>> = gens.iter().map(|g| (0..nvars).map(|i| g.derivative(f, i)).collect()).collect();
    let minors = if c == 0 { Vec::new() } else { maximal_minors(f, &jac) };
    let smooth = is_projectively_empty(f, &ideal.sum(&minors)?, budget)?;
    Ok(JacobianCertificate { codim: c, expected_dim: expected, dim, dim_ok, smooth })
}
