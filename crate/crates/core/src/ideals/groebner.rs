//! Buchberger's algorithm with the Gebauer-Moeller pair criteria and the
//! sugar selection strategy.

use std::collections::{BTreeMap, BTreeSet};

use smallvec::SmallVec;

use super::{GbBudget, IdealError, MonomialOrder, StopRule};
use crate::fields::Field;
use crate::poly::{Monomial, MultiPoly};

pub(crate) type Key = SmallVec<[i32; 16]>;

/// A polynomial with terms sorted descending in a fixed monomial order and
/// a monic leading term.
#[derive(Debug, Clone)]
pub(crate) struct OrdPoly<E> {
    pub terms: Vec<(Monomial, E)>,
    pub sugar: u32,
    mask: u64,
}

impl<E: Clone> OrdPoly<E> {
    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    sugar: u32,
    lcm_key: Key,
    i: usize,
    j: usize,
}

/// Outcome of a Buchberger run.
#[derive(Debug, Clone)]
pub(crate) struct RunResult<E> {
    pub basis: Vec<OrdPoly<E>>,
    /// False when pairs were dropped by the degree cap or a stop rule fired.
    pub complete: bool,
}

pub(crate) struct Engine<'a, F: Field> {
    f: &'a F,
    order: MonomialOrder,
    budget: &'a GbBudget,
    nvars: usize,
    polys: Vec<OrdPoly<F::Elem>>,
    active: Vec<usize>,
    pairs: BTreeSet<Pair>,
    pairs_seen: usize,
    pure: Vec<bool>,
    pure_count: usize,
    dropped: bool,
}

impl<'a, F: Field> Engine<'a, F> {
    pub fn new(f: &'a F, order: MonomialOrder, budget: &'a GbBudget, nvars: usize) -> Self {
        Engine {
            f,
            order,
            budget,
            nvars,
            polys: Vec::new(),
            active: Vec::new(),
            pairs: BTreeSet::new(),
            pairs_seen: 0,
            pure: vec![false; nvars],
            pure_count: 0,
            dropped: false,
        }
    }

    pub fn to_ord(&self, p: &MultiPoly<F::Elem>) -> Option<OrdPoly<F::Elem>> {
        let mut terms = p.terms().to_vec();
        if terms.is_empty() {
            return None;
        }
        terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        let sugar = p.total_degree().unwrap_or(0);
        Some(self.make_monic(terms, sugar))
    }

    fn make_monic(&self, mut terms: Vec<(Monomial, F::Elem)>, sugar: u32) -> OrdPoly<F::Elem> {
        let inv = self.f.inv(&terms[0].1).expect("nonzero lead");
        if !self.f.is_one(&inv) {
            for t in terms.iter_mut() {
                t.1 = self.f.mul(&t.1, &inv);
            }
        }
        let mask = terms[0].0.support_mask();
        OrdPoly { terms, sugar, mask }
    }

    fn find_reducer(&self, m: &Monomial, among: &[usize]) -> Option<usize> {
        let mm = m.support_mask();
        among
            .iter()
            .copied()
            .find(|&g| self.polys[g].mask & !mm == 0 && self.polys[g].lm().divides(m))
    }

    /// Full reduction of `terms` (any order) against the active basis.
    fn reduce(&self, terms: Vec<(Monomial, F::Elem)>, mut sugar: u32) -> Result<Option<OrdPoly<F::Elem>>, IdealError> {
        let f = self.f;
        let mut work: BTreeMap<Key, (Monomial, F::Elem)> = BTreeMap::new();
        for (m, c) in terms {
            add_into(f, &mut work, self.order.key(&m), m, c);
        }
        let mut out = Vec::new();
        while let Some((_, (m, c))) = work.pop_last() {
            match self.find_reducer(&m, &self.active) {
                Some(g) => {
                    let g = &self.polys[g];
                    let q = g.lm().quotient_of(&m);
                    sugar = sugar.max(q.degree() + g.sugar);
                    for (gm, gc) in &g.terms[1..] {
                        let nm = q.mul(gm);
                        add_into(f, &mut work, self.order.key(&nm), nm, f.neg(&f.mul(&c, gc)));
                    }
                    if work.len() > self.budget.max_terms {
                        return Err(IdealError::Budget { what: "polynomial support", limit: self.budget.max_terms });
                    }
                }
                None => out.push((m, c)),
            }
        }
        Ok((!out.is_empty()).then(|| self.make_monic(out, sugar)))
    }

    fn spoly(&self, i: usize, j: usize) -> (Vec<(Monomial, F::Elem)>, u32) {
        let (a, b) = (&self.polys[i], &self.polys[j]);
        let l = a.lm().lcm(b.lm());
        let qa = a.lm().quotient_of(&l);
        let qb = b.lm().quotient_of(&l);
        let sugar = (qa.degree() + a.sugar).max(qb.degree() + b.sugar);
        let mut terms: Vec<(Monomial, F::Elem)> = a.terms[1..].iter().map(|(m, c)| (qa.mul(m), c.clone())).collect();
        terms.extend(b.terms[1..].iter().map(|(m, c)| (qb.mul(m), self.f.neg(c))));
        (terms, sugar)
    }

    /// Gebauer-Moeller update after appending polynomial `h`.
    fn update(&mut self, h: usize) {
        let hm = self.polys[h].lm().clone();
        let cands: Vec<(usize, Monomial)> = self.active.iter().map(|&g| (g, self.polys[g].lm().lcm(&hm))).collect();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for (idx, (g, l)) in cands.iter().enumerate() {
            let coprime = hm.coprime(self.polys[*g].lm());
            let dominated = !coprime
                && (cands[idx + 1..].iter().any(|(_, l2)| l2.divides(l)) || kept.iter().any(|(_, l2, _)| l2.divides(l)));
            if !dominated {
                kept.push((*g, l.clone(), coprime));
            }
        }
        let polys = &self.polys;
        let order = self.order;
        self.pairs.retain(|p| {
            let l = polys[p.i].lm().lcm(polys[p.j].lm());
            if !hm.divides(&l) {
                return true;
            }
            let li = polys[p.i].lm().lcm(&hm);
            let lj = polys[p.j].lm().lcm(&hm);
            li == l || lj == l
        });
        for (g, l, coprime) in kept {
            if coprime {
                continue;
            }
            let a = &self.polys[g];
            let b = &self.polys[h];
            let sugar = (a.lm().quotient_of(&l).degree() + a.sugar).max(b.lm().quotient_of(&l).degree() + b.sugar);
            self.pairs.insert(Pair { sugar, lcm_key: order.key(&l), i: g, j: h });
            self.pairs_seen += 1;
        }
        let polys = &self.polys;
        self.active.retain(|&g| !hm.divides(polys[g].lm()));
        self.active.push(h);
    }

    fn push(&mut self, p: OrdPoly<F::Elem>) -> Result<(), IdealError> {
        if let Some(v) = p.lm().pure_power_var() {
            if !self.pure[v] {
                self.pure[v] = true;
                self.pure_count += 1;
            }
        }
        if p.lm().degree() == 0 {
            self.pure_count = self.nvars;
        }
        self.polys.push(p);
        if self.polys.len() > self.budget.max_basis {
            return Err(IdealError::Budget { what: "basis size", limit: self.budget.max_basis });
        }
        self.update(self.polys.len() - 1);
        if self.pairs_seen > self.budget.max_pairs {
            return Err(IdealError::Budget { what: "pair count", limit: self.budget.max_pairs });
        }
        Ok(())
    }

    fn leading(&self) -> Vec<Monomial> {
        self.active.iter().map(|&g| self.polys[g].lm().clone()).collect()
    }

    fn should_stop(&self, stop: &StopRule, degree_done: bool) -> bool {
        match stop {
            StopRule::Never => false,
            StopRule::Empty => self.pure_count == self.nvars,
            StopRule::DimAtMost(bound) => {
                degree_done && super::krull_dimension(&self.leading(), self.nvars) - 1 <= *bound
            }
        }
    }

    pub fn run(mut self, gens: &[MultiPoly<F::Elem>], stop: &StopRule) -> Result<RunResult<F::Elem>, IdealError> {
        let mut inputs: Vec<OrdPoly<F::Elem>> = gens.iter().filter_map(|g| self.to_ord(g)).collect();
        inputs.sort_by(|a, b| a.sugar.cmp(&b.sugar).then_with(|| self.order.cmp(a.lm(), b.lm())));
        let mut pending = inputs.into_iter().peekable();
        let mut stopped = false;
        let mut last_sugar = 0;
        loop {
            let next_pair = self.pairs.first().map(|p| p.sugar);
            let next_input = pending.peek().map(|p| p.sugar);
            let sugar = match (next_pair, next_input) {
                (None, None) => break,
                (a, b) => a.unwrap_or(u32::MAX).min(b.unwrap_or(u32::MAX)),
            };
            if sugar > last_sugar && self.should_stop(stop, true) {
                stopped = true;
                break;
            }
            last_sugar = sugar;
            if sugar > self.budget.max_degree {
                if self.budget.allow_partial {
                    self.dropped = true;
                    break;
                }
                return Err(IdealError::Budget { what: "degree", limit: self.budget.max_degree as usize });
            }
            let (terms, s) = if next_input == Some(sugar) {
                let p = pending.next().expect("peeked");
                (p.terms, p.sugar)
            } else {
                let p = self.pairs.pop_first().expect("nonempty");
                self.spoly(p.i, p.j)
            };
            if let Some(r) = self.reduce(terms, s)? {
                self.push(r)?;
                if self.should_stop(stop, false) {
                    stopped = true;
                    break;
                }
            }
        }
        let complete = !stopped && !self.dropped;
        let basis = if complete { self.reduced_basis() } else { self.active.iter().map(|&g| self.polys[g].clone()).collect() };
        Ok(RunResult { basis, complete })
    }

    /// Interreduces the active set into the reduced basis, ascending by leading monomial.
    fn reduced_basis(&self) -> Vec<OrdPoly<F::Elem>> {
        let mut act: Vec<&OrdPoly<F::Elem>> = self.active.iter().map(|&g| &self.polys[g]).collect();
        act.sort_by(|a, b| self.order.cmp(a.lm(), b.lm()));
        (0..act.len())
            .map(|pos| {
                let others: Vec<&OrdPoly<F::Elem>> =
                    act.iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, g)| *g).collect();
                let p = act[pos];
                let mut terms = vec![p.terms[0].clone()];
                terms.extend(normal_form_terms(self.f, self.order, &others, p.terms[1..].to_vec()));
                OrdPoly { terms, sugar: p.sugar, mask: p.mask }
            })
            .collect()
    }
}

fn add_into<F: Field>(f: &F, work: &mut BTreeMap<Key, (Monomial, F::Elem)>, key: Key, m: Monomial, c: F::Elem) {
    use std::collections::btree_map::Entry;
    match work.entry(key) {
        Entry::Vacant(v) => {
            if !f.is_zero(&c) {
                v.insert((m, c));
            }
        }
        Entry::Occupied(mut o) => {
            let s = f.add(&o.get().1, &c);
            if f.is_zero(&s) {
                o.remove();
            } else {
                o.get_mut().1 = s;
            }
        }
    }
}

/// Full normal form of `p` modulo a basis stored in order form.
pub(crate) fn normal_form_terms<F: Field>(
    f: &F,
    order: MonomialOrder,
    basis: &[&OrdPoly<F::Elem>],
    terms: Vec<(Monomial, F::Elem)>,
) -> Vec<(Monomial, F::Elem)> {
    let mut work: BTreeMap<Key, (Monomial, F::Elem)> = BTreeMap::new();
    for (m, c) in terms {
        add_into(f, &mut work, order.key(&m), m, c);
    }
    let mut out = Vec::new();
    while let Some((_, (m, c))) = work.pop_last() {
        let mm = m.support_mask();
        match basis.iter().find(|g| g.mask & !mm == 0 && g.lm().divides(&m)) {
            Some(g) => {
                let q = g.lm().quotient_of(&m);
                for (gm, gc) in &g.terms[1..] {
                    let nm = q.mul(gm);
                    add_into(f, &mut work, order.key(&nm), nm, f.neg(&f.mul(&c, gc)));
                }
            }
            None => out.push((m, c)),
        }
    }
    out
}

