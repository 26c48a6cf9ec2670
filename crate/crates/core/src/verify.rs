//! Certificates for a constructed variety, recomputed from its defining
//! data alone.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::action::{act, descent_dims, ExtPoly, GenerationCertificate};
use crate::bertini::pullback;
use crate::construct::fixed_locus_ideal;
use crate::fields::upoly::find_irreducible_fp;
use crate::fields::{BaseField, BaseFieldKind, ExtElement, Field, PrimeField, SimpleExtension, TableField};
use crate::ideals::{is_projectively_empty, jacobian_smooth_certificate, GbBudget, HomIdeal, JacobianCertificate};
use crate::poly::MultiPoly;
use crate::rep::SemilinearRep;

/// What a verifier needs: the representation, the quotient map and the slices.
#[derive(Debug, Clone)]
pub struct VerifyInput<B: BaseField> {
    /// The boosted representation on `T_0..T_n`.
    pub rep: SemilinearRep<B>,
    pub r: usize,
    pub d: u32,
    pub fs: Vec<ExtPoly<B>>,
    pub hs: Vec<MultiPoly<B::Elem>>,
    pub gs: Vec<ExtPoly<B>>,
    pub seed: u64,
    pub generation: Option<GenerationCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub gb: GbBudget,
    /// Degrees `1..=descent_max` for the descent identity; `0` skips it.
    pub descent_max: u32,
    pub spotcheck: bool,
    /// Degree of `k''` over `k'`; by default the least with `|k''| >= 25`.
    pub spotcheck_degree: Option<u32>,
    /// Largest number of projective points the spot check may enumerate.
    pub spotcheck_max_points: u64,
    pub base_point_check: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            gb: GbBudget::default(),
            descent_max: 4,
            spotcheck: true,
            spotcheck_degree: None,
            spotcheck_max_points: 60_000_000,
            base_point_check: false,
        }
    }
}

/// Pass/fail with an optional witness and the time spent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub passed: bool,
    pub witness: Option<String>,
    pub millis: u64,
}

impl Check {
    fn timed(start: Instant, passed: bool, witness: Option<String>) -> Self {
        Check { passed, witness, millis: start.elapsed().as_millis() as u64 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceCert {
    pub check: Check,
    pub group_order: usize,
    pub forms: usize,
    pub invariants: usize,
    /// `g_j = h_j(f)` for every slice.
    pub pullbacks_match: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionCert {
    pub check: Check,
    pub ambient: usize,
    pub forms: usize,
    pub expected_forms: usize,
    pub dim: i64,
    pub expected_dim: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessCert {
    pub check: Check,
    pub minors_degree: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessCert {
    pub check: Check,
    /// Elements `g` of `G \ {1}` whose fixed locus misses `Y`.
    pub tested: Vec<String>,
    /// Elements with nontrivial Galois image; these have no fixed-point condition.
    pub twisted_skipped: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentCert {
    pub check: Check,
    /// `dim_{k'} (S_d)^G` for `d = 1..`.
    pub geometric: Vec<usize>,
    /// `dim_k (S_d)^E` for `d = 1..`.
    pub arithmetic: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpotcheckCert {
    pub check: Check,
    pub field_order: u64,
    pub points: usize,
    pub pairs_checked: usize,
    pub base_points: usize,
}

/// All certificates. The bundle is green when invariance, dimension,
/// smoothness and freeness pass.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateBundle {
    pub seed: u64,
    pub green: bool,
    pub invariance: InvarianceCert,
    pub dimension: DimensionCert,
    pub smoothness: SmoothnessCert,
    pub freeness: FreenessCert,
    pub base_point_freeness: Option<Check>,
    pub generation: Option<GenerationCertificate>,
    pub descent: Option<DescentCert>,
    pub orbit_spotcheck: Option<SpotcheckCert>,
    /// Properties that follow from the certified ones without computation.
    pub derived: Vec<String>,
}

impl CertificateBundle {
    /// Name of the first failing certificate, mandatory ones first.
    pub fn first_failure(&self) -> Option<String> {
        let mut all: Vec<(&str, bool)> = vec![
            ("invariance", self.invariance.check.passed),
            ("dimension", self.dimension.check.passed),
            ("smoothness", self.smoothness.check.passed),
            ("freeness", self.freeness.check.passed),
        ];
        if let Some(c) = &self.base_point_freeness {
            all.push(("base_point_freeness", c.passed));
        }
        if let Some(c) = &self.generation {
            all.push(("generation", c.passed));
        }
        if let Some(c) = &self.descent {
            all.push(("descent", c.check.passed));
        }
        if let Some(c) = &self.orbit_spotcheck {
            all.push(("orbit_spotcheck", c.check.passed));
        }
        all.into_iter().find(|(_, ok)| !ok).map(|(n, _)| n.to_string())
    }

    /// A copy with every timing field zeroed, for reproducibility comparisons.
    pub fn without_timings(&self) -> Self {
        let mut b = self.clone();
        b.invariance.check.millis = 0;
        b.dimension.check.millis = 0;
        b.smoothness.check.millis = 0;
        b.freeness.check.millis = 0;
        if let Some(c) = b.base_point_freeness.as_mut() {
            c.millis = 0;
        }
        if let Some(c) = b.descent.as_mut() {
            c.check.millis = 0;
        }
        if let Some(c) = b.orbit_spotcheck.as_mut() {
            c.check.millis = 0;
        }
        b
    }
}

/// `g . g_j = g_j` for every `g` in `E` and every defining form, and the
/// same for the invariants `f_i`.
pub fn certify_invariance<B: BaseField>(input: &VerifyInput<B>) -> InvarianceCert {
    let start = Instant::now();
    let rep = &input.rep;
    let e = &rep.grpext().e;
    let mut witness = None;
    'outer: for g in 0..e.order() {
        for (j, p) in input.gs.iter().enumerate() {
            if &act(rep, g, p) != p {
                witness = Some(format!("{} moves g_{}", e.label(g), j + 1));
                break 'outer;
            }
        }
        for (i, p) in input.fs.iter().enumerate() {
            if &act(rep, g, p) != p {
                witness = Some(format!("{} moves f_{}", e.label(g), i));
                break 'outer;
            }
        }
    }
    let ext = rep.ext();
    let pullbacks_match = input.hs.len() == input.gs.len()
        && input.hs.iter().zip(&input.gs).all(|(h, g)| h.nvars() == input.fs.len() && &pullback(ext, h, &input.fs) == g);
    if witness.is_none() && !pullbacks_match {
        witness = Some("some g_j differs from h_j(f)".into());
    }
    InvarianceCert {
        check: Check::timed(start, witness.is_none(), witness),
        group_order: e.order(),
        forms: input.gs.len(),
        invariants: input.fs.len(),
        pullbacks_match,
    }
}

/// Dimension and smoothness through the Jacobian criterion.
pub fn certify_dimension_and_smoothness<B: BaseField>(
    input: &VerifyInput<B>,
    gb: &GbBudget,
) -> (DimensionCert, SmoothnessCert, Option<JacobianCertificate>) {
    let start = Instant::now();
    let nvars = input.rep.dim();
    let n = nvars - 1;
    let expected_forms = n.saturating_sub(input.r);
    let minors_degree = input.gs.iter().map(|g| g.total_degree().unwrap_or(1).saturating_sub(1)).sum();
    let jac = jacobian_smooth_certificate(input.rep.ext(), nvars, &input.gs, gb);
    let millis = start.elapsed().as_millis() as u64;
    match jac {
        Ok(c) => {
            let count_ok = input.gs.len() == expected_forms;
            let dim_ok = count_ok && c.dim_ok && c.dim == input.r as i64;
            let dw = (!dim_ok).then(|| format!("{} forms, dimension {} (expected {} forms, dimension {})", input.gs.len(), c.dim, expected_forms, input.r));
            let sw = (!c.smooth).then(|| "Jacobian minors vanish somewhere on Y".to_string());
            (
                DimensionCert {
                    check: Check { passed: dim_ok, witness: dw, millis },
                    ambient: n,
                    forms: input.gs.len(),
                    expected_forms,
                    dim: c.dim,
                    expected_dim: input.r as i64,
                },
                SmoothnessCert { check: Check { passed: c.smooth, witness: sw, millis: 0 }, minors_degree },
                Some(c),
            )
        }
        Err(err) => {
            let w = Some(err.to_string());
            (
                DimensionCert {
                    check: Check { passed: false, witness: w.clone(), millis },
                    ambient: n,
                    forms: input.gs.len(),
                    expected_forms,
                    dim: -2,
                    expected_dim: input.r as i64,
                },
                SmoothnessCert { check: Check { passed: false, witness: w, millis: 0 }, minors_degree },
                None,
            )
        }
    }
}

/// `V_+(g_1, .., g_c) ∩ Q_g = ∅` for every `g` in `G \ {1}`.
pub fn certify_freeness<B: BaseField>(input: &VerifyInput<B>, gb: &GbBudget) -> FreenessCert {
    let start = Instant::now();
    let rep = &input.rep;
    let ge = rep.grpext();
    let e = &ge.e;
    let geometric = ge.nontrivial_geometric();
    let twisted_skipped: Vec<String> = (0..e.order())
        .filter(|&g| rep.pi(g) != ge.gamma.identity())
        .map(|g| e.label(g).to_string())
        .collect();
    // twisted elements never appear among the tested ones
    let bookkeeping = geometric.iter().all(|&g| rep.pi(g) == ge.gamma.identity());
    let results: Vec<(usize, Result<bool, String>)> = geometric
        .par_iter()
        .map(|&g| {
            let q = fixed_locus_ideal(rep, g);
            let r = q.sum(&input.gs).and_then(|i| is_projectively_empty(rep.ext(), &i, gb)).map_err(|e| e.to_string());
            (g, r)
        })
        .collect();
    let mut witness = (!bookkeeping).then(|| "a twisted element was tested".to_string());
    for (g, r) in &results {
        if witness.is_some() {
            break;
        }
        match r {
            Ok(true) => {}
            Ok(false) => witness = Some(format!("Y meets the fixed locus of {}", e.label(*g))),
            Err(msg) => witness = Some(format!("{}: {msg}", e.label(*g))),
        }
    }
    FreenessCert {
        check: Check::timed(start, witness.is_none(), witness),
        tested: geometric.iter().map(|&g| e.label(g).to_string()).collect(),
        twisted_skipped,
    }
}

/// The invariants `f_i` have no common zero on `Y`.
pub fn certify_base_point_freeness<B: BaseField>(input: &VerifyInput<B>, gb: &GbBudget) -> Check {
    let start = Instant::now();
    let r = HomIdeal::new(input.rep.dim(), input.gs.clone())
        .and_then(|i| i.sum(&input.fs))
        .and_then(|i| is_projectively_empty(input.rep.ext(), &i, gb));
    match r {
        Ok(true) => Check::timed(start, true, None),
        Ok(false) => Check::timed(start, false, Some("the f_i vanish together at a point of Y".into())),
        Err(e) => Check::timed(start, false, Some(e.to_string())),
    }
}

/// `dim_{k'} (S_d)^G = dim_k (S_d)^E` for `d = 1..=dmax`.
pub fn certify_descent<B: BaseField>(rep: &SemilinearRep<B>, dmax: u32) -> DescentCert {
    let start = Instant::now();
    let mut geometric = Vec::new();
    let mut arithmetic = Vec::new();
    let mut witness = None;
    for d in 1..=dmax {
        match descent_dims(rep, d) {
            Ok((g, a)) => {
                geometric.push(g);
                arithmetic.push(a);
                if g != a && witness.is_none() {
                    witness = Some(format!("degree {d}: {g} != {a}"));
                }
            }
            Err(e) => {
                witness = Some(e.to_string());
                break;
            }
        }
    }
    DescentCert { check: Check::timed(start, witness.is_none(), witness), geometric, arithmetic }
}

/// `k''`, a degree-`N` extension of `k'`, with the embedding of `k'` and the
/// Frobenius exponents of the Galois elements.
struct BigField {
    table: TableField,
    /// Image of the generator of `k'`.
    theta: u32,
    /// `sigma_gamma = Frob^{j}` on `k'`, indexed by `gamma`.
    frob: Vec<u32>,
    total_degree: u32,
}

impl BigField {
    fn new<B: BaseField>(rep: &SemilinearRep<B>, p: u32, n: u32) -> Option<Self> {
        let ext = rep.ext();
        let kp = ext.field();
        let fp = PrimeField::new(p as u64).ok()?;
        let a = ext.degree() as u32;
        let total = a * n;
        let modulus = find_irreducible_fp(&fp, total as usize);
        let big = SimpleExtension::new(fp, modulus).ok()?;
        let table = TableField::new(&big);
        let mk: Vec<u32> = kp.modulus().iter().map(|c| ext.base().to_u64(c).unwrap() as u32).collect();
        let theta = (0..table.order()).find(|&z| {
            mk.iter().rev().fold(0u32, |acc, &c| table.add(&table.mul(&acc, &z), &table.from_i64(c as i64))) == 0
        })?;
        let gamma = ext.gamma();
        let frob = (0..gamma.order())
            .map(|g| {
                let img = ext.automorphism_image(g);
                (0..a)
                    .find(|&j| kp.pow(&kp.generator(), (p as u64).pow(j)) == *img)
                    .expect("finite field automorphisms are Frobenius powers")
            })
            .collect();
        Some(BigField { table, theta, frob, total_degree: total })
    }

    fn embed<E>(&self, base: &impl BaseField<Elem = E>, c: &ExtElement<E>) -> u32 {
        let t = &self.table;
        c.coords()
            .iter()
            .rev()
            .fold(0u32, |acc, x| t.add(&t.mul(&acc, &self.theta), &t.from_i64(base.to_u64(x).unwrap() as i64)))
    }

    fn sigma_inv(&self, gamma: usize, z: u32) -> u32 {
        let j = self.frob[gamma] % self.total_degree;
        self.table.frobenius(z, (self.total_degree - j) % self.total_degree)
    }
}

type Terms = Vec<(SmallVec<[u16; 8]>, u32)>;

fn to_terms<B: BaseField>(big: &BigField, base: &B, p: &ExtPoly<B>) -> Terms {
    p.terms().iter().map(|(m, c)| (SmallVec::from_slice(m.exps()), big.embed(base, c))).collect()
}

fn eval_terms(t: &TableField, terms: &Terms, pt: &[u32]) -> u32 {
    terms.iter().fold(0, |acc, (e, c)| {
        let v = e.iter().enumerate().fold(*c, |v, (i, &k)| if k == 0 { v } else { t.mul(&v, &t.pow(&pt[i], k as u64)) });
        t.add(&acc, &v)
    })
}

/// Sets variable `var` to `val`, merging equal monomials.
fn specialize(t: &TableField, terms: &Terms, var: usize, val: u32) -> Terms {
    let mut out: Terms = terms
        .iter()
        .filter_map(|(e, c)| {
            let k = e[var];
            let c = if k == 0 { *c } else { t.mul(c, &t.pow(&val, k as u64)) };
            if c == 0 {
                return None;
            }
            let mut e = e.clone();
            e[var] = 0;
            Some((e, c))
        })
        .collect();
    out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Terms = Vec::with_capacity(out.len());
    for (e, c) in out {
        match merged.last_mut() {
            Some((le, lc)) if *le == e => *lc = t.add(lc, &c),
            _ => merged.push((e, c)),
        }
    }
    merged.retain(|(_, c)| *c != 0);
    merged
}

/// Projective zeros of `polys` over the table field, normalized with first
/// nonzero coordinate one. Variables are fixed one at a time, specializing
/// the forms as they go, and the last one is solved by evaluation.
fn projective_zeros(t: &TableField, nvars: usize, polys: &[Terms]) -> Vec<Vec<u32>> {
    fn rec(t: &TableField, polys: &[Terms], pt: &mut Vec<u32>, nvars: usize, out: &mut Vec<Vec<u32>>) {
        let v = pt.len();
        if polys.iter().any(|p| p.len() == 1 && p[0].0.iter().all(|&e| e == 0)) {
            return; // a nonzero constant
        }
        if v == nvars {
            if polys.iter().all(|p| p.is_empty()) {
                out.push(pt.clone());
            }
            return;
        }
        for val in 0..t.order() {
            let next: Vec<Terms> = polys.iter().map(|p| specialize(t, p, v, val)).collect();
            pt.push(val);
            rec(t, &next, pt, nvars, out);
            pt.pop();
        }
    }
    let mut out = Vec::new();
    for lead in 0..nvars {
        let mut fixed: Vec<Terms> = polys.to_vec();
        let mut pt = Vec::with_capacity(nvars);
        for v in 0..=lead {
            let val = if v == lead { 1 } else { 0 };
            fixed = fixed.iter().map(|p| specialize(t, p, v, val)).collect();
            pt.push(val);
        }
        rec(t, &fixed, &mut pt, nvars, &mut out);
    }
    out
}

/// Enumerates `Y(k'')` and checks, for every point `v` and every `g` in `E`,
/// that `w = sigma^{-1}(v tau(g))` lies on `Y` with
/// `f_i(w) = sigma^{-1}(f_i(v))`, and that `g^{-1}` sends `w` back to `v`.
/// Here `sigma = pi(g)` acts on `k''` as the same power of Frobenius it is on `k'`.
pub fn orbit_spotcheck<B: BaseField>(input: &VerifyInput<B>, degree: Option<u32>, max_points: u64) -> Option<SpotcheckCert> {
    let start = Instant::now();
    let rep = &input.rep;
    let BaseFieldKind::Prime(p) = rep.base().kind() else { return None };
    let kq = (p as u64).pow(rep.ext().degree() as u32);
    let n = degree.unwrap_or_else(|| (1..).find(|&n| kq.pow(n) >= 25).unwrap()).max(1);
    let q = kq.checked_pow(n)?;
    let nvars = rep.dim();
    let count = (0..nvars as u32).try_fold(0u64, |acc, i| acc.checked_add(q.checked_pow(i)?))?;
    if q >= 1 << 26 || count > max_points {
        return None;
    }
    let big = BigField::new(rep, p, n)?;
    let t = &big.table;
    let base = rep.base();
    let gs: Vec<Terms> = input.gs.iter().map(|g| to_terms(&big, base, g)).collect();
    let fs: Vec<Terms> = input.fs.iter().map(|f| to_terms(&big, base, f)).collect();
    let points = projective_zeros(t, nvars, &gs);
    let e = &rep.grpext().e;
    let mats: Vec<Vec<Vec<u32>>> = (0..e.order())
        .map(|g| {
            let m = rep.matrix(g);
            (0..nvars).map(|i| (0..nvars).map(|j| t.from_i64(base.to_u64(m.get(i, j)).unwrap() as i64)).collect()).collect()
        })
        .collect();
    let move_pt = |g: usize, v: &[u32]| -> Vec<u32> {
        let gamma = rep.pi(g);
        (0..nvars)
            .map(|j| {
                let u = (0..nvars).fold(0u32, |acc, i| t.add(&acc, &t.mul(&v[i], &mats[g][i][j])));
                big.sigma_inv(gamma, u)
            })
            .collect()
    };
    let mut witness = None;
    let mut pairs = 0;
    let mut base_points = 0;
    for v in &points {
        let fv: Vec<u32> = fs.iter().map(|f| eval_terms(t, f, v)).collect();
        if fv.iter().all(|&x| x == 0) {
            base_points += 1;
        }
        for g in 0..e.order() {
            let w = move_pt(g, v);
            pairs += 1;
            if !gs.iter().all(|p| eval_terms(t, p, &w) == 0) {
                witness = Some(format!("{} moves {:?} off Y", e.label(g), v));
            } else if fs.iter().zip(&fv).any(|(f, &x)| eval_terms(t, f, &w) != big.sigma_inv(rep.pi(g), x)) {
                witness = Some(format!("f is not equivariant at {:?} for {}", v, e.label(g)));
            } else if move_pt(e.inv(g), &w) != *v {
                witness = Some(format!("{} then its inverse does not return {:?}", e.label(g), v));
            }
            if witness.is_some() {
                break;
            }
        }
        if witness.is_some() {
            break;
        }
    }
    Some(SpotcheckCert {
        check: Check::timed(start, witness.is_none(), witness),
        field_order: q,
        points: points.len(),
        pairs_checked: pairs,
        base_points,
    })
}

/// Runs every applicable certificate from scratch.
pub fn certify_bundle<B: BaseField>(input: &VerifyInput<B>, opts: &VerifyOptions) -> CertificateBundle {
    let gb = &opts.gb;
    let ((invariance, (dimension, smoothness, _)), (freeness, (bpf, (descent, spot)))) = rayon::join(
        || rayon::join(|| certify_invariance(input), || certify_dimension_and_smoothness(input, gb)),
        || {
            rayon::join(
                || certify_freeness(input, gb),
                || {
                    rayon::join(
                        || opts.base_point_check.then(|| certify_base_point_freeness(input, gb)),
                        || {
                            rayon::join(
                                || (opts.descent_max > 0).then(|| certify_descent(&input.rep, opts.descent_max)),
                                || {
                                    if opts.spotcheck {
                                        orbit_spotcheck(input, opts.spotcheck_degree, opts.spotcheck_max_points)
                                    } else {
                                        None
                                    }
                                },
                            )
                        },
                    )
                },
            )
        },
    );
    let green = invariance.check.passed && dimension.check.passed && smoothness.check.passed && freeness.check.passed;
    let mut derived = Vec::new();
    if green {
        derived.push(format!("Y is a smooth complete intersection of dimension {} cut out by {} forms", input.r, input.gs.len()));
        derived.push("Y is geometrically connected, being a complete intersection of positive dimension".into());
        derived.push("G acts on Y without fixed points".into());
    }
    CertificateBundle {
        seed: input.seed,
        green,
        invariance,
        dimension,
        smoothness,
        freeness,
        base_point_freeness: bpf,
        generation: input.generation.clone(),
        descent,
        orbit_spotcheck: spot,
        derived,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::invariant_basis;
    use crate::construct::{run_pipeline, PipelineParams};
    use crate::fields::GaloisExtension;
    use crate::groups::{FiniteGroup, GroupExtension};
    use crate::poly::binomial;
    use crate::text::parse_ext_poly;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn f25() -> GaloisExtension<PrimeField> {
        let x = |c: u32| ExtElement(SmallVec::from_vec(vec![0, c]));
        GaloisExtension::new(f5(), vec![3, 0, 1], vec![x(1), x(4)], FiniteGroup::cyclic(2), &[0, 1]).unwrap()
    }

    fn swap_input(copies: usize, gs: &[&str]) -> VerifyInput<PrimeField> {
        let rep = SemilinearRep::regular(GaloisExtension::trivial(f5()), GroupExtension::geometric(FiniteGroup::cyclic(2)))
            .unwrap()
            .sum_copies(copies);
        let n = rep.dim();
        let gs: Vec<_> = gs.iter().map(|s| parse_ext_poly(rep.ext().field(), s, 'T', n).unwrap()).collect();
        VerifyInput { rep, r: n - 1 - gs.len(), d: 2, fs: vec![], hs: vec![], gs, seed: 0, generation: None }
    }

    #[test]
    fn mutated_form_loses_invariance() {
        let mut input = swap_input(1, &["T0^2 + T1^2"]);
        input.fs = invariant_basis(&input.rep, 2).unwrap();
        input.gs.clear();
        let cert = certify_invariance(&input);
        assert!(cert.check.passed, "no forms: vacuous");
        let bumped = swap_input(1, &["2*T0^2 + T1^2"]);
        let cert = certify_invariance(&bumped);
        assert!(!cert.check.passed);
        assert_eq!(cert.check.witness.as_deref(), Some("1 moves g_1"));
    }

    #[test]
    fn quadric_through_a_fixed_point_fails_freeness() {
        // [1:1:0:0:0:0] is fixed by the block swap and lies on Y
        let bad = swap_input(3, &["T0^2 - 2*T0*T1 + T1^2", "T2*T3", "T4*T5"]);
        let cert = certify_freeness(&bad, &GbBudget::default());
        assert!(!cert.check.passed);
        assert_eq!(cert.tested, vec!["1".to_string()]);
        let good = swap_input(3, &["T0*T1 + T2*T3 + T4*T5", "T0^2 + T1^2 + 2*T2^2 + 2*T3^2", "T4^2 + T5^2 + T0^2 + T1^2"]);
        let ok = certify_freeness(&good, &GbBudget::default());
        assert_eq!(ok.check.passed, is_free_by_points(&good));
    }

    /// Freeness over F_5 points only: a necessary condition for the certificate.
    fn is_free_by_points(input: &VerifyInput<PrimeField>) -> bool {
        let k1 = input.rep.ext().field();
        // fixed points of the block swap: eigenvectors with eigenvalue 1 or -1
        for lambda in [1u32, 4] {
            for a in 0..5u32 {
                for b in 0..5u32 {
                    for c in 0..5u32 {
                        if (a, b, c) == (0, 0, 0) {
                            continue;
                        }
                        let l = |v: u32| (v * lambda) % 5;
                        let pt: Vec<_> = [a, l(a), b, l(b), c, l(c)].iter().map(|&v| k1.embed(&v)).collect();
                        if input.gs.iter().all(|g| k1.is_zero(&g.eval(k1, &pt))) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn descent_dimensions() {
        let swap = swap_input(1, &[]);
        let c = certify_descent(&swap.rep, 4);
        assert!(c.check.passed);
        assert_eq!(c.geometric, c.arithmetic);
        let frob = SemilinearRep::regular(f25(), GroupExtension::pure_galois(FiniteGroup::cyclic(2))).unwrap().sum_copies(2);
        let c = certify_descent(&frob, 4);
        assert!(c.check.passed);
        let want: Vec<usize> = (1..=4u128).map(|d| binomial(3 + d, d) as usize).collect();
        assert_eq!(c.geometric, want);
        assert_eq!(c.arithmetic, want);
    }

    #[test]
    fn pure_galois_bundle_is_green_and_corruption_is_caught() {
        let rep = SemilinearRep::regular(f25(), GroupExtension::pure_galois(FiniteGroup::cyclic(2))).unwrap();
        let res = run_pipeline(&rep, &PipelineParams::new(2, 5)).unwrap();
        let mut input = res.verify_input();
        let bundle = certify_bundle(&input, &VerifyOptions::default());
        assert!(bundle.green);
        assert!(bundle.descent.as_ref().unwrap().check.passed);
        let spot = bundle.orbit_spotcheck.as_ref().unwrap();
        assert!(spot.check.passed && spot.points > 0);
        assert!(bundle.freeness.tested.is_empty());
        assert_eq!(bundle.without_timings(), res.certificates.without_timings());
        // shift one coefficient of the defining form by x
        let k1 = input.rep.ext().field();
        let m = input.gs[0].terms()[0].0.clone();
        input.gs[0] = input.gs[0].add(k1, &MultiPoly::term(k1, m, k1.generator()));
        let bad = certify_bundle(&input, &VerifyOptions::default());
        assert!(!bad.green);
        assert_eq!(bad.first_failure().as_deref(), Some("invariance"));
    }
}
