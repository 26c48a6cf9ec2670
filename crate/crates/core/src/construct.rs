//! The end-to-end construction: boost the representation until the fixed
//! locus has enough codimension, build the invariant quotient map, slice,
//! and certify.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{check_nonmodular, default_j, generation_certificate, invariant_basis, ActionError, ExtPoly, QuotientMapData};
use crate::bertini::{slicing_loop, BertiniError, SlicingBudget, SlicingState};
use crate::fields::{BaseField, ExtElement, Field, GaloisExtension};
use crate::groups::GroupError;
use crate::ideals::{eliminate_polys, projective_dimension, GbBudget, HomIdeal, IdealError};
use crate::poly::{Monomial, MultiPoly};
use crate::rep::{RepError, SemilinearRep};
use crate::verify::{certify_bundle, CertificateBundle, VerifyInput, VerifyOptions};

#[derive(Debug, Clone, thiserror::Error)]
pub enum ConstructError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("invalid group extension: {0}")]
    Group(#[from] GroupError),
    #[error("invalid representation: {0}")]
    Rep(#[from] RepError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("{stage}: {source}")]
    Ideal { stage: &'static str, source: IdealError },
    #[error("generation certificate failed for every d up to {d_max}")]
    GenerationExhausted { d_max: u32 },
    #[error("slicing: {0}")]
    Slicing(#[from] BertiniError),
    #[error("certificate {failed} failed")]
    Certificates { failed: String, bundle: Box<CertificateBundle> },
}

fn at(stage: &'static str) -> impl Fn(IdealError) -> ConstructError {
    move |source| ConstructError::Ideal { stage, source }
}

/// Degrees tried for the invariant map: `start, start + step, ..` up to `max`.
/// Unset values default to `|E|`, `|E|` and `4 |E|`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DPolicy {
    pub start: Option<u32>,
    pub step: Option<u32>,
    pub max: Option<u32>,
    /// Range of the generation certificate; defaults to [`default_j`].
    pub j_max: Option<u32>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum MPolicy {
    #[default]
    Auto,
    Explicit(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub r: usize,
    pub d_policy: DPolicy,
    pub m_policy: MPolicy,
    pub slicing: SlicingBudget,
    pub gb: GbBudget,
    pub seed: u64,
    pub emit_x_ideal: bool,
    /// Largest `U`-degree of emitted relations of the image.
    pub x_degree_cap: u32,
    pub verify: VerifyOptions,
}

impl PipelineParams {
    pub fn new(r: usize, seed: u64) -> Self {
        PipelineParams {
            r,
            d_policy: DPolicy::default(),
            m_policy: MPolicy::Auto,
            slicing: SlicingBudget::default(),
            gb: GbBudget::default(),
            seed,
            emit_x_ideal: false,
            x_degree_cap: 2,
            verify: VerifyOptions::default(),
        }
    }
}

/// The fixed locus `Q_g` of one `g` in `G \ {1}`.
#[derive(Debug, Clone)]
pub struct BadComponent<B: BaseField> {
    pub g: usize,
    pub label: String,
    /// The 2x2 minors of `[T; T tau(g)]`.
    pub ideal: HomIdeal<ExtElement<B::Elem>>,
    /// Gröbner dimension of `V_+(ideal)`.
    pub dim: i64,
    /// Eigenvalue count, when available.
    pub fast_dim: Option<i64>,
}

#[derive(Debug, Clone)]
pub struct BadLocus<B: BaseField> {
    pub components: Vec<BadComponent<B>>,
}

impl<B: BaseField> BadLocus<B> {
    /// `dim Q`, the largest component dimension, or `-1`.
    pub fn dim(&self) -> i64 {
        self.components.iter().map(|c| c.dim).max().unwrap_or(-1)
    }
}

/// The ideal of 2x2 minors of the matrix with rows `T` and `T tau(g)`.
pub fn fixed_locus_ideal<B: BaseField>(rep: &SemilinearRep<B>, g: usize) -> HomIdeal<ExtElement<B::Elem>> {
    let ext = rep.ext().field();
    let n = rep.dim();
    let m = rep.ext_matrix(g);
    let t: Vec<ExtPoly<B>> = (0..n).map(|i| MultiPoly::var(ext, n, i)).collect();
    let image: Vec<ExtPoly<B>> = (0..n)
        .map(|j| {
            (0..n).fold(MultiPoly::zero(n), |acc, i| {
                if ext.is_zero(m.get(i, j)) {
                    acc
                } else {
                    acc.add(ext, &t[i].scale(ext, m.get(i, j)))
                }
            })
        })
        .collect();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let minor = t[i].mul(ext, &image[j]).sub(ext, &t[j].mul(ext, &image[i]));
            if !minor.is_zero() {
                let minor = minor.monic(ext);
                if !gens.contains(&minor) {
                    gens.push(minor);
                }
            }
        }
    }
    HomIdeal::new(n, gens).expect("minors are quadrics")
}

/// `Q_g` for every `g` in `G \ {1}`, with Gröbner dimensions cross-checked
/// against the eigenvalue count where it applies.
pub fn bad_locus_ideal<B: BaseField>(rep: &SemilinearRep<B>, gb: &GbBudget) -> Result<BadLocus<B>, ConstructError> {
    let ext = rep.ext();
    let elems = rep.grpext().nontrivial_geometric();
    let comps: Vec<Result<BadComponent<B>, ConstructError>> = elems
        .par_iter()
        .map(|&g| {
            let ideal = fixed_locus_ideal(rep, g);
            let dim = projective_dimension(ext, &ideal, gb).map_err(at("fixed locus"))?;
            let fast_dim = rep.bad_locus_dim_fast(g).ok();
            if let Some(fd) = fast_dim {
                if fd != dim {
                    return Err(ConstructError::Params(format!(
                        "fixed locus of {}: eigenvalue count gives {fd}, Gröbner gives {dim}",
                        rep.grpext().e.label(g)
                    )));
                }
            }
            Ok(BadComponent { g, label: rep.grpext().e.label(g).to_string(), ideal, dim, fast_dim })
        })
        .collect();
    Ok(BadLocus { components: comps.into_iter().collect::<Result<_, _>>()? })
}

/// Smallest `m >= 1` with `m (n - dim Q) > r`, where `n + 1` is the
/// representation dimension. `None` when `dim Q = n`.
pub fn margin_copies(n: usize, dim_q: i64, r: usize) -> Option<usize> {
    let per = n as i64 - dim_q;
    if per <= 0 {
        return None;
    }
    Some((r as i64 / per + 1) as usize)
}

/// `dim Q` for the unboosted representation, by eigenvalues where possible.
pub fn bad_locus_dim<B: BaseField>(rep: &SemilinearRep<B>, gb: &GbBudget) -> Result<i64, ConstructError> {
    let mut best = -1;
    for g in rep.grpext().nontrivial_geometric() {
        let d = match rep.bad_locus_dim_fast(g) {
            Ok(d) => d,
            Err(_) => projective_dimension(rep.ext(), &fixed_locus_ideal(rep, g), gb).map_err(at("fixed locus"))?,
        };
        best = best.max(d);
    }
    Ok(best)
}

/// The boosted representation and `m`.
pub fn boost_until_margin<B: BaseField>(
    rep: &SemilinearRep<B>,
    r: usize,
    gb: &GbBudget,
) -> Result<(SemilinearRep<B>, usize, i64), ConstructError> {
    let dim_q = bad_locus_dim(rep, gb)?;
    let n = rep.dim() - 1;
    let m = margin_copies(n, dim_q, r)
        .ok_or_else(|| ConstructError::Params("some tau(g) with g != 1 in G fixes all of projective space".into()))?;
    let boosted = if m == 1 { rep.clone() } else { rep.sum_copies(m) };
    Ok((boosted, m, dim_q))
}

/// Invariants of the first degree in the policy whose generation certificate passes.
pub fn quotient_map_data<B: BaseField>(rep: &SemilinearRep<B>, policy: &DPolicy) -> Result<QuotientMapData<B>, ConstructError> {
    check_nonmodular(rep)?;
    let order = rep.grpext().e.order() as u32;
    let start = policy.start.unwrap_or(order).max(1);
    let step = policy.step.unwrap_or(order).max(1);
    let max = policy.max.unwrap_or(4 * order).max(start);
    let mut d = start;
    while d <= max {
        let fs = invariant_basis(rep, d)?;
        if !fs.is_empty() {
            let j = policy.j_max.unwrap_or_else(|| default_j(rep.dim(), order as usize, d));
            let cert = generation_certificate(rep, &fs, d, j)?;
            if cert.passed {
                return Ok(QuotientMapData { d, fs, gen_cert: Some(cert) });
            }
        }
        d += step;
    }
    Err(ConstructError::GenerationExhausted { d_max: max })
}

/// Relations among the `f_i` over `k`, in `U_0..U_s`.
#[derive(Debug, Clone)]
pub struct ImageIdeal<B: BaseField> {
    pub gens: Vec<MultiPoly<B::Elem>>,
    /// True unless the elimination finished within its budget.
    pub partial: bool,
    pub cap: u32,
}

#[derive(Debug, Clone)]
pub struct ConstructionResult<B: BaseField> {
    /// The boosted representation.
    pub rep: SemilinearRep<B>,
    pub m: usize,
    pub r: usize,
    /// `dim Q` before boosting.
    pub dim_q: i64,
    pub qmd: QuotientMapData<B>,
    pub bad_locus: BadLocus<B>,
    pub slicing: SlicingState<B>,
    pub y_ideal: HomIdeal<ExtElement<B::Elem>>,
    pub certificates: CertificateBundle,
    pub x_ideal: Option<ImageIdeal<B>>,
}

impl<B: BaseField> ConstructionResult<B> {
    pub fn verify_input(&self) -> VerifyInput<B> {
        VerifyInput {
            rep: self.rep.clone(),
            r: self.r,
            d: self.qmd.d,
            fs: self.qmd.fs.clone(),
            hs: self.slicing.hs.clone(),
            gs: self.slicing.gs.clone(),
            seed: self.slicing.seed,
            generation: self.qmd.gen_cert.clone(),
        }
    }
}

/// Runs boost, bad locus, quotient map, slicing and certification.
pub fn run_pipeline<B: BaseField>(rep: &SemilinearRep<B>, params: &PipelineParams) -> Result<ConstructionResult<B>, ConstructError> {
    if params.r < 2 {
        return Err(ConstructError::Params(format!("r must be at least 2, got {}", params.r)));
    }
    rep.grpext().validate()?;
    check_nonmodular(rep)?;
    let cert = rep.nonscalar_faithful_check();
    if !cert.passed() {
        return Err(ConstructError::Params(cert.failure.unwrap_or_default()));
    }
    let (boosted, m, dim_q) = match params.m_policy {
        MPolicy::Auto => boost_until_margin(rep, params.r, &params.gb)?,
        MPolicy::Explicit(m) => {
            let dim_q = bad_locus_dim(rep, &params.gb)?;
            let n = rep.dim() as i64 - 1;
            if m == 0 || (m as i64) * (n - dim_q) <= params.r as i64 {
                return Err(ConstructError::Params(format!("m = {m} gives no margin over r = {}", params.r)));
            }
            (if m == 1 { rep.clone() } else { rep.sum_copies(m) }, m, dim_q)
        }
    };
    let bad_locus = bad_locus_ideal(&boosted, &params.gb)?;
    let qmd = quotient_map_data(&boosted, &params.d_policy)?;
    let n = boosted.dim() - 1;
    let slicing =
        slicing_loop(boosted.ext(), &qmd.fs, &bad_locus, n, params.r, &params.slicing, &params.gb, params.seed)?;
    let y_ideal = HomIdeal::new(boosted.dim(), slicing.gs.clone()).map_err(at("Y ideal"))?;
    let mut result = ConstructionResult {
        rep: boosted,
        m,
        r: params.r,
        dim_q,
        qmd,
        bad_locus,
        slicing,
        y_ideal,
        certificates: CertificateBundle::default(),
        x_ideal: None,
    };
    let mut vopts = params.verify.clone();
    vopts.base_point_check |= params.emit_x_ideal;
    let bundle = certify_bundle(&result.verify_input(), &vopts);
    if let Some(failed) = bundle.first_failure() {
        return Err(ConstructError::Certificates { failed, bundle: Box::new(bundle) });
    }
    result.certificates = bundle;
    if params.emit_x_ideal {
        result.x_ideal = Some(image_ideal_capped(&result, params.x_degree_cap, &params.gb)?);
    }
    Ok(result)
}

/// Coefficients of `c` as a polynomial in the generator `x` of `k'`.
fn coords_poly<B: BaseField>(base: &B, nvars: usize, c: &ExtElement<B::Elem>, mono: &Monomial, with_x: bool) -> Vec<(Monomial, B::Elem)> {
    c.coords()
        .iter()
        .enumerate()
        .filter(|(_, a)| !base.is_zero(a))
        .map(|(i, a)| {
            let mut e = vec![0u16; nvars];
            if with_x {
                e[0] = i as u16;
            }
            let m = Monomial::new(&e).mul(mono);
            (m, a.clone())
        })
        .collect()
}

/// Relations `R(U)` with `R(f_0, .., f_s) = 0`, of `U`-degree at most `cap`,
/// from eliminating `x` and `T` out of `(m(x), U_i - f_i(x, T))` over `k`.
pub fn image_ideal_capped<B: BaseField>(
    result: &ConstructionResult<B>,
    cap: u32,
    gb: &GbBudget,
) -> Result<ImageIdeal<B>, ConstructError> {
    image_relations(result.rep.ext(), &result.qmd.fs, result.qmd.d, cap, gb)
}

/// [`image_ideal_capped`] for explicit invariants `fs` of degree `d`.
pub fn image_relations<B: BaseField>(
    ext: &GaloisExtension<B>,
    fs: &[ExtPoly<B>],
    d: u32,
    cap: u32,
    gb: &GbBudget,
) -> Result<ImageIdeal<B>, ConstructError> {
    let base = ext.base();
    let with_x = ext.degree() > 1;
    let nt = fs.first().map_or(0, |f| f.nvars());
    let ns = fs.len();
    let off_t = with_x as usize;
    let off_u = off_t + nt;
    let nvars = off_u + ns;
    let mut gens = Vec::new();
    if with_x {
        let terms = ext
            .modulus()
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial::new(&{
                let mut e = vec![0u16; nvars];
                e[0] = i as u16;
                e
            }), c.clone()))
            .collect();
        gens.push(MultiPoly::from_terms(base, nvars, terms));
    }
    for (i, f) in fs.iter().enumerate() {
        let mut terms = vec![(Monomial::var(nvars, off_u + i), base.one())];
        for (m, c) in f.terms() {
            let shifted = m.shifted(nvars, off_t);
            for (mm, a) in coords_poly(base, nvars, c, &shifted, with_x) {
                terms.push((mm, base.neg(&a)));
            }
        }
        gens.push(MultiPoly::from_terms(base, nvars, terms));
    }
    let budget = GbBudget {
        allow_partial: true,
        max_degree: gb.max_degree.min(cap * d + ext.degree() as u32 + d),
        ..gb.clone()
    };
    let (elim, complete) = eliminate_polys(base, nvars, &gens, off_u, &budget).map_err(at("image ideal"))?;
    let mut out: Vec<MultiPoly<B::Elem>> =
        elim.into_iter().filter(|p| p.total_degree().is_some_and(|t| t <= cap)).map(|p| p.monic(base)).collect();
    out.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| b.terms()[0].0.cmp(&a.terms()[0].0)));
    Ok(ImageIdeal { gens: out, partial: !complete, cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{PrimeField, Rationals};
    use crate::groups::{FiniteGroup, GroupExtension};
    use crate::linalg::Matrix;

    fn f5_swap() -> SemilinearRep<PrimeField> {
        let f = PrimeField::new(5).unwrap();
        SemilinearRep::regular(GaloisExtension::trivial(f), GroupExtension::geometric(FiniteGroup::cyclic(2))).unwrap()
    }

    #[test]
    fn margin_arithmetic() {
        assert_eq!(margin_copies(1, 0, 2), Some(3));
        assert_eq!(margin_copies(1, -1, 2), Some(2));
        assert_eq!(margin_copies(5, 2, 2), Some(1));
        assert_eq!(margin_copies(3, 3, 2), None);
        // boosted fixed locus: m (dim Q + 1) - 1
        assert_eq!(2 * (1 + 1) - 1, 3);
        for n in 1..6usize {
            for dq in -1..n as i64 {
                for r in 2..6usize {
                    let m = margin_copies(n, dq, r).unwrap();
                    assert!(m as i64 * (n as i64 - dq) > r as i64);
                    assert!(m == 1 || (m as i64 - 1) * (n as i64 - dq) <= r as i64);
                }
            }
        }
    }

    #[test]
    fn swap_fixed_locus() {
        let rep = f5_swap();
        let gb = GbBudget::default();
        let bad = bad_locus_ideal(&rep, &gb).unwrap();
        assert_eq!(bad.components.len(), 1);
        let ext = rep.ext().field();
        let shown: Vec<String> = bad.components[0].ideal.gens().iter().map(|p| p.format(ext, 'T')).collect();
        assert_eq!(shown, vec!["1*T0^2 + 4*T1^2"]);
        assert_eq!(bad.dim(), 0);
        let (boosted, m, dq) = boost_until_margin(&rep, 2, &gb).unwrap();
        assert_eq!((m, dq, boosted.dim()), (3, 0, 6));
        assert_eq!(bad_locus_ideal(&boosted, &gb).unwrap().dim(), 2);
        let trivial = SemilinearRep::regular(
            GaloisExtension::trivial(PrimeField::new(5).unwrap()),
            GroupExtension::geometric(FiniteGroup::cyclic(2)),
        )
        .unwrap();
        assert_eq!(trivial.grpext().nontrivial_geometric().len(), 1);
    }

    #[test]
    fn regular_z4_boosted_twice() {
        let f = PrimeField::new(5).unwrap();
        let rep =
            SemilinearRep::regular(GaloisExtension::trivial(f), GroupExtension::geometric(FiniteGroup::cyclic(4))).unwrap();
        let boosted = rep.sum_copies(2);
        let bad = bad_locus_ideal(&boosted, &GbBudget::default()).unwrap();
        let two = bad.components.iter().find(|c| c.g == 2).unwrap();
        assert_eq!(two.dim, 3);
        assert_eq!(two.fast_dim, Some(3));
    }

    #[test]
    fn quotient_maps() {
        let q = Rationals;
        let sign = SemilinearRep::new(
            GaloisExtension::trivial(q),
            GroupExtension::geometric(FiniteGroup::cyclic(2)),
            vec![Matrix::from_rows(vec![vec![q.one()]]), Matrix::from_rows(vec![vec![q.from_i64(-1)]])],
        )
        .unwrap();
        let qmd = quotient_map_data(&sign, &DPolicy::default()).unwrap();
        assert_eq!(qmd.d, 2);
        assert_eq!(qmd.s(), 0);
        let blocks = f5_swap().sum_copies(3);
        let qmd = quotient_map_data(&blocks, &DPolicy::default()).unwrap();
        assert_eq!((qmd.d, qmd.s()), (2, 11));
        assert!(qmd.gen_cert.unwrap().passed);
    }

    #[test]
    fn image_relations_examples() {
        let q = Rationals;
        let ext = GaloisExtension::trivial(q);
        let k = ext.field();
        let t = |s: &str| crate::text::parse_ext_poly(k, s, 'T', 2).unwrap();
        let gb = GbBudget::default();
        let vero = image_relations(&ext, &[t("T0^2"), t("T0*T1"), t("T1^2")], 2, 2, &gb).unwrap();
        let shown: Vec<String> = vero.gens.iter().map(|p| p.format(&q, 'U')).collect();
        assert_eq!(shown, vec!["1*U0*U2 - 1*U1^2"]);
        let lin = image_relations(&ext, &[t("T0"), t("T1")], 1, 3, &gb).unwrap();
        assert!(lin.gens.is_empty() && !lin.partial);
        let swap = image_relations(&ext, &[t("T0^2 + T1^2"), t("T0*T1")], 2, 3, &gb).unwrap();
        assert!(swap.gens.is_empty());
    }
}
