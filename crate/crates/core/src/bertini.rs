//! Random hypersurface sections: sample downstairs forms `h` in `U_0..U_s`,
//! pull them back along the invariants `f`, and keep them when every
//! fixed-point locus drops in dimension. The final intersection must pass
//! the Jacobian certificate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::ExtPoly;
use crate::construct::BadLocus;
use crate::fields::{BaseField, GaloisExtension};
use crate::ideals::{dimension_at_most, jacobian_smooth_certificate, GbBudget, IdealError};
use crate::poly::{monomial_basis, MultiPoly};

#[derive(Debug, Clone, thiserror::Error)]
pub enum BertiniError {
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error("slicing budget exhausted after {} attempts", log.len())]
    Exhausted { log: Vec<AttemptRecord> },
}

/// Search limits for the slicing loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlicingBudget {
    /// Candidate forms tried per slice before giving up on a pass.
    pub samples_per_slice: u32,
    pub form_degree_start: u32,
    pub max_form_degree: u32,
    /// Full passes, each with its own derived seed.
    pub restarts: u32,
    /// Failed passes at one form degree before raising it (finite fields).
    pub retries_per_degree: u32,
    /// Starting coefficient window over `Q`; doubles on every restart.
    pub window_start: u64,
    /// Also require each partial intersection to pass the Jacobian test.
    pub per_step_checks: bool,
}

impl Default for SlicingBudget {
    fn default() -> Self {
        SlicingBudget {
            samples_per_slice: 16,
            form_degree_start: 1,
            max_form_degree: 4,
            restarts: 8,
            retries_per_degree: 2,
            window_start: 1,
            per_step_checks: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub restart: u32,
    pub seed: u64,
    pub form_degree: u32,
    /// Slices accepted before the pass ended.
    pub accepted: usize,
    pub outcome: String,
}

/// The accepted slices.
#[derive(Debug, Clone)]
pub struct SlicingState<B: BaseField> {
    /// Downstairs forms `h_j` over `k` in `U_0..U_s`.
    pub hs: Vec<MultiPoly<B::Elem>>,
    /// Their pullbacks `g_j = h_j(f_0, .., f_s)`.
    pub gs: Vec<ExtPoly<B>>,
    /// `bad_dims[i][c]`: certified bound on the dimension of component `c`
    /// of the bad locus cut by the first `i` slices (exact for `i = 0`).
    pub bad_dims: Vec<Vec<i64>>,
    pub seed: u64,
    /// Seed of the pass that succeeded.
    pub pass_seed: u64,
    pub form_degree: u32,
    pub log: Vec<AttemptRecord>,
}

/// A nonzero homogeneous form of degree `e` in `nvars` variables with random
/// coefficients: uniform over a finite field, integers in `[-window, window]` over `Q`.
pub fn sample_form<B: BaseField>(base: &B, nvars: usize, e: u32, window: u64, rng: &mut ChaCha8Rng) -> MultiPoly<B::Elem> {
    let monos = monomial_basis(nvars, e);
    loop {
        let terms = monos.iter().map(|m| (m.clone(), base.random(rng, window))).collect();
        let p = MultiPoly::from_terms(base, nvars, terms);
        if !p.is_zero() {
            return p;
        }
    }
}

/// `h(f_0, .., f_s)` with `h` over `k` and `f_i` over `k'`.
pub fn pullback<B: BaseField>(ext: &GaloisExtension<B>, h: &MultiPoly<B::Elem>, fs: &[ExtPoly<B>]) -> ExtPoly<B> {
    h.map_coeffs(ext, |c| ext.embed(c)).substitute(ext, fs).expect("one image per U variable")
}

/// Seed of restart `i`, derived from the run seed.
pub fn derived_seed(seed: u64, restart: u32) -> u64 {
    let mut z = seed.wrapping_add((restart as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Certified upper bounds for the cut bad locus if every component drops
/// (or stays empty), else `None`.
fn drop_test<B: BaseField>(
    ext: &GaloisExtension<B>,
    bad: &BadLocus<B>,
    current: &[i64],
    gs: &[ExtPoly<B>],
    gb: &GbBudget,
) -> Result<Option<Vec<i64>>, IdealError> {
    let results: Vec<Result<Option<i64>, IdealError>> = bad
        .components
        .par_iter()
        .zip(current.par_iter())
        .map(|(comp, &prev)| {
            let target = (prev - 1).max(-1);
            let ideal = comp.ideal.sum(gs)?;
            Ok(dimension_at_most(ext, &ideal, target, gb)?.then_some(target))
        })
        .collect();
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        match r? {
            Some(d) => out.push(d),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Finds `n - r` forms whose pullbacks cut every component of the bad locus
/// down to the empty set and define a smooth complete intersection.
pub fn slicing_loop<B: BaseField>(
    ext: &GaloisExtension<B>,
    fs: &[ExtPoly<B>],
    bad: &BadLocus<B>,
    n: usize,
    r: usize,
    budget: &SlicingBudget,
    gb: &GbBudget,
    seed: u64,
) -> Result<SlicingState<B>, BertiniError> {
    let base = ext.base();
    let finite = base.order().is_some();
    let nslices = n.saturating_sub(r);
    let nvars = fs.first().map_or(n + 1, |f| f.nvars());
    let initial: Vec<i64> = bad.components.iter().map(|c| c.dim).collect();
    let mut e = budget.form_degree_start.max(1);
    let mut window = budget.window_start.max(1);
    let mut failures_here = 0;
    let mut log = Vec::new();
    for restart in 0..budget.restarts {
        let pass_seed = derived_seed(seed, restart);
        let mut rng = ChaCha8Rng::seed_from_u64(pass_seed);
        let mut hs = Vec::new();
        let mut gs: Vec<ExtPoly<B>> = Vec::new();
        let mut dims = vec![initial.clone()];
        let mut outcome = None;
        for slice in 0..nslices {
            let mut accepted = false;
            for _ in 0..budget.samples_per_slice {
                let h = sample_form(base, fs.len(), e, window, &mut rng);
                let g = pullback(ext, &h, fs);
                if g.is_zero() {
                    continue;
                }
                let mut trial = gs.clone();
                trial.push(g);
                let Some(next) = drop_test(ext, bad, dims.last().unwrap(), &trial, gb)? else {
                    continue;
                };
                if budget.per_step_checks && !jacobian_smooth_certificate(ext, nvars, &trial, gb)?.passed() {
                    continue;
                }
                hs.push(h);
                gs = trial;
                dims.push(next);
                accepted = true;
                break;
            }
            if !accepted {
                outcome = Some(format!("no acceptable form for slice {} among {} samples", slice + 1, budget.samples_per_slice));
                break;
            }
        }
        if outcome.is_none() {
            let cert = jacobian_smooth_certificate(ext, nvars, &gs, gb)?;
            if cert.passed() {
                log.push(AttemptRecord { restart, seed: pass_seed, form_degree: e, accepted: gs.len(), outcome: "accepted".into() });
                return Ok(SlicingState { hs, gs, bad_dims: dims, seed, pass_seed, form_degree: e, log });
            }
            outcome = Some(format!("Jacobian certificate failed (dim_ok {}, smooth {})", cert.dim_ok, cert.smooth));
        }
        log.push(AttemptRecord { restart, seed: pass_seed, form_degree: e, accepted: hs.len(), outcome: outcome.unwrap() });
        failures_here += 1;
        if finite {
            if failures_here >= budget.retries_per_degree && e < budget.max_form_degree {
                e += 1;
                failures_here = 0;
            }
        } else {
            window = window.saturating_mul(2);
        }
    }
    Err(BertiniError::Exhausted { log })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::BadComponent;
    use crate::ideals::HomIdeal;
    use crate::fields::{PrimeField, Rationals};
    use crate::text::parse_ext_poly;

    #[test]
    fn sampled_forms() {
        let f2 = PrimeField::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..64 {
            seen.insert(sample_form(&f2, 2, 1, 1, &mut rng).format(&f2, 'U'));
        }
        let want: std::collections::BTreeSet<String> =
            ["1*U0", "1*U1", "1*U0 + 1*U1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(seen, want);
        let q = Rationals;
        for _ in 0..32 {
            let h = sample_form(&q, 3, 1, 1, &mut rng);
            assert!(!h.is_zero());
            assert!(h.terms().iter().all(|(_, c)| c.numer().magnitude() <= &1u32.into() && c.is_integer()));
        }
        assert_eq!(monomial_basis(3, 2).len(), 6);
    }

    #[test]
    fn escalates_when_linear_forms_cannot_avoid_the_bad_locus() {
        // On P^1 over F_2 the bad locus is the three rational points; each
        // nonzero linear form vanishes at one of them, while x^2 + xy + y^2
        // has no rational zero.
        let f2 = PrimeField::new(2).unwrap();
        let ext = GaloisExtension::trivial(f2);
        let fs: Vec<ExtPoly<PrimeField>> = (0..2).map(|i| MultiPoly::var(ext.field(), 2, i)).collect();
        let q = parse_ext_poly(ext.field(), "T0*T1*(T0 + T1)", 'T', 2).unwrap();
        let ideal = HomIdeal::new(2, vec![q]).unwrap();
        let bad = BadLocus { components: vec![BadComponent { g: 0, label: "c".into(), ideal, dim: 0, fast_dim: None }] };
        let budget = SlicingBudget::default();
        let st = slicing_loop(&ext, &fs, &bad, 1, 0, &budget, &GbBudget::default(), 11).unwrap();
        assert_eq!(st.form_degree, 2);
        assert_eq!(st.bad_dims.last().unwrap(), &vec![-1]);
        assert!(st.log.iter().any(|a| a.form_degree == 1 && a.outcome.starts_with("no acceptable form")));
        // same seed, same forms
        let again = slicing_loop(&ext, &fs, &bad, 1, 0, &budget, &GbBudget::default(), 11).unwrap();
        assert_eq!(st.hs, again.hs);
    }

    #[test]
    fn trivial_group_accepts_first_smooth_form() {
        let q = Rationals;
        let ext = GaloisExtension::trivial(q);
        let fs: Vec<ExtPoly<Rationals>> = (0..4).map(|i| MultiPoly::var(ext.field(), 4, i)).collect();
        let bad = BadLocus { components: vec![] };
        let budget = SlicingBudget::default();
        let st = slicing_loop(&ext, &fs, &bad, 3, 2, &budget, &GbBudget::default(), 3).unwrap();
        assert_eq!(st.gs.len(), 1);
        assert_eq!(st.gs[0].total_degree(), Some(1));
    }
}
