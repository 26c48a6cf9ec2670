use std::path::Path;

use kform_core::action::generation_certificate;
use kform_core::construct::{run_pipeline, ConstructError};
use kform_core::fields::BaseField;
use kform_core::groups::{fiber_product_reconstruct, find_section_subgroups, FiniteGroup};
use kform_core::verify::{certify_bundle, CertificateBundle, VerifyInput};

use crate::bundle::{self, CERTIFICATES, JOB_LOCK};
use crate::error::CliError;
use crate::jobspec::{AnyBase, JobSpec, Resolved};

/// Flags that override `[params]`.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub max_retries: Option<u32>,
    pub form_degree_start: Option<u32>,
    pub degree_cap: Option<u32>,
    pub emit_x_ideal: bool,
    pub threads: Option<usize>,
    pub per_step_downstairs_checks: bool,
}

impl Overrides {
    fn apply(&self, job: &mut JobSpec) {
        let p = &mut job.params;
        p.seed = self.seed.or(p.seed);
        p.max_retries = self.max_retries.or(p.max_retries);
        p.form_degree_start = self.form_degree_start.or(p.form_degree_start);
        p.degree_cap = self.degree_cap.or(p.degree_cap);
        p.threads = self.threads.or(p.threads);
        if self.emit_x_ideal {
            p.emit_x_ideal = Some(true);
        }
        if self.per_step_downstairs_checks {
            p.per_step_downstairs_checks = Some(true);
        }
    }
}

pub fn load_job(path: &Path) -> Result<JobSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    JobSpec::parse(&text)
}

fn configure_threads(n: Option<usize>) {
    if let Some(n) = n {
        // fails harmlessly when a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs the construction and writes the bundle into `out`.
pub fn construct(input: &Path, out: &Path, overrides: &Overrides) -> Result<Vec<String>, CliError> {
    let mut job = load_job(input)?;
    overrides.apply(&mut job);
    configure_threads(job.params.threads);
    match AnyBase::new(job.base_kind()?)? {
        AnyBase::Rationals(q) => construct_with(q, job, out),
        AnyBase::Prime(f) => construct_with(f, job, out),
    }
}

fn construct_with<B: BaseField>(base: B, mut job: JobSpec, out: &Path) -> Result<Vec<String>, CliError> {
    let rep = job.representation(base)?;
    let params = job.pipeline_params()?;
    let result = match run_pipeline(&rep, &params) {
        Ok(r) => r,
        Err(ConstructError::Certificates { failed, bundle }) => {
            // keep the failing certificates for inspection
            bundle::write(out, &[(CERTIFICATES, bundle::certificates_json(&bundle))])?;
            return Err(CliError::Certificate(failed));
        }
        Err(e) => return Err(e.into()),
    };
    job.fill_params(&params);
    let resolved = Resolved {
        m: result.m,
        n: result.rep.dim() - 1,
        d: result.qmd.d,
        s: result.qmd.s(),
        j_max: result.qmd.gen_cert.as_ref().map_or(0, |c| c.j_max),
        form_degree: result.slicing.form_degree,
        pass_seed: result.slicing.pass_seed,
    };
    job.resolved = Some(resolved.clone());
    bundle::write(out, &bundle::render(&result, &job, &result.certificates))?;
    let mut lines = vec![format!(
        "m = {}, n = {}, dim Q = {}, d = {}, s = {}, form degree = {}, seed = {}",
        resolved.m, resolved.n, result.dim_q, resolved.d, resolved.s, resolved.form_degree, params.seed
    )];
    lines.extend(summarize(&result.certificates));
    if let Some(x) = &result.x_ideal {
        lines.push(format!("image relations: {}{}", x.gens.len(), if x.partial { " (partial)" } else { "" }));
    }
    lines.push(format!("bundle written to {}", out.display()));
    Ok(lines)
}

/// Re-certifies a bundle from its files alone.
pub fn verify(dir: &Path) -> Result<Vec<String>, CliError> {
    let job = JobSpec::parse(&bundle::read_file(dir, JOB_LOCK)?)?;
    configure_threads(job.params.threads);
    let certs = match AnyBase::new(job.base_kind()?)? {
        AnyBase::Rationals(q) => verify_with(q, &job, dir)?,
        AnyBase::Prime(f) => verify_with(f, &job, dir)?,
    };
    let mut lines = summarize(&certs);
    if let Ok(text) = bundle::read_file(dir, CERTIFICATES) {
        let same = serde_json::from_str::<CertificateBundle>(&text)
            .map(|stored| stored.without_timings() == certs.without_timings())
            .unwrap_or(false);
        lines.push(format!("stored {CERTIFICATES}: {}", if same { "identical up to timings" } else { "differs" }));
    }
    match certs.first_failure() {
        None => Ok(lines),
        Some(failed) => Err(CliError::Certificate(format!("{failed}\n{}", lines.join("\n")))),
    }
}

/// The certificate bundle recomputed from the files in `dir`.
pub fn recertify<B: BaseField>(base: B, job: &JobSpec, dir: &Path) -> Result<CertificateBundle, CliError> {
    verify_with(base, job, dir)
}

fn verify_with<B: BaseField>(base: B, job: &JobSpec, dir: &Path) -> Result<CertificateBundle, CliError> {
    let resolved = job.resolved.as_ref().ok_or_else(|| CliError::Parse(format!("{JOB_LOCK} has no [resolved] section")))?;
    let rep = job.representation(base)?;
    let rep = if resolved.m > 1 { rep.sum_copies(resolved.m) } else { rep };
    if rep.dim() != resolved.n + 1 {
        return Err(CliError::Validation(format!("{JOB_LOCK}: n = {} but the representation has dimension {}", resolved.n, rep.dim())));
    }
    let params = job.pipeline_params()?;
    let loaded = bundle::load(dir, rep.ext(), rep.dim())?;
    let generation = generation_certificate(&rep, &loaded.fs, loaded.d, resolved.j_max.max(2))
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let input = VerifyInput {
        rep,
        r: params.r,
        d: loaded.d,
        fs: loaded.fs,
        hs: loaded.hs,
        gs: loaded.gs,
        seed: loaded.seed,
        generation: Some(generation),
    };
    Ok(certify_bundle(&input, &params.verify))
}

fn status(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "FAIL"
    }
}

/// One line per certificate.
pub fn summarize(c: &CertificateBundle) -> Vec<String> {
    let mut out = vec![
        format!("invariance: {} ({} forms, |E| = {})", status(c.invariance.check.passed), c.invariance.forms, c.invariance.group_order),
        format!(
            "dimension: {} (dim {} of expected {}, {} forms)",
            status(c.dimension.check.passed),
            c.dimension.dim,
            c.dimension.expected_dim,
            c.dimension.forms
        ),
        format!("smoothness: {}", status(c.smoothness.check.passed)),
        format!(
            "freeness: {} (tested {:?}, twisted skipped {:?})",
            status(c.freeness.check.passed),
            c.freeness.tested,
            c.freeness.twisted_skipped
        ),
    ];
    if let Some(b) = &c.base_point_freeness {
        out.push(format!("base-point freeness: {}", status(b.passed)));
    }
    if let Some(g) = &c.generation {
        out.push(format!("generation (d = {}, J = {}): {}", g.d, g.j_max, status(g.passed)));
    }
    if let Some(d) = &c.descent {
        out.push(format!("descent: {} {:?} = {:?}", status(d.check.passed), d.geometric, d.arithmetic));
    }
    if let Some(s) = &c.orbit_spotcheck {
        out.push(format!(
            "orbit spot-check over F_{}: {} ({} points, {} pairs)",
            s.field_order,
            status(s.check.passed),
            s.points,
            s.pairs_checked
        ));
    }
    for w in [&c.invariance.check, &c.dimension.check, &c.smoothness.check, &c.freeness.check].into_iter().filter_map(|k| k.witness.as_ref()) {
        out.push(format!("  witness: {w}"));
    }
    out.push(format!("bundle: {}", if c.green { "green" } else { "NOT green" }));
    out
}

fn labels(g: &FiniteGroup, elems: &[usize]) -> String {
    let names: Vec<&str> = elems.iter().map(|&a| g.label(a)).collect();
    format!("{{{}}}", names.join(", "))
}

/// Lists every normal `H` with `H ∩ G = 1` and checks the fiber product
/// reconstruction of `E` for each.
pub fn lemma(input: &Path) -> Result<Vec<String>, CliError> {
    let job = load_job(input)?;
    let ext = job.group_extension()?;
    let mut lines = vec![format!("|G| = {}, |E| = {}, |Gamma| = {}", ext.g.order(), ext.e.order(), ext.gamma.order())];
    let mut failures = Vec::new();
    for h in find_section_subgroups(&ext) {
        let fp = fiber_product_reconstruct(&ext, &h);
        let verdict = if fp.iso.is_some() { "isomorphic to E" } else { "NO isomorphism" };
        let line = format!(
            "H = {} (H' = {}): |E/H| = {}, |Gamma/H'| = {}, fiber product of order {} {verdict}",
            labels(&ext.e, &h.h),
            labels(&ext.gamma, &h.h_prime),
            fp.e_tilde.order(),
            fp.gamma_bar.order(),
            fp.fiber.order()
        );
        if fp.iso.is_none() {
            failures.push(line.clone());
        }
        lines.push(line);
    }
    if failures.is_empty() {
        Ok(lines)
    } else {
        Err(CliError::Certificate(format!("reconstruction failed: {}", failures.join("; "))))
    }
}
