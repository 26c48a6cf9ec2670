//! The output bundle: one directory holding
//!
//! * `y_ideal.txt`: the forms `g_j` cutting out `Y`, one per line;
//! * `quotient_map.txt`: the degree `d` and the invariants `f_i`;
//! * `slicing.txt`: the downstairs forms `h_j`, their degree and the seeds;
//! * `certificates.json`: the certificate bundle;
//! * `job.lock`: the job with every parameter and the resolved choices;
//! * `x_ideal.txt` (optional): relations among the `f_i`.
//!
//! Lines starting with `#` are comments. Polynomials use the text grammar of
//! the core crate, with `x` for the generator of `k'`.

use std::fs;
use std::path::Path;

use kform_core::action::ExtPoly;
use kform_core::construct::ConstructionResult;
use kform_core::fields::{BaseField, GaloisExtension};
use kform_core::poly::MultiPoly;
use kform_core::text::{parse_base_poly, parse_ext_poly};
use kform_core::verify::CertificateBundle;

use crate::error::CliError;
use crate::jobspec::JobSpec;

pub const Y_IDEAL: &str = "y_ideal.txt";
pub const QUOTIENT_MAP: &str = "quotient_map.txt";
pub const SLICING: &str = "slicing.txt";
pub const CERTIFICATES: &str = "certificates.json";
pub const JOB_LOCK: &str = "job.lock";
pub const X_IDEAL: &str = "x_ideal.txt";

/// File name and contents of every bundle file, in writing order.
pub fn render<B: BaseField>(result: &ConstructionResult<B>, lock: &JobSpec, certs: &CertificateBundle) -> Vec<(&'static str, String)> {
    let ext = result.rep.ext();
    let k1 = ext.field();
    let base = ext.base();
    let nvars = result.rep.dim();
    let field_note = field_description(ext);
    let mut y = format!("# Y in P^{} over {field_note}, {} forms in T0..T{}\n", nvars - 1, result.slicing.gs.len(), nvars - 1);
    for g in &result.slicing.gs {
        y.push_str(&g.format(k1, 'T'));
        y.push('\n');
    }
    let mut q = format!("# invariants f_0..f_{} of degree d in T0..T{}\nd = {}\n", result.qmd.s(), nvars - 1, result.qmd.d);
    for (i, f) in result.qmd.fs.iter().enumerate() {
        q.push_str(&format!("f{i} = {}\n", f.format(k1, 'T')));
    }
    let st = &result.slicing;
    let mut s = format!(
        "# forms h_j over k in U0..U{} with g_j = h_j(f_0, .., f_s)\nform_degree = {}\nseed = {}\npass_seed = {}\n",
        result.qmd.fs.len().saturating_sub(1),
        st.form_degree,
        st.seed,
        st.pass_seed
    );
    for (j, h) in st.hs.iter().enumerate() {
        s.push_str(&format!("h{j} = {}\n", h.format(base, 'U')));
    }
    for (i, dims) in st.bad_dims.iter().enumerate() {
        s.push_str(&format!("# bad locus dimension bounds after {i} slices: {dims:?}\n"));
    }
    for a in &st.log {
        s.push_str(&format!(
            "# attempt {}: seed {} form degree {} accepted {}: {}\n",
            a.restart, a.seed, a.form_degree, a.accepted, a.outcome
        ));
    }
    let mut files = vec![
        (Y_IDEAL, y),
        (QUOTIENT_MAP, q),
        (SLICING, s),
        (CERTIFICATES, certificates_json(certs)),
        (JOB_LOCK, lock.to_toml()),
    ];
    if let Some(x) = &result.x_ideal {
        let mut t = format!(
            "# relations among f_0..f_{} of U-degree at most {}{}\n",
            result.qmd.s(),
            x.cap,
            if x.partial { " (elimination stopped at its budget; the list may be incomplete)" } else { "" }
        );
        for r in &x.gens {
            t.push_str(&r.format(base, 'U'));
            t.push('\n');
        }
        files.push((X_IDEAL, t));
    }
    files
}

pub fn certificates_json(certs: &CertificateBundle) -> String {
    let mut s = serde_json::to_string_pretty(certs).expect("certificates serialize");
    s.push('\n');
    s
}

fn field_description<B: BaseField>(ext: &GaloisExtension<B>) -> String {
    let base = ext.base();
    if ext.degree() == 1 {
        return base.kind().to_string();
    }
    let m: MultiPoly<B::Elem> = {
        let terms = ext
            .modulus()
            .iter()
            .enumerate()
            .map(|(i, c)| (kform_core::poly::Monomial::new(&[i as u16]), c.clone()))
            .collect();
        MultiPoly::from_terms(base, 1, terms)
    };
    format!("{}[x]/({})", base.kind(), m.format(base, 'x').replace("x0", "x"))
}

/// Writes all files into `dir`, creating it if needed.
pub fn write(dir: &Path, files: &[(&'static str, String)]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for (name, text) in files {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}

pub fn read_file(dir: &Path, name: &str) -> Result<String, CliError> {
    let path = dir.join(name);
    fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))
}

/// Non-comment, non-empty lines.
fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// `key = value` lines in order.
fn assignments<'a>(text: &'a str, file: &str) -> Result<Vec<(&'a str, &'a str)>, CliError> {
    content_lines(text)
        .map(|l| {
            l.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| CliError::Parse(format!("{file}: expected 'key = value', got '{l}'")))
        })
        .collect()
}

fn number<T: std::str::FromStr>(v: &str, key: &str, file: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Parse(format!("{file}: bad value for {key}: '{v}'")))
}

/// Indexed entries `<prefix><i> = poly`, which must run `0, 1, ..` in order.
fn indexed<'a>(entries: &[(&'a str, &'a str)], prefix: &str, file: &str) -> Result<Vec<&'a str>, CliError> {
    let mut out = Vec::new();
    for (k, v) in entries {
        if let Some(rest) = k.strip_prefix(prefix) {
            if rest.parse::<usize>().ok() != Some(out.len()) {
                return Err(CliError::Parse(format!("{file}: expected {prefix}{}, got {k}", out.len())));
            }
            out.push(*v);
        }
    }
    Ok(out)
}

/// The serialized parts of a construction, read back from disk.
#[derive(Debug, Clone)]
pub struct Loaded<B: BaseField> {
    pub d: u32,
    pub fs: Vec<ExtPoly<B>>,
    pub gs: Vec<ExtPoly<B>>,
    pub hs: Vec<MultiPoly<B::Elem>>,
    pub form_degree: u32,
    pub seed: u64,
}

/// Parses the polynomial files of a bundle over `ext` with `nvars` variables `T`.
pub fn load<B: BaseField>(dir: &Path, ext: &GaloisExtension<B>, nvars: usize) -> Result<Loaded<B>, CliError> {
    let k1 = ext.field();
    let ext_poly = |s: &str, file: &str| {
        parse_ext_poly(k1, s, 'T', nvars).map_err(|e| CliError::Parse(format!("{file}: '{s}': {e}")))
    };
    let qtext = read_file(dir, QUOTIENT_MAP)?;
    let q = assignments(&qtext, QUOTIENT_MAP)?;
    let d = q
        .iter()
        .find(|(k, _)| *k == "d")
        .ok_or_else(|| CliError::Parse(format!("{QUOTIENT_MAP}: missing d")))
        .and_then(|(_, v)| number(v, "d", QUOTIENT_MAP))?;
    let fs = indexed(&q, "f", QUOTIENT_MAP)?
        .into_iter()
        .map(|s| ext_poly(s, QUOTIENT_MAP))
        .collect::<Result<Vec<_>, _>>()?;
    let ytext = read_file(dir, Y_IDEAL)?;
    let gs = content_lines(&ytext).map(|s| ext_poly(s, Y_IDEAL)).collect::<Result<Vec<_>, _>>()?;
    let stext = read_file(dir, SLICING)?;
    let s = assignments(&stext, SLICING)?;
    let get = |key: &str| {
        s.iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| CliError::Parse(format!("{SLICING}: missing {key}")))
    };
    let form_degree = number(get("form_degree")?, "form_degree", SLICING)?;
    let seed = number(get("seed")?, "seed", SLICING)?;
    let hs = indexed(&s, "h", SLICING)?
        .into_iter()
        .map(|t| {
            parse_base_poly(ext.base(), t, 'U', fs.len()).map_err(|e| CliError::Parse(format!("{SLICING}: '{t}': {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Loaded { d, fs, gs, hs, form_degree, seed })
}
