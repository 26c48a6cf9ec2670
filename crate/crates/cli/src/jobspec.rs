//! Job files.
//!
//! A job is a TOML document with the sections `[field]`, `[galois-group]`,
//! `[group]`, `[rep]` and `[params]`:
//!
//! ```toml
//! [field]
//! k = "F5"                       # "Q" or "F<p>"
//! modulus = "x^2 - 2"            # omit for k' = k
//! automorphisms = ["x", "-x"]    # image of x under each element of Gamma, in order
//!
//! [galois-group]
//! group = "cyclic 2"
//!
//! [group]
//! e = "cyclic 4"                 # the extension group E
//! pi = [0, 1, 0, 1]              # E -> Gamma; G defaults to ker(pi)
//!
//! [rep]
//! kind = "explicit"
//! generators = { "1" = [[2, 0], [0, 1]] }
//!
//! [params]
//! r = 2
//! seed = 1
//! ```
//!
//! Groups are `"trivial"`, `"cyclic n"`, `"symmetric n"`, products such as
//! `"cyclic 2 x cyclic 3"`, or `{ labels = [..], table = [[..], ..] }`.
//! Group elements are referred to by label (string) or by index (integer).

use std::collections::BTreeMap;

use kform_core::bertini::SlicingBudget;
use kform_core::construct::{DPolicy, MPolicy, PipelineParams};
use kform_core::fields::{BaseField, BaseFieldKind, GaloisExtension, PrimeField, Rationals, SimpleExtension};
use kform_core::groups::{FiniteGroup, GroupExtension, GroupHom};
use kform_core::ideals::GbBudget;
use kform_core::linalg::Matrix;
use kform_core::rep::SemilinearRep;
use kform_core::text::{parse_ext_element, parse_univariate};
use kform_core::verify::VerifyOptions;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    #[serde(rename = "galois-group", default, skip_serializing_if = "Option::is_none")]
    pub galois_group: Option<GaloisGroupSpec>,
    pub group: ExtensionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<RepSpec>,
    #[serde(default)]
    pub params: Params,
    /// Filled in by `construct` when writing `job.lock`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolved: Option<Resolved>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub k: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphisms: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaloisGroupSpec {
    pub group: GroupDef,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupDef {
    Short(String),
    Table { labels: Vec<String>, table: Vec<Vec<Label>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub e: GroupDef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<Label>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iota: Option<Vec<Label>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<GroupDef>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    Regular,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSpec {
    pub kind: RepKind,
    /// Matrices over `k` on generators of `E`, keyed by element label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<BTreeMap<String, Vec<Vec<Scalar>>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

/// Run parameters. Unset values take the library defaults; `job.lock`
/// records every value actually used.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub r: Option<usize>,
    #[serde(default, with = "seed_opt")]
    pub seed: Option<u64>,
    /// Number of copies of the representation; automatic when unset.
    pub m: Option<usize>,
    pub d_start: Option<u32>,
    pub d_step: Option<u32>,
    pub d_max: Option<u32>,
    pub j_max: Option<u32>,
    pub samples_per_slice: Option<u32>,
    pub max_retries: Option<u32>,
    pub retries_per_degree: Option<u32>,
    pub form_degree_start: Option<u32>,
    pub degree_cap: Option<u32>,
    pub window_start: Option<u64>,
    pub per_step_downstairs_checks: Option<bool>,
    pub emit_x_ideal: Option<bool>,
    pub x_degree_cap: Option<u32>,
    pub gb_max_degree: Option<u32>,
    pub gb_max_pairs: Option<usize>,
    pub gb_max_basis: Option<usize>,
    pub gb_max_terms: Option<usize>,
    pub descent_max: Option<u32>,
    pub spotcheck: Option<bool>,
    pub spotcheck_degree: Option<u32>,
    pub spotcheck_max_points: Option<u64>,
    pub threads: Option<usize>,
}

/// Outcome of the construction, recorded in `job.lock`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resolved {
    pub m: usize,
    /// Projective dimension `n` of the boosted ambient space.
    pub n: usize,
    pub d: u32,
    pub s: i64,
    pub j_max: u32,
    pub form_degree: u32,
    #[serde(with = "seed")]
    pub pass_seed: u64,
}

/// TOML integers are signed 64-bit, so seeds above `i64::MAX` are written as strings.
mod seed {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    pub(super) enum Repr {
        Int(i64),
        Text(String),
    }

    pub(super) fn to_repr(v: u64) -> Repr {
        i64::try_from(v).map_or_else(|_| Repr::Text(v.to_string()), Repr::Int)
    }

    pub(super) fn from_repr<E: serde::de::Error>(r: Repr) -> Result<u64, E> {
        match r {
            Repr::Int(i) => u64::try_from(i).map_err(|_| E::custom("seed must be nonnegative")),
            Repr::Text(s) => s.parse().map_err(|_| E::custom(format!("bad seed '{s}'"))),
        }
    }

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        to_repr(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }
}

mod seed_opt {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::seed::{from_repr, to_repr, Repr};

    pub fn serialize<S: Serializer>(v: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        v.map(to_repr).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        Option::<Repr>::deserialize(d)?.map(from_repr).transpose()
    }
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("job specs serialize")
    }

    pub fn base_kind(&self) -> Result<BaseFieldKind, CliError> {
        let field = self.field.as_ref().ok_or_else(|| CliError::Validation("missing [field] section".into()))?;
        BaseFieldKind::parse(&field.k).map_err(|e| CliError::Parse(format!("field k: {e}")))
    }

    /// The pipeline parameters, defaults filled in.
    pub fn pipeline_params(&self) -> Result<PipelineParams, CliError> {
        let p = &self.params;
        let r = p.r.ok_or_else(|| CliError::Validation("params.r is required".into()))?;
        let mut out = PipelineParams::new(r, p.seed.unwrap_or(0));
        out.m_policy = p.m.map_or(MPolicy::Auto, MPolicy::Explicit);
        out.d_policy = DPolicy { start: p.d_start, step: p.d_step, max: p.d_max, j_max: p.j_max };
        let sd = SlicingBudget::default();
        out.slicing = SlicingBudget {
            samples_per_slice: p.samples_per_slice.unwrap_or(sd.samples_per_slice),
            form_degree_start: p.form_degree_start.unwrap_or(sd.form_degree_start),
            max_form_degree: p.degree_cap.unwrap_or(sd.max_form_degree),
            restarts: p.max_retries.unwrap_or(sd.restarts),
            retries_per_degree: p.retries_per_degree.unwrap_or(sd.retries_per_degree),
            window_start: p.window_start.unwrap_or(sd.window_start),
            per_step_checks: p.per_step_downstairs_checks.unwrap_or(sd.per_step_checks),
        };
        let gd = GbBudget::default();
        out.gb = GbBudget {
            max_degree: p.gb_max_degree.unwrap_or(gd.max_degree),
            max_pairs: p.gb_max_pairs.unwrap_or(gd.max_pairs),
            max_basis: p.gb_max_basis.unwrap_or(gd.max_basis),
            max_terms: p.gb_max_terms.unwrap_or(gd.max_terms),
            ..gd
        };
        out.emit_x_ideal = p.emit_x_ideal.unwrap_or(false);
        out.x_degree_cap = p.x_degree_cap.unwrap_or(out.x_degree_cap);
        let vd = VerifyOptions::default();
        out.verify = VerifyOptions {
            gb: out.gb.clone(),
            descent_max: p.descent_max.unwrap_or(vd.descent_max),
            spotcheck: p.spotcheck.unwrap_or(vd.spotcheck),
            spotcheck_degree: p.spotcheck_degree.or(vd.spotcheck_degree),
            spotcheck_max_points: p.spotcheck_max_points.unwrap_or(vd.spotcheck_max_points),
            base_point_check: out.emit_x_ideal || vd.base_point_check,
        };
        Ok(out)
    }

    /// Writes every value of `pp` back into `params`, so the lock file does
    /// not depend on library defaults.
    pub fn fill_params(&mut self, pp: &PipelineParams) {
        let p = &mut self.params;
        p.r = Some(pp.r);
        p.seed = Some(pp.seed);
        p.d_start = pp.d_policy.start.or(p.d_start);
        p.d_step = pp.d_policy.step.or(p.d_step);
        p.d_max = pp.d_policy.max.or(p.d_max);
        p.samples_per_slice = Some(pp.slicing.samples_per_slice);
        p.max_retries = Some(pp.slicing.restarts);
        p.retries_per_degree = Some(pp.slicing.retries_per_degree);
        p.form_degree_start = Some(pp.slicing.form_degree_start);
        p.degree_cap = Some(pp.slicing.max_form_degree);
        p.window_start = Some(pp.slicing.window_start);
        p.per_step_downstairs_checks = Some(pp.slicing.per_step_checks);
        p.emit_x_ideal = Some(pp.emit_x_ideal);
        p.x_degree_cap = Some(pp.x_degree_cap);
        p.gb_max_degree = Some(pp.gb.max_degree);
        p.gb_max_pairs = Some(pp.gb.max_pairs);
        p.gb_max_basis = Some(pp.gb.max_basis);
        p.gb_max_terms = Some(pp.gb.max_terms);
        p.descent_max = Some(pp.verify.descent_max);
        p.spotcheck = Some(pp.verify.spotcheck);
        p.spotcheck_degree = pp.verify.spotcheck_degree;
        p.spotcheck_max_points = Some(pp.verify.spotcheck_max_points);
    }

    /// The extension `1 -> G -> E -> Gamma -> 1` described by the job.
    pub fn group_extension(&self) -> Result<GroupExtension, CliError> {
        let gamma = match &self.galois_group {
            Some(g) => build_group(&g.group)?,
            None => FiniteGroup::trivial(),
        };
        let e = build_group(&self.group.e)?;
        let pi = match &self.group.pi {
            Some(images) => GroupHom::new(resolve_map(images, &e, &gamma, "pi")?),
            None if gamma.order() == 1 => GroupHom::new(vec![gamma.identity(); e.order()]),
            None => return Err(CliError::Validation("group.pi is required when Gamma is nontrivial".into())),
        };
        pi.check(&e, &gamma).map_err(|err| CliError::Validation(format!("pi: {err}")))?;
        let (g, iota) = match (&self.group.g, &self.group.iota) {
            (Some(gdef), Some(images)) => {
                let g = build_group(gdef)?;
                let iota = GroupHom::new(resolve_map(images, &g, &e, "iota")?);
                (g, iota)
            }
            (None, None) => {
                let (g, emb) = e.subgroup(&pi.kernel(&e, &gamma));
                (g, GroupHom::new(emb))
            }
            _ => return Err(CliError::Validation("group.g and group.iota must be given together".into())),
        };
        let ext = GroupExtension { g, e, gamma, iota, pi };
        ext.validate().map_err(|err| CliError::Validation(err.to_string()))?;
        Ok(ext)
    }

    /// The field extension `k'|k` with its automorphisms.
    pub fn galois_extension<B: BaseField>(&self, base: B, gamma: &FiniteGroup) -> Result<GaloisExtension<B>, CliError> {
        let field = self.field.as_ref().ok_or_else(|| CliError::Validation("missing [field] section".into()))?;
        let Some(modulus) = &field.modulus else {
            if gamma.order() != 1 {
                return Err(CliError::Validation("a nontrivial Galois group needs field.modulus".into()));
            }
            return Ok(GaloisExtension::trivial(base));
        };
        let m = parse_univariate(&base, modulus).map_err(|e| CliError::Parse(format!("field.modulus: {e}")))?;
        let simple = SimpleExtension::new(base.clone(), m.clone()).map_err(|e| CliError::Validation(e.to_string()))?;
        let autos = field
            .automorphisms
            .as_ref()
            .ok_or_else(|| CliError::Validation("field.automorphisms is required with a modulus".into()))?
            .iter()
            .map(|s| parse_ext_element(&simple, s).map_err(|e| CliError::Parse(format!("automorphism '{s}': {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let iso: Vec<usize> = (0..gamma.order()).collect();
        GaloisExtension::new(base, m, autos, gamma.clone(), &iso).map_err(|e| CliError::Validation(e.to_string()))
    }

    /// The representation `tau` of `E` (before any boosting).
    pub fn representation<B: BaseField>(&self, base: B) -> Result<SemilinearRep<B>, CliError> {
        let grp = self.group_extension()?;
        let ext = self.galois_extension(base.clone(), &grp.gamma)?;
        let spec = self.rep.as_ref().ok_or_else(|| CliError::Validation("missing [rep] section".into()))?;
        let rep = match spec.kind {
            RepKind::Regular => SemilinearRep::regular(ext, grp),
            RepKind::Explicit => {
                let gens = spec
                    .generators
                    .as_ref()
                    .ok_or_else(|| CliError::Validation("rep.generators is required for an explicit rep".into()))?;
                let mut mats = Vec::new();
                for (label, rows) in gens {
                    let g = grp.e.index_of(label).map_err(|e| CliError::Validation(e.to_string()))?;
                    let rows = rows
                        .iter()
                        .map(|row| row.iter().map(|c| scalar(&base, c)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    mats.push((g, Matrix::from_rows(rows)));
                }
                SemilinearRep::from_generators(ext, grp, mats)
            }
        };
        rep.map_err(|e| CliError::Validation(e.to_string()))
    }
}

fn scalar<B: BaseField>(base: &B, c: &Scalar) -> Result<B::Elem, CliError> {
    match c {
        Scalar::Int(n) => Ok(base.from_i64(*n)),
        Scalar::Text(s) => base.parse_elem(s).map_err(|e| CliError::Parse(format!("matrix entry '{s}': {e}"))),
    }
}

fn resolve(label: &Label, g: &FiniteGroup, what: &str) -> Result<usize, CliError> {
    match label {
        Label::Index(i) if *i < g.order() => Ok(*i),
        Label::Index(i) => Err(CliError::Validation(format!("{what}: element index {i} out of range"))),
        Label::Name(s) => g.index_of(s).map_err(|e| CliError::Validation(format!("{what}: {e}"))),
    }
}

fn resolve_map(images: &[Label], dom: &FiniteGroup, cod: &FiniteGroup, what: &str) -> Result<Vec<usize>, CliError> {
    if images.len() != dom.order() {
        return Err(CliError::Validation(format!("{what}: expected {} images, got {}", dom.order(), images.len())));
    }
    images.iter().map(|l| resolve(l, cod, what)).collect()
}

/// Builds a group from its shorthand or table.
pub fn build_group(def: &GroupDef) -> Result<FiniteGroup, CliError> {
    match def {
        GroupDef::Short(s) => {
            let mut factors = s.split(['x', '×']).map(str::trim).filter(|f| !f.is_empty());
            let first = factors.next().ok_or_else(|| CliError::Parse(format!("empty group '{s}'")))?;
            let mut g = build_factor(first)?;
            for f in factors {
                g = FiniteGroup::direct_product(&g, &build_factor(f)?);
            }
            Ok(g)
        }
        GroupDef::Table { labels, table } => {
            let n = labels.len();
            let lookup = |l: &Label| match l {
                Label::Index(i) if *i < n => Ok(*i),
                Label::Index(i) => Err(CliError::Validation(format!("group table: index {i} out of range"))),
                Label::Name(s) => labels
                    .iter()
                    .position(|x| x == s)
                    .ok_or_else(|| CliError::Validation(format!("group table: unknown label '{s}'"))),
            };
            let rows = table
                .iter()
                .map(|row| row.iter().map(lookup).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            FiniteGroup::from_table(labels.clone(), rows).map_err(|e| CliError::Validation(e.to_string()))
        }
    }
}

fn build_factor(s: &str) -> Result<FiniteGroup, CliError> {
    let bad = || CliError::Parse(format!("unknown group '{s}'"));
    let words: Vec<&str> = s.split_whitespace().collect();
    let size = |w: &str| w.parse::<usize>().ok().filter(|&n| n >= 1).ok_or_else(bad);
    match words.as_slice() {
        ["trivial"] => Ok(FiniteGroup::trivial()),
        ["cyclic", n] => Ok(FiniteGroup::cyclic(size(n)?)),
        ["symmetric", n] if size(n)? <= 5 => Ok(FiniteGroup::symmetric(size(n)?)),
        [w] if w.starts_with("Z/") => Ok(FiniteGroup::cyclic(size(&w[2..])?)),
        _ => Err(bad()),
    }
}

/// A base field value of either kind.
#[derive(Debug, Clone)]
pub enum AnyBase {
    Rationals(Rationals),
    Prime(PrimeField),
}

impl AnyBase {
    pub fn new(kind: BaseFieldKind) -> Result<Self, CliError> {
        Ok(match kind {
            BaseFieldKind::Rationals => AnyBase::Rationals(Rationals),
            BaseFieldKind::Prime(p) => {
                AnyBase::Prime(PrimeField::new(p as u64).map_err(|e| CliError::Validation(e.to_string()))?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INSTANCE_C: &str = r#"
[field]
k = "F5"
modulus = "x^2 - 2"
automorphisms = ["x", "-x"]

[galois-group]
group = "cyclic 2"

[group]
e = "cyclic 4"
pi = [0, 1, 0, 1]

[rep]
kind = "explicit"
generators = { "1" = [[2, 0], [0, 1]] }

[params]
r = 2
seed = 1
"#;

    #[test]
    fn kernel_is_the_default_geometric_group() {
        let job = JobSpec::parse(INSTANCE_C).unwrap();
        let ext = job.group_extension().unwrap();
        assert_eq!(ext.g.order(), 2);
        assert_eq!(ext.iota_image(), vec![0, 2]);
        let rep = job.representation(PrimeField::new(5).unwrap()).unwrap();
        assert_eq!(rep.dim(), 2);
    }

    #[test]
    fn lock_roundtrip() {
        let mut job = JobSpec::parse(INSTANCE_C).unwrap();
        let pp = job.pipeline_params().unwrap();
        job.fill_params(&pp);
        job.resolved = Some(Resolved { m: 3, n: 5, d: 2, s: 11, j_max: 12, form_degree: 1, pass_seed: u64::MAX - 3 });
        let text = job.to_toml();
        assert_eq!(JobSpec::parse(&text).unwrap(), job);
        assert_eq!(JobSpec::parse(&text).unwrap().pipeline_params().unwrap(), pp);
    }

    #[test]
    fn group_shorthands() {
        assert_eq!(build_group(&GroupDef::Short("cyclic 2 x cyclic 3".into())).unwrap().order(), 6);
        assert_eq!(build_group(&GroupDef::Short("symmetric 3".into())).unwrap().order(), 6);
        assert_eq!(build_group(&GroupDef::Short("Z/4".into())).unwrap().order(), 4);
        assert!(matches!(build_group(&GroupDef::Short("dihedral 4".into())), Err(CliError::Parse(_))));
        let table = GroupDef::Table {
            labels: vec!["e".into(), "a".into()],
            table: vec![vec![Label::Name("e".into()), Label::Name("a".into())], vec![Label::Index(1), Label::Index(0)]],
        };
        assert_eq!(build_group(&table).unwrap().order(), 2);
    }

    #[test]
    fn rejects_unknown_keys_and_missing_pi() {
        assert!(matches!(JobSpec::parse("[group]\ne = \"cyclic 2\"\nbogus = 1\n"), Err(CliError::Parse(_))));
        let job = JobSpec::parse("[galois-group]\ngroup = \"cyclic 2\"\n[group]\ne = \"cyclic 2\"\n").unwrap();
        assert!(matches!(job.group_extension(), Err(CliError::Validation(_))));
    }
}
