//! Job descriptions and the command runner behind the `cayley-spectra`
//! binary.
//!
//! A job is one JSON document; see [`JobSpec::from_json`] for the accepted
//! fields. Output is deterministic: identical jobs produce byte-identical
//! JSON.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::characters::{character_table, verify_galois_character_identity, CharacterTable};
use crate::cyclotomic::{euler_phi, CycInt};
use crate::galois::{
    all_subgroups, check_lemma1, cyclic_subgroups, gamma_conjugacy_classes, is_power_closed, subgroup_closure,
    trivial_subgroup, unit_group, GaloisSubgroup,
};
use crate::group::{conjugacy_classes, ClassData, Group, GroupSpec, DEFAULT_SIZE_CAP};
use crate::oracle::{
    adjacency_matrix_with_cap, characteristic_polynomial, compare_spectra, confirm_exact, floating_eigenvalues,
    oracle_power_closed, ComparisonReport, ExactReport, DEFAULT_ORACLE_CAP, DEFAULT_TOLERANCE, EXACT_BACKEND_LIMIT,
};
use crate::spectra::{
    all_eigenvalues_integral, check_coefficient_symmetry, check_theorem1, check_theorem2, eigenvalues_via_characters,
    make_connection_set, theta_coefficients, Approx, ConnectionSet, ConnectionSpec, Spectrum,
};

pub const SCHEMA_VERSION: &str = "v1";
pub const DEFAULT_SWEEP_LIMIT: usize = 14;
/// Largest `φ(m)` for which field-membership checks run over the full subgroup
/// lattice of `(Z/mZ)*`; above it only cyclic subgroups are used.
pub const FULL_LATTICE_LIMIT: u64 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JobError {
    #[error("invalid `{field}`: {message}")]
    Input { field: String, message: String },
    #[error("computation failed: {0}")]
    Computation(String),
}

impl JobError {
    fn input(field: &str, message: impl ToString) -> JobError {
        JobError::Input {
            field: field.to_string(),
            message: message.to_string(),
        }
    }

    /// 2 for input errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Input { .. } => 2,
            JobError::Computation(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Classes,
    CheckIntegrality,
    CheckTheorem1,
    CheckTheorem2,
    CharacterTable,
    VerifyAll,
}

impl Command {
    pub fn parse(s: &str) -> Result<Command, JobError> {
        Ok(match s {
            "spectrum" => Command::Spectrum,
            "classes" => Command::Classes,
            "check-integrality" => Command::CheckIntegrality,
            "check-theorem1" => Command::CheckTheorem1,
            "check-theorem2" => Command::CheckTheorem2,
            "character-table" => Command::CharacterTable,
            "verify-all" => Command::VerifyAll,
            other => return Err(JobError::input("command", format!("unknown command `{other}`"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Classes => "classes",
            Command::CheckIntegrality => "check-integrality",
            Command::CheckTheorem1 => "check-theorem1",
            Command::CheckTheorem2 => "check-theorem2",
            Command::CharacterTable => "character-table",
            Command::VerifyAll => "verify-all",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConnectionChoice {
    Set(ConnectionSpec),
    /// Every subset of the non-identity classes.
    Sweep,
    /// Every subset of all classes, identity included.
    SweepWithIdentity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaChoice {
    /// The full unit group; the fixed field is `Q`.
    Rational,
    /// `{1}`; the fixed field is `Q(η_m)`.
    Splitting,
    Generators(Vec<i64>),
}

impl GammaChoice {
    fn resolve(&self, m: u64) -> Result<GaloisSubgroup, JobError> {
        match self {
            GammaChoice::Rational => Ok(unit_group(m)),
            GammaChoice::Splitting => Ok(trivial_subgroup(m)),
            GammaChoice::Generators(gens) => subgroup_closure(m, gens).map_err(|e| JobError::input("gamma", e)),
        }
    }

    pub fn from_json(value: &Value) -> Result<GammaChoice, JobError> {
        match value {
            Value::String(s) if s == "rational" => Ok(GammaChoice::Rational),
            Value::String(s) if s == "splitting" => Ok(GammaChoice::Splitting),
            Value::Object(map) => {
                let gens = map
                    .get("generators")
                    .and_then(Value::as_array)
                    .and_then(|a| a.iter().map(Value::as_i64).collect::<Option<Vec<_>>>())
                    .ok_or_else(|| JobError::input("gamma", "expected {\"generators\": [integers]}"))?;
                Ok(GammaChoice::Generators(gens))
            }
            _ => Err(JobError::input(
                "gamma",
                "expected \"rational\", \"splitting\" or {\"generators\": [...]}",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// Exact backend up to order 64, floating above, skipped past the cap.
    Auto,
    /// Both backends where they apply.
    On,
    Off,
    Exact,
    Floating,
}

impl OracleMode {
    pub fn parse(s: &str) -> Result<OracleMode, JobError> {
        Ok(match s {
            "auto" => OracleMode::Auto,
            "on" => OracleMode::On,
            "off" => OracleMode::Off,
            "exact" => OracleMode::Exact,
            "floating" => OracleMode::Floating,
            other => return Err(JobError::input("oracle", format!("unknown oracle mode `{other}`"))),
        })
    }

    fn backends(self, n: usize) -> (bool, bool) {
        match self {
            OracleMode::Auto => (n <= EXACT_BACKEND_LIMIT, n > EXACT_BACKEND_LIMIT),
            OracleMode::On => (n <= EXACT_BACKEND_LIMIT, true),
            OracleMode::Off => (false, false),
            OracleMode::Exact => (true, false),
            OracleMode::Floating => (false, true),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Table,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<OutputFormat, JobError> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "table" => Ok(OutputFormat::Table),
            other => Err(JobError::input("output", format!("unknown output format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub groups: Vec<GroupSpec>,
    pub connection: Option<ConnectionChoice>,
    pub gamma: Option<GammaChoice>,
    pub command: Option<Command>,
    pub oracle: OracleMode,
    pub tolerance: f64,
    pub output: OutputFormat,
    pub group_cap: usize,
    pub oracle_cap: usize,
    pub sweep_limit: usize,
}

impl Default for JobSpec {
    fn default() -> Self {
        JobSpec {
            groups: Vec::new(),
            connection: None,
            gamma: None,
            command: None,
            oracle: OracleMode::Auto,
            tolerance: DEFAULT_TOLERANCE,
            output: OutputFormat::Json,
            group_cap: DEFAULT_SIZE_CAP,
            oracle_cap: DEFAULT_ORACLE_CAP,
            sweep_limit: DEFAULT_SWEEP_LIMIT,
        }
    }
}

fn index_list(value: &Value, field: &str) -> Result<Vec<usize>, JobError> {
    value
        .as_array()
        .and_then(|a| {
            a.iter()
                .map(|v| v.as_u64().map(|x| x as usize))
                .collect::<Option<Vec<_>>>()
        })
        .ok_or_else(|| JobError::input(field, "expected an array of non-negative integers"))
}

impl ConnectionChoice {
    pub fn from_json(value: &Value) -> Result<ConnectionChoice, JobError> {
        Ok(match value {
            Value::String(s) => match s.as_str() {
                "all-nonidentity" => ConnectionChoice::Set(ConnectionSpec::AllNonIdentity),
                "sweep" => ConnectionChoice::Sweep,
                "sweep-with-identity" => ConnectionChoice::SweepWithIdentity,
                other => return Err(JobError::input("connection", format!("unknown keyword `{other}`"))),
            },
            Value::Array(_) => ConnectionChoice::Set(ConnectionSpec::Classes(index_list(value, "connection")?)),
            Value::Object(map) => {
                if let Some(v) = map.get("classes") {
                    ConnectionChoice::Set(ConnectionSpec::Classes(index_list(v, "connection.classes")?))
                } else if let Some(v) = map.get("elements") {
                    ConnectionChoice::Set(ConnectionSpec::Elements(index_list(v, "connection.elements")?))
                } else if let Some(v) = map.get("representatives") {
                    ConnectionChoice::Set(ConnectionSpec::Representatives(index_list(
                        v,
                        "connection.representatives",
                    )?))
                } else {
                    return Err(JobError::input(
                        "connection",
                        "expected `classes`, `elements` or `representatives`",
                    ));
                }
            }
            _ => return Err(JobError::input("connection", "unsupported value")),
        })
    }
}

impl JobSpec {
    /// Reads a job document. Fields: `v` (optional, must be "v1"), `group`
    /// or `groups`, `connection`, `gamma`, `command`, `oracle`, `tolerance`,
    /// `output`, `group_cap`, `oracle_cap`, `sweep_limit`.
    pub fn from_json(value: &Value) -> Result<JobSpec, JobError> {
        let map = value
            .as_object()
            .ok_or_else(|| JobError::input("job", "expected a JSON object"))?;
        let mut job = JobSpec::default();
        if let Some(v) = map.get("v") {
            if v.as_str() != Some(SCHEMA_VERSION) {
                return Err(JobError::input("v", format!("unsupported schema version {v}")));
            }
        }
        if let Some(g) = map.get("group") {
            job.groups
                .push(GroupSpec::from_json(g).map_err(|e| JobError::input("group", e))?);
        }
        if let Some(gs) = map.get("groups") {
            let arr = gs
                .as_array()
                .ok_or_else(|| JobError::input("groups", "expected an array"))?;
            for g in arr {
                job.groups
                    .push(GroupSpec::from_json(g).map_err(|e| JobError::input("groups", e))?);
            }
        }
        if let Some(c) = map.get("connection") {
            job.connection = Some(ConnectionChoice::from_json(c)?);
        }
        if let Some(g) = map.get("gamma") {
            job.gamma = Some(GammaChoice::from_json(g)?);
        }
        let string_field = |name: &str| -> Result<Option<&str>, JobError> {
            match map.get(name) {
                None => Ok(None),
                Some(v) => v
                    .as_str()
                    .map(Some)
                    .ok_or_else(|| JobError::input(name, "expected a string")),
            }
        };
        if let Some(c) = string_field("command")? {
            job.command = Some(Command::parse(c)?);
        }
        if let Some(o) = string_field("oracle")? {
            job.oracle = OracleMode::parse(o)?;
        }
        if let Some(o) = string_field("output")? {
            job.output = OutputFormat::parse(o)?;
        }
        if let Some(t) = map.get("tolerance") {
            job.tolerance = t
                .as_f64()
                .filter(|t| *t >= 0.0)
                .ok_or_else(|| JobError::input("tolerance", "expected a non-negative number"))?;
        }
        for (name, slot) in [
            ("group_cap", &mut job.group_cap),
            ("oracle_cap", &mut job.oracle_cap),
            ("sweep_limit", &mut job.sweep_limit),
        ] {
            if let Some(v) = map.get(name) {
                *slot = v
                    .as_u64()
                    .ok_or_else(|| JobError::input(name, "expected a non-negative integer"))?
                    as usize;
            }
        }
        Ok(job)
    }
}

/// Exit code and rendered output of a job.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
}

struct Context {
    spec: GroupSpec,
    group: Group,
    classes: ClassData,
    table: CharacterTable,
}

impl Context {
    fn build(spec: &GroupSpec, cap: usize) -> Result<Context, JobError> {
        let group = Group::build_with_cap(spec, cap).map_err(|e| JobError::input("group", e))?;
        let classes = conjugacy_classes(&group);
        let table = character_table(&group, &classes).map_err(|e| JobError::Computation(e.to_string()))?;
        Ok(Context {
            spec: spec.clone(),
            group,
            classes,
            table,
        })
    }

    fn header(&self) -> serde_json::Map<String, Value> {
        let mut map = serde_json::Map::new();
        map.insert("group".into(), self.spec.to_json());
        map.insert("order".into(), json!(self.group.order()));
        map.insert("exponent".into(), json!(self.group.exponent()));
        map.insert("class_count".into(), json!(self.classes.num_classes()));
        map
    }

    fn connection_sets(&self, choice: &ConnectionChoice, sweep_limit: usize) -> Result<Vec<ConnectionSet>, JobError> {
        let k = self.classes.num_classes();
        let subsets: Vec<Vec<usize>> = match choice {
            ConnectionChoice::Set(spec) => {
                return make_connection_set(spec, &self.group, &self.classes)
                    .map(|c| vec![c])
                    .map_err(|e| JobError::input("connection", e));
            }
            ConnectionChoice::Sweep => {
                if k > sweep_limit {
                    return Err(JobError::input(
                        "connection",
                        format!("sweep needs at most {sweep_limit} classes, group has {k}"),
                    ));
                }
                (0u64..1 << (k - 1))
                    .map(|mask| (1..k).filter(|j| mask >> (j - 1) & 1 == 1).collect())
                    .collect()
            }
            ConnectionChoice::SweepWithIdentity => {
                if k > sweep_limit {
                    return Err(JobError::input(
                        "connection",
                        format!("sweep needs at most {sweep_limit} classes, group has {k}"),
                    ));
                }
                (0u64..1 << k)
                    .map(|mask| (0..k).filter(|j| mask >> j & 1 == 1).collect())
                    .collect()
            }
        };
        Ok(subsets
            .iter()
            .map(|s| ConnectionSet::from_classes(&self.classes, s).expect("valid class indices"))
            .collect())
    }
}

#[derive(Debug, Clone, Serialize)]
struct OracleResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<ExactReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    floating: Option<ComparisonReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
}

impl OracleResult {
    fn passed(&self) -> bool {
        self.exact.as_ref().is_none_or(ExactReport::passed) && self.floating.as_ref().is_none_or(|r| r.pass)
    }
}

fn run_oracle(
    ctx: &Context,
    c: &ConnectionSet,
    sp: &Spectrum,
    job: &JobSpec,
) -> Result<Option<OracleResult>, JobError> {
    let n = ctx.group.order();
    let (want_exact, want_float) = job.oracle.backends(n);
    if !want_exact && !want_float {
        return Ok(None);
    }
    let a = match adjacency_matrix_with_cap(&ctx.group, c.elements(), job.oracle_cap) {
        Ok(a) => a,
        Err(e) => {
            return Ok(Some(OracleResult {
                exact: None,
                floating: None,
                skipped: Some(e.to_string()),
            }))
        }
    };
    let exact = want_exact.then(|| confirm_exact(&a, &characteristic_polynomial(&a), sp));
    let floating = if want_float {
        let eig = floating_eigenvalues(&a).map_err(|e| JobError::Computation(e.to_string()))?;
        Some(compare_spectra(sp, &eig, job.tolerance).map_err(|e| JobError::Computation(e.to_string()))?)
    } else {
        None
    };
    Ok(Some(OracleResult {
        exact,
        floating,
        skipped: None,
    }))
}

fn cyc_json(v: &CycInt) -> Value {
    json!({ "cyclotomic": v, "approx": Approx::from(v.approx()) })
}

fn require_connection(job: &JobSpec) -> Result<&ConnectionChoice, JobError> {
    job.connection
        .as_ref()
        .ok_or_else(|| JobError::input("connection", "this command needs a connection set"))
}

/// Runs a job, returning the rendered output and exit code. Input errors
/// are returned as `Err` (exit code 2).
pub fn run(job: &JobSpec) -> Result<Outcome, JobError> {
    let command = job.command.ok_or_else(|| JobError::input("command", "missing"))?;
    if job.groups.is_empty() {
        return Err(JobError::input("group", "missing"));
    }
    let mut results = Vec::new();
    let mut table = String::new();
    let mut ok = true;
    for spec in &job.groups {
        let ctx = Context::build(spec, job.group_cap)?;
        let (value, passed) = match command {
            Command::Spectrum => spectrum_command(&ctx, job, &mut table)?,
            Command::Classes => classes_command(&ctx, job, &mut table)?,
            Command::CheckIntegrality => integrality_command(&ctx, job, &mut table, false)?,
            Command::CheckTheorem1 => integrality_command(&ctx, job, &mut table, true)?,
            Command::CheckTheorem2 => theorem2_command(&ctx, job, &mut table)?,
            Command::CharacterTable => character_table_command(&ctx, &mut table),
            Command::VerifyAll => verify_all(&ctx, job, &mut table)?,
        };
        ok &= passed;
        results.push(value);
    }
    let output = match job.output {
        OutputFormat::Json => {
            let doc = json!({
                "v": SCHEMA_VERSION,
                "command": command.name(),
                "passed": ok,
                "results": results,
            });
            serde_json::to_string_pretty(&doc).expect("serialisable") + "\n"
        }
        OutputFormat::Table => {
            let _ = writeln!(table, "{}", if ok { "OK" } else { "FAILED" });
            table
        }
    };
    Ok(Outcome {
        exit_code: if ok { 0 } else { 1 },
        output,
    })
}

fn spectrum_command(ctx: &Context, job: &JobSpec, out: &mut String) -> Result<(Value, bool), JobError> {
    let sets = ctx.connection_sets(require_connection(job)?, job.sweep_limit)?;
    let mut ok = true;
    let mut instances = Vec::new();
    let _ = writeln!(out, "{}  |G| = {}", ctx.spec, ctx.group.order());
    for c in &sets {
        let sp = eigenvalues_via_characters(c, &ctx.table, &ctx.classes);
        let integral = all_eigenvalues_integral(&sp).map_err(|e| JobError::Computation(e.to_string()))?;
        let oracle = run_oracle(ctx, c, &sp, job)?;
        ok &= oracle.as_ref().is_none_or(OracleResult::passed);
        let _ = writeln!(out, "C = classes {:?} (|C| = {})", c.class_indices(), c.len());
        for e in sp.entries() {
            let z = e.value.approx();
            // avoid printing "-0.000000"
            let tidy = |x: f64| if x.abs() < 5e-7 { 0.0 } else { x };
            let _ = writeln!(
                out,
                "  chi{:<3} deg {:<3} x{:<5} {:<28} ~ {:.6}{:+.6}i",
                e.character,
                e.degree,
                e.multiplicity,
                e.value.to_string(),
                tidy(z.re),
                tidy(z.im)
            );
        }
        let mut inst = json!({
            "classes": c.class_indices(),
            "size": c.len(),
            "integral": integral,
            "spectrum": sp,
        });
        if let Some(o) = oracle {
            inst["oracle"] = serde_json::to_value(o).expect("serialisable");
        }
        instances.push(inst);
    }
    let mut head = ctx.header();
    head.insert("instances".into(), Value::Array(instances));
    Ok((Value::Object(head), ok))
}

fn classes_command(ctx: &Context, job: &JobSpec, out: &mut String) -> Result<(Value, bool), JobError> {
    let (g, cd) = (&ctx.group, &ctx.classes);
    let _ = writeln!(out, "{}  |G| = {}  exponent {}", ctx.spec, g.order(), g.exponent());
    let classes: Vec<Value> = (0..cd.num_classes())
        .map(|j| {
            let rep = cd.representative(j);
            let _ = writeln!(
                out,
                "  class {:<3} size {:<4} order {:<3} rep {}",
                j,
                cd.class_size(j),
                g.element_order(rep),
                g.element(rep)
            );
            json!({
                "index": j,
                "size": cd.class_size(j),
                "order": g.element_order(rep),
                "representative": rep,
                "representative_cycles": g.element(rep).to_string(),
                "inverse_class": cd.inverse_class(j),
                "elements": cd.class(j),
            })
        })
        .collect();
    let mut head = ctx.header();
    head.insert("classes".into(), Value::Array(classes));
    if let Some(choice) = &job.gamma {
        let gamma = choice.resolve(g.exponent())?;
        let gc = gamma_conjugacy_classes(g, cd, &gamma).map_err(|e| JobError::input("gamma", e))?;
        let _ = writeln!(out, "  Γ = {:?}: {:?}", gamma.elements(), gc.class_groups());
        head.insert("gamma".into(), json!(gamma.elements()));
        head.insert("gamma_classes".into(), json!(gc.class_groups()));
    }
    Ok((Value::Object(head), true))
}

fn integrality_command(ctx: &Context, job: &JobSpec, out: &mut String, full: bool) -> Result<(Value, bool), JobError> {
    let sets = ctx.connection_sets(require_connection(job)?, job.sweep_limit)?;
    let mut ok = true;
    let mut instances = Vec::new();
    let _ = writeln!(out, "{}  |G| = {}", ctx.spec, ctx.group.order());
    for c in &sets {
        let r = check_theorem1(&ctx.group, &ctx.classes, c, &ctx.table)
            .map_err(|e| JobError::Computation(e.to_string()))?;
        ok &= r.agree;
        let _ = writeln!(
            out,
            "  C = {:<24} integral {:<5} power-closed {:<5} {}",
            format!("{:?}", c.class_indices()),
            r.integral,
            r.power_closed,
            if r.agree { "agree" } else { "DISAGREE" }
        );
        let mut v = if full {
            serde_json::to_value(&r).expect("serialisable")
        } else {
            json!({ "integral": r.integral, "power_closed": r.power_closed, "agree": r.agree })
        };
        v["classes"] = json!(c.class_indices());
        instances.push(v);
    }
    let mut head = ctx.header();
    head.insert("instances".into(), Value::Array(instances));
    Ok((Value::Object(head), ok))
}

fn theorem2_command(ctx: &Context, job: &JobSpec, out: &mut String) -> Result<(Value, bool), JobError> {
    let sets = ctx.connection_sets(require_connection(job)?, job.sweep_limit)?;
    let gamma = job
        .gamma
        .clone()
        .unwrap_or(GammaChoice::Rational)
        .resolve(ctx.group.exponent())?;
    let mut ok = true;
    let mut instances = Vec::new();
    let _ = writeln!(
        out,
        "{}  |G| = {}  Γ = {:?}",
        ctx.spec,
        ctx.group.order(),
        gamma.elements()
    );
    for c in &sets {
        let r = check_theorem2(&ctx.group, &ctx.classes, c, &ctx.table, &gamma)
            .map_err(|e| JobError::Computation(e.to_string()))?;
        ok &= r.agree;
        let _ = writeln!(
            out,
            "  C = {:<24} in K {:<5} union of Γ-classes {:<5} {}",
            format!("{:?}", c.class_indices()),
            r.in_field,
            r.union_of_gamma_classes,
            if r.agree { "agree" } else { "DISAGREE" }
        );
        let mut v = serde_json::to_value(&r).expect("serialisable");
        v["classes"] = json!(c.class_indices());
        instances.push(v);
    }
    let mut head = ctx.header();
    head.insert("gamma".into(), json!(gamma.elements()));
    head.insert("instances".into(), Value::Array(instances));
    Ok((Value::Object(head), ok))
}

fn character_table_command(ctx: &Context, out: &mut String) -> (Value, bool) {
    let (g, cd, ct) = (&ctx.group, &ctx.classes, &ctx.table);
    let _ = writeln!(out, "{}  |G| = {}  (computed mod {})", ctx.spec, g.order(), ct.prime());
    let chars: Vec<Value> = (0..ct.num_characters())
        .map(|chi| {
            let cells: Vec<String> = ct.row(chi).iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "  chi{:<3} [{}]", chi, cells.join(", "));
            json!({
                "degree": ct.degree(chi),
                "values": ct.row(chi).iter().map(cyc_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let classes: Vec<Value> = (0..cd.num_classes())
        .map(|j| json!({ "size": cd.class_size(j), "order": g.element_order(cd.representative(j)) }))
        .collect();
    let mut head = ctx.header();
    head.insert("prime".into(), json!(ct.prime()));
    head.insert("classes".into(), Value::Array(classes));
    head.insert("characters".into(), Value::Array(chars));
    (Value::Object(head), true)
}

/// Pass/fail tally for one named check.
#[derive(Debug, Clone, Default, Serialize)]
struct Tally {
    name: &'static str,
    passed: u64,
    failed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Tally {
        Tally {
            name,
            ..Tally::default()
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < 10 {
                self.failures.push(what());
            }
        }
    }
}

/// The Galois subgroups used for the field-membership sweep: the whole lattice for
/// small unit groups, otherwise every cyclic subgroup plus `{1}` and the
/// full group.
pub fn theorem2_subgroups(m: u64) -> Vec<GaloisSubgroup> {
    if euler_phi(m) <= FULL_LATTICE_LIMIT {
        return all_subgroups(m);
    }
    let mut subs = cyclic_subgroups(m);
    let full = unit_group(m);
    if !subs.iter().any(|h| h.elements() == full.elements()) {
        subs.push(full);
    }
    subs
}

fn verify_all(ctx: &Context, job: &JobSpec, out: &mut String) -> Result<(Value, bool), JobError> {
    let (g, cd, ct) = (&ctx.group, &ctx.classes, &ctx.table);
    let m = g.exponent();
    let n = g.order();
    let k = cd.num_classes();

    let mut orthogonality = Tally::new("character_table");
    // the table constructor already enforces both orthogonality relations
    orthogonality.record(ct.degrees().iter().map(|d| d * d).sum::<u64>() == n as u64, || {
        "Σχ(1)² ≠ |G|".into()
    });
    let mut galois_identity = Tally::new("galois_character_identity");
    galois_identity.record(verify_galois_character_identity(ct, cd, &unit_group(m)), || {
        "σ_t(χ(g)) ≠ χ(g^t)".into()
    });

    let sets: Vec<ConnectionSet> = match &job.connection {
        Some(choice) => ctx.connection_sets(choice, job.sweep_limit)?,
        None if k <= job.sweep_limit => ctx.connection_sets(&ConnectionChoice::Sweep, job.sweep_limit)?,
        None => {
            // too many classes for a full sweep: single classes and everything
            let mut v: Vec<ConnectionSet> = (1..k)
                .map(|j| ConnectionSet::from_classes(cd, &[j]).expect("valid"))
                .collect();
            v.push(ConnectionSet::from_classes(cd, &(1..k).collect::<Vec<_>>()).expect("valid"));
            v
        }
    };
    let subgroups = theorem2_subgroups(m);
    let gamma_classes: Vec<_> = subgroups
        .iter()
        .map(|h| gamma_conjugacy_classes(g, cd, h).expect("conductor is the exponent"))
        .collect();

    let mut theorem1 = Tally::new("theorem1");
    let mut theorem2 = Tally::new("theorem2");
    let mut lemma1 = Tally::new("lemma1");
    let mut power_oracle = Tally::new("power_closed_oracle");
    let mut spectrum_oracle = Tally::new("spectrum_oracle");
    let mut theta = Tally::new("theta_coefficients");

    for c in &sets {
        let label = || format!("C = {:?}", c.class_indices());
        let r1 = check_theorem1(g, cd, c, ct).map_err(|e| JobError::Computation(e.to_string()))?;
        theorem1.record(r1.agree, label);

        for h in &subgroups {
            let r2 = check_theorem2(g, cd, c, ct, h).map_err(|e| JobError::Computation(e.to_string()))?;
            theorem2.record(r2.agree, || format!("{}, Γ = {:?}", label(), h.elements()));
        }

        let l1 = check_lemma1(g, cd, c.class_indices());
        lemma1.record(l1.agree, label);
        if n <= job.oracle_cap {
            power_oracle.record(
                oracle_power_closed(c.elements(), g) == is_power_closed(c.elements(), g),
                label,
            );
        }

        let sp = eigenvalues_via_characters(c, ct, cd);
        if let Some(o) = run_oracle(ctx, c, &sp, job)? {
            if o.skipped.is_none() {
                spectrum_oracle.record(o.passed(), label);
            }
        }

        for &x in cd.representatives().iter().skip(1) {
            if !c.contains(x) {
                continue;
            }
            let tc = theta_coefficients(x, c, g, cd, ct.context()).map_err(|e| JobError::Computation(e.to_string()))?;
            let mut good = tc.a[1] > 0 && tc.reconstruction_matches;
            for (h, gc) in subgroups.iter().zip(&gamma_classes) {
                if gc.is_union(c.class_indices()) {
                    good &= check_coefficient_symmetry(&tc, h);
                }
            }
            theta.record(good, || format!("{}, x = {x}", label()));
        }
    }

    let tallies = [
        orthogonality,
        galois_identity,
        theorem1,
        theorem2,
        lemma1,
        power_oracle,
        spectrum_oracle,
        theta,
    ];
    let ok = tallies.iter().all(|t| t.failed == 0);
    let _ = writeln!(out, "{}  |G| = {}  exponent {}  classes {}", ctx.spec, n, m, k);
    for t in &tallies {
        let _ = writeln!(out, "  {:<28} {:>7} passed {:>5} failed", t.name, t.passed, t.failed);
    }
    let mut head = ctx.header();
    head.insert("connection_sets".into(), json!(sets.len()));
    head.insert("galois_subgroups".into(), json!(subgroups.len()));
    head.insert("checks".into(), serde_json::to_value(&tallies).expect("serialisable"));
    Ok((Value::Object(head), ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(doc: Value) -> JobSpec {
        JobSpec::from_json(&doc).unwrap()
    }

    fn run_json(doc: Value) -> (i32, Value) {
        let out = run(&job(doc)).unwrap();
        (out.exit_code, serde_json::from_str(&out.output).unwrap())
    }

    #[test]
    fn spectrum_of_k33() {
        let (code, v) = run_json(json!({
            "group": {"generators": ["(1 2)", "(1 2 3)"]},
            "connection": {"classes": [1]},
            "command": "spectrum",
        }));
        assert_eq!(code, 0);
        let r = &v["results"][0];
        assert_eq!(r["order"], 6);
        // class 1 holds the transposition (1 2), discovered first
        let sp = r["instances"][0]["spectrum"].as_array().unwrap();
        let mut vals: Vec<(String, u64)> = sp
            .iter()
            .map(|e| {
                (
                    e["value"]["rational"].as_str().unwrap().to_string(),
                    e["multiplicity"].as_u64().unwrap(),
                )
            })
            .collect();
        vals.sort();
        assert_eq!(vals, vec![("-3".into(), 1), ("0".into(), 4), ("3".into(), 1)]);
        assert_eq!(r["instances"][0]["oracle"]["exact"]["factorization_matches"], true);
    }

    #[test]
    fn integrality_of_pentagon() {
        let (code, v) = run_json(json!({
            "group": "cyclic(5)",
            "connection": {"elements": [1, 4]},
            "command": "check-integrality",
        }));
        assert_eq!(code, 0);
        let inst = &v["results"][0]["instances"][0];
        assert_eq!(inst["integral"], false);
        assert_eq!(inst["power_closed"], false);
        assert_eq!(inst["agree"], true);
    }

    #[test]
    fn sweep_counts() {
        let (code, v) = run_json(json!({
            "group": "cyclic(4)",
            "connection": "sweep",
            "command": "check-theorem1",
        }));
        assert_eq!(code, 0);
        let inst = v["results"][0]["instances"].as_array().unwrap();
        assert_eq!(inst.len(), 8);
        assert!(inst.iter().all(|i| i["agree"] == true));
        let (_, v) = run_json(json!({
            "group": "cyclic(4)",
            "connection": "sweep-with-identity",
            "command": "check-theorem1",
        }));
        assert_eq!(v["results"][0]["instances"].as_array().unwrap().len(), 16);
    }

    #[test]
    fn theorem2_with_generators() {
        let (code, v) = run_json(json!({
            "group": "cyclic(5)",
            "connection": {"elements": [1, 4]},
            "gamma": {"generators": [4]},
            "command": "check-theorem2",
        }));
        assert_eq!(code, 0);
        let inst = &v["results"][0]["instances"][0];
        assert_eq!(inst["in_field"], inst["union_of_gamma_classes"]);
    }

    #[test]
    fn input_errors() {
        let bad = |doc: Value| match JobSpec::from_json(&doc).and_then(|j| run(&j)) {
            Err(e) => e,
            Ok(o) => panic!("expected an error, got {o:?}"),
        };
        assert_eq!(bad(json!({"group": "cyclic(4)", "command": "dance"})).exit_code(), 2);
        assert_eq!(bad(json!({"group": "cyclic(4)", "command": "spectrum"})).exit_code(), 2);
        let e = bad(json!({"group": "symmetric(3)", "command": "spectrum", "connection": {"elements": [1]}}));
        assert!(matches!(&e, JobError::Input { field, .. } if field == "connection"));
        assert_eq!(bad(json!({"command": "spectrum"})).exit_code(), 2);
        assert_eq!(bad(json!({"group": "nope(3)", "command": "classes"})).exit_code(), 2);
        assert_eq!(
            bad(json!({"group": "cyclic(6)", "command": "check-theorem2", "connection": [1], "gamma": {"generators": [2]}}))
                .exit_code(),
            2
        );
        assert_eq!(
            bad(json!({"v": "v2", "group": "cyclic(2)", "command": "classes"})).exit_code(),
            2
        );
    }

    #[test]
    fn verify_all_small_group_is_deterministic() {
        let doc = json!({"group": "dihedral(4)", "command": "verify-all"});
        let a = run(&job(doc.clone())).unwrap();
        let b = run(&job(doc)).unwrap();
        assert_eq!(a.exit_code, 0, "{}", a.output);
        assert_eq!(a.output, b.output);
    }

    #[test]
    fn table_output() {
        let mut j = job(json!({"group": "symmetric(3)", "command": "character-table"}));
        j.output = OutputFormat::Table;
        let out = run(&j).unwrap();
        assert!(out.output.contains("chi2"));
        assert!(out.output.ends_with("OK\n"));
    }
}
