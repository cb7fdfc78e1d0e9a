//! Command-line front end. Every subcommand returns its report as a string
//! so the same code backs the binary and the tests.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 parse or configuration error,
//! 3 cap exceeded. Verdicts never change the exit code.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::constructors::{build_str, BuildError};
use crate::fixdim::{enumerate_dimfns, involution_profile, CspOptions, EALattice, FixdimError};
use crate::gf::is_prime;
use crate::group::{Caps, Group};
use crate::rules::{
    check, survey, AxiomTable, Outcome, RuleConfig, RuleError, Status, SurveyEntry, SurveyReport, Verdict, SCHEMA,
    SPHERE3_RULES, SPHERE4_RULES,
};
use crate::structure::{analyze_structure, classify_nonsolvable, NonsolvableCase, StructureError, StructureSummary};
use crate::subgroups::{all_metacyclic, max_ea_rank, multiplier_admissible, sectional_2_rank, MetacyclicWitness};

#[derive(Debug, Parser)]
#[command(name = "spheregate", version, about = "Finite-group obstructions for actions on homology 3- and 4-spheres")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true)]
    pub order_cap: Option<usize>,
    #[arg(long, global = true)]
    pub degree_cap: Option<usize>,
    #[arg(long, global = true)]
    pub two_group_cap: Option<usize>,
    /// Worker threads for survey rows.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Disable a rule by id, e.g. R-BOREL. Repeatable.
    #[arg(long = "no-rule", global = true, value_name = "ID")]
    pub no_rule: Vec<String>,
    #[arg(long, global = true)]
    pub no_descent_axioms: bool,
    /// Axiom table path; defaults to $SPHEREGATE_AXIOMS, then the bundled table.
    #[arg(long, global = true)]
    pub axioms: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structure and subgroup report for one group.
    Analyze { spec: String },
    /// Verdict with full rule trace.
    Check {
        spec: String,
        #[arg(long, default_value_t = 4)]
        sphere_dim: u32,
    },
    /// Verdicts for every group of a JSON manifest.
    Survey {
        manifest: PathBuf,
        #[arg(long)]
        sphere_dim: Option<u32>,
    },
    /// Enumerate dimension functions on the lattice of (Z_p)^rank.
    Dimfn {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 4)]
        sphere_dim: u32,
        /// Treat all subgroups of equal order as conjugate.
        #[arg(long)]
        uniform_color: bool,
    },
    /// Place a nonsolvable group in case A, B, C or outside the list.
    Classify { spec: String },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) | CliError::Config(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> Self {
        if e.is_cap_exceeded() {
            CliError::Cap(e.to_string())
        } else {
            CliError::Parse(e.to_string())
        }
    }
}

impl From<RuleError> for CliError {
    fn from(e: RuleError) -> Self {
        match e {
            RuleError::Build(b) => b.into(),
            e if e.is_cap_exceeded() => CliError::Cap(e.to_string()),
            RuleError::Fixdim(FixdimError::TooLarge { .. }) => CliError::Cap(e.to_string()),
            e => CliError::Config(e.to_string()),
        }
    }
}

/// JSON survey manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(default)]
    pub description: Option<String>,
    pub groups: Vec<SurveyEntry>,
    #[serde(default)]
    pub sphere_dim: Option<u32>,
    #[serde(default)]
    pub caps: Option<Caps>,
    #[serde(default)]
    pub disabled_rules: Vec<String>,
    #[serde(default)]
    pub descent_axioms: Option<bool>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Manifest, CliError> {
        let m: Manifest = serde_json::from_str(text).map_err(|e| CliError::Config(format!("malformed manifest: {e}")))?;
        let mut seen = BTreeSet::new();
        for e in &m.groups {
            if !seen.insert(e.label()) {
                return Err(CliError::Config(format!("duplicate manifest label '{}'", e.label())));
            }
        }
        Ok(m)
    }

    pub fn from_path(path: &Path) -> Result<Manifest, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Manifest::parse(&text)
    }
}

fn caps_from(g: &GlobalArgs, base: Caps) -> Result<Caps, CliError> {
    let caps = Caps {
        order_cap: g.order_cap.unwrap_or(base.order_cap),
        degree_cap: g.degree_cap.unwrap_or(base.degree_cap),
        two_group_cap: g.two_group_cap.unwrap_or(base.two_group_cap),
    };
    if caps.order_cap == 0 || caps.degree_cap == 0 || caps.two_group_cap == 0 {
        return Err(CliError::Config("caps must be positive".into()));
    }
    Ok(caps)
}

fn rule_config(g: &GlobalArgs, manifest: Option<&Manifest>) -> Result<RuleConfig, CliError> {
    let axioms = match &g.axioms {
        Some(p) => AxiomTable::from_path(p),
        None => AxiomTable::from_env_or_bundled(),
    }
    .map_err(|e| match e {
        crate::rules::AxiomError::Io { .. } => CliError::Io(e.to_string()),
        e => CliError::Config(e.to_string()),
    })?;
    let base = manifest.and_then(|m| m.caps).unwrap_or_default();
    let mut cfg = RuleConfig { caps: caps_from(g, base)?, axioms: Arc::new(axioms), ..RuleConfig::default() };
    let manifest_rules = manifest.map(|m| m.disabled_rules.as_slice()).unwrap_or(&[]);
    for r in manifest_rules.iter().chain(&g.no_rule) {
        cfg.disable(r).map_err(|e| CliError::Config(e.to_string()))?;
    }
    cfg.descent_axioms = !g.no_descent_axioms && manifest.and_then(|m| m.descent_axioms).unwrap_or(true);
    Ok(cfg)
}

fn require_enabled(cfg: &RuleConfig, dim: u32) -> Result<(), CliError> {
    let rules: &[&str] = match dim {
        3 => &SPHERE3_RULES,
        4 => &SPHERE4_RULES,
        d => return Err(CliError::Config(format!("unsupported sphere dimension {d}"))),
    };
    if rules.iter().all(|r| cfg.disabled.contains(*r)) {
        return Err(CliError::Config("every rule is disabled".into()));
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn unsupported(format: Format, cmd: &str) -> CliError {
    CliError::Config(format!("{cmd} does not support {format:?} output").to_lowercase())
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Excluded => "excluded",
        Status::NotExcluded => "not excluded",
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub schema: String,
    pub group: String,
    pub order: usize,
    pub class_count: u64,
    pub solvable: bool,
    pub simple: bool,
    pub structure: serde_json::Value,
    pub ea_ranks: BTreeMap<u64, usize>,
    pub sectional_2_rank: Option<usize>,
    pub metacyclic: Vec<serde_json::Value>,
}

fn metacyclic_json(w: &MetacyclicWitness) -> serde_json::Value {
    json!({
        "p": w.p, "q": w.q, "t": w.t, "a": w.a.to_string(), "b": w.b.to_string(), "b_order": w.b_order,
        "admissible_dim3": multiplier_admissible(w.t, w.p, 3),
        "admissible_dim4": multiplier_admissible(w.t, w.p, 4),
    })
}

pub fn analyze_report(g: &Group, caps: &Caps) -> AnalyzeReport {
    let s: StructureSummary = analyze_structure(g).summary();
    AnalyzeReport {
        schema: SCHEMA.to_string(),
        group: g.label(),
        order: g.order(),
        class_count: s.class_count,
        solvable: s.solvable,
        simple: g.is_simple(),
        structure: serde_json::to_value(&s).unwrap(),
        ea_ranks: g.primes().into_iter().map(|p| (p, max_ea_rank(g, p).0)).collect(),
        sectional_2_rank: sectional_2_rank(g, caps.two_group_cap).ok(),
        metacyclic: all_metacyclic(g).iter().map(metacyclic_json).collect(),
    }
}

pub fn cmd_analyze(spec: &str, g: &GlobalArgs) -> Result<String, CliError> {
    let caps = caps_from(g, Caps::default())?;
    let grp = build_str(spec, &caps)?;
    let r = analyze_report(&grp, &caps);
    match g.format {
        Format::Json => Ok(to_json(&r)),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "group: {}", r.group).unwrap();
            writeln!(out, "order: {}", r.order).unwrap();
            writeln!(out, "classes: {}", r.class_count).unwrap();
            writeln!(out, "solvable: {}", r.solvable).unwrap();
            writeln!(out, "simple: {}", r.simple).unwrap();
            for (p, k) in &r.ea_ranks {
                writeln!(out, "{p}-rank: {k}").unwrap();
            }
            match r.sectional_2_rank {
                Some(s) => writeln!(out, "sectional 2-rank: {s}").unwrap(),
                None => writeln!(out, "sectional 2-rank: over cap").unwrap(),
            }
            for w in &r.metacyclic {
                writeln!(out, "H({}:{}) t={}", w["p"], w["q"], w["t"]).unwrap();
            }
            Ok(out)
        }
        Format::Csv => Err(unsupported(g.format, "analyze")),
    }
}

pub fn verdict_text(v: &Verdict) -> String {
    let mut out = format!("{} on a homology {}-sphere: {}\n", v.group, v.sphere_dim, status_str(v.status));
    for f in &v.trace {
        let o = match f.outcome {
            Outcome::Pass => "pass",
            Outcome::Violation => "VIOLATION",
            Outcome::Inapplicable => "inapplicable",
            Outcome::Skipped => "skipped",
        };
        writeln!(out, "  {:<10} {}", f.rule, o).unwrap();
    }
    out
}

pub fn cmd_check(spec: &str, sphere_dim: u32, g: &GlobalArgs) -> Result<String, CliError> {
    let cfg = rule_config(g, None)?;
    require_enabled(&cfg, sphere_dim)?;
    let grp = build_str(spec, &cfg.caps)?;
    let v = check(&grp, sphere_dim, &cfg)?;
    match g.format {
        Format::Json => Ok(to_json(&v)),
        Format::Text => Ok(verdict_text(&v)),
        Format::Csv => Err(unsupported(g.format, "check")),
    }
}

pub fn run_survey(manifest: &Manifest, sphere_dim: Option<u32>, g: &GlobalArgs) -> Result<SurveyReport, CliError> {
    let cfg = rule_config(g, Some(manifest))?;
    let dim = sphere_dim.or(manifest.sphere_dim).unwrap_or(4);
    require_enabled(&cfg, dim)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = g.threads {
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(pool.install(|| survey(&manifest.groups, dim, &cfg)))
}

pub fn cmd_survey(path: &Path, sphere_dim: Option<u32>, g: &GlobalArgs) -> Result<String, CliError> {
    let manifest = Manifest::from_path(path)?;
    let report = run_survey(&manifest, sphere_dim, g)?;
    Ok(match g.format {
        Format::Json => to_json(&report),
        Format::Csv => report.to_csv(),
        Format::Text => {
            let mut out = String::new();
            for r in &report.rows {
                let status = match (&r.status, &r.error) {
                    (Some(s), _) => status_str(*s).to_string(),
                    (None, Some(e)) => format!("error: {e}"),
                    (None, None) => String::new(),
                };
                writeln!(out, "{:<32} {:<14} {}", r.label, status, r.violated.join(" ")).unwrap();
            }
            writeln!(out, "survivors: {}", report.survivors.join(", ")).unwrap();
            writeln!(out, "simple survivors: {}", report.simple_survivors.join(", ")).unwrap();
            out
        }
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimfnSolution {
    pub r: i32,
    pub values: Vec<i32>,
    /// value -> number of cyclic subgroups with that value
    pub profile: BTreeMap<i32, usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimfnReport {
    pub schema: String,
    pub p: u64,
    pub rank: usize,
    pub sphere_dim: u32,
    pub coloring: String,
    pub descent_axioms: bool,
    pub lattice_size: usize,
    pub solution_count: usize,
    pub solutions: Vec<DimfnSolution>,
}

pub fn dimfn_report(p: u64, rank: usize, sphere_dim: u32, uniform: bool, descent: bool) -> Result<DimfnReport, CliError> {
    if !is_prime(p) {
        return Err(CliError::Config(format!("{p} is not prime")));
    }
    if rank == 0 || !(1..=8).contains(&sphere_dim) {
        return Err(CliError::Config("rank and sphere dimension must be positive".into()));
    }
    let mut lat = EALattice::abstract_lattice(p, rank).map_err(|e| CliError::Cap(e.to_string()))?;
    if uniform {
        lat = lat.uniformly_colored();
    }
    let m = sphere_dim as i32;
    let mut opts = CspOptions::for_sphere(m);
    opts.use_descent_axioms = descent;
    let sols = enumerate_dimfns(&lat, m, &opts);
    let profiles = involution_profile(&lat, &sols);
    Ok(DimfnReport {
        schema: SCHEMA.to_string(),
        p,
        rank,
        sphere_dim,
        coloring: if uniform { "uniform" } else { "discrete" }.into(),
        descent_axioms: descent,
        lattice_size: lat.len(),
        solution_count: sols.len(),
        solutions: sols
            .into_iter()
            .zip(profiles)
            .map(|(f, profile)| DimfnSolution { r: f.r(), values: f.values, profile })
            .collect(),
    })
}

pub fn cmd_dimfn(p: u64, rank: usize, sphere_dim: u32, uniform: bool, g: &GlobalArgs) -> Result<String, CliError> {
    let r = dimfn_report(p, rank, sphere_dim, uniform, !g.no_descent_axioms)?;
    match g.format {
        Format::Json => Ok(to_json(&r)),
        Format::Text => {
            let mut out = format!("(Z_{p})^{rank}, m = {sphere_dim}: {} solutions\n", r.solution_count);
            for s in &r.solutions {
                let prof: Vec<String> = s.profile.iter().map(|(v, c)| format!("{c}x{v}")).collect();
                writeln!(out, "  r = {:>2}  cyclic values {}", s.r, prof.join(" ")).unwrap();
            }
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["r", "values", "profile"]).unwrap();
            for s in &r.solutions {
                let vals: Vec<String> = s.values.iter().map(|v| v.to_string()).collect();
                let prof: Vec<String> = s.profile.iter().map(|(v, c)| format!("{v}:{c}")).collect();
                w.write_record([s.r.to_string(), vals.join(" "), prof.join(" ")]).unwrap();
            }
            Ok(String::from_utf8(w.into_inner().unwrap()).unwrap())
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub schema: String,
    pub group: String,
    pub order: usize,
    pub case: NonsolvableCase,
}

pub fn cmd_classify(spec: &str, g: &GlobalArgs) -> Result<String, CliError> {
    let caps = caps_from(g, Caps::default())?;
    let grp = build_str(spec, &caps)?;
    let case = classify_nonsolvable(&grp).map_err(|e| match e {
        StructureError::SolvableInput => CliError::Config(format!("{spec}: group is solvable")),
        StructureError::Group(e) => CliError::Cap(e.to_string()),
    })?;
    let r = ClassifyReport { schema: SCHEMA.to_string(), group: grp.label(), order: grp.order(), case };
    match g.format {
        Format::Json => Ok(to_json(&r)),
        Format::Text => Ok(format!("{}: {:?}\n", r.group, r.case.tag)),
        Format::Csv => Err(unsupported(g.format, "classify")),
    }
}

pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { spec } => cmd_analyze(spec, g),
        Command::Check { spec, sphere_dim } => cmd_check(spec, *sphere_dim, g),
        Command::Survey { manifest, sphere_dim } => cmd_survey(manifest, *sphere_dim, g),
        Command::Dimfn { p, rank, sphere_dim, uniform_color } => cmd_dimfn(*p, *rank, *sphere_dim, *uniform_color, g),
        Command::Classify { spec } => cmd_classify(spec, g),
    }
}

/// Parses `args` (program name first), runs the command, writes the report
/// and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = execute(&cli).and_then(|out| match &cli.global.out {
        Some(p) => std::fs::write(p, out).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{out}");
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("spheregate: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("spheregate").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn parse_error_exit_code() {
        let e = execute(&cli(&["analyze", "PSL2(6)"])).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("6 is not a prime power"));
    }

    #[test]
    fn cap_exit_code() {
        let e = execute(&cli(&["--order-cap", "100", "check", "Alt(6)"])).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn unknown_rule_is_config_error() {
        let e = execute(&cli(&["check", "Alt(5)", "--no-rule", "R-FOO"])).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let m = r#"{"groups": [{"spec": "Alt(5)"}, {"spec": "PSL2(5)", "label": "Alt(5)"}]}"#;
        assert!(Manifest::parse(m).is_err());
    }
}
