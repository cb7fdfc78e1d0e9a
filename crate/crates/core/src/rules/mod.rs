//! The obstruction pipeline: rank, sectional-rank, metacyclic, Borel,
//! central-involution and table rules combined into a [`Verdict`].
//!
//! A verdict of `not excluded` only means that no implemented rule fired.

mod axioms;
mod survey;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

pub use axioms::*;
pub use survey::*;

use crate::constructors::{build, build_str, BuildError, GroupSpec};
use crate::fixdim::{enumerate_dimfns, uniform_borel_check, CspOptions, EALattice, FixdimError};
use crate::gf::prime_power;
use crate::group::{Caps, Group, GroupError};
use crate::perm::{gcd, Perm};
use crate::structure::is_quasisimple;
use crate::subgroups::{
    all_metacyclic, max_ea_rank, max_rank_ea_subgroups, multiplier_admissible, sectional_2_rank, SubgroupError,
};

pub const SCHEMA: &str = "spheregate/1";

pub const R_RANK: &str = "R-RANK";
pub const R_SECT: &str = "R-SECT";
pub const R_META: &str = "R-META";
pub const R_BOREL: &str = "R-BOREL";
pub const R_CENTRAL: &str = "R-CENTRAL";
pub const R_TABLE: &str = "R-TABLE";
pub const R_RANK3: &str = "R-RANK3";
pub const R_META3: &str = "R-META3";
pub const R_TABLE3: &str = "R-TABLE3";

pub const SPHERE4_RULES: [&str; 6] = [R_RANK, R_SECT, R_META, R_BOREL, R_CENTRAL, R_TABLE];
pub const SPHERE3_RULES: [&str; 3] = [R_RANK3, R_META3, R_TABLE3];

const CITE_RANK: &str = "Smith theory rank bound: an elementary abelian p-group acting on a homology 4-sphere has rank at most 2 for odd p and at most 4 for p = 2";
const CITE_SECT: &str =
    "Sectional 2-rank of a group acting on a homology 4-sphere is at most 4 (Gorenstein-Harada range)";
const CITE_META: &str = "Metacyclic test: in H(p:q) acting on a homology 4-sphere, Z_q acts on Z_p with t^2 = ±1 (mod p)";
const CITE_BOREL: &str = "Borel formula m - r = Σ (n(H) - r) over index-p subgroups H (Borel, Seminar on Transformation Groups, Ch. XIII)";
const CITE_CENTRAL: &str = "Central involution descent: the fixed set of a central involution is S^0 or S^2; an index-2 subgroup then acts on a homology 3-sphere, or the quotient by a cyclic kernel acts on S^2";
const CITE_TABLE: &str = "Curated containment table (Atlas of Finite Groups); subgroup excluded by the pipeline";
const CITE_RANK3: &str =
    "Smith theory rank bound: rank at most 2 for odd p and at most 3 for p = 2 on a homology 3-sphere";
const CITE_META3: &str = "Metacyclic test: in H(p:q) acting on a homology 3-sphere, Z_q acts on Z_p by ±identity";
const CITE_TABLE3: &str = "Curated homology 3-sphere facts (Topology Appl. 125 (2002); Math. Z. 248 (2004))";

#[derive(Debug, Error)]
pub enum RuleError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Fixdim(#[from] FixdimError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("unsupported sphere dimension {0}")]
    UnsupportedDim(u32),
    #[error("unknown rule '{0}'")]
    UnknownRule(String),
}

impl RuleError {
    pub fn is_cap_exceeded(&self) -> bool {
        match self {
            RuleError::Group(GroupError::CapExceeded { .. } | GroupError::DegreeCapExceeded { .. }) => true,
            RuleError::Build(b) => b.is_cap_exceeded(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RuleConfig {
    pub caps: Caps,
    pub disabled: BTreeSet<String>,
    pub descent_axioms: bool,
    /// Maximal number of conjugacy classes of maximal-rank elementary
    /// abelian subgroups examined per prime by R-BOREL.
    pub ea_limit: usize,
    pub axioms: Arc<AxiomTable>,
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            caps: Caps::default(),
            disabled: BTreeSet::new(),
            descent_axioms: true,
            ea_limit: 16,
            axioms: Arc::new(AxiomTable::bundled()),
        }
    }
}

impl RuleConfig {
    pub fn disable(&mut self, rule: &str) -> Result<(), RuleError> {
        if !SPHERE4_RULES.contains(&rule) && !SPHERE3_RULES.contains(&rule) {
            return Err(RuleError::UnknownRule(rule.to_string()));
        }
        self.disabled.insert(rule.to_string());
        Ok(())
    }

    fn enabled(&self, rule: &str) -> bool {
        !self.disabled.contains(rule)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Violation,
    Inapplicable,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub rule: String,
    pub citation: String,
    pub witness: Value,
    pub outcome: Outcome,
}

impl Finding {
    fn new(rule: &str, citation: &str, outcome: Outcome, witness: Value) -> Finding {
        Finding { rule: rule.to_string(), citation: citation.to_string(), witness, outcome }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "excluded")]
    Excluded,
    #[serde(rename = "not excluded")]
    NotExcluded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub schema: String,
    pub group: String,
    pub sphere_dim: u32,
    pub status: Status,
    pub trace: Vec<Finding>,
}

impl Verdict {
    fn from_trace(g: &Group, sphere_dim: u32, trace: Vec<Finding>) -> Verdict {
        let excluded = trace.iter().any(|f| f.outcome == Outcome::Violation);
        Verdict {
            schema: SCHEMA.to_string(),
            group: g.label(),
            sphere_dim,
            status: if excluded { Status::Excluded } else { Status::NotExcluded },
            trace,
        }
    }

    pub fn is_excluded(&self) -> bool {
        self.status == Status::Excluded
    }

    pub fn violated_rules(&self) -> Vec<String> {
        self.trace.iter().filter(|f| f.outcome == Outcome::Violation).map(|f| f.rule.clone()).collect()
    }

    pub fn finding(&self, rule: &str) -> Option<&Finding> {
        self.trace.iter().find(|f| f.rule == rule)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }
}

pub fn check(g: &Group, sphere_dim: u32, cfg: &RuleConfig) -> Result<Verdict, RuleError> {
    match sphere_dim {
        3 => check_sphere3(g, cfg),
        4 => check_sphere4(g, cfg),
        d => Err(RuleError::UnsupportedDim(d)),
    }
}

pub fn check_spec(spec: &GroupSpec, sphere_dim: u32, cfg: &RuleConfig) -> Result<Verdict, RuleError> {
    let g = build(spec, &cfg.caps)?;
    check(&g, sphere_dim, cfg)
}

fn disabled(rule: &str, citation: &str) -> Finding {
    Finding::new(rule, citation, Outcome::Skipped, json!({ "reason": "disabled" }))
}

/// Maximal elementary abelian rank per prime divisor of the order.
fn rank_table(g: &Group) -> BTreeMap<u64, (usize, Vec<Perm>)> {
    g.primes()
        .into_iter()
        .map(|p| {
            let (r, w) = max_ea_rank(g, p);
            (p, (r, w.generators))
        })
        .collect()
}

pub fn check_sphere4(g: &Group, cfg: &RuleConfig) -> Result<Verdict, RuleError> {
    let ranks = rank_table(g);
    let mut trace = Vec::new();
    trace.push(if cfg.enabled(R_RANK) { rank_rule(R_RANK, CITE_RANK, &ranks, 2, 4) } else { disabled(R_RANK, CITE_RANK) });
    trace.push(if cfg.enabled(R_SECT) { sect_rule(g, cfg) } else { disabled(R_SECT, CITE_SECT) });
    trace.push(if cfg.enabled(R_META) { meta_rule(R_META, CITE_META, g, 4) } else { disabled(R_META, CITE_META) });
    trace.push(if cfg.enabled(R_BOREL) { borel_rule(g, &ranks, cfg)? } else { disabled(R_BOREL, CITE_BOREL) });
    trace.push(if cfg.enabled(R_CENTRAL) { central_rule(g, cfg)? } else { disabled(R_CENTRAL, CITE_CENTRAL) });
    trace.push(if cfg.enabled(R_TABLE) { table_rule(g, cfg)? } else { disabled(R_TABLE, CITE_TABLE) });
    Ok(Verdict::from_trace(g, 4, trace))
}

pub fn check_sphere3(g: &Group, cfg: &RuleConfig) -> Result<Verdict, RuleError> {
    let ranks = rank_table(g);
    let trace = vec![
        if cfg.enabled(R_RANK3) { rank_rule(R_RANK3, CITE_RANK3, &ranks, 2, 3) } else { disabled(R_RANK3, CITE_RANK3) },
        if cfg.enabled(R_META3) { meta_rule(R_META3, CITE_META3, g, 3) } else { disabled(R_META3, CITE_META3) },
        if cfg.enabled(R_TABLE3) { table3_rule(g, cfg)? } else { disabled(R_TABLE3, CITE_TABLE3) },
    ];
    Ok(Verdict::from_trace(g, 3, trace))
}

fn perm_strings(ps: &[Perm]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn rank_rule(
    rule: &str,
    citation: &str,
    ranks: &BTreeMap<u64, (usize, Vec<Perm>)>,
    odd_bound: usize,
    two_bound: usize,
) -> Finding {
    let mut violated = false;
    let rows: Vec<Value> = ranks
        .iter()
        .map(|(&p, (r, gens))| {
            let bound = if p == 2 { two_bound } else { odd_bound };
            violated |= *r > bound;
            json!({ "p": p, "rank": r, "bound": bound, "generators": perm_strings(gens) })
        })
        .collect();
    let outcome = if violated { Outcome::Violation } else { Outcome::Pass };
    Finding::new(rule, citation, outcome, json!({ "ranks": rows }))
}

fn sect_rule(g: &Group, cfg: &RuleConfig) -> Finding {
    match sectional_2_rank(g, cfg.caps.two_group_cap) {
        Ok(s) => {
            let outcome = if s > 4 { Outcome::Violation } else { Outcome::Pass };
            Finding::new(R_SECT, CITE_SECT, outcome, json!({ "sectional_2_rank": s, "bound": 4 }))
        }
        Err(SubgroupError::CapExceeded { order, cap }) => Finding::new(
            R_SECT,
            CITE_SECT,
            Outcome::Skipped,
            json!({ "reason": "Sylow 2-subgroup exceeds two-group cap", "sylow_order": order, "cap": cap }),
        ),
    }
}

fn meta_rule(rule: &str, citation: &str, g: &Group, dim: u32) -> Finding {
    let ws = all_metacyclic(g);
    if ws.is_empty() {
        return Finding::new(rule, citation, Outcome::Inapplicable, json!({ "witnesses": [] }));
    }
    let mut violated = false;
    let rows: Vec<Value> = ws
        .iter()
        .map(|w| {
            let ok = multiplier_admissible(w.t, w.p, dim);
            violated |= !ok;
            json!({
                "p": w.p, "q": w.q, "t": w.t,
                "t_squared_mod_p": w.t * w.t % w.p,
                "a": w.a.to_string(), "b": w.b.to_string(), "b_order": w.b_order,
                "admissible": ok,
            })
        })
        .collect();
    let outcome = if violated { Outcome::Violation } else { Outcome::Pass };
    Finding::new(rule, citation, outcome, json!({ "witnesses": rows }))
}

fn borel_rule(g: &Group, ranks: &BTreeMap<u64, (usize, Vec<Perm>)>, cfg: &RuleConfig) -> Result<Finding, RuleError> {
    let m = 4;
    let mut opts = CspOptions::for_sphere(m);
    opts.use_descent_axioms = cfg.descent_axioms;
    let mut lattices = Vec::new();
    let mut checked = 0;
    let mut violated = false;
    for (&p, &(rank, _)) in ranks {
        if rank < 2 {
            continue;
        }
        if rank > 5 {
            lattices.push(json!({ "p": p, "rank": rank, "skipped": "lattice too large" }));
            continue;
        }
        for w in max_rank_ea_subgroups(g, p, cfg.ea_limit) {
            let lat = match EALattice::from_group(g, &w) {
                Ok(l) => l,
                Err(FixdimError::TooLarge { .. }) => {
                    lattices.push(json!({ "p": p, "rank": rank, "skipped": "lattice too large" }));
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            let sols = enumerate_dimfns(&lat, m, &opts);
            checked += 1;
            violated |= sols.is_empty();
            let hyper = lat.ids_of_dim(rank - 1);
            let allowed: Vec<i32> =
                if rank == 2 { opts.top_cyclic_values.iter().copied().collect() } else { (-1..m).collect() };
            let uniform = uniform_borel_check(m, hyper.len() as i32, &allowed, (-1, m - 1));
            let classes: BTreeMap<String, Vec<usize>> = (1..rank)
                .map(|d| (d.to_string(), lat.color_classes(d).iter().map(|c| c.len()).collect()))
                .collect();
            lattices.push(json!({
                "p": p,
                "rank": rank,
                "generators": perm_strings(&w.generators),
                "color_classes": classes,
                "solution_count": sols.len(),
                "hyperplanes_one_color": lat.color_classes(rank - 1).len() == 1,
                "uniform": uniform,
            }));
        }
    }
    let outcome = if violated {
        Outcome::Violation
    } else if checked > 0 {
        Outcome::Pass
    } else {
        Outcome::Inapplicable
    };
    Ok(Finding::new(
        R_BOREL,
        CITE_BOREL,
        outcome,
        json!({ "sphere_dim": m, "descent_axioms": opts.use_descent_axioms, "lattices": lattices }),
    ))
}

/// Cyclic normal subgroups containing the central involution `z`.
fn cyclic_kernels(g: &Group, z: &Perm) -> Vec<Group> {
    let mut out: Vec<Group> = Vec::new();
    for c in g.elements() {
        let o = c.order();
        if o % 2 != 0 || c.pow((o / 2) as i64) != *z {
            continue;
        }
        let k = g.cyclic_subgroup(c);
        if out.iter().any(|h| h.elements() == k.elements()) || !g.is_normal(&k) {
            continue;
        }
        out.push(k);
    }
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements().cmp(b.elements())));
    out
}

/// Whether `q` passes the 2-sphere predicate; returns the reason.
fn sphere2_predicate(q: &Group, axioms: &AxiomTable) -> (bool, String) {
    if q.is_solvable() {
        let lim = &axioms.sphere2.solvable;
        for p in q.primes() {
            let (r, _) = max_ea_rank(q, p);
            let bound = if p == 2 { lim.max_two_rank } else { lim.max_odd_rank };
            if r > bound {
                return (false, format!("{p}-rank {r} exceeds {bound}"));
            }
        }
        (true, "solvable with admissible ranks".into())
    } else {
        match axioms.sphere2_nonsolvable_match(&q.fingerprint()) {
            Some(s) => (true, format!("matches {s}")),
            None => (false, "nonsolvable and not in the 2-sphere list".into()),
        }
    }
}

fn central_rule(g: &Group, cfg: &RuleConfig) -> Result<Finding, RuleError> {
    let z_inv: Vec<Perm> = g.center().elements().iter().filter(|x| x.order() == 2).cloned().collect();
    if z_inv.is_empty() {
        return Ok(Finding::new(R_CENTRAL, CITE_CENTRAL, Outcome::Inapplicable, json!({ "central_involutions": [] })));
    }
    let mut violated = false;
    let mut rows = Vec::new();
    for z in &z_inv {
        let mut kernels = Vec::new();
        let mut s2 = false;
        for k in cyclic_kernels(g, z) {
            let q = g.quotient(&k, cfg.caps.degree_cap)?.into_group();
            let (ok, reason) = sphere2_predicate(&q, &cfg.axioms);
            s2 |= ok;
            kernels.push(json!({
                "kernel_order": k.order(),
                "quotient_order": q.order(),
                "quotient_solvable": q.is_solvable(),
                "passes": ok,
                "reason": reason,
            }));
        }
        let mut subs = Vec::new();
        let mut s0 = false;
        for h in g.index_at_most_two_subgroups() {
            let v = check_sphere3(&h, cfg)?;
            s0 |= !v.is_excluded();
            subs.push(json!({
                "index": g.order() / h.order(),
                "order": h.order(),
                "status": v.status,
                "violated": v.violated_rules(),
            }));
        }
        let fails = !s2 && !s0;
        violated |= fails;
        rows.push(json!({
            "z": z.to_string(),
            "s2_branch": { "passes": s2, "kernels": kernels },
            "s0_branch": { "passes": s0, "subgroups": subs },
            "excluded": fails,
        }));
    }
    let outcome = if violated { Outcome::Violation } else { Outcome::Pass };
    Ok(Finding::new(R_CENTRAL, CITE_CENTRAL, outcome, json!({ "central_involutions": rows })))
}

fn table_rule(g: &Group, cfg: &RuleConfig) -> Result<Finding, RuleError> {
    let Some(c) = cfg.axioms.containment_for(g) else {
        return Ok(Finding::new(R_TABLE, CITE_TABLE, Outcome::Inapplicable, json!({ "match": null })));
    };
    let sub = build_str(&c.contains, &cfg.caps)?;
    let v = check_sphere4(&sub, cfg)?;
    let outcome = if v.is_excluded() { Outcome::Violation } else { Outcome::Pass };
    Ok(Finding::new(
        R_TABLE,
        CITE_TABLE,
        outcome,
        json!({
            "match": c.group,
            "contains": c.contains,
            "contained_status": v.status,
            "contained_violations": v.violated_rules(),
            "machine_verified": c.machine_verified,
            "provenance": c.provenance,
        }),
    ))
}

/// `q` with `|PSL(2,q)| = n`, if any.
fn psl2_parameter(n: usize) -> Option<u64> {
    let n = n as u64;
    (2..=2000u64).find(|&q| prime_power(q).is_some() && q * (q * q - 1) / gcd(2, q - 1) == n)
}

fn table3_rule(g: &Group, cfg: &RuleConfig) -> Result<Finding, RuleError> {
    let fp = g.fingerprint();
    let mut fired = Vec::new();
    for (i, e) in cfg.axioms.sphere3.iter().enumerate() {
        let names = cfg.axioms.sphere3_fingerprints(i);
        let hit = match e {
            Sphere3Entry::SimpleOnly { .. } => g.is_nonabelian_simple() && !names.iter().any(|(_, f)| *f == fp),
            Sphere3Entry::ExcludedGroup { .. } => names.iter().any(|(_, f)| *f == fp),
            Sphere3Entry::QuasisimpleQuotient { family, .. } => {
                family == "PSL2" && quasisimple_quotient_hit(g, names, &cfg.caps)?
            }
            Sphere3Entry::Note { .. } => false,
        };
        if hit {
            fired.push(json!({ "id": e.id(), "statement": e.statement(), "provenance": e.provenance() }));
        }
    }
    let outcome = if fired.is_empty() { Outcome::Pass } else { Outcome::Violation };
    Ok(Finding::new(R_TABLE3, CITE_TABLE3, outcome, json!({ "entries": fired })))
}

/// Quasisimple with center of order 2 and central quotient matching some
/// `PSL(2,q)` outside the allowed list.
fn quasisimple_quotient_hit(
    g: &Group,
    allowed: &[(String, crate::group::Fingerprint)],
    caps: &Caps,
) -> Result<bool, RuleError> {
    let z = g.center();
    if z.order() != 2 || !is_quasisimple(g) {
        return Ok(false);
    }
    let Some(q) = psl2_parameter(g.order() / 2) else {
        return Ok(false);
    };
    let quot = g.quotient(&z, caps.degree_cap)?.into_group().fingerprint();
    let psl = build(&GroupSpec::Psl2(q as u32), caps)?.fingerprint();
    Ok(quot == psl && !allowed.iter().any(|(_, f)| *f == quot))
}
