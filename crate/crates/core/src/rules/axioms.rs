//! The curated axiom table: low-dimensional facts that the rules consult but
//! do not derive. Every entry carries a provenance string.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructors::{build_str, BuildError};
use crate::group::{Caps, Fingerprint, Group};

pub const DEFAULT_AXIOMS: &str = include_str!("../../data/axioms.json");
pub const AXIOMS_ENV: &str = "SPHEREGATE_AXIOMS";

#[derive(Debug, Error)]
pub enum AxiomError {
    #[error("cannot read axiom table {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed axiom table: {0}")]
    Json(#[from] serde_json::Error),
    #[error("axiom entry '{0}' has an empty provenance")]
    MissingProvenance(String),
    #[error("axiom entry '{entry}' names an unbuildable group: {source}")]
    BadSpec { entry: String, source: BuildError },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomTable {
    pub schema: String,
    pub sphere2: Sphere2Table,
    pub sphere3: Vec<Sphere3Entry>,
    pub containments: Vec<Containment>,
    #[serde(default)]
    pub notes: Vec<Note>,
    #[serde(skip)]
    resolved: Resolved,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sphere2Table {
    pub provenance: String,
    pub solvable: SolvableLimits,
    pub nonsolvable: Vec<SpecEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolvableLimits {
    pub max_odd_rank: usize,
    pub max_two_rank: usize,
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecEntry {
    pub spec: String,
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sphere3Entry {
    /// Nonabelian simple groups other than the listed ones are excluded.
    SimpleOnly { id: String, allowed: Vec<String>, statement: String, provenance: String },
    /// One specific group is excluded.
    ExcludedGroup { id: String, spec: String, statement: String, provenance: String },
    /// Quasisimple groups with center of order 2 whose central quotient lies
    /// in `family` are excluded unless the quotient is listed in `allowed`.
    QuasisimpleQuotient { id: String, family: String, allowed: Vec<String>, statement: String, provenance: String },
    Note { id: String, statement: String, provenance: String },
}

impl Sphere3Entry {
    pub fn id(&self) -> &str {
        match self {
            Sphere3Entry::SimpleOnly { id, .. }
            | Sphere3Entry::ExcludedGroup { id, .. }
            | Sphere3Entry::QuasisimpleQuotient { id, .. }
            | Sphere3Entry::Note { id, .. } => id,
        }
    }

    pub fn provenance(&self) -> &str {
        match self {
            Sphere3Entry::SimpleOnly { provenance, .. }
            | Sphere3Entry::ExcludedGroup { provenance, .. }
            | Sphere3Entry::QuasisimpleQuotient { provenance, .. }
            | Sphere3Entry::Note { provenance, .. } => provenance,
        }
    }

    pub fn statement(&self) -> &str {
        match self {
            Sphere3Entry::SimpleOnly { statement, .. }
            | Sphere3Entry::ExcludedGroup { statement, .. }
            | Sphere3Entry::QuasisimpleQuotient { statement, .. }
            | Sphere3Entry::Note { statement, .. } => statement,
        }
    }
}

/// A group without a constructor, recognised by order and class count, and
/// a subgroup it is recorded to contain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Containment {
    pub group: String,
    pub order: u64,
    pub class_count: u64,
    pub contains: String,
    pub machine_verified: bool,
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Note {
    pub id: String,
    pub statement: String,
    pub provenance: String,
}

/// Fingerprints of the groups named by spec strings in the table.
#[derive(Debug, Clone, Default)]
struct Resolved {
    sphere2_nonsolvable: Vec<(String, Fingerprint)>,
    /// per sphere3 entry: fingerprints of the groups it names
    sphere3: Vec<Vec<(String, Fingerprint)>>,
}

fn fingerprint_of(entry: &str, spec: &str) -> Result<Fingerprint, AxiomError> {
    build_str(spec, &Caps::default())
        .map(|g| g.fingerprint())
        .map_err(|source| AxiomError::BadSpec { entry: entry.to_string(), source })
}

impl AxiomTable {
    pub fn parse(text: &str) -> Result<AxiomTable, AxiomError> {
        let mut t: AxiomTable = serde_json::from_str(text)?;
        t.validate()?;
        t.resolve()?;
        Ok(t)
    }

    pub fn bundled() -> AxiomTable {
        AxiomTable::parse(DEFAULT_AXIOMS).expect("bundled axiom table is valid")
    }

    pub fn from_path(path: &Path) -> Result<AxiomTable, AxiomError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| AxiomError::Io { path: path.display().to_string(), source })?;
        AxiomTable::parse(&text)
    }

    /// The table named by `SPHEREGATE_AXIOMS`, else the bundled one.
    pub fn from_env_or_bundled() -> Result<AxiomTable, AxiomError> {
        match std::env::var_os(AXIOMS_ENV) {
            Some(p) => AxiomTable::from_path(Path::new(&p)),
            None => Ok(AxiomTable::bundled()),
        }
    }

    fn validate(&self) -> Result<(), AxiomError> {
        let check = |id: &str, prov: &str| {
            if prov.trim().is_empty() {
                Err(AxiomError::MissingProvenance(id.to_string()))
            } else {
                Ok(())
            }
        };
        check("sphere2", &self.sphere2.provenance)?;
        check("sphere2.solvable", &self.sphere2.solvable.provenance)?;
        for e in &self.sphere2.nonsolvable {
            check(&e.spec, &e.provenance)?;
        }
        for e in &self.sphere3 {
            check(e.id(), e.provenance())?;
        }
        for c in &self.containments {
            check(&c.group, &c.provenance)?;
        }
        for n in &self.notes {
            check(&n.id, &n.provenance)?;
        }
        Ok(())
    }

    fn resolve(&mut self) -> Result<(), AxiomError> {
        let mut r = Resolved::default();
        for e in &self.sphere2.nonsolvable {
            r.sphere2_nonsolvable.push((e.spec.clone(), fingerprint_of(&e.spec, &e.spec)?));
        }
        for e in &self.sphere3 {
            let specs: Vec<&String> = match e {
                Sphere3Entry::SimpleOnly { allowed, .. } | Sphere3Entry::QuasisimpleQuotient { allowed, .. } => {
                    allowed.iter().collect()
                }
                Sphere3Entry::ExcludedGroup { spec, .. } => vec![spec],
                Sphere3Entry::Note { .. } => vec![],
            };
            let fps = specs
                .into_iter()
                .map(|s| Ok((s.clone(), fingerprint_of(e.id(), s)?)))
                .collect::<Result<Vec<_>, AxiomError>>()?;
            r.sphere3.push(fps);
        }
        self.resolved = r;
        Ok(())
    }

    /// Name of the matching nonsolvable 2-sphere group, if any.
    pub fn sphere2_nonsolvable_match(&self, fp: &Fingerprint) -> Option<&str> {
        self.resolved
            .sphere2_nonsolvable
            .iter()
            .find(|(_, f)| f == fp)
            .map(|(s, _)| s.as_str())
    }

    pub(crate) fn sphere3_fingerprints(&self, index: usize) -> &[(String, Fingerprint)] {
        &self.resolved.sphere3[index]
    }

    pub fn containment_for(&self, g: &Group) -> Option<&Containment> {
        let order = g.order() as u64;
        if !self.containments.iter().any(|c| c.order == order) {
            return None;
        }
        let classes = g.conj_classes().len() as u64;
        self.containments.iter().find(|c| c.order == order && c.class_count == classes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table_loads() {
        let t = AxiomTable::bundled();
        assert_eq!(t.schema, "spheregate-axioms/1");
        assert!(t.containments.iter().all(|c| !c.machine_verified));
        let a5 = build_str("Alt(5)", &Caps::default()).unwrap();
        assert_eq!(t.sphere2_nonsolvable_match(&a5.fingerprint()), Some("Alt(5)"));
    }

    #[test]
    fn empty_provenance_rejected() {
        let text = DEFAULT_AXIOMS.replacen("\"provenance\": \"Icosahedral rotation group\"", "\"provenance\": \" \"", 1);
        assert!(matches!(AxiomTable::parse(&text), Err(AxiomError::MissingProvenance(_))));
    }

    #[test]
    fn missing_provenance_field_rejected() {
        let text = DEFAULT_AXIOMS.replacen(", \"provenance\": \"Icosahedral rotation group\"", "", 1);
        assert!(matches!(AxiomTable::parse(&text), Err(AxiomError::Json(_))));
    }
}
