//! Fitting subgroup, components, `E(G)` and the classifier for the
//! nonsolvable groups that can act on a homology 4-sphere.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::constructors::build_str;
use crate::group::{Caps, Fingerprint, Group, GroupError, DEFAULT_DEGREE_CAP};
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("group is solvable")]
    SolvableInput,
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone)]
pub struct StructureReport {
    pub order: usize,
    pub solvable: bool,
    pub center_order: usize,
    pub fitting: Group,
    pub components: Vec<Group>,
    pub e_subgroup: Group,
    pub fingerprint: Fingerprint,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureSummary {
    pub order: usize,
    pub solvable: bool,
    pub center_order: usize,
    pub fitting_order: usize,
    pub component_orders: Vec<usize>,
    pub e_order: usize,
    pub class_count: u64,
    pub element_orders: std::collections::BTreeMap<u64, u64>,
}

impl StructureReport {
    pub fn summary(&self) -> StructureSummary {
        StructureSummary {
            order: self.order,
            solvable: self.solvable,
            center_order: self.center_order,
            fitting_order: self.fitting.order(),
            component_orders: self.components.iter().map(|c| c.order()).collect(),
            e_order: self.e_subgroup.order(),
            class_count: self.fingerprint.class_count,
            element_orders: self.fingerprint.element_orders.clone(),
        }
    }
}

fn join(degree: usize, groups: &[&Group]) -> Group {
    let gens: Vec<Perm> = groups.iter().flat_map(|g| g.generators().iter().cloned()).collect();
    Group::closure(degree, &gens, usize::MAX).expect("uncapped")
}

/// Product of the `p`-cores `O_p(G)`.
pub fn fitting_subgroup(g: &Group) -> Group {
    let cores: Vec<Group> = g.primes().iter().map(|&p| g.core(&g.sylow(p)).unwrap()).collect();
    join(g.degree(), &cores.iter().collect::<Vec<_>>())
}

/// Perfect, nontrivial, and simple modulo its center.
pub fn is_quasisimple(g: &Group) -> bool {
    central_quotient(g).is_ok_and(|q| q.map_or(false, |q| q.is_nonabelian_simple()))
}

/// `G/Z(G)` for perfect nontrivial `G`; `None` when `G` is not perfect.
fn central_quotient(g: &Group) -> Result<Option<Group>, GroupError> {
    if g.is_trivial() || !g.is_perfect() {
        return Ok(None);
    }
    let z = g.center();
    if z.is_trivial() {
        return Ok(Some(g.clone()));
    }
    Ok(Some(g.quotient(&z, DEFAULT_DEGREE_CAP)?.into_group()))
}

/// Quasisimple subnormal subgroups. A component lies in the perfect core
/// `P = G^∞`; if `P` is not itself quasisimple, every component lies in a
/// proper normal subgroup of `P`, so the search recurses into their
/// perfect cores.
pub fn components(g: &Group) -> Vec<Group> {
    let mut memo: HashMap<Vec<Perm>, Vec<Group>> = HashMap::new();
    let p = g.derived_series().pop().unwrap();
    let mut out = components_of_perfect(&p, &mut memo);
    out.sort_by(|a, b| a.elements().cmp(b.elements()));
    out.dedup();
    out
}

fn components_of_perfect(p: &Group, memo: &mut HashMap<Vec<Perm>, Vec<Group>>) -> Vec<Group> {
    if p.is_trivial() {
        return Vec::new();
    }
    if let Some(found) = memo.get(p.elements()) {
        return found.clone();
    }
    let found = if is_quasisimple(p) {
        vec![p.clone()]
    } else {
        let mut acc = Vec::new();
        for n in p.normal_subgroups() {
            if n.is_trivial() || n.order() == p.order() {
                continue;
            }
            let core = n.derived_series().pop().unwrap();
            acc.extend(components_of_perfect(&core, memo));
        }
        acc.sort_by(|a, b| a.elements().cmp(b.elements()));
        acc.dedup();
        acc
    };
    memo.insert(p.elements().to_vec(), found.clone());
    found
}

pub fn analyze_structure(g: &Group) -> StructureReport {
    let comps = components(g);
    let e = if comps.is_empty() {
        Group::trivial(g.degree())
    } else {
        join(g.degree(), &comps.iter().collect::<Vec<_>>())
    };
    StructureReport {
        order: g.order(),
        solvable: g.is_solvable(),
        center_order: g.center().order(),
        fitting: fitting_subgroup(g),
        components: comps,
        e_subgroup: e,
        fingerprint: g.fingerprint(),
    }
}

pub fn is_cyclic(g: &Group) -> bool {
    g.elements().iter().any(|x| x.order() as usize == g.order())
}

/// Order `2n` with a cyclic subgroup of order `n` inverted by an involution
/// outside it. Includes `Z_2` and the Klein four-group.
pub fn is_dihedral(g: &Group) -> bool {
    let n = g.order();
    if n % 2 != 0 {
        return false;
    }
    let half = (n / 2) as u64;
    g.elements().iter().filter(|x| x.order() == half).any(|x| {
        let c = g.cyclic_subgroup(x);
        g.elements()
            .iter()
            .any(|y| !c.contains(y) && y.order() <= 2 && x.conjugate_by(y) == x.inverse())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    A,
    B,
    C,
    OutsideList,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CaseWitness {
    /// Normal `(Z_2)^4` with quotient matching `quotient`.
    NormalEa { ea_order: usize, quotient: String, quotient_order: usize },
    Fingerprint { matches: String, separated_from: Vec<String> },
    /// Index-at-most-2 subgroup `A5 x C`, `C` cyclic or dihedral.
    A5TimesC { index: usize, cofactor_order: usize, cofactor: String },
    /// Index-at-most-2 subgroup that is a central product of two `SL(2,5)`s.
    #[serde(rename = "sl25_central_square")]
    SL25CentralSquare { index: usize },
    /// Index-at-most-2 subgroup `SL(2,5) ∘ C` with `C` solvable.
    #[serde(rename = "sl25_central_c")]
    SL25CentralC { index: usize, cofactor_order: usize, free_action_verified: bool },
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonsolvableCase {
    pub tag: CaseTag,
    pub witness: CaseWitness,
    /// Conditions the classifier reports without checking.
    pub unverified: Vec<String>,
}

struct Reference {
    name: &'static str,
    spec: &'static str,
}

const B_TARGETS: [Reference; 2] = [Reference { name: "A6", spec: "Alt(6)" }, Reference { name: "S6", spec: "Sym(6)" }];
const B_LOOKALIKES: [&str; 2] = ["PGL2(9)", "DirProd(Alt(6),Perms[(0,1)])"];

fn reference_fingerprint(spec: &str) -> Fingerprint {
    build_str(spec, &Caps::default()).expect("reference group").fingerprint()
}

/// Places a nonsolvable group into case A, B or C of the classification of
/// nonsolvable groups acting on homology 4-spheres, or outside the list.
///
/// * A: a normal `(Z_2)^4` with quotient `A5` or `S5`.
/// * B: `A6` or `S6`, recognised by fingerprint; the fingerprints of the
///   order-720 look-alikes `PGL(2,9)`, `M10` and `A6 x Z2` all differ from
///   that of `S6`.
/// * C: a subgroup of index at most two isomorphic to `A5 x C` (`C` cyclic or
///   dihedral), `SL(2,5) ∘ SL(2,5)`, or `SL(2,5) ∘ C` with `C` solvable.
pub fn classify_nonsolvable(g: &Group) -> Result<NonsolvableCase, StructureError> {
    if g.is_solvable() {
        return Err(StructureError::SolvableInput);
    }
    if let Some(w) = case_a(g)? {
        return Ok(NonsolvableCase { tag: CaseTag::A, witness: w, unverified: vec![] });
    }
    let fp = g.fingerprint();
    for r in &B_TARGETS {
        if reference_fingerprint(r.spec) == fp {
            let mut separated: Vec<String> = B_LOOKALIKES.iter().map(|s| s.to_string()).collect();
            separated.push("M10".into());
            return Ok(NonsolvableCase {
                tag: CaseTag::B,
                witness: CaseWitness::Fingerprint { matches: r.name.into(), separated_from: separated },
                unverified: vec![],
            });
        }
    }
    for h in &g.index_at_most_two_subgroups() {
        let index = g.order() / h.order();
        if let Some(w) = case_c(h, index)? {
            let unverified = match w {
                CaseWitness::SL25CentralC { .. } => {
                    vec!["the factor C admits a free orientation-preserving action on the 3-sphere".into()]
                }
                _ => vec![],
            };
            return Ok(NonsolvableCase { tag: CaseTag::C, witness: w, unverified });
        }
    }
    Ok(NonsolvableCase { tag: CaseTag::OutsideList, witness: CaseWitness::None, unverified: vec![] })
}

fn is_elementary_abelian_2(n: &Group) -> bool {
    n.is_abelian() && n.elements().iter().all(|x| x.order() <= 2)
}

fn case_a(g: &Group) -> Result<Option<CaseWitness>, StructureError> {
    if g.order() % 16 != 0 {
        return Ok(None);
    }
    let targets = [("A5", reference_fingerprint("Alt(5)")), ("S5", reference_fingerprint("Sym(5)"))];
    for n in g.normal_subgroups() {
        if n.order() != 16 || !is_elementary_abelian_2(&n) {
            continue;
        }
        let qo = g.order() / 16;
        if qo != 60 && qo != 120 {
            continue;
        }
        let q = g.quotient(&n, DEFAULT_DEGREE_CAP)?.into_group();
        let qfp = q.fingerprint();
        if let Some((name, _)) = targets.iter().find(|(_, f)| *f == qfp) {
            return Ok(Some(CaseWitness::NormalEa { ea_order: 16, quotient: name.to_string(), quotient_order: qo }));
        }
    }
    Ok(None)
}

fn case_c(h: &Group, index: usize) -> Result<Option<CaseWitness>, StructureError> {
    let a5 = reference_fingerprint("Alt(5)");
    let sl25 = reference_fingerprint("SL2(5)");
    let normals = h.normal_subgroups();
    for n in normals.iter().filter(|n| n.order() == 60) {
        if n.fingerprint() != a5 {
            continue;
        }
        let c = h.centralizer(n.generators())?;
        if n.order() * c.order() == h.order() && (is_cyclic(&c) || is_dihedral(&c)) {
            let kind = if is_cyclic(&c) { "cyclic" } else { "dihedral" };
            return Ok(Some(CaseWitness::A5TimesC { index, cofactor_order: c.order(), cofactor: kind.into() }));
        }
    }
    let comps = components(h);
    if comps.len() == 2 && comps.iter().all(|c| c.fingerprint() == sl25) && h.order() == 7200 {
        return Ok(Some(CaseWitness::SL25CentralSquare { index }));
    }
    for n in normals.iter().filter(|n| n.order() == 120) {
        if n.fingerprint() != sl25 {
            continue;
        }
        let c = h.centralizer(n.generators())?;
        let meet = n.elements().iter().filter(|x| c.contains(x)).count();
        if meet == 2 && n.order() * c.order() == 2 * h.order() && c.is_solvable() {
            return Ok(Some(CaseWitness::SL25CentralC { index, cofactor_order: c.order(), free_action_verified: false }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Group {
        build_str(s, &Caps::default()).unwrap()
    }

    #[test]
    fn quasisimplicity() {
        assert!(is_quasisimple(&g("SL2(5)")));
        assert!(is_quasisimple(&g("Alt(6)")));
        assert!(!is_quasisimple(&g("Sym(5)")));
        assert!(!is_quasisimple(&g("EA(5,1)")));
    }

    #[test]
    fn abelian_structure() {
        let r = analyze_structure(&g("EA(3,2)"));
        assert_eq!(r.fitting.order(), 9);
        assert!(r.components.is_empty());
    }

    #[test]
    fn cyclic_and_dihedral() {
        assert!(is_cyclic(&g("Perms[(0,1,2,3,4,5,6)]")));
        assert!(is_dihedral(&g("Perms[(0,1,2,3,4);(1,4)(2,3)]")));
        assert!(is_dihedral(&g("Perms[(0,1);(2,3)]")));
        assert!(!is_dihedral(&g("Alt(4)")));
    }

    #[test]
    fn classifier_basics() {
        assert_eq!(classify_nonsolvable(&g("Sym(6)")).unwrap().tag, CaseTag::B);
        assert_eq!(classify_nonsolvable(&g("Alt(7)")).unwrap().tag, CaseTag::OutsideList);
        assert_eq!(classify_nonsolvable(&g("Sym(4)")).unwrap_err(), StructureError::SolvableInput);
    }
}
