//! Finite permutation groups with every element materialized.
//!
//! Target groups have at most a few hundred thousand elements, so all
//! queries (classes, centralizers, normalizers, cores) work directly on the
//! sorted element list. Elements are kept in canonical order (lexicographic
//! on image lists); every "first"/"minimal" choice below refers to it.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::prime_factors;
use crate::perm::{Perm, MAX_DEGREE};

pub const DEFAULT_ORDER_CAP: usize = 1_000_000;
pub const DEFAULT_DEGREE_CAP: usize = 8192;
pub const DEFAULT_TWO_GROUP_CAP: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order exceeds cap {cap}")]
    CapExceeded { cap: usize },
    #[error("generators have different degrees")]
    DegreeMismatch,
    #[error("element set is not contained in the group")]
    NotASubset,
    #[error("subgroup list contains a non-subgroup")]
    NotASubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("permutation degree {degree} exceeds cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
}

/// Size limits shared by construction and analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub order_cap: usize,
    pub degree_cap: usize,
    pub two_group_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            order_cap: DEFAULT_ORDER_CAP,
            degree_cap: DEFAULT_DEGREE_CAP,
            two_group_cap: DEFAULT_TWO_GROUP_CAP,
        }
    }
}

/// A permutation group together with its full, sorted element list.
///
/// Subgroups are ordinary `Group`s of the same degree; whether one group is
/// a subgroup of another is a property checked on demand.
#[derive(Clone)]
pub struct Group {
    degree: usize,
    gens: Vec<Perm>,
    elements: Vec<Perm>,
    name: Option<String>,
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Group")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("gens", &self.gens)
            .finish()
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for Group {}

/// Incremental closure (Dimino's algorithm): adding a generator `g` to a
/// closed set `H` appends whole right cosets `H r`, so the element set stays
/// a union of cosets of the previous subgroup.
struct ClosureBuilder {
    degree: usize,
    elems: Vec<Perm>,
    set: HashSet<Perm>,
    gens: Vec<Perm>,
    cap: usize,
}

impl ClosureBuilder {
    fn new(degree: usize, cap: usize) -> Self {
        let id = Perm::identity(degree);
        let mut set = HashSet::new();
        set.insert(id.clone());
        ClosureBuilder { degree, elems: vec![id], set, gens: Vec::new(), cap }
    }

    fn contains(&self, g: &Perm) -> bool {
        self.set.contains(g)
    }

    fn add(&mut self, g: &Perm) -> Result<bool, GroupError> {
        if self.set.contains(g) {
            return Ok(false);
        }
        self.gens.push(g.clone());
        let base_len = self.elems.len();
        let mut reps = vec![Perm::identity(self.degree)];
        let mut i = 0;
        while i < reps.len() {
            for s in 0..self.gens.len() {
                let y = reps[i].compose(&self.gens[s]);
                if self.set.contains(&y) {
                    continue;
                }
                if self.elems.len() + base_len > self.cap {
                    return Err(GroupError::CapExceeded { cap: self.cap });
                }
                for b in 0..base_len {
                    let e = self.elems[b].compose(&y);
                    self.set.insert(e.clone());
                    self.elems.push(e);
                }
                reps.push(y);
            }
            i += 1;
        }
        Ok(true)
    }

    fn finish(mut self) -> Group {
        self.elems.sort_unstable();
        Group { degree: self.degree, gens: self.gens, elements: self.elems, name: None }
    }
}

/// One conjugacy class: the canonical-minimum representative and the
/// indices (into the group's element list) of its members.
#[derive(Debug, Clone)]
pub struct ConjClass {
    pub representative: Perm,
    pub members: Vec<usize>,
}

/// Order, number of conjugacy classes and element-order statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: u64,
    pub class_count: u64,
    /// element order -> number of elements of that order
    pub element_orders: BTreeMap<u64, u64>,
}

/// A quotient `G/N` realised as the action of `G` on right cosets of a
/// subgroup `K` containing `N` whose core is exactly `N`.
#[derive(Debug, Clone)]
pub struct Quotient {
    group: Group,
    /// parent element index -> coset id
    coset_of: Vec<u32>,
    /// coset id -> parent element index of a representative
    reps: Vec<usize>,
    kernel_order: usize,
}

impl Quotient {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn into_group(self) -> Group {
        self.group
    }

    pub fn kernel_order(&self) -> usize {
        self.kernel_order
    }

    /// Image of a parent element in the quotient's permutation action.
    pub fn image(&self, parent: &Group, g: &Perm) -> Perm {
        let images: Vec<usize> = self
            .reps
            .iter()
            .map(|&r| {
                let x = parent.elements[r].compose(g);
                self.coset_of[parent.index_of(&x).expect("element of parent")] as usize
            })
            .collect();
        Perm::from_images(&images).expect("coset action is a permutation")
    }
}

impl Group {
    /// Closure of `gens`, breadth-first over cosets; fails once more than
    /// `order_cap` elements have been produced.
    pub fn closure(degree: usize, gens: &[Perm], order_cap: usize) -> Result<Group, GroupError> {
        if degree > MAX_DEGREE {
            return Err(GroupError::DegreeCapExceeded { degree, cap: MAX_DEGREE });
        }
        if gens.iter().any(|g| g.degree() != degree) {
            return Err(GroupError::DegreeMismatch);
        }
        let mut b = ClosureBuilder::new(degree, order_cap.max(1));
        for g in gens {
            b.add(g)?;
        }
        Ok(b.finish())
    }

    pub fn trivial(degree: usize) -> Group {
        Group {
            degree,
            gens: Vec::new(),
            elements: vec![Perm::identity(degree)],
            name: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Group {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Name if set, otherwise a description by order.
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("group of order {}", self.order()))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Non-redundant generators: each one lies outside the group generated by
    /// its predecessors.
    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn index_of(&self, g: &Perm) -> Option<usize> {
        if g.degree() != self.degree {
            return None;
        }
        self.elements.binary_search(g).ok()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.index_of(g).is_some()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subgroup_of(&self, parent: &Group) -> bool {
        self.degree == parent.degree && self.gens.iter().all(|g| parent.contains(g))
    }

    fn check_subset(&self, s: &[Perm]) -> Result<(), GroupError> {
        if s.iter().all(|g| self.contains(g)) {
            Ok(())
        } else {
            Err(GroupError::NotASubset)
        }
    }

    /// Subgroup generated by elements of `self`.
    pub fn subgroup(&self, gens: &[Perm]) -> Result<Group, GroupError> {
        self.check_subset(gens)?;
        let h = Group::closure(self.degree, gens, usize::MAX)?;
        debug_assert_eq!(self.order() % h.order(), 0);
        Ok(h)
    }

    /// Group on an element set already known to be closed.
    fn from_closed_set(&self, mut elems: Vec<Perm>) -> Group {
        elems.sort_unstable();
        let mut b = ClosureBuilder::new(self.degree, usize::MAX);
        for e in &elems {
            if !b.contains(e) {
                b.add(e).expect("uncapped");
            }
        }
        debug_assert_eq!(b.elems.len(), elems.len(), "element set was not closed");
        debug_assert_eq!(self.order() % elems.len(), 0);
        Group { degree: self.degree, gens: b.gens, elements: elems, name: None }
    }

    pub fn cyclic_subgroup(&self, g: &Perm) -> Group {
        let mut elems = vec![self.identity()];
        let mut cur = g.clone();
        while !cur.is_identity() {
            elems.push(cur.clone());
            cur = cur.compose(g);
        }
        elems.sort_unstable();
        let gens = if g.is_identity() { vec![] } else { vec![g.clone()] };
        Group { degree: self.degree, gens, elements: elems, name: None }
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.gens;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| g[i].commutes_with(&g[j])))
    }

    /// Whether `h` (a subgroup) is normalized by every generator of `self`.
    pub fn is_normal(&self, h: &Group) -> bool {
        h.is_subgroup_of(self)
            && self
                .gens
                .iter()
                .all(|s| h.gens.iter().all(|x| h.contains(&x.conjugate_by(s))))
    }

    /// Conjugacy classes ordered by representative.
    pub fn conj_classes(&self) -> Vec<ConjClass> {
        let n = self.order();
        let mut marked = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if marked[i] {
                continue;
            }
            marked[i] = true;
            let mut members = vec![i];
            let mut queue = VecDeque::from([self.elements[i].clone()]);
            while let Some(x) = queue.pop_front() {
                for s in &self.gens {
                    let y = x.conjugate_by(s);
                    let j = self.index_of(&y).expect("closed under conjugation");
                    if !marked[j] {
                        marked[j] = true;
                        members.push(j);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(ConjClass { representative: self.elements[i].clone(), members });
        }
        out
    }

    pub fn element_order_counts(&self) -> BTreeMap<u64, u64> {
        let mut counts = BTreeMap::new();
        for e in &self.elements {
            *counts.entry(e.order()).or_insert(0) += 1;
        }
        counts
    }

    pub fn fingerprint(&self) -> Fingerprint {
        Fingerprint {
            order: self.order() as u64,
            class_count: self.conj_classes().len() as u64,
            element_orders: self.element_order_counts(),
        }
    }

    /// Elements commuting with every member of `s`.
    pub fn centralizer(&self, s: &[Perm]) -> Result<Group, GroupError> {
        self.check_subset(s)?;
        let elems: Vec<Perm> = self
            .elements
            .iter()
            .filter(|g| s.iter().all(|x| g.commutes_with(x)))
            .cloned()
            .collect();
        Ok(self.from_closed_set(elems))
    }

    pub fn center(&self) -> Group {
        self.centralizer(&self.gens.clone()).expect("generators lie in the group")
    }

    pub fn normalizer(&self, h: &Group) -> Result<Group, GroupError> {
        if !h.is_subgroup_of(self) {
            return Err(GroupError::NotASubset);
        }
        let elems: Vec<Perm> = self
            .elements
            .iter()
            .filter(|g| h.gens.iter().all(|x| h.contains(&x.conjugate_by(g))))
            .cloned()
            .collect();
        Ok(self.from_closed_set(elems))
    }

    /// Smallest normal subgroup containing `s`.
    pub fn normal_closure(&self, s: &[Perm]) -> Result<Group, GroupError> {
        self.check_subset(s)?;
        let mut b = ClosureBuilder::new(self.degree, usize::MAX);
        let mut queue: VecDeque<Perm> = s.iter().cloned().collect();
        while let Some(x) = queue.pop_front() {
            if b.add(&x)? {
                for g in &self.gens {
                    queue.push_back(x.conjugate_by(g));
                }
            }
        }
        Ok(b.finish())
    }

    /// Largest normal subgroup of `self` contained in `h`.
    pub fn core(&self, h: &Group) -> Result<Group, GroupError> {
        if !h.is_subgroup_of(self) {
            return Err(GroupError::NotASubset);
        }
        let mut keep: Vec<Perm> = h.elements.clone();
        loop {
            let set: HashSet<&Perm> = keep.iter().collect();
            let next: Vec<Perm> = keep
                .iter()
                .filter(|x| self.gens.iter().all(|g| set.contains(&x.conjugate_by(g))))
                .cloned()
                .collect();
            if next.len() == keep.len() {
                break;
            }
            keep = next;
        }
        Ok(self.from_closed_set(keep))
    }

    pub fn derived_subgroup(&self) -> Group {
        let mut comms = Vec::new();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                let c = a.inverse().compose(&b.inverse()).compose(a).compose(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms).expect("commutators lie in the group")
    }

    /// `G, G', G'', ...` until the series stabilises.
    pub fn derived_series(&self) -> Vec<Group> {
        let mut series = vec![self.clone()];
        loop {
            let d = series.last().unwrap().derived_subgroup();
            if d.order() == series.last().unwrap().order() {
                break;
            }
            series.push(d);
        }
        series
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().is_trivial()
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subgroup().order() == self.order()
    }

    /// Nontrivial and generated, as a normal subgroup, by any nontrivial
    /// element. Cyclic groups of prime order count as simple.
    pub fn is_simple(&self) -> bool {
        if self.is_trivial() {
            return false;
        }
        self.conj_classes().iter().skip(1).all(|c| {
            self.normal_closure(std::slice::from_ref(&c.representative))
                .map(|n| n.order() == self.order())
                .unwrap_or(false)
        })
    }

    /// Simple and nonabelian.
    pub fn is_nonabelian_simple(&self) -> bool {
        !self.is_abelian() && self.is_simple()
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut i = 0;
            while i < orbit.len() {
                let x = orbit[i];
                for g in &self.gens {
                    let y = g.apply(x);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    fn stabilizer_of_points(&self, pts: &[usize]) -> Vec<Perm> {
        self.elements
            .iter()
            .filter(|g| pts.iter().all(|&p| g.apply(p) == p))
            .cloned()
            .collect()
    }

    /// `G/N` as a permutation group. `K` is the first candidate among
    /// `N·G_a` (a an orbit representative), `N·(G_a ∩ G_b)` (a, b from
    /// distinct orbits), then `N·G_{0..i}` along the point chain, whose core
    /// is `N`; the chain ends at `K = N`.
    pub fn quotient(&self, n: &Group, degree_cap: usize) -> Result<Quotient, GroupError> {
        if !self.is_normal(n) {
            return Err(if n.is_subgroup_of(self) { GroupError::NotNormal } else { GroupError::NotASubset });
        }
        let target = self.order() / n.order();
        if target == 1 {
            let idx = self.index_of(&self.identity()).unwrap();
            return Ok(Quotient {
                group: Group::trivial(1),
                coset_of: vec![0; self.order()],
                reps: vec![idx],
                kernel_order: n.order(),
            });
        }
        let orbit_reps: Vec<usize> = self.orbits().iter().map(|o| o[0]).collect();
        let mut candidates: Vec<Vec<usize>> = orbit_reps.iter().map(|&a| vec![a]).collect();
        for (i, &a) in orbit_reps.iter().enumerate() {
            for &b in &orbit_reps[i + 1..] {
                candidates.push(vec![a, b]);
            }
        }
        for i in 0..self.degree {
            candidates.push((0..=i).collect());
        }
        let mut chosen: Option<Group> = None;
        for pts in candidates {
            let stab = self.stabilizer_of_points(&pts);
            let k = self.product_with_normal(n, &stab);
            let deg = self.order() / k.order();
            if deg > degree_cap {
                continue;
            }
            if self.core(&k)?.order() == n.order() {
                chosen = Some(k);
                break;
            }
        }
        let k = match chosen {
            Some(k) => k,
            None => {
                if target > degree_cap {
                    return Err(GroupError::DegreeCapExceeded { degree: target, cap: degree_cap });
                }
                n.clone()
            }
        };
        self.coset_action(&k, n.order())
    }

    /// Elements of `N·S` for a normal `n` and an element set `s` closed under
    /// multiplication.
    fn product_with_normal(&self, n: &Group, s: &[Perm]) -> Group {
        let mut set: HashSet<Perm> = HashSet::new();
        for x in &n.elements {
            for y in s {
                set.insert(x.compose(y));
            }
        }
        self.from_closed_set(set.into_iter().collect())
    }

    fn coset_action(&self, k: &Group, kernel_order: usize) -> Result<Quotient, GroupError> {
        let n = self.order();
        let mut coset_of = vec![u32::MAX; n];
        let mut reps = Vec::new();
        for i in 0..n {
            if coset_of[i] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(i);
            let g = &self.elements[i];
            for h in &k.elements {
                let j = self.index_of(&h.compose(g)).expect("closed");
                coset_of[j] = id;
            }
        }
        let deg = reps.len();
        let gens: Vec<Perm> = self
            .gens
            .iter()
            .map(|s| {
                let images: Vec<usize> = reps
                    .iter()
                    .map(|&r| coset_of[self.index_of(&self.elements[r].compose(s)).unwrap()] as usize)
                    .collect();
                Perm::from_images(&images).expect("coset action")
            })
            .collect();
        let q = Group::closure(deg, &gens, usize::MAX)?;
        debug_assert_eq!(q.order() * kernel_order, n, "coset action is not faithful on G/N");
        Ok(Quotient { group: q, coset_of, reps, kernel_order })
    }

    /// A Sylow `p`-subgroup, grown from the cyclic group of the first
    /// `p`-element of maximal order by repeatedly adjoining the first element
    /// of the normalizer whose `p`-th power lies in the current subgroup.
    pub fn sylow(&self, p: u64) -> Group {
        let mut target = 1usize;
        let mut rest = self.order();
        while rest % p as usize == 0 {
            rest /= p as usize;
            target *= p as usize;
        }
        if target == 1 {
            return Group::trivial(self.degree);
        }
        let start = self
            .elements
            .iter()
            .filter(|g| is_power_of(g.order(), p))
            .max_by(|a, b| a.order().cmp(&b.order()).then_with(|| b.cmp(a)))
            .expect("Cauchy");
        let mut cur = self.cyclic_subgroup(start);
        while cur.order() < target {
            let norm = self.normalizer(&cur).expect("subgroup");
            let ext = norm
                .elements
                .iter()
                .find(|g| !cur.contains(g) && cur.contains(&g.pow(p as i64)))
                .expect("Sylow theory guarantees a p-element in N(P)/P")
                .clone();
            let mut gens = cur.gens.clone();
            gens.push(ext);
            cur = Group::closure(self.degree, &gens, usize::MAX).expect("uncapped");
        }
        cur
    }

    /// Sorted element indices of a subgroup, used as a hashable key.
    fn index_key(&self, h: &Group) -> Vec<u32> {
        let mut v: Vec<u32> = h.elements.iter().map(|e| self.index_of(e).expect("subset") as u32).collect();
        v.sort_unstable();
        v
    }

    /// Partitions `subs` into classes of `G`-conjugate subgroups by computing
    /// the conjugation orbit of the first unassigned member. Classes are
    /// listed in order of first member; members are input indices.
    pub fn subgroup_conjugacy_partition(&self, subs: &[Group]) -> Result<Vec<Vec<usize>>, GroupError> {
        if subs.iter().any(|h| !h.is_subgroup_of(self) || !h.elements.iter().all(|e| self.contains(e))) {
            return Err(GroupError::NotASubgroup);
        }
        let keys: Vec<Vec<u32>> = subs.iter().map(|h| self.index_key(h)).collect();
        let mut key_pos: HashMap<&Vec<u32>, Vec<usize>> = HashMap::new();
        for (i, k) in keys.iter().enumerate() {
            key_pos.entry(k).or_default().push(i);
        }
        let mut assigned = vec![false; subs.len()];
        let mut classes = Vec::new();
        for i in 0..subs.len() {
            if assigned[i] {
                continue;
            }
            let mut class = Vec::new();
            let mut seen: HashSet<Vec<u32>> = HashSet::new();
            seen.insert(keys[i].clone());
            let mut queue = VecDeque::from([keys[i].clone()]);
            while let Some(k) = queue.pop_front() {
                if let Some(pos) = key_pos.get(&k) {
                    for &j in pos {
                        if !assigned[j] {
                            assigned[j] = true;
                            class.push(j);
                        }
                    }
                }
                for g in &self.gens {
                    let mut img: Vec<u32> = k
                        .iter()
                        .map(|&e| self.index_of(&self.elements[e as usize].conjugate_by(g)).unwrap() as u32)
                        .collect();
                    img.sort_unstable();
                    if seen.insert(img.clone()) {
                        queue.push_back(img);
                    }
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        Ok(classes)
    }

    /// All normal subgroups, as joins of normal closures of conjugacy classes,
    /// sorted by order and then by element list.
    pub fn normal_subgroups(&self) -> Vec<Group> {
        let mut found: Vec<Group> = vec![Group::trivial(self.degree)];
        let mut keys: HashSet<Vec<Perm>> = HashSet::new();
        keys.insert(found[0].elements.clone());
        for c in self.conj_classes().iter().skip(1) {
            let n = self.normal_closure(std::slice::from_ref(&c.representative)).unwrap();
            if keys.insert(n.elements.clone()) {
                found.push(n);
            }
        }
        let mut i = 0;
        while i < found.len() {
            for j in 0..i {
                let mut gens = found[i].gens.clone();
                gens.extend(found[j].gens.iter().cloned());
                let n = Group::closure(self.degree, &gens, usize::MAX).unwrap();
                if keys.insert(n.elements.clone()) {
                    found.push(n);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
        found
    }

    /// Subgroups of index one or two: `G` itself, then the kernels of the
    /// nonzero homomorphisms `G -> Z_2`.
    pub fn index_at_most_two_subgroups(&self) -> Vec<Group> {
        let mut out = vec![self.clone()];
        // G^2 = <g^2>, normal, with elementary abelian 2-group quotient
        let squares: Vec<Perm> = {
            let mut s: Vec<Perm> = self.elements.iter().map(|g| g.compose(g)).collect();
            s.sort_unstable();
            s.dedup();
            s
        };
        let sq = self.normal_closure(&squares).unwrap();
        let idx = self.order() / sq.order();
        if idx == 1 {
            return out;
        }
        // express generators' images in G/G^2 as vectors over F_2
        let mut basis: Vec<Perm> = Vec::new();
        let mut span = sq.clone();
        for g in &self.gens {
            if !span.contains(g) {
                basis.push(g.clone());
                let mut gens = span.gens.clone();
                gens.push(g.clone());
                span = Group::closure(self.degree, &gens, usize::MAX).unwrap();
            }
        }
        let d = basis.len();
        for mask in 1u32..(1 << d) {
            // kernel of the functional sending basis[i] to bit i of mask
            let mut gens: Vec<Perm> = sq.gens.clone();
            for i in 0..d {
                if mask >> i & 1 == 0 {
                    gens.push(basis[i].clone());
                }
            }
            let first = (0..d).find(|&i| mask >> i & 1 == 1).unwrap();
            for i in 0..d {
                if i != first && mask >> i & 1 == 1 {
                    gens.push(basis[first].compose(&basis[i]));
                }
            }
            let h = Group::closure(self.degree, &gens, usize::MAX).unwrap();
            debug_assert_eq!(h.order() * 2, self.order());
            out.push(h);
        }
        out.sort_by(|a, b| b.order().cmp(&a.order()).then_with(|| a.elements.cmp(&b.elements)));
        out
    }

    /// Prime divisors of the order.
    pub fn primes(&self) -> Vec<u64> {
        prime_factors(self.order() as u64)
    }
}

pub(crate) fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 1 {
        return true;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(deg: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(deg, cycles).unwrap()
    }

    fn alt5() -> Group {
        Group::closure(5, &[perm(5, &[&[0, 1, 2, 3, 4]]), perm(5, &[&[0, 1, 2]])], 1000).unwrap()
    }

    fn sym(n: usize) -> Group {
        let cyc: Vec<usize> = (0..n).collect();
        Group::closure(n, &[perm(n, &[&[0, 1]]), perm(n, &[&cyc])], 1 << 20).unwrap()
    }

    #[test]
    fn closure_basics() {
        assert_eq!(alt5().order(), 60);
        assert_eq!(Group::closure(4, &[], 10).unwrap().order(), 1);
        assert!(matches!(
            Group::closure(6, &[perm(6, &[&[0, 1]]), perm(6, &[&[0, 1, 2, 3, 4, 5]])], 100),
            Err(GroupError::CapExceeded { .. })
        ));
        assert_eq!(
            Group::closure(3, &[Perm::identity(4)], 10).unwrap_err(),
            GroupError::DegreeMismatch
        );
    }

    #[test]
    fn class_counts() {
        assert_eq!(sym(6).conj_classes().len(), 11);
        let z6 = Group::closure(6, &[perm(6, &[&[0, 1, 2, 3, 4, 5]])], 100).unwrap();
        assert_eq!(z6.conj_classes().len(), 6);
        let classes = alt5().conj_classes();
        assert_eq!(classes.iter().map(|c| c.members.len()).sum::<usize>(), 60);
        assert!(classes[0].representative.is_identity());
    }

    #[test]
    fn derived_and_simplicity() {
        let s4 = sym(4);
        assert!(s4.is_solvable());
        let s6 = sym(6);
        assert_eq!(s6.derived_subgroup().order(), 360);
        assert!(!s6.is_simple());
        assert!(s6.derived_subgroup().is_simple());
        assert!(alt5().is_simple());
    }

    #[test]
    fn core_and_normal_closure() {
        let s4 = sym(4);
        let p = s4.sylow(2);
        assert_eq!(p.order(), 8);
        assert_eq!(s4.core(&p).unwrap().order(), 4);
        let s5 = sym(5);
        let a5 = s5.derived_subgroup();
        assert_eq!(s5.core(&a5).unwrap().order(), 60);
        let a = alt5();
        let x = a.elements()[7].clone();
        assert_eq!(a.normal_closure(&[x]).unwrap().order(), 60);
    }

    #[test]
    fn centralizer_of_identity_is_everything() {
        let a = alt5();
        assert_eq!(a.centralizer(&[a.identity()]).unwrap().order(), 60);
        assert_eq!(a.center().order(), 1);
        assert_eq!(a.centralizer(&[Perm::identity(6)]).unwrap_err(), GroupError::NotASubset);
    }

    #[test]
    fn sylow_orders() {
        let a5 = alt5();
        assert_eq!(a5.sylow(2).order(), 4);
        assert_eq!(a5.sylow(7).order(), 1);
        let s6 = sym(6);
        assert_eq!(s6.derived_subgroup().sylow(3).order(), 9);
    }

    #[test]
    fn quotient_of_s4_by_klein() {
        let s4 = sym(4);
        let v4 = s4.core(&s4.sylow(2)).unwrap();
        let q = s4.quotient(&v4, 100).unwrap();
        assert_eq!(q.group().order(), 6);
        let full = s4.quotient(&s4, 100).unwrap();
        assert_eq!(full.group().order(), 1);
        let t = s4.cyclic_subgroup(&perm(4, &[&[0, 1]]));
        assert_eq!(s4.quotient(&t, 100).unwrap_err(), GroupError::NotNormal);
    }

    #[test]
    fn quotient_image_is_homomorphism() {
        let s4 = sym(4);
        let v4 = s4.core(&s4.sylow(2)).unwrap();
        let q = s4.quotient(&v4, 100).unwrap();
        for a in s4.elements().iter().step_by(5) {
            for b in s4.elements().iter().step_by(7) {
                let lhs = q.image(&s4, &a.compose(b));
                let rhs = q.image(&s4, a).compose(&q.image(&s4, b));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn normal_subgroups_of_s4() {
        let orders: Vec<usize> = sym(4).normal_subgroups().iter().map(|n| n.order()).collect();
        assert_eq!(orders, vec![1, 4, 12, 24]);
    }

    #[test]
    fn index_two_subgroups() {
        // Z2 x Z2 x Z3 (degree 7): three subgroups of index two
        let g = Group::closure(
            7,
            &[perm(7, &[&[0, 1]]), perm(7, &[&[2, 3]]), perm(7, &[&[4, 5, 6]])],
            100,
        )
        .unwrap();
        let subs = g.index_at_most_two_subgroups();
        assert_eq!(subs.len(), 4);
        assert!(subs[1..].iter().all(|h| h.order() == 6));
        assert_eq!(alt5().index_at_most_two_subgroups().len(), 1);
    }

    #[test]
    fn partition_in_abelian_group_is_discrete() {
        let g = Group::closure(4, &[perm(4, &[&[0, 1]]), perm(4, &[&[2, 3]])], 10).unwrap();
        let subs: Vec<Group> = g.elements()[1..].iter().map(|x| g.cyclic_subgroup(x)).collect();
        let part = g.subgroup_conjugacy_partition(&subs).unwrap();
        assert_eq!(part, vec![vec![0], vec![1], vec![2]]);
    }
}
