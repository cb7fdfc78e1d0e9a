//! Subgroup probes: elementary abelian ranks, metacyclic witnesses and the
//! sectional 2-rank.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::group::Group;
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgroupError {
    #[error("Sylow 2-subgroup of order {order} exceeds cap {cap}")]
    CapExceeded { order: usize, cap: usize },
}

/// An elementary abelian `p`-subgroup given by independent generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EAWitness {
    pub p: u64,
    pub rank: usize,
    #[serde(serialize_with = "ser_perms")]
    pub generators: Vec<Perm>,
}

impl EAWitness {
    pub fn subgroup(&self, degree: usize) -> Group {
        Group::closure(degree, &self.generators, usize::MAX).expect("uncapped")
    }

    /// Generated subgroup has order `p^rank` and exponent `p`, and the
    /// generators commute.
    pub fn validate(&self, degree: usize) -> bool {
        let commute = self
            .generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a.commutes_with(b)));
        let h = self.subgroup(degree);
        commute
            && h.order() as u64 == self.p.pow(self.rank as u32)
            && h.elements().iter().all(|e| e.order() == 1 || e.order() == self.p)
    }
}

/// `a` of order `p` and `b` normalizing `<a>` with `b a b^-1 = a^t`
/// (as maps, `b^-1` applied first); `t` has multiplicative order `q` mod `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetacyclicWitness {
    pub p: u64,
    pub q: u64,
    #[serde(serialize_with = "ser_perm")]
    pub a: Perm,
    #[serde(serialize_with = "ser_perm")]
    pub b: Perm,
    pub t: u64,
    pub b_order: u64,
}

impl MetacyclicWitness {
    pub fn validate(&self) -> bool {
        self.a.order() == self.p
            && self.b.order() == self.b_order
            && self.b.inverse().compose(&self.a).compose(&self.b) == self.a.pow(self.t as i64)
            && multiplicative_order(self.t, self.p) == Some(self.q)
    }

    /// Order of the subgroup `<a, b>`; equals `p * b_order` since `t != 1`.
    pub fn generated_order(&self) -> usize {
        let deg = self.a.degree();
        Group::closure(deg, &[self.a.clone(), self.b.clone()], usize::MAX)
            .expect("uncapped")
            .order()
    }
}

fn ser_perm<S: serde::Serializer>(p: &Perm, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn ser_perms<S: serde::Serializer>(ps: &[Perm], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ps.iter().map(|p| p.to_string()))
}

pub fn multiplicative_order(t: u64, p: u64) -> Option<u64> {
    if p < 2 || t % p == 0 {
        return None;
    }
    let mut x = t % p;
    let mut k = 1;
    while x != 1 {
        x = x * t % p;
        k += 1;
        if k > p {
            return None;
        }
    }
    Some(k)
}

/// Whether the multiplier `t` is compatible with an orientation-preserving
/// action on a homology sphere: `t = ±1 (mod p)` for dimension 3 and
/// `t^2 = ±1 (mod p)` for dimension 4.
pub fn multiplier_admissible(t: u64, p: u64, sphere_dim: u32) -> bool {
    let x = match sphere_dim {
        3 => t % p,
        _ => t * t % p,
    };
    x == 1 % p || x == p - 1
}

/// Multiplication on a small group by element index, with a Cayley table
/// when affordable.
pub(crate) struct TableGroup<'a> {
    group: &'a Group,
    table: Option<Vec<u16>>,
    orders: Vec<u64>,
}

const TABLE_LIMIT: usize = 1024;

impl<'a> TableGroup<'a> {
    pub(crate) fn new(group: &'a Group) -> Self {
        let n = group.order();
        let els = group.elements();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in els {
                for b in els {
                    t.push(group.index_of(&a.compose(b)).unwrap() as u16);
                }
            }
            t
        });
        TableGroup { group, table, orders: els.iter().map(|e| e.order()).collect() }
    }

    pub(crate) fn len(&self) -> usize {
        self.orders.len()
    }

    pub(crate) fn mul(&self, i: usize, j: usize) -> usize {
        match &self.table {
            Some(t) => t[i * self.len() + j] as usize,
            None => {
                let els = self.group.elements();
                self.group.index_of(&els[i].compose(&els[j])).unwrap()
            }
        }
    }

    pub(crate) fn order_of(&self, i: usize) -> u64 {
        self.orders[i]
    }

    pub(crate) fn perm(&self, i: usize) -> &Perm {
        &self.group.elements()[i]
    }

    pub(crate) fn commute(&self, i: usize, j: usize) -> bool {
        self.mul(i, j) == self.mul(j, i)
    }

    /// Subgroup generated by `gens`, as a sorted index list.
    pub(crate) fn span(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut list = vec![0];
        let mut i = 0;
        while i < list.len() {
            for &g in gens {
                let y = self.mul(list[i], g);
                if !seen[y] {
                    seen[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }
}

struct EaSearch<'a> {
    t: TableGroup<'a>,
    p: u64,
    omega: Vec<usize>,
    best: usize,
    best_gens: Vec<usize>,
    found: Vec<(Vec<usize>, Vec<usize>)>,
    visited: HashSet<Vec<usize>>,
    collect: bool,
}

impl EaSearch<'_> {
    fn bound(&self, elems: &[usize], cand: &[usize]) -> usize {
        let total = (elems.len() + cand.len()) as u64;
        let mut k = 0;
        let mut pk = self.p;
        while pk <= total {
            k += 1;
            pk *= self.p;
        }
        k
    }

    fn dfs(&mut self, gens: &mut Vec<usize>, elems: Vec<usize>, cand: Vec<usize>) {
        let rank = gens.len();
        if rank > self.best {
            self.best = rank;
            self.best_gens = gens.clone();
            self.found.clear();
        }
        if self.collect && rank == self.best && rank > 0 {
            self.found.push((elems.clone(), gens.clone()));
        }
        let b = self.bound(&elems, &cand);
        if b < self.best || (!self.collect && b == self.best) {
            return;
        }
        // every candidate is tried: the visited set keeps each subgroup to a
        // single expansion with its full centralizing candidate list
        for &x in &cand {
            gens.push(x);
            let next = self.t.span(gens);
            if self.visited.insert(next.clone()) {
                let in_next: HashSet<usize> = next.iter().copied().collect();
                let next_cand: Vec<usize> = cand
                    .iter()
                    .copied()
                    .filter(|&y| !in_next.contains(&y) && self.t.commute(x, y))
                    .collect();
                self.dfs(gens, next, next_cand);
            }
            gens.pop();
        }
    }
}

fn ea_search(sylow: &Group, p: u64, collect: bool) -> EaSearch<'_> {
    let t = TableGroup::new(sylow);
    let omega: Vec<usize> = (0..t.len()).filter(|&i| t.order_of(i) == p).collect();
    let mut s = EaSearch {
        t,
        p,
        omega: omega.clone(),
        best: 0,
        best_gens: Vec::new(),
        found: Vec::new(),
        visited: HashSet::new(),
        collect,
    };
    s.dfs(&mut Vec::new(), vec![0], omega);
    s
}

/// Maximal rank of an elementary abelian `p`-subgroup, searched inside one
/// Sylow `p`-subgroup.
pub fn max_ea_rank(g: &Group, p: u64) -> (usize, EAWitness) {
    let sylow = g.sylow(p);
    let s = ea_search(&sylow, p, false);
    debug_assert!(s.omega.len() + 1 >= s.best);
    let generators = s.best_gens.iter().map(|&i| s.t.perm(i).clone()).collect();
    (s.best, EAWitness { p, rank: s.best, generators })
}

/// Elementary abelian subgroups of maximal rank up to `G`-conjugacy, at most
/// `limit` of them, ordered by their element lists.
pub fn max_rank_ea_subgroups(g: &Group, p: u64, limit: usize) -> Vec<EAWitness> {
    let sylow = g.sylow(p);
    let s = ea_search(&sylow, p, true);
    if s.best == 0 {
        return Vec::new();
    }
    let mut found = s.found.clone();
    found.sort();
    found.dedup_by(|a, b| a.0 == b.0);
    let subs: Vec<Group> = found
        .iter()
        .map(|(_, gens)| {
            let perms: Vec<Perm> = gens.iter().map(|&i| s.t.perm(i).clone()).collect();
            Group::closure(g.degree(), &perms, usize::MAX).unwrap()
        })
        .collect();
    let classes = g.subgroup_conjugacy_partition(&subs).expect("subgroups of g");
    classes
        .iter()
        .take(limit)
        .map(|c| {
            let gens = &found[c[0]].1;
            EAWitness { p, rank: s.best, generators: gens.iter().map(|&i| s.t.perm(i).clone()).collect() }
        })
        .collect()
}

/// Metacyclic witnesses `H(p:q)`, one per `G`-class of subgroups of order `p`
/// and per inverse pair `{t, t^-1}` of multipliers of order exactly `q`.
/// The reported `t` is the smaller of the pair; `b` has minimal order among
/// normalizing elements inducing it.
pub fn find_metacyclic(g: &Group, p: u64, q: u64) -> Vec<MetacyclicWitness> {
    if q < 2 || g.order() as u64 % p != 0 {
        return Vec::new();
    }
    let classes = g.conj_classes();
    let class_of: HashMap<&Perm, usize> = classes
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| c.members.iter().map(move |&m| (&g.elements()[m], ci)))
        .collect();
    let mut covered = vec![false; classes.len()];
    let mut out = Vec::new();
    for (ci, class) in classes.iter().enumerate() {
        let a = &class.representative;
        if covered[ci] || a.order() != p {
            continue;
        }
        let mut powers: HashMap<Perm, u64> = HashMap::new();
        let mut x = a.clone();
        for i in 1..p {
            covered[class_of[&x]] = true;
            powers.insert(x.clone(), i);
            x = x.compose(a);
        }
        let cyc = g.cyclic_subgroup(a);
        let norm = g.normalizer(&cyc).expect("subgroup");
        // multiplier -> chosen b
        let mut best: HashMap<u64, &Perm> = HashMap::new();
        for b in norm.elements() {
            let t = powers[&b.inverse().compose(a).compose(b)];
            if multiplicative_order(t, p) != Some(q) {
                continue;
            }
            match best.get(&t) {
                Some(cur) if (cur.order(), *cur) <= (b.order(), b) => {}
                _ => {
                    best.insert(t, b);
                }
            }
        }
        let mut ts: Vec<u64> = best.keys().copied().collect();
        ts.sort_unstable();
        for t in ts {
            let tinv = (1..p).find(|&s| s * t % p == 1).unwrap();
            if tinv < t {
                continue;
            }
            let b = best[&t].clone();
            out.push(MetacyclicWitness { p, q, a: a.clone(), b_order: b.order(), b, t });
        }
    }
    out
}

/// All metacyclic witnesses over odd primes `p` dividing `|G|` and every
/// multiplier order `q >= 2` dividing `p - 1`.
pub fn all_metacyclic(g: &Group) -> Vec<MetacyclicWitness> {
    let mut out = Vec::new();
    for p in g.primes() {
        if p == 2 {
            continue;
        }
        for q in 2..p {
            if (p - 1) % q == 0 {
                out.extend(find_metacyclic(g, p, q));
            }
        }
    }
    out
}

/// Largest minimal generator count over subgroups of a Sylow 2-subgroup.
/// For a 2-group `U` this is `log2 |U / <U^2>|`, and quotients never need
/// more generators than the subgroup, so this is the sectional 2-rank.
pub fn sectional_2_rank(g: &Group, two_group_cap: usize) -> Result<usize, SubgroupError> {
    let s = g.sylow(2);
    if s.order() > two_group_cap {
        return Err(SubgroupError::CapExceeded { order: s.order(), cap: two_group_cap });
    }
    let t = TableGroup::new(&s);
    let n = t.len();
    let frattini_rank = |elems: &[usize]| -> usize {
        let squares: Vec<usize> = elems.iter().map(|&e| t.mul(e, e)).collect();
        let sq = t.span(&squares);
        (elems.len() / sq.len()).trailing_zeros() as usize
    };
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = vec![(vec![0usize], Vec::<usize>::new())];
    seen.insert(vec![0]);
    let mut best = 0;
    let mut i = 0;
    while i < queue.len() {
        let (elems, gens) = queue[i].clone();
        best = best.max(frattini_rank(&elems));
        let inside: HashSet<usize> = elems.iter().copied().collect();
        for x in 0..n {
            if inside.contains(&x) {
                continue;
            }
            let mut g2 = gens.clone();
            g2.push(x);
            let v = t.span(&g2);
            if seen.insert(v.clone()) {
                queue.push((v, g2));
            }
        }
        i += 1;
    }
    Ok(best)
}
