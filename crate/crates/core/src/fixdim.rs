//! Fixed-point dimension functions on subgroup lattices of elementary
//! abelian p-groups.
//!
//! A dimension function assigns to every subgroup `H` of `A = (Z_p)^k` the
//! dimension `n(H)` of its fixed set on a homology m-sphere (`-1` for the
//! empty set). The Borel formula is imposed on every interval `B ⊂ C`:
//!
//! ```text
//! n(B) - n(C) = Σ (n(H) - n(C))   over B ⊆ H ⊂ C with [C:H] = p
//! ```
//!
//! With `B` trivial this determines `n(C)` from the values on the maximal
//! subgroups of `C`, so only the cyclic subgroups are searched.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::constructors::model::{fixed_dimension, IntMatrix};
use crate::constructors::LinearModel;
use crate::gf::is_prime;
use crate::group::Group;
use crate::perm::Perm;
use crate::subgroups::EAWitness;

/// Largest lattice (number of subgroups) the engine will build.
pub const MAX_LATTICE_SUBGROUPS: usize = 3000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixdimError {
    #[error("lattice of (Z_{p})^{k} is too large")]
    TooLarge { p: u64, k: usize },
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("invalid elementary abelian witness")]
    WitnessInvalid,
    #[error("model does not match the lattice: {0}")]
    ModelMismatch(String),
}

/// The subgroup lattice of `(Z_p)^k`, with a coloring of subgroups.
///
/// Vectors of `F_p^k` are encoded as integers with coordinate `i` as the
/// base-`p` digit `i`. Subgroups are listed by dimension, then by their
/// sorted vector lists; subgroup 0 is trivial and the last one is `A`.
#[derive(Debug, Clone)]
pub struct EALattice {
    p: u64,
    k: usize,
    subgroups: Vec<Subspace>,
    /// subgroup id -> ids of its maximal subgroups
    hyperplanes: Vec<Vec<usize>>,
    /// subgroup id -> ids of all proper subgroups
    below: Vec<Vec<usize>>,
    colors: Vec<usize>,
    generators: Option<Vec<Perm>>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Subspace {
    dim: usize,
    vectors: Vec<u32>,
    basis: Vec<u32>,
}

fn vec_add(p: u64, a: u32, b: u32) -> u32 {
    let (mut a, mut b) = (a as u64, b as u64);
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out as u32
}

fn span(p: u64, basis: &[u32]) -> Vec<u32> {
    let mut vs = vec![0u32];
    for &b in basis {
        let mut next = Vec::with_capacity(vs.len() * p as usize);
        for &v in &vs {
            let mut cur = v;
            for _ in 0..p {
                next.push(cur);
                cur = vec_add(p, cur, b);
            }
        }
        vs = next;
    }
    vs.sort_unstable();
    vs
}

/// Row-reduced echelon bases of all `d`-dimensional subspaces.
fn rref_bases(p: u64, k: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let pivots_list = combinations(k, d);
    for pivots in pivots_list {
        // free slots: (row, column) with column > pivot[row] and not a pivot
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|r| {
                let pv = pivots.clone();
                (pivots[r] + 1..k).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let total = p.pow(free.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![0u64; k]; d];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][pc] = 1;
            }
            let mut c = code;
            for &(r, col) in &free {
                rows[r][col] = c % p;
                c /= p;
            }
            let basis = rows
                .iter()
                .map(|row| row.iter().rev().fold(0u64, |acc, &x| acc * p + x) as u32)
                .collect();
            out.push(basis);
        }
    }
    out
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

fn gaussian_binomial(p: u64, k: usize, d: usize) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..d {
        num *= p.pow((k - i) as u32) - 1;
        den *= p.pow((i + 1) as u32) - 1;
    }
    num / den
}

impl EALattice {
    /// Full subspace lattice of `F_p^k` with the trivial coloring.
    pub fn abstract_lattice(p: u64, k: usize) -> Result<EALattice, FixdimError> {
        if !is_prime(p) {
            return Err(FixdimError::NonPrime(p));
        }
        let too_large = FixdimError::TooLarge { p, k };
        if k > 5 || p.checked_pow(k as u32).map_or(true, |q| q > 1 << 16) {
            return Err(too_large);
        }
        let count: u64 = (0..=k).map(|d| gaussian_binomial(p, k, d)).sum();
        if count > MAX_LATTICE_SUBGROUPS as u64 {
            return Err(too_large);
        }
        let mut subgroups: Vec<Subspace> = (0..=k)
            .flat_map(|d| {
                rref_bases(p, k, d).into_iter().map(move |basis| Subspace { dim: d, vectors: span(p, &basis), basis })
            })
            .collect();
        subgroups.sort();
        let n = subgroups.len();
        let contains = |outer: &Subspace, inner: &Subspace| {
            inner.basis.iter().all(|b| outer.vectors.binary_search(b).is_ok())
        };
        let mut below = vec![Vec::new(); n];
        let mut hyperplanes = vec![Vec::new(); n];
        for c in 0..n {
            for b in 0..n {
                let (sb, sc) = (&subgroups[b], &subgroups[c]);
                if sb.dim < sc.dim && contains(sc, sb) {
                    below[c].push(b);
                    if sb.dim + 1 == sc.dim {
                        hyperplanes[c].push(b);
                    }
                }
            }
        }
        Ok(EALattice { p, k, subgroups, hyperplanes, below, colors: (0..n).collect(), generators: None })
    }

    /// Lattice of the witness subgroup, colored by `G`-conjugacy.
    pub fn from_group(g: &Group, w: &EAWitness) -> Result<EALattice, FixdimError> {
        if w.generators.len() != w.rank
            || w.generators.iter().any(|x| !g.contains(x))
            || !w.validate(g.degree())
        {
            return Err(FixdimError::WitnessInvalid);
        }
        let mut lat = EALattice::abstract_lattice(w.p, w.rank)?;
        lat.generators = Some(w.generators.clone());
        let subs: Vec<Group> = (0..lat.len())
            .map(|i| {
                let gens: Vec<Perm> = lat.subgroups[i].basis.iter().map(|&v| lat.vector_perm(v)).collect();
                Group::closure(g.degree(), &gens, usize::MAX).unwrap()
            })
            .collect();
        let classes = g.subgroup_conjugacy_partition(&subs).map_err(|_| FixdimError::WitnessInvalid)?;
        for class in classes {
            let c = class[0];
            for &m in &class {
                lat.colors[m] = c;
            }
        }
        Ok(lat)
    }

    /// Replaces the coloring; `colors[i]` is any label, equal labels meaning
    /// one class. Labels are normalized to the first member's id.
    pub fn with_coloring(mut self, colors: &[usize]) -> EALattice {
        assert_eq!(colors.len(), self.len());
        let mut first: HashMap<usize, usize> = HashMap::new();
        for (i, &c) in colors.iter().enumerate() {
            self.colors[i] = *first.entry(c).or_insert(i);
        }
        self
    }

    /// One color per dimension: every pair of subgroups of equal order is
    /// treated as conjugate.
    pub fn uniformly_colored(self) -> EALattice {
        let colors: Vec<usize> = self.subgroups.iter().map(|s| s.dim).collect();
        self.with_coloring(&colors)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self, id: usize) -> usize {
        self.subgroups[id].dim
    }

    pub fn vectors(&self, id: usize) -> &[u32] {
        &self.subgroups[id].vectors
    }

    pub fn basis(&self, id: usize) -> &[u32] {
        &self.subgroups[id].basis
    }

    pub fn top(&self) -> usize {
        self.len() - 1
    }

    pub fn ids_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.dim(i) == d).collect()
    }

    pub fn hyperplanes(&self, id: usize) -> &[usize] {
        &self.hyperplanes[id]
    }

    /// Proper subgroups of `id`.
    pub fn below(&self, id: usize) -> &[usize] {
        &self.below[id]
    }

    pub fn contains(&self, outer: usize, inner: usize) -> bool {
        outer == inner || self.below[outer].binary_search(&inner).is_ok()
    }

    pub fn color(&self, id: usize) -> usize {
        self.colors[id]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// Color classes among subgroups of dimension `d`.
    pub fn color_classes(&self, d: usize) -> Vec<Vec<usize>> {
        let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in self.ids_of_dim(d) {
            m.entry(self.colors[i]).or_default().push(i);
        }
        m.into_values().collect()
    }

    /// Element of the witness subgroup with the given coordinate vector.
    pub fn vector_perm(&self, v: u32) -> Perm {
        let gens = self.generators.as_ref().expect("lattice built from a group");
        let mut x = Perm::identity(gens[0].degree());
        let mut c = v as u64;
        for g in gens {
            x = x.compose(&g.pow((c % self.p) as i64));
            c /= self.p;
        }
        x
    }

    /// Basis elements of a subgroup as permutations (group lattices only).
    pub fn subgroup_generators(&self, id: usize) -> Option<Vec<Perm>> {
        self.generators.as_ref()?;
        Some(self.subgroups[id].basis.iter().map(|&v| self.vector_perm(v)).collect())
    }
}

/// A dimension function: `values[id]` for each subgroup of the lattice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DimFn {
    pub m: i32,
    pub values: Vec<i32>,
}

impl DimFn {
    pub fn value(&self, id: usize) -> i32 {
        self.values[id]
    }

    /// Value on the whole group.
    pub fn r(&self) -> i32 {
        *self.values.last().unwrap()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CspOptions {
    /// Allowed values on nontrivial cyclic subgroups.
    pub top_cyclic_values: BTreeSet<i32>,
    pub use_descent_axioms: bool,
    pub respect_coloring: bool,
}

impl CspOptions {
    /// Orientation-preserving defaults: `{0, 2}` on a 4-sphere and `{-1, 1}`
    /// on a 3-sphere; otherwise every value in `-1..m`.
    pub fn for_sphere(m: i32) -> CspOptions {
        let vals: BTreeSet<i32> = match m {
            4 => [0, 2].into(),
            3 => [-1, 1].into(),
            _ => (-1..m).collect(),
        };
        CspOptions { top_cyclic_values: vals, use_descent_axioms: true, respect_coloring: true }
    }

    pub fn without_descent(mut self) -> CspOptions {
        self.use_descent_axioms = false;
        self
    }

    pub fn ignoring_coloring(mut self) -> CspOptions {
        self.respect_coloring = false;
        self
    }
}

/// 2-sphere rank bound feeding the descent axiom: largest rank of an
/// elementary abelian p-group acting on a 2-sphere.
fn s2_rank(p: u64) -> usize {
    if p == 2 {
        3
    } else {
        1
    }
}

/// Same for homology 3-spheres.
fn s3_rank(p: u64) -> usize {
    if p == 2 {
        3
    } else {
        2
    }
}

/// Whether the descent axioms admit value `v` on a cyclic subgroup of a
/// rank-`k` group: value 2 needs `k <= 1 + s2`, value 0 needs
/// `k <= s3 + [p = 2]`.
pub fn descent_allows(p: u64, k: usize, v: i32) -> bool {
    match v {
        2 => k <= 1 + s2_rank(p),
        0 => k <= s3_rank(p) + usize::from(p == 2),
        _ => true,
    }
}

/// A failed constraint found by [`check_constraints`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ConstraintViolation {
    TrivialValue,
    Borel { lower: usize, upper: usize },
    CyclicValue(usize),
    Monotone { lower: usize, upper: usize },
    Range(usize),
    Coloring { a: usize, b: usize },
    Descent(usize),
}

/// Every violated constraint of a complete assignment, in a fixed order.
pub fn check_constraints(lat: &EALattice, f: &DimFn, opts: &CspOptions) -> Vec<ConstraintViolation> {
    use ConstraintViolation::*;
    let m = f.m;
    let v = &f.values;
    let mut out = Vec::new();
    if v[0] != m {
        out.push(TrivialValue);
    }
    for c in 0..lat.len() {
        for &b in lat.below(c) {
            let sum: i32 = lat
                .hyperplanes(c)
                .iter()
                .filter(|&&h| lat.contains(h, b))
                .map(|&h| v[h] - v[c])
                .sum();
            if v[b] - v[c] != sum {
                out.push(Borel { lower: b, upper: c });
            }
            if v[b] < v[c] {
                out.push(Monotone { lower: b, upper: c });
            }
        }
    }
    for i in 1..lat.len() {
        if v[i] < -1 || v[i] > m - 1 {
            out.push(Range(i));
        }
        if lat.dim(i) == 1 {
            if !opts.top_cyclic_values.contains(&v[i]) {
                out.push(CyclicValue(i));
            }
            if opts.use_descent_axioms && !descent_allows(lat.p, lat.k, v[i]) {
                out.push(Descent(i));
            }
        }
    }
    if opts.respect_coloring {
        for i in 0..lat.len() {
            let c = lat.color(i);
            if c != i && v[c] != v[i] {
                out.push(Coloring { a: c, b: i });
            }
        }
    }
    out
}

struct Search<'a> {
    lat: &'a EALattice,
    m: i32,
    opts: &'a CspOptions,
    cyclic: Vec<usize>,
    /// per cyclic position: higher subgroups completed once it is assigned
    ready: Vec<Vec<usize>>,
    values: Vec<Option<i32>>,
    out: Vec<DimFn>,
}

impl Search<'_> {
    fn color_ok(&self, id: usize, v: i32) -> bool {
        !self.opts.respect_coloring || self.values[self.lat.color(id)].map_or(true, |c| c == v)
    }

    fn set(&mut self, id: usize) -> bool {
        let lat = self.lat;
        let hyp = lat.hyperplanes(id);
        let n = hyp.len() as i32;
        let sum: i32 = hyp.iter().map(|&h| self.values[h].unwrap()).sum();
        if (sum - self.m) % (n - 1) != 0 {
            return false;
        }
        let v = (sum - self.m) / (n - 1);
        if v < -1 || v > self.m - 1 || !self.color_ok(id, v) {
            return false;
        }
        if hyp.iter().any(|&h| self.values[h].unwrap() < v) {
            return false;
        }
        for &b in lat.below(id) {
            if b == 0 || lat.dim(b) + 1 == lat.dim(id) {
                continue;
            }
            let s: i32 = hyp
                .iter()
                .filter(|&&h| lat.contains(h, b))
                .map(|&h| self.values[h].unwrap() - v)
                .sum();
            if self.values[b].unwrap() - v != s {
                return false;
            }
        }
        self.values[id] = Some(v);
        true
    }

    fn go(&mut self, pos: usize) {
        if pos == self.cyclic.len() {
            let values = self.values.iter().map(|v| v.unwrap()).collect();
            self.out.push(DimFn { m: self.m, values });
            return;
        }
        let id = self.cyclic[pos];
        let vals: Vec<i32> = self.opts.top_cyclic_values.iter().copied().collect();
        for v in vals {
            if !self.color_ok(id, v) {
                continue;
            }
            if self.opts.use_descent_axioms && !descent_allows(self.lat.p, self.lat.k, v) {
                continue;
            }
            self.values[id] = Some(v);
            let mut done = Vec::new();
            let mut ok = true;
            for i in 0..self.ready[pos].len() {
                let c = self.ready[pos][i];
                if self.set(c) {
                    done.push(c);
                } else {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.go(pos + 1);
            }
            for c in done {
                self.values[c] = None;
            }
            self.values[id] = None;
        }
    }
}

/// All dimension functions satisfying the Borel identity on every interval,
/// the cyclic value set, monotonicity, the range `-1..=m-1` on nontrivial
/// subgroups, the coloring and (optionally) the descent axioms. Solutions
/// are sorted by their value vectors.
pub fn enumerate_dimfns(lat: &EALattice, m: i32, opts: &CspOptions) -> Vec<DimFn> {
    let cyclic = lat.ids_of_dim(1);
    let pos_of: HashMap<usize, usize> = cyclic.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut ready = vec![Vec::new(); cyclic.len()];
    for c in 0..lat.len() {
        if lat.dim(c) >= 2 {
            let last = lat.below(c).iter().filter(|&&b| lat.dim(b) == 1).map(|b| pos_of[b]).max().unwrap();
            ready[last].push(c);
        }
    }
    for r in &mut ready {
        r.sort_by_key(|&c| (lat.dim(c), c));
    }
    let mut values = vec![None; lat.len()];
    values[0] = Some(m);
    let mut s = Search { lat, m, opts, cyclic, ready, values, out: Vec::new() };
    if lat.rank() == 0 {
        return vec![DimFn { m, values: vec![m] }];
    }
    s.go(0);
    s.out.sort();
    s.out
}

/// For each solution, the number of cyclic subgroups at each value.
pub fn involution_profile(lat: &EALattice, solutions: &[DimFn]) -> Vec<BTreeMap<i32, usize>> {
    let cyclic = lat.ids_of_dim(1);
    solutions
        .iter()
        .map(|f| {
            let mut m = BTreeMap::new();
            for &c in &cyclic {
                *m.entry(f.value(c)).or_insert(0) += 1;
            }
            m
        })
        .collect()
}

/// Feasibility of the Borel formula when all `count` maximal subgroups share
/// one value: `m - r = count (n - r)`, i.e. `m + (count-1) r = count n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniformReport {
    pub equation: String,
    pub m: i32,
    pub subgroup_count: i32,
    pub allowed_n: Vec<i32>,
    pub r_range: (i32, i32),
    /// `(r, n)` pairs solving the equation.
    pub solutions: Vec<(i32, i32)>,
    pub feasible: bool,
}

pub fn uniform_borel_check(m: i32, subgroup_count: i32, allowed_n: &[i32], r_range: (i32, i32)) -> UniformReport {
    assert!(subgroup_count >= 1);
    let mut solutions = Vec::new();
    for r in r_range.0..=r_range.1 {
        for &n in allowed_n {
            if m - r == subgroup_count * (n - r) {
                solutions.push((r, n));
            }
        }
    }
    UniformReport {
        equation: format!("{} + {}r = {} n(H)", m, subgroup_count - 1, subgroup_count),
        m,
        subgroup_count,
        allowed_n: allowed_n.to_vec(),
        r_range,
        feasible: !solutions.is_empty(),
        solutions,
    }
}

/// Dimension function of a linear action: each subgroup maps to the
/// dimension of its common fixed subspace minus one.
pub fn orthogonal_dimfn(model: &LinearModel, lat: &EALattice) -> Result<DimFn, FixdimError> {
    let m = model.dim as i32 - 1;
    let mut values = Vec::with_capacity(lat.len());
    for id in 0..lat.len() {
        let gens = lat
            .subgroup_generators(id)
            .ok_or_else(|| FixdimError::ModelMismatch("lattice has no group elements".into()))?;
        let mats: Vec<IntMatrix> = gens
            .iter()
            .map(|g| model.matrix(g))
            .collect::<Result<_, _>>()
            .map_err(|e| FixdimError::ModelMismatch(e.to_string()))?;
        values.push(fixed_dimension(model.dim, &mats) as i32 - 1);
    }
    Ok(DimFn { m, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_sizes() {
        let l = EALattice::abstract_lattice(2, 2).unwrap();
        assert_eq!(l.ids_of_dim(1).len(), 3);
        assert_eq!(l.ids_of_dim(2).len(), 1);
        assert_eq!(EALattice::abstract_lattice(5, 2).unwrap().ids_of_dim(1).len(), 6);
        assert_eq!(EALattice::abstract_lattice(2, 4).unwrap().ids_of_dim(3).len(), 15);
        assert!(EALattice::abstract_lattice(5, 5).is_err());
        assert!(EALattice::abstract_lattice(4, 2).is_err());
    }

    #[test]
    fn gaussian_counts_up_to_rank_four() {
        for &(p, k) in &[(2u64, 3usize), (2, 4), (3, 3), (3, 4), (5, 3)] {
            let l = EALattice::abstract_lattice(p, k).unwrap();
            for d in 0..=k {
                assert_eq!(l.ids_of_dim(d).len() as u64, gaussian_binomial(p, k, d));
            }
        }
    }

    #[test]
    fn rank_one_base_case() {
        let l = EALattice::abstract_lattice(3, 1).unwrap();
        let sols = enumerate_dimfns(&l, 4, &CspOptions::for_sphere(4));
        assert_eq!(sols, vec![DimFn { m: 4, values: vec![4, 0] }, DimFn { m: 4, values: vec![4, 2] }]);
    }

    #[test]
    fn klein_four_table() {
        let l = EALattice::abstract_lattice(2, 2).unwrap();
        let sols = enumerate_dimfns(&l, 4, &CspOptions::for_sphere(4));
        let mut by_r: BTreeMap<i32, BTreeSet<usize>> = BTreeMap::new();
        for (f, prof) in sols.iter().zip(involution_profile(&l, &sols)) {
            by_r.entry(f.r()).or_default().insert(prof.get(&2).copied().unwrap_or(0));
        }
        let expected: BTreeMap<i32, BTreeSet<usize>> =
            [(-1, [1].into()), (0, [2].into()), (1, [3].into())].into();
        assert_eq!(by_r, expected);
    }

    #[test]
    fn uniform_equations() {
        let r = uniform_borel_check(4, 6, &[0, 2], (-1, 3));
        assert_eq!(r.equation, "4 + 5r = 6 n(H)");
        assert!(!r.feasible);
        assert!(!uniform_borel_check(4, 7, &[0, 1, 2], (-1, 3)).feasible);
        assert!(!uniform_borel_check(4, 15, &[0, 1, 2, 3], (-1, 3)).feasible);
        assert!(uniform_borel_check(4, 3, &[0, 2], (-1, 3)).feasible);
    }

    #[test]
    fn uniform_three_lines_infeasible() {
        let l = EALattice::abstract_lattice(3, 2).unwrap().uniformly_colored();
        assert!(enumerate_dimfns(&l, 4, &CspOptions::for_sphere(4)).is_empty());
    }

    #[test]
    fn descent_bounds() {
        assert!(!descent_allows(3, 3, 0) && !descent_allows(3, 3, 2));
        assert!(descent_allows(2, 4, 0) && descent_allows(2, 4, 2));
        assert!(!descent_allows(2, 5, 0) && !descent_allows(2, 5, 2));
    }
}
