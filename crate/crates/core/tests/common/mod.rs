//! Shared test oracles.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use spheregate::group::Group;
use spheregate::perm::Perm;

pub type Solution = BTreeMap<Vec<u32>, i32>;

/// Brute-force dimension-function solver on the subgroup lattice of
/// `(Z_p)^k`. Subgroups are found by spanning every set of at most `k`
/// vectors, values are tried exhaustively level by level, and every
/// constraint is checked straight from its definition.
pub struct Oracle {
    pub p: u32,
    pub k: usize,
    /// subgroups as sorted vector-code sets, ordered by size
    pub subs: Vec<Vec<u32>>,
}

impl Oracle {
    pub fn new(p: u32, k: usize) -> Oracle {
        let n = p.pow(k as u32);
        let mut found: BTreeSet<Vec<u32>> = BTreeSet::new();
        let mut stack: Vec<Vec<u32>> = vec![vec![]];
        while let Some(gens) = stack.pop() {
            found.insert(Self::span(p, k, &gens));
            if gens.len() < k {
                let start = gens.last().map_or(1, |&g| g + 1);
                for v in start..n {
                    let mut g2 = gens.clone();
                    g2.push(v);
                    stack.push(g2);
                }
            }
        }
        let mut subs: Vec<Vec<u32>> = found.into_iter().collect();
        subs.sort_by_key(|s| s.len());
        Oracle { p, k, subs }
    }

    fn add(p: u32, k: usize, a: u32, b: u32) -> u32 {
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..k {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    fn span(p: u32, k: usize, gens: &[u32]) -> Vec<u32> {
        let mut set: BTreeSet<u32> = BTreeSet::from([0]);
        loop {
            let mut next = set.clone();
            for &x in &set {
                for &g in gens {
                    next.insert(Self::add(p, k, x, g));
                }
            }
            if next.len() == set.len() {
                return set.into_iter().collect();
            }
            set = next;
        }
    }

    fn subset(a: &[u32], b: &[u32]) -> bool {
        a.iter().all(|x| b.binary_search(x).is_ok())
    }

    fn descent_ok(&self, v: i32) -> bool {
        let (s2, s3) = if self.p == 2 { (3, 3) } else { (1, 2) };
        match v {
            2 => self.k <= 1 + s2,
            0 => self.k <= s3 + usize::from(self.p == 2),
            _ => true,
        }
    }

    /// `color[i]` labels subgroup `i`; equal labels force equal values.
    pub fn solve(&self, m: i32, top: &[i32], descent: bool, color: &[usize]) -> BTreeSet<Solution> {
        let mut vals = vec![0i32; self.subs.len()];
        let mut out = BTreeSet::new();
        self.go(0, m, top, descent, color, &mut vals, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn go(&self, i: usize, m: i32, top: &[i32], descent: bool, color: &[usize], vals: &mut Vec<i32>, out: &mut BTreeSet<Solution>) {
        if i == self.subs.len() {
            out.insert(self.subs.iter().cloned().zip(vals.iter().copied()).collect());
            return;
        }
        let size = self.subs[i].len() as u32;
        let candidates: Vec<i32> = if size == 1 {
            vec![m]
        } else if size == self.p {
            top.to_vec()
        } else {
            (-1..m).collect()
        };
        for v in candidates {
            if size == self.p && descent && !self.descent_ok(v) {
                continue;
            }
            vals[i] = v;
            if self.consistent(i, m, color, vals) {
                self.go(i + 1, m, top, descent, color, vals, out);
            }
        }
    }

    /// Constraints whose subgroups are all assigned once `c` is.
    fn consistent(&self, c: usize, m: i32, color: &[usize], vals: &[i32]) -> bool {
        let sc = &self.subs[c];
        if sc.len() > 1 && (vals[c] < -1 || vals[c] > m - 1) {
            return false;
        }
        for j in 0..c {
            if color[j] == color[c] && vals[j] != vals[c] {
                return false;
            }
        }
        for b in 0..c {
            let sb = &self.subs[b];
            if sb.len() >= sc.len() || !Self::subset(sb, sc) {
                continue;
            }
            if vals[b] < vals[c] {
                return false;
            }
            let sum: i32 = (0..c)
                .filter(|&h| {
                    let sh = &self.subs[h];
                    sh.len() as u32 * self.p == sc.len() as u32 && Self::subset(sb, sh) && Self::subset(sh, sc)
                })
                .map(|h| vals[h] - vals[c])
                .sum();
            if vals[b] - vals[c] != sum {
                return false;
            }
        }
        true
    }
}

/// Parses cycle notation such as `(0,1,2)(3,4)` or `()`.
pub fn parse_perm(s: &str, degree: usize) -> Perm {
    let mut images: Vec<usize> = (0..degree).collect();
    for cyc in s.split(')').filter(|c| c.len() > 1) {
        let pts: Vec<usize> = cyc.trim_start_matches('(').split(',').map(|x| x.trim().parse().unwrap()).collect();
        for i in 0..pts.len() {
            images[pts[i]] = pts[(i + 1) % pts.len()];
        }
    }
    Perm::from_images(&images).unwrap()
}

/// Labels subgroups (given as element lists) by `G`-conjugacy using
/// explicit conjugation by every element of `G`.
pub fn naive_conjugacy_labels(g: &Group, subs: &[Vec<Perm>]) -> Vec<usize> {
    let index: BTreeMap<Vec<Perm>, usize> = subs.iter().enumerate().map(|(i, s)| {
        let mut s = s.clone();
        s.sort();
        (s, i)
    }).collect();
    let mut label: Vec<usize> = (0..subs.len()).collect();
    for i in 0..subs.len() {
        if label[i] != i {
            continue;
        }
        for x in g.elements() {
            let mut conj: Vec<Perm> = subs[i].iter().map(|h| x.inverse().compose(h).compose(x)).collect();
            conj.sort();
            if let Some(&j) = index.get(&conj) {
                if label[j] == j && j > i {
                    label[j] = i;
                }
            }
        }
    }
    label
}

/// Validates `instance` against `schemas/<name>.schema.json`.
pub fn assert_schema(name: &str, instance: &serde_json::Value) {
    let path = format!("{}/schemas/{name}.schema.json", env!("CARGO_MANIFEST_DIR"));
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    if let Err(errors) = compiled.validate(instance) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{name} schema violations: {msgs:#?}");
    };
}
