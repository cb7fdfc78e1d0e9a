use std::collections::HashMap;

use thiserror::Error;

use super::spec::{GroupSpec, SpecError};
use crate::gf::{prime_power, FieldSpec, GfError};
use crate::group::{Caps, Group, GroupError};
use crate::perm::{Perm, PermError, MAX_DEGREE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("parameter error: {0}")]
    Parameter(String),
}

impl BuildError {
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            BuildError::Group(GroupError::CapExceeded { .. })
                | BuildError::Group(GroupError::DegreeCapExceeded { .. })
        )
    }
}

/// Field arithmetic on element codes, with tables for small fields.
pub(crate) struct CodeField {
    spec: FieldSpec,
    q: u32,
    mul_table: Option<Vec<u32>>,
    add_table: Option<Vec<u32>>,
}

impl CodeField {
    pub(crate) fn new(q: u32) -> Result<CodeField, BuildError> {
        let (p, n) = prime_power(q as u64).ok_or_else(|| BuildError::Parameter(format!("{q} is not a prime power")))?;
        let spec = FieldSpec::new(p, n)?;
        let mut f = CodeField { spec, q, mul_table: None, add_table: None };
        if q <= 256 {
            let mut mt = vec![0; (q * q) as usize];
            let mut at = vec![0; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    mt[(a * q + b) as usize] = f.mul_slow(a, b);
                    at[(a * q + b) as usize] = f.add_slow(a, b);
                }
            }
            f.mul_table = Some(mt);
            f.add_table = Some(at);
        }
        Ok(f)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let s = &self.spec;
        s.code(&s.mul(&s.from_code(a), &s.from_code(b)).unwrap())
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let s = &self.spec;
        s.code(&s.add(&s.from_code(a), &s.from_code(b)).unwrap())
    }

    pub(crate) fn size(&self) -> u32 {
        self.q
    }

    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.add_slow(a, b),
        }
    }

    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul_table {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.mul_slow(a, b),
        }
    }

    pub(crate) fn neg(&self, a: u32) -> u32 {
        let s = &self.spec;
        s.code(&s.neg(&s.from_code(a)).unwrap())
    }

    pub(crate) fn inv(&self, a: u32) -> u32 {
        let s = &self.spec;
        s.code(&s.inv(&s.from_code(a)).expect("nonzero"))
    }

    pub(crate) fn pow(&self, a: u32, k: i64) -> u32 {
        let s = &self.spec;
        s.code(&s.pow(&s.from_code(a), k).expect("nonzero or nonnegative power"))
    }

    pub(crate) fn primitive(&self) -> u32 {
        self.spec.code(&self.spec.primitive())
    }

    pub(crate) fn basis(&self) -> Vec<u32> {
        self.spec.additive_basis().iter().map(|e| self.spec.code(e)).collect()
    }
}

type Matrix = Vec<Vec<u32>>;

/// Row vector times matrix.
fn vec_mat(f: &CodeField, v: &[u32], m: &Matrix) -> Vec<u32> {
    (0..m[0].len())
        .map(|j| v.iter().zip(m).fold(0, |acc, (&x, row)| f.add(acc, f.mul(x, row[j]))))
        .collect()
}

/// Scales a nonzero vector so its first nonzero coordinate is 1.
fn normalize(f: &CodeField, v: &[u32]) -> Vec<u32> {
    let lead = *v.iter().find(|&&x| x != 0).expect("nonzero vector");
    let inv = f.inv(lead);
    v.iter().map(|&x| f.mul(x, inv)).collect()
}

fn identity_matrix(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect()
}

/// Points of the projective space of dimension `n - 1`, normalized, in
/// lexicographic order.
fn projective_points(f: &CodeField, n: usize) -> Vec<Vec<u32>> {
    let q = f.size();
    let mut pts = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        for code in 0..q.pow(free as u32) {
            let mut v = vec![0; n];
            v[lead] = 1;
            let mut c = code;
            for j in (lead + 1..n).rev() {
                v[j] = c % q;
                c /= q;
            }
            pts.push(v);
        }
    }
    pts
}

/// Permutation group induced by matrices on normalized projective points.
fn projective_action(f: &CodeField, mats: &[Matrix], pts: &[Vec<u32>], cap: usize) -> Result<Group, BuildError> {
    let index: HashMap<&Vec<u32>, usize> = pts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let gens = mats
        .iter()
        .map(|m| {
            let images: Vec<usize> = pts.iter().map(|p| index[&normalize(f, &vec_mat(f, p, m))]).collect();
            Perm::from_images(&images)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Group::closure(pts.len(), &gens, cap)?)
}

fn check_degree(degree: u64) -> Result<(), BuildError> {
    if degree > MAX_DEGREE as u64 {
        return Err(GroupError::DegreeCapExceeded { degree: degree as usize, cap: MAX_DEGREE }.into());
    }
    Ok(())
}

fn sl2_generators(f: &CodeField) -> Vec<Matrix> {
    let x = f.primitive();
    let mut mats: Vec<Matrix> = f.basis().into_iter().map(|b| vec![vec![1, b], vec![0, 1]]).collect();
    mats.push(vec![vec![x, 0], vec![0, f.inv(x)]]);
    mats.push(vec![vec![0, 1], vec![f.neg(1), 0]]);
    mats
}

/// The projective line with `[a:1]` at index `code(a)` and `[1:0]` at `q`.
fn projective_line(f: &CodeField) -> Vec<Vec<u32>> {
    let q = f.size();
    let mut pts: Vec<Vec<u32>> = (0..q).map(|a| vec![a, 1]).collect();
    pts.push(vec![1, 0]);
    pts
}

fn line_action(f: &CodeField, mats: &[Matrix], cap: usize) -> Result<Group, BuildError> {
    let q = f.size();
    let pts = projective_line(f);
    let point_index = |v: &[u32]| -> usize {
        if v[1] == 0 {
            q as usize
        } else {
            f.mul(v[0], f.inv(v[1])) as usize
        }
    };
    let gens = mats
        .iter()
        .map(|m| {
            let images: Vec<usize> = pts.iter().map(|p| point_index(&vec_mat(f, p, m))).collect();
            Perm::from_images(&images)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Group::closure(pts.len(), &gens, cap)?)
}

pub fn psl2(q: u32, cap: usize) -> Result<Group, BuildError> {
    let f = CodeField::new(q)?;
    Ok(line_action(&f, &sl2_generators(&f), cap)?.with_name(format!("PSL2({q})")))
}

pub fn pgl2(q: u32, cap: usize) -> Result<Group, BuildError> {
    let f = CodeField::new(q)?;
    let mut mats = sl2_generators(&f);
    mats.push(vec![vec![f.primitive(), 0], vec![0, 1]]);
    Ok(line_action(&f, &mats, cap)?.with_name(format!("PGL2({q})")))
}

/// SL(2,q) on the `q^2 - 1` nonzero row vectors; `(a,b)` has index
/// `code(a) + q*code(b) - 1`.
pub fn sl2(q: u32, cap: usize) -> Result<Group, BuildError> {
    let f = CodeField::new(q)?;
    check_degree(q as u64 * q as u64 - 1)?;
    let index = |v: &[u32]| (v[0] + q * v[1]) as usize - 1;
    let vecs: Vec<Vec<u32>> = (1..q * q).map(|c| vec![c % q, c / q]).collect();
    let gens = sl2_generators(&f)
        .iter()
        .map(|m| {
            let images: Vec<usize> = vecs.iter().map(|v| index(&vec_mat(&f, v, m))).collect();
            Perm::from_images(&images)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Group::closure(vecs.len(), &gens, cap)?.with_name(format!("SL2({q})")))
}

/// PSL(3,q) on the `q^2 + q + 1` projective points, generated by the
/// elementary transvections.
pub fn psl3(q: u32, cap: usize) -> Result<Group, BuildError> {
    let f = CodeField::new(q)?;
    check_degree(q as u64 * q as u64 + q as u64 + 1)?;
    let mut mats = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            for b in f.basis() {
                let mut m = identity_matrix(3);
                m[i][j] = b;
                mats.push(m);
            }
        }
    }
    let pts = projective_points(&f, 3);
    Ok(projective_action(&f, &mats, &pts, cap)?.with_name(format!("PSL3({q})")))
}

/// Sz(8) on the 65 points of the Suzuki ovoid in PG(3,8), obtained as the
/// orbit of `[0:0:0:1]`.
pub fn sz8(cap: usize) -> Result<Group, BuildError> {
    let f = CodeField::new(8)?;
    let th = |a: u32| f.pow(a, 4);
    let sq = |a: u32| f.mul(a, a);
    let t = |a: u32, b: u32| -> Matrix {
        let r3 = [
            f.add(f.add(f.mul(sq(a), th(a)), f.mul(a, b)), th(b)),
            f.add(f.mul(a, th(a)), b),
            a,
            1,
        ];
        vec![vec![1, 0, 0, 0], vec![a, 1, 0, 0], vec![b, th(a), 1, 0], r3.to_vec()]
    };
    let d = |k: u32| -> Matrix {
        let e = [f.pow(k, 3), f.pow(k, 2), f.pow(k, 5), f.pow(k, 4)];
        (0..4).map(|i| (0..4).map(|j| if i == j { e[i] } else { 0 }).collect()).collect()
    };
    let w: Matrix = (0..4).map(|i| (0..4).map(|j| u32::from(i + j == 3)).collect()).collect();
    let mats = vec![t(1, 0), t(0, 1), t(2, 0), t(0, 2), t(4, 0), t(0, 4), d(2), w];
    let start = vec![0, 0, 0, 1];
    let mut pts = vec![start.clone()];
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::from([(start, 0)]);
    let mut i = 0;
    while i < pts.len() {
        for m in &mats {
            let img = normalize(&f, &vec_mat(&f, &pts[i], m));
            if !seen.contains_key(&img) {
                seen.insert(img.clone(), pts.len());
                pts.push(img);
            }
        }
        i += 1;
    }
    pts.sort();
    Ok(projective_action(&f, &mats, &pts, cap)?.with_name("Sz(8)"))
}

/// `(0,1,2)` and an even long cycle.
pub(crate) fn alternating_gens(n: usize) -> Vec<Perm> {
    let mut gens = Vec::new();
    if n >= 3 {
        gens.push(Perm::from_cycles(n, &[[0, 1, 2]]).unwrap());
        let cyc: Vec<usize> = if n % 2 == 1 { (0..n).collect() } else { (1..n).collect() };
        gens.push(Perm::from_cycles(n, &[cyc]).unwrap());
    }
    gens
}

pub(crate) fn symmetric_gens(n: usize) -> Vec<Perm> {
    let cyc: Vec<usize> = (0..n).collect();
    vec![Perm::from_cycles(n, &[[0, 1]]).unwrap(), Perm::from_cycles(n, &[cyc]).unwrap()]
}

pub fn alternating(n: usize, cap: usize) -> Result<Group, BuildError> {
    Ok(Group::closure(n, &alternating_gens(n), cap)?.with_name(format!("Alt({n})")))
}

pub fn symmetric(n: usize, cap: usize) -> Result<Group, BuildError> {
    Ok(Group::closure(n, &symmetric_gens(n), cap)?.with_name(format!("Sym({n})")))
}

/// `k` disjoint `p`-cycles.
pub fn elementary_abelian(p: u32, k: u32, cap: usize) -> Result<Group, BuildError> {
    let (p, k) = (p as usize, k as usize);
    let gens = (0..k)
        .map(|i| Perm::from_cycles(p * k, &[((i * p)..((i + 1) * p)).collect::<Vec<_>>()]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Group::closure(p * k, &gens, cap)?.with_name(format!("EA({p},{k})")))
}

/// `Z_p` on points `0..p`, with `b` acting as `x -> t x` there and as a
/// `q`-cycle on `p..p+q`, so that `b^-1 a b = a^t`.
pub fn metacyclic(p: u32, q: u32, t: u32, cap: usize) -> Result<Group, BuildError> {
    let (p, q, t) = (p as usize, q as usize, t as usize);
    let deg = p + q;
    let a_images: Vec<usize> = (0..deg).map(|x| if x < p { (x + 1) % p } else { x }).collect();
    let b_images: Vec<usize> = (0..deg)
        .map(|x| if x < p { x * t % p } else { p + (x - p + 1) % q })
        .collect();
    let gens = vec![Perm::from_images(&a_images)?, Perm::from_images(&b_images)?];
    Ok(Group::closure(deg, &gens, cap)?.with_name(format!("Meta({p},{q},{t})")))
}

/// Image of a signed coordinate permutation on the `2n` points
/// `2i = +e_i`, `2i + 1 = -e_i`.
fn signed_perm(n: usize, perm: &[usize], flips: &[usize]) -> Perm {
    let mut images = vec![0usize; 2 * n];
    for i in 0..n {
        let s = usize::from(flips.contains(&i));
        images[2 * i] = 2 * perm[i] + s;
        images[2 * i + 1] = 2 * perm[i] + 1 - s;
    }
    Perm::from_images(&images).expect("signed permutation")
}

pub(crate) fn signed_even_gens(n: usize) -> Vec<Perm> {
    let id: Vec<usize> = (0..n).collect();
    let mut swap = id.clone();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let cycle_flips: Vec<usize> = if n % 2 == 0 { vec![0] } else { vec![] };
    vec![
        signed_perm(n, &id, &[0, 1]),
        signed_perm(n, &swap, &[0]),
        signed_perm(n, &cycle, &cycle_flips),
    ]
}

/// Signed permutation matrices of determinant one, acting on `±e_i`.
pub fn signed_even(n: usize, cap: usize) -> Result<Group, BuildError> {
    let gens = signed_even_gens(n);
    Ok(Group::closure(2 * n, &gens, cap)?.with_name(format!("SignedEven({n})")))
}

pub fn direct_product(a: &Group, b: &Group, cap: usize) -> Result<Group, BuildError> {
    let deg = a.degree() + b.degree();
    let mut gens: Vec<Perm> = a.generators().iter().map(|g| g.shifted(0, deg)).collect();
    gens.extend(b.generators().iter().map(|g| g.shifted(a.degree(), deg)));
    Ok(Group::closure(deg, &gens, cap)?)
}

fn unique_central_involution(g: &Group) -> Result<Perm, BuildError> {
    let invs: Vec<Perm> = g.center().elements().iter().filter(|z| z.order() == 2).cloned().collect();
    match invs.as_slice() {
        [z] => Ok(z.clone()),
        _ => Err(BuildError::Parameter(format!(
            "{} has {} central involutions, expected exactly one",
            g.label(),
            invs.len()
        ))),
    }
}

/// `A x B` modulo the product of the central involutions of the factors.
pub fn central_product(a: &Group, b: &Group, caps: &Caps) -> Result<Group, BuildError> {
    let za = unique_central_involution(a)?;
    let zb = unique_central_involution(b)?;
    let d = direct_product(a, b, caps.order_cap)?;
    let deg = d.degree();
    let z = za.shifted(0, deg).compose(&zb.shifted(a.degree(), deg));
    let n = d.cyclic_subgroup(&z);
    Ok(d.quotient(&n, caps.degree_cap)?.into_group())
}

/// Builds the permutation representation described in the crate docs for
/// each family.
pub fn build(spec: &GroupSpec, caps: &Caps) -> Result<Group, BuildError> {
    spec.validate()?;
    let cap = caps.order_cap;
    use GroupSpec::*;
    let g = match spec {
        Psl2(q) => psl2(*q, cap)?,
        Sl2(q) => sl2(*q, cap)?,
        Pgl2(q) => pgl2(*q, cap)?,
        Psl3(q) => psl3(*q, cap)?,
        Alt(n) => alternating(*n, cap)?,
        Sym(n) => symmetric(*n, cap)?,
        Ea { p, k } => elementary_abelian(*p, *k, cap)?,
        Meta { p, q, t } => metacyclic(*p, *q, *t, cap)?,
        Sz(_) => sz8(cap)?,
        SignedEven(n) => signed_even(*n, cap)?,
        DirProd(a, b) => direct_product(&build(a, caps)?, &build(b, caps)?, cap)?,
        CentProd(a, b) => central_product(&build(a, caps)?, &build(b, caps)?, caps)?,
        Perms(gens) => {
            let deg = GroupSpec::perms_degree(gens);
            let perms = gens
                .iter()
                .map(|c| Perm::from_cycles(deg, c))
                .collect::<Result<Vec<_>, _>>()?;
            Group::closure(deg, &perms, cap)?
        }
    };
    if g.degree() > caps.degree_cap {
        return Err(GroupError::DegreeCapExceeded { degree: g.degree(), cap: caps.degree_cap }.into());
    }
    Ok(g.with_name(spec.to_string()))
}

/// Parses and builds in one step.
pub fn build_str(text: &str, caps: &Caps) -> Result<Group, BuildError> {
    build(&GroupSpec::parse(text)?, caps)
}
