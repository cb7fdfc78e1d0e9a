//! Finite fields `GF(p^n)` with elements stored as coefficient vectors in the
//! polynomial basis `1, x, ..., x^(n-1)`.
//!
//! Fields are small (`q <= 2^16`), so multiplication is schoolbook polynomial
//! multiplication followed by reduction modulo the defining polynomial.

use std::fmt;

use thiserror::Error;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("field of size {p}^{n} exceeds 2^16 elements")]
    TooLarge { p: u32, n: u32 },
    #[error("no irreducible polynomial of degree {n} over GF({p}) found")]
    NoIrreducibleFound { p: u32, n: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands do not belong to the same field")]
    FieldMismatch,
}

/// Conway polynomials (coefficients low to high, monic) for the field sizes
/// whose element labels should agree with other systems.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, n)` with `q = p^n`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let mut rest = q;
    let mut n = 0;
    while rest % p == 0 {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p as u32, n))
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A field element: coordinates in the polynomial basis, each in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    p: u32,
    coeffs: Vec<u32>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// The field `GF(p^n)` with a fixed defining polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    n: u32,
    /// Monic, coefficients low to high, length `n + 1`.
    modulus: Vec<u32>,
}

impl FieldSpec {
    /// Builds `GF(p^n)`. The modulus is the Conway polynomial when one is
    /// tabulated, otherwise the first irreducible monic polynomial when the
    /// lower coefficients are read as a base-`p` integer (constant term least
    /// significant).
    pub fn new(p: u32, n: u32) -> Result<Self, GfError> {
        if !is_prime(p as u64) {
            return Err(GfError::NonPrime(p));
        }
        if n == 0 || (p as u64).checked_pow(n).map_or(true, |q| q > MAX_FIELD_SIZE) {
            return Err(GfError::TooLarge { p, n });
        }
        if let Some((_, _, m)) = CONWAY.iter().find(|(cp, cn, _)| *cp == p && *cn == n) {
            return Ok(FieldSpec { p, n, modulus: m.to_vec() });
        }
        let count = (p as u64).pow(n);
        for code in 0..count {
            let mut m = digits(code, p, n as usize);
            m.push(1);
            if is_irreducible(&m, p) {
                return Ok(FieldSpec { p, n, modulus: m });
            }
        }
        Err(GfError::NoIrreducibleFound { p, n })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u32 {
        self.p.pow(self.n)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { p: self.p, coeffs: vec![0; self.n as usize] }
    }

    pub fn one(&self) -> FieldElem {
        self.from_code(1)
    }

    /// Element with coordinates given by the base-`p` digits of `code`.
    pub fn from_code(&self, code: u32) -> FieldElem {
        debug_assert!(code < self.size());
        FieldElem { p: self.p, coeffs: digits(code as u64, self.p, self.n as usize) }
    }

    pub fn code(&self, a: &FieldElem) -> u32 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElem {
        let r = v.rem_euclid(self.p as i64) as u32;
        self.from_code(r)
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.size()).map(move |c| self.from_code(c))
    }

    fn check(&self, a: &FieldElem) -> Result<(), GfError> {
        if a.p != self.p || a.coeffs.len() != self.n as usize || a.coeffs.iter().any(|&c| c >= self.p) {
            return Err(GfError::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem, GfError> {
        self.check(a)?;
        self.check(b)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % self.p).collect();
        Ok(FieldElem { p: self.p, coeffs })
    }

    pub fn neg(&self, a: &FieldElem) -> Result<FieldElem, GfError> {
        self.check(a)?;
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        Ok(FieldElem { p: self.p, coeffs })
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem, GfError> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem, GfError> {
        self.check(a)?;
        self.check(b)?;
        let n = self.n as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce using x^n = -(m_0 + ... + m_{n-1} x^{n-1})
        for d in (n..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (k, &m) in self.modulus[..n].iter().enumerate() {
                let idx = d - n + k;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let coeffs = prod[..n].iter().map(|&c| c as u32).collect();
        Ok(FieldElem { p: self.p, coeffs })
    }

    /// `a^k`; negative exponents require `a != 0`.
    pub fn pow(&self, a: &FieldElem, k: i64) -> Result<FieldElem, GfError> {
        self.check(a)?;
        let base = if k < 0 { self.inv(a)? } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq)?;
            }
            sq = self.mul(&sq, &sq)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem, GfError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        self.pow(a, self.size() as i64 - 2)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &FieldElem) -> Result<u64, GfError> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let qm1 = self.size() as u64 - 1;
        let mut ord = qm1;
        for r in prime_factors(qm1) {
            while ord % r == 0 && self.pow(a, (ord / r) as i64)? == self.one() {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// First element in code order generating the multiplicative group.
    pub fn primitive(&self) -> FieldElem {
        let qm1 = self.size() as u64 - 1;
        (1..self.size())
            .map(|c| self.from_code(c))
            .find(|a| self.order(a).ok() == Some(qm1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// Additive basis `1, g, g^2, ...` of the field over its prime field,
    /// where `g` is the primitive element.
    pub fn additive_basis(&self) -> Vec<FieldElem> {
        let g = self.primitive();
        let mut out = Vec::with_capacity(self.n as usize);
        let mut cur = self.one();
        for _ in 0..self.n {
            out.push(cur.clone());
            cur = self.mul(&cur, &g).expect("same field");
        }
        out
    }
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo the monic polynomial `m` over `Z_p`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    let p64 = p as u64;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (k, &c) in m.iter().enumerate() {
                r[shift + k] = (r[shift + k] + (p64 - lead) * c as u64) % p64;
            }
        }
        r.pop();
    }
    trim(r.into_iter().map(|c| c as u32).collect())
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..(p as u64).pow(d as u32) {
            let mut f = digits(code, p, d);
            f.push(1);
            let r = poly_rem(m, &f, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_uses_linear_modulus() {
        let f = FieldSpec::new(5, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.size(), 5);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldSpec::new(6, 1), Err(GfError::NonPrime(6)));
        assert_eq!(FieldSpec::new(2, 17), Err(GfError::TooLarge { p: 2, n: 17 }));
        assert!(matches!(FieldSpec::new(3, 0), Err(GfError::TooLarge { .. })));
    }

    #[test]
    fn inverse_in_gf7() {
        let f = FieldSpec::new(7, 1).unwrap();
        let three = f.from_code(3);
        assert_eq!(f.code(&f.inv(&three).unwrap()), 5);
        assert_eq!(f.inv(&f.zero()), Err(GfError::DivisionByZero));
    }

    #[test]
    fn characteristic_two_doubling_vanishes() {
        let f = FieldSpec::new(2, 3).unwrap();
        for a in f.elements() {
            assert!(f.add(&a, &a).unwrap().is_zero());
        }
    }

    #[test]
    fn gf25_has_twelve_nonzero_squares() {
        let f = FieldSpec::new(5, 2).unwrap();
        let mut squares: Vec<u32> = f
            .elements()
            .filter(|a| !a.is_zero())
            .map(|a| f.code(&f.mul(&a, &a).unwrap()))
            .collect();
        squares.sort_unstable();
        squares.dedup();
        assert_eq!(squares.len(), 12);
    }

    #[test]
    fn primitive_elements() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        assert_eq!(f5.code(&f5.primitive()), 2);
        let f2 = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f2.code(&f2.primitive()), 1);
        let f9 = FieldSpec::new(3, 2).unwrap();
        let g = f9.primitive();
        let mut seen = std::collections::BTreeSet::new();
        let mut x = f9.one();
        for _ in 0..8 {
            seen.insert(f9.code(&x));
            x = f9.mul(&x, &g).unwrap();
        }
        assert_eq!(seen.len(), 8);
        // GF(16): the powers of a primitive element exhaust all 15 nonzero elements
        let f16 = FieldSpec::new(2, 4).unwrap();
        let g = f16.primitive();
        let mut powers = std::collections::BTreeSet::new();
        let mut x = f16.one();
        for _ in 0..15 {
            powers.insert(f16.code(&x));
            x = f16.mul(&x, &g).unwrap();
        }
        assert_eq!(powers.len(), 15);
        assert_eq!(x, f16.one());
    }

    #[test]
    fn conway_moduli_are_irreducible_and_primitive() {
        for &(p, n, m) in CONWAY {
            assert!(is_irreducible(m, p), "GF({p}^{n})");
            let f = FieldSpec::new(p, n).unwrap();
            if n > 1 {
                // the class of x is a root of the modulus and generates the multiplicative group
                let x = f.from_code(p);
                assert_eq!(f.order(&x).unwrap(), f.size() as u64 - 1);
            }
        }
    }

    #[test]
    fn non_conway_modulus_is_first_irreducible() {
        // over GF(7) the first monic irreducible quadratic in code order is x^2 + 1
        let f = FieldSpec::new(7, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let f = FieldSpec::new(11, 2).unwrap();
        assert!(is_irreducible(f.modulus(), 11));
    }

    #[test]
    fn field_mismatch_detected() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        let f9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f4.add(&f4.one(), &f9.one()), Err(GfError::FieldMismatch));
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, n) in [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2)] {
            let f = FieldSpec::new(p, n).unwrap();
            let els: Vec<_> = f.elements().collect();
            for a in &els {
                for b in &els {
                    assert_eq!(f.add(a, b).unwrap(), f.add(b, a).unwrap());
                    assert_eq!(f.mul(a, b).unwrap(), f.mul(b, a).unwrap());
                    for c in &els {
                        let l = f.mul(a, &f.add(b, c).unwrap()).unwrap();
                        let r = f.add(&f.mul(a, b).unwrap(), &f.mul(a, c).unwrap()).unwrap();
                        assert_eq!(l, r);
                        let l = f.mul(&f.mul(a, b).unwrap(), c).unwrap();
                        let r = f.mul(a, &f.mul(b, c).unwrap()).unwrap();
                        assert_eq!(l, r);
                    }
                }
                if !a.is_zero() {
                    assert_eq!(f.mul(a, &f.inv(a).unwrap()).unwrap(), f.one());
                }
            }
        }
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(25), Some((5, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(2), Some((2, 1)));
    }
}
