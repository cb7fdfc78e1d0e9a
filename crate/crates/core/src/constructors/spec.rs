//! The group-spec mini-language.
//!
//! ```text
//! spec  := PSL2(q) | SL2(q) | PGL2(q) | PSL3(q) | Alt(n) | Sym(n)
//!        | EA(p,k) | Meta(p,q,t) | Sz(8) | SignedEven(n)
//!        | CentProd(spec,spec) | DirProd(spec,spec) | Perms[gen;gen;...]
//! gen   := cycle+ | ()
//! cycle := (point,point,...)
//! ```
//!
//! Whitespace is not allowed, tags are case-sensitive and points are 0-based.

use std::fmt;

use thiserror::Error;

use crate::gf::{is_prime, prime_power, MAX_FIELD_SIZE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("parameter error: {0}")]
    Parameter(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Psl2(u32),
    Sl2(u32),
    Pgl2(u32),
    Psl3(u32),
    Alt(usize),
    Sym(usize),
    Ea { p: u32, k: u32 },
    Meta { p: u32, q: u32, t: u32 },
    Sz(u32),
    SignedEven(usize),
    CentProd(Box<GroupSpec>, Box<GroupSpec>),
    DirProd(Box<GroupSpec>, Box<GroupSpec>),
    /// Generators in cycle notation; each generator is a list of cycles.
    Perms(Vec<Vec<Vec<usize>>>),
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec, SpecError> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let spec = p.spec()?;
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Checks family constraints. [`GroupSpec::parse`] calls this; it is
    /// public for specs assembled in code.
    pub fn validate(&self) -> Result<(), SpecError> {
        use GroupSpec::*;
        let param = |m: String| Err(SpecError::Parameter(m));
        match self {
            Psl2(q) | Sl2(q) | Pgl2(q) | Psl3(q) => {
                if prime_power(*q as u64).is_none() {
                    return param(format!("{q} is not a prime power"));
                }
                if *q as u64 > MAX_FIELD_SIZE {
                    return param(format!("field size {q} exceeds {MAX_FIELD_SIZE}"));
                }
            }
            Alt(n) | Sym(n) => {
                if *n < 2 {
                    return param(format!("degree {n} must be at least 2"));
                }
            }
            Ea { p, k } => {
                if !is_prime(*p as u64) {
                    return param(format!("{p} is not prime"));
                }
                if *k < 1 {
                    return param("rank must be at least 1".into());
                }
            }
            Meta { p, q, t } => {
                if !is_prime(*p as u64) {
                    return param(format!("{p} is not prime"));
                }
                if *q < 2 {
                    return param(format!("cyclic order {q} must be at least 2"));
                }
                if *t == 0 || t >= p {
                    return param(format!("multiplier {t} must satisfy 0 < t < {p}"));
                }
                if mod_pow(*t as u64, *q as u64, *p as u64) != 1 {
                    return param(format!("{t}^{q} is not 1 mod {p}"));
                }
            }
            Sz(q) => {
                if *q != 8 {
                    return param(format!("only Sz(8) is supported, got Sz({q})"));
                }
            }
            SignedEven(n) => {
                if *n < 2 {
                    return param(format!("dimension {n} must be at least 2"));
                }
            }
            CentProd(a, b) | DirProd(a, b) => {
                a.validate()?;
                b.validate()?;
            }
            Perms(gens) => {
                for g in gens {
                    let mut seen = std::collections::HashSet::new();
                    for c in g {
                        for &x in c {
                            if !seen.insert(x) {
                                return param(format!("point {x} repeated within a generator"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Degree of the `Perms` generators: one more than the largest point.
    pub(crate) fn perms_degree(gens: &[Vec<Vec<usize>>]) -> usize {
        gens.iter().flatten().flatten().map(|&x| x + 1).max().unwrap_or(1)
    }
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GroupSpec::*;
        match self {
            Psl2(q) => write!(f, "PSL2({q})"),
            Sl2(q) => write!(f, "SL2({q})"),
            Pgl2(q) => write!(f, "PGL2({q})"),
            Psl3(q) => write!(f, "PSL3({q})"),
            Alt(n) => write!(f, "Alt({n})"),
            Sym(n) => write!(f, "Sym({n})"),
            Ea { p, k } => write!(f, "EA({p},{k})"),
            Meta { p, q, t } => write!(f, "Meta({p},{q},{t})"),
            Sz(q) => write!(f, "Sz({q})"),
            SignedEven(n) => write!(f, "SignedEven({n})"),
            CentProd(a, b) => write!(f, "CentProd({a},{b})"),
            DirProd(a, b) => write!(f, "DirProd({a},{b})"),
            Perms(gens) => {
                write!(f, "Perms[")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    if g.is_empty() {
                        write!(f, "()")?;
                    }
                    for c in g {
                        let pts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                        write!(f, "({})", pts.join(","))?;
                    }
                }
                write!(f, "]")
            }
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GroupSpec::parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> SpecError {
        SpecError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), SpecError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn number(&mut self) -> Result<u64, SpecError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| SpecError::Syntax { pos: start, msg: "number too large".into() })
    }

    fn small(&mut self) -> Result<u32, SpecError> {
        let start = self.pos;
        let n = self.number()?;
        u32::try_from(n).map_err(|_| SpecError::Syntax { pos: start, msg: "number too large".into() })
    }

    fn args(&mut self, count: usize) -> Result<Vec<u32>, SpecError> {
        self.expect(b'(')?;
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            if i > 0 {
                self.expect(b',')?;
            }
            out.push(self.small()?);
        }
        self.expect(b')')?;
        Ok(out)
    }

    fn spec(&mut self) -> Result<GroupSpec, SpecError> {
        let start = self.pos;
        let tag = self.ident().to_string();
        use GroupSpec::*;
        let spec = match tag.as_str() {
            "PSL2" => Psl2(self.args(1)?[0]),
            "SL2" => Sl2(self.args(1)?[0]),
            "PGL2" => Pgl2(self.args(1)?[0]),
            "PSL3" => Psl3(self.args(1)?[0]),
            "Alt" => Alt(self.args(1)?[0] as usize),
            "Sym" => Sym(self.args(1)?[0] as usize),
            "Sz" => Sz(self.args(1)?[0]),
            "SignedEven" => SignedEven(self.args(1)?[0] as usize),
            "EA" => {
                let a = self.args(2)?;
                Ea { p: a[0], k: a[1] }
            }
            "Meta" => {
                let a = self.args(3)?;
                Meta { p: a[0], q: a[1], t: a[2] }
            }
            "CentProd" | "DirProd" => {
                self.expect(b'(')?;
                let a = self.spec()?;
                self.expect(b',')?;
                let b = self.spec()?;
                self.expect(b')')?;
                if tag == "CentProd" {
                    CentProd(Box::new(a), Box::new(b))
                } else {
                    DirProd(Box::new(a), Box::new(b))
                }
            }
            "Perms" => Perms(self.perms()?),
            "" => return Err(self.err("expected a group tag")),
            _ => {
                return Err(SpecError::Syntax { pos: start, msg: format!("unknown group tag '{tag}'") })
            }
        };
        Ok(spec)
    }

    fn perms(&mut self) -> Result<Vec<Vec<Vec<usize>>>, SpecError> {
        self.expect(b'[')?;
        let mut gens = Vec::new();
        if self.peek() == Some(b']') {
            self.pos += 1;
            return Ok(gens);
        }
        loop {
            gens.push(self.generator()?);
            match self.peek() {
                Some(b';') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    return Ok(gens);
                }
                _ => return Err(self.err("expected ';' or ']'")),
            }
        }
    }

    fn generator(&mut self) -> Result<Vec<Vec<usize>>, SpecError> {
        let mut cycles = Vec::new();
        if self.peek() != Some(b'(') {
            return Err(self.err("expected '('"));
        }
        while self.peek() == Some(b'(') {
            self.pos += 1;
            if self.peek() == Some(b')') {
                self.pos += 1;
                continue;
            }
            let mut cycle = Vec::new();
            loop {
                let start = self.pos;
                let x = self.number()?;
                let x = usize::try_from(x)
                    .ok()
                    .filter(|&x| x < crate::perm::MAX_DEGREE)
                    .ok_or(SpecError::Syntax { pos: start, msg: "point too large".into() })?;
                cycle.push(x);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.err("expected ',' or ')'")),
                }
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        Ok(cycles)
    }
}
