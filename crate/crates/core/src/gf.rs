//! Exact arithmetic in GF(p^h).
//!
//! Elements are encoded as integers in `[0, q)`: the base-`p` digits of the
//! code are the coefficients of a polynomial over Z_p (constant term least
//! significant), reduced modulo a fixed monic irreducible polynomial of degree
//! `h`. The modulus is the irreducible polynomial whose non-leading coefficient
//! vector, read as a base-`p` integer, is smallest. For fields with at most 256
//! elements the four basic operations are served from precomputed tables.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;
/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 4;

const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree {0} is outside 1..=4")]
    DegreeOutOfRange(u32),
    #[error("field order {p}^{h} exceeds 2^16")]
    OrderTooLarge { p: u32, h: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element code {code} is not below q = {q}")]
    InvalidElement { code: u32, q: u32 },
    #[error("modulus {given:?} differs from the canonical modulus {expected:?}")]
    ModulusMismatch { given: Vec<u32>, expected: Vec<u32> },
    #[error("Frobenius exponent {k} is outside 0..={h}")]
    FrobeniusOutOfRange { k: u32, h: u32 },
}

/// An element of GF(q), identified by its code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parameters of GF(p^h) together with its canonical modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldSpecRepr", into = "FieldSpecRepr")]
pub struct FieldSpec {
    p: u32,
    h: u32,
    q: u32,
    modulus: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct FieldSpecRepr {
    p: u32,
    h: u32,
    modulus: Vec<u32>,
}

impl From<FieldSpec> for FieldSpecRepr {
    fn from(spec: FieldSpec) -> Self {
        FieldSpecRepr { p: spec.p, h: spec.h, modulus: spec.modulus }
    }
}

impl TryFrom<FieldSpecRepr> for FieldSpec {
    type Error = FieldError;

    fn try_from(repr: FieldSpecRepr) -> Result<Self, Self::Error> {
        let spec = FieldSpec::create(repr.p, repr.h)?;
        if spec.modulus != repr.modulus {
            return Err(FieldError::ModulusMismatch { given: repr.modulus, expected: spec.modulus });
        }
        Ok(spec)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// Returns the deterministic description of GF(p^h).
    pub fn create(p: u32, h: u32) -> Result<FieldSpec, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if !(1..=MAX_DEGREE).contains(&h) {
            return Err(FieldError::DegreeOutOfRange(h));
        }
        let q = (p as u64).pow(h);
        if q > MAX_ORDER as u64 {
            return Err(FieldError::OrderTooLarge { p, h });
        }
        let q = q as u32;
        let modulus = smallest_irreducible(p, h);
        Ok(FieldSpec { p, h, q, modulus })
    }

    /// Looks up the field whose order is `q`.
    pub fn with_order(q: u32) -> Result<FieldSpec, FieldError> {
        let (p, h) = prime_power(q).ok_or(FieldError::NotPrime(q))?;
        FieldSpec::create(p, h)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients `[c0, .., ch]` of the modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

/// Splits `q` as `p^h`, if it is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut h = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

/// Remainder of `a` modulo `b` over Z_p; `b` must have a nonzero leading coefficient.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    while r.last() == Some(&0) {
        r.pop();
    }
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let top = r.len() - 1;
        let factor = r[top] * lead_inv % p;
        let shift = top - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - factor * bc % p) % p;
        }
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|x| a * x % p == 1).expect("nonzero residue has an inverse")
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p` digits of `code`.
fn monic_from_code(code: u32, deg: u32, p: u32) -> Vec<u32> {
    let mut coeffs = digits(code, p, deg as usize);
    coeffs.push(1);
    coeffs
}

fn digits(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

/// Irreducibility over Z_p by trial division with every monic polynomial of degree at most h/2.
pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d) {
            let divisor = monic_from_code(code, d, p);
            if poly_rem(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, h: u32) -> Vec<u32> {
    (0..p.pow(h))
        .map(|code| monic_from_code(code, h, p))
        .find(|poly| is_irreducible(poly, p))
        .expect("an irreducible polynomial of every degree exists")
}

#[derive(Clone, Debug)]
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// Arithmetic context for one finite field.
#[derive(Clone, Debug)]
pub struct Field {
    spec: FieldSpec,
    tables: Option<Tables>,
}

/// Binary and unary field operations, as exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Inv,
}

impl Field {
    pub fn new(spec: FieldSpec) -> Field {
        let mut field = Field { spec, tables: None };
        let q = field.spec.q;
        if q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0u16; n * n];
            let mut mul = vec![0u16; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[a as usize * n + b as usize] = field.poly_add(a, b) as u16;
                    mul[a as usize * n + b as usize] = field.poly_mul(a, b) as u16;
                }
            }
            let neg = (0..q).map(|a| field.poly_neg(a) as u16).collect();
            let mut inv = vec![0u16; n];
            for a in 1..q {
                inv[a as usize] = (1..q).find(|&b| mul[a as usize * n + b as usize] == 1).unwrap() as u16;
            }
            field.tables = Some(Tables { add, mul, neg, inv });
        }
        field
    }

    pub fn create(p: u32, h: u32) -> Result<Field, FieldError> {
        Ok(Field::new(FieldSpec::create(p, h)?))
    }

    pub fn with_order(q: u32) -> Result<Field, FieldError> {
        Ok(Field::new(FieldSpec::with_order(q)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.spec.p
    }

    #[inline]
    pub fn h(&self) -> u32 {
        self.spec.h
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.spec.q
    }

    pub fn element(&self, code: u32) -> Result<FieldElement, FieldError> {
        if code < self.spec.q {
            Ok(FieldElement(code))
        } else {
            Err(FieldError::InvalidElement { code, q: self.spec.q })
        }
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.spec.q).map(FieldElement)
    }

    /// Nonzero elements in code order.
    pub fn units(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.spec.q).map(FieldElement)
    }

    /// Image of an integer under Z -> GF(p) -> GF(q).
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.spec.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.add[(a.0 * self.spec.q + b.0) as usize] as u32),
            None => FieldElement(self.poly_add(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.neg[a.0 as usize] as u32),
            None => FieldElement(self.poly_neg(a.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.mul[(a.0 * self.spec.q + b.0) as usize] as u32),
            None => FieldElement(self.poly_mul(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => FieldElement(t.inv[a.0 as usize] as u32),
            None => self.pow(a, self.spec.q as u64 - 2),
        })
    }

    /// Inverse of an element already known to be nonzero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: FieldElement) -> FieldElement {
        debug_assert!(!a.is_zero());
        match &self.tables {
            Some(t) => FieldElement(t.inv[a.0 as usize] as u32),
            None => self.pow(a, self.spec.q as u64 - 2),
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Dispatches one of the named operations; for `pow` the second operand is the exponent.
    pub fn arith(&self, op: FieldOp, a: FieldElement, b: u64) -> Result<FieldElement, FieldError> {
        let operand = || -> Result<FieldElement, FieldError> {
            u32::try_from(b).map_err(|_| FieldError::InvalidElement { code: u32::MAX, q: self.q() })
                .and_then(|code| self.element(code))
        };
        match op {
            FieldOp::Add => Ok(self.add(a, operand()?)),
            FieldOp::Sub => Ok(self.sub(a, operand()?)),
            FieldOp::Mul => Ok(self.mul(a, operand()?)),
            FieldOp::Div => self.div(a, operand()?),
            FieldOp::Pow => Ok(self.pow(a, b)),
            FieldOp::Neg => Ok(self.neg(a)),
            FieldOp::Inv => self.inv(a),
        }
    }

    /// `a` is a square in GF(q). Every element is a square when q is even.
    pub fn is_square(&self, a: FieldElement) -> bool {
        if a.is_zero() || self.spec.p == 2 {
            return true;
        }
        self.pow(a, (self.spec.q as u64 - 1) / 2) == FieldElement::ONE
    }

    /// `a^(p^k)` for `0 <= k <= h`.
    pub fn frobenius(&self, a: FieldElement, k: u32) -> Result<FieldElement, FieldError> {
        if k > self.spec.h {
            return Err(FieldError::FrobeniusOutOfRange { k, h: self.spec.h });
        }
        Ok(self.pow(a, (self.spec.p as u64).pow(k)))
    }

    /// `a` lies in the subfield GF(p^d); `d` should divide h.
    pub fn in_subfield(&self, a: FieldElement, d: u32) -> bool {
        self.pow(a, (self.spec.p as u64).pow(d)) == a
    }

    fn poly_add(&self, a: u32, b: u32) -> u32 {
        let p = self.spec.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.spec.h {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    fn poly_neg(&self, a: u32) -> u32 {
        let p = self.spec.p;
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.spec.h {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.spec.p;
        let h = self.spec.h as usize;
        let da = digits(a, p, h);
        let db = digits(b, p, h);
        let mut prod = vec![0u32; 2 * h - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let rem = if h == 1 { prod } else { poly_rem(&prod, &self.spec.modulus, p) };
        rem.iter().rev().fold(0, |acc, &c| acc * p + c)
    }
}
