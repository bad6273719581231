//! Arithmetic in GF(p^k).
//!
//! Elements are encoded as integers `0..q` read in base `p`: digit `i` is the
//! coefficient of `x^i` in the polynomial representative. `0` is the zero
//! element and `1` the multiplicative identity. The defining polynomial is the
//! monic irreducible of degree `k` with the smallest such encoding, so every
//! construction of a given order yields the same tables.

use std::fmt;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Orders up to this size get precomputed addition/multiplication tables.
const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} exceeds the supported maximum of {MAX_ORDER}")]
    Unsupported(u64),
    #[error("elements belong to different fields (GF({left}) vs GF({right}))")]
    FieldMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element index {index} out of range for GF({q})")]
    ElementOutOfRange { index: u32, q: u32 },
}

/// Splits `q` into `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !q.is_multiple_of(p) || p * p > q {
        // q itself is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

#[derive(Clone)]
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// A finite field of order `q = p^k`. Immutable after construction.
#[derive(Clone)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    /// Coefficients `c_0..=c_k` of the monic defining polynomial, lowest first.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(q: u64) -> Result<Self, GaloisError> {
        let (p, k) = prime_power(q).ok_or(GaloisError::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(GaloisError::Unsupported(q));
        }
        let p = p as u32;
        let modulus = smallest_irreducible(p, k);
        let mut field = Field {
            p,
            k,
            q: q as u32,
            modulus,
            tables: None,
        };
        if field.q <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_even(&self) -> bool {
        self.p == 2
    }

    pub fn element(&self, index: u32) -> Result<FieldElement<'_>, GaloisError> {
        if index >= self.q {
            return Err(GaloisError::ElementOutOfRange { index, q: self.q });
        }
        Ok(FieldElement { field: self, index })
    }

    pub fn zero(&self) -> FieldElement<'_> {
        FieldElement {
            field: self,
            index: 0,
        }
    }

    pub fn one(&self) -> FieldElement<'_> {
        FieldElement {
            field: self,
            index: 1,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement<'_>> + '_ {
        (0..self.q).map(move |index| FieldElement { field: self, index })
    }

    // Index-level arithmetic. Callers guarantee operands are `< q`.

    #[inline]
    pub fn add_idx(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => t.add[(a * self.q + b) as usize] as u32,
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg_idx(&self, a: u32) -> u32 {
        match &self.tables {
            Some(t) => t.neg[a as usize] as u32,
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub_idx(&self, a: u32, b: u32) -> u32 {
        self.add_idx(a, self.neg_idx(b))
    }

    #[inline]
    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => t.mul[(a * self.q + b) as usize] as u32,
            None => self.mul_slow(a, b),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv_idx(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        Some(match &self.tables {
            Some(t) => t.inv[a as usize] as u32,
            None => self.pow_idx(a, self.q as u64 - 2),
        })
    }

    pub fn pow_idx(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_idx(acc, base);
            }
            base = self.mul_idx(base, base);
            exp >>= 1;
        }
        acc
    }

    /// The multiplication table as `q` rows of `q` indices.
    pub fn mul_table(&self) -> Vec<Vec<u32>> {
        (0..self.q)
            .map(|a| (0..self.q).map(|b| self.mul_idx(a, b)).collect())
            .collect()
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0; self.k as usize];
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn undigits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&sum)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let d: Vec<u32> = self
            .digits(a)
            .into_iter()
            .map(|x| (self.p - x) % self.p)
            .collect();
        self.undigits(&d)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let prod = poly_mul(&self.digits(a), &self.digits(b), self.p);
        let mut rem = poly_rem(&prod, &self.modulus, self.p);
        rem.resize(self.k as usize, 0);
        self.undigits(&rem)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.add_slow(a as u32, b as u32) as u16;
                mul[a * q + b] = self.mul_slow(a as u32, b as u32) as u16;
            }
        }
        let neg = (0..q).map(|a| self.neg_slow(a as u32) as u16).collect();
        let mut inv = vec![0u16; q];
        for a in 1..q {
            inv[a] = (1..q)
                .find(|&b| mul[a * q + b] == 1)
                .expect("nonzero element without inverse: modulus is reducible")
                as u16;
        }
        Tables { add, mul, neg, inv }
    }
}

/// An element bound to its field. Mixed-field arithmetic is an error.
#[derive(Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f Field,
    index: u32,
}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self.index, self.field.q)
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index && self.field == other.field
    }
}

impl Eq for FieldElement<'_> {}

// Fallible on mismatched fields, so these cannot be the std operator traits.
#[allow(clippy::should_implement_trait)]
impl<'f> FieldElement<'f> {
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }

    fn check(&self, other: &Self) -> Result<(), GaloisError> {
        if std::ptr::eq(self.field, other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(GaloisError::FieldMismatch {
                left: self.field.q,
                right: other.field.q,
            })
        }
    }

    fn with(&self, index: u32) -> Self {
        FieldElement {
            field: self.field,
            index,
        }
    }

    pub fn add(self, other: Self) -> Result<Self, GaloisError> {
        self.check(&other)?;
        Ok(self.with(self.field.add_idx(self.index, other.index)))
    }

    pub fn sub(self, other: Self) -> Result<Self, GaloisError> {
        self.check(&other)?;
        Ok(self.with(self.field.sub_idx(self.index, other.index)))
    }

    pub fn mul(self, other: Self) -> Result<Self, GaloisError> {
        self.check(&other)?;
        Ok(self.with(self.field.mul_idx(self.index, other.index)))
    }

    pub fn neg(self) -> Self {
        self.with(self.field.neg_idx(self.index))
    }

    pub fn inv(self) -> Result<Self, GaloisError> {
        self.field
            .inv_idx(self.index)
            .map(|i| self.with(i))
            .ok_or(GaloisError::DivisionByZero)
    }

    pub fn pow(self, exp: u64) -> Self {
        self.with(self.field.pow_idx(self.index, exp))
    }
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = lead * c % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
/// digits of `code`.
fn monic_from_code(mut code: u64, deg: u32, p: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(deg as usize + 1);
    for _ in 0..deg {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out.push(1);
    out
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    for d in 1..=deg / 2 {
        for code in 0..(p as u64).pow(d) {
            let divisor = monic_from_code(code, d, p);
            if poly_rem(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    (0..(p as u64).pow(k))
        .map(|code| monic_from_code(code, k, p))
        .find(|poly| is_irreducible(poly, p))
        .expect("an irreducible polynomial of every degree exists")
}
