//! Arithmetic in finite fields F_q, q = p^s, with runtime-chosen parameters.
//!
//! An element is stored as an integer code in `0..q`. The code's base-p
//! digits, least significant first, are the coefficients of its residue
//! polynomial in the polynomial basis modulo a monic irreducible modulus of
//! degree s over F_p. Addition is digitwise mod p; multiplication is digit
//! convolution reduced by the modulus. For s = 1 the modulus is `x` and the
//! arithmetic collapses to integers mod p.
//!
//! Orders up to 4096 are supported. Discrete-log tables are precomputed for
//! q <= 1024, and direct q*q operation tables for q <= 256, so the hot paths
//! in the enumeration sweeps are single lookups.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 4096;
/// Discrete-log tables are built up to this order.
const LOG_TABLE_LIMIT: u32 = 1024;
/// Direct q*q add/mul tables are built up to this order.
const DIRECT_TABLE_LIMIT: u32 = 256;

/// An element of some [`Field`], stored as its integer code in `0..q`.
///
/// Codes are meaningless without the field that produced them; every
/// operation lives on [`Field`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u16);

impl Elem {
    pub fn code(self) -> u32 {
        self.0 as u32
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct Tables {
    /// exp[i] = g^i for a fixed generator g, i in 0..q-1.
    exp: Vec<u16>,
    /// log[c] = i with exp[i] = c, for c in 1..q. log[0] is unused.
    log: Vec<u16>,
    /// Direct multiplication table (a*q + b), empty above DIRECT_TABLE_LIMIT.
    mul: Vec<u16>,
    /// Direct addition table (a*q + b), empty above DIRECT_TABLE_LIMIT.
    add: Vec<u16>,
}

/// A finite field F_{p^s} built at runtime.
///
/// Cheap to clone: lookup tables are shared behind an `Arc`.
#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    s: u32,
    q: u32,
    /// Monic modulus of degree s, little-endian base-p digits (length s+1).
    modulus: Vec<u16>,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.s == other.s && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits q into (p, s) with p prime and q = p^s.
pub fn factor_prime_power(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if p * p > q {
        // q itself is prime.
        return Ok((q, 1));
    }
    let mut rest = q;
    let mut s = 0;
    while rest % p == 0 {
        rest /= p;
        s += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p, s))
}

// --- polynomial helpers over F_p on little-endian digit slices ---

fn poly_is_divisible(num: &[u16], div: &[u16], p: u32) -> bool {
    let mut rem: Vec<u32> = num.iter().map(|&d| d as u32).collect();
    let dt = div.len() - 1;
    while rem.len() > dt {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - dt;
            // divisor is monic, so the factor is the leading digit itself
            for (j, &dj) in div.iter().enumerate() {
                let idx = shift + j;
                rem[idx] = (rem[idx] + (p - dj as u32) * lead) % p;
            }
        }
        rem.pop();
        while rem.len() > dt && *rem.last().unwrap() == 0 {
            rem.pop();
        }
    }
    rem.iter().all(|&d| d == 0)
}

fn poly_irreducible(modulus: &[u16], p: u32, s: u32) -> bool {
    // trial division by every monic polynomial of degree 1..=s/2
    for t in 1..=(s / 2) {
        let count = (p as u64).pow(t);
        for c in 0..count {
            let mut div = digits_of(c, p, t as usize);
            div.push(1);
            if poly_is_divisible(modulus, &div, p) {
                return false;
            }
        }
    }
    true
}

fn digits_of(mut v: u64, p: u32, len: usize) -> Vec<u16> {
    let mut out = vec![0u16; len];
    for d in out.iter_mut() {
        *d = (v % p as u64) as u16;
        v /= p as u64;
    }
    out
}

impl Field {
    /// Builds F_{p^s} with the default modulus: the monic irreducible of
    /// degree s over F_p whose non-leading digit string encodes the smallest
    /// integer. For s = 1 this is the polynomial `x`.
    pub fn new(p: u32, s: u32) -> Result<Field> {
        Self::check_params(p, s)?;
        let q = (p as u64).pow(s);
        let mut modulus = None;
        for c in 0..q {
            let mut cand = digits_of(c, p, s as usize);
            cand.push(1);
            if poly_irreducible(&cand, p, s) {
                modulus = Some(cand);
                break;
            }
        }
        // a monic irreducible of every degree exists over every F_p
        Ok(Self::build(p, s, modulus.expect("irreducible search exhausted")))
    }

    /// Builds F_{p^s} with an explicit monic modulus (little-endian digits,
    /// length s+1). Rejects reducible choices.
    pub fn with_modulus(p: u32, s: u32, modulus: &[u16]) -> Result<Field> {
        Self::check_params(p, s)?;
        if modulus.len() != s as usize + 1 || *modulus.last().unwrap() != 1 {
            return Err(Error::OutOfRange("modulus shape"));
        }
        if modulus.iter().any(|&d| d as u32 >= p) {
            return Err(Error::OutOfRange("modulus digit"));
        }
        if !poly_irreducible(modulus, p, s) {
            return Err(Error::ReducibleModulus);
        }
        Ok(Self::build(p, s, modulus.to_vec()))
    }

    /// Builds the field of order q with the default modulus.
    pub fn of_order(q: u32) -> Result<Field> {
        let (p, s) = factor_prime_power(q)?;
        Field::new(p, s)
    }

    fn check_params(p: u32, s: u32) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 {
            return Err(Error::OutOfRange("extension degree"));
        }
        let q = (p as u64).checked_pow(s).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(Error::UnsupportedSize(q));
        }
        Ok(())
    }

    fn build(p: u32, s: u32, modulus: Vec<u16>) -> Field {
        let q = p.pow(s);
        let mut field = Field { p, s, q, modulus, tables: None };
        if q <= LOG_TABLE_LIMIT {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        field
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut exp = vec![0u16; q - 1];
        let mut log = vec![0u16; q];
        if self.q == 2 {
            exp[0] = 1;
        } else {
            let g = self.find_generator();
            let mut x = 1u32;
            for (i, e) in exp.iter_mut().enumerate() {
                *e = x as u16;
                log[x as usize] = i as u16;
                x = self.mul_codes(x, g);
            }
            debug_assert_eq!(x, 1, "generator order must be q-1");
        }
        let (mul, add) = if self.q <= DIRECT_TABLE_LIMIT {
            let mut mul = vec![0u16; q * q];
            let mut add = vec![0u16; q * q];
            for a in 0..q as u32 {
                for b in 0..q as u32 {
                    mul[(a as usize) * q + b as usize] = self.mul_codes(a, b) as u16;
                    add[(a as usize) * q + b as usize] = self.add_codes(a, b) as u16;
                }
            }
            (mul, add)
        } else {
            (Vec::new(), Vec::new())
        };
        Tables { exp, log, mul, add }
    }

    fn find_generator(&self) -> u32 {
        'cand: for g in 2..self.q {
            let mut x = g;
            for i in 1..self.q {
                if x == 1 {
                    if i == self.q - 1 {
                        return g;
                    }
                    continue 'cand;
                }
                x = self.mul_codes(x, g);
            }
        }
        unreachable!("every finite field has a multiplicative generator")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Field order q = p^s.
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(1)
    }

    /// Wraps a code, checking it is in range.
    pub fn elem(&self, code: u32) -> Result<Elem> {
        if code < self.q {
            Ok(Elem(code as u16))
        } else {
            Err(Error::OutOfRange("element code"))
        }
    }

    /// All q elements in ascending code order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q as u16).map(Elem)
    }

    // --- raw code arithmetic (no table assumptions) ---

    fn add_codes(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 || b > 0 {
            out += (a % self.p + b % self.p) % self.p * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn neg_code(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 {
            let d = a % self.p;
            if d != 0 {
                out += (self.p - d) * place;
            }
            place *= self.p;
            a /= self.p;
        }
        out
    }

    fn mul_codes(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.s == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        let s = self.s as usize;
        let mut da = [0u32; 13];
        let mut db = [0u32; 13];
        let (mut ra, mut rb) = (a, b);
        for i in 0..s {
            da[i] = ra % self.p;
            ra /= self.p;
            db[i] = rb % self.p;
            rb /= self.p;
        }
        let mut conv = [0u32; 25];
        for i in 0..s {
            if da[i] == 0 {
                continue;
            }
            for j in 0..s {
                conv[i + j] += da[i] * db[j];
            }
        }
        for c in conv.iter_mut() {
            *c %= self.p;
        }
        // reduce by the monic modulus: x^s = -(low digits)
        for i in (s..2 * s - 1).rev() {
            let c = conv[i];
            if c != 0 {
                conv[i] = 0;
                for j in 0..s {
                    let m = self.modulus[j] as u32;
                    if m != 0 {
                        conv[i - s + j] = (conv[i - s + j] + (self.p - m) * c) % self.p;
                    }
                }
            }
        }
        let mut out = 0u32;
        let mut place = 1u32;
        for &c in conv.iter().take(s) {
            out += c * place;
            place = place.saturating_mul(self.p);
        }
        out
    }

    // --- public element arithmetic ---

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = &self.tables {
            if !t.add.is_empty() {
                return Elem(t.add[a.0 as usize * self.q as usize + b.0 as usize]);
            }
        }
        Elem(self.add_codes(a.code(), b.code()) as u16)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg_code(a.code()) as u16)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = &self.tables {
            if !t.mul.is_empty() {
                return Elem(t.mul[a.0 as usize * self.q as usize + b.0 as usize]);
            }
            if a.is_zero() || b.is_zero() {
                return Elem(0);
            }
            let i = t.log[a.0 as usize] as u32 + t.log[b.0 as usize] as u32;
            return Elem(t.exp[(i % (self.q - 1)) as usize]);
        }
        Elem(self.mul_codes(a.code(), b.code()) as u16)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.tables {
            let i = t.log[a.0 as usize] as u32;
            return Ok(Elem(t.exp[((self.q - 1 - i) % (self.q - 1)) as usize]));
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    /// a^e with the convention 0^0 = 1.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem(1);
        }
        if a.is_zero() {
            return Elem(0);
        }
        if let Some(t) = &self.tables {
            let i = t.log[a.0 as usize] as u64 * (e % (self.q as u64 - 1));
            return Elem(t.exp[(i % (self.q as u64 - 1)) as usize]);
        }
        let mut base = a;
        let mut e = e;
        let mut acc = Elem(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The sum of beta^i over all beta in the field, computed by summation.
    /// Exponents are restricted to 0..=q-1.
    pub fn power_sum(&self, i: u64) -> Result<Elem> {
        if i > self.q as u64 - 1 {
            return Err(Error::OutOfRange("power-sum exponent"));
        }
        let mut acc = Elem(0);
        for b in self.elements() {
            acc = self.add(acc, self.pow(b, i));
        }
        Ok(acc)
    }
}

// Interchange form: {p, s, modulus}. Tables are rebuilt on load, and a
// tampered modulus is rejected by the irreducibility check.
#[derive(Serialize, Deserialize)]
struct FieldRepr {
    p: u32,
    s: u32,
    modulus: Vec<u16>,
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        FieldRepr { p: self.p, s: self.s, modulus: self.modulus.clone() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = FieldRepr::deserialize(de)?;
        Field::with_modulus(repr.p, repr.s, &repr.modulus).map_err(serde::de::Error::custom)
    }
}
