//! Degree-vector combinatorics and dense-exponent sparse polynomials.
//!
//! The combinatorial layer (p-shadows, carry-free multinomials, the b_i
//! degree ladder, canonical monomials, degree and border sets) is what ties
//! total-degree membership over F_{p^s} to base-p digit conditions. The
//! [`MultiPoly`] type is a small exact multivariate polynomial: coefficients
//! in F_q, exponent vectors as keys, no per-variable x^q -> x reduction
//! (every polynomial built here keeps per-variable degree <= q-1 on its own).

use std::collections::BTreeMap;

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// True iff every base-p digit of `b` is at most the matching digit of `a`.
/// By Lucas' theorem this is exactly binom(a, b) != 0 mod p.
pub fn shadow_leq(b: u64, a: u64, p: u32) -> bool {
    let p = p as u64;
    let (mut a, mut b) = (a, b);
    while b > 0 {
        if b % p > a % p {
            return false;
        }
        a /= p;
        b /= p;
    }
    true
}

/// binom(a, b) mod p by Lucas' theorem (digitwise binomials from a Pascal
/// triangle mod p).
pub fn binom_mod_p(a: u64, b: u64, p: u32) -> u32 {
    if b > a {
        return 0;
    }
    let mut pascal = vec![vec![0u32; p as usize]; p as usize];
    for i in 0..p as usize {
        pascal[i][0] = 1;
        for j in 1..=i {
            pascal[i][j] = (pascal[i - 1][j - 1] + pascal[i - 1][j]) % p;
        }
    }
    let p64 = p as u64;
    let (mut a, mut b) = (a, b);
    let mut out = 1u32;
    while b > 0 || a > 0 {
        let (da, db) = ((a % p64) as usize, (b % p64) as usize);
        if db > da {
            return 0;
        }
        out = out * pascal[da][db] % p;
        a /= p64;
        b /= p64;
    }
    out
}

fn digit_sum(mut v: u64, p: u64) -> u64 {
    let mut s = 0;
    while v > 0 {
        s += v % p;
        v /= p;
    }
    s
}

/// True iff the multinomial coefficient (n; parts) is nonzero mod p, i.e.
/// the parts add up to n without base-p carries (Kummer's criterion: the
/// carry count is (sum of digit sums - digit sum of n) / (p-1)).
pub fn multinomial_nonzero(n: u64, parts: &[u64], p: u32) -> Result<bool> {
    if parts.iter().sum::<u64>() != n {
        return Err(Error::BadPartition);
    }
    let p = p as u64;
    let parts_digits: u64 = parts.iter().map(|&x| digit_sum(x, p)).sum();
    Ok(parts_digits == digit_sum(n, p))
}

/// The degree ladder b_0(d)..b_s(d): b_i(d) = p^i plus the part of d whose
/// base-p digits sit at position i and above. Every entry exceeds d; these
/// are the only possible total degrees of border monomials.
pub fn b_values(d: u64, p: u32, s: u32) -> Vec<u64> {
    let p = p as u64;
    (0..=s)
        .map(|i| {
            let pi = p.pow(i);
            pi + (d - d % pi)
        })
        .collect()
}

/// The normal-form monomial of total degree d: one residue exponent r in
/// [q/p, q-1] followed by copies of q - q/p. Degrees below q/p admit no such
/// split, and the single-variable vector (d) is used instead; that case is
/// sound because a degree-d monomial with d <= q-1 collapses to x1^d under
/// affine moves, which the univariate constraint rejects directly.
pub fn canonical_monomial(d: u64, q: u32, p: u32) -> Vec<u32> {
    let qp = (q / p) as u64;
    if d < qp {
        return vec![d as u32];
    }
    let block = q as u64 - qp;
    let l = (d - qp) / block;
    let r = d - l * block;
    let mut out = vec![r as u32];
    out.extend(std::iter::repeat(block as u32).take(l as usize));
    out
}

/// All vectors in {0..q-1}^n in lexicographic order.
pub fn exponent_vectors(q: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut v = vec![0u32; n];
    loop {
        out.push(v.clone());
        // lexicographic successor: bump the last coordinate, carry left
        let mut t = n;
        loop {
            if t == 0 {
                return out;
            }
            t -= 1;
            if v[t] + 1 < q {
                v[t] += 1;
                for x in v[t + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// The degree set of RM[n,d,q]: every exponent vector with entry sum <= d.
pub fn degree_set(n: usize, d: u64, q: u32) -> Vec<Vec<u32>> {
    exponent_vectors(q, n)
        .into_iter()
        .filter(|v| v.iter().map(|&e| e as u64).sum::<u64>() <= d)
        .collect()
}

/// All x with x <=_p e, ascending.
fn shadow_elements(e: u32, p: u32) -> Vec<u32> {
    let mut digits = Vec::new();
    let mut v = e;
    loop {
        digits.push(v % p);
        v /= p;
        if v == 0 {
            break;
        }
    }
    let mut out = vec![0u32];
    let mut place = 1u32;
    for &dmax in &digits {
        let prev = std::mem::take(&mut out);
        for digit in 0..=dmax {
            for &base in &prev {
                out.push(base + digit * place);
            }
        }
        place *= p;
    }
    out.sort_unstable();
    out
}

/// True iff every proper p-shadow of `v` (digitwise dominated in every
/// coordinate, not equal) has entry sum <= d.
fn shadows_lie_in_degree_set(v: &[u32], d: u64, p: u32) -> bool {
    let per_coord: Vec<Vec<u32>> = v.iter().map(|&e| shadow_elements(e, p)).collect();
    let mut idx = vec![0usize; v.len()];
    loop {
        let w: Vec<u32> = idx.iter().zip(&per_coord).map(|(&i, c)| c[i]).collect();
        if w != v {
            let sum: u64 = w.iter().map(|&e| e as u64).sum();
            if sum > d {
                return false;
            }
        }
        let mut t = v.len();
        loop {
            if t == 0 {
                return true;
            }
            t -= 1;
            if idx[t] + 1 < per_coord[t].len() {
                idx[t] += 1;
                for x in idx[t + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// The border of RM[n,d,q]: exponent vectors outside the degree set whose
/// every proper p-shadow lies inside it. Candidates are restricted to entry
/// sums in {b_0(d)..b_s(d)} (the only sums a border vector can have), then
/// filtered by full shadow-minimality.
pub fn border_set(n: usize, d: u64, q: u32, p: u32, s: u32) -> Vec<Vec<u32>> {
    let sums: std::collections::BTreeSet<u64> = b_values(d, p, s).into_iter().collect();
    exponent_vectors(q, n)
        .into_iter()
        .filter(|v| {
            let sum: u64 = v.iter().map(|&e| e as u64).sum();
            sum > d && sums.contains(&sum) && shadows_lie_in_degree_set(v, d, p)
        })
        .collect()
}

/// The support of x1^{d1} (x1+x2)^{d2} without expanding: {(d1+i, d2-i)} for
/// every i in the p-shadow of d2. Valid only without exponent wraparound.
pub fn compose_affine_support(m: &[u32; 2], q: u32, p: u32) -> Result<Vec<Vec<u32>>> {
    let (d1, d2) = (m[0], m[1]);
    if d1 as u64 + d2 as u64 > q as u64 - 1 {
        return Err(Error::DegreeOverflow);
    }
    let mut out: Vec<Vec<u32>> = (0..=d2)
        .filter(|&i| shadow_leq(i as u64, d2 as u64, p))
        .map(|i| vec![d1 + i, d2 - i])
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// A sparse multivariate polynomial over F_q with explicitly stored nonzero
/// coefficients, keyed by exponent vectors in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    field: Field,
    n: usize,
    terms: BTreeMap<Vec<u32>, Elem>,
}

impl MultiPoly {
    pub fn zero(field: Field, n: usize) -> MultiPoly {
        MultiPoly { field, n, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, n: usize, c: Elem) -> MultiPoly {
        let mut out = Self::zero(field, n);
        out.add_term(&vec![0; n], c);
        out
    }

    pub fn monomial(field: Field, n: usize, exponents: &[u32], coeff: Elem) -> Result<MultiPoly> {
        if exponents.len() != n {
            return Err(Error::ArityMismatch);
        }
        let mut out = Self::zero(field, n);
        out.add_term(exponents, coeff);
        Ok(out)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponents: &[u32]) -> Elem {
        self.terms.get(exponents).copied().unwrap_or(Elem(0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, Elem)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn support(&self) -> Vec<Vec<u32>> {
        self.terms.keys().cloned().collect()
    }

    fn add_term(&mut self, exponents: &[u32], coeff: Elem) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponents.to_vec()).or_insert(Elem(0));
        *entry = self.field.add(*entry, coeff);
        if entry.is_zero() {
            self.terms.remove(exponents);
        }
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.n != other.n {
            return Err(Error::ArityMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, self.field.neg(c));
        }
        Ok(out)
    }

    pub fn scale(&self, c: Elem) -> MultiPoly {
        let mut out = Self::zero(self.field.clone(), self.n);
        for (e, t) in self.terms() {
            out.add_term(e, self.field.mul(t, c));
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.field.clone(), self.n);
        let mut e = vec![0u32; self.n];
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                for t in 0..self.n {
                    e[t] = e1[t] + e2[t];
                }
                out.add_term(&e, self.field.mul(c1, c2));
            }
        }
        Ok(out)
    }

    /// (c1 x1 + ... + cn xn)^e by repeated multiplication; e <= q-1 keeps
    /// term counts tame and needs no carry bookkeeping.
    pub fn linear_power(field: Field, coeffs: &[Elem], e: u64) -> Result<MultiPoly> {
        if e >= field.order() as u64 {
            return Err(Error::OutOfRange("linear-power exponent"));
        }
        let n = coeffs.len();
        let mut linear = Self::zero(field.clone(), n);
        for (t, &c) in coeffs.iter().enumerate() {
            let mut exps = vec![0u32; n];
            exps[t] = 1;
            linear.add_term(&exps, c);
        }
        let mut out = Self::constant(field, n, Elem(1));
        for _ in 0..e {
            out = out.mul(&linear)?;
        }
        Ok(out)
    }

    /// Termwise exponent decrement by one in each listed variable; fails on
    /// any term missing one of them.
    pub fn divide_by_vars(&self, vars: &[usize]) -> Result<MultiPoly> {
        let mut out = Self::zero(self.field.clone(), self.n);
        for (e, c) in self.terms() {
            let mut e = e.clone();
            for &v in vars {
                if e[v] == 0 {
                    return Err(Error::NotDivisible);
                }
                e[v] -= 1;
            }
            out.add_term(&e, c);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Elem]) -> Result<Elem> {
        if point.len() != self.n {
            return Err(Error::ArityMismatch);
        }
        let f = &self.field;
        let mut acc = Elem(0);
        for (e, c) in self.terms() {
            let mut term = c;
            for (t, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    term = f.mul(term, f.pow(point[t], exp as u64));
                }
            }
            acc = f.add(acc, term);
        }
        Ok(acc)
    }

    /// Total degree of a homogeneous polynomial; None when terms disagree or
    /// the polynomial is zero.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut deg = None;
        for (e, _) in self.terms() {
            let sum: u64 = e.iter().map(|&x| x as u64).sum();
            match deg {
                None => deg = Some(sum),
                Some(d) if d != sum => return None,
                _ => {}
            }
        }
        deg
    }

    /// Substitutes x_from -> x_from + x_to, expanding each power of x_from
    /// binomially with coefficients reduced mod p by Lucas.
    pub fn substitute_shift(&self, from: usize, to: usize) -> MultiPoly {
        let p = self.field.p();
        let mut out = Self::zero(self.field.clone(), self.n);
        for (e, c) in self.terms() {
            let m = e[from];
            for j in 0..=m {
                let binom = binom_mod_p(m as u64, j as u64, p);
                if binom == 0 {
                    continue;
                }
                let coeff = self.field.mul(c, Elem(binom as u16));
                let mut e2 = e.clone();
                e2[from] = j;
                e2[to] += m - j;
                out.add_term(&e2, coeff);
            }
        }
        out
    }
}

// Interchange form: {n, terms: [[[e1..en], code]..]} in lexicographic key
// order (guaranteed by the BTreeMap).
impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        struct Terms<'a>(&'a BTreeMap<Vec<u32>, Elem>);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = ser.serialize_seq(Some(self.0.len()))?;
                for (e, c) in self.0 {
                    seq.serialize_element(&(e, c.code()))?;
                }
                seq.end()
            }
        }
        let mut st = ser.serialize_struct("MultiPoly", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("terms", &Terms(&self.terms))?;
        st.end()
    }
}
