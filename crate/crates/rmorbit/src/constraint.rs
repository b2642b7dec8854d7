//! Sparse dual constraints on functions F_q^n -> F_q, and the machinery
//! around them: affine transforms of the domain, the convolution and union
//! combinators, arity padding, the univariate Vandermonde constraint, and
//! dense function tables.
//!
//! A constraint is k points and a set of coefficient rows; it accepts a
//! function when every row's weighted sum of function values vanishes.
//! Points are kept as an ordered multiset — duplicates are legal and arise
//! naturally from unions and from degenerate affine images.

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::poly::MultiPoly;

/// Mixed-radix point index: coordinate 0 is the least significant digit.
pub fn point_index(field: &Field, point: &[Elem]) -> usize {
    let q = field.order() as usize;
    let mut idx = 0usize;
    for &c in point.iter().rev() {
        idx = idx * q + c.code() as usize;
    }
    idx
}

/// Inverse of [`point_index`].
pub fn point_at(field: &Field, n: usize, mut idx: usize) -> Vec<Elem> {
    let q = field.order() as usize;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(Elem((idx % q) as u16));
        idx /= q;
    }
    out
}

/// Number of points in F_q^n, if it fits a usize.
pub fn domain_size(field: &Field, n: usize) -> Result<usize> {
    let mut size = 1usize;
    for _ in 0..n {
        size = size
            .checked_mul(field.order() as usize)
            .ok_or(Error::OutOfRange("domain size"))?;
    }
    Ok(size)
}

/// All points of F_q^n in ascending index order.
pub fn domain_points(field: &Field, n: usize) -> impl Iterator<Item = Vec<Elem>> + '_ {
    let size = domain_size(field, n).expect("domain too large to enumerate");
    (0..size).map(move |i| point_at(field, n, i))
}

/// An affine map x -> Ax + b on F_q^n. The matrix may be singular — the
/// orbit deliberately ranges over all of them, constant maps included.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineTransform {
    field: Field,
    matrix: Vec<Vec<Elem>>,
    shift: Vec<Elem>,
}

impl AffineTransform {
    pub fn new(field: Field, matrix: Vec<Vec<Elem>>, shift: Vec<Elem>) -> Result<AffineTransform> {
        let n = shift.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::ArityMismatch);
        }
        Ok(AffineTransform { field, matrix, shift })
    }

    pub fn identity(field: Field, n: usize) -> AffineTransform {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| Elem(u16::from(i == j))).collect())
            .collect();
        AffineTransform { field, matrix, shift: vec![Elem(0); n] }
    }

    /// Total number of affine maps on F_q^n: q^(n^2+n). None on overflow.
    pub fn count(field: &Field, n: usize) -> Option<u128> {
        let mut out = 1u128;
        for _ in 0..n * n + n {
            out = out.checked_mul(field.order() as u128)?;
        }
        Some(out)
    }

    /// The index-th transform in the canonical enumeration: base-q digits,
    /// least significant first — n^2 matrix entries row-major, then the n
    /// shift entries.
    pub fn from_index(field: Field, n: usize, index: u128) -> AffineTransform {
        let q = field.order() as u128;
        let mut rest = index;
        let mut digit = || {
            let d = (rest % q) as u16;
            rest /= q;
            Elem(d)
        };
        let matrix = (0..n).map(|_| (0..n).map(|_| digit()).collect()).collect();
        let shift = (0..n).map(|_| digit()).collect();
        AffineTransform { field, matrix, shift }
    }

    pub fn n(&self) -> usize {
        self.shift.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn apply(&self, point: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        self.matrix
            .iter()
            .zip(&self.shift)
            .map(|(row, &b)| {
                let mut acc = b;
                for (&a, &x) in row.iter().zip(point) {
                    acc = f.add(acc, f.mul(a, x));
                }
                acc
            })
            .collect()
    }

    /// self ∘ inner: apply `inner` first.
    pub fn compose(&self, inner: &AffineTransform) -> AffineTransform {
        let f = &self.field;
        let n = self.n();
        let matrix: Vec<Vec<Elem>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = Elem(0);
                        for t in 0..n {
                            acc = f.add(acc, f.mul(self.matrix[i][t], inner.matrix[t][j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let shift = self.apply(&inner.shift);
        AffineTransform { field: self.field.clone(), matrix, shift }
    }
}

/// A k-point constraint with coefficient rows; accepts f iff every row's
/// weighted sum of f-values over the points is zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constraint {
    field: Field,
    n: usize,
    points: Vec<Vec<Elem>>,
    rows: Vec<Vec<Elem>>,
}

impl Constraint {
    pub fn new(
        field: Field,
        n: usize,
        points: Vec<Vec<Elem>>,
        rows: Vec<Vec<Elem>>,
    ) -> Result<Constraint> {
        let c = Constraint { field, n, points, rows };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let q = self.field.order() as u16;
        let k = self.points.len();
        for pt in &self.points {
            if pt.len() != self.n {
                return Err(Error::ArityMismatch);
            }
            if pt.iter().any(|e| e.0 >= q) {
                return Err(Error::OutOfRange("point code"));
            }
        }
        for row in &self.rows {
            if row.len() != k {
                return Err(Error::ArityMismatch);
            }
            if row.iter().any(|e| e.0 >= q) {
                return Err(Error::OutOfRange("row code"));
            }
            if row.iter().all(|e| e.is_zero()) {
                return Err(Error::OutOfRange("all-zero row"));
            }
        }
        Ok(())
    }

    /// The constraint with no points and no rows: accepts every function.
    /// This is the correct object when the tested family is all of F_q^n.
    pub fn empty(field: Field, n: usize) -> Constraint {
        Constraint { field, n, points: Vec::new(), rows: Vec::new() }
    }

    /// The neutral element of convolution: a single empty point over F_q^0
    /// with unit coefficient.
    pub fn unit(field: Field) -> Constraint {
        Constraint { field, n: 0, points: vec![Vec::new()], rows: vec![vec![Elem(1)]] }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn points(&self) -> &[Vec<Elem>] {
        &self.points
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn accepts_function(&self, f: &FunctionTable) -> Result<bool> {
        if f.field != self.field || f.n != self.n {
            return Err(Error::DomainMismatch);
        }
        let fld = &self.field;
        let values: Vec<Elem> =
            self.points.iter().map(|pt| f.values[point_index(fld, pt)]).collect();
        Ok(self.rows.iter().all(|row| {
            let mut acc = Elem(0);
            for (&l, &v) in row.iter().zip(&values) {
                acc = fld.add(acc, fld.mul(l, v));
            }
            acc.is_zero()
        }))
    }

    /// Row sums against the monomial x^degrees; accepted iff all vanish.
    pub fn accepts_monomial(&self, degrees: &[u32]) -> Result<bool> {
        if degrees.len() != self.n {
            return Err(Error::DomainMismatch);
        }
        let fld = &self.field;
        let values: Vec<Elem> = self
            .points
            .iter()
            .map(|pt| {
                let mut acc = Elem(1);
                for (&c, &e) in pt.iter().zip(degrees) {
                    if e > 0 {
                        acc = fld.mul(acc, fld.pow(c, e as u64));
                    }
                }
                acc
            })
            .collect();
        Ok(self.rows.iter().all(|row| {
            let mut acc = Elem(0);
            for (&l, &v) in row.iter().zip(&values) {
                acc = fld.add(acc, fld.mul(l, v));
            }
            acc.is_zero()
        }))
    }

    /// Points mapped through the transform; rows unchanged.
    pub fn transformed(&self, t: &AffineTransform) -> Result<Constraint> {
        if t.field != self.field || t.n() != self.n {
            return Err(Error::DomainMismatch);
        }
        Ok(Constraint {
            field: self.field.clone(),
            n: self.n,
            points: self.points.iter().map(|pt| t.apply(pt)).collect(),
            rows: self.rows.clone(),
        })
    }

    /// Tensor-style combinator: points are concatenations (first factor's
    /// index moving slowest), rows are coefficient products in the same
    /// order. Accepted degree vectors multiply blockwise.
    pub fn convolve(&self, other: &Constraint) -> Result<Constraint> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let mut points = Vec::with_capacity(self.k() * other.k());
        for p1 in &self.points {
            for p2 in &other.points {
                let mut pt = p1.clone();
                pt.extend_from_slice(p2);
                points.push(pt);
            }
        }
        let mut rows = Vec::with_capacity(self.rows.len() * other.rows.len());
        for r1 in &self.rows {
            for r2 in &other.rows {
                let mut row = Vec::with_capacity(points.len());
                for &l1 in r1 {
                    for &l2 in r2 {
                        row.push(f.mul(l1, l2));
                    }
                }
                rows.push(row);
            }
        }
        Ok(Constraint { field: self.field.clone(), n: self.n + other.n, points, rows })
    }

    /// Concatenates the point lists (duplicates kept) and zero-extends every
    /// row over the other block; accepts exactly the intersection.
    pub fn union_with(&self, other: &Constraint) -> Result<Constraint> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.n != other.n {
            return Err(Error::DomainMismatch);
        }
        let (k1, k2) = (self.k(), other.k());
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        let mut rows = Vec::with_capacity(self.rows.len() + other.rows.len());
        for r in &self.rows {
            let mut row = r.clone();
            row.resize(k1 + k2, Elem(0));
            rows.push(row);
        }
        for r in &other.rows {
            let mut row = vec![Elem(0); k1];
            row.extend_from_slice(r);
            rows.push(row);
        }
        Ok(Constraint { field: self.field.clone(), n: self.n, points, rows })
    }

    /// Extends every point with 1-entries up to arity n. The constant 1 makes
    /// the new coordinates inert: any tail exponents evaluate to 1, so the
    /// accepted degree vectors are the originals with arbitrary tails.
    pub fn pad_to(&self, n: usize) -> Result<Constraint> {
        if n < self.n {
            return Err(Error::ShrinkNotAllowed);
        }
        let points = self
            .points
            .iter()
            .map(|pt| {
                let mut pt = pt.clone();
                pt.resize(n, Elem(1));
                pt
            })
            .collect();
        Ok(Constraint { field: self.field.clone(), n, points, rows: self.rows.clone() })
    }

    /// The univariate constraint accepting x^e for e <= d and rejecting
    /// x^(d+1): the d+2 smallest field elements as points, coefficients the
    /// one-dimensional null space of the Vandermonde system, first nonzero
    /// entry normalized to 1.
    pub fn vandermonde(field: Field, d: u32) -> Result<Constraint> {
        let q = field.order();
        if d > q - 2 {
            return Err(Error::OutOfRange("vandermonde degree"));
        }
        let k = (d + 2) as usize;
        let points: Vec<Elem> = (0..k as u16).map(Elem).collect();
        // rows of the system: one per exponent 0..=d
        let mut m: Vec<Vec<Elem>> = (0..=d as u64)
            .map(|e| points.iter().map(|&a| field.pow(a, e)).collect())
            .collect();
        // forward elimination with the (always available) diagonal pivots
        let rows = m.len();
        for col in 0..rows {
            let pivot = (col..rows)
                .find(|&r| !m[r][col].is_zero())
                .expect("vandermonde system has full row rank");
            m.swap(col, pivot);
            let inv = field.inv(m[col][col])?;
            for v in m[col].iter_mut() {
                *v = field.mul(*v, inv);
            }
            for r in 0..rows {
                if r != col && !m[r][col].is_zero() {
                    let factor = m[r][col];
                    for j in 0..k {
                        let sub = field.mul(factor, m[col][j]);
                        m[r][j] = field.sub(m[r][j], sub);
                    }
                }
            }
        }
        // free column is the last one; back out the null vector
        let mut lambda = vec![Elem(0); k];
        lambda[k - 1] = Elem(1);
        for (r, row) in m.iter().enumerate() {
            lambda[r] = field.neg(row[k - 1]);
        }
        let lead = lambda.iter().position(|v| !v.is_zero()).expect("null vector is nonzero");
        let scale = field.inv(lambda[lead])?;
        for v in lambda.iter_mut() {
            *v = field.mul(*v, scale);
        }
        Ok(Constraint {
            field,
            n: 1,
            points: points.into_iter().map(|e| vec![e]).collect(),
            rows: vec![lambda],
        })
    }

    /// The single-row constraint induced by a polynomial: points are all
    /// domain points where it is nonzero (ascending index), coefficients its
    /// values there. Accepts f iff the full-domain sum of P(x)f(x) is zero.
    pub fn from_polynomial(p: &MultiPoly) -> Result<Constraint> {
        let field = p.field().clone();
        let n = p.n();
        let size = domain_size(&field, n)?;
        let mut values = Vec::with_capacity(size);
        for pt in domain_points(&field, n) {
            values.push(p.eval(&pt)?);
        }
        Self::from_values(field, n, &values)
    }

    /// Same as [`Constraint::from_polynomial`], but from a precomputed dense
    /// value table indexed by point index.
    pub fn from_values(field: Field, n: usize, values: &[Elem]) -> Result<Constraint> {
        let mut points = Vec::new();
        let mut lambda = Vec::new();
        for (idx, &v) in values.iter().enumerate() {
            if !v.is_zero() {
                points.push(point_at(&field, n, idx));
                lambda.push(v);
            }
        }
        if points.is_empty() {
            return Err(Error::ZeroFunction);
        }
        Ok(Constraint { field, n, points, rows: vec![lambda] })
    }
}

#[derive(Deserialize)]
struct ConstraintRepr {
    field: Field,
    n: usize,
    points: Vec<Vec<Elem>>,
    rows: Vec<Vec<Elem>>,
}

impl<'de> Deserialize<'de> for Constraint {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = ConstraintRepr::deserialize(de)?;
        Constraint::new(repr.field, repr.n, repr.points, repr.rows)
            .map_err(serde::de::Error::custom)
    }
}

/// A dense value table of a function F_q^n -> F_q, indexed by point index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionTable {
    field: Field,
    n: usize,
    values: Vec<Elem>,
}

impl FunctionTable {
    pub fn new(field: Field, n: usize, values: Vec<Elem>) -> Result<FunctionTable> {
        if values.len() != domain_size(&field, n)? {
            return Err(Error::ArityMismatch);
        }
        if values.iter().any(|e| e.code() >= field.order()) {
            return Err(Error::OutOfRange("table value"));
        }
        Ok(FunctionTable { field, n, values })
    }

    pub fn zero(field: Field, n: usize) -> Result<FunctionTable> {
        let size = domain_size(&field, n)?;
        Ok(FunctionTable { field, n, values: vec![Elem(0); size] })
    }

    pub fn from_poly(p: &MultiPoly) -> Result<FunctionTable> {
        let field = p.field().clone();
        let n = p.n();
        let mut values = Vec::with_capacity(domain_size(&field, n)?);
        for pt in domain_points(&field, n) {
            values.push(p.eval(&pt)?);
        }
        Ok(FunctionTable { field, n, values })
    }

    pub fn monomial(field: Field, n: usize, degrees: &[u32]) -> Result<FunctionTable> {
        if degrees.len() != n {
            return Err(Error::ArityMismatch);
        }
        let mut values = Vec::with_capacity(domain_size(&field, n)?);
        for pt in domain_points(&field, n) {
            let mut acc = Elem(1);
            for (&c, &e) in pt.iter().zip(degrees) {
                if e > 0 {
                    acc = field.mul(acc, field.pow(c, e as u64));
                }
            }
            values.push(acc);
        }
        Ok(FunctionTable { field, n, values })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn get(&self, idx: usize) -> Elem {
        self.values[idx]
    }

    pub fn set(&mut self, idx: usize, v: Elem) {
        self.values[idx] = v;
    }

    pub fn add(&self, other: &FunctionTable) -> Result<FunctionTable> {
        if self.field != other.field || self.n != other.n {
            return Err(Error::DomainMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(FunctionTable { field: self.field.clone(), n: self.n, values })
    }

    pub fn scale(&self, c: Elem) -> FunctionTable {
        let values = self.values.iter().map(|&v| self.field.mul(v, c)).collect();
        FunctionTable { field: self.field.clone(), n: self.n, values }
    }
}

#[derive(Deserialize)]
struct FunctionTableRepr {
    field: Field,
    n: usize,
    values: Vec<Elem>,
}

impl<'de> Deserialize<'de> for FunctionTable {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = FunctionTableRepr::deserialize(de)?;
        FunctionTable::new(repr.field, repr.n, repr.values).map_err(serde::de::Error::custom)
    }
}

/// All power moments of a dense table at once: the output at index of ē is
/// Σ_x V[x] · x^ē over the whole domain (0^0 = 1). Computed axis by axis in
/// n passes of q^(n+1) table operations — this is what makes exhaustive
/// monomial-acceptance sweeps feasible at large q^n.
pub fn power_moments(field: &Field, n: usize, values: &[Elem]) -> Vec<Elem> {
    let q = field.order() as usize;
    debug_assert_eq!(values.len(), domain_size(field, n).unwrap());
    // pw[c][e] = c^e
    let mut pw = vec![vec![Elem(0); q]; q];
    for c in 0..q {
        for e in 0..q {
            pw[c][e] = field.pow(Elem(c as u16), e as u64);
        }
    }
    let mut cur = values.to_vec();
    let mut line = vec![Elem(0); q];
    let mut stride = 1usize;
    for _axis in 0..n {
        let block = stride * q;
        let mut base_hi = 0;
        while base_hi < cur.len() {
            for lo in 0..stride {
                let base = base_hi + lo;
                for (c, slot) in line.iter_mut().enumerate() {
                    *slot = cur[base + c * stride];
                }
                for e in 0..q {
                    let mut acc = Elem(0);
                    for (c, &v) in line.iter().enumerate() {
                        if !v.is_zero() {
                            acc = field.add(acc, field.mul(v, pw[c][e]));
                        }
                    }
                    cur[base + e * stride] = acc;
                }
            }
            base_hi += block;
        }
        stride = block;
    }
    cur
}
