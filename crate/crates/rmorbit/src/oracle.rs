//! Ground-truth brute force.
//!
//! Everything here is deliberately independent of how constraints are
//! assembled: dimensions are counted from exponent vectors, ranks are
//! computed by Gaussian elimination over the raw value tables, and distance
//! is measured by enumerating actual codewords. The decisive check is
//! [`orbit_span_rank`]: the constraint rows of T∘C over all affine maps T,
//! read as dense functionals on F_q^n, must span the full dual space of the
//! code — that span equality is exactly what makes one constraint's orbit
//! characterize membership.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constraint::{
    domain_size, point_index, AffineTransform, Constraint, FunctionTable,
};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::poly::{border_set, degree_set};
use crate::tester::sample_transform;

/// Domains larger than this are refused for rank certification.
pub const RANK_DOMAIN_LIMIT: u64 = 4096;

/// Default cap on codeword enumeration in [`distance_to_rm`].
pub const DEFAULT_CODEWORD_BUDGET: u64 = 1_000_000;

const BATCH: u64 = 1024;
const STALE_BATCHES: u32 = 8;

/// Number of exponent vectors in {0..q-1}^n with entry sum ≤ d — the
/// dimension of RM[n, d, q], counted directly as a lattice-point sum.
pub fn rm_dimension(n: usize, d: u64, q: u32) -> u64 {
    let cap = (n as u64 * (q as u64 - 1)).min(d) as usize;
    // counts[t] = number of length-j prefixes with entry sum exactly t
    let mut counts = vec![0u128; cap + 1];
    counts[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; cap + 1];
        for (t, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for e in 0..q as usize {
                if t + e <= cap {
                    next[t + e] += c;
                }
            }
        }
        counts = next;
    }
    u64::try_from(counts.iter().sum::<u128>()).expect("dimension out of range")
}

/// A constraint row as a dense functional on F_q^n: coefficient λ_{ij} added
/// at the index of point α_j, coefficients summing where points repeat.
pub fn row_dual_vector(c: &Constraint, row: usize) -> Vec<Elem> {
    let field = c.field();
    let mut v = vec![Elem(0); domain_size(field, c.n()).expect("domain within range")];
    for (j, pt) in c.points().iter().enumerate() {
        let idx = point_index(field, pt);
        v[idx] = field.add(v[idx], c.rows()[row][j]);
    }
    v
}

fn hamming_weight(v: &[Elem]) -> u64 {
    v.iter().filter(|e| !e.is_zero()).count() as u64
}

/// Incrementally maintained reduced row basis over F_q.
struct RowBasis {
    field: Field,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl RowBasis {
    fn new(field: Field) -> RowBasis {
        RowBasis { field, rows: Vec::new(), pivots: Vec::new() }
    }

    fn rank(&self) -> u64 {
        self.rows.len() as u64
    }

    /// Reduces v against the basis; true iff the rank grew.
    fn insert(&mut self, mut v: Vec<Elem>) -> bool {
        let f = self.field.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p];
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        let Some(p) = v.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let inv = f.inv(v[p]).expect("pivot is nonzero");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p];
                for (r, &x) in row.iter_mut().zip(&v) {
                    *r = f.sub(*r, f.mul(c, x));
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RankStatus {
    /// Achieved rank equals the dual dimension.
    Pass,
    /// Exhaustive enumeration finished short of the dual dimension.
    Fail,
    /// Sampled enumeration stalled short — possibly a sampling shortfall.
    Inconclusive,
}

/// Result of the orbit-span computation.
#[derive(Debug, Clone, Serialize)]
pub struct RankCertificate {
    pub q: u32,
    pub n: usize,
    pub d: u64,
    /// q^n minus the code dimension.
    pub dual_dim: u64,
    pub achieved_rank: u64,
    /// Largest Hamming weight among the orbit row functionals folded in —
    /// the spanning-weight witness.
    pub max_row_weight: u64,
    /// How many transforms were processed.
    pub transforms: u64,
    pub exhaustive: bool,
    pub status: RankStatus,
    pub pass: bool,
}

/// Rank of the span of all orbit row functionals of `c`, compared with the
/// dual dimension of RM[n, d, q]. Exhausts all q^(n²+n) transforms when that
/// count fits the budget (no early exit, so the weight witness covers the
/// whole orbit); otherwise runs a deterministic structured family and then
/// seeded random batches until the rank stalls.
pub fn orbit_span_rank(c: &Constraint, d: u64, budget: u64, seed: u64) -> Result<RankCertificate> {
    let field = c.field().clone();
    let n = c.n();
    let q = field.order();
    let m = domain_size(&field, n)?;
    if m as u64 > RANK_DOMAIN_LIMIT {
        return Err(Error::EnumerationBudget { needed: m as u128, budget: RANK_DOMAIN_LIMIT });
    }
    let dual_dim = m as u64 - rm_dimension(n, d, q);
    let total = AffineTransform::count(&field, n).unwrap_or(u128::MAX);
    let exhaustive = total <= budget as u128;

    let mut basis = RowBasis::new(field.clone());
    let mut max_row_weight = 0u64;
    let mut transforms = 0u64;
    let fold = |t: &AffineTransform, basis: &mut RowBasis, max_w: &mut u64| -> Result<()> {
        let tc = c.transformed(t)?;
        for row in 0..tc.row_count() {
            let v = row_dual_vector(&tc, row);
            *max_w = (*max_w).max(hamming_weight(&v));
            basis.insert(v);
        }
        Ok(())
    };

    if exhaustive {
        for idx in 0..total {
            let t = AffineTransform::from_index(field.clone(), n, idx);
            fold(&t, &mut basis, &mut max_row_weight)?;
            transforms += 1;
        }
    } else {
        for t in structured_family(&field, n) {
            fold(&t, &mut basis, &mut max_row_weight)?;
            transforms += 1;
            if basis.rank() == dual_dim {
                break;
            }
        }
        let mut stale = 0u32;
        let mut batch_index = 0u64;
        while basis.rank() < dual_dim && stale < STALE_BATCHES {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(batch_index);
            let before = basis.rank();
            for _ in 0..BATCH {
                let t = sample_transform(&mut rng, &field, n);
                fold(&t, &mut basis, &mut max_row_weight)?;
                transforms += 1;
            }
            stale = if basis.rank() > before { 0 } else { stale + 1 };
            batch_index += 1;
        }
    }

    let achieved_rank = basis.rank();
    let pass = achieved_rank == dual_dim;
    let status = if pass {
        RankStatus::Pass
    } else if exhaustive {
        RankStatus::Fail
    } else {
        RankStatus::Inconclusive
    };
    Ok(RankCertificate {
        q,
        n,
        d,
        dual_dim,
        achieved_rank,
        max_row_weight,
        transforms,
        exhaustive,
        status,
        pass,
    })
}

/// Deterministic transform family used before random sampling: diagonal,
/// permutation, and single-entry shear matrices, each with every shift.
fn structured_family(field: &Field, n: usize) -> impl Iterator<Item = AffineTransform> + '_ {
    let q = field.order() as usize;
    let mut matrices: Vec<Vec<Vec<Elem>>> = Vec::new();

    let mut diag = vec![0usize; n];
    loop {
        let m = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Elem(diag[i] as u16) } else { Elem(0) }).collect())
            .collect();
        matrices.push(m);
        let mut t = 0;
        loop {
            if t == n {
                break;
            }
            diag[t] += 1;
            if diag[t] < q {
                break;
            }
            diag[t] = 0;
            t += 1;
        }
        if t == n {
            break;
        }
    }

    if n <= 6 {
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| {
            let m = (0..n)
                .map(|i| (0..n).map(|j| Elem(u16::from(p[i] == j))).collect())
                .collect();
            matrices.push(m);
        });
    }

    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for code in 1..q {
                let mut m: Vec<Vec<Elem>> = (0..n)
                    .map(|r| (0..n).map(|c| Elem(u16::from(r == c))).collect())
                    .collect();
                m[i][j] = Elem(code as u16);
                matrices.push(m);
            }
        }
    }

    let shifts = domain_size(field, n).expect("domain within range");
    matrices.into_iter().flat_map(move |m| {
        (0..shifts).map(move |s| {
            let shift = crate::constraint::point_at(field, n, s);
            AffineTransform::new(field.clone(), m.clone(), shift).expect("square matrix")
        })
    })
}

fn permutations(items: &mut Vec<usize>, start: usize, emit: &mut impl FnMut(&[usize])) {
    if start == items.len() {
        emit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permutations(items, start + 1, emit);
        items.swap(start, i);
    }
}

/// Outcome of the monomial acceptance sweep.
#[derive(Debug, Clone, Serialize)]
pub struct BorderReport {
    pub q: u32,
    pub n: usize,
    pub d: u64,
    /// How many in-code exponent vectors were checked accepted.
    pub deg_checked: u64,
    /// In-code vectors the constraint wrongly rejects.
    pub deg_failures: Vec<Vec<u32>>,
    /// How many border vectors were searched for a rejecting transform.
    pub border_checked: u64,
    /// Border vectors for which no rejecting transform was found.
    pub uncovered: Vec<Vec<u32>>,
    /// Whether the transform search was exhaustive (failure is conclusive).
    pub exhaustive: bool,
    pub pass: bool,
}

/// Checks the sufficient condition for orbit characterization: the
/// constraint accepts every monomial the code contains, and for every
/// minimal absent exponent vector some transform of the constraint rejects
/// that monomial. The structured family is searched first, then all
/// transforms when the budget allows, then seeded random draws.
pub fn verify_deg_border(c: &Constraint, d: u64, budget: u64, seed: u64) -> Result<BorderReport> {
    let field = c.field().clone();
    let n = c.n();
    let q = field.order();

    let mut deg_failures = Vec::new();
    let deg = degree_set(n, d, q);
    for e in &deg {
        if !c.accepts_monomial(e)? {
            deg_failures.push(e.clone());
        }
    }

    let border = border_set(n, d, q, field.p(), field.s());
    let total = AffineTransform::count(&field, n).unwrap_or(u128::MAX);
    let exhaustive = total <= budget as u128;
    let mut uncovered: Vec<Vec<u32>> = border.clone();

    let sweep = |t: &AffineTransform, uncovered: &mut Vec<Vec<u32>>| -> Result<()> {
        let tc = c.transformed(t)?;
        let mut i = 0;
        while i < uncovered.len() {
            if !tc.accepts_monomial(&uncovered[i])? {
                uncovered.swap_remove(i);
            } else {
                i += 1;
            }
        }
        Ok(())
    };

    for t in structured_family(&field, n) {
        if uncovered.is_empty() {
            break;
        }
        sweep(&t, &mut uncovered)?;
    }
    if !uncovered.is_empty() {
        if exhaustive {
            for idx in 0..total {
                if uncovered.is_empty() {
                    break;
                }
                let t = AffineTransform::from_index(field.clone(), n, idx);
                sweep(&t, &mut uncovered)?;
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..budget {
                if uncovered.is_empty() {
                    break;
                }
                let t = sample_transform(&mut rng, &field, n);
                sweep(&t, &mut uncovered)?;
            }
        }
    }

    uncovered.sort();
    let pass = deg_failures.is_empty() && uncovered.is_empty();
    Ok(BorderReport {
        q,
        n,
        d,
        deg_checked: deg.len() as u64,
        deg_failures,
        border_checked: border.len() as u64,
        uncovered,
        exhaustive,
        pass,
    })
}

/// Exact normalized Hamming distance from a table to the nearest codeword.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DistanceReport {
    /// Positions where the nearest codeword differs.
    pub mismatches: u64,
    pub domain: u64,
    pub distance: f64,
    /// How many codewords were enumerated.
    pub codewords: u64,
}

/// Minimum distance from f to RM[n, d, q] by enumerating every codeword:
/// all coefficient assignments over the monomial basis of the code.
pub fn distance_to_rm(f: &FunctionTable, d: u64, budget: u64) -> Result<DistanceReport> {
    let field = f.field().clone();
    let n = f.n();
    let q = field.order();
    let basis_exps = degree_set(n, d, q);
    let dim = basis_exps.len() as u32;
    let count = (q as u128).checked_pow(dim).unwrap_or(u128::MAX);
    if count > budget as u128 {
        return Err(Error::EnumerationBudget { needed: count, budget });
    }
    let m = domain_size(&field, n)?;
    let basis: Vec<FunctionTable> = basis_exps
        .iter()
        .map(|e| FunctionTable::monomial(field.clone(), n, e))
        .collect::<Result<_>>()?;

    let mut best = m as u64 + 1;
    let mut coeffs = vec![0u16; dim as usize];
    let mut word = vec![Elem(0); m];
    loop {
        for slot in word.iter_mut() {
            *slot = Elem(0);
        }
        for (c, b) in coeffs.iter().zip(&basis) {
            if *c == 0 {
                continue;
            }
            for (slot, &v) in word.iter_mut().zip(b.values()) {
                *slot = field.add(*slot, field.mul(Elem(*c), v));
            }
        }
        let mismatches = word
            .iter()
            .zip(f.values())
            .filter(|(&a, &b)| a != b)
            .count() as u64;
        best = best.min(mismatches);
        if best == 0 {
            break;
        }
        let mut t = 0;
        loop {
            if t == dim as usize {
                break;
            }
            coeffs[t] += 1;
            if (coeffs[t] as u32) < q {
                break;
            }
            coeffs[t] = 0;
            t += 1;
        }
        if t == dim as usize {
            break;
        }
    }
    Ok(DistanceReport {
        mismatches: best,
        domain: m as u64,
        distance: best as f64 / m as f64,
        codewords: count as u64,
    })
}

/// Mutation helper: the same constraint with one coefficient zeroed.
pub fn zero_coefficient(c: &Constraint, row: usize, col: usize) -> Result<Constraint> {
    let mut rows = c.rows().to_vec();
    rows[row][col] = Elem(0);
    Constraint::new(c.field().clone(), c.n(), c.points().to_vec(), rows)
}

/// Mutation helper: the same constraint with one point (and its column in
/// every row) removed.
pub fn delete_point(c: &Constraint, col: usize) -> Result<Constraint> {
    let mut points = c.points().to_vec();
    points.remove(col);
    let rows = c
        .rows()
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.remove(col);
            r
        })
        .collect();
    Constraint::new(c.field().clone(), c.n(), points, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::rm_constraint;

    #[test]
    fn dimension_examples_and_lattice_cross_check() {
        assert_eq!(rm_dimension(2, 2, 3), 6);
        assert_eq!(rm_dimension(5, 0, 7), 1);
        assert_eq!(rm_dimension(2, 1, 2), 3);
        for q in [2u32, 3, 4] {
            for n in 1..=3usize {
                for d in 0..=8u64 {
                    assert_eq!(
                        rm_dimension(n, d, q),
                        degree_set(n, d, q).len() as u64,
                        "q={q} n={n} d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn dual_vector_semantics() {
        let f2 = Field::new(2, 1).unwrap();
        let c = rm_constraint(&f2, 2, 1).unwrap();
        let v = row_dual_vector(&c, 0);
        assert_eq!(v, vec![Elem(1); 4]);
        assert_eq!(hamming_weight(&v), 4);

        // duplicate points sum their coefficients — here to zero
        let dup = Constraint::new(
            f2.clone(),
            1,
            vec![vec![Elem(0)], vec![Elem(0)]],
            vec![vec![Elem(1), Elem(1)]],
        )
        .unwrap();
        let v = row_dual_vector(&dup, 0);
        assert_eq!(hamming_weight(&v), 0);
    }

    #[test]
    fn dual_vector_inner_product_is_the_row_sum() {
        let f4 = Field::new(2, 2).unwrap();
        let c = rm_constraint(&f4, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f = {
                let mut table = FunctionTable::zero(f4.clone(), 2).unwrap();
                for idx in 0..16 {
                    table.set(idx, Elem(rand::Rng::gen_range(&mut rng, 0..4)));
                }
                table
            };
            for row in 0..c.row_count() {
                let v = row_dual_vector(&c, row);
                let mut dot = Elem(0);
                for (&a, &b) in v.iter().zip(f.values()) {
                    dot = f4.add(dot, f4.mul(a, b));
                }
                let mut direct = Elem(0);
                for (j, pt) in c.points().iter().enumerate() {
                    let val = f.get(point_index(&f4, pt));
                    direct = f4.add(direct, f4.mul(c.rows()[row][j], val));
                }
                assert_eq!(dot, direct);
            }
        }
    }

    #[test]
    fn rank_certificate_for_the_square_test() {
        let f2 = Field::new(2, 1).unwrap();
        let c = rm_constraint(&f2, 2, 1).unwrap();
        let cert = orbit_span_rank(&c, 1, 10_000_000, 0).unwrap();
        assert_eq!(cert.dual_dim, 1);
        assert_eq!(cert.achieved_rank, 1);
        assert_eq!(cert.max_row_weight, 4);
        assert!(cert.exhaustive);
        assert_eq!(cert.transforms, 64);
        assert_eq!(cert.status, RankStatus::Pass);
        assert!(cert.pass);
    }

    #[test]
    fn rank_certificate_over_f3() {
        let f3 = Field::new(3, 1).unwrap();
        let c = rm_constraint(&f3, 2, 2).unwrap();
        let cert = orbit_span_rank(&c, 2, 10_000_000, 0).unwrap();
        assert_eq!(cert.dual_dim, 3);
        assert_eq!(cert.achieved_rank, 3);
        assert!(cert.pass);
        assert!(cert.max_row_weight <= c.k() as u64);
    }

    #[test]
    fn degenerate_code_has_trivial_dual() {
        let f2 = Field::new(2, 1).unwrap();
        let c = rm_constraint(&f2, 2, 2).unwrap();
        let cert = orbit_span_rank(&c, 2, 10_000_000, 0).unwrap();
        assert_eq!(cert.dual_dim, 0);
        assert_eq!(cert.achieved_rank, 0);
        assert!(cert.pass);
    }

    #[test]
    fn deficit_is_fail_when_exhaustive_and_inconclusive_when_sampled() {
        // the square constraint's orbit spans a 1-dimensional space, so
        // demanding the dual of the constant-only code (dimension 3) fails
        let f2 = Field::new(2, 1).unwrap();
        let c = rm_constraint(&f2, 2, 1).unwrap();
        let exact = orbit_span_rank(&c, 0, 10_000_000, 0).unwrap();
        assert_eq!(exact.dual_dim, 3);
        assert_eq!(exact.achieved_rank, 1);
        assert_eq!(exact.status, RankStatus::Fail);
        assert!(!exact.pass);

        let sampled = orbit_span_rank(&c, 0, 32, 5).unwrap();
        assert!(!sampled.exhaustive);
        assert_eq!(sampled.achieved_rank, 1);
        assert_eq!(sampled.status, RankStatus::Inconclusive);
        assert!(!sampled.pass);
    }

    #[test]
    fn sampled_mode_still_reaches_full_rank() {
        let f2 = Field::new(2, 1).unwrap();
        let c = rm_constraint(&f2, 2, 1).unwrap();
        let cert = orbit_span_rank(&c, 1, 32, 5).unwrap();
        assert!(!cert.exhaustive);
        assert_eq!(cert.status, RankStatus::Pass);
        assert!(cert.pass);
    }

    #[test]
    fn domain_cap_is_enforced() {
        let f2 = Field::new(2, 1).unwrap();
        let c = Constraint::empty(f2, 13);
        match orbit_span_rank(&c, 1, 100, 0) {
            Err(Error::EnumerationBudget { needed, budget }) => {
                assert_eq!(needed, 8192);
                assert_eq!(budget, RANK_DOMAIN_LIMIT);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn border_report_for_the_square_test() {
        let f2 = Field::new(2, 1).unwrap();
        let c = rm_constraint(&f2, 2, 1).unwrap();
        let report = verify_deg_border(&c, 1, 10_000_000, 0).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.deg_checked, 3);
        assert_eq!(report.border_checked, 1);
        assert!(report.exhaustive);
        assert!(report.deg_failures.is_empty());
        assert!(report.uncovered.is_empty());
    }

    #[test]
    fn border_report_over_f4() {
        let f4 = Field::new(2, 2).unwrap();
        let c = rm_constraint(&f4, 2, 2).unwrap();
        let report = verify_deg_border(&c, 2, 10_000_000, 0).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.deg_checked, 6);
    }

    #[test]
    fn mutations_flip_a_check() {
        let f2 = Field::new(2, 1).unwrap();
        let c = rm_constraint(&f2, 2, 1).unwrap();
        let corrupted = zero_coefficient(&c, 0, 0).unwrap();
        let report = verify_deg_border(&corrupted, 1, 10_000_000, 0).unwrap();
        assert!(!report.pass);

        let shrunk = delete_point(&c, 3).unwrap();
        assert_eq!(shrunk.k(), 3);
        let report = verify_deg_border(&shrunk, 1, 10_000_000, 0).unwrap();
        assert!(!report.pass);
    }

    #[test]
    fn rank_and_border_checks_agree() {
        let f3 = Field::new(3, 1).unwrap();
        for d in [1u64, 2] {
            let c = rm_constraint(&f3, 2, d).unwrap();
            let cert = orbit_span_rank(&c, d, 10_000_000, 0).unwrap();
            let border = verify_deg_border(&c, d, 10_000_000, 0).unwrap();
            assert_eq!(cert.pass, border.pass, "d={d}");
            assert!(cert.pass);
        }
    }

    #[test]
    fn distance_examples() {
        let f2 = Field::new(2, 1).unwrap();
        let product = FunctionTable::monomial(f2.clone(), 2, &[1, 1]).unwrap();
        let report = distance_to_rm(&product, 1, DEFAULT_CODEWORD_BUDGET).unwrap();
        assert_eq!(report.mismatches, 1);
        assert_eq!(report.domain, 4);
        assert!((report.distance - 0.25).abs() < 1e-12);
        assert_eq!(report.codewords, 8);

        let line = FunctionTable::monomial(f2.clone(), 2, &[1, 0]).unwrap();
        let report = distance_to_rm(&line, 1, DEFAULT_CODEWORD_BUDGET).unwrap();
        assert_eq!(report.mismatches, 0);

        // coset property
        let shifted = product.add(&line).unwrap();
        let report = distance_to_rm(&shifted, 1, DEFAULT_CODEWORD_BUDGET).unwrap();
        assert_eq!(report.mismatches, 1);

        match distance_to_rm(&product, 1, 4) {
            Err(Error::EnumerationBudget { needed, budget }) => {
                assert_eq!(needed, 8);
                assert_eq!(budget, 4);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn certificate_serialization() {
        let f2 = Field::new(2, 1).unwrap();
        let c = rm_constraint(&f2, 2, 1).unwrap();
        let cert = orbit_span_rank(&c, 1, 10_000_000, 0).unwrap();
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["status"], "pass");
        for key in ["q", "n", "d", "dual_dim", "achieved_rank", "max_row_weight", "pass"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }
}
