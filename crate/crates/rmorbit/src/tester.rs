//! The randomized local tester.
//!
//! One trial: draw T(x) = Ax + β with A uniform over ALL n×n matrices
//! (singular ones included — that is what makes the acceptance predicate
//! characterize the code exactly), read the tested function at the k
//! transformed constraint points, and accept iff every coefficient row sums
//! to zero. Rejection probability can be estimated by Monte Carlo trials or
//! measured exactly by enumerating all q^(n²+n) transforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constraint::{point_index, AffineTransform, Constraint, FunctionTable};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// Default cap on exhaustive transform enumeration.
pub const DEFAULT_TRANSFORM_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TestMode {
    Exact,
    Sampled,
}

/// Outcome of a rejection-probability measurement.
#[derive(Debug, Clone, Serialize)]
pub struct TestReport {
    pub trials: u64,
    pub rejections: u64,
    pub estimate: f64,
    pub mode: TestMode,
    /// RNG seed; 0 and meaningless in exact mode.
    pub seed: u64,
}

/// A uniformly random affine map on F_q^n.
pub fn sample_transform<R: Rng>(rng: &mut R, field: &Field, n: usize) -> AffineTransform {
    let q = field.order() as u16;
    let matrix = (0..n)
        .map(|_| (0..n).map(|_| Elem(rng.gen_range(0..q))).collect())
        .collect();
    let shift = (0..n).map(|_| Elem(rng.gen_range(0..q))).collect();
    AffineTransform::new(field.clone(), matrix, shift).expect("matrix is square by construction")
}

fn check_domains(c: &Constraint, f: &FunctionTable) -> Result<()> {
    if f.field() != c.field() || f.n() != c.n() {
        return Err(Error::DomainMismatch);
    }
    Ok(())
}

/// One trial of the tester: true means accept. Reads f at exactly the k
/// transformed points.
pub fn test_once(c: &Constraint, f: &FunctionTable, t: &AffineTransform) -> Result<bool> {
    check_domains(c, f)?;
    if t.field() != c.field() || t.n() != c.n() {
        return Err(Error::DomainMismatch);
    }
    let field = c.field();
    let values: Vec<Elem> = c
        .points()
        .iter()
        .map(|pt| f.get(point_index(field, &t.apply(pt))))
        .collect();
    for row in c.rows() {
        let mut acc = Elem(0);
        for (&l, &v) in row.iter().zip(&values) {
            acc = field.add(acc, field.mul(l, v));
        }
        if !acc.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monte Carlo rejection probability. Trial i draws its transform from
/// stream i of a ChaCha generator seeded with `seed`, so the outcome of any
/// prefix of trials is independent of the total trial count.
pub fn estimate_rejection(
    c: &Constraint,
    f: &FunctionTable,
    trials: u64,
    seed: u64,
) -> Result<TestReport> {
    check_domains(c, f)?;
    let rejections = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let t = sample_transform(&mut rng, c.field(), c.n());
            u64::from(!test_once(c, f, &t).expect("domains were checked"))
        })
        .sum();
    let estimate = if trials == 0 { 0.0 } else { rejections as f64 / trials as f64 };
    Ok(TestReport { trials, rejections, estimate, mode: TestMode::Sampled, seed })
}

/// Exact rejection probability over all q^(n²+n) affine transforms.
pub fn exact_rejection(c: &Constraint, f: &FunctionTable, budget: u64) -> Result<TestReport> {
    check_domains(c, f)?;
    let total = AffineTransform::count(c.field(), c.n()).unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(Error::EnumerationBudget { needed: total, budget });
    }
    let total = total as u64;
    let rejections = (0..total)
        .into_par_iter()
        .map(|idx| {
            let t = AffineTransform::from_index(c.field().clone(), c.n(), idx as u128);
            u64::from(!test_once(c, f, &t).expect("domains were checked"))
        })
        .sum();
    let estimate = if total == 0 { 0.0 } else { rejections as f64 / total as f64 };
    Ok(TestReport { trials: total, rejections, estimate, mode: TestMode::Exact, seed: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::rm_constraint;
    use crate::poly::MultiPoly;

    fn square_test_and_product() -> (Constraint, FunctionTable) {
        let f2 = Field::new(2, 1).unwrap();
        let c = rm_constraint(&f2, 2, 1).unwrap();
        let f = FunctionTable::monomial(f2, 2, &[1, 1]).unwrap();
        (c, f)
    }

    #[test]
    fn sampler_is_uniform_on_the_four_line_transforms() {
        let f2 = Field::new(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut counts = [0u32; 4];
        let draws = 10_000;
        for _ in 0..draws {
            let t = sample_transform(&mut rng, &f2, 1);
            let a = t.apply(&[Elem(1)])[0].0 ^ t.apply(&[Elem(0)])[0].0;
            let b = t.apply(&[Elem(0)])[0].0;
            counts[(2 * a + b) as usize] += 1;
        }
        // 3 sigma around p = 1/4 over 10^4 draws
        for (i, &c) in counts.iter().enumerate() {
            let freq = c as f64 / draws as f64;
            assert!((freq - 0.25).abs() < 0.013, "transform {i}: {freq}");
        }
    }

    #[test]
    fn sampled_entries_stay_in_range() {
        let f9 = Field::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let t = sample_transform(&mut rng, &f9, 2);
            for pt in [[Elem(0), Elem(0)], [Elem(1), Elem(0)], [Elem(0), Elem(1)]] {
                assert!(t.apply(&pt).iter().all(|e| e.0 < 9));
            }
        }
    }

    #[test]
    fn test_once_equals_transform_then_accept() {
        let (c, f) = square_test_and_product();
        let total = AffineTransform::count(c.field(), 2).unwrap();
        for idx in 0..total {
            let t = AffineTransform::from_index(c.field().clone(), 2, idx);
            let via_transform = c.transformed(&t).unwrap().accepts_function(&f).unwrap();
            assert_eq!(test_once(&c, &f, &t).unwrap(), via_transform, "idx={idx}");
        }
    }

    #[test]
    fn every_codeword_passes_every_transform() {
        let f2 = Field::new(2, 1).unwrap();
        let c = rm_constraint(&f2, 2, 1).unwrap();
        for mask in 0u32..8 {
            let mut poly = MultiPoly::zero(f2.clone(), 2);
            let basis = [[0u32, 0], [1, 0], [0, 1]];
            for (bit, exps) in basis.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    poly = poly.add(&MultiPoly::monomial(f2.clone(), 2, exps, Elem(1)).unwrap()).unwrap();
                }
            }
            let f = FunctionTable::from_poly(&poly).unwrap();
            let report = exact_rejection(&c, &f, 1000).unwrap();
            assert_eq!(report.rejections, 0, "mask={mask}");
            assert_eq!(report.trials, 64);
            assert_eq!(report.mode, TestMode::Exact);
        }
    }

    #[test]
    fn the_product_function_is_rejected_at_the_known_rate() {
        // x1x2 summed over the image of the full square is nonzero exactly
        // when the matrix is invertible: 6 invertible matrices × 4 shifts
        let (c, f) = square_test_and_product();
        let report = exact_rejection(&c, &f, 1000).unwrap();
        assert_eq!(report.trials, 64);
        assert_eq!(report.rejections, 24);
        assert!((report.estimate - 0.375).abs() < 1e-12);
    }

    #[test]
    fn rejection_is_invariant_under_adding_a_codeword() {
        let (c, f) = square_test_and_product();
        let f2 = c.field().clone();
        let mut shifted = f;
        let line = FunctionTable::monomial(f2.clone(), 2, &[1, 0]).unwrap();
        shifted = shifted.add(&line).unwrap();
        let report = exact_rejection(&c, &shifted, 1000).unwrap();
        assert_eq!(report.rejections, 24);
    }

    #[test]
    fn monte_carlo_matches_exact_within_three_sigma() {
        let (c, f) = square_test_and_product();
        let trials = 10_000;
        let report = estimate_rejection(&c, &f, trials, 7).unwrap();
        let p = 0.375;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((report.estimate - p).abs() < 3.0 * sigma, "estimate={}", report.estimate);
        assert_eq!(report.mode, TestMode::Sampled);
        assert_eq!(report.seed, 7);
    }

    #[test]
    fn trials_are_prefix_stable() {
        let (c, f) = square_test_and_product();
        let short = estimate_rejection(&c, &f, 500, 13).unwrap();
        let long = estimate_rejection(&c, &f, 1500, 13).unwrap();
        // outcomes of trials 500..1500, recomputed one by one
        let mut tail = 0;
        for trial in 500..1500u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(13);
            rng.set_stream(trial);
            let t = sample_transform(&mut rng, c.field(), 2);
            if !test_once(&c, &f, &t).unwrap() {
                tail += 1;
            }
        }
        assert_eq!(long.rejections, short.rejections + tail);
        // identical runs agree exactly
        let again = estimate_rejection(&c, &f, 500, 13).unwrap();
        assert_eq!(again.rejections, short.rejections);
    }

    #[test]
    fn domain_and_budget_errors() {
        let (c, f) = square_test_and_product();
        let f3 = Field::new(3, 1).unwrap();
        let other = FunctionTable::zero(f3, 2).unwrap();
        assert!(matches!(estimate_rejection(&c, &other, 10, 0), Err(Error::DomainMismatch)));
        match exact_rejection(&c, &f, 10) {
            Err(Error::EnumerationBudget { needed, budget }) => {
                assert_eq!(needed, 64);
                assert_eq!(budget, 10);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn report_serialization() {
        let (c, f) = square_test_and_product();
        let report = exact_rejection(&c, &f, 1000).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["mode"], "exact");
        assert_eq!(json["trials"], 64);
        assert_eq!(json["rejections"], 24);
    }
}
