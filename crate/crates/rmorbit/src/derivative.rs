//! The central gadget polynomial P in p variables over F_q, q = p^s:
//! the (p-1)-fold iterated directional difference of x_p^(q-1), taken in
//! fresh directions x_1..x_{p-1}, divided exactly by x_1 ⋯ x_{p-1}.
//!
//! P is homogeneous of total degree q - p, vanishes on all but roughly
//! 2^{p-1} q^{p-1} of the q^p domain points, and the single-row constraint
//! "sum of P(x) f(x) over the domain is zero" accepts every p-variate
//! monomial of total degree below p(q - q/p) while rejecting the canonical
//! monomial (q - q/p, ..., q - q/p). Those three facts are what the rest of
//! the construction is built on, and [`verify_core`] checks all of them
//! exhaustively.

use serde::Serialize;

use crate::constraint::{power_moments, Constraint};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::poly::MultiPoly;

/// Default cap on exhaustive point enumerations (q^p and domain sweeps).
pub const DEFAULT_POINT_BUDGET: u64 = 100_000_000;

/// Subset expansions are capped at 2^20 terms of the difference order.
const MAX_DIFFERENCE_ORDER: u32 = 20;

fn difference_order_guard(field: &Field) -> Result<()> {
    if field.p() - 1 > MAX_DIFFERENCE_ORDER {
        return Err(Error::EnumerationBudget {
            needed: 1u128 << (field.p() - 1).min(127),
            budget: 1u64 << MAX_DIFFERENCE_ORDER,
        });
    }
    Ok(())
}

/// The numerator in closed form: the alternating sum over subsets I of the
/// direction variables of (x_p + Σ_{i∈I} x_i)^(q-1), with sign
/// (-1)^(p-1-|I|). That sign makes the sum equal the iterated difference
/// operator applied to x_p^(q-1), so for q = p the quotient below reduces to
/// the constant (p-1)!.
pub fn numerator(field: &Field) -> Result<MultiPoly> {
    difference_order_guard(field)?;
    let p = field.p() as usize;
    let q = field.order() as u64;
    let mut acc = MultiPoly::zero(field.clone(), p);
    for mask in 0u64..1 << (p - 1) {
        let mut coeffs = vec![Elem(0); p];
        coeffs[p - 1] = Elem(1);
        for (i, c) in coeffs.iter_mut().enumerate().take(p - 1) {
            if mask >> i & 1 == 1 {
                *c = Elem(1);
            }
        }
        let term = MultiPoly::linear_power(field.clone(), &coeffs, q - 1)?;
        if (p - 1 - mask.count_ones() as usize) % 2 == 0 {
            acc = acc.add(&term)?;
        } else {
            acc = acc.sub(&term)?;
        }
    }
    Ok(acc)
}

/// The same numerator computed the way it is defined: repeatedly replacing
/// g(x_p) by g(x_p + x_i) - g(x_p), one fresh direction at a time.
pub fn numerator_by_iteration(field: &Field) -> Result<MultiPoly> {
    difference_order_guard(field)?;
    let p = field.p() as usize;
    let q = field.order();
    let mut exps = vec![0u32; p];
    exps[p - 1] = q - 1;
    let mut g = MultiPoly::monomial(field.clone(), p, &exps, Elem(1))?;
    for i in 0..p - 1 {
        g = g.substitute_shift(p - 1, i).sub(&g)?;
    }
    Ok(g)
}

/// P evaluated on all of F_q^p, indexed by point index, without touching the
/// materialized polynomial. At a point whose direction coordinates include z
/// zeros, each vanished direction turns one difference into a formal
/// derivative, and P's value reduces to
///   (-1)^z z! · [ Σ_{J ⊆ T} (-1)^(|T|-|J|) (β_p + Σ_J β_i)^(q-1-z) ] / Π_T β_i
/// with T the nonzero directions. This is O(2^|T|) per point instead of one
/// term-by-term polynomial evaluation, which is what makes q = 25 (nearly
/// ten million points) take seconds.
pub fn core_values(field: &Field) -> Vec<Elem> {
    let p = field.p() as usize;
    let q = field.order() as usize;
    let size = usize::try_from((q as u128).pow(p as u32)).expect("domain too large");
    let dirs = p - 1;

    // (-1)^z z! mod p, as elements of the prime subfield
    let mut zfac = vec![Elem(0); p];
    let mut fact = 1u64;
    for (z, slot) in zfac.iter_mut().enumerate() {
        if z > 0 {
            fact = fact * z as u64 % field.p() as u64;
        }
        let mut v = fact as u32;
        if z % 2 == 1 {
            v = (field.p() - v) % field.p();
        }
        *slot = Elem(v as u16);
    }

    let mut out = vec![Elem(0); size];
    let mut point = vec![Elem(0); p];
    let mut dir = vec![Elem(0); dirs.max(1)];
    let mut sums = vec![Elem(0); 1 << dirs];
    for (idx, slot) in out.iter_mut().enumerate() {
        let mut rest = idx;
        for c in point.iter_mut() {
            *c = Elem((rest % q) as u16);
            rest /= q;
        }
        let bp = point[p - 1];
        let mut t = 0usize;
        for &c in point.iter().take(dirs) {
            if !c.is_zero() {
                dir[t] = c;
                t += 1;
            }
        }
        let z = dirs - t;
        let e = (q - 1 - z) as u64;

        sums[0] = bp;
        let mut acc = field.pow(bp, e);
        if t % 2 == 1 {
            acc = field.neg(acc);
        }
        for mask in 1usize..1 << t {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = field.add(sums[mask ^ (1 << low)], dir[low]);
            let v = field.pow(sums[mask], e);
            if (t as u32).wrapping_sub(mask.count_ones()) % 2 == 0 {
                acc = field.add(acc, v);
            } else {
                acc = field.sub(acc, v);
            }
        }
        if acc.is_zero() {
            continue;
        }
        let mut denom = Elem(1);
        for &d in dir.iter().take(t) {
            denom = field.mul(denom, d);
        }
        let inv = field.inv(denom).expect("product of nonzero elements");
        *slot = field.mul(zfac[z], field.mul(acc, inv));
    }
    out
}

/// Largest admissible nonzero-point count: (2^{p-1} + p - 1) q^{p-1}.
pub fn upper_count_bound(q: u32, p: u32) -> u128 {
    ((1u128 << (p - 1)) + p as u128 - 1) * (q as u128).pow(p - 1)
}

/// Smallest admissible count (often vacuously negative at small q):
/// (2^{p-1} - p - 1) q^{p-1} - 2^{p-1}(2^{p-1} - 1) q^{p-2}.
pub fn lower_count_bound(q: u32, p: u32) -> i128 {
    let two = 1i128 << (p - 1);
    let main = (two - p as i128 - 1) * (q as i128).pow(p - 1);
    main - two * (two - 1) * (q as i128).pow(p - 2)
}

fn gate_points(field: &Field, budget: u64) -> Result<u128> {
    let needed = (field.order() as u128)
        .checked_pow(field.p())
        .unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(Error::EnumerationBudget { needed, budget });
    }
    Ok(needed)
}

/// The quotient polynomial together with its exact nonzero-point count.
#[derive(Debug, Clone)]
pub struct CorePolynomial {
    field: Field,
    poly: MultiPoly,
    nonzero_count: u64,
}

impl CorePolynomial {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn nonzero_count(&self) -> u64 {
        self.nonzero_count
    }
}

/// Materializes P = numerator / (x_1 ⋯ x_{p-1}) and counts its nonzero
/// points exhaustively. Division failing or a count bound failing would
/// falsify the construction itself, so those are hard assertions.
pub fn core_polynomial(field: &Field, budget: u64) -> Result<CorePolynomial> {
    gate_points(field, budget)?;
    let p = field.p();
    let q = field.order();
    let num = numerator(field)?;
    let vars: Vec<usize> = (0..p as usize - 1).collect();
    let poly = num.divide_by_vars(&vars)?;
    assert_eq!(
        poly.homogeneous_degree(),
        Some((q - p) as u64),
        "quotient must be homogeneous of degree q - p"
    );
    let values = core_values(field);
    let nonzero_count = values.iter().filter(|v| !v.is_zero()).count() as u64;
    assert!(
        (nonzero_count as u128) <= upper_count_bound(q, p),
        "nonzero count {nonzero_count} exceeds the upper bound at q={q}"
    );
    assert!(
        (nonzero_count as i128) >= lower_count_bound(q, p),
        "nonzero count {nonzero_count} below the lower bound at q={q}"
    );
    Ok(CorePolynomial { field: field.clone(), poly, nonzero_count })
}

/// The single-row constraint induced by P over F_q^p: points are P's
/// nonzero points, coefficients are P's values there.
pub fn core_constraint(field: &Field, budget: u64) -> Result<Constraint> {
    gate_points(field, budget)?;
    // materialize first: a division failure must abort even though the
    // values table alone could be produced without it
    let core = core_polynomial(field, budget)?;
    let values = core_values(field);
    Constraint::from_values(field.clone(), field.p() as usize, &values)
        .map(|c| {
            debug_assert_eq!(c.k() as u64, core.nonzero_count());
            c
        })
}

/// Everything [`verify_core`] measured, in one serializable report.
#[derive(Debug, Clone, Serialize)]
pub struct CoreReport {
    pub q: u32,
    pub p: u32,
    pub s: u32,
    /// Number of nonzero points of P = the constraint's query count.
    pub k: u64,
    pub upper_bound: u64,
    pub lower_bound: i64,
    /// How many monomials below the degree threshold were checked accepted.
    pub accept_checks: u64,
    /// Whether the canonical monomial is rejected.
    pub reject_check: bool,
    pub pass: bool,
    /// Witness description for the first failed check, if any.
    pub failure: Option<String>,
}

/// Exhaustive verification of the three guarantees of P:
/// every p-variate monomial with entries <= q-1 and total degree below
/// p(q - q/p) is accepted, the canonical monomial (q-q/p, ..., q-q/p) is
/// rejected, and the nonzero-point count lies between the two bounds.
///
/// Acceptance is checked through the full power-moment transform of P's
/// value table: the moment at ē is exactly the constraint's row sum against
/// x^ē, so one transform covers all q^p monomials at once.
pub fn verify_core(field: &Field, budget: u64) -> Result<CoreReport> {
    gate_points(field, budget)?;
    let p = field.p();
    let q = field.order();
    let pu = p as usize;

    // materialized quotient: validates divisibility and homogeneity
    let num = numerator(field)?;
    let vars: Vec<usize> = (0..pu - 1).collect();
    let poly = num.divide_by_vars(&vars)?;

    let values = core_values(field);
    let k = values.iter().filter(|v| !v.is_zero()).count() as u64;

    let mut failure: Option<String> = None;
    // spot-check the restriction evaluator against the quotient polynomial
    let step = (values.len() / 64).max(1);
    for idx in (0..values.len()).step_by(step) {
        let pt = crate::constraint::point_at(field, pu, idx);
        let direct = poly.eval(&pt)?;
        if direct != values[idx] {
            failure = Some(format!("value table disagrees with P at point index {idx}"));
            break;
        }
    }

    let moments = power_moments(field, pu, &values);
    let threshold = p as u64 * (q as u64 - (q / p) as u64);
    let mut accept_checks = 0u64;

    let qz = q as usize;
    let mut digits = vec![0u32; pu];
    let mut total = 0u64;
    for (idx, m) in moments.iter().enumerate() {
        if idx > 0 {
            // odometer increment, maintaining the running digit sum
            let mut t = 0;
            loop {
                if digits[t] as usize + 1 < qz {
                    digits[t] += 1;
                    total += 1;
                    break;
                }
                total -= digits[t] as u64;
                digits[t] = 0;
                t += 1;
            }
        }
        if total < threshold {
            accept_checks += 1;
            if !m.is_zero() && failure.is_none() {
                failure = Some(format!("monomial {digits:?} of degree {total} not accepted"));
            }
        }
    }

    let canon = q as usize - (q / p) as usize;
    let mut canon_idx = 0usize;
    for t in 0..pu {
        canon_idx += canon * qz.pow(t as u32);
    }
    let reject_check = !moments[canon_idx].is_zero();
    if !reject_check && failure.is_none() {
        failure = Some("canonical monomial not rejected".to_string());
    }

    let upper = upper_count_bound(q, p);
    let lower = lower_count_bound(q, p);
    if k as u128 > upper && failure.is_none() {
        failure = Some(format!("nonzero count {k} exceeds upper bound {upper}"));
    }
    if (k as i128) < lower && failure.is_none() {
        failure = Some(format!("nonzero count {k} below lower bound {lower}"));
    }

    let pass = failure.is_none();
    Ok(CoreReport {
        q,
        p,
        s: field.s(),
        k,
        upper_bound: upper as u64,
        lower_bound: lower as i64,
        accept_checks,
        reject_check,
        pass,
        failure,
    })
}
