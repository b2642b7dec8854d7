//! Assembly of the full constraint for RM[n, d, q].
//!
//! A degree target t is split as t = r + ℓ(q - q/p) with r in the window
//! [q/p, q-1] (or r = t alone when t < q/p). The constraint for that target
//! is a convolution: one Vandermonde factor of degree r-1, then ℓ mod p
//! Vandermonde factors of degree q - q/p - 1, then ⌊ℓ/p⌋ copies of the
//! p-variate core constraint. It accepts every degree vector of total degree
//! below t and rejects the canonical monomial of degree t. The constraint
//! for the code itself is the union of these blocks over the border degrees
//! b_0(d), ..., b_s(d), padded with constant-1 coordinates up to arity n.

use num_bigint::BigUint;
use serde::Serialize;

use crate::constraint::Constraint;
use crate::derivative::{core_constraint, DEFAULT_POINT_BUDGET};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::poly::b_values;

/// How a degree target splits into convolution factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// The degree whose canonical monomial must be rejected.
    pub target: u64,
    /// r: the window residue, in [q/p, q-1] unless target < q/p.
    pub residue: u32,
    /// ℓ: how many full blocks of size q - q/p the target contains.
    pub blocks: u64,
    /// ⌊ℓ/p⌋: copies of the p-variate core constraint.
    pub groups: u64,
    /// ℓ mod p: leftover single-variable factors of degree q - q/p.
    pub loose: u32,
    /// 1 + loose + p·groups = 1 + ℓ.
    pub variables_needed: u64,
}

/// Splits `target` as residue + blocks·(q - q/p), residue in [q/p, q-1],
/// falling back to residue = target, blocks = 0 when target < q/p.
pub fn decompose(target: u64, q: u32, p: u32) -> Decomposition {
    assert!(target >= 1, "degree target must be positive");
    let qp = (q / p) as u64;
    let span = (q - q / p) as u64;
    let (residue, blocks) = if target < qp {
        (target, 0)
    } else {
        let blocks = (target - qp) / span;
        (target - blocks * span, blocks)
    };
    let groups = blocks / p as u64;
    let loose = (blocks % p as u64) as u32;
    Decomposition {
        target,
        residue: residue as u32,
        blocks,
        groups,
        loose,
        variables_needed: 1 + blocks,
    }
}

/// The constraint over F_q^n rejecting the canonical monomial of degree
/// `target` while accepting everything of lower total degree.
pub fn constraint_for_degree(field: &Field, n: usize, target: u64) -> Result<Constraint> {
    let dec = decompose(target, field.order(), field.p());
    if (n as u64) < dec.variables_needed {
        return Err(Error::ArityTooSmall {
            required: usize::try_from(dec.variables_needed).unwrap_or(usize::MAX),
        });
    }
    let mut c = Constraint::vandermonde(field.clone(), dec.residue - 1)?;
    if dec.loose > 0 || dec.groups > 0 {
        let full = Constraint::vandermonde(field.clone(), field.order() - field.order() / field.p() - 1)?;
        for _ in 0..dec.loose {
            c = c.convolve(&full)?;
        }
    }
    if dec.groups > 0 {
        let core = core_constraint(field, DEFAULT_POINT_BUDGET)?;
        for _ in 0..dec.groups {
            c = c.convolve(&core)?;
        }
    }
    c.pad_to(n)
}

/// Minimum arity at which [`rm_constraint`] can be built for degree d.
pub fn arity_required(d: u64, q: u32, p: u32, s: u32) -> u64 {
    b_values(d, p, s)
        .into_iter()
        .map(|t| decompose(t, q, p).variables_needed)
        .max()
        .expect("b_values is never empty")
}

/// The full constraint for RM[n, d, q]: the union over the distinct border
/// degrees b_i(d) of the per-degree constraints, all padded to arity n.
///
/// When d ≥ n(q-1) the code contains every function, the dual space is
/// trivial, and the empty constraint (no rows) is returned; below that
/// threshold the arity must be at least [`arity_required`].
pub fn rm_constraint(field: &Field, n: usize, d: u64) -> Result<Constraint> {
    if d >= n as u64 * (field.order() as u64 - 1) {
        return Ok(Constraint::empty(field.clone(), n));
    }
    let mut targets = b_values(d, field.p(), field.s());
    targets.dedup();
    let required = targets
        .iter()
        .map(|&t| decompose(t, field.order(), field.p()).variables_needed)
        .max()
        .unwrap();
    if (n as u64) < required {
        return Err(Error::ArityTooSmall {
            required: usize::try_from(required).unwrap_or(usize::MAX),
        });
    }
    let mut union: Option<Constraint> = None;
    for t in targets {
        let block = constraint_for_degree(field, n, t)?;
        union = Some(match union {
            None => block,
            Some(u) => u.union_with(&block)?,
        });
    }
    Ok(union.unwrap())
}

/// One per-target line of the build provenance.
#[derive(Debug, Clone, Serialize)]
pub struct BlockProvenance {
    pub target: u64,
    pub residue: u32,
    pub blocks: u64,
    pub groups: u64,
    pub loose: u32,
    pub variables_needed: u64,
    /// Query count of this block before the union.
    pub k: u64,
}

/// Everything the build command reports alongside the constraint.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub d: u64,
    pub q: u32,
    pub n: usize,
    /// Raw border degrees b_0(d), ..., b_s(d), duplicates included.
    pub b_values: Vec<u64>,
    /// Distinct targets in ascending order.
    pub decompositions: Vec<BlockProvenance>,
    /// Total query count of the union.
    pub k: u64,
    /// 3q⁴·(2^{p-1}+p-1)^{(d+1)/(q(p-1))}·q^{(d+1)/q}, for display only.
    pub bound: f64,
    /// Exact integer check that k is within the bound.
    pub bound_satisfied: bool,
    /// True when d ≥ n(q-1) and the constraint is empty.
    pub degenerate: bool,
}

fn subset_weight(p: u32) -> BigUint {
    (BigUint::from(1u32) << (p - 1)) + p - 1u32
}

/// Exact form of the per-target bound k ≤ q²·A^{t/(q(p-1))}·q^{t/q} with
/// A = 2^{p-1}+p-1, both sides raised to the power q(p-1).
pub fn block_bound_holds(k: u64, q: u32, p: u32, target: u64) -> bool {
    let e = q * (p - 1);
    let t = u32::try_from(target).expect("degree target too large for bound check");
    let lhs = BigUint::from(k).pow(e);
    let rhs = BigUint::from(q).pow(2 * e) * subset_weight(p).pow(t) * BigUint::from(q).pow(t * (p - 1));
    lhs <= rhs
}

/// Exact form of the total bound k ≤ 3q⁴·A^{(d+1)/(q(p-1))}·q^{(d+1)/q},
/// both sides raised to the power q(p-1).
pub fn total_bound_holds(k: u64, q: u32, p: u32, d: u64) -> bool {
    let e = q * (p - 1);
    let t = u32::try_from(d + 1).expect("degree too large for bound check");
    let lhs = BigUint::from(k).pow(e);
    let rhs = (BigUint::from(3u32) * BigUint::from(q).pow(4)).pow(e)
        * subset_weight(p).pow(t)
        * BigUint::from(q).pow(t * (p - 1));
    lhs <= rhs
}

fn display_bound(q: u32, p: u32, d: u64) -> f64 {
    let a = (1u64 << (p - 1)) as f64 + (p - 1) as f64;
    let qf = q as f64;
    3.0 * qf.powi(4)
        * a.powf((d + 1) as f64 / (qf * (p - 1) as f64))
        * qf.powf((d + 1) as f64 / qf)
}

/// Builds [`rm_constraint`] and records how it was put together.
pub fn build_with_provenance(field: &Field, n: usize, d: u64) -> Result<(Constraint, Provenance)> {
    let q = field.order();
    let p = field.p();
    let constraint = rm_constraint(field, n, d)?;
    let degenerate = d >= n as u64 * (q as u64 - 1);
    let raw = b_values(d, p, field.s());
    let mut decompositions = Vec::new();
    if !degenerate {
        let mut targets = raw.clone();
        targets.dedup();
        for t in targets {
            let dec = decompose(t, q, p);
            let block = constraint_for_degree(field, n, t)?;
            decompositions.push(BlockProvenance {
                target: dec.target,
                residue: dec.residue,
                blocks: dec.blocks,
                groups: dec.groups,
                loose: dec.loose,
                variables_needed: dec.variables_needed,
                k: block.k() as u64,
            });
        }
    }
    let provenance = Provenance {
        d,
        q,
        n,
        b_values: raw,
        decompositions,
        k: constraint.k() as u64,
        bound: display_bound(q, p, d),
        bound_satisfied: total_bound_holds(constraint.k() as u64, q, p, d),
        degenerate,
    };
    Ok((constraint, provenance))
}
