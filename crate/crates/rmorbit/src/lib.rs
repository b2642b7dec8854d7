//! Sparse constraints and local testers for generalized Reed-Muller codes.
//!
//! The code RM[n, d, q] consists of the n-variate polynomials over F_q of
//! total degree at most d, evaluated on all of F_q^n. This crate builds a
//! single sparse dual constraint whose orbit under the affine monoid
//! (x -> Ax + b, with A allowed to be singular) spans the whole dual space,
//! runs the randomized local tester induced by that orbit, and brute-force
//! checks the claimed properties at small parameters.
//!
//! Layout:
//! - [`gf`]: runtime finite fields F_{p^s} up to order 4096
//! - [`poly`]: exponent-vector combinatorics and dense multivariate polynomials
//! - [`constraint`]: sparse dual constraints and affine transforms
//! - [`derivative`]: the iterated-difference core polynomial and its checks
//! - [`builder`]: degree decomposition and the full constraint assembly
//! - [`tester`]: the randomized orbit tester
//! - [`oracle`]: exhaustive/sampled verification of span, degree borders, distance

pub mod builder;
pub mod constraint;
pub mod derivative;
pub mod error;
pub mod gf;
pub mod oracle;
pub mod poly;
pub mod tester;

pub use builder::{arity_required, build_with_provenance, rm_constraint, Provenance};
pub use constraint::{AffineTransform, Constraint, FunctionTable};
pub use derivative::{core_constraint, verify_core, CoreReport};
pub use error::{Error, Result};
pub use gf::{Elem, Field};
pub use oracle::{distance_to_rm, orbit_span_rank, verify_deg_border, BorderReport, RankCertificate};
pub use poly::MultiPoly;
pub use tester::{estimate_rejection, exact_rejection, TestReport};
