//! Enclosure of the numerical range of the rational operator function
//! `T(w) = A - w^2 - w^2 / (c - i d w - w^2) B` for selfadjoint `A`, bounded
//! selfadjoint `B`, `c >= 0` and `d > 0`.
//!
//! Given only the closures of `W(A)` and `W(B)` (the box [`OmegaBox`]) the
//! enclosure is the union of the roots of the quartics
//! `p(w) = (alpha - w^2)(c - i d w - w^2) - beta w^2` over the box. The
//! modules compute membership, the imaginary-axis structure, boundary
//! curves, horizontal spectrum-free strips, the pseudo-enclosure and the
//! resulting resolvent bound, plus a matrix oracle used for validation.

// Negated comparisons are the NaN-rejecting idiom for parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axis;
pub mod boundary;
pub mod error;
pub mod membership;
pub mod oracle;
pub mod problem;
pub mod pseudo;
pub mod quartic;
pub mod realpoly;
pub mod strip;
pub mod tol;

pub use error::{Error, Result};
pub use membership::{alpha_hat, beta_hat, contains, sign_regions, MembershipVerdict, Witness};
pub use oracle::{sample_numerical_range, sigma_min_t, MatrixPair};
pub use problem::{
    eval_t, in_disk, poles, quartic_coeffs, ComplexPoint, DiskPosition, ExtReal, OmegaBox, Poles, ProblemParams,
    QuarticCoeffs,
};
pub use quartic::{limit_roots, solve_quartic, RootCluster, RootMultiset};
