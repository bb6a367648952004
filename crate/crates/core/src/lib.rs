//! Sampling-based verification and falsification of the Godunova–Levin class
//! `Q(I)`, the class `P(I)`, convex dominance by members of either class, and
//! the Hermite–Hadamard type inequalities they satisfy.
//!
//! The crate is `no_std` and only needs `alloc`. Verdicts are evidence on a
//! finite sample, never proofs.

#![no_std]

extern crate alloc;

pub mod catalog;
pub mod dominance;
pub mod error;
pub mod expr;
pub mod hh;
pub mod membership;
mod parse;
pub mod quadrature;
pub mod sampling;

pub use catalog::{catalog, Fixture, FIXTURES};
pub use dominance::{
    characterization_check, check_dominated, decompose, dominance_defect, recompose,
    CharacterizationReport, DominancePair,
};
pub use error::{Error, Result};
pub use expr::{FunctionExpr, Interval};
pub use hh::{
    verify_hh_classical, verify_thm1, verify_thm2, verify_thm3, verify_thm4, HhOptions, HhReport,
    HhVerdict, InequalityId,
};
pub use membership::{
    check_membership, defect_convex, defect_p, defect_q, equivalence_crosscheck,
    triple_product_defect, Class, EquivalenceReport, Kind,
};
pub use parse::parse;
pub use quadrature::{integrate, integrate_weighted, mean_value, QuadConfig, QuadResult};
pub use sampling::{Condition, SamplingPlan, Verdict, Witness};
