//! Infinite sequences of irreducible polynomials over odd prime fields, built
//! with Cohen's R-transform `f^R(x) = (2x)^n f((x + 1/x) / 2)`.
//!
//! The crate covers prime-field arithmetic, dense polynomials with a fast
//! irreducibility test, the extension field F_p[x]/(f) with a square-root
//! algorithm driven by a linear system, the sequence construction with
//! backtracking, and exhaustive checks of the functional graph of
//! `x -> (x + 1/x) / 2` on the projective line.

pub mod error;
pub mod ext;
pub mod fp;
pub mod graph;
pub mod linalg;
mod mul;
pub mod poly;
pub mod seq;
pub mod verify;

pub use error::{Error, Result};
pub use ext::{
    ext_sqrt, factor_r, is_square_ext, minimal_poly, theta_apply, tilde, ExtElem, ExtField, ProjPoint, RFactorization,
};
pub use fp::{fp_sqrt, legendre, nu2, FpElem, PrimeModulus};
pub use graph::{conjugacy_check, export_dot, verify_tree_structure, FunctionalGraph, TreeReport};
pub use linalg::{solve_nullspace, FpMatrix, FpVector};
pub use poly::FpPoly;
pub use seq::{build_sequence, choose_factor, SeqConfig, SeqTrace, StepOutcome, StepRecord, TieBreak};
pub use verify::{run_verification, VerifyConfig, VerifyReport};
