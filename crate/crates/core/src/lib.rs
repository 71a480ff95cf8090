//! Exact laboratory for irrationality measure functions
//! `ψ_α(t) = min_{1 ≤ q ≤ t} ||qα||` of tuples of irrational numbers.
//!
//! * [`cf`]: continued fractions, convergents, star values, certified error
//!   enclosures and quadratic surds.
//! * [`psi`]: `ψ_α` as an exact step function over integer time.
//! * [`perm`]: the permutation trajectory `σ(t)` of a tuple, the jump count
//!   `τ(t)`, sign changes and the finite-window index `k_hat`.
//! * [`structure`]: coincidences of convergent denominators and star values,
//!   and executable forms of the lemmas that govern them.
//! * [`proof`]: replays the counting argument behind `n ≤ k(k+1)/2` on a
//!   concrete tuple.
//! * [`spec_file`], [`plot`], [`cli`]: tuple description files, SVG plots and
//!   the command-line front end.
//! * [`corpus`]: seeded generators of numbers and tuples.

pub mod cf;
pub mod cli;
pub mod corpus;
pub mod perm;
pub mod plot;
pub mod proof;
pub mod psi;
pub mod spec_file;
pub mod structure;

pub use cf::{
    compare_errors, error_enclosure, integer_combination_check, surd_to_cf, CfError,
    ContinuedFraction, Convergent, ErrorTerm, IntegerCombination, QuadraticSurd,
};
