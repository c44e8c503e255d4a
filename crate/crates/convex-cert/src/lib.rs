//! Numerical certification of convexity and gradient-smoothness
//! inequalities on ℝⁿ.
//!
//! The toolkit evaluates, falsifies, and cross-checks the defining
//! inequalities of convex analysis for user-selected functions: the
//! inner-product and metric axioms, Cauchy-Schwarz, zero- and first-order
//! convexity, and the seven equivalent conditions characterizing convex
//! functions with an L-Lipschitz gradient. Verdicts are property-based at
//! desk scale: seeded randomized sampling with counterexample shrinking,
//! Lipschitz-constant estimation, minimal-L bisection, and an
//! implication-DAG consistency report.
//!
//! With the default `parallel` feature the sample scans run on a rayon
//! pool; disabling it gives a dependency-free sequential build that
//! produces bit-identical verdicts.

pub mod checker;
pub mod conditions;
pub mod error;
pub mod estimate;
pub mod funcs;
pub mod parse;
pub mod report;
pub mod tolerance;
pub mod vecspace;

pub use error::{Error, Result};
