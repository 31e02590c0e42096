#![allow(clippy::needless_range_loop)]

//! Exact arithmetic for finite hypergroups.
//!
//! A finite hypergroup is a finite set with a convolution that sends each
//! pair of points to a probability measure, together with an identity and
//! an involution subject to associativity and support axioms. This crate
//! represents candidate hypergroups as rational structure-constant tables
//! and makes the classical existence arguments for the Haar measure fully
//! constructive:
//!
//! * [`hypergroup`] — tables, axiom validation with minimal witnesses;
//! * [`algebra`] — the measure algebra and function space (convolution,
//!   translation, Jordan decomposition, integration);
//! * [`lp`] — an exact rational simplex with verified optimality, Farkas,
//!   and unboundedness certificates;
//! * [`haar`] — the positivity-of-translations decision, the polytope of
//!   normalized positive functionals, translation action matrices, and
//!   three Haar solvers (direct formula, exact nullspace, Cesàro
//!   iteration) that cross-check one another;
//! * [`amenability`] — left invariant means, solved and verified
//!   independently of the Haar pipeline;
//! * [`corpus`] — golden fixtures and generators (cyclic groups,
//!   conjugacy-class hypergroups, the order-two family);
//! * [`document`] — the JSON interchange schema used by the CLI.
//!
//! All decision procedures run over exact rationals; floating point is
//! confined to the Cesàro iteration, which is re-verified and falls back
//! to the exact solver when it has not converged.
//!
//! The `parallel` feature (on by default) runs the heavy inner loops —
//! the quartic associativity scan and batched LP solves — on a rayon
//! thread pool. Disabling it leaves a purely sequential build with the
//! same results; `*_seq` entry points expose the sequential paths
//! directly for comparison.
//!
//! ```
//! use hypal::haar::{fixed_point_haar, CesaroOptions, HaarMethod};
//! use hypal::rational::rat;
//! use hypal::{corpus, FunctionOnH};
//!
//! // the two-element deformation of Z2 with δ_a∗δ_a = (e: 1/2, a: 1/2)
//! let h = corpus::gen_order2(rat(1, 2)).unwrap();
//! let f = FunctionOnH::indicator(h.len(), 0);
//! let haar = fixed_point_haar(&h, &f, HaarMethod::Nullspace, CesaroOptions::default()).unwrap();
//! assert_eq!(haar.weights.weights(), &[rat(1, 1), rat(2, 1)]);
//! ```

pub mod algebra;
pub mod amenability;
pub mod corpus;
pub mod document;
pub mod haar;
pub mod hypergroup;
pub mod lp;
pub mod rational;
pub mod sample;

pub use algebra::{integrate, FunctionOnH, Measure};
pub use hypergroup::{
    validate_table, Axiom, ConvolutionTable, FiniteHypergroup, TableError, ValidationReport,
};
pub use rational::Rational;
