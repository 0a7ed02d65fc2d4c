//! Modal reasoning over finite relational structures with a distinguished
//! accessibility relation `E`.
//!
//! Formulas use relation symbols of arbitrary arity as atoms; an atom is
//! evaluated on the suffix of the path walked so far, so the logic predicates
//! over paths rather than single worlds. The crate provides:
//!
//! - pointed relational structures, homomorphism search and counting,
//!   products, and validated path-predicate trees ([`structure`], [`pptree`]);
//! - formula ASTs, a parser/printer, modal depth and debt ([`syntax`],
//!   [`parse`]);
//! - reference evaluators for the path logic, data Kripke models and
//!   first-order formulas ([`semantics`]);
//! - the k-step unravelling comonad with law checkers ([`comonad`]);
//! - (bi)simulation game solvers, strategy extraction, bounded morphisms and
//!   span construction ([`games`]);
//! - the correspondence between finite trees and positive formulas
//!   ([`canonical`]);
//! - translations to first-order logic, data graph logic and basic modal
//!   logic ([`translate`]);
//! - satisfiability, model checking and k-bisimilarity front-ends with
//!   brute-force oracles ([`decision`]).
//!
//! The crate is `no_std` (it requires `alloc`); IO, file formats and the
//! command line live in the companion `ppml` crate.
//!
//! ```
//! use ppml_core::comonad::unravel;
//! use ppml_core::fixtures::{example_a, example_b};
//! use ppml_core::games::{duplicator_wins, GameMode};
//! use ppml_core::parse::parse_ppml;
//! use ppml_core::semantics::eval_ppml;
//!
//! let (a, b) = (example_a(), example_b());
//!
//! // the example pair agrees on every formula, at any depth...
//! assert!(duplicator_wins(&a, &b, 7, GameMode::Bisim).unwrap());
//!
//! // ...yet their unravellings are not isomorphic: successor counts differ
//! let code = |s| unravel(s, 1).tree().canonical_code();
//! assert_ne!(code(&a), code(&b));
//!
//! let f = parse_ppml("<>(S & <>S)").unwrap();
//! assert_eq!(eval_ppml(&a, &[a.basepoint()], &f), Ok(false));
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod canonical;
pub mod comonad;
pub mod decision;
pub mod enumerate;
pub mod fixtures;
pub mod games;
pub mod parse;
pub mod pptree;
pub mod semantics;
pub mod signature;
pub mod structure;
pub mod syntax;
pub mod translate;

pub use pptree::{PpTree, PpTreeViolation};
pub use signature::Signature;
pub use structure::{Homomorphism, PointedStructure};
pub use syntax::{CdxpPath, DataGlFormula, FolFormula, PpmlFormula};
