//! Probabilistic high-order projective dependency parsing.
//!
//! The crate provides exact chart inference (decoding, partition functions
//! and part marginals) for four factorizations of projective, multi-root
//! dependency trees:
//!
//! * first-order arcs ([`Factorization::Dep1`]),
//! * second-order sibling parts ([`Factorization::Sib2`]),
//! * second-order grandchild parts ([`Factorization::Gch2`]),
//! * third-order grand-sibling parts ([`Factorization::GSib3`]),
//!
//! together with a log-linear feature model trained by maximum conditional
//! likelihood with L-BFGS, CoNLL-X input/output, evaluation metrics, and a
//! brute-force enumeration [`oracle`] used to certify every inference routine.

pub mod chart;
pub mod conll;
pub mod error;
pub mod eval;
pub mod features;
pub mod first_order;
pub mod grandchild;
pub mod grandsibling;
pub mod inference;
pub mod model;
pub mod oracle;
pub mod sibling;
pub mod synthetic;
pub mod train;
pub mod verify;

pub use error::{Error, Result};
pub use features::{coarsen_pos, LanguageProfile};
pub use model::{
    decompose, is_projective, tree_score, Factorization, Part, PartScoreTable, PartSpace,
    ProjectiveTree, Sentence, Token,
};
