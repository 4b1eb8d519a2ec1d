//! Domain types shared by every inference and training routine.

mod part;
mod scores;
mod sentence;
mod tree;

pub use part::Part;
pub use scores::{decompose, tree_score, Factorization, PartScoreTable, PartSpace};
pub use sentence::{Sentence, Token, ROOT_SYMBOL};
pub use tree::{is_projective, validate_tree, ProjectiveTree};
