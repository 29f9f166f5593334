//! String attractors computed online, Lempel-Ziv parsing variants, the word
//! families used to probe them, and an exact solver for short texts.

pub mod attractor;
pub mod automaton;
pub mod error;
pub mod experiments;
pub mod lazy;
pub mod lz;
pub mod solver;
pub mod text;
pub mod words;

pub use attractor::{verify, AttractorSet, VerificationReport, Witness};
pub use error::{Error, Result};
pub use lazy::{lazy_run, MarkingTrace, Scope};
pub use lz::{lz_factorize, Factorization, Phrase, VariantFlags};
pub use solver::{min_attractor_exact, Budget, Solution};
pub use text::{Alphabet, Text};
pub use words::{Unfolding, WordSpec};
