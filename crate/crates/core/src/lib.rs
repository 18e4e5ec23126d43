//! Concept-lattice engine.
//!
//! Formal contexts ([`FormalContext`]) carry the incidence relation. The
//! cognitive operators ([`Operators`]) map object sets to their common
//! attributes and back. A [`ConceptSpace`] stores every concept of a context
//! and is maintained incrementally by [`LearningState`] as objects and
//! attributes arrive. Clues that are not closed are answered with lower and
//! upper approximations ([`approx`]). Many-valued tables are turned into
//! formal contexts by nominal scaling ([`scaling`]).

pub mod approx;
pub mod bitset;
pub mod context;
pub mod error;
pub mod operators;
pub mod persist;
pub mod process;
pub mod scaling;
pub mod sets;
pub mod space;
mod text;

pub use approx::{ApproximationResult, ConceptClue};
pub use bitset::BitSet;
pub use context::{FormalContext, Generation};
pub use error::{Error, Result};
pub use operators::Operators;
pub use process::{BatchRecord, IncrementBatch, LearningState, UpdateMode};
pub use scaling::{ManyValuedContext, MissingPolicy, NominalScale};
pub use sets::{AttributeSet, ObjectSet, Set};
pub use space::{Concept, ConceptSpace};
