//! Automata for the shuffle of two words.
//!
//! The shuffle `u ⧢ v` is the set of all interleavings of `u` and `v` that
//! preserve each word's internal order. This crate builds the grid-shaped
//! nondeterministic acceptor for that language, determinizes and minimizes
//! it, constructs the minimal acceptor directly for words that are periodic
//! over a shared non-repeating base, and generates the two-word families
//! whose minimal acceptors blow up exponentially — together with brute-force
//! oracles that verify every construction computationally.

pub mod determinize;
pub mod families;
pub mod grid;
pub mod periodic;
pub mod render;
pub mod shuffle;
pub mod words;

pub use determinize::{Dfa, SizeReport};
pub use grid::{GridNfa, GridState, NondetArea, Walk};
pub use shuffle::{Trajectory, WordSet};
pub use words::{Alphabet, Letter, PeriodicForm, Word};

/// Outcome of one checked claim inside a verification sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    /// What was checked, e.g. one instance description.
    pub subject: String,
    pub ok: bool,
    pub detail: String,
}

impl CheckOutcome {
    pub fn pass(subject: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckOutcome {
            subject: subject.into(),
            ok: true,
            detail: detail.into(),
        }
    }

    pub fn fail(subject: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckOutcome {
            subject: subject.into(),
            ok: false,
            detail: detail.into(),
        }
    }
}
