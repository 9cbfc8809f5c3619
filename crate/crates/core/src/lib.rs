//! doodlekit: exact computation with twin groups and doodles on the
//! 2-sphere.
//!
//! The crate has four layers: [`twinword`] solves the word problem in the
//! twin group `TW_n`; [`diagram`] models doodle diagrams as oriented
//! 4-valent combinatorial maps with closure, smoothing and canonical codes;
//! [`moves`] detects and applies the diagram moves (kink and lens removal,
//! bending and tightening, generalized versions, greedy reduction to the
//! minimal diagram); [`markov`] implements the four word-level moves, the
//! bounded equivalence search and the experiment harness. [`oracle`] holds
//! independent brute-force checkers, [`corpus`] the random generators, and
//! [`suites`] the named property suites behind the `selftest` command.

pub mod corpus;
pub mod diagram;
pub mod markov;
pub mod moves;
pub mod oracle;
pub mod suites;
pub mod twinword;

pub use diagram::{closure, Diagram};
pub use twinword::TwinWord;
