//! Counting with quantitative second-order logic over finite structures.
//!
//! The crate evaluates quantitative formulas by brute force, reduces the
//! tractable fragments to propositional counting problems, counts those
//! exactly, and estimates counts for randomized-machine style samplers.

pub mod approx;
pub mod check;
pub mod eval;
pub mod logic;
pub mod model;
pub mod propcount;
pub mod reductions;
