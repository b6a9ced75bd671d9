//! Multi-connectivity multicast resource allocation.
//!
//! The crate is organised around one combinatorial problem: every cell picks
//! exactly one PRB for the multicast stream and we want the union of users
//! that can decode the stream on the chosen (cell, PRB) pairs to be as large
//! as possible. [`coverage`] holds that problem and its solvers; the
//! remaining modules build instances of it from a simulated seven-cell
//! network ([`topology`], [`channel`], [`traffic`]) and drive the sub-frame
//! loop ([`engine`]). [`cli`] wires everything into experiment presets.

pub mod channel;
pub mod cli;
pub mod coverage;
pub mod engine;
pub mod error;
pub mod rng;
pub mod topology;
pub mod traffic;

pub use error::{Error, Result};
