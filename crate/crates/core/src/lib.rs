//! Exact-rational machinery for compiling circuit fixed-point problems down
//! to sparse win-lose bimatrix games, and for translating equilibria of the
//! constructed games back up the chain.
//!
//! The crate is `no_std` (with `alloc`): every operation is a pure function
//! over immutable values, all arithmetic is exact rational, and nothing here
//! performs IO. File formats and the command-line front end live in the
//! companion `gamechain-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod circuit;
pub mod classes;
pub mod error;
pub mod games;
pub mod matrix;
pub mod pipeline;
pub mod poly2bimatrix;
pub mod polymatrix;
pub mod rat;
pub mod report;
pub mod sims;
pub mod solvers;

pub use error::Error;
pub use rat::Rat;
