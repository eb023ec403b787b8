//! Clique tilings of randomly perturbed graphs.
//!
//! The crate is `no_std` with `alloc`. Everything that needs a clock, a
//! filesystem or threads lives in the companion `cliquetile` crate; here a
//! timeout is expressed through the [`tiling::Deadline`] trait and all
//! randomness flows from explicit 64-bit seeds.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod absorption;
pub mod bits;
pub mod constructions;
pub mod embed;
pub mod error;
pub mod graph;
pub mod harness;
pub mod matching;
pub mod phi;
pub mod tiling;

pub use error::{Error, Result};
pub use graph::{DecoratedGraph, Graph, GraphBuilder};
