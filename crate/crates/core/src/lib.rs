//! Exact combinatorics for smooth curves on singular surfaces in projective
//! three-space: invariants of rational double point pairs, the intersection
//! ring of an iterated curve blowup, strict transforms of rulings, and the
//! numerical constraints these impose on set-theoretic complete intersections.

pub mod arith;
pub mod chow;
pub mod cli;
pub mod degree;
pub mod error;
pub mod rdp;
pub mod ruling;
pub mod theorems;

pub use error::{Error, Result};
