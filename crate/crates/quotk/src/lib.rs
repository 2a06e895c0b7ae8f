//! Exact K-theoretic Quot-scheme invariants of Grassmannians and the quantum
//! K-ring of `Gr(r, N)`.
//!
//! The crate evaluates Euler characteristics of Schur and Grothendieck
//! insertions on Quot schemes of the projective line through Schur functions at
//! the roots of a one-parameter polynomial, checks them against an independent
//! torus-localization oracle and a high-precision numeric route, and assembles
//! the quantum reduction map, quantized pairing and full quantum multiplication
//! tables of `QK(Gr(r, N))`.

pub mod combinatorics;
pub mod emit;
pub mod error;
pub mod exact_poly;
pub mod exec;
pub mod grothendieck;
pub mod localization;
pub mod numeric;
pub mod qk_ring;
pub mod quot_invariants;
pub mod schur_eval;

pub use error::{Error, Result};
