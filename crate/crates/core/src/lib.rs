//! Exact verification toolkit for nilpotent orbits of `GL_n`.
//!
//! The crate computes the codiagonal invariants `d_{λ,i}` of a parabolic
//! nilradical, stable ranks of leading submatrices of orbit elements, the
//! explicit witness matrices attaining those stable ranks, and the splitting
//! function `f_λ = Π_i s_{d_{λ,i}}(X_{≤i,≤i})` together with the product of
//! leading minors `Π_i det((I + X)_{≤i,≤i})` it is the top-degree part of.
//!
//! All arithmetic is exact, either over the rationals or over a prime field.

pub mod combinatorics;
pub mod constructions;
pub mod error;
pub mod field;
pub mod linalg;
pub mod matrix;
pub mod rng;
pub mod splitting;
pub mod symbolic;

pub use combinatorics::{Composition, DVector, ParabolicShape, Partition};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use matrix::Matrix;
pub use rng::TrialRng;
