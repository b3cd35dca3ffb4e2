//! Cohomology and K-theory rings of toric bundles, computed exactly from the
//! combinatorics of a smooth complete fan.
//!
//! Given a fan with an ordering of its maximal cones satisfying the shelling
//! condition, the rings `R(S, Δ)` (cohomology / Chow ring) and `𝓡(S, Δ)`
//! (K-theory) are free over the parameter ring `S = Z[r_1^±1, .., r_n^±1]`
//! with basis the monomials `x(tau_i)`. This crate builds their
//! presentations, reduces arbitrary polynomials to that basis, and derives
//! multiplication tables, Betti numbers and duality pairings. Independent
//! linear-algebra oracles cross-check every reduction.

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod fan;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod parse;
pub mod presentation;
pub mod reducer;
pub mod ringops;
pub mod shelling;

pub use algebra::{CoeffElem, Mode, XMonomial, XPolynomial};
pub use error::{Error, Result};
pub use fan::{ConeRef, Fan, ValidationReport};
pub use presentation::Presentation;
pub use reducer::{NormalForm, Reducer};
pub use shelling::ShellingData;
