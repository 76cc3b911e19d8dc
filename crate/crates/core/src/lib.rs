//! Floating bodies `K_t`, illumination bodies `K^t` and polytope approximation
//! of convex bodies in dimensions 2 to 4, with numerical checks of the
//! inequalities that relate them.
//!
//! Bodies implement the [`body::ConvexBody`] oracle. Polytopes, balls,
//! ellipsoids and their affine images carry exact volumetrics; any other oracle
//! falls back to seeded Monte Carlo.

// `!(x > 0.0)` is used on purpose to reject NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod body;
pub mod caps;
pub mod cli;
pub mod error;
pub mod floating;
pub mod illumination;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod plot;
pub mod position;
pub mod report;
pub mod sampling;
pub mod verify;
