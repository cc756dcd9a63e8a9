// SPDX-License-Identifier: MIT OR Apache-2.0

//! Inscribed rectangles of prescribed aspect angle in smooth Jordan curves.
//!
//! An inscribed rectangle is a pair of chords `AB`, `CD` of the curve with a
//! common midpoint, equal length, and a prescribed angle between them. Under
//! `l(a, b) = ((a+b)/2, (a−b)/2)` the chords become points of the torus
//! `L = l(γ×γ)` in `ℂ²`, and the rectangles are the intersections of `L`
//! with its rotated copy. [`solver`] finds these intersections numerically;
//! [`audit`] checks the symplectic identities behind the construction.

pub mod audit;
pub mod curve;
pub mod error;
pub mod solver;
pub mod symplectic;
pub mod system;

pub use curve::Curve;
pub use error::{Error, Result};
pub use solver::SolverConfig;
pub use system::{AspectProfile, RectangleSolution, TorusPoint4};
