//! Geometry and dynamics of Fuchsian groups acting on the hyperbolic plane.
//!
//! The crate is `no_std` with `alloc`. Everything here is a pure function of
//! its inputs; randomness enters only through explicit 64-bit seeds.
//!
//! * [`hyperbolic`]: Möbius maps, distances, geodesics, horoballs, excursions
//!   and boundary derivatives, all in curvature −1.
//! * [`modular`]: continued fractions, cutting sequences, Ford circles and
//!   exact word/relative lengths in PSL(2,ℤ).
//! * [`group`]: presentations, word and relative metric balls, nearest
//!   lattice points, projected paths and excursion traces.
//! * [`flat_cylinder`]: length and twist calculus of a flat cylinder under
//!   the Teichmüller flow.
//! * [`flow`]: Lebesgue sampling of geodesics and ψ averages.
//! * [`walk`]: random walks, drift, hitting points and tracking.
//! * [`lyapunov`]: expansion exponent estimates and the bounds behind them.
#![no_std]
// f64 methods resolve inherently in some builds, leaving `Float` unused
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod flat_cylinder;
pub mod flow;
pub mod group;
pub mod hyperbolic;
pub mod lyapunov;
pub mod modular;
pub mod seed;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
pub use hyperbolic::{BoundaryPoint, ExtReal, Geodesic, Horoball, Mobius};
pub use num_complex::Complex64;
