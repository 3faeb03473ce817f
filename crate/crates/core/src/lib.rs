//! Central-upwind (second order) and A-WENO (fifth order) schemes for the
//! compressible Euler equations, with adaptive anti-diffusion applied in
//! the linearly degenerate characteristic fields.
//!
//! The building blocks are layered bottom-up: [`euler`] holds the physics
//! and eigensystems, [`reconstruct`] the MUSCL and WENO-Z interface
//! reconstructions, [`cu_flux`] the central-upwind numerical flux,
//! [`antidiffusion`] the smoothness classification and anti-diffusion
//! matrices, [`aweno`] the high-order flux correction, [`march`] the
//! semi-discrete assembly and time integration, [`problems`] the benchmark
//! registry and [`harness`] the batch driver.

// `!(x > 0.0)` is used on purpose so that NaN is rejected, and the small
// fixed-size matrix kernels read best as index loops.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod antidiffusion;
pub mod aweno;
pub mod cu_flux;
pub mod euler;
pub mod harness;
pub mod march;
pub mod problems;
pub mod reconstruct;

pub use euler::{Direction, Equations, Euler1d, Euler2d, GasModel, PrimitiveState, State, StateError};
pub use march::{Scheme, SchemeConfig, Simulation};
pub use problems::{build_problem, ProblemSpec, PROBLEM_NAMES};
