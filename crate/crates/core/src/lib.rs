//! Numerical building blocks for semilinear time-fractional diffusion
//!
//! `∂_t^α u − κΔu = f(u)` on the unit interval or unit square with homogeneous
//! Dirichlet data, discretized by P1 finite elements in space and a discrete
//! convolution (backward Euler / BDF-k convolution quadrature or the L1 scheme)
//! in time.
//!
//! - [`frac_kernels`]: convolution weights, generating functions and the
//!   multiplier / symbol diagnostics built on them.
//! - [`spatial_fem`]: structured meshes, mass/stiffness assembly, projections
//!   and a Jacobi-preconditioned CG solver.
//! - [`time_stepping`]: the linearized fully discrete scheme and its linear
//!   counterpart.
//! - [`reference_oracle`]: contour-integral solution operators, Mittag-Leffler
//!   values and modal reference solutions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contour;
pub mod error;
pub mod frac_kernels;
pub mod quadrature;
pub mod reference_oracle;
pub mod spatial_fem;
pub mod special;
pub mod time_stepping;

pub use error::{Error, Result};
