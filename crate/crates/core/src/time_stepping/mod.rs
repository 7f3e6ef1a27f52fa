//! The linearized fully discrete scheme
//!
//! ```text
//! (K_0 τ^{-α} M + S) u^n = K_0 τ^{-α} M u^0 − τ^{-α} M Σ_{j=1}^{n-1} K_{n-j} (u^j − u^0) + b^n
//! ```
//!
//! where `b^n` is the load of `f(u^{n-1})` (semilinear problems) or of
//! `g(t_n)` (linear problems). The full history is kept in memory.

mod problem;
mod snapshot;
mod solver;

pub use problem::{InitialProjection, LinearProblem, Nonlinearity, SemilinearProblem, SourceFn, DEFAULT_BLOW_UP};
pub use snapshot::{read_snapshots, write_snapshots, Snapshot};
pub use solver::{history_convolution, scheme_residuals, solve_linear, solve_semilinear, TimeGrid, Trajectory};
