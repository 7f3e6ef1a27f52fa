//! Reference values for linear subdiffusion from contour integrals of the
//! resolvent, applied mode by mode through a dense generalized
//! eigendecomposition of `(S, M)`.

mod modal;
mod probe;
mod scalar;

pub use modal::{linear_reference_solution, linear_reference_states, ModalBasis, DENSE_DOF_LIMIT};
pub use probe::{smoothing_probe, SmoothingReport};
pub use scalar::{
    mittag_leffler_contour, scalar_e, scalar_e_on, scalar_f, scalar_f_on, ContourValue, ResolventRule, NODE_AGREEMENT,
};
