//! Fidelity, Chernoff and Bhattacharyya quantities for pairs of two-mode
//! Gaussian states, plus the error-probability bounds built from them.

mod bounds;
mod chernoff;
mod closed;
mod fidelity;

pub use bounds::{
    copies_exact, copies_needed, helstrom_bounds, lower_bound, pure_perr, MetricReport, Side,
};
pub use chernoff::{
    affinity, chernoff_aux, chernoff_min, g_p, lambda_p, q_t, qcb, traceless_relation, ChernoffAux,
    ChernoffMin, T_MAX, T_MIN, T_TOL,
};
pub use closed::{closed_fid_sym, closed_qcb_asym, closed_qcb_sym, fid_derivs, qcb_derivs, qcb_noise_deriv};
pub use fidelity::{uhlmann_fidelity, FidelityInvariants};
pub(crate) use fidelity::fidelity_unchecked;
pub(crate) use chernoff::{normal_modes, q_t_modes, NormalModes};
