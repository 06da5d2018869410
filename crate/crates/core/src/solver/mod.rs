//! Alternating minimization of `H(F, a)`: monotone FISTA in `F`, closed form
//! in `a`, over a decreasing `mu_t` schedule with warm starts.

mod alpha;
mod alternating;
mod fista;
mod lipschitz;

pub use alpha::{update_alpha, update_alpha_with};
pub use alternating::{
    select_mu_discrepancy, tycoon, tycoon_with_progress, OuterRecord, SolveTrace, StageTrace,
    TycoonResult,
};
pub use fista::{fista, fista_with, prox_l1, FistaOutcome};
pub use lipschitz::{estimate_lipschitz, LipschitzEstimate, LIPSCHITZ_SAFETY};

/// `|new - old| / |old|`, with the ratio taken as 0 when both norms vanish.
pub(crate) fn relative_change(diff: f64, base: f64) -> f64 {
    if diff < 1e-14 && base < 1e-14 {
        0.0
    } else {
        diff / (base + 1e-30)
    }
}
