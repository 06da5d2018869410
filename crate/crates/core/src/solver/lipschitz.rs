use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Result, TycoonError};
use crate::grid::{inner, norm, ChirpTrack, TFGrid};
use crate::operators::{DerivMethod, TfOperators};

/// Inflation applied to the power-iteration eigenvalue, which approaches
/// the true value from below.
pub const LIPSCHITZ_SAFETY: f64 = 1.05;

/// Relative change in the Rayleigh quotient at which power iteration stops.
const POWER_RTOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzEstimate {
    /// Inflated estimate used as the FISTA step denominator.
    pub value: f64,
    /// Last Rayleigh quotient, before inflation.
    pub rayleigh: f64,
    pub iterations: usize,
    /// False when the Rayleigh quotient was still moving after `iters`.
    pub converged: bool,
}

/// Largest eigenvalue of `F -> 2 dt A*A F + 2 dt dw mu B_a*B_a F` by power
/// iteration from a seeded random start, inflated by [`LIPSCHITZ_SAFETY`].
pub fn estimate_lipschitz(
    alpha: &ChirpTrack,
    grid: &TFGrid,
    mu: f64,
    iters: usize,
    seed: u64,
    method: DerivMethod,
) -> Result<LipschitzEstimate> {
    if iters < 20 {
        return Err(TycoonError::InvalidParameter(format!(
            "power iteration needs at least 20 steps, got {iters}"
        )));
    }
    alpha.check_grid(grid)?;
    let ops = TfOperators::new(*grid, method);
    let mut start = random_start(grid, seed);
    Ok(power_iterate(&mut start, iters, |x| ops.normal_raw(x, alpha, mu)))
}

pub(crate) fn random_start(grid: &TFGrid, seed: u64) -> Array2<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Array2::from_shape_fn(grid.shape(), |_| {
        Complex64::new(
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
        )
    })
}

/// Power iteration for a self-adjoint positive semidefinite map. `x` is
/// left holding the final iterate so callers can warm-start the next
/// estimate.
pub(crate) fn power_iterate(
    x: &mut Array2<Complex64>,
    iters: usize,
    apply: impl Fn(&Array2<Complex64>) -> Array2<Complex64>,
) -> LipschitzEstimate {
    let n0 = norm(x);
    if n0 == 0.0 {
        return LipschitzEstimate {
            value: 0.0,
            rayleigh: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    x.mapv_inplace(|z| z / n0);
    let mut rayleigh = 0.0;
    let mut converged = false;
    let mut done = 0;
    for k in 0..iters {
        done = k + 1;
        let y = apply(x);
        let next = inner(x, &y);
        let ny = norm(&y);
        let delta = (next - rayleigh).abs();
        rayleigh = next;
        if ny == 0.0 {
            converged = true;
            rayleigh = 0.0;
            break;
        }
        *x = y.mapv(|z| z / ny);
        if k > 0 && delta <= POWER_RTOL * rayleigh.abs() {
            converged = true;
            break;
        }
    }
    if !converged {
        log::debug!("power iteration not converged after {iters} steps (estimate {rayleigh:.6e})");
    }
    LipschitzEstimate {
        value: LIPSCHITZ_SAFETY * rayleigh.max(0.0),
        rayleigh: rayleigh.max(0.0),
        iterations: done,
        converged,
    }
}
