//! The objective `H(F, a) = G(F, a) + Psi(F, a)` and the gradient of its
//! smooth part.
//!
//! With `mu = mu_t * lambda_t` and `lambda = mu_t * (1 - lambda_t)`:
//!
//! ```text
//! G(F, a)   = dt |A F - f|^2 + mu dt dw |B_a F|^2
//! Psi(F, a) = lambda dt dw sum |F| + gamma dt sum a^2
//! ```

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TycoonError};
use crate::grid::{norm, ChirpTrack, SampledSignal, TFMatrix};
use crate::operators::{DerivMethod, TfOperators};

/// Decreasing set of `mu_t` values visited with warm starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuSchedule {
    /// Absolute values, strictly decreasing.
    Explicit(Vec<f64>),
    /// `count` log-uniform values from `start` to `end`, both multiplied by
    /// the signal energy `dt |f|^2`.
    Relative { start: f64, end: f64, count: usize },
}

impl Default for MuSchedule {
    fn default() -> Self {
        MuSchedule::Relative {
            start: 1e-2,
            end: 1e-7,
            count: 6,
        }
    }
}

impl MuSchedule {
    /// Concrete schedule for `signal`. A zero-energy signal maps relative
    /// schedules onto their unscaled values.
    pub fn resolve(&self, signal: &SampledSignal) -> Result<Vec<f64>> {
        let values = match self {
            MuSchedule::Explicit(v) => v.clone(),
            MuSchedule::Relative { start, end, count } => {
                let energy = signal.energy();
                let scale = if energy > 0.0 { energy } else { 1.0 };
                log_space(*start, *end, *count)?
                    .into_iter()
                    .map(|v| v * scale)
                    .collect()
            }
        };
        validate_schedule(&values)?;
        Ok(values)
    }
}

/// `count` values uniformly spaced on a log scale from `start` to `end`.
pub fn log_space(start: f64, end: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && end > 0.0) || count == 0 {
        return Err(TycoonError::InvalidParameter(format!(
            "log schedule needs positive endpoints and count >= 1 (got {start}, {end}, {count})"
        )));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let (ls, le) = (start.ln(), end.ln());
    Ok((0..count)
        .map(|k| (ls + (le - ls) * k as f64 / (count - 1) as f64).exp())
        .collect())
}

fn validate_schedule(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(TycoonError::InvalidParameter("empty mu schedule".into()));
    }
    if values.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(TycoonError::InvalidParameter(
            "mu schedule values must be positive and finite".into(),
        ));
    }
    if values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(TycoonError::InvalidParameter(
            "mu schedule must be strictly decreasing".into(),
        ));
    }
    Ok(())
}

/// Solver hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TycoonParams {
    pub mu_schedule: MuSchedule,
    /// Balance between the transport constraint (1) and sparsity (0).
    pub lambda_tilde: f64,
    /// Ridge weight on the chirp track.
    pub gamma: f64,
    /// Relative-change stop for the inner loop and the `F` outer criterion.
    pub eps1: f64,
    /// Relative-change stop for the chirp track.
    pub eps2: f64,
    pub max_inner_iters: usize,
    pub max_outer_iters: usize,
    pub deriv_method: DerivMethod,
    /// Power iterations for the Lipschitz estimate.
    pub power_iters: usize,
    pub seed: u64,
    /// Known noise standard deviation; enables discrepancy-principle
    /// selection of the returned stage.
    pub noise_std: Option<f64>,
}

impl Default for TycoonParams {
    fn default() -> Self {
        Self {
            mu_schedule: MuSchedule::default(),
            lambda_tilde: 0.99,
            gamma: 1e-3,
            eps1: 5e-4,
            eps2: 5e-4,
            max_inner_iters: 2000,
            max_outer_iters: 20,
            deriv_method: DerivMethod::Spectral,
            power_iters: 30,
            seed: 0,
            noise_std: None,
        }
    }
}

impl TycoonParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(TycoonError::InvalidParameter(msg));
        if !(0.0..=1.0).contains(&self.lambda_tilde) {
            return bad(format!("lambda_tilde must lie in [0, 1], got {}", self.lambda_tilde));
        }
        if !(self.gamma > 0.0) {
            return bad(format!("gamma must be > 0, got {}", self.gamma));
        }
        if !(self.eps1 > 0.0) || !(self.eps2 > 0.0) {
            return bad("eps1 and eps2 must be > 0".into());
        }
        if self.max_inner_iters == 0 || self.max_outer_iters == 0 {
            return bad("iteration caps must be positive".into());
        }
        if self.power_iters < 20 {
            return bad(format!("power_iters must be >= 20, got {}", self.power_iters));
        }
        if let Some(s) = self.noise_std {
            if !(s >= 0.0) {
                return bad(format!("noise_std must be >= 0, got {s}"));
            }
        }
        if let MuSchedule::Explicit(v) = &self.mu_schedule {
            validate_schedule(v)?;
        }
        Ok(())
    }

    /// Transport weight `mu = mu_t lambda_t`.
    pub fn mu(&self, mu_tilde: f64) -> f64 {
        mu_tilde * self.lambda_tilde
    }

    /// Sparsity weight `lambda = mu_t (1 - lambda_t)`.
    pub fn lambda(&self, mu_tilde: f64) -> f64 {
        mu_tilde * (1.0 - self.lambda_tilde)
    }
}

/// The four terms of `H` and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HTerms {
    pub total: f64,
    pub data_term: f64,
    pub transport_term: f64,
    pub l1_term: f64,
    pub alpha_term: f64,
}

impl HTerms {
    pub(crate) fn new(data: f64, transport: f64, l1: f64, alpha: f64) -> Self {
        Self {
            total: data + transport + l1 + alpha,
            data_term: data,
            transport_term: transport,
            l1_term: l1,
            alpha_term: alpha,
        }
    }

    /// `H` with the chirp penalty dropped, the part FISTA decreases.
    pub fn without_alpha(&self) -> f64 {
        self.data_term + self.transport_term + self.l1_term
    }
}

pub(crate) fn l1_sum(f: &Array2<Complex64>) -> f64 {
    f.iter().map(|z| z.norm()).sum()
}

pub(crate) fn residual_sq(af: &Array1<f64>, signal: &Array1<f64>) -> f64 {
    af.iter()
        .zip(signal.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum()
}

/// Evaluate `H` from precomputed `A F` and `B_a F`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn terms_from_parts(
    ops: &TfOperators,
    af: &Array1<f64>,
    bf: &Array2<Complex64>,
    f: &Array2<Complex64>,
    alpha: &ChirpTrack,
    signal: &Array1<f64>,
    mu: f64,
    lambda: f64,
    gamma: f64,
) -> HTerms {
    let g = ops.grid();
    let (dt, dw) = (g.dt(), g.dw());
    let data = dt * residual_sq(af, signal);
    let transport = if mu > 0.0 {
        mu * dt * dw * norm(bf).powi(2)
    } else {
        0.0
    };
    let l1 = if lambda > 0.0 { lambda * dt * dw * l1_sum(f) } else { 0.0 };
    let alpha_term = gamma * dt * alpha.values().dot(alpha.values());
    HTerms::new(data, transport, l1, alpha_term)
}

/// `eval_H(F, alpha, f, p, mu_tilde)`.
pub fn eval_h(
    f: &TFMatrix,
    alpha: &ChirpTrack,
    signal: &SampledSignal,
    params: &TycoonParams,
    mu_tilde: f64,
) -> Result<HTerms> {
    let ops = TfOperators::new(*f.grid(), params.deriv_method);
    eval_h_with(&ops, f, alpha, signal, params, mu_tilde)
}

pub fn eval_h_with(
    ops: &TfOperators,
    f: &TFMatrix,
    alpha: &ChirpTrack,
    signal: &SampledSignal,
    params: &TycoonParams,
    mu_tilde: f64,
) -> Result<HTerms> {
    f.check_grid(ops.grid())?;
    alpha.check_grid(ops.grid())?;
    signal.check_grid(ops.grid())?;
    let af = ops.a_raw(f.values());
    let mu = params.mu(mu_tilde);
    let bf = if mu > 0.0 {
        ops.b_raw(f.values(), alpha)
    } else {
        Array2::zeros((0, 0))
    };
    Ok(terms_from_parts(
        ops,
        &af,
        &bf,
        f.values(),
        alpha,
        signal.samples(),
        mu,
        params.lambda(mu_tilde),
        params.gamma,
    ))
}

/// `grad_smooth(F, alpha, f, mu)`:
/// `2 dt A*(A F - f) + 2 dt dw mu B_a* B_a F`.
pub fn grad_smooth(
    f: &TFMatrix,
    alpha: &ChirpTrack,
    signal: &SampledSignal,
    mu: f64,
    method: DerivMethod,
) -> Result<TFMatrix> {
    let ops = TfOperators::new(*f.grid(), method);
    grad_smooth_with(&ops, f, alpha, signal, mu)
}

pub fn grad_smooth_with(
    ops: &TfOperators,
    f: &TFMatrix,
    alpha: &ChirpTrack,
    signal: &SampledSignal,
    mu: f64,
) -> Result<TFMatrix> {
    f.check_grid(ops.grid())?;
    alpha.check_grid(ops.grid())?;
    signal.check_grid(ops.grid())?;
    if !(mu >= 0.0) {
        return Err(TycoonError::InvalidParameter(format!("mu must be >= 0, got {mu}")));
    }
    let af = ops.a_raw(f.values());
    let bf = if mu > 0.0 {
        Some(ops.b_raw(f.values(), alpha))
    } else {
        None
    };
    Ok(TFMatrix::wrap(
        *ops.grid(),
        grad_from_parts(ops, &af, bf.as_ref(), alpha, signal.samples(), mu),
    ))
}

pub(crate) fn grad_from_parts(
    ops: &TfOperators,
    af: &Array1<f64>,
    bf: Option<&Array2<Complex64>>,
    alpha: &ChirpTrack,
    signal: &Array1<f64>,
    mu: f64,
) -> Array2<Complex64> {
    let g = ops.grid();
    let (dt, dw) = (g.dt(), g.dw());
    let resid = af - signal;
    let mut out = ops.a_adj_raw(resid.view());
    out.mapv_inplace(|z| z * (2.0 * dt));
    if let Some(bf) = bf {
        if mu > 0.0 {
            let bb = ops.b_adj_raw(bf, alpha);
            out.scaled_add(Complex64::new(2.0 * dt * dw * mu, 0.0), &bb);
        }
    }
    out
}
