use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::alpha::update_alpha_with;
use super::fista::fista_with;
use super::lipschitz::{power_iterate, random_start};
use super::relative_change;
use crate::error::{Result, TycoonError};
use crate::functional::{eval_h_with, HTerms, TycoonParams};
use crate::grid::{ChirpTrack, SampledSignal, TFGrid, TFMatrix};
use crate::operators::TfOperators;

/// One alternating step: a FISTA solve in `F` followed by the chirp update.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OuterRecord {
    pub inner_iterations: usize,
    pub inner_converged: bool,
    pub lipschitz: f64,
    /// `H` after the `F` update (old chirp track).
    pub h_after_f: f64,
    /// `H` after the chirp update; its terms are below.
    pub terms: HTerms,
    pub rel_change_f: f64,
    pub rel_change_alpha: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageTrace {
    pub mu_tilde: f64,
    pub mu: f64,
    pub lambda: f64,
    /// `H` at the warm start, evaluated with this stage's weights.
    pub h_start: f64,
    pub outer: Vec<OuterRecord>,
    pub converged: bool,
    /// Every `H` value visited in this stage, in order: the warm start, each
    /// FISTA step, and each chirp update.
    #[serde(skip)]
    pub h_sequence: Vec<f64>,
}

impl StageTrace {
    /// Terms of `H` at the end of the stage.
    pub fn final_terms(&self) -> HTerms {
        self.outer.last().map(|o| o.terms).unwrap_or_default()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveTrace {
    pub stages: Vec<StageTrace>,
    /// Lipschitz estimate used in the last outer iteration.
    pub lipschitz: f64,
    pub selected_stage: usize,
}

impl SolveTrace {
    /// Number of steps, across all stages, where the recorded objective
    /// rose by more than `rel_tol` relative to the previous value.
    pub fn descent_violations(&self, rel_tol: f64) -> usize {
        self.stages
            .iter()
            .flat_map(|s| s.h_sequence.windows(2))
            .filter(|w| w[1] > w[0] + rel_tol * w[0].abs())
            .count()
    }
}

#[derive(Debug, Clone)]
pub struct TycoonResult {
    pub f: TFMatrix,
    pub alpha: ChirpTrack,
    pub trace: SolveTrace,
    pub chosen_mu_tilde: f64,
    /// Solution at the end of each stage.
    pub stage_solutions: Vec<(TFMatrix, ChirpTrack)>,
}

/// Minimize `H` over the `mu_t` schedule, warm-starting each stage from the
/// previous one. Returns the last stage, or the discrepancy-selected stage
/// when `params.noise_std` is set.
pub fn tycoon(signal: &SampledSignal, params: &TycoonParams) -> Result<TycoonResult> {
    tycoon_with_progress(signal, params, |_| {})
}

/// [`tycoon`] with a callback invoked after every completed stage.
pub fn tycoon_with_progress(
    signal: &SampledSignal,
    params: &TycoonParams,
    mut on_stage: impl FnMut(&StageTrace),
) -> Result<TycoonResult> {
    params.validate()?;
    let schedule = params.mu_schedule.resolve(signal)?;
    let grid = TFGrid::for_signal(signal)?;
    let ops = TfOperators::new(grid, params.deriv_method);
    let silent = signal.samples().iter().all(|&v| v == 0.0);

    let mut f = TFMatrix::zeros(grid);
    let mut alpha = ChirpTrack::zeros(grid.cols());
    let mut power_vec = random_start(&grid, params.seed);
    let mut lipschitz = 0.0;
    let mut stages = Vec::with_capacity(schedule.len());
    let mut solutions = Vec::with_capacity(schedule.len());

    for &mu_tilde in &schedule {
        let stage = run_stage(
            &ops,
            signal,
            params,
            mu_tilde,
            &mut f,
            &mut alpha,
            &mut power_vec,
            &mut lipschitz,
        )?;
        log::debug!(
            "stage mu_t = {:.3e}: {} outer steps, H = {:.6e}, converged = {}",
            mu_tilde,
            stage.outer.len(),
            stage.final_terms().total,
            stage.converged
        );
        on_stage(&stage);
        stages.push(stage);
        solutions.push((f.clone(), alpha.clone()));
        if silent {
            break;
        }
    }

    let mut trace = SolveTrace {
        stages,
        lipschitz,
        selected_stage: 0,
    };
    let selected = match params.noise_std {
        Some(sigma) => select_mu_discrepancy(&trace, sigma, &grid)?,
        None => trace.stages.len() - 1,
    };
    trace.selected_stage = selected;
    let (f, alpha) = solutions[selected].clone();
    Ok(TycoonResult {
        f,
        alpha,
        chosen_mu_tilde: trace.stages[selected].mu_tilde,
        trace,
        stage_solutions: solutions,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_stage(
    ops: &TfOperators,
    signal: &SampledSignal,
    params: &TycoonParams,
    mu_tilde: f64,
    f: &mut TFMatrix,
    alpha: &mut ChirpTrack,
    power_vec: &mut Array2<Complex64>,
    lipschitz: &mut f64,
) -> Result<StageTrace> {
    let grid = *ops.grid();
    let mu = params.mu(mu_tilde);
    let lambda = params.lambda(mu_tilde);
    // The alpha-dependent part of H per column is
    // mu dt dw sum_n |r + a d|^2 + gamma dt a^2.
    let gamma_over_mu = if mu > 0.0 {
        params.gamma / (mu * grid.dw())
    } else {
        f64::INFINITY
    };

    let h_start = eval_h_with(ops, f, alpha, signal, params, mu_tilde)?.total;
    let mut stage = StageTrace {
        mu_tilde,
        mu,
        lambda,
        h_start,
        outer: Vec::new(),
        converged: false,
        h_sequence: vec![h_start],
    };

    for _ in 0..params.max_outer_iters {
        let est = power_iterate(power_vec, params.power_iters, |x| {
            ops.normal_raw(x, alpha, mu)
        });
        if !(est.value > 0.0) {
            return Err(TycoonError::Degenerate(
                "Lipschitz estimate is zero".into(),
            ));
        }
        *lipschitz = est.value;

        let out = fista_with(ops, f, alpha, signal, params, mu_tilde, est.value)?;
        let alpha_pen = params.gamma * grid.dt() * alpha.values().dot(alpha.values());
        stage
            .h_sequence
            .extend(out.h_history.iter().skip(1).map(|h| h + alpha_pen));
        let h_after_f = out.h_history.last().copied().unwrap_or(f64::NAN) + alpha_pen;

        let new_alpha = update_alpha_with(ops, &out.f, gamma_over_mu)?;
        let terms = eval_h_with(ops, &out.f, &new_alpha, signal, params, mu_tilde)?;
        if !terms.total.is_finite() {
            return Err(TycoonError::Diverged(format!(
                "non-finite objective at mu_tilde = {mu_tilde:e}"
            )));
        }
        stage.h_sequence.push(terms.total);

        let rel_f = relative_change((out.f.values() - f.values()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(), f.norm());
        let rel_a = relative_change(
            (new_alpha.values() - alpha.values()).dot(&(new_alpha.values() - alpha.values())).sqrt(),
            alpha.norm(),
        );
        stage.outer.push(OuterRecord {
            inner_iterations: out.iterations,
            inner_converged: out.converged,
            lipschitz: est.value,
            h_after_f,
            terms,
            rel_change_f: rel_f,
            rel_change_alpha: rel_a,
        });
        *f = out.f;
        *alpha = new_alpha;
        if rel_f <= params.eps1 && rel_a <= params.eps2 {
            stage.converged = true;
            break;
        }
    }
    Ok(stage)
}

/// Discrepancy principle: the first stage, scanning from the largest `mu_t`,
/// whose data term is at or below the noise floor `dt (M+1) sigma^2`; the
/// last stage when none is.
pub fn select_mu_discrepancy(trace: &SolveTrace, noise_std: f64, grid: &TFGrid) -> Result<usize> {
    if trace.stages.is_empty() {
        return Err(TycoonError::InvalidParameter("empty solve trace".into()));
    }
    if !(noise_std >= 0.0) {
        return Err(TycoonError::InvalidParameter(format!(
            "noise_std must be >= 0, got {noise_std}"
        )));
    }
    let floor = grid.dt() * grid.cols() as f64 * noise_std * noise_std;
    Ok(trace
        .stages
        .iter()
        .position(|s| s.final_terms().data_term <= floor && noise_std > 0.0)
        .unwrap_or(trace.stages.len() - 1))
}
