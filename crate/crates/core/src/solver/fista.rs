use ndarray::{Array1, Array2, Zip};
use num_complex::Complex64;

use super::relative_change;
use crate::error::{Result, TycoonError};
use crate::functional::{grad_from_parts, terms_from_parts, TycoonParams};
use crate::grid::{norm, ChirpTrack, SampledSignal, TFMatrix};
use crate::operators::TfOperators;

/// Complex soft-thresholding: magnitudes shrink by `tau`, phases are kept,
/// entries with `|F| <= tau` become zero.
pub fn prox_l1(f: &TFMatrix, tau: f64) -> Result<TFMatrix> {
    if !(tau >= 0.0) {
        return Err(TycoonError::InvalidParameter(format!("tau must be >= 0, got {tau}")));
    }
    let mut v = f.values().clone();
    soft_threshold_inplace(&mut v, tau);
    Ok(TFMatrix::wrap(*f.grid(), v))
}

pub(crate) fn soft_threshold_inplace(v: &mut Array2<Complex64>, tau: f64) {
    if tau == 0.0 {
        return;
    }
    v.mapv_inplace(|z| {
        let r = z.norm();
        if r <= tau {
            Complex64::new(0.0, 0.0)
        } else {
            z * ((r - tau) / r)
        }
    });
}

#[derive(Debug, Clone)]
pub struct FistaOutcome {
    pub f: TFMatrix,
    pub iterations: usize,
    /// `H_a` (without the chirp penalty) at the start and after every
    /// iteration; non-increasing by construction.
    pub h_history: Vec<f64>,
    pub converged: bool,
}

/// Monotone FISTA for `F -> H(F, alpha)` at fixed `mu_tilde`, with step
/// `1 / lipschitz`.
pub fn fista(
    f0: &TFMatrix,
    alpha: &ChirpTrack,
    signal: &SampledSignal,
    params: &TycoonParams,
    mu_tilde: f64,
    lipschitz: f64,
) -> Result<FistaOutcome> {
    let ops = TfOperators::new(*f0.grid(), params.deriv_method);
    fista_with(&ops, f0, alpha, signal, params, mu_tilde, lipschitz)
}

/// Cached `F`, `A F` and `B_a F`. Both operators are linear, so the
/// extrapolated point's images are combinations of cached ones.
struct Point {
    f: Array2<Complex64>,
    af: Array1<f64>,
    bf: Array2<Complex64>,
}

impl Point {
    fn new(ops: &TfOperators, f: Array2<Complex64>, alpha: &ChirpTrack, with_b: bool) -> Self {
        let af = ops.a_raw(&f);
        let bf = if with_b {
            ops.b_raw(&f, alpha)
        } else {
            Array2::zeros((0, 0))
        };
        Self { f, af, bf }
    }
}

/// `out = x1 + c1 (x1 - x0) + c2 (xh - x0)`, applied to every cached field.
fn relax(x1: &Point, x0: &Point, xh: &Point, c1: f64, c2: f64) -> Point {
    let comb2 = |a: &Array2<Complex64>, b: &Array2<Complex64>, h: &Array2<Complex64>| {
        if a.is_empty() {
            return Array2::zeros((0, 0));
        }
        let mut out = a.clone();
        Zip::from(&mut out)
            .and(a)
            .and(b)
            .and(h)
            .for_each(|o, &a, &b, &h| *o = a + (a - b) * c1 + (h - b) * c2);
        out
    };
    let mut af = x1.af.clone();
    Zip::from(&mut af)
        .and(&x1.af)
        .and(&x0.af)
        .and(&xh.af)
        .for_each(|o, &a, &b, &h| *o = a + c1 * (a - b) + c2 * (h - b));
    Point {
        f: comb2(&x1.f, &x0.f, &xh.f),
        af,
        bf: comb2(&x1.bf, &x0.bf, &xh.bf),
    }
}

pub fn fista_with(
    ops: &TfOperators,
    f0: &TFMatrix,
    alpha: &ChirpTrack,
    signal: &SampledSignal,
    params: &TycoonParams,
    mu_tilde: f64,
    lipschitz: f64,
) -> Result<FistaOutcome> {
    f0.check_grid(ops.grid())?;
    alpha.check_grid(ops.grid())?;
    signal.check_grid(ops.grid())?;
    if !(lipschitz > 0.0) || !lipschitz.is_finite() {
        return Err(TycoonError::InvalidParameter(format!(
            "Lipschitz constant must be positive and finite, got {lipschitz}"
        )));
    }
    let grid = *ops.grid();
    let mu = params.mu(mu_tilde);
    let lambda = params.lambda(mu_tilde);
    let with_b = mu > 0.0;
    let threshold = lambda * grid.dt() * grid.dw() / lipschitz;
    let step = Complex64::new(-1.0 / lipschitz, 0.0);
    let y = signal.samples();

    let h_of = |p: &Point| {
        terms_from_parts(ops, &p.af, &p.bf, &p.f, alpha, y, mu, lambda, 0.0).without_alpha()
    };

    let mut x = Point::new(ops, f0.values().clone(), alpha, with_b);
    let mut h_x = h_of(&x);
    let mut z = Point {
        f: x.f.clone(),
        af: x.af.clone(),
        bf: x.bf.clone(),
    };
    let mut history = vec![h_x];
    let mut converged = false;
    let mut iterations = 0;

    for k in 0..params.max_inner_iters {
        iterations = k + 1;
        let grad = grad_from_parts(ops, &z.af, with_b.then_some(&z.bf), alpha, y, mu);
        let mut cand = z.f.clone();
        cand.scaled_add(step, &grad);
        soft_threshold_inplace(&mut cand, threshold);
        if cand.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(TycoonError::Diverged(format!(
                "non-finite FISTA iterate at inner step {k} (mu_tilde = {mu_tilde:e}, L = {lipschitz:e})"
            )));
        }
        let half = Point::new(ops, cand, alpha, with_b);
        let h_half = h_of(&half);

        let base = norm(&x.f);
        let accepted = h_half < h_x;
        let diff = norm(&(&half.f - &x.f));
        // A rejected step leaves F unchanged; the candidate's distance then
        // measures progress instead.
        let ratio = relative_change(diff, base);
        let kf = k as f64;
        let (c1, c2) = (kf / (kf + 2.0), (kf + 1.0) / (kf + 2.0));
        if accepted {
            z = relax(&half, &x, &half, c1, c2);
            x = half;
            h_x = h_half;
        } else {
            z = relax(&x, &x, &half, c1, c2);
        }
        history.push(h_x);
        if ratio <= params.eps1 {
            converged = true;
            break;
        }
    }

    Ok(FistaOutcome {
        f: TFMatrix::wrap(grid, x.f),
        iterations,
        h_history: history,
        converged,
    })
}
