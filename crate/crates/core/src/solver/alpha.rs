use std::f64::consts::PI;

use ndarray::{Array1, Axis, Zip};
use num_complex::Complex64;

use crate::error::{Result, TycoonError};
use crate::grid::{ChirpTrack, TFGrid, TFMatrix};
use crate::operators::{d_omega_raw, DerivMethod, TfOperators};

/// Closed-form chirp update. For each time column `m`, with
/// `r = d_t F - i 2 pi w F` and `d = D_w F`,
///
/// ```text
/// a[m] = -sum_n Re(conj(d) r) / (sum_n |d|^2 + gamma_over_mu)
/// ```
///
/// which is the exact minimizer of `sum_n |r + a d|^2 + gamma_over_mu a^2`.
pub fn update_alpha(
    f: &TFMatrix,
    grid: &TFGrid,
    gamma_over_mu: f64,
    method: DerivMethod,
) -> Result<ChirpTrack> {
    let ops = TfOperators::new(*grid, method);
    update_alpha_with(&ops, f, gamma_over_mu)
}

pub fn update_alpha_with(
    ops: &TfOperators,
    f: &TFMatrix,
    gamma_over_mu: f64,
) -> Result<ChirpTrack> {
    f.check_grid(ops.grid())?;
    if !(gamma_over_mu > 0.0) {
        return Err(TycoonError::InvalidParameter(format!(
            "gamma/mu must be > 0, got {gamma_over_mu}"
        )));
    }
    let grid = ops.grid();
    if gamma_over_mu.is_infinite() {
        return Ok(ChirpTrack::zeros(grid.cols()));
    }
    let v = f.values();
    let mut r = v.clone();
    ops.d_t_inplace(&mut r);
    for (n, mut row) in r.axis_iter_mut(Axis(0)).enumerate() {
        let w = Complex64::new(0.0, -2.0 * PI * grid.freq(n));
        Zip::from(&mut row).and(v.row(n)).for_each(|o, &x| *o += w * x);
    }
    let d = d_omega_raw(v, grid.dw());

    let mut num = Array1::<f64>::zeros(grid.cols());
    let mut den = Array1::<f64>::zeros(grid.cols());
    for (rrow, drow) in r.rows().into_iter().zip(d.rows()) {
        Zip::from(&mut num)
            .and(&mut den)
            .and(rrow)
            .and(drow)
            .for_each(|nu, de, rr, dd| {
                *nu += dd.re * rr.re + dd.im * rr.im;
                *de += dd.norm_sqr();
            });
    }
    let alpha = Zip::from(&num)
        .and(&den)
        .map_collect(|&nu, &de| -nu / (de + gamma_over_mu));
    ChirpTrack::new(alpha)
}
