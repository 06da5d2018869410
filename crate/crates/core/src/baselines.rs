//! Gaussian-window STFT and its frequency-axis synchrosqueezed variant,
//! both on the Tycoon grid (hop of one sample, rows at `n dw`).
//!
//! Frames are taken circularly: column `m` sees `f[(m + u) mod len]` for
//! `|u| <= half_width`, with the phase measured relative to the frame
//! centre. A circular shift of the signal therefore shifts the columns.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TycoonError};
use crate::grid::{SampledSignal, TFGrid, TFMatrix};

/// Gaussian analysis window with standard deviation `sigma` seconds,
/// truncated at `+-4 sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub sigma: f64,
}

impl WindowSpec {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(TycoonError::InvalidParameter(format!("window sigma must be > 0, got {sigma}")));
        }
        Ok(Self { sigma })
    }

    pub fn half_width(&self, dt: f64) -> usize {
        (4.0 * self.sigma / dt).ceil() as usize
    }

    /// Window taps `g(u dt)` and their analytic derivative `g'(u dt)` for
    /// `u = -half_width ..= half_width`, scaled so `sum g^2 = 1`.
    pub fn taps(&self, dt: f64) -> (Vec<f64>, Vec<f64>) {
        let hw = self.half_width(dt) as isize;
        let s2 = self.sigma * self.sigma;
        let g: Vec<f64> = (-hw..=hw)
            .map(|u| {
                let x = u as f64 * dt;
                (-0.5 * x * x / s2).exp()
            })
            .collect();
        let scale = g.iter().map(|v| v * v).sum::<f64>().sqrt().recip();
        let dg = (-hw..=hw)
            .zip(&g)
            .map(|(u, v)| -(u as f64 * dt) / s2 * v * scale)
            .collect();
        (g.into_iter().map(|v| v * scale).collect(), dg)
    }
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self { sigma: 1.0 }
    }
}

fn check_inputs(f: &SampledSignal, w: &WindowSpec, grid: &TFGrid) -> Result<usize> {
    f.check_grid(grid)?;
    let hw = w.half_width(grid.dt());
    if 2 * hw >= grid.m() {
        return Err(TycoonError::InvalidParameter(format!(
            "window half width {hw} samples does not fit a signal of {} samples",
            grid.cols()
        )));
    }
    Ok(hw)
}

/// Windowed sums `sum_u f[(m+u) mod len] taps[u] e^{-i 2 pi w_n u dt}`
/// for each tap vector, column-parallel.
fn windowed_transform(f: &SampledSignal, grid: &TFGrid, taps: &[&[f64]]) -> Vec<Array2<Complex64>> {
    let rows = grid.rows();
    let cols = grid.cols();
    let width = taps[0].len();
    let hw = (width / 2) as isize;
    let dt = grid.dt();
    let twiddle: Vec<Complex64> = (0..rows)
        .flat_map(|n| {
            let w = grid.freq(n);
            (-hw..=hw).map(move |u| Complex64::from_polar(1.0, -2.0 * PI * w * u as f64 * dt))
        })
        .collect();
    let x = f.samples();
    let columns: Vec<Vec<Vec<Complex64>>> = (0..cols)
        .into_par_iter()
        .map(|m| {
            let seg: Vec<f64> = (-hw..=hw)
                .map(|u| x[(m as isize + u).rem_euclid(cols as isize) as usize])
                .collect();
            taps.iter()
                .map(|t| {
                    let prod: Vec<f64> = seg.iter().zip(t.iter()).map(|(a, b)| a * b).collect();
                    (0..rows)
                        .map(|n| {
                            let tw = &twiddle[n * width..(n + 1) * width];
                            prod.iter().zip(tw).map(|(p, e)| e * p).sum()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    (0..taps.len())
        .map(|k| Array2::from_shape_fn((rows, cols), |(n, m)| columns[m][k][n]))
        .collect()
}

/// Gaussian-window STFT sampled at the grid frequencies, one column per
/// sample, window normalized to unit energy.
pub fn stft_gauss(f: &SampledSignal, w: &WindowSpec, grid: &TFGrid) -> Result<TFMatrix> {
    check_inputs(f, w, grid)?;
    let (g, _) = w.taps(grid.dt());
    let v = windowed_transform(f, grid, &[&g]).pop().expect("one transform");
    Ok(TFMatrix::wrap(*grid, v))
}

/// Default discard threshold relative to `max |V|`.
pub const SST_RELATIVE_THRESHOLD: f64 = 1e-8;

/// Frequency-axis synchrosqueezing of the Gaussian STFT.
///
/// Coefficients with `|V| <= threshold` are discarded. Each retained
/// coefficient moves its energy `|V|^2` to the bin nearest
/// `eta - Im(V_g' / (2 pi V_g))` (clamped to `0..=N`). The output holds the
/// square root of the reassigned energy, so `|S|^2` sums to the retained
/// STFT energy. Pass `None` for the default `1e-8 max |V|` threshold.
pub fn sst_stft(f: &SampledSignal, w: &WindowSpec, grid: &TFGrid, threshold: Option<f64>) -> Result<TFMatrix> {
    check_inputs(f, w, grid)?;
    let (g, dg) = w.taps(grid.dt());
    let mut vs = windowed_transform(f, grid, &[&g, &dg]);
    let vd = vs.pop().expect("derivative transform");
    let v = vs.pop().expect("window transform");
    let vmax = v.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let thr = match threshold {
        Some(t) if t >= 0.0 => t,
        Some(t) => return Err(TycoonError::InvalidParameter(format!("threshold must be >= 0, got {t}"))),
        None => SST_RELATIVE_THRESHOLD * vmax,
    };
    let n_max = grid.n();
    let dw = grid.dw();
    let mut energy = Array2::<f64>::zeros(grid.shape());
    for ((n, m), z) in v.indexed_iter() {
        let mag = z.norm();
        if mag <= thr || mag == 0.0 {
            continue;
        }
        let shift = (vd[[n, m]] / (2.0 * PI * z)).im;
        let target = grid.freq(n) - shift;
        let k = if target.is_finite() {
            (target / dw).round().clamp(0.0, n_max as f64) as usize
        } else {
            n
        };
        energy[[k, m]] += mag * mag;
    }
    Ok(TFMatrix::wrap(*grid, energy.mapv(|e| Complex64::new(e.sqrt(), 0.0))))
}

/// Total `|V|^2` of STFT coefficients above the SST threshold.
pub fn retained_energy(v: &TFMatrix, threshold: f64) -> f64 {
    v.values()
        .iter()
        .map(|z| z.norm())
        .filter(|&a| a > threshold && a > 0.0)
        .map(|a| a * a)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array1;

    fn tone(len: usize, dt: f64, bin: usize) -> (SampledSignal, TFGrid) {
        let grid = TFGrid::new(len - 1, dt).unwrap();
        let w = grid.freq(bin);
        let x = Array1::from_shape_fn(len, |m| (2.0 * PI * w * m as f64 * dt).cos());
        (SampledSignal::new(x, dt).unwrap(), grid)
    }

    #[test]
    fn taps_unit_energy_and_derivative() {
        let w = WindowSpec::new(1.0).unwrap();
        let (g, dg) = w.taps(0.1);
        assert_eq!(g.len(), 81);
        assert!((g.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
        // analytic derivative against a central difference of the taps
        for u in 1..80 {
            let fd = (g[u + 1] - g[u - 1]) / 0.2;
            assert!((fd - dg[u]).abs() < 1e-2 * g[40]);
        }
        assert!(WindowSpec::new(0.0).is_err());
    }

    #[test]
    fn stft_peak_on_tone_bin() {
        let (f, grid) = tone(256, 0.1, 40);
        let v = stft_gauss(&f, &WindowSpec::default(), &grid).unwrap();
        for m in 40..grid.cols() - 40 {
            let col = v.values().column(m);
            let arg = (0..grid.rows()).max_by(|&a, &b| col[a].norm().total_cmp(&col[b].norm())).unwrap();
            assert_eq!(arg, 40);
        }
    }

    #[test]
    fn zero_signal_and_wide_window() {
        let grid = TFGrid::new(63, 0.1).unwrap();
        let f = SampledSignal::new(Array1::zeros(64), 0.1).unwrap();
        let w = WindowSpec::new(0.5).unwrap();
        assert!(stft_gauss(&f, &w, &grid).unwrap().values().iter().all(|z| z.norm() == 0.0));
        assert!(sst_stft(&f, &w, &grid, None).unwrap().values().iter().all(|z| z.norm() == 0.0));
        assert!(stft_gauss(&f, &WindowSpec::new(1.0).unwrap(), &grid).is_err());
    }

    #[test]
    fn sst_concentrates_tone_and_conserves_mass() {
        let (f, grid) = tone(256, 0.1, 37);
        let w = WindowSpec::default();
        let v = stft_gauss(&f, &w, &grid).unwrap();
        let s = sst_stft(&f, &w, &grid, None).unwrap();
        let vmax = v.values().iter().fold(0.0f64, |a, z| a.max(z.norm()));
        let kept = retained_energy(&v, SST_RELATIVE_THRESHOLD * vmax);
        let squeezed: f64 = s.values().iter().map(|z| z.norm_sqr()).sum();
        assert!((kept - squeezed).abs() <= 1e-10 * kept);
        for m in 40..grid.cols() - 40 {
            let col = s.values().column(m);
            let total: f64 = col.iter().map(|z| z.norm_sqr()).sum();
            let near: f64 = (36..=38).map(|n| col[n].norm_sqr()).sum();
            assert!(near >= (1.0 - 1e-6) * total, "column {m}");
        }
    }

    #[test]
    fn circular_shift_covariance() {
        let grid = TFGrid::new(99, 0.1).unwrap();
        let x = Array1::from_shape_fn(100, |m| ((m * 7919) % 23) as f64 - 11.0);
        let f = SampledSignal::new(x.clone(), 0.1).unwrap();
        let shifted = SampledSignal::new(Array1::from_shape_fn(100, |m| x[(m + 100 - 5) % 100]), 0.1).unwrap();
        let w = WindowSpec::new(0.8).unwrap();
        let a = stft_gauss(&f, &w, &grid).unwrap();
        let b = stft_gauss(&shifted, &w, &grid).unwrap();
        for m in 0..100 {
            for n in 0..grid.rows() {
                assert!((a.values()[[n, m]] - b.values()[[n, (m + 5) % 100]]).norm() < 1e-12);
            }
        }
    }
}
