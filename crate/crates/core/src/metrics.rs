//! Time-varying power spectra, the 1-D optimal-transport distance, the
//! column-integrated `D` metric, and dynamic-range compression.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{shape_err, Result, TycoonError};
use crate::grid::{TFGrid, TFMatrix};
use crate::synth::GIMTComponent;

/// Nonnegative power spectrum on a TF grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TvPS {
    grid: TFGrid,
    values: Array2<f64>,
}

impl TvPS {
    pub fn new(grid: TFGrid, values: Array2<f64>) -> Result<Self> {
        if values.dim() != grid.shape() {
            return Err(shape_err(format!("{:?}", grid.shape()), format!("{:?}", values.dim())));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(TycoonError::InvalidParameter(
                "power spectrum entries must be finite and nonnegative".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: TFGrid) -> Self {
        Self {
            grid,
            values: Array2::zeros(grid.shape()),
        }
    }

    pub fn grid(&self) -> &TFGrid {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn column_mass(&self, m: usize) -> f64 {
        self.values.column(m).sum()
    }
}

/// `|F|^2` entrywise.
pub fn tvps_from_tfr(f: &TFMatrix) -> TvPS {
    TvPS {
        grid: *f.grid(),
        values: f.values().mapv(|z| z.norm_sqr()),
    }
}

/// Rasterize `sum_k A_k^2 delta_{phi_k'}`: each in-support sample deposits
/// `A^2` split linearly between the two bins bracketing its
/// finite-difference IF. Mass at negative frequency or above the top
/// bin is dropped with a warning.
pub fn itvps(components: &[GIMTComponent], grid: &TFGrid) -> Result<TvPS> {
    let mut s = Array2::<f64>::zeros(grid.shape());
    let top = grid.n() as f64;
    let mut dropped = 0usize;
    for c in components {
        if c.len() != grid.cols() {
            return Err(shape_err(
                format!("component of length {}", grid.cols()),
                c.len(),
            ));
        }
        if c.support.1 - c.support.0 < 3 && c.support.1 > c.support.0 {
            return Err(TycoonError::InvalidParameter(
                "component support needs at least 3 samples".into(),
            ));
        }
        let ifreq = c.inst_freq(grid.dt());
        for m in c.support.0..c.support.1 {
            let pos = ifreq[m] / grid.dw();
            if !(pos >= 0.0 && pos <= top) {
                dropped += 1;
                continue;
            }
            let mass = c.amp[m] * c.amp[m];
            let lo = pos.floor();
            let frac = pos - lo;
            let lo = lo as usize;
            if lo >= grid.n() {
                s[[grid.n(), m]] += mass;
            } else {
                s[[lo, m]] += mass * (1.0 - frac);
                s[[lo + 1, m]] += mass * frac;
            }
        }
    }
    if dropped > 0 {
        log::warn!("itvps: {dropped} samples with IF outside [0, Nyquist] dropped");
    }
    TvPS::new(*grid, s)
}

/// `bin_width * sum_j |CDF_p(j) - CDF_q(j)|` for histograms summing to 1.
pub fn ot1d(p: &[f64], q: &[f64], bin_width: f64) -> Result<f64> {
    if p.len() != q.len() {
        return Err(shape_err(p.len(), q.len()));
    }
    for h in [p, q] {
        let total: f64 = h.iter().sum();
        if h.iter().any(|v| !(*v >= 0.0)) || (total - 1.0).abs() > 1e-9 {
            return Err(TycoonError::InvalidParameter(format!(
                "histogram must be nonnegative and sum to 1 (sum = {total})"
            )));
        }
    }
    Ok(ot1d_unchecked(p, q, bin_width))
}

fn ot1d_unchecked(p: &[f64], q: &[f64], bin_width: f64) -> f64 {
    let mut gap = 0.0;
    let mut acc = 0.0;
    for (a, b) in p.iter().zip(q) {
        gap += a - b;
        acc += gap.abs();
    }
    bin_width * acc
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DReport {
    pub value: f64,
    pub skipped_columns: usize,
    /// Per-column OT distance; `None` for skipped columns.
    pub profile: Vec<Option<f64>>,
}

/// Mass below which a column is treated as empty.
pub const DEGENERATE_MASS: f64 = 1e-12;

/// `100 dt sum_m ot1d(S[:, m] / |S[:, m]|, S~[:, m] / |S~[:, m]|, dw)` over
/// columns where both sides carry mass.
pub fn d_metric(s: &TvPS, s_tilde: &TvPS) -> Result<DReport> {
    if s.grid.shape() != s_tilde.grid.shape() {
        return Err(shape_err(
            format!("{}x{}", s.grid.rows(), s.grid.cols()),
            format!("{}x{}", s_tilde.grid.rows(), s_tilde.grid.cols()),
        ));
    }
    let grid = s.grid;
    let mut profile = Vec::with_capacity(grid.cols());
    let mut total = 0.0;
    let mut skipped = 0;
    for m in 0..grid.cols() {
        let (a, b) = (s.column_mass(m), s_tilde.column_mass(m));
        if a < DEGENERATE_MASS || b < DEGENERATE_MASS {
            skipped += 1;
            profile.push(None);
            continue;
        }
        let p: Vec<f64> = s.values.column(m).iter().map(|v| v / a).collect();
        let q: Vec<f64> = s_tilde.values.column(m).iter().map(|v| v / b).collect();
        let d = ot1d_unchecked(&p, &q, grid.dw());
        total += d;
        profile.push(Some(d));
    }
    if skipped == grid.cols() {
        return Err(TycoonError::Degenerate("every column has zero mass".into()));
    }
    Ok(DReport {
        value: 100.0 * grid.dt() * total,
        skipped_columns: skipped,
        profile,
    })
}

/// Sample quantile with linear interpolation between order statistics.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(f64::total_cmp);
    let h = (v.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(v.len() - 1);
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

/// `min(S, M_q) / M_q` with `M_q` the `quantile` of all entries. If the
/// quantile is zero the maximum is used instead; an all-zero input maps to
/// zeros.
pub fn compress_dynamic_range(s: &TvPS, q: f64) -> Result<Array2<f64>> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(TycoonError::InvalidParameter(format!("quantile must be in (0, 1], got {q}")));
    }
    let flat: Vec<f64> = s.values.iter().copied().collect();
    let mut mq = quantile(&flat, q);
    if mq <= 0.0 {
        mq = flat.iter().fold(0.0f64, |a, &b| a.max(b));
    }
    if mq <= 0.0 {
        return Ok(Array2::zeros(s.values.dim()));
    }
    Ok(s.values.mapv(|v| v.min(mq) / mq))
}
