//! Time-frequency lattice and the value types that live on it.
//!
//! Only nonnegative frequencies are stored. For a real signal the
//! representation is Hermitian symmetric, `F(t, -w) = conj(F(t, w))`, so the
//! negative half carries no information; the synthesis operator accounts for
//! it with a factor of two.

use ndarray::{Array1, Array2, Zip};
use num_complex::Complex64;

use crate::error::{shape_err, Result, TycoonError};

/// Discrete time/frequency lattice: `t_m = m dt` for `m = 0..=M`,
/// `w_n = n dw` for `n = 0..=N`, with `dw = 1/(M dt)` and `N = ceil(M/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TFGrid {
    m: usize,
    n: usize,
    dt: f64,
    dw: f64,
}

impl TFGrid {
    pub fn new(m: usize, dt: f64) -> Result<Self> {
        if m < 4 || !(dt > 0.0) || !dt.is_finite() {
            return Err(TycoonError::InvalidGrid { m, dt });
        }
        Ok(Self {
            m,
            n: m.div_ceil(2),
            dt,
            dw: 1.0 / (m as f64 * dt),
        })
    }

    /// Grid matching a sampled signal (`M` = sample count minus one).
    pub fn for_signal(signal: &SampledSignal) -> Result<Self> {
        Self::new(signal.len() - 1, signal.dt())
    }

    /// Rebuild a grid from stored dimensions, checking that `dw` is consistent.
    pub fn from_parts(rows: usize, cols: usize, dt: f64, dw: f64) -> Result<Self> {
        if cols < 5 {
            return Err(TycoonError::InvalidGrid { m: cols.saturating_sub(1), dt });
        }
        let grid = Self::new(cols - 1, dt)?;
        if grid.rows() != rows || (grid.dw - dw).abs() > 1e-12 * grid.dw.max(dw) {
            return Err(shape_err(
                format!("{}x{} with dw = {}", grid.rows(), grid.cols(), grid.dw),
                format!("{}x{} with dw = {}", rows, cols, dw),
            ));
        }
        Ok(grid)
    }

    /// `M`, the number of sampling intervals.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `N`, the top frequency index.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn dw(&self) -> f64 {
        self.dw
    }

    /// Number of frequency rows, `N + 1`.
    pub fn rows(&self) -> usize {
        self.n + 1
    }

    /// Number of time columns, `M + 1`.
    pub fn cols(&self) -> usize {
        self.m + 1
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    pub fn time(&self, m: usize) -> f64 {
        m as f64 * self.dt
    }

    pub fn freq(&self, n: usize) -> f64 {
        n as f64 * self.dw
    }

    pub fn times(&self) -> Array1<f64> {
        Array1::from_shape_fn(self.cols(), |m| self.time(m))
    }

    pub fn freqs(&self) -> Array1<f64> {
        Array1::from_shape_fn(self.rows(), |n| self.freq(n))
    }
}

/// `make_grid(M, dt)`.
pub fn make_grid(m: usize, dt: f64) -> Result<TFGrid> {
    TFGrid::new(m, dt)
}

/// Complex positive-frequency TF representation; entry `(n, m)` is `F(t_m, w_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TFMatrix {
    grid: TFGrid,
    values: Array2<Complex64>,
}

impl TFMatrix {
    pub fn zeros(grid: TFGrid) -> Self {
        Self {
            grid,
            values: Array2::zeros(grid.shape()),
        }
    }

    pub fn from_values(grid: TFGrid, values: Array2<Complex64>) -> Result<Self> {
        if values.dim() != grid.shape() {
            return Err(shape_err(
                format!("{:?}", grid.shape()),
                format!("{:?}", values.dim()),
            ));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(TycoonError::NonFinite("TF matrix entries".into()));
        }
        Ok(Self { grid, values })
    }

    /// Internal constructor for operator outputs whose shape is known.
    pub(crate) fn wrap(grid: TFGrid, values: Array2<Complex64>) -> Self {
        debug_assert_eq!(values.dim(), grid.shape());
        Self { grid, values }
    }

    pub fn grid(&self) -> &TFGrid {
        &self.grid
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array2<Complex64> {
        self.values
    }

    /// Real inner product `Re sum X conj(Y)` on the complex matrix space.
    pub fn inner(&self, other: &TFMatrix) -> f64 {
        inner(&self.values, &other.values)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.values)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn check_grid(&self, grid: &TFGrid) -> Result<()> {
        if self.grid != *grid {
            return Err(shape_err(
                format!("{:?}", grid.shape()),
                format!("{:?}", self.grid.shape()),
            ));
        }
        Ok(())
    }
}

/// Real inner product `Re sum a conj(b)`.
pub fn inner(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    Zip::from(a)
        .and(b)
        .fold(0.0, |acc, x, y| acc + x.re * y.re + x.im * y.im)
}

pub fn norm(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Per-time chirp factor estimate (Hz per second).
#[derive(Debug, Clone, PartialEq)]
pub struct ChirpTrack(Array1<f64>);

impl ChirpTrack {
    pub fn zeros(len: usize) -> Self {
        Self(Array1::zeros(len))
    }

    pub fn new(values: Array1<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(TycoonError::NonFinite("chirp track".into()));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.dot(&self.0).sqrt()
    }

    pub(crate) fn check_grid(&self, grid: &TFGrid) -> Result<()> {
        if self.len() != grid.cols() {
            return Err(shape_err(grid.cols(), self.len()));
        }
        Ok(())
    }
}

/// Uniformly sampled real signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    samples: Array1<f64>,
    dt: f64,
}

impl SampledSignal {
    pub fn new(samples: Array1<f64>, dt: f64) -> Result<Self> {
        if samples.len() < 5 {
            return Err(TycoonError::InvalidParameter(format!(
                "signal needs at least 5 samples, got {}",
                samples.len()
            )));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(TycoonError::InvalidParameter(format!("dt must be > 0, got {dt}")));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(TycoonError::NonFinite("signal samples".into()));
        }
        Ok(Self { samples, dt })
    }

    pub fn samples(&self) -> &Array1<f64> {
        &self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Array1<f64> {
        Array1::from_shape_fn(self.len(), |m| m as f64 * self.dt)
    }

    /// `Delta_t * sum f^2`, the rectangle-rule energy.
    pub fn energy(&self) -> f64 {
        self.dt * self.samples.dot(&self.samples)
    }

    pub(crate) fn check_grid(&self, grid: &TFGrid) -> Result<()> {
        if self.len() != grid.cols() {
            return Err(shape_err(grid.cols(), self.len()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_formulas() {
        let g = make_grid(512, 0.1).unwrap();
        assert_eq!(g.n(), 256);
        assert!((g.dw() - 1.0 / 51.2).abs() < 1e-15);

        let g = make_grid(5, 1.0).unwrap();
        assert_eq!(g.n(), 3);
        assert!((g.dw() - 0.2).abs() < 1e-15);

        let g = make_grid(800, 0.1).unwrap();
        assert_eq!(g.n(), 400);
        assert!((g.dw() - 0.0125).abs() < 1e-15);
        assert_eq!(g.shape(), (401, 801));
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(make_grid(3, 0.1).is_err());
        assert!(make_grid(8, 0.0).is_err());
        assert!(make_grid(8, -1.0).is_err());
        assert!(make_grid(8, f64::NAN).is_err());
    }

    #[test]
    fn matrix_shape_and_finiteness_checked() {
        let g = make_grid(8, 1.0).unwrap();
        assert!(TFMatrix::from_values(g, Array2::zeros((5, 9))).is_ok());
        assert!(TFMatrix::from_values(g, Array2::zeros((4, 9))).is_err());
        let mut v = Array2::zeros((5, 9));
        v[[0, 0]] = Complex64::new(f64::NAN, 0.0);
        assert!(TFMatrix::from_values(g, v).is_err());
    }

    #[test]
    fn signal_validation() {
        assert!(SampledSignal::new(Array1::zeros(4), 0.1).is_err());
        assert!(SampledSignal::new(Array1::zeros(5), 0.0).is_err());
        let s = SampledSignal::new(Array1::ones(5), 0.5).unwrap();
        assert_eq!(TFGrid::for_signal(&s).unwrap().m(), 4);
        assert!((s.energy() - 2.5).abs() < 1e-15);
    }
}
