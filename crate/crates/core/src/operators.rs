//! Linear operators on the TF lattice and their exact discrete adjoints.
//!
//! * `A F = 2 dw Re(1^T F)` synthesizes a real signal from the positive
//!   frequency half.
//! * `B_a F = dt F - i 2 pi W F + (D_w F) diag(a)` is the transport residual,
//!   with `W = diag(w_0..w_N)` acting on the frequency (row) index.
//!
//! All adjoints are taken for the real inner product `Re sum X conj(Y)`. The
//! adjoint of `B_a` is the transpose of the implemented stencils, not a
//! re-discretization of the continuous formula, so the adjoint identities
//! hold to rounding everywhere, including the frequency boundaries.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use ndarray::{Array1, Array2, ArrayView1, Axis, Zip};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{shape_err, Result, TycoonError};
use crate::grid::{ChirpTrack, TFGrid, TFMatrix};

/// Discretization of the time derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivMethod {
    /// Fourier multiplier `i 2 pi xi_k` on the periodic time axis.
    #[default]
    Spectral,
    /// Forward differences, backward at the last sample.
    FiniteDifference,
}

impl fmt::Display for DerivMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivMethod::Spectral => f.write_str("spectral"),
            DerivMethod::FiniteDifference => f.write_str("finite-difference"),
        }
    }
}

impl FromStr for DerivMethod {
    type Err = TycoonError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(DerivMethod::Spectral),
            "finite-difference" | "fd" => Ok(DerivMethod::FiniteDifference),
            other => Err(TycoonError::InvalidParameter(format!(
                "unknown derivative method `{other}`"
            ))),
        }
    }
}

/// Operator bundle for one grid. Holds the FFT plans so repeated
/// applications inside the solver do not re-plan.
#[derive(Clone)]
pub struct TfOperators {
    grid: TFGrid,
    method: DerivMethod,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    /// `i 2 pi xi_k / (M+1)`; the inverse FFT is unnormalized.
    multipliers: Vec<Complex64>,
    scratch_len: usize,
}

impl fmt::Debug for TfOperators {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TfOperators")
            .field("grid", &self.grid)
            .field("method", &self.method)
            .finish()
    }
}

/// Frequencies of the DFT ladder for `len` samples at spacing `dt`, with the
/// Nyquist bin (even `len`) mapped to zero.
pub fn fourier_ladder(len: usize, dt: f64) -> Vec<f64> {
    let span = len as f64 * dt;
    (0..len)
        .map(|k| {
            if 2 * k < len {
                k as f64 / span
            } else if 2 * k == len {
                0.0
            } else {
                (k as f64 - len as f64) / span
            }
        })
        .collect()
}

impl TfOperators {
    pub fn new(grid: TFGrid, method: DerivMethod) -> Self {
        let len = grid.cols();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(len);
        let ifft = planner.plan_fft_inverse(len);
        let scale = 1.0 / len as f64;
        let multipliers = fourier_ladder(len, grid.dt())
            .into_iter()
            .map(|xi| Complex64::new(0.0, 2.0 * PI * xi * scale))
            .collect();
        let scratch_len = fft
            .get_inplace_scratch_len()
            .max(ifft.get_inplace_scratch_len());
        Self {
            grid,
            method,
            fft,
            ifft,
            multipliers,
            scratch_len,
        }
    }

    pub fn grid(&self) -> &TFGrid {
        &self.grid
    }

    pub fn method(&self) -> DerivMethod {
        self.method
    }

    fn check(&self, f: &TFMatrix) -> Result<()> {
        f.check_grid(&self.grid)
    }

    // ---- synthesis -------------------------------------------------------

    /// `A F`: `result[m] = 2 dw sum_n Re F[n, m]`.
    pub fn a(&self, f: &TFMatrix) -> Result<Array1<f64>> {
        self.check(f)?;
        Ok(self.a_raw(f.values()))
    }

    pub(crate) fn a_raw(&self, f: &Array2<Complex64>) -> Array1<f64> {
        let two_dw = 2.0 * self.grid.dw();
        let mut out = Array1::zeros(self.grid.cols());
        for row in f.rows() {
            Zip::from(&mut out).and(row).for_each(|o, z| *o += z.re);
        }
        out.mapv_inplace(|v| v * two_dw);
        out
    }

    /// `A* g`: every row equals `2 dw g`.
    pub fn a_adj(&self, g: ArrayView1<f64>) -> Result<TFMatrix> {
        if g.len() != self.grid.cols() {
            return Err(shape_err(self.grid.cols(), g.len()));
        }
        Ok(TFMatrix::wrap(self.grid, self.a_adj_raw(g)))
    }

    pub(crate) fn a_adj_raw(&self, g: ArrayView1<f64>) -> Array2<Complex64> {
        let two_dw = 2.0 * self.grid.dw();
        let row = g.mapv(|v| Complex64::new(two_dw * v, 0.0));
        let mut out = Array2::zeros(self.grid.shape());
        for mut r in out.rows_mut() {
            r.assign(&row);
        }
        out
    }

    // ---- time derivative ---------------------------------------------------

    /// Time derivative along each row.
    pub fn d_t(&self, f: &TFMatrix) -> Result<TFMatrix> {
        self.check(f)?;
        let mut v = f.values().clone();
        self.d_t_inplace(&mut v);
        Ok(TFMatrix::wrap(self.grid, v))
    }

    /// Adjoint of [`Self::d_t`].
    pub fn d_t_adj(&self, f: &TFMatrix) -> Result<TFMatrix> {
        self.check(f)?;
        let mut v = f.values().clone();
        self.d_t_adj_inplace(&mut v);
        Ok(TFMatrix::wrap(self.grid, v))
    }

    pub(crate) fn d_t_inplace(&self, v: &mut Array2<Complex64>) {
        match self.method {
            DerivMethod::Spectral => self.spectral_inplace(v, false),
            DerivMethod::FiniteDifference => fd_time_inplace(v, self.grid.dt()),
        }
    }

    pub(crate) fn d_t_adj_inplace(&self, v: &mut Array2<Complex64>) {
        match self.method {
            DerivMethod::Spectral => self.spectral_inplace(v, true),
            DerivMethod::FiniteDifference => fd_time_adj_inplace(v, self.grid.dt()),
        }
    }

    /// Fourier-multiplier derivative. The multiplier is purely imaginary, so
    /// the adjoint is the negated operator.
    fn spectral_inplace(&self, v: &mut Array2<Complex64>, negate: bool) {
        let len = self.grid.cols();
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.scratch_len];
        let flat = v
            .as_slice_mut()
            .expect("TF matrices are stored in standard layout");
        self.fft.process_with_scratch(flat, &mut scratch);
        for row in flat.chunks_exact_mut(len) {
            for (z, k) in row.iter_mut().zip(&self.multipliers) {
                *z = if negate { -*z * k } else { *z * k };
            }
        }
        self.ifft.process_with_scratch(flat, &mut scratch);
    }

    // ---- frequency derivative ---------------------------------------------

    /// `D_w F`: central differences in frequency with second-order one-sided
    /// stencils at `n = 0` and `n = N`.
    pub fn d_omega(&self, f: &TFMatrix) -> Result<TFMatrix> {
        self.check(f)?;
        Ok(TFMatrix::wrap(self.grid, d_omega_raw(f.values(), self.grid.dw())))
    }

    /// `D_w^T G`.
    pub fn d_omega_adj(&self, g: &TFMatrix) -> Result<TFMatrix> {
        self.check(g)?;
        Ok(TFMatrix::wrap(self.grid, d_omega_t_raw(g.values(), self.grid.dw())))
    }

    // ---- transport residual ----------------------------------------------

    /// `B_a F = d_t F - i 2 pi W F + (D_w F) diag(a)`.
    pub fn b(&self, f: &TFMatrix, alpha: &ChirpTrack) -> Result<TFMatrix> {
        self.check(f)?;
        alpha.check_grid(&self.grid)?;
        Ok(TFMatrix::wrap(self.grid, self.b_raw(f.values(), alpha)))
    }

    /// `B_a* G = d_t*(G) + i 2 pi W G + D_w^T (G diag(a))`.
    pub fn b_adj(&self, g: &TFMatrix, alpha: &ChirpTrack) -> Result<TFMatrix> {
        self.check(g)?;
        alpha.check_grid(&self.grid)?;
        Ok(TFMatrix::wrap(self.grid, self.b_adj_raw(g.values(), alpha)))
    }

    pub(crate) fn b_raw(&self, f: &Array2<Complex64>, alpha: &ChirpTrack) -> Array2<Complex64> {
        let mut out = f.clone();
        self.d_t_inplace(&mut out);
        let dw = self.grid.dw();
        for (n, mut row) in out.axis_iter_mut(Axis(0)).enumerate() {
            let w = Complex64::new(0.0, -2.0 * PI * n as f64 * dw);
            Zip::from(&mut row)
                .and(f.row(n))
                .for_each(|o, &x| *o += w * x);
        }
        if alpha.values().iter().any(|&a| a != 0.0) {
            let mut dom = d_omega_raw(f, dw);
            scale_columns(&mut dom, alpha.values());
            out += &dom;
        }
        out
    }

    pub(crate) fn b_adj_raw(&self, g: &Array2<Complex64>, alpha: &ChirpTrack) -> Array2<Complex64> {
        let mut out = g.clone();
        self.d_t_adj_inplace(&mut out);
        let dw = self.grid.dw();
        for (n, mut row) in out.axis_iter_mut(Axis(0)).enumerate() {
            let w = Complex64::new(0.0, 2.0 * PI * n as f64 * dw);
            Zip::from(&mut row)
                .and(g.row(n))
                .for_each(|o, &x| *o += w * x);
        }
        if alpha.values().iter().any(|&a| a != 0.0) {
            let mut scaled = g.clone();
            scale_columns(&mut scaled, alpha.values());
            out += &d_omega_t_raw(&scaled, dw);
        }
        out
    }

    /// The smooth-part normal operator `2 dt A*A F + 2 dt dw mu B*B F`.
    pub(crate) fn normal_raw(
        &self,
        f: &Array2<Complex64>,
        alpha: &ChirpTrack,
        mu: f64,
    ) -> Array2<Complex64> {
        let dt = self.grid.dt();
        let mut out = self.a_adj_raw(self.a_raw(f).view());
        out.mapv_inplace(|z| z * (2.0 * dt));
        if mu > 0.0 {
            let bb = self.b_adj_raw(&self.b_raw(f, alpha), alpha);
            out.scaled_add(Complex64::new(2.0 * dt * self.grid.dw() * mu, 0.0), &bb);
        }
        out
    }
}

fn scale_columns(v: &mut Array2<Complex64>, alpha: &Array1<f64>) {
    for mut row in v.rows_mut() {
        Zip::from(&mut row).and(alpha).for_each(|z, &a| *z *= a);
    }
}

fn fd_time_inplace(v: &mut Array2<Complex64>, dt: f64) {
    let inv = 1.0 / dt;
    for mut row in v.rows_mut() {
        let len = row.len();
        let last = (row[len - 1] - row[len - 2]) * inv;
        for m in 0..len - 1 {
            row[m] = (row[m + 1] - row[m]) * inv;
        }
        row[len - 1] = last;
    }
}

/// Transpose of [`fd_time_inplace`].
fn fd_time_adj_inplace(v: &mut Array2<Complex64>, dt: f64) {
    let inv = 1.0 / dt;
    for mut row in v.rows_mut() {
        let y = row.to_owned();
        let len = y.len();
        let last = len - 1;
        for j in 0..len {
            let mut acc = Complex64::new(0.0, 0.0);
            if j < last {
                acc -= y[j];
            }
            if j >= 1 && j - 1 < last {
                acc += y[j - 1];
            }
            if j == last {
                acc += y[last];
            }
            if j + 1 == last {
                acc -= y[last];
            }
            row[j] = acc * inv;
        }
    }
}

/// Stencil of row `i` of `D_w` as `(column, coefficient)` pairs, unscaled by
/// `1/(2 dw)`.
fn d_omega_stencil(i: usize, rows: usize) -> [(usize, f64); 3] {
    let last = rows - 1;
    if i == 0 {
        [(0, -3.0), (1, 4.0), (2, -1.0)]
    } else if i == last {
        [(last, 3.0), (last - 1, -4.0), (last - 2, 1.0)]
    } else {
        [(i - 1, -1.0), (i + 1, 1.0), (i, 0.0)]
    }
}

pub(crate) fn d_omega_raw(f: &Array2<Complex64>, dw: f64) -> Array2<Complex64> {
    let rows = f.nrows();
    let scale = 1.0 / (2.0 * dw);
    let mut out = Array2::zeros(f.dim());
    for (i, mut orow) in out.axis_iter_mut(Axis(0)).enumerate() {
        for (j, c) in d_omega_stencil(i, rows) {
            if c != 0.0 {
                orow.scaled_add(Complex64::new(c * scale, 0.0), &f.row(j));
            }
        }
    }
    out
}

pub(crate) fn d_omega_t_raw(g: &Array2<Complex64>, dw: f64) -> Array2<Complex64> {
    let rows = g.nrows();
    let scale = 1.0 / (2.0 * dw);
    let mut out = Array2::zeros(g.dim());
    for i in 0..rows {
        for (j, c) in d_omega_stencil(i, rows) {
            if c != 0.0 {
                out.row_mut(j)
                    .scaled_add(Complex64::new(c * scale, 0.0), &g.row(i));
            }
        }
    }
    out
}

/// `op_A(F)`.
pub fn op_a(f: &TFMatrix) -> Array1<f64> {
    TfOperators::new(*f.grid(), DerivMethod::Spectral).a_raw(f.values())
}

/// `op_A_adj(g)`.
pub fn op_a_adj(grid: &TFGrid, g: ArrayView1<f64>) -> Result<TFMatrix> {
    TfOperators::new(*grid, DerivMethod::Spectral).a_adj(g)
}

/// `d_t(F, method)`.
pub fn d_t(f: &TFMatrix, method: DerivMethod) -> TFMatrix {
    let ops = TfOperators::new(*f.grid(), method);
    let mut v = f.values().clone();
    ops.d_t_inplace(&mut v);
    TFMatrix::wrap(*f.grid(), v)
}

/// `d_omega(F)`.
pub fn d_omega(f: &TFMatrix) -> Result<TFMatrix> {
    if f.grid().n() < 2 {
        return Err(TycoonError::InvalidGrid {
            m: f.grid().m(),
            dt: f.grid().dt(),
        });
    }
    Ok(TFMatrix::wrap(*f.grid(), d_omega_raw(f.values(), f.grid().dw())))
}

/// `op_B(F, alpha)` with the spectral time derivative.
pub fn op_b(f: &TFMatrix, alpha: &ChirpTrack) -> Result<TFMatrix> {
    TfOperators::new(*f.grid(), DerivMethod::Spectral).b(f, alpha)
}

/// `op_B_adj(G, alpha)` with the spectral time derivative.
pub fn op_b_adj(g: &TFMatrix, alpha: &ChirpTrack) -> Result<TFMatrix> {
    TfOperators::new(*g.grid(), DerivMethod::Spectral).b_adj(g, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use ndarray::Array1;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(grid: TFGrid, rng: &mut ChaCha8Rng) -> TFMatrix {
        let v = Array2::from_shape_fn(grid.shape(), |_| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        TFMatrix::from_values(grid, v).unwrap()
    }

    #[test]
    fn a_of_ones() {
        // N = 2 needs M in {3, 4}; dw = 0.5 with M = 4 needs dt = 0.5.
        let g = make_grid(4, 0.5).unwrap();
        assert_eq!(g.n(), 2);
        assert!((g.dw() - 0.5).abs() < 1e-15);
        let f = TFMatrix::from_values(g, Array2::from_elem(g.shape(), c(1.0, 0.0))).unwrap();
        let a = op_a(&f);
        assert!(a.iter().all(|&v| (v - 3.0).abs() < 1e-14));

        let f = TFMatrix::from_values(g, Array2::from_elem(g.shape(), c(0.0, 2.5))).unwrap();
        assert!(op_a(&f).iter().all(|&v| v == 0.0));
        assert!(op_a(&TFMatrix::zeros(g)).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn a_adj_rows() {
        let g = make_grid(4, 0.5).unwrap();
        let gv = Array1::from(vec![1.0, 2.0, 0.0, -1.0, 3.0]);
        let out = op_a_adj(&g, gv.view()).unwrap();
        for row in out.values().rows() {
            for (z, &v) in row.iter().zip(gv.iter()) {
                assert_eq!(*z, c(v, 0.0));
            }
        }
        assert!(op_a_adj(&g, Array1::zeros(4).view()).is_err());
    }

    #[test]
    fn spectral_dt_exact_on_ladder_tone() {
        let g = make_grid(32, 0.25).unwrap();
        let len = g.cols();
        let xi = 3.0 / (len as f64 * g.dt());
        let mut v = Array2::zeros(g.shape());
        for m in 0..len {
            let t = g.time(m);
            v[[1, m]] = Complex64::from_polar(1.0, 2.0 * PI * xi * t);
            v[[2, m]] = c(1.7, -0.3);
        }
        let f = TFMatrix::from_values(g, v.clone()).unwrap();
        let d = d_t(&f, DerivMethod::Spectral);
        for m in 0..len {
            let want = c(0.0, 2.0 * PI * xi) * v[[1, m]];
            assert!((d.values()[[1, m]] - want).norm() < 1e-12);
            assert!(d.values()[[2, m]].norm() < 1e-12);
        }
    }

    #[test]
    fn finite_difference_dt() {
        let g = make_grid(8, 0.5).unwrap();
        let mut v = Array2::zeros(g.shape());
        for m in 0..g.cols() {
            v[[0, m]] = c(3.0 * g.time(m), 1.0);
        }
        let d = d_t(&TFMatrix::from_values(g, v).unwrap(), DerivMethod::FiniteDifference);
        for m in 0..g.cols() {
            assert!((d.values()[[0, m]] - c(3.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn d_omega_linear_constant_quadratic() {
        let g = make_grid(12, 0.1).unwrap();
        let dw = g.dw();
        let lin = Array2::from_shape_fn(g.shape(), |(n, _)| c(n as f64 * dw, 0.0));
        let d = d_omega(&TFMatrix::from_values(g, lin).unwrap()).unwrap();
        assert!(d.values().iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-10));

        let cst = Array2::from_elem(g.shape(), c(2.0, -1.0));
        let d = d_omega(&TFMatrix::from_values(g, cst).unwrap()).unwrap();
        assert!(d.values().iter().all(|z| z.norm() < 1e-10));

        let quad = Array2::from_shape_fn(g.shape(), |(n, _)| c((n as f64 * dw).powi(2), 0.0));
        let d = d_omega(&TFMatrix::from_values(g, quad).unwrap()).unwrap();
        for n in 1..g.n() {
            for m in 0..g.cols() {
                let want = 2.0 * n as f64 * dw;
                assert!((d.values()[[n, m]].re - want).abs() < 1e-10 * want.max(1.0));
            }
        }
        // one-sided second-order stencils are also exact on quadratics
        let want_top = 2.0 * g.n() as f64 * dw;
        assert!((d.values()[[g.n(), 0]].re - want_top).abs() < 1e-9);
        assert!(d.values()[[0, 0]].re.abs() < 1e-9);
    }

    #[test]
    fn b_of_constant_with_zero_alpha() {
        let g = make_grid(10, 0.2).unwrap();
        let f0 = c(0.7, 0.2);
        let f = TFMatrix::from_values(g, Array2::from_elem(g.shape(), f0)).unwrap();
        let out = op_b(&f, &ChirpTrack::zeros(g.cols())).unwrap();
        for ((n, _), z) in out.values().indexed_iter() {
            let want = c(0.0, -2.0 * PI * g.freq(n)) * f0;
            assert!((z - want).norm() < 1e-10);
        }
        let zero = op_b(&TFMatrix::zeros(g), &ChirpTrack::zeros(g.cols())).unwrap();
        assert!(zero.values().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn b_annihilates_ladder_ridge() {
        // A ridge at a frequency on the DFT ladder of the M+1 periodic samples
        // satisfies d_t F = i 2 pi xi F exactly; on a row n of the TF lattice
        // the residual is i 2 pi (xi - w_n) F, which vanishes when xi = w_n.
        let g = make_grid(40, 0.1).unwrap();
        let len = g.cols();
        let k = 7usize;
        let xi = k as f64 / (len as f64 * g.dt());
        let n = (xi / g.dw()).round() as usize;
        let mut v = Array2::zeros(g.shape());
        for m in 0..len {
            v[[n, m]] = Complex64::from_polar(1.0, 2.0 * PI * xi * g.time(m));
        }
        let f = TFMatrix::from_values(g, v.clone()).unwrap();
        let out = op_b(&f, &ChirpTrack::zeros(len)).unwrap();
        for m in 0..len {
            let want = c(0.0, 2.0 * PI * (xi - g.freq(n))) * v[[n, m]];
            assert!((out.values()[[n, m]] - want).norm() < 1e-8);
        }
        // all other rows are untouched
        for (nn, row) in out.values().rows().into_iter().enumerate() {
            if nn != n {
                assert!(row.iter().all(|z| z.norm() < 1e-8));
            }
        }
    }

    #[test]
    fn adjoints_hold_for_both_time_derivatives() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for method in [DerivMethod::Spectral, DerivMethod::FiniteDifference] {
            for m in [8usize, 9, 16] {
                let g = make_grid(m, 0.1).unwrap();
                let ops = TfOperators::new(g, method);
                let f = random_matrix(g, &mut rng);
                let h = random_matrix(g, &mut rng);
                let alpha = ChirpTrack::new(Array1::from_shape_fn(g.cols(), |_| {
                    rng.random_range(-2.0..2.0)
                }))
                .unwrap();
                let lhs = ops.b(&f, &alpha).unwrap().inner(&h);
                let rhs = f.inner(&ops.b_adj(&h, &alpha).unwrap());
                assert!((lhs - rhs).abs() <= 1e-10 * (f.norm() * h.norm() + 1.0));

                let lhs = ops.d_t(&f).unwrap().inner(&h);
                let rhs = f.inner(&ops.d_t_adj(&h).unwrap());
                assert!((lhs - rhs).abs() <= 1e-10 * (f.norm() * h.norm() + 1.0));

                let lhs = ops.d_omega(&f).unwrap().inner(&h);
                let rhs = f.inner(&ops.d_omega_adj(&h).unwrap());
                assert!((lhs - rhs).abs() <= 1e-10 * (f.norm() * h.norm() + 1.0));
            }
        }
    }

    #[test]
    fn b_adj_with_zero_alpha_matches_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = make_grid(16, 0.1).unwrap();
        let h = random_matrix(g, &mut rng);
        let got = op_b_adj(&h, &ChirpTrack::zeros(g.cols())).unwrap();
        let dth = d_t(&h, DerivMethod::Spectral);
        for ((n, m), z) in got.values().indexed_iter() {
            let want = -dth.values()[[n, m]] + c(0.0, 2.0 * PI * g.freq(n)) * h.values()[[n, m]];
            assert!((z - want).norm() < 1e-10);
        }
        let zero = op_b_adj(&TFMatrix::zeros(g), &ChirpTrack::zeros(g.cols())).unwrap();
        assert!(zero.values().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn ladder_has_zero_nyquist() {
        let l = fourier_ladder(8, 0.5);
        assert_eq!(l[4], 0.0);
        assert_eq!(l[1], 0.25);
        assert_eq!(l[7], -0.25);
        let l = fourier_ladder(7, 1.0);
        assert!((l[3] - 3.0 / 7.0).abs() < 1e-15);
        assert!((l[4] + 3.0 / 7.0).abs() < 1e-15);
    }
}
