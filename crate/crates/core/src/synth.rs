//! Benchmark signal generators: smoothed Brownian paths, random amplitude
//! and phase tracks, gIMT components, the one- and two-component
//! benchmarks, SNR-controlled noise, and numerical checks of the model
//! constraints.
//!
//! Phases are in cycles: a component is `A(t) cos(2 pi phase(t))`, so the
//! instantaneous frequency in Hz is `phase'(t)`.

use std::f64::consts::PI;

use ndarray::Array1;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, TycoonError};
use crate::grid::SampledSignal;

/// Independent random stream for `(seed, stream)`.
fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Unit-sum Gaussian kernel with standard deviation `sigma` samples,
/// truncated at `+-ceil(4 sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let half = (4.0 * sigma).ceil().max(0.0) as usize;
    let mut k: Vec<f64> = (0..=2 * half)
        .map(|i| {
            let x = i as f64 - half as f64;
            (-0.5 * (x / sigma).powi(2)).exp()
        })
        .collect();
    let s: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= s);
    k
}

/// Whole-sample symmetric reflection of `i` into `0..n`.
fn reflect(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let mut j = i.rem_euclid(period);
    if j >= n as isize {
        j = period - j;
    }
    j as usize
}

/// Convolve with a Gaussian of `sigma` samples using reflective boundaries.
pub fn gaussian_smooth(x: &[f64], sigma: f64) -> Vec<f64> {
    let kernel = gaussian_kernel(sigma);
    let half = (kernel.len() / 2) as isize;
    let n = x.len();
    (0..n)
        .map(|i| {
            kernel
                .iter()
                .enumerate()
                .map(|(k, w)| w * x[reflect(i as isize + k as isize - half, n)])
                .sum()
        })
        .collect()
}

/// Brownian path with `n` samples at spacing `dt`, starting at 0.
pub fn brownian_path(n: usize, dt: f64, seed: u64) -> Vec<f64> {
    let mut rng = rng_for(seed, 0);
    let sd = dt.sqrt();
    let mut w = Vec::with_capacity(n);
    let mut acc = 0.0;
    for i in 0..n {
        if i > 0 {
            let z: f64 = StandardNormal.sample(&mut rng);
            acc += sd * z;
        }
        w.push(acc);
    }
    w
}

/// `Phi_sigma = W * K_sigma`: a seeded Brownian path smoothed by a Gaussian
/// of `sigma` samples.
pub fn smoothed_brownian(n: usize, dt: f64, sigma: f64, seed: u64) -> Result<Array1<f64>> {
    if n < 2 || !(sigma > 0.0) || !(dt > 0.0) {
        return Err(TycoonError::InvalidParameter(format!(
            "smoothed Brownian path needs n >= 2, dt > 0, sigma > 0 (got {n}, {dt}, {sigma})"
        )));
    }
    Ok(Array1::from(gaussian_smooth(&brownian_path(n, dt, seed), sigma)))
}

fn max_abs(x: &Array1<f64>) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `A_1 = 1 + (Phi + |Phi|_inf) / (2 |Phi|_inf)`, in `[1, 2]`. An all-zero
/// path yields the midpoint 1.5.
pub fn amp_track_a1_from_path(path: &Array1<f64>) -> Array1<f64> {
    let s = max_abs(path);
    if s == 0.0 {
        log::warn!("degenerate all-zero path; amplitude track set to 1.5");
        return Array1::from_elem(path.len(), 1.5);
    }
    path.mapv(|p| 1.0 + (p + s) / (2.0 * s))
}

pub fn amp_track_a1(n: usize, dt: f64, sigma1: f64, seed: u64) -> Result<Array1<f64>> {
    Ok(amp_track_a1_from_path(&smoothed_brownian(n, dt, sigma1, seed)?))
}

/// `A_2 = 1 + (Phi + 2 |Phi|_inf) / (3 |Phi|_inf)`, in `[4/3, 2]`.
pub fn amp_track_a2_from_path(path: &Array1<f64>) -> Array1<f64> {
    let s = max_abs(path);
    if s == 0.0 {
        log::warn!("degenerate all-zero path; amplitude track set to 5/3");
        return Array1::from_elem(path.len(), 5.0 / 3.0);
    }
    path.mapv(|p| 1.0 + (p + 2.0 * s) / (3.0 * s))
}

/// Derivative (in radians per second) of the second component's phase:
/// `pi + (Phi(t) + 0.5 |Phi|_inf) / (1.5 |Phi|_inf) - sin(t)`.
pub fn phi2_rate_from_path(path: &Array1<f64>, dt: f64) -> Array1<f64> {
    let s = max_abs(path);
    Array1::from_shape_fn(path.len(), |m| {
        let t = m as f64 * dt;
        let drift = if s == 0.0 { 1.0 / 3.0 } else { (path[m] + 0.5 * s) / (1.5 * s) };
        PI + drift - t.sin()
    })
}

/// Cumulative trapezoidal integral starting at 0.
pub fn cumulative_trapezoid(rate: &Array1<f64>, dt: f64) -> Array1<f64> {
    let mut out = Array1::zeros(rate.len());
    for m in 1..rate.len() {
        out[m] = out[m - 1] + 0.5 * dt * (rate[m - 1] + rate[m]);
    }
    out
}

/// `(A_2, phase_2)` with the phase in cycles: the displayed radian-valued
/// phase divided by `2 pi`, giving an IF near `0.5 + ...` Hz.
pub fn amp_track_a2_phi2(
    n: usize,
    dt: f64,
    sigma1: f64,
    sigma2: f64,
    seed: u64,
) -> Result<(Array1<f64>, Array1<f64>)> {
    let amp = amp_track_a2_from_path(&smoothed_brownian(n, dt, sigma1, seed)?);
    let rate = phi2_rate_from_path(&smoothed_brownian(n, dt, sigma2, seed ^ 0x9e37_79b9)?, dt);
    let phase = cumulative_trapezoid(&rate, dt).mapv(|p| p / (2.0 * PI));
    Ok((amp, phase))
}

/// One gIMT component `A(t) cos(2 pi phase(t))` on the half-open index range
/// `support.0 .. support.1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GIMTComponent {
    pub amp: Vec<f64>,
    /// Phase in cycles.
    pub phase: Vec<f64>,
    pub support: (usize, usize),
}

impl GIMTComponent {
    pub fn new(amp: Vec<f64>, phase: Vec<f64>, support: (usize, usize)) -> Result<Self> {
        if amp.len() != phase.len() {
            return Err(TycoonError::ShapeMismatch {
                expected: format!("phase of length {}", amp.len()),
                got: phase.len().to_string(),
            });
        }
        if support.0 > support.1 || support.1 > amp.len() {
            return Err(TycoonError::InvalidParameter(format!(
                "support {:?} outside 0..{}",
                support,
                amp.len()
            )));
        }
        let c = Self { amp, phase, support };
        let (s, e) = c.support;
        if c.amp[s..e].iter().any(|&a| !(a > 0.0)) {
            return Err(TycoonError::InvalidParameter(
                "amplitude must be positive on the support".into(),
            ));
        }
        if c.phase[s..e].windows(2).any(|w| !(w[1] > w[0])) {
            return Err(TycoonError::InvalidParameter(
                "phase must be strictly increasing on the support".into(),
            ));
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.amp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amp.is_empty()
    }

    pub fn in_support(&self, m: usize) -> bool {
        m >= self.support.0 && m < self.support.1
    }

    /// Finite-difference instantaneous frequency (Hz): central differences
    /// in the interior, one-sided at the ends of the sampled track.
    pub fn inst_freq(&self, dt: f64) -> Vec<f64> {
        central_diff(&self.phase, dt)
    }
}

fn central_diff(x: &[f64], dt: f64) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|m| {
            if n < 2 {
                0.0
            } else if m == 0 {
                (x[1] - x[0]) / dt
            } else if m == n - 1 {
                (x[n - 1] - x[n - 2]) / dt
            } else {
                (x[m + 1] - x[m - 1]) / (2.0 * dt)
            }
        })
        .collect()
}

/// Sample a component: `amp cos(2 pi phase)` on its support, 0 elsewhere.
pub fn synth_gimt_samples(c: &GIMTComponent) -> Array1<f64> {
    Array1::from_shape_fn(c.len(), |m| {
        if c.in_support(m) {
            c.amp[m] * (2.0 * PI * c.phase[m]).cos()
        } else {
            0.0
        }
    })
}

pub fn synth_gimt(c: &GIMTComponent, dt: f64) -> Result<SampledSignal> {
    SampledSignal::new(synth_gimt_samples(c), dt)
}

/// Parameters of the synthetic benchmarks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    /// Observation length in seconds.
    pub length: f64,
    pub dt: f64,
    /// Smoothing bandwidths in samples.
    pub sigma1: f64,
    pub sigma2: f64,
    /// Smoothing bandwidth of the first component's IF fluctuation.
    pub sigma_if: f64,
    /// Start of the second component's support, seconds.
    pub f2_start: f64,
    pub seed: u64,
}

impl BenchmarkSpec {
    /// Full-scale parameters: 80 s at 10 Hz, second component on `[20, 80]`.
    pub fn full_scale(seed: u64) -> Self {
        Self {
            length: 80.0,
            dt: 0.1,
            sigma1: 100.0,
            sigma2: 200.0,
            sigma_if: 20.0,
            f2_start: 20.0,
            seed,
        }
    }

    /// Reduced length for desk-scale runs; the second component starts at a
    /// quarter of the window, as in the full-scale layout.
    pub fn desk_scale(length: f64, seed: u64) -> Self {
        Self {
            length,
            f2_start: length / 4.0,
            ..Self::full_scale(seed)
        }
    }

    pub fn samples(&self) -> Result<usize> {
        let steps = self.length / self.dt;
        if !(steps >= 4.0) || (steps - steps.round()).abs() > 1e-9 {
            return Err(TycoonError::InvalidParameter(format!(
                "length / dt must be an integer >= 4 (got {steps})"
            )));
        }
        Ok(steps.round() as usize + 1)
    }
}

/// Default fast-varying IF for the first component:
/// `1.2 + 0.35 Phi / |Phi|_inf` Hz.
pub fn fast_if_track(n: usize, dt: f64, sigma: f64, seed: u64) -> Result<Array1<f64>> {
    let path = smoothed_brownian(n, dt, sigma, seed)?;
    let s = max_abs(&path);
    Ok(path.mapv(|p| 1.2 + 0.35 * if s == 0.0 { 0.0 } else { p / s }))
}

/// First component from an IF track (Hz) and the A_1 amplitude process.
pub fn first_component(spec: &BenchmarkSpec, inst_freq: &Array1<f64>) -> Result<GIMTComponent> {
    let n = spec.samples()?;
    if inst_freq.len() != n {
        return Err(TycoonError::ShapeMismatch {
            expected: format!("IF track of length {n}"),
            got: inst_freq.len().to_string(),
        });
    }
    let amp = amp_track_a1(n, spec.dt, spec.sigma1, spec.seed.wrapping_mul(3).wrapping_add(1))?;
    let phase = cumulative_trapezoid(inst_freq, spec.dt);
    GIMTComponent::new(amp.to_vec(), phase.to_vec(), (0, n))
}

#[derive(Debug, Clone)]
pub struct Benchmark {
    pub signal: SampledSignal,
    pub components: Vec<GIMTComponent>,
}

/// `f = f_1` with the synthetic fast-varying IF, or a supplied IF track.
pub fn make_single_component_benchmark(
    spec: &BenchmarkSpec,
    inst_freq: Option<&Array1<f64>>,
) -> Result<Benchmark> {
    let n = spec.samples()?;
    let track = match inst_freq {
        Some(t) => t.clone(),
        None => fast_if_track(n, spec.dt, spec.sigma_if, spec.seed.wrapping_mul(3).wrapping_add(2))?,
    };
    let f1 = first_component(spec, &track)?;
    let signal = synth_gimt(&f1, spec.dt)?;
    Ok(Benchmark {
        signal,
        components: vec![f1],
    })
}

/// `f = f_1 + f_2` with `f_2 = A_2 cos(2 pi phase_2)` restricted to
/// `[f2_start, length]`.
pub fn make_two_component_benchmark(
    spec: &BenchmarkSpec,
    inst_freq: Option<&Array1<f64>>,
) -> Result<Benchmark> {
    let single = make_single_component_benchmark(spec, inst_freq)?;
    let f1 = single.components.into_iter().next().expect("one component");
    let n = f1.len();
    let (amp2, phase2) = amp_track_a2_phi2(
        n,
        spec.dt,
        spec.sigma1,
        spec.sigma2,
        spec.seed.wrapping_mul(3).wrapping_add(3),
    )?;
    let start = ((spec.f2_start / spec.dt).round().max(0.0) as usize).min(n);
    let f2 = GIMTComponent::new(amp2.to_vec(), phase2.to_vec(), (start, n))?;
    let samples = synth_gimt_samples(&f1) + synth_gimt_samples(&f2);
    Ok(Benchmark {
        signal: SampledSignal::new(samples, spec.dt)?,
        components: vec![f1, f2],
    })
}

pub fn sample_std(x: &Array1<f64>) -> f64 {
    let n = x.len() as f64;
    let mean = x.sum() / n;
    (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Add white Gaussian noise with `std(noise) = std(f) 10^(-snr_db / 20)`.
/// The realized noise is rescaled so the ratio holds exactly for the sample
/// standard deviation. `snr_db = +inf` returns `f` unchanged. Returns the
/// noisy signal and the noise standard deviation.
pub fn add_noise(f: &SampledSignal, snr_db: f64, seed: u64) -> Result<(SampledSignal, f64)> {
    if snr_db == f64::INFINITY {
        return Ok((f.clone(), 0.0));
    }
    if !snr_db.is_finite() {
        return Err(TycoonError::InvalidParameter(format!("invalid SNR {snr_db}")));
    }
    let sf = sample_std(f.samples());
    if !(sf > 0.0) {
        return Err(TycoonError::Degenerate("cannot set an SNR for a constant signal".into()));
    }
    let target = sf * 10f64.powf(-snr_db / 20.0);
    let mut rng = rng_for(seed, 7);
    let raw: Array1<f64> = Array1::from_shape_fn(f.len(), |_| StandardNormal.sample(&mut rng));
    let mean = raw.sum() / raw.len() as f64;
    let centered = raw.mapv(|v| v - mean);
    let scale = target / sample_std(&centered);
    let noisy = f.samples() + &centered.mapv(|v| v * scale);
    Ok((SampledSignal::new(noisy, f.dt())?, target))
}

/// Constants of the adaptive harmonic model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub eps: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub d: f64,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.eps >= 0.0
            && self.c2 > self.c1
            && self.c1 > self.eps
            && self.c2 > self.c3
            && self.c3 > self.eps
            && self.d > 0.0;
        if ok {
            Ok(())
        } else {
            Err(TycoonError::InvalidParameter(format!("inconsistent model constants {self:?}")))
        }
    }
}

/// Pass/fail per model condition, with the worst observed values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GimtReport {
    pub amp_bounds: bool,
    pub if_bounds: bool,
    pub chirp_bound: bool,
    pub amp_growth: bool,
    pub phase_growth: bool,
    pub min_amp: f64,
    pub max_amp: f64,
    pub min_if: f64,
    pub max_if: f64,
    pub max_abs_chirp: f64,
    /// `max |A'| / phi'`.
    pub max_amp_growth: f64,
    /// `max |phi'''| / phi'`.
    pub max_phase_growth: f64,
}

impl GimtReport {
    pub fn all_pass(&self) -> bool {
        self.amp_bounds && self.if_bounds && self.chirp_bound && self.amp_growth && self.phase_growth
    }
}

/// Check the gIMT conditions on a component's support with finite
/// differences:
/// `c1 <= A <= c2`, `c1 <= phi' <= c2`, `|phi''| <= c3`, `|A'| <= eps phi'`,
/// `|phi'''| <= eps phi'`.
pub fn validate_gimt(c: &GIMTComponent, mp: &ModelParams, dt: f64) -> Result<GimtReport> {
    let (s, e) = c.support;
    if e - s < 5 {
        return Err(TycoonError::InvalidParameter(format!(
            "support of {} samples is too short for third differences (need 5)",
            e - s
        )));
    }
    let tol = 1e-9;
    let (mut min_amp, mut max_amp) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_if, mut max_if) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut max_chirp, mut max_ag, mut max_pg) = (0.0f64, 0.0f64, 0.0f64);
    let p = &c.phase;
    let a = &c.amp;
    for m in s..e {
        min_amp = min_amp.min(a[m]);
        max_amp = max_amp.max(a[m]);
    }
    for m in s + 2..e - 2 {
        let if1 = (p[m + 1] - p[m - 1]) / (2.0 * dt);
        let if2 = (p[m + 1] - 2.0 * p[m] + p[m - 1]) / (dt * dt);
        let if3 = (p[m + 2] - 2.0 * p[m + 1] + 2.0 * p[m - 1] - p[m - 2]) / (2.0 * dt.powi(3));
        let da = (a[m + 1] - a[m - 1]) / (2.0 * dt);
        min_if = min_if.min(if1);
        max_if = max_if.max(if1);
        max_chirp = max_chirp.max(if2.abs());
        max_ag = max_ag.max(da.abs() / if1);
        max_pg = max_pg.max(if3.abs() / if1);
    }
    Ok(GimtReport {
        amp_bounds: min_amp >= mp.c1 - tol && max_amp <= mp.c2 + tol,
        if_bounds: min_if >= mp.c1 - tol && max_if <= mp.c2 + tol,
        chirp_bound: max_chirp <= mp.c3 + tol,
        amp_growth: max_ag <= mp.eps + tol,
        phase_growth: max_pg <= mp.eps + tol,
        min_amp,
        max_amp,
        min_if,
        max_if,
        max_abs_chirp: max_chirp,
        max_amp_growth: max_ag,
        max_phase_growth: max_pg,
    })
}

/// Separation `phi'_{l+1} - phi'_l > d` wherever both components are
/// present. Components are taken in the given order. Returns the smallest
/// observed gap and whether it exceeds `d`.
pub fn validate_separation(components: &[GIMTComponent], d: f64, dt: f64) -> (bool, f64) {
    let ifs: Vec<Vec<f64>> = components.iter().map(|c| c.inst_freq(dt)).collect();
    let mut min_gap = f64::INFINITY;
    for l in 0..components.len().saturating_sub(1) {
        let (lo, hi) = (&components[l], &components[l + 1]);
        for m in 0..lo.len().min(hi.len()) {
            if lo.in_support(m) && hi.in_support(m) {
                min_gap = min_gap.min(ifs[l + 1][m] - ifs[l][m]);
            }
        }
    }
    (min_gap > d, min_gap)
}

/// Natural cubic spline through `(x, y)`, evaluated at `at`. Points outside
/// the knot range are clamped to the end values.
pub fn cubic_spline(x: &[f64], y: &[f64], at: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(TycoonError::InvalidParameter(
            "spline needs at least two matching knots".into(),
        ));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(TycoonError::InvalidParameter("spline knots must be increasing".into()));
    }
    // second derivatives via the tridiagonal system, natural ends
    let mut m2 = vec![0.0; n];
    if n > 2 {
        let mut c = vec![0.0; n];
        let mut r = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let diag = 2.0 * (h0 + h1);
            let rhs = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            let denom = diag - h0 * c[i - 1];
            c[i] = h1 / denom;
            r[i] = (rhs - h0 * r[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            m2[i] = r[i] - c[i] * m2[i + 1];
        }
    }
    Ok(at
        .iter()
        .map(|&t| {
            if t <= x[0] {
                return y[0];
            }
            if t >= x[n - 1] {
                return y[n - 1];
            }
            let i = match x.partition_point(|&v| v <= t) {
                0 => 0,
                k => k - 1,
            }
            .min(n - 2);
            let h = x[i + 1] - x[i];
            let a = (x[i + 1] - t) / h;
            let b = (t - x[i]) / h;
            a * y[i] + b * y[i + 1] + ((a.powi(3) - a) * m2[i] + (b.powi(3) - b) * m2[i + 1]) * h * h / 6.0
        })
        .collect())
}
