//! Monte-Carlo comparison of Tycoon, STFT and SST-STFT on the
//! two-component benchmark, scored with the `D` metric.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{sst_stft, stft_gauss, WindowSpec};
use crate::error::{Result, TycoonError};
use crate::functional::TycoonParams;
use crate::grid::{SampledSignal, TFGrid};
use crate::metrics::{d_metric, itvps, tvps_from_tfr, TvPS};
use crate::solver::tycoon;
use crate::synth::{add_noise, make_two_component_benchmark, BenchmarkSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Tycoon,
    Stft,
    Sst,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Tycoon, Method::Stft, Method::Sst];

    pub fn name(self) -> &'static str {
        match self {
            Method::Tycoon => "tycoon",
            Method::Stft => "stft",
            Method::Sst => "sst",
        }
    }
}

/// Relative slack allowed when checking the recorded objective for descent.
pub const DESCENT_RTOL: f64 = 1e-12;

/// Transport/sparsity balance used for benchmark runs.
pub const BENCH_LAMBDA_TILDE: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub realizations: usize,
    pub length: f64,
    pub dt: f64,
    /// `None` for the noise-free benchmark.
    pub snr_db: Option<f64>,
    pub window_sigma: f64,
    pub seed: u64,
    pub params: TycoonParams,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            realizations: 10,
            length: 40.0,
            dt: 0.1,
            snr_db: None,
            window_sigma: 1.0,
            seed: 1,
            params: TycoonParams {
                lambda_tilde: BENCH_LAMBDA_TILDE,
                ..TycoonParams::default()
            },
        }
    }
}

impl BenchConfig {
    pub fn spec(&self, realization: usize) -> BenchmarkSpec {
        BenchmarkSpec {
            dt: self.dt,
            ..BenchmarkSpec::desk_scale(self.length, self.seed.wrapping_add(realization as u64))
        }
    }
}

/// Published full-scale figures (mean, std) for context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperReference {
    pub method: String,
    pub clean: (f64, f64),
    pub noisy: (f64, f64),
}

pub fn paper_reference() -> Vec<PaperReference> {
    [
        ("tycoon", (6.06, 0.25), (11.87, 0.74)),
        ("emd-hs / eemd-hs", (7.18, 0.93), (11.65, 0.63)),
        ("stft", (8.76, 0.41), (14.53, 0.55)),
        ("sst-stft", (8.13, 0.42), (14.09, 0.58)),
        ("sst-cwt", (7.36, 0.67), (12.79, 0.69)),
    ]
    .into_iter()
    .map(|(m, c, n)| PaperReference {
        method: m.to_string(),
        clean: c,
        noisy: n,
    })
    .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationResult {
    pub index: usize,
    pub seed: u64,
    /// `D` per method, in [`Method::ALL`] order; `None` if that method failed.
    pub d: Vec<Option<f64>>,
    pub errors: Vec<String>,
    pub tycoon_seconds: f64,
    /// Objective increases in the Tycoon solve (0 for a monotone run).
    pub descent_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub samples: usize,
    pub realizations: Vec<RealizationResult>,
    pub summary: Vec<MethodSummary>,
    pub tycoon_beats_stft: bool,
    pub tycoon_beats_sst: bool,
    pub paper_reference: Vec<PaperReference>,
}

impl BenchReport {
    pub fn summary_for(&self, method: Method) -> Option<&MethodSummary> {
        self.summary.iter().find(|s| s.method == method)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "D metric over {} realizations ({} samples, snr = {})\n",
            self.config.realizations,
            self.samples,
            self.config.snr_db.map_or("inf".to_string(), |s| format!("{s} dB"))
        );
        out.push_str(&format!("{:<10} {:>10} {:>10} {:>6}\n", "method", "mean", "std", "n"));
        for s in &self.summary {
            out.push_str(&format!("{:<10} {:>10.4} {:>10.4} {:>6}\n", s.method.name(), s.mean, s.std, s.count));
        }
        out.push_str(&format!(
            "tycoon < stft: {}   tycoon < sst: {}\n",
            self.tycoon_beats_stft, self.tycoon_beats_sst
        ));
        out.push_str("paper, full scale (clean / snr 7.25):\n");
        for r in &self.paper_reference {
            out.push_str(&format!(
                "  {:<18} {:.2}+-{:.2} / {:.2}+-{:.2}\n",
                r.method, r.clean.0, r.clean.1, r.noisy.0, r.noisy.1
            ));
        }
        out
    }
}

/// `D` of each method on one realization. Noise, when requested, uses the
/// realization seed; the known noise level drives Tycoon's stage selection.
pub fn run_realization(cfg: &BenchConfig, index: usize) -> Result<RealizationResult> {
    let spec = cfg.spec(index);
    let bench = make_two_component_benchmark(&spec, None)?;
    let (signal, noise_std) = match cfg.snr_db {
        Some(snr) => add_noise(&bench.signal, snr, spec.seed)?,
        None => (bench.signal.clone(), 0.0),
    };
    let grid = TFGrid::for_signal(&signal)?;
    let truth = itvps(&bench.components, &grid)?;
    let window = WindowSpec::new(cfg.window_sigma)?;

    let mut d = Vec::new();
    let mut errors = Vec::new();
    let mut tycoon_seconds = 0.0;
    let mut descent_violations = 0;
    for method in Method::ALL {
        let start = std::time::Instant::now();
        let est = estimate(method, &signal, &grid, &window, cfg, noise_std).map(|(s, v)| {
            descent_violations += v;
            s
        });
        if method == Method::Tycoon {
            tycoon_seconds = start.elapsed().as_secs_f64();
        }
        match est.and_then(|s| d_metric(&truth, &s)) {
            Ok(r) => d.push(Some(r.value)),
            Err(e) => {
                errors.push(format!("{}: {e}", method.name()));
                d.push(None);
            }
        }
    }
    Ok(RealizationResult {
        index,
        seed: spec.seed,
        d,
        errors,
        tycoon_seconds,
        descent_violations,
    })
}

fn estimate(
    method: Method,
    signal: &SampledSignal,
    grid: &TFGrid,
    window: &WindowSpec,
    cfg: &BenchConfig,
    noise_std: f64,
) -> Result<(TvPS, usize)> {
    Ok(match method {
        Method::Tycoon => {
            let mut params = cfg.params.clone();
            if cfg.snr_db.is_some() {
                params.noise_std = Some(noise_std);
            }
            let out = tycoon(signal, &params)?;
            (tvps_from_tfr(&out.f), out.trace.descent_violations(DESCENT_RTOL))
        }
        Method::Stft => (tvps_from_tfr(&stft_gauss(signal, window, grid)?), 0),
        Method::Sst => (tvps_from_tfr(&sst_stft(signal, window, grid, None)?), 0),
    })
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 {
        v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Run all realizations in parallel. Failed realizations are logged and
/// excluded from the summary.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.realizations < 2 {
        return Err(TycoonError::InvalidParameter(format!(
            "need at least 2 realizations, got {}",
            cfg.realizations
        )));
    }
    cfg.params.validate()?;
    let samples = cfg.spec(0).samples()?;
    let results: Vec<RealizationResult> = (0..cfg.realizations)
        .into_par_iter()
        .filter_map(|i| match run_realization(cfg, i) {
            Ok(r) => {
                for e in &r.errors {
                    log::warn!("realization {i}: {e}");
                }
                Some(r)
            }
            Err(e) => {
                log::warn!("realization {i} failed: {e}");
                None
            }
        })
        .collect();

    let summary: Vec<MethodSummary> = Method::ALL
        .iter()
        .enumerate()
        .map(|(k, &method)| {
            let vals: Vec<f64> = results.iter().filter_map(|r| r.d[k]).collect();
            let (mean, std) = if vals.is_empty() { (f64::NAN, f64::NAN) } else { mean_std(&vals) };
            MethodSummary {
                method,
                mean,
                std,
                count: vals.len(),
            }
        })
        .collect();
    let mean = |k: usize| summary[k].mean;
    Ok(BenchReport {
        config: cfg.clone(),
        samples,
        tycoon_beats_stft: mean(0) < mean(1),
        tycoon_beats_sst: mean(0) < mean(2),
        realizations: results,
        summary,
        paper_reference: paper_reference(),
    })
}
