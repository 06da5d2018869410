use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tycoon_core::baselines::{sst_stft, stft_gauss, WindowSpec};
use tycoon_core::bench::{run_bench, BenchConfig, BENCH_LAMBDA_TILDE};
use tycoon_core::io::{
    read_if_trace, read_json, read_signal_csv, read_tfr, write_alpha_csv, write_if_overlay, write_json, write_pgm,
    write_signal_csv, write_tfr, Truth,
};
use tycoon_core::metrics::{compress_dynamic_range, d_metric, itvps, tvps_from_tfr, TvPS};
use tycoon_core::solver::{tycoon_with_progress, StageTrace};
use tycoon_core::synth::{add_noise, make_single_component_benchmark, make_two_component_benchmark, BenchmarkSpec};
use tycoon_core::{DerivMethod, MuSchedule, TFGrid, TycoonError, TycoonParams};

#[derive(Parser)]
#[command(name = "tycoon", version, about = "Sparse time-frequency analysis with chirp tracking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark signal and its ground truth.
    Synth(SynthArgs),
    /// Compute a time-frequency representation of a signal CSV.
    Analyze(AnalyzeArgs),
    /// Score a TFR file against ground truth with the D metric.
    Eval(EvalArgs),
    /// Monte-Carlo comparison of tycoon, STFT and SST.
    Bench(BenchArgs),
    /// Render a TFR as a grayscale PGM image.
    Render(RenderArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchmarkKind {
    Single,
    TwoComponent,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum MethodArg {
    Tycoon,
    Stft,
    Sst,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum, default_value = "two-component")]
    benchmark: BenchmarkKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Observation length in seconds.
    #[arg(long = "L", alias = "length", default_value_t = 80.0)]
    length: f64,
    #[arg(long, default_value_t = 0.1)]
    dt: f64,
    #[arg(long, default_value_t = 100.0)]
    sigma1: f64,
    #[arg(long, default_value_t = 200.0)]
    sigma2: f64,
    /// Also write a noisy copy at this SNR (dB).
    #[arg(long)]
    snr: Option<f64>,
    /// Replace the first component's synthetic IF with a `t,instantaneous_frequency_hz` trace.
    #[arg(long)]
    if_trace: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 5e-4)]
    eps1: f64,
    #[arg(long, default_value_t = 5e-4)]
    eps2: f64,
    /// lambda-tilde: transport versus sparsity balance [default: 0.99, bench 0.3].
    #[arg(long = "lambda")]
    lambda_tilde: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    gamma: f64,
    /// First mu-tilde, relative to the signal energy.
    #[arg(long, default_value_t = 1e-2)]
    mu_start: f64,
    /// Last mu-tilde, relative to the signal energy.
    #[arg(long, default_value_t = 1e-7)]
    mu_end: f64,
    #[arg(long, default_value_t = 6)]
    mu_count: usize,
    /// Explicit absolute mu-tilde values (comma separated, decreasing).
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<f64>>,
    #[arg(long, default_value_t = 2000)]
    max_inner: usize,
    #[arg(long, default_value_t = 20)]
    max_outer: usize,
    #[arg(long, default_value_t = DerivMethod::Spectral)]
    deriv: DerivMethod,
    #[arg(long, default_value_t = 30)]
    power_iters: usize,
    /// Known noise standard deviation; enables discrepancy-principle stage selection.
    #[arg(long)]
    noise_std: Option<f64>,
    #[arg(long, default_value_t = 0)]
    solver_seed: u64,
}

impl SolverArgs {
    fn params(&self, default_lambda: f64) -> TycoonParams {
        TycoonParams {
            mu_schedule: match &self.mu {
                Some(v) => MuSchedule::Explicit(v.clone()),
                None => MuSchedule::Relative {
                    start: self.mu_start,
                    end: self.mu_end,
                    count: self.mu_count,
                },
            },
            lambda_tilde: self.lambda_tilde.unwrap_or(default_lambda),
            gamma: self.gamma,
            eps1: self.eps1,
            eps2: self.eps2,
            max_inner_iters: self.max_inner,
            max_outer_iters: self.max_outer,
            deriv_method: self.deriv,
            power_iters: self.power_iters,
            seed: self.solver_seed,
            noise_std: self.noise_std,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Signal CSV (`t,value`).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "tycoon")]
    method: MethodArg,
    /// Output TFR file; tycoon also writes `<stem>.alpha.csv` and `<stem>.trace.json` beside it.
    #[arg(long)]
    output: PathBuf,
    /// Gaussian window standard deviation in seconds (stft, sst).
    #[arg(long, default_value_t = 1.0)]
    window_sigma: f64,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    tfr: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    /// JSON report path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Per-column OT profile CSV.
    #[arg(long)]
    profile: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 10)]
    realizations: usize,
    #[arg(long = "L", alias = "length", default_value_t = 40.0)]
    length: f64,
    #[arg(long, default_value_t = 0.1)]
    dt: f64,
    #[arg(long)]
    snr: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    window_sigma: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct RenderArgs {
    /// TFR file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 0.999)]
    quantile: f64,
    /// Treat the real parts as a power spectrum instead of taking `|F|^2`.
    #[arg(long)]
    power: bool,
    /// Truth JSON; with `--overlay`, writes its IF curves as CSV.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, requires = "truth")]
    overlay: Option<PathBuf>,
}

fn exit_code(e: &TycoonError) -> u8 {
    match e {
        TycoonError::Diverged(_) | TycoonError::NonFinite(_) => 1,
        _ => 2,
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn synth(a: &SynthArgs) -> tycoon_core::Result<()> {
    let spec = BenchmarkSpec {
        dt: a.dt,
        sigma1: a.sigma1,
        sigma2: a.sigma2,
        ..BenchmarkSpec::desk_scale(a.length, a.seed)
    };
    let n = spec.samples()?;
    let trace = a.if_trace.as_deref().map(|p| read_if_trace(p, n, a.dt)).transpose()?;
    let bench = match a.benchmark {
        BenchmarkKind::Single => make_single_component_benchmark(&spec, trace.as_ref())?,
        BenchmarkKind::TwoComponent => make_two_component_benchmark(&spec, trace.as_ref())?,
    };
    std::fs::create_dir_all(&a.out_dir)?;
    write_signal_csv(&a.out_dir.join("signal.csv"), &bench.signal)?;
    write_json(&a.out_dir.join("truth.json"), &Truth::from_components(a.dt, &bench.components))?;
    println!("wrote {} samples to {}", n, a.out_dir.join("signal.csv").display());
    if let Some(snr) = a.snr {
        let (noisy, sd) = add_noise(&bench.signal, snr, a.seed)?;
        write_signal_csv(&a.out_dir.join("noisy.csv"), &noisy)?;
        println!("noise std {sd:.6} at {snr} dB -> {}", a.out_dir.join("noisy.csv").display());
    }
    Ok(())
}

#[derive(Serialize)]
struct TraceFile<'a> {
    chosen_mu_tilde: Option<f64>,
    selected_stage: Option<usize>,
    lipschitz: Option<f64>,
    seconds: f64,
    error: Option<String>,
    stages: &'a [StageTrace],
}

fn analyze(a: &AnalyzeArgs) -> tycoon_core::Result<()> {
    let signal = read_signal_csv(&a.input)?;
    let grid = TFGrid::for_signal(&signal)?;
    let tfr = match a.method {
        MethodArg::Stft => stft_gauss(&signal, &WindowSpec::new(a.window_sigma)?, &grid)?,
        MethodArg::Sst => sst_stft(&signal, &WindowSpec::new(a.window_sigma)?, &grid, None)?,
        MethodArg::Tycoon => {
            let params = a.solver.params(TycoonParams::default().lambda_tilde);
            let start = Instant::now();
            let mut stages = Vec::new();
            let out = tycoon_with_progress(&signal, &params, |s| {
                log::info!("mu_t = {:.3e}: {} outer steps, H = {:.6e}", s.mu_tilde, s.outer.len(), s.final_terms().total);
                stages.push(s.clone());
            });
            let trace_path = sibling(&a.output, ".trace.json");
            let seconds = start.elapsed().as_secs_f64();
            let res = match out {
                Ok(r) => r,
                Err(e) => {
                    let file = TraceFile {
                        chosen_mu_tilde: None,
                        selected_stage: None,
                        lipschitz: None,
                        seconds,
                        error: Some(e.to_string()),
                        stages: &stages,
                    };
                    write_json(&trace_path, &file)?;
                    return Err(e);
                }
            };
            write_json(
                &trace_path,
                &TraceFile {
                    chosen_mu_tilde: Some(res.chosen_mu_tilde),
                    selected_stage: Some(res.trace.selected_stage),
                    lipschitz: Some(res.trace.lipschitz),
                    seconds,
                    error: None,
                    stages: &res.trace.stages,
                },
            )?;
            write_alpha_csv(&sibling(&a.output, ".alpha.csv"), &res.alpha, signal.dt())?;
            println!("tycoon finished in {seconds:.1} s, mu_t = {:.3e}", res.chosen_mu_tilde);
            res.f
        }
    };
    write_tfr(&a.output, &tfr)?;
    println!("wrote {}x{} TFR to {}", grid.rows(), grid.cols(), a.output.display());
    Ok(())
}

#[derive(Serialize)]
struct EvalReport {
    d: f64,
    skipped_columns: usize,
    columns: usize,
}

fn eval(a: &EvalArgs) -> tycoon_core::Result<()> {
    let tfr = read_tfr(&a.tfr)?;
    let truth: Truth = read_json(&a.truth)?;
    let g = *tfr.grid();
    if truth.len() != g.cols() {
        return Err(TycoonError::ShapeMismatch {
            expected: format!("truth with {} samples (TFR is {}x{})", g.cols(), g.rows(), g.cols()),
            got: format!(
                "{} samples (itvPS would be {}x{})",
                truth.len(),
                truth.len().saturating_sub(1).div_ceil(2) + 1,
                truth.len()
            ),
        });
    }
    let reference = itvps(&truth.to_components()?, &g)?;
    let report = d_metric(&reference, &tvps_from_tfr(&tfr))?;
    println!("D = {:.6} ({} of {} columns skipped)", report.value, report.skipped_columns, g.cols());
    if let Some(p) = &a.output {
        write_json(
            p,
            &EvalReport {
                d: report.value,
                skipped_columns: report.skipped_columns,
                columns: g.cols(),
            },
        )?;
    }
    if let Some(p) = &a.profile {
        let mut w = csv::Writer::from_path(p).map_err(|e| TycoonError::Format(e.to_string()))?;
        w.write_record(["t", "ot"]).map_err(|e| TycoonError::Format(e.to_string()))?;
        for (m, v) in report.profile.iter().enumerate() {
            let t = format!("{}", g.time(m));
            let v = v.map(|x| x.to_string()).unwrap_or_default();
            w.write_record([t, v]).map_err(|e| TycoonError::Format(e.to_string()))?;
        }
        w.flush()?;
    }
    Ok(())
}

fn bench(a: &BenchArgs) -> tycoon_core::Result<()> {
    let cfg = BenchConfig {
        realizations: a.realizations,
        length: a.length,
        dt: a.dt,
        snr_db: a.snr,
        window_sigma: a.window_sigma,
        seed: a.seed,
        params: a.solver.params(BENCH_LAMBDA_TILDE),
    };
    let report = run_bench(&cfg)?;
    print!("{}", report.to_table());
    if let Some(p) = &a.output {
        write_json(p, &report)?;
    }
    Ok(())
}

fn render(a: &RenderArgs) -> tycoon_core::Result<()> {
    let tfr = read_tfr(&a.input)?;
    let s = if a.power {
        TvPS::new(*tfr.grid(), tfr.values().mapv(|z| z.re))?
    } else {
        tvps_from_tfr(&tfr)
    };
    write_pgm(&a.output, &compress_dynamic_range(&s, a.quantile)?)?;
    if let (Some(t), Some(o)) = (&a.truth, &a.overlay) {
        write_if_overlay(o, &read_json(t)?)?;
    }
    println!("wrote {}x{} image to {}", s.grid().cols(), s.grid().rows(), a.output.display());
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("TYCOON_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("could not cap threads: {e}");
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    configure_threads();
    let result = match &cli.command {
        Command::Synth(a) => synth(a),
        Command::Analyze(a) => analyze(a),
        Command::Eval(a) => eval(a),
        Command::Bench(a) => bench(a),
        Command::Render(a) => render(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
