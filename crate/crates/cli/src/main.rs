//! Batch front-end for the quench-dynamics suite: model sweeps, analysis of
//! stored profiles, and canned runs reproducing the headline results.

mod manifest;
mod runs;
mod svg;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use manifest::{LrMode, ModelSpec, RimObservable, RunManifest, SCHEMA_VERSION};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "kzh", version, about = "Quench dynamics across critical points: Kibble-Zurek scaling and correlation spreading")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classical 2D Ising model under a linear inverse-temperature ramp.
    Glauber2d(GlauberArgs),
    /// Extended quantum XY chain (z = 3), exact Landau-Zener solution.
    Xychain(XyArgs),
    /// Random transverse-field Ising chain (Suzuki-Trotter evolution).
    Randomising(RimArgs),
    /// Long-range extended Ising chain (1 < alpha < 2).
    Longrange(LrArgs),
    /// Post-process stored profile CSVs (collapse overlays, velocities).
    Analyze(AnalyzeArgs),
    /// Run a canned study by id (see `reproduce --list`).
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Output directory for CSVs, fits.json and plots.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// JSON manifest; explicit flags override its fields.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct GlauberArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 1024)]
    size: usize,
    /// Quench time(s), repeatable.
    #[arg(long = "tauq")]
    tau_q: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    seeds: u64,
    /// Measurement times in units of t_hat, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "-1,-0.75,-0.5,-0.25,0,0.25,0.5,0.75,1", allow_hyphen_values = true)]
    measure_times: Vec<f64>,
    #[arg(long, default_value_t = 128)]
    rmax: usize,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
}

#[derive(Args)]
struct XyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long = "tauq")]
    tau_q: Vec<f64>,
    /// Scaled times t/t_hat, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "-2,-1.5,-1,-0.5,0,0.5,1,1.5,2", allow_hyphen_values = true)]
    times: Vec<f64>,
    #[arg(long)]
    sites: Option<usize>,
    #[arg(long)]
    rmax: Option<usize>,
    #[arg(long, default_value = "weber")]
    method: String,
}

#[derive(Args)]
struct RimArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 256)]
    sites: usize,
    #[arg(long = "tauq")]
    tau_q: Vec<f64>,
    #[arg(long, default_value_t = 30)]
    realizations: usize,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    /// Scaled times t/t_hat, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "-0.25,-0.15,-0.05,0.05,0.15,0.25", allow_hyphen_values = true)]
    times: Vec<f64>,
    #[arg(long = "rim-a", default_value_t = 0.118)]
    rim_a: f64,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    #[arg(long, default_value_t = 64)]
    rmax: usize,
    /// Record the excitation density instead of correlators.
    #[arg(long)]
    dex: bool,
}

#[derive(Args)]
struct LrArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
    #[arg(long, default_value_t = 1 << 16)]
    sites: usize,
    /// static | linear | sudden-inf | sudden-finite
    #[arg(long, default_value = "linear")]
    mode: String,
    #[arg(long = "tauq")]
    tau_q: Vec<f64>,
    /// Scaled times (linear), raw times (sudden), or epsilon values (static).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    times: Vec<f64>,
    #[arg(long, default_value_t = 4096)]
    rmax: usize,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Profile CSV (core schema) to analyze.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Critical exponents z, nu, eta used for rescaling.
    #[arg(long, default_value_t = 2.0)]
    z: f64,
    #[arg(long, default_value_t = 1.0)]
    nu: f64,
    #[arg(long, default_value_t = 0.25)]
    eta: f64,
    /// Cutoffs for the threshold-range velocity ladder.
    #[arg(long, value_delimiter = ',', default_value = "0.02,0.04,0.06,0.08,0.1")]
    cutoffs: Vec<f64>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Canned study id.
    id: Option<String>,
    /// List available ids.
    #[arg(long)]
    list: bool,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn init_threads() {
    if let Ok(v) = std::env::var("KZH_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> Result<()> {
    init_threads();
    let cli = Cli::parse();
    match cli.command {
        Command::Glauber2d(a) => {
            let m = merge_manifest(&a.common, ModelSpec::Glauber2d {
                size: a.size,
                tau_q: a.tau_q,
                seeds: a.seeds,
                times: a.measure_times,
                rmax: a.rmax,
                seed_base: a.seed_base,
            })?;
            finish(runs::execute(&m)?)
        }
        Command::Xychain(a) => {
            let m = merge_manifest(&a.common, ModelSpec::Xychain {
                tau_q: a.tau_q,
                times: a.times,
                sites: a.sites,
                rmax: a.rmax,
                method: a.method,
            })?;
            finish(runs::execute(&m)?)
        }
        Command::Randomising(a) => {
            let m = merge_manifest(&a.common, ModelSpec::Randomising {
                sites: a.sites,
                tau_q: a.tau_q,
                realizations: a.realizations,
                dt: a.dt,
                times: a.times,
                rim_a: a.rim_a,
                seed_base: a.seed_base,
                rmax: a.rmax,
                observable: if a.dex { RimObservable::ExcitationDensity } else { RimObservable::Correlations },
            })?;
            finish(runs::execute(&m)?)
        }
        Command::Longrange(a) => {
            let mode = match a.mode.as_str() {
                "static" => LrMode::Static,
                "linear" => LrMode::Linear,
                "sudden-inf" => LrMode::SuddenInf,
                "sudden-finite" => LrMode::SuddenFinite,
                other => bail!("unknown mode {other}"),
            };
            let m = merge_manifest(&a.common, ModelSpec::Longrange {
                alpha: a.alpha,
                sites: a.sites,
                mode,
                tau_q: a.tau_q,
                times: a.times,
                rmax: a.rmax,
            })?;
            finish(runs::execute(&m)?)
        }
        Command::Analyze(a) => analyze(&a),
        Command::Reproduce(a) => reproduce(&a),
    }
}

fn merge_manifest(common: &CommonArgs, from_flags: ModelSpec) -> Result<RunManifest> {
    // a manifest provides the base; when any model flag carries parameters
    // the whole model block from the flags wins
    let manifest = if let Some(path) = &common.manifest {
        let mut m = RunManifest::load(path)?;
        if model_has_parameters(&from_flags) {
            m.model = from_flags;
        }
        m.output_dir = common.out.clone();
        m
    } else {
        RunManifest {
            schema_version: SCHEMA_VERSION,
            model: from_flags,
            output_dir: common.out.clone(),
        }
    };
    manifest.validate()?;
    Ok(manifest)
}

fn model_has_parameters(m: &ModelSpec) -> bool {
    match m {
        ModelSpec::Glauber2d { tau_q, .. } => !tau_q.is_empty(),
        ModelSpec::Xychain { tau_q, .. } => !tau_q.is_empty(),
        ModelSpec::Randomising { tau_q, .. } => !tau_q.is_empty(),
        ModelSpec::Longrange { tau_q, times, .. } => !tau_q.is_empty() || !times.is_empty(),
    }
}

fn finish(outcome: runs::RunOutcome) -> Result<()> {
    println!(
        "completed {} run(s), skipped {} (outputs present), {} failed",
        outcome.completed, outcome.skipped, outcome.failed
    );
    if outcome.failed > 0 {
        std::process::exit(1);
    }
    Ok(())
}

fn analyze(a: &AnalyzeArgs) -> Result<()> {
    use kzh_core::profile::CorrelationProfile;
    let profiles = CorrelationProfile::read_csv(std::io::BufReader::new(
        std::fs::File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?,
    ))?;
    if profiles.is_empty() {
        bail!("no profiles in {}", a.input.display());
    }
    std::fs::create_dir_all(&a.out)?;
    let exps = kzh_core::CriticalExponents::new(a.z, a.nu, a.eta)?;
    let mut ranges: Vec<(f64, Vec<(f64, f64)>)> = a.cutoffs.iter().map(|&c| (c, Vec::new())).collect();
    for p in &profiles {
        let sc = kzh_core::kz_scales(&exps, p.tau_q, kzh_core::KzFlavor::PowerLaw, None)?;
        let sp = kzh_core::rescale_profile(p, &sc, a.eta);
        for (c, series) in ranges.iter_mut() {
            if let Ok(x) = kzh_core::analysis::threshold_range(&sp, *c) {
                series.push((sp.s, x));
            }
        }
    }
    let mut fits = serde_json::json!({
        "input": a.input.display().to_string(),
        "exponents": {"z": a.z, "nu": a.nu, "eta": a.eta},
    });
    match kzh_core::analysis::velocity_ladder(&ranges) {
        Ok(ladder) => fits["velocity"] = serde_json::to_value(&ladder)?,
        Err(e) => eprintln!("velocity ladder not computed: {e}"),
    }
    std::fs::write(a.out.join("fits.json"), serde_json::to_string_pretty(&fits)?)?;
    println!("wrote {}", a.out.join("fits.json").display());
    Ok(())
}

fn reproduce(a: &ReproduceArgs) -> Result<()> {
    let canned: Vec<(&str, &str)> = vec![
        ("ising2d-collapse", "2D Ising scaled energy and correlator collapse (L=1024, tau_Q up to 2^12, 50 seeds)"),
        ("ising2d-velocity", "2D Ising threshold-range velocity ladder and zero-cutoff extrapolation"),
        ("xy-velocity", "Extended XY chain: xi/xi_hat slopes and velocity saturation over tau_Q = 2^10..2^20"),
        ("lr-static", "Long-range chain static tails and scaling collapse (alpha = 3/2)"),
        ("lr-quench", "Long-range chain linear-quench collapse and A(s) tail coefficients"),
        ("lr-sudden-inf", "Long-range chain sudden quench from infinite field"),
        ("lr-sudden-finite", "Long-range chain sudden quench from epsilon = -1"),
        ("rim-dex", "Random Ising chain scaled excitation-density collapse (tau_Q = 2^7..2^11)"),
        ("rim-velocity", "Random Ising chain correlation profiles and velocity ladder"),
    ];
    if a.list || a.id.is_none() {
        println!("available ids:");
        for (id, desc) in &canned {
            println!("  {id:18} {desc}");
        }
        return Ok(());
    }
    let id = a.id.as_deref().unwrap();
    let out = a.out.join(id);
    let model = match id {
        "ising2d-collapse" | "ising2d-velocity" => ModelSpec::Glauber2d {
            size: 1024,
            tau_q: vec![1024.0, 2048.0, 4096.0],
            seeds: 50,
            times: (0..9).map(|i| -1.0 + 0.25 * i as f64).collect(),
            rmax: 128,
            seed_base: 0,
        },
        "xy-velocity" => ModelSpec::Xychain {
            tau_q: (10..=20).map(|p| (2.0f64).powi(p)).collect(),
            times: (0..17).map(|i| -2.0 + 0.25 * i as f64).collect(),
            sites: None,
            rmax: None,
            method: "weber".into(),
        },
        "lr-static" => ModelSpec::Longrange {
            alpha: 1.5,
            sites: 1 << 16,
            mode: LrMode::Static,
            tau_q: vec![],
            times: vec![0.0, -0.02, -0.04, -0.08, -2.0],
            rmax: 8192,
        },
        "lr-quench" => ModelSpec::Longrange {
            alpha: 1.5,
            sites: 1 << 17,
            mode: LrMode::Linear,
            tau_q: vec![256.0, 1024.0],
            times: vec![-2.0, -1.5, -1.0, -0.5, 0.0, 0.25, 0.35, 0.4],
            rmax: 1 << 15,
        },
        "lr-sudden-inf" => ModelSpec::Longrange {
            alpha: 1.5,
            sites: 1 << 16,
            mode: LrMode::SuddenInf,
            tau_q: vec![],
            times: vec![1.0, 1.5, 2.0, 2.5],
            rmax: 8192,
        },
        "lr-sudden-finite" => ModelSpec::Longrange {
            alpha: 1.5,
            sites: 1 << 16,
            mode: LrMode::SuddenFinite,
            tau_q: vec![],
            times: (0..9).map(|i| 0.25 * i as f64).collect(),
            rmax: 8192,
        },
        "rim-dex" => ModelSpec::Randomising {
            sites: 128,
            tau_q: (7..=11).map(|p| (2.0f64).powi(p)).collect(),
            realizations: 30,
            dt: 0.01,
            times: (0..13).map(|i| -1.5 + 0.25 * i as f64).collect(),
            rim_a: 0.118,
            seed_base: 10_000,
            rmax: 64,
            observable: RimObservable::ExcitationDensity,
        },
        "rim-velocity" => ModelSpec::Randomising {
            sites: 256,
            tau_q: vec![1024.0, 2048.0],
            realizations: 30,
            dt: 0.01,
            times: vec![-0.25, -0.15, -0.05, 0.05, 0.15, 0.25],
            rim_a: 0.118,
            seed_base: 40_000,
            rmax: 64,
            observable: RimObservable::Correlations,
        },
        other => bail!("unknown id {other}; run with --list"),
    };
    let manifest = RunManifest { schema_version: SCHEMA_VERSION, model, output_dir: out };
    finish(runs::execute(&manifest)?)
}
