//! Subcommand implementations: execute a resolved manifest, persist CSVs,
//! fits, and plots, and skip work whose outputs already exist so an
//! interrupted sweep resumes where it stopped.

use crate::manifest::{LrMode, ModelSpec, RimObservable, RunManifest};
use crate::svg::{Plot, Series};
use anyhow::{Context, Result};
use kzh_core::profile::CorrelationProfile;
use kzh_core::sweeps;
use serde_json::json;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub struct RunOutcome {
    pub completed: usize,
    pub skipped: usize,
    pub failed: usize,
}

fn profile_csv(path: &Path, profiles: &[CorrelationProfile]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "model,tau_q,t,n_samples,R,C,stderr")?;
    for p in profiles {
        p.append_csv_rows(&mut w)?;
    }
    Ok(())
}

fn log_error(dir: &Path, what: &str, err: &anyhow::Error) -> Result<()> {
    let mut f = File::options().create(true).append(true).open(dir.join("errors.log"))?;
    writeln!(f, "{what}: {err:#}")?;
    Ok(())
}

fn fits_path(dir: &Path) -> PathBuf {
    dir.join("fits.json")
}

fn write_fits(dir: &Path, fits: &serde_json::Value) -> Result<()> {
    std::fs::write(fits_path(dir), serde_json::to_string_pretty(fits)?)?;
    Ok(())
}

pub fn execute(manifest: &RunManifest) -> Result<RunOutcome> {
    manifest.validate()?;
    manifest.write_resolved()?;
    match &manifest.model {
        ModelSpec::Glauber2d { .. } => run_glauber(manifest),
        ModelSpec::Xychain { .. } => run_xychain(manifest),
        ModelSpec::Randomising { .. } => run_randomising(manifest),
        ModelSpec::Longrange { .. } => run_longrange(manifest),
    }
}

fn run_glauber(manifest: &RunManifest) -> Result<RunOutcome> {
    let ModelSpec::Glauber2d { size, tau_q, seeds, times, rmax, seed_base } = &manifest.model else {
        unreachable!()
    };
    let dir = &manifest.output_dir;
    let mut outcome = RunOutcome { completed: 0, skipped: 0, failed: 0 };
    if tau_q.is_empty() {
        eprintln!("warning: empty parameter grid, nothing to do");
        return Ok(outcome);
    }
    let seed_list: Vec<u64> = (0..*seeds).map(|i| seed_base + i).collect();
    let mut all_scaled: Vec<(f64, Vec<kzh_core::ScaledProfile>)> = Vec::new();
    for &tq in tau_q {
        let csv = dir.join(format!("glauber2d_tau{}.csv", tq));
        let energy_csv = dir.join(format!("energy_tau{}.csv", tq));
        if csv.exists() && energy_csv.exists() {
            outcome.skipped += 1;
            let profiles = CorrelationProfile::read_csv(std::io::BufReader::new(File::open(&csv)?))?;
            let sc = kzh_core::glauber2d::scales(tq);
            all_scaled.push((tq, profiles.iter().map(|p| kzh_core::rescale_profile(p, &sc, 0.25)).collect()));
            continue;
        }
        let sc = kzh_core::glauber2d::scales(tq);
        if kzh_core::glauber2d::finite_size_ratio(*size, tq) < 10.0 {
            eprintln!("warning: L = {size} is below 10 xi_hat at tau_q = {tq}");
        }
        let t_list: Vec<f64> = times.iter().map(|&s| s * sc.t_hat).collect();
        match kzh_core::glauber2d::ensemble_ramp(*size, tq, &t_list, *rmax, &seed_list) {
            Ok(ens) => {
                profile_csv(&csv, &ens.profiles)?;
                let mut w = BufWriter::new(File::create(&energy_csv)?);
                writeln!(w, "tau_q,t,E,stderr")?;
                for &(t, e, se) in &ens.energy {
                    writeln!(w, "{tq},{t},{e},{se}")?;
                }
                all_scaled.push((tq, ens.profiles.iter().map(|p| kzh_core::rescale_profile(p, &sc, 0.25)).collect()));
                outcome.completed += 1;
            }
            Err(e) => {
                outcome.failed += 1;
                log_error(dir, &format!("glauber2d tau_q={tq}"), &e.into())?;
            }
        }
    }
    // combined energy table across the ladder
    let mut w = BufWriter::new(File::create(dir.join("energy.csv"))?);
    writeln!(w, "tau_q,t,E,stderr")?;
    for &tq in tau_q.iter() {
        let per_tau = dir.join(format!("energy_tau{}.csv", tq));
        if let Ok(text) = std::fs::read_to_string(&per_tau) {
            for line in text.lines().skip(1) {
                writeln!(w, "{line}")?;
            }
        }
    }
    drop(w);
    // velocity ladder on the slowest quench
    let mut fits = json!({"model": "glauber2d", "seeds": seed_list, "velocity": null});
    if let Some((tq, profiles)) = all_scaled.last() {
        match sweeps::ising::velocity_from_profiles(profiles, &[0.02, 0.04, 0.06, 0.08, 0.1]) {
            Ok(ladder) => {
                fits["velocity"] = serde_json::to_value(&ladder)?;
                fits["velocity_tau_q"] = json!(tq);
            }
            Err(e) => log_error(dir, "glauber2d velocity ladder", &e.into())?,
        }
        let plot = Plot {
            title: format!("2D Ising scaled correlator, tau_Q = {tq}"),
            x_label: "R / xi_hat".into(),
            y_label: "xi_hat^(1/4) C_R".into(),
            log_x: false,
            log_y: true,
            series: profiles
                .iter()
                .map(|sp| Series {
                    label: format!("s = {:.2}", sp.s),
                    points: sp.x.iter().zip(&sp.y).map(|(&x, &y)| (x, y)).collect(),
                })
                .collect(),
            provenance: format!("glauber2d tau_q={tq} seeds={}", seed_list.len()),
        };
        plot.write_svg(&dir.join("correlators.svg"))?;
    }
    write_fits(dir, &fits)?;
    Ok(outcome)
}

fn run_xychain(manifest: &RunManifest) -> Result<RunOutcome> {
    let ModelSpec::Xychain { tau_q, times, sites, rmax, method } = &manifest.model else {
        unreachable!()
    };
    let dir = &manifest.output_dir;
    let mut outcome = RunOutcome { completed: 0, skipped: 0, failed: 0 };
    if tau_q.is_empty() {
        eprintln!("warning: empty parameter grid, nothing to do");
        return Ok(outcome);
    }
    let method = match method.as_str() {
        "weber" => kzh_core::xychain::XyMethod::Weber,
        "ode" => kzh_core::xychain::XyMethod::Ode,
        "scaled" => kzh_core::xychain::XyMethod::Scaled,
        other => anyhow::bail!("unknown method {other} (expected weber|ode|scaled)"),
    };
    if method == kzh_core::xychain::XyMethod::Scaled {
        if let Some(&t) = tau_q.iter().find(|&&t| t < 65_536.0) {
            eprintln!("warning: scaled method below tau_q = 2^16 (tau_q = {t}) is outside its validity window");
        }
    }
    let params = kzh_core::xychain::XYParams::default();
    let mut xi_series = Vec::new();
    for &tq in tau_q {
        let csv = dir.join(format!("xychain_tau{}.csv", tq));
        let n = sites.unwrap_or_else(|| sweeps::xy::XyLadderConfig::sites_for(tq));
        let sc = params.scales(tq);
        let r_max = rmax.unwrap_or(((12.0 * sc.xi_hat).ceil() as usize).max(40)).min(n / 4 - 1);
        let profiles: Vec<CorrelationProfile> = if csv.exists() {
            outcome.skipped += 1;
            CorrelationProfile::read_csv(std::io::BufReader::new(File::open(&csv)?))?
        } else {
            let mut out = Vec::new();
            let mut failed = false;
            for &s in times {
                match kzh_core::xychain::xx_profile(&params, tq, s * sc.t_hat, n, r_max, method) {
                    Ok(p) => out.push(p),
                    Err(e) => {
                        failed = true;
                        outcome.failed += 1;
                        log_error(dir, &format!("xychain tau_q={tq} s={s}"), &e.into())?;
                        break;
                    }
                }
            }
            if failed {
                continue;
            }
            profile_csv(&csv, &out)?;
            outcome.completed += 1;
            out
        };
        // oscillatory fits per time slice
        let mut seed = None;
        let mut lam = Vec::new();
        for p in &profiles {
            let sp = kzh_core::rescale_profile(p, &sc, 0.25);
            match kzh_core::analysis::oscillatory_fit_seeded(&sp, 2.5, seed) {
                Ok(fit) => {
                    let l = fit.get("xi_over_xihat").unwrap();
                    seed = Some((fit.get("b").unwrap(), l));
                    lam.push((p.t / sc.t_hat, l));
                }
                Err(e) => log_error(dir, &format!("xychain fit tau_q={tq} t={}", p.t), &e.into())?,
            }
        }
        xi_series.push((tq, lam));
    }
    let mut fits = json!({"model": "xychain", "xi_over_xihat": xi_series});
    if xi_series.len() >= 4 && xi_series.iter().all(|(_, v)| v.len() >= 5) {
        let sat = kzh_core::analysis::derivative_and_saturation(&xi_series)?;
        fits["saturation"] = serde_json::to_value(&sat)?;
    }
    if let Some((tq, lam)) = xi_series.last() {
        let plot = Plot {
            title: format!("Scaled correlation length, tau_Q = {tq}"),
            x_label: "t / t_hat".into(),
            y_label: "xi / xi_hat".into(),
            log_x: false,
            log_y: false,
            series: vec![Series {
                label: format!("tau_Q = {tq}"),
                points: lam.clone(),
            }],
            provenance: format!("xychain tau_q={tq}"),
        };
        plot.write_svg(&dir.join("xi_of_s.svg"))?;
    }
    write_fits(dir, &fits)?;
    Ok(outcome)
}

fn run_randomising(manifest: &RunManifest) -> Result<RunOutcome> {
    let ModelSpec::Randomising { sites, tau_q, realizations, dt, times, rim_a, seed_base, rmax, observable } = &manifest.model else {
        unreachable!()
    };
    let dir = &manifest.output_dir;
    let mut outcome = RunOutcome { completed: 0, skipped: 0, failed: 0 };
    if tau_q.is_empty() {
        eprintln!("warning: empty parameter grid, nothing to do");
        return Ok(outcome);
    }
    let mut fits = json!({"model": "randomising", "rim_a": rim_a});
    match observable {
        RimObservable::ExcitationDensity => {
            let mut curves = Vec::new();
            for &tq in tau_q {
                let csv = dir.join(format!("dex_tau{}.csv", tq));
                if csv.exists() {
                    outcome.skipped += 1;
                    continue;
                }
                let scales = kzh_core::randomising::DisorderRealization::scales(tq, *rim_a)?;
                let t_list: Vec<f64> = times.iter().map(|&s| s * scales.t_hat).collect();
                match kzh_core::randomising::dex_sweep(*sites, *realizations, tq, *dt, sweeps::rim::DEFAULT_EPS_START, &t_list, *seed_base) {
                    Ok(rows) => {
                        let mut w = BufWriter::new(File::create(&csv)?);
                        writeln!(w, "tau_q,t,dex,stderr")?;
                        for &(t, d, se) in &rows {
                            writeln!(w, "{tq},{t},{d},{se}")?;
                        }
                        curves.push((tq, rows));
                        outcome.completed += 1;
                    }
                    Err(e) => {
                        outcome.failed += 1;
                        log_error(dir, &format!("randomising dex tau_q={tq}"), &e.into())?;
                    }
                }
            }
            if !curves.is_empty() {
                let plot = Plot {
                    title: "Scaled excitation density".into(),
                    x_label: "t / t_hat".into(),
                    y_label: "xi_hat d_ex".into(),
                    log_x: false,
                    log_y: false,
                    series: curves
                        .iter()
                        .map(|(tq, rows)| {
                            let sc = kzh_core::randomising::DisorderRealization::scales(*tq, *rim_a).unwrap();
                            Series {
                                label: format!("tau_Q = {tq}"),
                                points: rows.iter().map(|&(t, d, _)| (t / sc.t_hat, sc.xi_hat * d)).collect(),
                            }
                        })
                        .collect(),
                    provenance: format!("randomising dex n={sites} realizations={realizations}"),
                };
                plot.write_svg(&dir.join("dex_collapse.svg"))?;
            }
        }
        RimObservable::Correlations => {
            let r_list: Vec<u32> = (1..=*rmax as u32).collect();
            let mut scaled_sets = Vec::new();
            for &tq in tau_q {
                let csv = dir.join(format!("randomising_tau{}.csv", tq));
                let profiles: Vec<CorrelationProfile> = if csv.exists() {
                    outcome.skipped += 1;
                    CorrelationProfile::read_csv(std::io::BufReader::new(File::open(&csv)?))?
                } else {
                    match kzh_core::randomising::rim_profile(
                        *sites, *realizations, tq, *dt, sweeps::rim::DEFAULT_EPS_START, *rim_a,
                        times, &r_list, *seed_base, 12,
                    ) {
                        Ok(p) => {
                            profile_csv(&csv, &p)?;
                            outcome.completed += 1;
                            p
                        }
                        Err(e) => {
                            outcome.failed += 1;
                            log_error(dir, &format!("randomising tau_q={tq}"), &e.into())?;
                            continue;
                        }
                    }
                };
                let sc = kzh_core::randomising::DisorderRealization::scales(tq, *rim_a)?;
                let eta = kzh_core::randomising::DisorderRealization::exponents().eta_or_delta;
                scaled_sets.push((tq, profiles.iter().map(|p| kzh_core::rescale_profile(p, &sc, eta)).collect::<Vec<_>>()));
            }
            if let Some((tq, scaled)) = scaled_sets.last() {
                match sweeps::rim::velocity_from_profiles(scaled, &[0.5, 0.6, 0.7, 0.85, 1.0]) {
                    Ok(ladder) => {
                        fits["velocity"] = serde_json::to_value(&ladder)?;
                        fits["velocity_tau_q"] = json!(tq);
                    }
                    Err(e) => log_error(dir, "randomising velocity ladder", &e.into())?,
                }
            }
        }
    }
    write_fits(dir, &fits)?;
    Ok(outcome)
}

fn run_longrange(manifest: &RunManifest) -> Result<RunOutcome> {
    let ModelSpec::Longrange { alpha, sites, mode, tau_q, times, rmax } = &manifest.model else {
        unreachable!()
    };
    let dir = &manifest.output_dir;
    let mut outcome = RunOutcome { completed: 0, skipped: 0, failed: 0 };
    let mut fits = json!({"model": "longrange", "alpha": alpha, "mode": format!("{mode:?}")});
    match mode {
        LrMode::Static => {
            let csv = dir.join("longrange_static.csv");
            if csv.exists() {
                outcome.skipped += 1;
            } else {
                let p = kzh_core::longrange::LongRangeParams::new(*alpha, *sites)?;
                let grid = kzh_core::longrange::log_r_grid((*rmax).min(sites / 8), 120);
                let mut profiles = Vec::new();
                for &eps in times {
                    profiles.push(kzh_core::longrange::lr_static_profile(&p, eps, &grid).context("static profile")?);
                }
                profile_csv(&csv, &profiles)?;
                outcome.completed += 1;
                let xc: Vec<f64> = grid.iter().map(|&r| r as f64).collect();
                if let Some(prof) = profiles.first() {
                    if let Ok(slope) = sweeps::loglog_slope(&xc, &prof.c_values, 10.0, 1000.0) {
                        fits["tail_slope_first"] = json!(slope);
                    }
                }
                let plot = Plot {
                    title: format!("Static string correlator, alpha = {alpha}"),
                    x_label: "R".into(),
                    y_label: "|C_R|".into(),
                    log_x: true,
                    log_y: true,
                    series: profiles
                        .iter()
                        .zip(times)
                        .map(|(p, &eps)| Series {
                            label: format!("eps = {eps}"),
                            points: p.r_values.iter().zip(&p.c_values).map(|(&r, &c)| (r as f64, c.abs())).collect(),
                        })
                        .collect(),
                    provenance: format!("longrange static alpha={alpha} N={sites}"),
                };
                plot.write_svg(&dir.join("static_tails.svg"))?;
            }
        }
        LrMode::Linear => {
            let cfg = sweeps::lr::LrQuenchConfig {
                alpha: *alpha,
                n_sites: *sites,
                tau_q_list: tau_q.clone(),
                s_list: times.clone(),
                fit_window: (3.0, 20.0),
                x_max: 30.0,
            };
            let csv = dir.join("longrange_linear.csv");
            if csv.exists() {
                outcome.skipped += 1;
            } else {
                let slices = sweeps::lr::run_quench(&cfg)?;
                let mut profiles = Vec::new();
                let mut abc = Vec::new();
                for sl in &slices {
                    // store raw-R profile reconstructed from the scaled one
                    let sc = kzh_core::longrange::LongRangeParams::new(*alpha, *sites)?.scales(sl.tau_q);
                    let r_values: Vec<u32> = sl.scaled.x.iter().map(|&x| (x * sc.xi_hat).round() as u32).collect();
                    let c_values: Vec<f64> = sl.scaled.y.iter().map(|&y| y / sc.xi_hat).collect();
                    profiles.push(CorrelationProfile::new("longrange", sl.s * sc.t_hat, sl.tau_q, r_values, c_values, 1, None)?);
                    abc.push(json!({"tau_q": sl.tau_q, "s": sl.s, "fit": sl.abc}));
                }
                profile_csv(&csv, &profiles)?;
                fits["abc"] = json!(abc);
                outcome.completed += 1;
            }
        }
        LrMode::SuddenInf | LrMode::SuddenFinite => {
            let source = if *mode == LrMode::SuddenInf {
                kzh_core::longrange::SuddenSource::InfiniteField
            } else {
                kzh_core::longrange::SuddenSource::EpsilonMinusOne
            };
            let csv = dir.join("longrange_sudden.csv");
            if csv.exists() {
                outcome.skipped += 1;
            } else {
                let window = if source == kzh_core::longrange::SuddenSource::InfiniteField {
                    (300.0, 1000.0)
                } else {
                    (900.0, 1000.0)
                };
                let res = sweeps::lr::run_sudden(*alpha, *sites, source, times, window)?;
                profile_csv(&csv, &res.profiles)?;
                let abc: Vec<_> = res.abc.iter().map(|(t, f)| json!({"t": t, "fit": f})).collect();
                fits["abc"] = json!(abc);
                outcome.completed += 1;
            }
        }
    }
    write_fits(dir, &fits)?;
    Ok(outcome)
}
