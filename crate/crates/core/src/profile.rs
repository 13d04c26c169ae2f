//! Correlation profiles: the record shared by every model and the analysis
//! layer, plus its CSV/JSON serializations and the KZ rescaling.

use crate::error::{Error, Result};
use crate::protocol::KzScales;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// C_R versus integer distance R at one timestamp, with ensemble metadata.
/// Times are in model-native units (MC sweeps for the 2D Ising model,
/// hbar = 1 Hamiltonian units elsewhere); `model_id` keeps the analysis
/// layer from mixing them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationProfile {
    pub model_id: String,
    pub t: f64,
    pub tau_q: f64,
    pub r_values: Vec<u32>,
    pub c_values: Vec<f64>,
    pub n_samples: u32,
    pub std_err: Option<Vec<f64>>,
}

impl CorrelationProfile {
    pub fn new(
        model_id: impl Into<String>,
        t: f64,
        tau_q: f64,
        r_values: Vec<u32>,
        c_values: Vec<f64>,
        n_samples: u32,
        std_err: Option<Vec<f64>>,
    ) -> Result<Self> {
        if r_values.len() != c_values.len() {
            return Err(Error::invalid("CorrelationProfile", "r_values and c_values length mismatch"));
        }
        if !r_values.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("CorrelationProfile", "r_values must be strictly increasing"));
        }
        if r_values.iter().any(|&r| r == 0) {
            return Err(Error::invalid("CorrelationProfile", "r_values must be positive"));
        }
        if n_samples < 1 {
            return Err(Error::invalid("CorrelationProfile", "n_samples must be >= 1"));
        }
        if let Some(se) = &std_err {
            if se.len() != r_values.len() {
                return Err(Error::invalid("CorrelationProfile", "std_err length mismatch"));
            }
        }
        Ok(CorrelationProfile {
            model_id: model_id.into(),
            t,
            tau_q,
            r_values,
            c_values,
            n_samples,
            std_err,
        })
    }

    /// CSV rows `model,tau_q,t,n_samples,R,C,stderr` (header included).
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "model,tau_q,t,n_samples,R,C,stderr")?;
        self.append_csv_rows(&mut w)
    }

    /// Rows only, for files that collect several profiles under one header.
    pub fn append_csv_rows<W: Write>(&self, w: &mut W) -> Result<()> {
        for (i, (&r, &c)) in self.r_values.iter().zip(&self.c_values).enumerate() {
            let se = self.std_err.as_ref().map(|s| s[i]);
            match se {
                Some(s) => writeln!(w, "{},{},{},{},{},{},{}", self.model_id, self.tau_q, self.t, self.n_samples, r, c, s)?,
                None => writeln!(w, "{},{},{},{},{},{},", self.model_id, self.tau_q, self.t, self.n_samples, r, c)?,
            }
        }
        Ok(())
    }

    /// Parse every profile found in a CSV stream written by `write_csv`
    /// (rows are grouped by identical (model, tau_q, t)).
    pub fn read_csv<R: BufRead>(r: R) -> Result<Vec<CorrelationProfile>> {
        let mut out: Vec<CorrelationProfile> = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with("model,") {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(Error::invalid("profile csv", format!("line {}: expected 7 fields", lineno + 1)));
            }
            let parse = |s: &str, what: &str| -> Result<f64> {
                s.parse::<f64>().map_err(|_| Error::invalid("profile csv", format!("bad {what}: {s}")))
            };
            let tau_q = parse(f[1], "tau_q")?;
            let t = parse(f[2], "t")?;
            let n_samples = f[3].parse::<u32>().map_err(|_| Error::invalid("profile csv", "bad n_samples"))?;
            let rv = f[4].parse::<u32>().map_err(|_| Error::invalid("profile csv", "bad R"))?;
            let cv = parse(f[5], "C")?;
            let se = if f[6].is_empty() { None } else { Some(parse(f[6], "stderr")?) };
            let matches_last = out.last().map(|p: &CorrelationProfile| {
                p.model_id == f[0] && p.tau_q == tau_q && p.t == t
            });
            if matches_last == Some(true) {
                let p = out.last_mut().unwrap();
                p.r_values.push(rv);
                p.c_values.push(cv);
                if let (Some(list), Some(s)) = (p.std_err.as_mut(), se) {
                    list.push(s);
                }
            } else {
                out.push(CorrelationProfile {
                    model_id: f[0].to_string(),
                    t,
                    tau_q,
                    r_values: vec![rv],
                    c_values: vec![cv],
                    n_samples,
                    std_err: se.map(|s| vec![s]),
                });
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// A profile in KZ-scaled coordinates: s = t/t_hat, x = R/xi_hat,
/// y = xi_hat^Delta * C_R.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledProfile {
    pub model_id: String,
    pub tau_q: f64,
    pub s: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub y_err: Option<Vec<f64>>,
}

/// Rescale a profile by the KZ scales with scaling dimension `delta`.
pub fn rescale_profile(p: &CorrelationProfile, scales: &KzScales, delta: f64) -> ScaledProfile {
    let amp = scales.xi_hat.powf(delta);
    ScaledProfile {
        model_id: p.model_id.clone(),
        tau_q: p.tau_q,
        s: p.t / scales.t_hat,
        x: p.r_values.iter().map(|&r| r as f64 / scales.xi_hat).collect(),
        y: p.c_values.iter().map(|&c| amp * c).collect(),
        y_err: p.std_err.as_ref().map(|se| se.iter().map(|&e| amp * e).collect()),
    }
}

/// Average per-sample correlator arrays into a profile with standard errors.
/// `std_err` is the sample standard deviation over sqrt(n) and is stored
/// only when n >= 2.
pub fn average_samples(
    model_id: &str,
    t: f64,
    tau_q: f64,
    r_values: Vec<u32>,
    samples: &[Vec<f64>],
) -> Result<CorrelationProfile> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::invalid("average_samples", "no samples"));
    }
    let m = r_values.len();
    let mut mean = vec![0.0; m];
    for s in samples {
        if s.len() != m {
            return Err(Error::invalid("average_samples", "sample length mismatch"));
        }
        for (acc, &v) in mean.iter_mut().zip(s) {
            *acc += v;
        }
    }
    for v in mean.iter_mut() {
        *v /= n as f64;
    }
    let std_err = if n >= 2 {
        let mut var = vec![0.0; m];
        for s in samples {
            for ((acc, &v), &mu) in var.iter_mut().zip(s).zip(&mean) {
                *acc += (v - mu) * (v - mu);
            }
        }
        Some(var.iter().map(|&v| (v / ((n - 1) as f64)).sqrt() / (n as f64).sqrt()).collect())
    } else {
        None
    };
    CorrelationProfile::new(model_id, t, tau_q, r_values, mean, n as u32, std_err)
}
