//! Per-trial records, summaries and CSV / JSON emission.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::{Error, Result};

/// One row of the CSV report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub experiment: String,
    pub family: String,
    pub seed: u64,
    pub trial: usize,
    pub d: usize,
    pub m_or_s: f64,
    pub p: f64,
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `None` when both sides vanish.
    pub ratio: Option<f64>,
    /// Block scale for `dyadic_block` trials; not part of the CSV.
    #[serde(skip)]
    pub scale: Option<i32>,
}

impl TrialRecord {
    pub fn ratio_of(lhs: f64, rhs: f64) -> Option<f64> {
        if lhs == 0.0 && rhs == 0.0 {
            None
        } else {
            Some(lhs / rhs)
        }
    }
}

/// Least-squares fit `log K(x_d) = log C - c x_d` for one multi-index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub alpha: Vec<u32>,
    pub beta: u32,
    pub c: f64,
    pub big_c: f64,
    /// Largest `|log K - fit|` over the sampled depths.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    /// Trials with zero on both sides, left out of the statistics.
    pub degenerate: usize,
    /// Trials whose ratio is infinite or NaN.
    pub non_finite: usize,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub geomean_ratio: Option<f64>,
    /// `max_ratio / min_ratio`.
    pub spread: Option<f64>,
    /// Per block scale, the geometric mean ratio (`dyadic_block` only).
    pub scale_ratios: BTreeMap<i32, f64>,
    /// Largest over smallest of `scale_ratios`.
    pub scale_spread: Option<f64>,
    pub decay_fits: Vec<DecayFit>,
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
    pub provenance: Provenance,
}

fn geomean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some((xs.iter().map(|x| x.ln()).sum::<f64>() / xs.len() as f64).exp())
    }
}

fn spread(xs: impl Iterator<Item = f64> + Clone) -> Option<f64> {
    let lo = xs.clone().fold(f64::INFINITY, f64::min);
    let hi = xs.fold(f64::NEG_INFINITY, f64::max);
    (lo.is_finite() && hi.is_finite()).then_some(hi / lo)
}

impl Summary {
    /// Statistics over the finite positive ratios of `records`.
    pub fn from_records(records: &[TrialRecord], decay_fits: Vec<DecayFit>) -> Self {
        let degenerate = records.iter().filter(|r| r.ratio.is_none()).count();
        let usable: Vec<&TrialRecord> = records
            .iter()
            .filter(|r| r.ratio.is_some_and(|x| x.is_finite() && x > 0.0))
            .collect();
        let ratios: Vec<f64> = usable.iter().filter_map(|r| r.ratio).collect();
        let non_finite = records.len() - degenerate - ratios.len();
        let mut by_scale: BTreeMap<i32, Vec<f64>> = BTreeMap::new();
        for r in &usable {
            if let (Some(j), Some(x)) = (r.scale, r.ratio) {
                by_scale.entry(j).or_default().push(x);
            }
        }
        let scale_ratios: BTreeMap<i32, f64> = by_scale
            .into_iter()
            .filter_map(|(j, xs)| geomean(&xs).map(|g| (j, g)))
            .collect();
        let scale_spread = if scale_ratios.len() > 1 {
            spread(scale_ratios.values().copied())
        } else {
            None
        };
        Summary {
            trials: records.len(),
            degenerate,
            non_finite,
            min_ratio: ratios.iter().copied().reduce(f64::min),
            max_ratio: ratios.iter().copied().reduce(f64::max),
            geomean_ratio: geomean(&ratios),
            spread: spread(ratios.iter().copied()),
            scale_ratios,
            scale_spread,
            decay_fits,
            tolerances: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format '{s}' (csv or json)"))),
        }
    }
}

fn number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Per-trial CSV; a report without trials gives the header alone.
pub fn write_csv<W: Write>(report: &EstimateReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let fmt_err = |e: csv::Error| Error::Format(e.to_string());
    w.write_record(["experiment", "family", "seed", "trial", "d", "m_or_s", "p", "q", "lhs", "rhs", "ratio"])
        .map_err(fmt_err)?;
    for r in &report.records {
        w.write_record([
            r.experiment.clone(),
            r.family.clone(),
            r.seed.to_string(),
            r.trial.to_string(),
            r.d.to_string(),
            number(r.m_or_s),
            number(r.p),
            number(r.q),
            number(r.lhs),
            number(r.rhs),
            r.ratio.map(number).unwrap_or_default(),
        ])
        .map_err(fmt_err)?;
    }
    w.flush()?;
    Ok(())
}

/// JSON summary: configuration echo, ratio statistics, fits, tolerances and
/// provenance. Non-finite numbers become `null`.
pub fn write_json<W: Write>(report: &EstimateReport, mut out: W) -> Result<()> {
    let value = serde_json::json!({
        "config": report.config,
        "summary": report.summary,
        "provenance": report.provenance,
    });
    serde_json::to_writer_pretty(&mut out, &value).map_err(|e| Error::Format(e.to_string()))?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn render(report: &EstimateReport, format: Format) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(report, &mut buf)?,
        Format::Json => write_json(report, &mut buf)?,
    }
    Ok(buf)
}

pub fn emit_report<P: AsRef<Path>>(report: &EstimateReport, path: P, format: Format) -> Result<()> {
    std::fs::write(path, render(report, format)?)?;
    Ok(())
}
