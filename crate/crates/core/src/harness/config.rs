//! Experiment configuration: defaults, flat TOML files and overrides.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::families::Family;
use crate::grid::Grid;
use crate::multiplier::MultiIndex;
use crate::solver::QuadratureSpec;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Regularity,
    Trace,
    CorollarySobolev,
    CorollaryBessel,
    CorollaryBesov,
    NeumannVariant,
    Decay,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Regularity,
        Experiment::Trace,
        Experiment::CorollarySobolev,
        Experiment::CorollaryBessel,
        Experiment::CorollaryBesov,
        Experiment::NeumannVariant,
        Experiment::Decay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Regularity => "regularity",
            Experiment::Trace => "trace",
            Experiment::CorollarySobolev => "corollary_sobolev",
            Experiment::CorollaryBessel => "corollary_bessel",
            Experiment::CorollaryBesov => "corollary_besov",
            Experiment::NeumannVariant => "neumann_variant",
            Experiment::Decay => "decay",
        }
    }

    /// Experiments parameterized by a real smoothness `s` instead of `m`.
    pub fn uses_s(self) -> bool {
        matches!(self, Experiment::CorollaryBessel | Experiment::CorollaryBesov)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment '{s}'")))
    }
}

/// Fully resolved experiment parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub d: usize,
    pub m: u32,
    pub s: f64,
    pub p: f64,
    pub q: f64,
    /// Tangential and normal derivative orders, `d` entries.
    pub alpha: Vec<i64>,
    pub beta: i64,
    pub box_x: f64,
    pub box_t: f64,
    pub n_x: usize,
    pub n_t: usize,
    /// `(x_min, x_max, points_per_octave)`; derived from the grid when absent.
    pub quad: Option<(f64, f64, usize)>,
    pub family: Family,
    pub trials: usize,
    pub seed: u64,
    /// Band range of `random_bandlimited`.
    pub band_lo: i32,
    pub band_hi: i32,
    /// Block scales cycled through by `dyadic_block`.
    pub scales: Vec<i32>,
}

/// Optional settings from a config file or the command line. Later layers
/// win in [`Overrides::merge`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub experiment: Option<Experiment>,
    pub d: Option<usize>,
    pub m: Option<u32>,
    pub s: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub alpha: Option<Vec<i64>>,
    pub beta: Option<i64>,
    pub box_x: Option<f64>,
    pub box_t: Option<f64>,
    pub n_x: Option<usize>,
    pub n_t: Option<usize>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub ppo: Option<usize>,
    pub family: Option<Family>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub band_lo: Option<i32>,
    pub band_hi: Option<i32>,
    pub scales: Option<Vec<i32>>,
}

macro_rules! take_later {
    ($a:expr, $b:expr, $($f:ident),*) => {
        $( if $b.$f.is_some() { $a.$f = $b.$f.clone(); } )*
    };
}

impl Overrides {
    /// Reads a flat TOML file whose keys are the field names above.
    pub fn from_toml_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn merge(mut self, later: &Overrides) -> Self {
        take_later!(
            self, later, experiment, d, m, s, p, q, alpha, beta, box_x, box_t, n_x, n_t, x_min, x_max, ppo,
            family, trials, seed, band_lo, band_hi, scales
        );
        self
    }

    /// Fills unset fields with defaults and validates the result.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let experiment = self
            .experiment
            .ok_or_else(|| Error::Config("experiment not set".into()))?;
        let d = self.d.unwrap_or(1);
        let m = self.m.unwrap_or(1);
        let family = self.family.unwrap_or(Family::RandomBandlimited);
        let (bx, bt, nx, nt) = if experiment == Experiment::Decay {
            super::decay_grid(d)
        } else {
            family.default_grid(d)
        };
        let p = self.p.unwrap_or(2.0);
        let (alpha, beta) = match (&self.alpha, self.beta) {
            (None, None) => {
                let mut a = vec![0; d];
                a[d - 1] = m as i64;
                (a, 0)
            }
            (a, b) => (a.clone().unwrap_or_else(|| vec![0; d]), b.unwrap_or(0)),
        };
        let quad = match (self.x_min, self.x_max, self.ppo) {
            (None, None, None) => None,
            (Some(a), Some(b), ppo) => Some((a, b, ppo.unwrap_or(8))),
            _ => return Err(Error::Config("quadrature needs both x_min and x_max".into())),
        };
        let cfg = ExperimentConfig {
            experiment,
            d,
            m: if experiment == Experiment::Decay { self.m.unwrap_or(2) } else { m },
            s: self.s.unwrap_or(2.0 * m as f64),
            p,
            q: self.q.unwrap_or(p),
            alpha,
            beta,
            box_x: self.box_x.unwrap_or(bx),
            box_t: self.box_t.unwrap_or(bt),
            n_x: self.n_x.unwrap_or(nx),
            n_t: self.n_t.unwrap_or(nt),
            quad,
            family,
            trials: self.trials.unwrap_or(10),
            seed: self.seed.unwrap_or(0),
            band_lo: self.band_lo.unwrap_or(0),
            band_hi: self.band_hi.unwrap_or(3),
            scales: self.scales.clone().unwrap_or_else(|| (0..=4).collect()),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ExperimentConfig {
    /// Defaults for `experiment` in dimension `d`.
    pub fn new(experiment: Experiment, d: usize) -> Result<Self> {
        Overrides {
            experiment: Some(experiment),
            d: Some(d),
            ..Default::default()
        }
        .resolve()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.d == 0 {
            return bad("d must be >= 1".into());
        }
        if self.p.is_nan() || self.p < 1.0 {
            return bad(format!("p = {} must be >= 1", self.p));
        }
        if self.q.is_nan() || self.q < 1.0 {
            return bad(format!("q = {} must be >= 1", self.q));
        }
        let finite_p = self.p.is_finite();
        match self.experiment {
            Experiment::Regularity | Experiment::NeumannVariant | Experiment::CorollarySobolev if !finite_p => {
                return bad(format!("{} needs p < infinity", self.experiment));
            }
            Experiment::CorollaryBessel if !(finite_p && self.p > 1.0 && self.s >= 0.0) => {
                return bad("bessel branch needs 1 < p < infinity and s >= 0".into());
            }
            Experiment::CorollaryBesov if !(finite_p && self.s > 0.0) => {
                return bad("besov branch needs p < infinity and s > 0".into());
            }
            _ => {}
        }
        if matches!(self.experiment, Experiment::Regularity | Experiment::NeumannVariant) {
            let idx = self.index()?;
            if idx.order() != self.m {
                return bad(format!(
                    "|alpha| + 2 beta = {} differs from m = {}",
                    idx.order(),
                    self.m
                ));
            }
        }
        if self.trials == 0 && self.experiment != Experiment::Decay {
            return bad("trials must be >= 1".into());
        }
        if self.family == Family::DyadicBlock && self.scales.is_empty() {
            return bad("dyadic_block needs at least one scale".into());
        }
        if self.band_lo > self.band_hi {
            return bad(format!("empty band range [{}, {}]", self.band_lo, self.band_hi));
        }
        if self.family == Family::CaloricTrace && self.d > 2 {
            return bad("caloric_trace family supports d <= 2".into());
        }
        self.grid()?;
        self.quadrature_for(&self.grid()?)?;
        Ok(())
    }

    pub fn index(&self) -> Result<MultiIndex> {
        if self.alpha.len() != self.d {
            return Err(Error::Config(format!(
                "alpha has {} entries, expected d = {}",
                self.alpha.len(),
                self.d
            )));
        }
        MultiIndex::new(&self.alpha, self.beta)
    }

    /// Base grid; `dyadic_block` trials run on its dilations.
    pub fn grid(&self) -> Result<Grid<f64>> {
        Grid::new(self.d, self.box_x, self.box_t, self.n_x, self.n_t)
    }

    pub fn quadrature_for(&self, grid: &Grid<f64>) -> Result<QuadratureSpec<f64>> {
        match self.quad {
            Some((a, b, ppo)) => QuadratureSpec::new(a, b, ppo),
            None => Ok(QuadratureSpec::for_grid(grid)),
        }
    }

    /// Smoothness written to the `m_or_s` column.
    pub fn m_or_s(&self) -> f64 {
        if self.experiment.uses_s() {
            self.s
        } else {
            self.m as f64
        }
    }

    /// Canonical TOML rendering; the report hash is taken over these bytes.
    pub fn canonical_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
