//! Boundary-data families used by the experiments.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::{Grid, SampledField, SpectralField};
use crate::lp_bank::band_weight_at_radius;
use crate::oracle::CaloricReference;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// One Littlewood-Paley band with random phases.
    DyadicBlock,
    /// Space-time Gaussian with random center and width, mean subtracted.
    GaussianBump,
    /// Uniform random coefficients weighted by bands `lo..=hi`.
    RandomBandlimited,
    /// Windowed boundary trace of a translated heat kernel, mean subtracted.
    CaloricTrace,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::DyadicBlock,
        Family::GaussianBump,
        Family::RandomBandlimited,
        Family::CaloricTrace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::DyadicBlock => "dyadic_block",
            Family::GaussianBump => "gaussian_bump",
            Family::RandomBandlimited => "random_bandlimited",
            Family::CaloricTrace => "caloric_trace",
        }
    }

    /// Grid `(box_x, box_t, n_x, n_t)` used when the configuration leaves it
    /// open. For `dyadic_block` this is the grid of band 0.
    pub fn default_grid(self, d: usize) -> (f64, f64, usize, usize) {
        use std::f64::consts::PI;
        match (self, d) {
            (Family::DyadicBlock, 1) => (0.0, 128.0, 1, 256),
            (Family::DyadicBlock, _) => (32.0, 128.0, 32, 256),
            (Family::GaussianBump, 1) => (0.0, 64.0, 1, 256),
            (Family::GaussianBump, _) => (16.0, 64.0, 64, 256),
            (Family::RandomBandlimited, 1) => (0.0, 4.0 * PI, 1, 1024),
            (Family::RandomBandlimited, 2) => (2.0 * PI, 4.0 * PI, 32, 1024),
            (Family::RandomBandlimited, _) => (2.0 * PI, 4.0 * PI, 32, 256),
            (Family::CaloricTrace, 1) => (0.0, 64.0, 1, 4096),
            (Family::CaloricTrace, _) => (32.0, 64.0, 128, 4096),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown family '{s}'")))
    }
}

/// Real part of the inverse transform of `coeffs`, with the mean removed.
/// Zero and Nyquist modes must already be zero so the band content survives.
fn real_field(grid: Grid<f64>, coeffs: Vec<Complex64>) -> Result<SampledField<f64>> {
    let f = SpectralField::new(grid, coeffs)?.inverse();
    let re = f.values().iter().map(|v| Complex64::new(v.re, 0.0)).collect();
    Ok(SampledField::new(grid, re)?.mean_free())
}

/// Random coefficients with unit-modulus phases times the summed weights of
/// bands `lo..=hi`.
fn weighted_random(grid: Grid<f64>, lo: i32, hi: i32, rng: &mut ChaCha8Rng, unit: bool) -> Result<SampledField<f64>> {
    let lat = grid.lattice();
    let coeffs = (0..grid.len())
        .map(|k| {
            let c = if unit {
                Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
            } else {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            };
            if k == 0 || lat.is_nyquist(k) {
                return Complex64::new(0.0, 0.0);
            }
            let w: f64 = (lo..=hi).map(|j| band_weight_at_radius(j, lat.radius(k))).sum();
            c * w
        })
        .collect();
    real_field(grid, coeffs)
}

/// Band-`j` block with random phases.
pub fn dyadic_block(grid: Grid<f64>, j: i32, rng: &mut ChaCha8Rng) -> Result<SampledField<f64>> {
    weighted_random(grid, j, j, rng, true)
}

pub fn random_bandlimited(grid: Grid<f64>, lo: i32, hi: i32, rng: &mut ChaCha8Rng) -> Result<SampledField<f64>> {
    if lo > hi {
        return Err(Error::Config(format!("empty band range [{lo}, {hi}]")));
    }
    weighted_random(grid, lo, hi, rng, false)
}

/// `exp(-|x' - c|^2 / 2 sigma^2 - (t - c_t)^2 / 2 sigma^4)` with
/// `sigma` in `[0.75, 1.5]` and centers within an eighth of the box.
pub fn gaussian_bump(grid: Grid<f64>, rng: &mut ChaCha8Rng) -> Result<SampledField<f64>> {
    let sigma: f64 = rng.gen_range(0.75..1.5);
    let center: Vec<f64> = (0..grid.spatial_dims())
        .map(|_| rng.gen_range(-0.125..0.125) * grid.box_x())
        .collect();
    let c_t = rng.gen_range(-0.125..0.125) * grid.box_t();
    let (s2, s4) = (sigma * sigma, sigma.powi(4));
    let f = SampledField::from_real_fn(grid, |x, t| {
        let r2: f64 = x.iter().zip(&center).map(|(a, b)| (a - b) * (a - b)).sum();
        (-r2 / (2.0 * s2) - (t - c_t) * (t - c_t) / (2.0 * s4)).exp()
    });
    Ok(f.mean_free())
}

/// Trace of `Gamma(x' - y0', x_d + 1/2, t - t0)` cut off smoothly two time
/// units after `t0`, with `y0'` and `t0` drawn near the box center.
pub fn caloric_trace(grid: Grid<f64>, rng: &mut ChaCha8Rng) -> Result<SampledField<f64>> {
    let center: Vec<f64> = (0..grid.spatial_dims()).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let t0 = rng.gen_range(-0.5..0.5);
    let w = CaloricReference::new(0.5, center, t0)?;
    Ok(w.windowed_trace(&grid, t0 + 2.0, 1.0)?.mean_free())
}
