//! Depth quadrature for integrals over `x_d in (0, inf)`.
//!
//! A four-point Gauss-Legendre panel covers `(0, x_min)`; geometric nodes
//! `x_min 2^{k/ppo}` up to `x_max` carry the trapezoid rule in `log x_d` with
//! eighth-order Gregory end corrections. All weights are positive.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lp_bank::active_bands;
use crate::scalar::Real;

const GL4_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL4_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_8,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_8,
];
/// Eighth-order Gregory end weights; all positive.
const GREGORY: [f64; 7] = [
    5257.0 / 17280.0,
    22081.0 / 15120.0,
    54851.0 / 120960.0,
    103.0 / 70.0,
    89437.0 / 120960.0,
    16367.0 / 15120.0,
    23917.0 / 24192.0,
];

/// Geometric depth quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub x_min: T,
    pub x_max: T,
    pub points_per_octave: usize,
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(x_min: T, x_max: T, points_per_octave: usize) -> Result<Self> {
        let q = Self {
            x_min,
            x_max,
            points_per_octave,
        };
        q.validate()?;
        Ok(q)
    }

    /// Default for a grid: `x_min = 2^{-(j_max + 4)}`,
    /// `x_max = ln(1e8) 2^{1 - j_min}`, eight points per octave.
    pub fn for_grid(grid: &Grid<T>) -> Self {
        let (j_min, j_max) = active_bands(grid);
        Self::for_bands(j_min, j_max)
    }

    pub fn for_bands(j_min: i32, j_max: i32) -> Self {
        let two = T::lit(2.0);
        Self {
            x_min: two.powi(-(j_max + 4)),
            x_max: T::lit(1e8f64.ln()) * two.powi(1 - j_min),
            points_per_octave: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min > T::zero()) || !(self.x_max > self.x_min) || !self.x_max.is_finite() {
            return Err(Error::Config(format!(
                "quadrature needs 0 < x_min < x_max, got ({}, {})",
                self.x_min, self.x_max
            )));
        }
        if self.points_per_octave < 2 {
            return Err(Error::Config("points_per_octave must be >= 2".into()));
        }
        Ok(())
    }

    /// Number of geometric intervals; enough that both Gregory ends fit.
    fn intervals(&self) -> usize {
        let octaves = (self.x_max / self.x_min).log2().to_f64_lossy();
        ((octaves * self.points_per_octave as f64).ceil() as usize).max(2 * GREGORY.len())
    }

    /// Nodes (strictly increasing) and weights.
    pub fn nodes_weights(&self) -> Result<(Vec<T>, Vec<T>)> {
        self.validate()?;
        let half = self.x_min / T::lit(2.0);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (x, w) in GL4_NODES.iter().zip(GL4_WEIGHTS.iter()) {
            nodes.push(half + half * T::lit(*x));
            weights.push(half * T::lit(*w));
        }
        let k = self.intervals();
        // Ratio chosen so the last node lands exactly on x_max.
        let h = (self.x_max / self.x_min).ln() / T::from_usize_lossy(k);
        for i in 0..=k {
            let x = if i == k {
                self.x_max
            } else {
                self.x_min * (h * T::from_usize_lossy(i)).exp()
            };
            let end = i.min(k - i);
            let g = if end < GREGORY.len() { T::lit(GREGORY[end]) } else { T::one() };
            nodes.push(x);
            weights.push(h * x * g);
        }
        Ok((nodes, weights))
    }
}
