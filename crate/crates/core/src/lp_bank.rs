//! Anisotropic Littlewood-Paley bank on the boundary frequency space.
//!
//! Band `j` is the smooth cutoff `phi_j(xi', tau) = rho(2^{-j} r)` with
//! `r = |xi'| + |tau|^{1/2}`, where `rho` is supported in `(1/2, 2)` and the
//! dilates `rho(2^{-k} r)` sum to one for every `r > 0`. The zero frequency
//! belongs to no band.

use crate::error::{Error, Result};
use crate::grid::{Grid, Lattice, SpectralField};
use crate::scalar::{cx, Real};

/// `exp(-1 / (1 - u^2))` on `|u| < 1 - 1e-8`, zero beyond.
pub fn bump<T: Real>(u: T) -> T {
    let a = u.abs();
    if a >= T::one() - T::lit(1e-8) {
        return T::zero();
    }
    (-(T::one() - a * a).recip()).exp()
}

/// The partition profile `rho`. In the log variable `l = log2 x` it is
/// `bump(l) / (bump(f) + bump(f - 1))` with `f` the fractional part of `l`;
/// the denominator is the sum of `bump` over all integer shifts of `l`.
pub fn profile<T: Real>(x: T) -> T {
    if !(x > T::zero()) || !x.is_finite() {
        return T::zero();
    }
    let l = x.log2();
    let num = bump(l);
    if num == T::zero() {
        return T::zero();
    }
    let f = l - l.floor();
    num / (bump(f) + bump(f - T::one()))
}

/// `|xi'| + |tau|^{1/2}`.
pub fn anisotropic_radius<T: Real>(xi: &[T], tau: T) -> T {
    let s = xi.iter().fold(T::zero(), |a, &x| a + x * x);
    s.sqrt() + tau.abs().sqrt()
}

/// `phi_j` at radius `r`. The dilation is by an exact power of two so
/// dyadically related lattices see bit-identical weights.
pub fn band_weight_at_radius<T: Real>(j: i32, r: T) -> T {
    profile(r * T::lit(2.0).powi(-j))
}

/// `phi_j(xi', tau)`.
pub fn band_weight<T: Real>(j: i32, xi: &[T], tau: T) -> T {
    band_weight_at_radius(j, anisotropic_radius(xi, tau))
}

/// Bands that can carry a nonzero weight for radius `r > 0`: `floor(log2 r)`
/// and the one above it.
pub fn bands_at_radius<T: Real>(r: T) -> (i32, i32) {
    let l = r.log2().to_f64_lossy();
    ((l + 1e-9).floor() as i32, (l - 1e-9).ceil() as i32)
}

/// Smallest band interval covering every nonzero frequency of `grid` with
/// positive weight.
pub fn active_bands<T: Real>(grid: &Grid<T>) -> (i32, i32) {
    let (lo, hi) = grid.radius_range();
    (bands_at_radius(lo).0, bands_at_radius(hi).1)
}

/// The bank restricted to the bands seen by one grid.
#[derive(Debug, Clone)]
pub struct DyadicBank<T> {
    j_min: i32,
    j_max: i32,
    grid: Grid<T>,
    lattice: Lattice<T>,
}

impl<T: Real> DyadicBank<T> {
    pub fn new(grid: &Grid<T>) -> Self {
        let (j_min, j_max) = active_bands(grid);
        Self {
            j_min,
            j_max,
            grid: *grid,
            lattice: grid.lattice(),
        }
    }

    pub fn j_range(&self) -> (i32, i32) {
        (self.j_min, self.j_max)
    }

    pub fn bands(&self) -> impl Iterator<Item = i32> {
        self.j_min..=self.j_max
    }

    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    /// Per-mode weights of band `j`.
    pub fn weights(&self, j: i32) -> Result<Vec<T>> {
        self.check_band(j)?;
        Ok((0..self.lattice.len())
            .map(|k| band_weight_at_radius(j, self.lattice.radius(k)))
            .collect())
    }

    fn check_band(&self, j: i32) -> Result<()> {
        if j < self.j_min || j > self.j_max {
            return Err(Error::BandOutOfRange {
                j,
                j_min: self.j_min,
                j_max: self.j_max,
            });
        }
        Ok(())
    }

    /// `Delta_j` applied to coefficients.
    pub fn apply(&self, j: i32, field: &SpectralField<T>) -> Result<SpectralField<T>> {
        if field.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        self.check_band(j)?;
        Ok(field.map_modes(&self.lattice, |k, lat| {
            cx(band_weight_at_radius(j, lat.radius(k)), T::zero())
        }))
    }
}

/// `Delta_j g` for a single band; errors if the grid's lattice never reaches band `j`.
pub fn apply_band<T: Real>(j: i32, field: &SpectralField<T>) -> Result<SpectralField<T>> {
    DyadicBank::new(field.grid()).apply(j, field)
}
