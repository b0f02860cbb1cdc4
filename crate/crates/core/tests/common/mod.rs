#![allow(dead_code)]

use halfspace_heat::grid::{Grid, SampledField, SpectralField};
use halfspace_heat::lp_bank::band_weight_at_radius;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_field(grid: Grid<f64>, seed: u64) -> SampledField<f64> {
    let mut r = rng(seed);
    SampledField::from_fn(grid, |_, _| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
}

pub fn random_real_field(grid: Grid<f64>, seed: u64) -> SampledField<f64> {
    let mut r = rng(seed);
    SampledField::from_real_fn(grid, |_, _| r.gen_range(-1.0..1.0))
}

/// Real mean-zero field with spectrum on bands `lo..=hi`.
pub fn banded_field(grid: Grid<f64>, lo: i32, hi: i32, seed: u64) -> SampledField<f64> {
    let mut r = rng(seed);
    let lat = grid.lattice();
    let coeffs: Vec<Complex64> = (0..grid.len())
        .map(|k| {
            let w: f64 = (lo..=hi).map(|j| band_weight_at_radius(j, lat.radius(k))).sum();
            let c = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            if k == 0 || lat.is_nyquist(k) {
                Complex64::new(0.0, 0.0)
            } else {
                c * w
            }
        })
        .collect();
    let f = SpectralField::new(grid, coeffs).unwrap().inverse();
    let re: Vec<Complex64> = f.values().iter().map(|v| Complex64::new(v.re, 0.0)).collect();
    SampledField::new(grid, re).unwrap().mean_free()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}
