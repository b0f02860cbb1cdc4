mod common;

use std::f64::consts::PI;

use common::*;
use halfspace_heat::grid::{Grid, SampledField, SpectralField};
use halfspace_heat::lp_bank::*;
use halfspace_heat::multiplier::root;
use halfspace_heat::Error;
use num_complex::Complex64;
use rand::Rng;

#[test]
fn profile_support_and_partition() {
    assert_eq!(profile(0.5f64), 0.0);
    assert_eq!(profile(2.0f64), 0.0);
    assert!(profile(1.0f64) > 0.0);
    let mut r = rng(1);
    for _ in 0..10_000 {
        let x: f64 = 2f64.powf(r.gen_range(-20.0..20.0));
        let sum: f64 = (-30..=30).map(|k| band_weight_at_radius(k, x)).sum();
        assert!((sum - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn radius_on_power_of_two_touches_three_bands() {
    for j in [-3, 0, 5] {
        let r = 2f64.powi(j);
        let w: Vec<f64> = (j - 3..=j + 3).map(|k| band_weight_at_radius(k, r)).collect();
        assert!((w[2] + w[3] + w[4] - 1.0).abs() < 1e-14);
        assert!(w[0] == 0.0 && w[1] == 0.0 && w[5] == 0.0 && w[6] == 0.0);
    }
}

#[test]
fn outside_annulus_weight_vanishes() {
    let j = 2;
    // r = 3 * 2^j lies beyond 2^{(j-1)+1}.
    let tau: f64 = (3.0 * 4.0f64).powi(2);
    assert_eq!(band_weight(j - 1, &[], tau), 0.0);
    assert_eq!(band_weight(j - 1, &[12.0], 0.0), 0.0);
}

#[test]
fn random_frequencies_sum_to_one() {
    let mut r = rng(2);
    for _ in 0..10_000 {
        let xi = [r.gen_range(-50.0..50.0), r.gen_range(-50.0..50.0)];
        let tau = r.gen_range(-500.0..500.0);
        let s: f64 = (-10..=12).map(|j| band_weight(j, &xi, tau)).sum();
        assert!((s - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn active_band_examples() {
    let g = Grid::<f64>::time_only(2.0 * PI, 8).unwrap();
    assert_eq!(active_bands(&g), (0, 1));
    let j_max = |n: usize| active_bands(&Grid::<f64>::time_only(2.0 * PI, n).unwrap()).1;
    // r_max = sqrt(n/2): one band per two doublings.
    assert_eq!(j_max(32), 2);
    assert_eq!(j_max(64), 3);
    assert_eq!(j_max(128), 3);
    assert_eq!(j_max(256), 4);
    let (lo1, _) = active_bands(&Grid::<f64>::time_only(2.0 * PI, 64).unwrap());
    let (lo2, _) = active_bands(&Grid::<f64>::time_only(8.0 * PI, 64).unwrap());
    assert_eq!(lo2, lo1 - 1);
}

#[test]
fn active_bands_cover_all_weight() {
    for g in [
        Grid::<f64>::new(2, 5.0, 9.0, 16, 32).unwrap(),
        Grid::<f64>::time_only(17.0, 64).unwrap(),
    ] {
        let (lo, hi) = active_bands(&g);
        let lat = g.lattice();
        for k in 1..g.len() {
            let r = lat.radius(k);
            assert!(r > 2f64.powi(lo - 1) && r < 2f64.powi(hi + 1));
            let s: f64 = (lo..=hi).map(|j| band_weight_at_radius(j, r)).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn band_application() {
    let g = Grid::<f64>::new(2, 2.0 * PI, 2.0 * PI, 16, 64).unwrap();
    let bank = DyadicBank::new(&g);
    let (lo, hi) = bank.j_range();
    let zero = SpectralField::zeros(g);
    assert!(bank.apply(lo, &zero).unwrap().coeffs().iter().all(|c| c.norm() == 0.0));
    assert!(matches!(bank.apply(hi + 1, &zero), Err(Error::BandOutOfRange { .. })));
    // Plane wave with r = 2^2: xi' = 0, tau = 16.
    let wave = SampledField::from_fn(g, |_, t| Complex64::from_polar(1.0, 16.0 * t)).forward();
    let sum = (1..=3).fold(SpectralField::zeros(g), |a, j| a.add(&bank.apply(j, &wave).unwrap()).unwrap());
    assert!(max_diff(sum.coeffs(), wave.coeffs()) < 1e-12 * max_abs(wave.coeffs()));
    let u = random_field(g, 3).mean_free().forward();
    let total = bank.bands().fold(SpectralField::zeros(g), |a, j| a.add(&bank.apply(j, &u).unwrap()).unwrap());
    assert!(max_diff(total.inverse().values(), u.inverse().values()) <= 1e-12 * max_abs(u.inverse().values()));
    for j in bank.bands() {
        let b = bank.apply(j, &u).unwrap();
        assert!(b.l2_norm_sq() <= u.l2_norm_sq());
    }
}

#[test]
fn bands_commute_with_symbols() {
    let g = Grid::<f64>::new(2, 7.0, 11.0, 8, 32).unwrap();
    let lat = g.lattice();
    let u = random_field(g, 4).forward();
    let bank = DyadicBank::new(&g);
    let j = bank.j_range().0 + 1;
    let m = |f: &SpectralField<f64>| f.map_modes(&lat, |k, l| root(l.xi(k), l.tau(k)));
    let a = m(&bank.apply(j, &u).unwrap());
    let b = bank.apply(j, &m(&u)).unwrap();
    assert!(max_diff(a.coeffs(), b.coeffs()) <= 1e-12 * max_abs(a.coeffs()));
}

#[test]
fn dyadic_covariance_is_bitwise() {
    let coarse = Grid::<f64>::new(2, 6.0, 10.0, 8, 32).unwrap();
    let fine = coarse.dilated(1);
    let (a, b) = (DyadicBank::new(&coarse), DyadicBank::new(&fine));
    assert_eq!(b.j_range(), (a.j_range().0 + 1, a.j_range().1 + 1));
    for j in a.bands() {
        assert_eq!(a.weights(j).unwrap(), b.weights(j + 1).unwrap());
    }
}
