mod common;

use std::f64::consts::PI;

use common::*;
use halfspace_heat::grid::{Grid, SampledField};
use halfspace_heat::lp_bank::{band_weight_at_radius, DyadicBank};
use halfspace_heat::multiplier::{frac_power, root, MultiIndex};
use halfspace_heat::norms::*;
use halfspace_heat::solver::*;
use halfspace_heat::Error;
use num_complex::Complex64;

fn grid1() -> Grid<f64> {
    Grid::time_only(16.0 * PI, 256).unwrap()
}

fn grid2() -> Grid<f64> {
    Grid::new(2, 4.0 * PI, 8.0 * PI, 16, 128).unwrap()
}

#[test]
fn zero_and_mean_handling() {
    let g = grid2();
    let z = SampledField::zeros(g);
    assert_eq!(besov_norm(&z, 0.5, 2.0, 2.0).unwrap(), 0.0);
    assert_eq!(bessel_norm(&z, 0.5, 2.0).unwrap(), 0.0);
    let one = SampledField::from_real_fn(g, |_, _| 1.0);
    assert!(matches!(besov_norm(&one, 0.5, 2.0, 2.0), Err(Error::Degenerate(_))));
    assert!(matches!(bessel_norm(&one, 0.5, 2.0), Err(Error::Degenerate(_))));
    assert!(besov_norm(&z, 0.5, 0.5, 2.0).is_err());
}

#[test]
fn resonant_wave_three_band_formula() {
    // r = 2^2 from tau = 16 on a grid with tau step 1/4.
    let g = grid2();
    let wave = SampledField::from_fn(g, |_, t| Complex64::from_polar(1.0, 16.0 * t));
    let j0 = 2;
    for (s, p, q) in [(0.5, 2.0, 2.0), (1.5, 1.0, 3.0), (-0.5, 4.0, 1.0)] {
        let lp = wave.lp_norm(p).unwrap();
        let sum: f64 = (-1..=1)
            .map(|k| (band_weight_at_radius(j0 + k, 4.0) * 2f64.powf(k as f64 * s)).powf(q))
            .sum();
        let expect = 2f64.powf(j0 as f64 * s) * lp * sum.powf(1.0 / q);
        let got = besov_norm(&wave, s, p, q).unwrap();
        assert!(rel_close(got, expect, 1e-12), "{got} vs {expect}");
    }
    let sup = besov_norm(&wave, 0.5, 2.0, f64::INFINITY).unwrap();
    let expect = (-1..=1)
        .map(|k| 2f64.powf((j0 + k) as f64 * 0.5) * band_weight_at_radius(j0 + k, 4.0))
        .fold(0.0, f64::max)
        * wave.lp_norm(2.0).unwrap();
    assert!(rel_close(sup, expect, 1e-12));
}

#[test]
fn besov_dilation_law() {
    for (d, g) in [(1usize, grid1()), (2, grid2())] {
        let u = banded_field(g, 0, 2, 21);
        for (s, p) in [(0.5, 1.0), (1.0, 2.0), (1.5, 4.0)] {
            let base = besov_norm(&u, s, p, p).unwrap();
            for k in -2..=2 {
                let scaled = besov_norm(&u.dilated(k), s, p, p).unwrap();
                let factor = 2f64.powf(k as f64 * (s - (d as f64 + 1.0) / p));
                assert!(rel_close(scaled, base * factor, 1e-10), "d={d} k={k}");
            }
        }
    }
}

#[test]
fn band_truncation_and_parseval() {
    let g = grid2();
    let u = banded_field(g, -1, 3, 22);
    let gh = u.forward();
    let terms = band_lp_norms(&gh, 2.0).unwrap();
    let s = 0.7;
    let full = combine_bands(&terms, s, 2.0);
    let (idx, weakest) = terms
        .iter()
        .enumerate()
        .map(|(i, &(j, a))| (i, 2f64.powf(j as f64 * s) * a))
        .fold((0, f64::INFINITY), |m, (i, v)| if v < m.1 { (i, v) } else { m });
    let mut dropped = terms.clone();
    dropped.remove(idx);
    let part = combine_bands(&dropped, s, 2.0);
    assert!(full - part <= weakest + 1e-15 && part <= full);
    // Band energies two ways.
    let bank = DyadicBank::new(&g);
    let spectral: f64 = bank
        .bands()
        .map(|j| 2f64.powf(2.0 * j as f64 * s) * bank.apply(j, &gh).unwrap().l2_norm_sq())
        .sum();
    assert!(rel_close(full * full, spectral, 1e-9));
}

#[test]
fn bessel_examples() {
    let g = grid2();
    let u = banded_field(g, 0, 2, 23);
    assert!(rel_close(bessel_norm(&u, 0.0, 3.0).unwrap(), u.lp_norm(3.0).unwrap(), 1e-12));
    let (xi, tau) = (1.5, -3.25);
    let wave = SampledField::from_fn(g, |x, t| Complex64::from_polar(2.0, xi * x[0] + tau * t));
    for (s, p) in [(0.5, 2.0), (2.0, 3.0), (-1.0, 1.0)] {
        let m = frac_power(s, &[xi], tau).unwrap().norm();
        assert!(rel_close(bessel_norm(&wave, s, p).unwrap(), m * wave.lp_norm(p).unwrap(), 1e-12));
    }
    let gh = u.forward();
    let lat = g.lattice();
    let spec: f64 = (1..g.len())
        .map(|k| (frac_power(0.8, lat.xi(k), lat.tau(k)).unwrap() * gh.coeffs()[k]).norm_sqr())
        .sum::<f64>()
        / g.volume();
    assert!(rel_close(bessel_norm(&u, 0.8, 2.0).unwrap(), spec.sqrt(), 1e-10));
}

#[test]
fn bessel_besov_two_two_ratio_is_stable() {
    let g = grid2();
    let ratios: Vec<f64> = (0..20)
        .map(|i| {
            let u = banded_field(g, -1, 3, 100 + i);
            bessel_norm(&u, 1.0, 2.0).unwrap() / besov_norm(&u, 1.0, 2.0, 2.0).unwrap()
        })
        .collect();
    let gm = (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp();
    assert!(ratios.iter().all(|r| (r / gm - 1.0).abs() <= 0.05));
}

#[test]
fn sobolev_single_mode_closed_form() {
    let g = grid2();
    let (xi, tau) = (1.0, 2.5);
    let wave = SampledField::from_fn(g, |x, t| Complex64::from_polar(1.0, xi * x[0] + tau * t));
    let q = QuadratureSpec::new(1e-4, 60.0, 16).unwrap();
    let v = solve_dirichlet(&wave, &q).unwrap();
    let z = root(&[xi], tau);
    for (m, p) in [(0u32, 2.0), (1, 1.0), (1, 3.0), (2, 2.0)] {
        let mut expect = 0.0;
        for mi in MultiIndex::all_of_order(2, 2 * m) {
            let pm = halfspace_heat::multiplier::deriv_symbol(&mi, &[xi], tau).unwrap().norm();
            expect += pm * (g.volume() / (p * z.re)).powf(1.0 / p);
        }
        let got = sobolev_norm(&v, m, p).unwrap();
        assert!(rel_close(got, expect, 1e-6), "m={m} p={p}: {got} vs {expect}");
    }
    assert!(rel_close(sobolev_norm(&v, 0, 3.0).unwrap(), interior_lp_norm(&v, 3.0).unwrap(), 1e-15));
    let v2 = solve_dirichlet(&wave.scaled(2.0), &q).unwrap();
    assert!(rel_close(sobolev_norm(&v2, 1, 2.0).unwrap(), 2.0 * sobolev_norm(&v, 1, 2.0).unwrap(), 1e-12));
}

#[test]
fn interior_norms_on_poisson_profiles() {
    let g = grid2();
    let u = banded_field(g, 0, 2, 24);
    let q = QuadratureSpec::for_grid(&g);
    let v = solve_dirichlet(&u, &q).unwrap();
    // Tangential (|xi'|^2 + i tau) equals root^2 = d_d^2 on the profile.
    let b2 = interior_bessel_norm(&v, 2.0, 2.0).unwrap();
    let dd = interior_lp_norm(&derivative_field(&v, &MultiIndex::normal(2, 2)).unwrap(), 2.0).unwrap();
    assert!(rel_close(b2, dd, 1e-12));
    let ib = interior_besov_norm(&v, 1.0, 2.0, 2.0).unwrap();
    assert!(ib > 0.0 && ib.is_finite());
    let spec = NormSpec::Sobolev { m: 1, p: 2.0 };
    assert!(rel_close(spec.interior(&v).unwrap(), sobolev_norm(&v, 1, 2.0).unwrap(), 1e-15));
    assert!(spec.boundary(&u).is_err());
}

#[test]
fn full_band_cross_check_bounds_the_tangential_realization() {
    let g = Grid::<f64>::new(2, 16.0, 16.0, 16, 16).unwrap();
    let q = QuadratureSpec::for_grid(&g);
    let mut ratios = Vec::new();
    for seed in 0..4 {
        let u = banded_field(g, 0, 1, 300 + seed);
        let v = solve_dirichlet(&u, &q).unwrap();
        let full = full_band_besov_norm(&v, 0.5, 2.0, 2.0, 16.0, 16).unwrap();
        let tan = interior_besov_norm(&v, 0.5, 2.0, 2.0).unwrap();
        ratios.push(full / tan);
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |m, r| (m.0.min(*r), m.1.max(*r)));
    assert!(lo > 0.25 && hi < 4.0 && hi / lo < 1.5, "{ratios:?}");
}

#[test]
fn gagliardo_examples() {
    let g = Grid::<f64>::time_only(64.0, 4096).unwrap();
    let z = SampledField::zeros(g);
    assert_eq!(gagliardo_seminorm_1d(&z, 0.5, 2.0).unwrap().value, 0.0);
    assert!(matches!(gagliardo_seminorm_1d(&z, 1.0, 2.0), Err(Error::Unsupported(_))));
    let bump = |c: f64| SampledField::from_real_fn(g, move |_, t| (t - c) * (-(t - c) * (t - c)).exp());
    let h = g.spacing(0);
    let a = gagliardo_seminorm_1d(&bump(0.0), 0.5, 2.0).unwrap();
    let b = gagliardo_seminorm_1d(&bump(37.0 * h), 0.5, 2.0).unwrap();
    assert!(rel_close(a.value, b.value, 1e-10));
    assert!(a.excluded_mass < 1e-2 * a.value.powi(2));
    let c = gagliardo_seminorm_1d(&bump(0.0), 1.3, 3.0).unwrap();
    assert!(c.value > 0.0 && c.value.is_finite());
}

#[test]
fn gagliardo_tracks_besov_across_dilations() {
    let g = Grid::<f64>::time_only(64.0, 4096).unwrap();
    let ratios: Vec<f64> = [1.0, 2.0, 4.0]
        .iter()
        .map(|&l| {
            let u = SampledField::from_real_fn(g, move |_, t| (l * t) * (-(l * t) * (l * t)).exp());
            // Time smoothness 1/2 is anisotropic index 1.
            gagliardo_seminorm_1d(&u, 0.5, 2.0).unwrap().value / besov_norm(&u, 1.0, 2.0, 2.0).unwrap()
        })
        .collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |m, r| (m.0.min(*r), m.1.max(*r)));
    assert!(hi / lo <= 1.1, "{ratios:?}");
}

#[test]
fn hurwitz_zeta_values() {
    // zeta(2, 1) = pi^2 / 6, zeta(2, 1/2) = pi^2 / 2.
    assert!(rel_close(hurwitz_zeta(2.0, 1.0), PI * PI / 6.0, 1e-13));
    assert!(rel_close(hurwitz_zeta(2.0, 0.5), PI * PI / 2.0, 1e-13));
    assert!(rel_close(hurwitz_zeta(3.5, 0.01), 0.01f64.powf(-3.5) + hurwitz_zeta(3.5, 1.01), 1e-13));
}
