mod common;

use std::f64::consts::PI;

use common::*;
use halfspace_heat::grid::{Grid, SampledField};
use halfspace_heat::lp_bank::*;
use halfspace_heat::multiplier::*;
use halfspace_heat::norms::{besov_norm, bessel_norm, sobolev_norm};
use halfspace_heat::oracle::CaloricReference;
use halfspace_heat::solver::*;
use halfspace_heat::{Grid32, SampledField32};
use num_complex::Complex64;
use proptest::prelude::*;

fn small_grid(d: usize) -> Grid<f64> {
    match d {
        1 => Grid::time_only(4.0 * PI, 32).unwrap(),
        2 => Grid::new(2, 2.0 * PI, 4.0 * PI, 8, 16).unwrap(),
        _ => Grid::new(3, 2.0 * PI, 4.0 * PI, 8, 8).unwrap(),
    }
}

fn freq() -> impl Strategy<Value = (Vec<f64>, f64)> {
    (prop::collection::vec(-50.0f64..50.0, 0..3), -500.0f64..500.0)
        .prop_filter("nonzero", |(xi, tau)| xi.iter().any(|x| x.abs() > 1e-3) || tau.abs() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_roundtrip_parseval_linearity(d in 1usize..4, seed in any::<u64>(), a in -3.0f64..3.0) {
        let g = small_grid(d);
        let u = random_field(g, seed);
        let w = random_field(g, seed ^ 0x5555);
        let back = u.forward().inverse();
        prop_assert!(max_diff(back.values(), u.values()) <= 1e-12 * max_abs(u.values()));
        let l2 = u.lp_norm(2.0).unwrap().powi(2);
        prop_assert!((l2 - u.forward().l2_norm_sq()).abs() <= 1e-10 * l2);
        let lhs = u.scaled(a).add(&w).unwrap().forward();
        let rhs = u.forward().scaled(Complex64::new(a, 0.0)).add(&w.forward()).unwrap();
        prop_assert!(max_diff(lhs.coeffs(), rhs.coeffs()) <= 1e-12 * max_abs(rhs.coeffs()));
    }

    #[test]
    fn partition_of_unity(r in 1e-3f64..1e4) {
        let (lo, hi) = bands_at_radius(r);
        let sum: f64 = (lo - 1..=hi + 1).map(|j| band_weight_at_radius(j, r)).sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        for j in lo - 1..=hi + 1 {
            let w = band_weight_at_radius(j, r);
            prop_assert!((0.0..=1.0).contains(&w));
        }
    }

    #[test]
    fn bands_commute_with_multipliers(seed in any::<u64>(), s in -2.0f64..2.0) {
        let g = small_grid(2);
        let gh = random_field(g, seed).forward();
        let bank = DyadicBank::new(&g);
        let m = ParabolicSymbol::FracPow(s);
        let gh0 = gh.map_modes(&g.lattice(), |k, _| Complex64::new(if k == 0 { 0.0 } else { 1.0 }, 0.0));
        for j in bank.bands() {
            let a = m.apply(&bank.apply(j, &gh0).unwrap()).unwrap();
            let b = bank.apply(j, &m.apply(&gh0).unwrap()).unwrap();
            prop_assert!(max_diff(a.coeffs(), b.coeffs()) <= 1e-12 * max_abs(b.coeffs()).max(1e-300));
            prop_assert!(bank.apply(j, &gh0).unwrap().l2_norm_sq() <= gh0.l2_norm_sq() * (1.0 + 1e-14));
        }
    }

    #[test]
    fn root_branch_and_conjugate_symmetry((xi, tau) in freq()) {
        let z = root(&xi, tau);
        let sq: f64 = xi.iter().map(|x| x * x).sum();
        let target = Complex64::new(sq, tau);
        prop_assert!((z * z - target).norm() <= 1e-13 * target.norm());
        prop_assert!(z.re >= 0.0);
        prop_assert_eq!(root(&xi, -tau), z.conj());
    }

    #[test]
    fn symbols_are_parabolically_homogeneous(
        (xi, tau) in freq(),
        lam in prop::sample::select(vec![2.0f64, 4.0]),
        s in -2.0f64..3.0,
        alpha in prop::collection::vec(0i64..3, 0..3),
        beta in 0i64..2,
        x_d in 0.0f64..2.0,
    ) {
        let sx: Vec<f64> = xi.iter().map(|x| lam * x).collect();
        let st = lam * lam * tau;
        let close = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-12 * b.norm().max(1e-300);
        prop_assert!(close(root(&sx, st), root(&xi, tau) * lam));
        let f = frac_power(s, &xi, tau).unwrap();
        prop_assert!(close(frac_power(s, &sx, st).unwrap(), f * lam.powf(s)));
        let mut a = alpha.clone();
        a.resize(xi.len() + 1, 0);
        let idx = MultiIndex::new(&a, beta).unwrap();
        let p = deriv_symbol(&idx, &xi, tau).unwrap();
        prop_assert!(close(deriv_symbol(&idx, &sx, st).unwrap(), p * lam.powi(idx.order() as i32)));
        // Poisson symbol is invariant when depth scales inversely.
        let e = poisson_symbol(x_d, &xi, tau).unwrap();
        prop_assert!(close(poisson_symbol(x_d / lam, &sx, st).unwrap(), e));
    }

    #[test]
    fn norms_are_absolutely_homogeneous(seed in 0u64..1000, c in 0.1f64..10.0, phase in 0.0f64..std::f64::consts::TAU) {
        let g = small_grid(2);
        let u = banded_field(g, 0, 2, seed);
        let cu = SampledField::new(g, u.values().iter().map(|v| v * Complex64::from_polar(c, phase)).collect()).unwrap();
        prop_assert!(rel_close(besov_norm(&cu, 0.7, 2.0, 3.0).unwrap(), c * besov_norm(&u, 0.7, 2.0, 3.0).unwrap(), 1e-12));
        prop_assert!(rel_close(bessel_norm(&cu, 1.2, 3.0).unwrap(), c * bessel_norm(&u, 1.2, 3.0).unwrap(), 1e-12));
        let q = QuadratureSpec::for_grid(&g);
        let a = sobolev_norm(&solve_dirichlet(&cu, &q).unwrap(), 1, 2.0).unwrap();
        let b = sobolev_norm(&solve_dirichlet(&u, &q).unwrap(), 1, 2.0).unwrap();
        prop_assert!(rel_close(a, c * b, 1e-12));
    }

    #[test]
    fn poisson_semigroup_and_caloric_slices(seed in 0u64..1000, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let g = small_grid(2);
        let u = banded_field(g, 0, 2, seed);
        let v = solve_dirichlet(&u, &QuadratureSpec::for_grid(&g)).unwrap();
        let sa = v.slice_at(a).unwrap();
        let lat = g.lattice();
        let moved = sa.map_modes(&lat, |k, l| poisson_symbol(b, l.xi(k), l.tau(k)).unwrap());
        let sab = v.slice_at(a + b).unwrap();
        prop_assert!(max_diff(moved.coeffs(), sab.coeffs()) <= 1e-12 * max_abs(sab.coeffs()));
        // Heat residual per slice: (i tau + |xi'|^2) v = d_d^2 v.
        let dd = derivative_field(&v, &MultiIndex::normal(2, 2)).unwrap();
        for i in (0..v.len()).step_by(7) {
            let s = v.slice(i);
            let lhs = s.map_modes(&lat, |k, l| Complex64::new(l.xi_sq(k), l.tau(k)));
            let rhs = dd.slice(i);
            prop_assert!(max_diff(lhs.coeffs(), rhs.coeffs()) <= 1e-12 * max_abs(rhs.coeffs()).max(1e-300));
            prop_assert!(s.inverse().max_imag() <= 1e-10 * s.inverse().max_abs().max(1e-300));
        }
    }

    #[test]
    fn caloric_reference_residual(x in -2.0f64..2.0, x_d in 0.05f64..2.0, t in 0.5f64..4.0) {
        let w = CaloricReference::new(0.5, vec![0.0], 0.0).unwrap();
        let scale = w.value(&[0.0], 0.0, 0.5);
        prop_assert!(w.heat_residual(&[x], x_d, t, 2e-4).abs() <= 1e-6 * scale);
    }
}

#[test]
fn single_precision_pipeline() {
    let g = Grid32::new(2, std::f32::consts::TAU, 2.0 * std::f32::consts::TAU, 8, 16).unwrap();
    let u = SampledField32::from_real_fn(g, |x, t| x[0].sin() * (0.5 * t).cos());
    let back = u.forward().inverse();
    let err = back
        .values()
        .iter()
        .zip(u.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f32, f32::max);
    assert!(err <= 1e-5);
    let n = halfspace_heat::norms::besov_norm(&u.mean_free(), 0.5f32, 2.0, 2.0).unwrap();
    assert!(n.is_finite() && n > 0.0);
}
