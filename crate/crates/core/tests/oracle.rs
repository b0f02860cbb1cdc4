mod common;

use std::f64::consts::PI;

use common::*;
use halfspace_heat::grid::{Grid, SampledField};
use halfspace_heat::norms::besov_norm;
use halfspace_heat::oracle::*;
use halfspace_heat::solver::*;

#[test]
fn heat_kernel_values_and_mass() {
    assert_eq!(heat_kernel::<f64>(&[0.3], 0.0), 0.0);
    assert_eq!(heat_kernel::<f64>(&[0.3], -1.0), 0.0);
    assert!(rel_close(heat_kernel(&[0.0], 1.0), 1.0 / (4.0 * PI).sqrt(), 1e-15));
    assert!(rel_close(heat_kernel(&[1.0, 2.0], 0.5), (-2.5f64).exp() / (2.0 * PI), 1e-14));
    assert!(rel_close(heat_kernel_split(&[1.0], 2.0, 0.5), heat_kernel(&[1.0, 2.0], 0.5), 1e-15));
    let h = 0.01;
    let mass: f64 = (-2000..=2000).map(|i| heat_kernel(&[i as f64 * h], 0.7) * h).sum();
    assert!((mass - 1.0).abs() < 1e-12);
}

#[test]
fn caloric_reference_solves_the_heat_equation() {
    let w = CaloricReference::<f64>::new(0.5, vec![0.2], 0.1).unwrap();
    for (x, x_d, t) in [(0.0f64, 0.1f64, 0.5f64), (0.7, 0.4, 1.2), (-1.0, 1.0, 3.0)] {
        let scale = w.value(&[x], x_d, t).abs();
        assert!(w.heat_residual(&[x], x_d, t, 1e-3).abs() <= 1e-5 * scale.max(1e-3));
    }
    assert!(CaloricReference::new(0.0, vec![], 0.0).is_err());
    assert_eq!(w.trace(&[0.0], 0.05), 0.0);
}

#[test]
fn dirichlet_layer_reproduces_caloric_trace() {
    for center in [vec![], vec![0.3]] {
        let w = CaloricReference::new(0.5, center.clone(), 0.0).unwrap();
        let x: Vec<f64> = center.iter().map(|c| c + 0.2).collect();
        for (x_d, t) in [(0.25, 0.5), (0.5, 1.0), (1.0, 2.0)] {
            let got = convolve_function(Layer::Dirichlet, |y, s| w.trace(y, s), &x, x_d, t, t + 1.0, 0.02).unwrap();
            let exact = w.value(&x, x_d, t);
            assert!(rel_close(got, exact, 1e-4), "x_d={x_d} t={t}: {got} vs {exact}");
        }
    }
}

#[test]
fn neumann_layer_reproduces_caloric_flux() {
    let w = CaloricReference::new(0.5, vec![], 0.0).unwrap();
    // Normal derivative of w at the boundary.
    let flux = |_: &[f64], s: f64| if s > 0.0 { -0.5 / (2.0 * s) * w.trace(&[], s) } else { 0.0 };
    for (x_d, t) in [(0.25, 0.5), (0.5, 1.5)] {
        let got = convolve_function(Layer::Neumann, flux, &[], x_d, t, t + 1.0, 0.02).unwrap();
        assert!(rel_close(got, w.value(&[], x_d, t), 1e-4), "{got}");
    }
}

#[test]
fn convolution_matches_spectral_solve_in_small_grids() {
    let g = Grid::<f64>::new(2, 2.0 * PI, 4.0 * PI, 16, 64).unwrap();
    let u = banded_field(g, 0, 2, 41);
    let q = QuadratureSpec::for_grid(&g);
    let vd = solve_dirichlet(&u, &q).unwrap();
    let vn = solve_neumann(&u, &q).unwrap();
    let mut rng = rng(41);
    use rand::Rng;
    let (mut ed, mut en, mut sd, mut sn) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..6 {
        let x = rng.gen_range(-PI..PI);
        let t = rng.gen_range(-2.0 * PI..2.0 * PI);
        let x_d = rng.gen_range(0.1..1.0);
        let a = convolve_dirichlet(&u, &[x], x_d, t).unwrap();
        let b = vd.evaluate(&[x], x_d, t).unwrap();
        ed = ed.max((a - b).norm());
        sd = sd.max(b.norm());
        let a = convolve_neumann(&u, &[x], x_d, t).unwrap();
        let b = vn.evaluate(&[x], x_d, t).unwrap();
        en = en.max((a - b).norm());
        sn = sn.max(b.norm());
    }
    assert!(ed / sd < 1e-2, "dirichlet {}", ed / sd);
    assert!(en / sn < 1e-2, "neumann {}", en / sn);
    let g3 = Grid::<f64>::new(3, 4.0, 4.0, 8, 8).unwrap();
    assert!(convolve_dirichlet(&SampledField::zeros(g3), &[0.0, 0.0], 0.5, 0.0).is_err());
}

#[test]
fn tiny_oracle_matches_besov_norm() {
    for (d, g) in [
        (1usize, Grid::<f64>::time_only(8.0, 16).unwrap()),
        (2, Grid::<f64>::new(2, 4.0, 8.0, 8, 8).unwrap()),
        (3, Grid::<f64>::new(3, 4.0, 8.0, 8, 8).unwrap()),
    ] {
        let u = random_real_field(g, 50 + d as u64).mean_free();
        for (s, p, q) in [(0.5, 2.0, 2.0), (1.0, 1.0, 3.0), (1.5, 4.0, f64::INFINITY)] {
            let a = besov_norm(&u, s, p, q).unwrap();
            let b = tiny_besov_oracle(&u, s, p, q).unwrap();
            assert!(rel_close(a, b, 1e-10), "d={d}: {a} vs {b}");
        }
    }
    let big = SampledField::<f64>::zeros(Grid::time_only(8.0, 32).unwrap());
    assert!(tiny_besov_oracle(&big, 0.5, 2.0, 2.0).is_err());
}
