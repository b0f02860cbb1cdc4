//! Boundary-to-interior heat solves on the upper half space.
//!
//! An interior field is a [`SliceStack`]: depth nodes with quadrature weights
//! and one boundary spectrum per node. Solves produce stacks with the
//! analytic profile `v_hat(x_d) = exp(-x_d root) a`, stored through the
//! amplitude `a` and materialized per node on demand.

mod quadrature;
pub mod stack_io;

pub use quadrature::QuadratureSpec;

use crate::error::{Error, Result};
use crate::grid::{lp_norm_of, Lattice, SampledField, SpectralField};
use crate::grid::Grid;
use crate::multiplier::{deriv_symbol_with_root, mean_negligible, root_from_sq, MultiIndex};
use crate::scalar::{cpowi, cx, Cplx, Real};

#[derive(Debug, Clone)]
enum Profile<T> {
    /// `slice(x_d) = exp(-x_d root) amplitude`.
    Poisson { amplitude: SpectralField<T> },
    Explicit(Vec<SpectralField<T>>),
}

/// Interior field sampled at depth nodes.
#[derive(Debug, Clone)]
pub struct SliceStack<T> {
    grid: Grid<T>,
    nodes: Vec<T>,
    weights: Vec<T>,
    roots: Vec<Cplx<T>>,
    profile: Profile<T>,
    carries_mean: bool,
}

fn lattice_roots<T: Real>(lat: &Lattice<T>) -> Vec<Cplx<T>> {
    (0..lat.len()).map(|k| root_from_sq(lat.xi_sq(k), lat.tau(k))).collect()
}

fn check_nodes<T: Real>(nodes: &[T], weights: &[T]) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::Config("empty depth quadrature".into()));
    }
    if nodes.len() != weights.len() {
        return Err(Error::ShapeMismatch {
            expected: nodes.len(),
            actual: weights.len(),
        });
    }
    if !(nodes[0] > T::zero()) || nodes.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("depth nodes must be positive and strictly increasing".into()));
    }
    if weights.iter().any(|w| !(*w > T::zero())) {
        return Err(Error::Config("quadrature weights must be positive".into()));
    }
    Ok(())
}

impl<T: Real> SliceStack<T> {
    /// Stack with the Poisson profile of amplitude `a`.
    pub fn poisson(amplitude: SpectralField<T>, nodes: Vec<T>, weights: Vec<T>) -> Result<Self> {
        check_nodes(&nodes, &weights)?;
        let grid = *amplitude.grid();
        let roots = lattice_roots(&grid.lattice());
        let carries_mean = !mean_negligible(&amplitude);
        Ok(Self {
            grid,
            nodes,
            weights,
            roots,
            profile: Profile::Poisson { amplitude },
            carries_mean,
        })
    }

    /// Stack from explicit slices, one per node.
    pub fn explicit(slices: Vec<SpectralField<T>>, nodes: Vec<T>, weights: Vec<T>) -> Result<Self> {
        check_nodes(&nodes, &weights)?;
        if slices.len() != nodes.len() {
            return Err(Error::ShapeMismatch {
                expected: nodes.len(),
                actual: slices.len(),
            });
        }
        let grid = *slices[0].grid();
        if slices.iter().any(|s| s.grid() != &grid) {
            return Err(Error::GridMismatch);
        }
        let roots = lattice_roots(&grid.lattice());
        let carries_mean = stack_carries_mean(&slices);
        Ok(Self {
            grid,
            nodes,
            weights,
            roots,
            profile: Profile::Explicit(slices),
            carries_mean,
        })
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Whether the zero frequency carries non-negligible content.
    pub fn carries_mean(&self) -> bool {
        self.carries_mean
    }

    pub fn is_poisson(&self) -> bool {
        matches!(self.profile, Profile::Poisson { .. })
    }

    /// Amplitude of a Poisson-profile stack.
    pub fn amplitude(&self) -> Option<&SpectralField<T>> {
        match &self.profile {
            Profile::Poisson { amplitude } => Some(amplitude),
            Profile::Explicit(_) => None,
        }
    }

    /// `root` at every lattice mode.
    pub fn roots(&self) -> &[Cplx<T>] {
        &self.roots
    }

    /// Same field with new weights (nodes unchanged).
    pub fn with_weights(&self, weights: Vec<T>) -> Result<Self> {
        check_nodes(&self.nodes, &weights)?;
        Ok(Self {
            weights,
            ..self.clone()
        })
    }

    /// Spectrum at node `i`.
    pub fn slice(&self, i: usize) -> SpectralField<T> {
        match &self.profile {
            Profile::Poisson { amplitude } => self.profile_at(amplitude, self.nodes[i]),
            Profile::Explicit(s) => s[i].clone(),
        }
    }

    /// Spectrum at an arbitrary depth; needs the analytic profile.
    pub fn slice_at(&self, x_d: T) -> Result<SpectralField<T>> {
        if !(x_d >= T::zero()) {
            return Err(Error::InvalidParameter(format!("depth x_d = {x_d} must be >= 0")));
        }
        match &self.profile {
            Profile::Poisson { amplitude } => Ok(self.profile_at(amplitude, x_d)),
            Profile::Explicit(_) => Err(Error::Unsupported(
                "off-node evaluation of a stack without analytic profile".into(),
            )),
        }
    }

    fn profile_at(&self, amplitude: &SpectralField<T>, x_d: T) -> SpectralField<T> {
        let mut out = amplitude.clone();
        for (c, z) in out.coeffs_mut().iter_mut().zip(&self.roots) {
            *c = *c * (-*z * x_d).exp();
        }
        out
    }

    /// Point value `v(x', x_d, t)` by trigonometric interpolation.
    pub fn evaluate(&self, x: &[T], x_d: T, t: T) -> Result<Cplx<T>> {
        Ok(self.slice_at(x_d)?.evaluate(x, t))
    }

    /// Applies a tangential diagonal multiplier `m(k)` to every slice.
    pub fn map_tangential<F: FnMut(usize) -> Cplx<T>>(&self, mut m: F) -> Self {
        let lat_len = self.grid.len();
        let factors: Vec<Cplx<T>> = (0..lat_len).map(&mut m).collect();
        let scale = |f: &SpectralField<T>| {
            let mut g = f.clone();
            for (c, s) in g.coeffs_mut().iter_mut().zip(&factors) {
                *c = *c * *s;
            }
            g
        };
        let profile = match &self.profile {
            Profile::Poisson { amplitude } => Profile::Poisson {
                amplitude: scale(amplitude),
            },
            Profile::Explicit(s) => Profile::Explicit(s.iter().map(scale).collect()),
        };
        let carries_mean = self.carries_mean && factors[0] != cx(T::zero(), T::zero());
        Self {
            profile,
            carries_mean,
            ..self.clone()
        }
    }
}

/// Zero mode small against the largest nonzero-frequency coefficient of the whole stack.
fn stack_carries_mean<T: Real>(slices: &[SpectralField<T>]) -> bool {
    let mut rest = T::zero();
    let mut mean = T::zero();
    for s in slices {
        let c = s.coeffs();
        mean = mean.max(c[0].norm());
        rest = c[1..].iter().fold(rest, |m, v| m.max(v.norm()));
    }
    mean > crate::multiplier::mean_tolerance::<T>() * rest && mean > T::zero()
}

/// Dirichlet solve: `v_hat(x_d) = exp(-x_d root) g_hat`. The zero mode is
/// propagated unchanged and flagged through [`SliceStack::carries_mean`].
pub fn solve_dirichlet<T: Real>(g: &SampledField<T>, quad: &QuadratureSpec<T>) -> Result<SliceStack<T>> {
    solve_dirichlet_spectral(g.forward(), quad)
}

pub fn solve_dirichlet_spectral<T: Real>(g_hat: SpectralField<T>, quad: &QuadratureSpec<T>) -> Result<SliceStack<T>> {
    let (nodes, weights) = quad.nodes_weights()?;
    SliceStack::poisson(g_hat, nodes, weights)
}

/// Neumann solve: `v_hat(x_d) = -exp(-x_d root) g_hat / root`; data must be mean-zero.
pub fn solve_neumann<T: Real>(g: &SampledField<T>, quad: &QuadratureSpec<T>) -> Result<SliceStack<T>> {
    solve_neumann_spectral(g.forward(), quad)
}

pub fn solve_neumann_spectral<T: Real>(g_hat: SpectralField<T>, quad: &QuadratureSpec<T>) -> Result<SliceStack<T>> {
    if !mean_negligible(&g_hat) {
        return Err(Error::Degenerate("Neumann data must have zero mean".into()));
    }
    let (nodes, weights) = quad.nodes_weights()?;
    let lat = g_hat.grid().lattice();
    let mut a = g_hat;
    for (k, c) in a.coeffs_mut().iter_mut().enumerate() {
        let z = root_from_sq(lat.xi_sq(k), lat.tau(k));
        *c = if k == 0 { cx(T::zero(), T::zero()) } else { -*c / z };
    }
    SliceStack::poisson(a, nodes, weights)
}

/// `nabla_x^alpha d_t^beta v`. Normal derivatives act analytically through
/// powers of `-root` and need the Poisson profile.
pub fn derivative_field<T: Real>(stack: &SliceStack<T>, index: &MultiIndex) -> Result<SliceStack<T>> {
    if index.dim() != stack.grid.dim() {
        return Err(Error::InvalidParameter(format!(
            "multi-index has {} entries, grid has d = {}",
            index.dim(),
            stack.grid.dim()
        )));
    }
    if index.order() == 0 {
        return Ok(stack.clone());
    }
    if index.normal_order() > 0 && !stack.is_poisson() {
        return Err(Error::Unsupported(
            "normal derivative of a stack without analytic profile".into(),
        ));
    }
    let lat = stack.grid.lattice();
    let roots = stack.roots.clone();
    Ok(stack.map_tangential(|k| deriv_symbol_with_root(index, lat.xi(k), lat.tau(k), roots[k])))
}

/// `(sum_i w_i ||slice_i||_p^p)^{1/p}`; for `p = inf` the largest sample over all slices.
pub fn interior_lp_norm<T: Real>(stack: &SliceStack<T>, p: T) -> Result<T> {
    if p.is_nan() || p < T::one() {
        return Err(Error::InvalidParameter(format!(
            "L^p exponent p = {p} must satisfy 1 <= p <= inf"
        )));
    }
    if p == T::lit(2.0) {
        return Ok(interior_l2_sq(stack).sqrt());
    }
    let cell = stack.grid.cell_volume();
    let mut acc = T::zero();
    for i in 0..stack.len() {
        let v = stack.slice(i).inverse();
        let n = lp_norm_of(v.values(), cell, p)?;
        if p.is_infinite() {
            acc = acc.max(n);
        } else {
            acc = acc + stack.weights[i] * n.powf(p);
        }
    }
    Ok(if p.is_infinite() { acc } else { acc.powf(p.recip()) })
}

/// `sum_i w_i ||slice_i||_2^2` through Parseval, slice by slice or per mode.
fn interior_l2_sq<T: Real>(stack: &SliceStack<T>) -> T {
    let vol = stack.grid.volume();
    match &stack.profile {
        Profile::Poisson { amplitude } => {
            let mut total = T::zero();
            for (c, z) in amplitude.coeffs().iter().zip(&stack.roots) {
                let a2 = c.norm_sqr();
                if a2 == T::zero() {
                    continue;
                }
                let two_re = z.re + z.re;
                let mut s = T::zero();
                for (x, w) in stack.nodes.iter().zip(&stack.weights) {
                    s = s + *w * (-two_re * *x).exp();
                }
                total = total + a2 * s;
            }
            total / vol
        }
        Profile::Explicit(slices) => slices
            .iter()
            .zip(&stack.weights)
            .map(|(s, w)| *w * s.l2_norm_sq())
            .sum(),
    }
}

/// Result of [`trace_recover_with_diagnostics`].
#[derive(Debug, Clone)]
pub struct TraceRecovery<T> {
    pub field: SampledField<T>,
    /// Modes whose decay scale `1/|root|` is not resolved by the smallest
    /// node, or (without analytic tail) whose decay is not reached by the largest.
    pub poorly_covered_modes: usize,
}

/// Trace of `v` from the stack of `d_{x_d}^m v`:
/// `g_hat = 4 int x_d (-root)^{2-m} exp(-x_d root) d_d^m v_hat dx_d`.
pub fn trace_recover<T: Real>(stack: &SliceStack<T>, m: u32) -> Result<SampledField<T>> {
    Ok(trace_recover_with_diagnostics(stack, m)?.field)
}

pub fn trace_recover_with_diagnostics<T: Real>(stack: &SliceStack<T>, m: u32) -> Result<TraceRecovery<T>> {
    if stack.carries_mean {
        return Err(Error::Degenerate("trace recovery needs zero mean content".into()));
    }
    let four = T::lit(4.0);
    let two = T::lit(2.0);
    let x_lo = stack.nodes[0];
    let x_hi = stack.nodes[stack.len() - 1];
    let n = stack.grid.len();
    let mut out = vec![cx(T::zero(), T::zero()); n];
    let mut poor = 0usize;
    let pow_m = |z: Cplx<T>| -> Cplx<T> {
        // (-z)^{2-m}, negative exponents allowed away from the origin.
        let minus = -z;
        if m <= 2 {
            cpowi(minus, 2 - m)
        } else {
            cpowi(minus, m - 2).inv()
        }
    };
    match &stack.profile {
        Profile::Poisson { amplitude } => {
            for k in 1..n {
                let a = amplitude.coeffs()[k];
                let z = stack.roots[k];
                if a == cx(T::zero(), T::zero()) {
                    continue;
                }
                if x_lo * z.norm() > T::one() {
                    poor += 1;
                }
                let mut s = cx(T::zero(), T::zero());
                for (x, w) in stack.nodes.iter().zip(&stack.weights) {
                    s = s + (-z * (two * *x)).exp() * (*w * *x);
                }
                // Closed form of 4 int_X^inf x exp(-2xz) dx.
                let zx = z * (two * x_hi);
                let tail = (-zx).exp() * (zx + T::one()) / (z * z);
                out[k] = a * pow_m(z) * (s * four + tail);
            }
        }
        Profile::Explicit(slices) => {
            for k in 1..n {
                let z = stack.roots[k];
                if x_lo * z.norm() > T::one() || x_hi * z.re < T::lit(20.0) {
                    poor += 1;
                }
                let mut s = cx(T::zero(), T::zero());
                for (i, (x, w)) in stack.nodes.iter().zip(&stack.weights).enumerate() {
                    s = s + slices[i].coeffs()[k] * (-z * *x).exp() * (*w * *x);
                }
                out[k] = s * four * pow_m(z);
            }
        }
    }
    Ok(TraceRecovery {
        field: SpectralField::new(stack.grid, out)?.inverse(),
        poorly_covered_modes: poor,
    })
}
