//! Independent references: the heat kernel, caloric fields generated by
//! sources below the boundary, brute-force layer-potential convolutions and
//! an exhaustive dyadic-sum Besov norm for tiny lattices.
//!
//! Nothing here goes through the FFT, the symbols or the bank.

use crate::error::{Error, Result};
use crate::grid::{Grid, SampledField};
use crate::scalar::{cx, Cplx, Real};

/// `(4 pi t)^{-n/2} exp(-|x|^2 / 4t)` for `t > 0` in `n = x.len()` variables, zero for `t <= 0`.
pub fn heat_kernel<T: Real>(x: &[T], t: T) -> T {
    if !(t > T::zero()) {
        return T::zero();
    }
    let r2 = x.iter().fold(T::zero(), |a, &v| a + v * v);
    let four_pi_t = T::lit(4.0) * T::PI() * t;
    four_pi_t.powf(-T::lit(x.len() as f64) / T::lit(2.0)) * (-r2 / (T::lit(4.0) * t)).exp()
}

/// Heat kernel with the normal variable split off: `Gamma(x', x_d, t)`.
pub fn heat_kernel_split<T: Real>(x: &[T], x_d: T, t: T) -> T {
    let mut full = x.to_vec();
    full.push(x_d);
    heat_kernel(&full, t)
}

/// Translated heat kernel `w(x, t) = Gamma(x' - y0', x_d + h, t - t0)`, a
/// caloric function on the closed half space.
#[derive(Debug, Clone, PartialEq)]
pub struct CaloricReference<T> {
    pub depth: T,
    pub center: Vec<T>,
    pub t0: T,
}

impl<T: Real> CaloricReference<T> {
    pub fn new(depth: T, center: Vec<T>, t0: T) -> Result<Self> {
        if !(depth > T::zero()) {
            return Err(Error::InvalidParameter(format!("source depth h = {depth} must be > 0")));
        }
        Ok(Self { depth, center, t0 })
    }

    pub fn dim(&self) -> usize {
        self.center.len() + 1
    }

    pub fn value(&self, x: &[T], x_d: T, t: T) -> T {
        let shifted: Vec<T> = x.iter().zip(&self.center).map(|(a, b)| *a - *b).collect();
        heat_kernel_split(&shifted, x_d + self.depth, t - self.t0)
    }

    pub fn trace(&self, x: &[T], t: T) -> T {
        self.value(x, T::zero(), t)
    }

    /// Boundary trace sampled on `grid`, multiplied by a smooth causal cutoff
    /// that equals one up to time `end` and vanishes after `end + ramp`. The
    /// solution with these data equals `w` for `t <= end`; the mean is kept.
    pub fn windowed_trace(&self, grid: &Grid<T>, end: T, ramp: T) -> Result<SampledField<T>> {
        if grid.dim() != self.dim() {
            return Err(Error::GridMismatch);
        }
        if !(ramp > T::zero()) {
            return Err(Error::InvalidParameter("ramp must be positive".into()));
        }
        Ok(SampledField::from_real_fn(*grid, |x, t| {
            self.trace(x, t) * smooth_step((t - end) / ramp)
        }))
    }

    /// `d_t w - Delta w` by centered differences with step `step`.
    pub fn heat_residual(&self, x: &[T], x_d: T, t: T, step: T) -> T {
        let two = T::lit(2.0);
        let w0 = self.value(x, x_d, t);
        let dt = (self.value(x, x_d, t + step) - self.value(x, x_d, t - step)) / (two * step);
        let mut lap = (self.value(x, x_d + step, t) - two * w0 + self.value(x, x_d - step, t)) / (step * step);
        let mut y = x.to_vec();
        for k in 0..x.len() {
            y[k] = x[k] + step;
            let plus = self.value(&y, x_d, t);
            y[k] = x[k] - step;
            let minus = self.value(&y, x_d, t);
            y[k] = x[k];
            lap = lap + (plus - two * w0 + minus) / (step * step);
        }
        dt - lap
    }
}

const GL8_NODES: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL8_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Layer kernel in the normal/time variables after integrating out `y'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    /// `-2 d_d Gamma = (x_d / t) Gamma`.
    Dirichlet,
    /// `-2 Gamma`.
    Neumann,
}

impl Layer {
    /// Normal/time factor of the kernel at lag `lag`: the one-dimensional
    /// heat kernel in `x_d` times the layer factor.
    fn weight<T: Real>(self, x_d: T, lag: T) -> T {
        let g = heat_kernel(&[x_d], lag);
        match self {
            Layer::Dirichlet => x_d / lag * g,
            Layer::Neumann => -T::lit(2.0) * g,
        }
    }
}

/// Lag quadrature on `(0, horizon)`: geometric Gauss-Legendre panels from
/// `x_d^2 / 200` up to panel width `fine`, then uniform panels of width
/// `fine`. The integrand below `x_d^2 / 200` is below `e^{-50}`.
fn lag_nodes<T: Real>(x_d: T, fine: T, horizon: T) -> Vec<(T, T)> {
    let mut out = Vec::new();
    let mut a = x_d * x_d / T::lit(200.0);
    let push_panel = |a: T, b: T, out: &mut Vec<(T, T)>| {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
            out.push((mid + half * T::lit(*x), half * T::lit(*w)));
        }
    };
    while a < horizon {
        let width = a.min(fine);
        let b = (a + width).min(horizon);
        push_panel(a, b, &mut out);
        a = b;
    }
    out
}

/// Smooth step: 1 for `u <= 0`, 0 for `u >= 1`.
fn smooth_step<T: Real>(u: T) -> T {
    if u <= T::zero() {
        return T::one();
    }
    if u >= T::one() {
        return T::zero();
    }
    let e = |x: T| if x > T::zero() { (-x.recip()).exp() } else { T::zero() };
    let a = e(T::one() - u);
    a / (a + e(u))
}

/// Quadrature setup of the periodic-data convolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionSettings<T> {
    /// Lags are integrated up to `2 horizon_periods L_t`, with a smooth
    /// cutoff over the second half.
    pub horizon_periods: T,
}

impl<T: Real> Default for ConvolutionSettings<T> {
    fn default() -> Self {
        Self {
            horizon_periods: T::lit(8.0),
        }
    }
}

/// Periodic sampled data with exact trigonometric interpolation by direct
/// sums (no transform library).
struct PeriodicData<T> {
    n_x: usize,
    n_t: usize,
    box_x: T,
    box_t: T,
    spatial: usize,
    /// Per spatial node, the time coefficients `c_{i,n}` with
    /// `g(y_i, s) = sum_n c_{i,n} exp(i tau_n (s + L_t/2))`.
    time_coeffs: Vec<Cplx<T>>,
    tau: Vec<T>,
    xi: Vec<T>,
}

fn signed_freq<T: Real>(k: usize, n: usize, l: T) -> T {
    let s = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
    T::lit(2.0 * std::f64::consts::PI * s) / l
}

impl<T: Real> PeriodicData<T> {
    fn new(g: &SampledField<T>) -> Result<Self> {
        let grid = g.grid();
        let spatial = grid.spatial_dims();
        if spatial > 1 {
            return Err(Error::Unsupported("convolution oracle supports d <= 2".into()));
        }
        let n_t = grid.n_t();
        let n_x = grid.n_x();
        let rows = g.values().len() / n_t;
        let tau: Vec<T> = (0..n_t).map(|k| signed_freq(k, n_t, grid.box_t())).collect();
        let xi: Vec<T> = (0..n_x).map(|k| signed_freq(k, n_x, grid.box_x())).collect();
        let inv_n = T::from_usize_lossy(n_t).recip();
        let mut time_coeffs = Vec::with_capacity(rows * n_t);
        for r in 0..rows {
            let row = &g.values()[r * n_t..(r + 1) * n_t];
            for k in 0..n_t {
                let mut acc = cx(T::zero(), T::zero());
                for (m, v) in row.iter().enumerate() {
                    let ang = -T::lit(2.0) * T::PI() * T::from_usize_lossy((k * m) % n_t) * inv_n;
                    acc = acc + *v * Cplx::from_polar(T::one(), ang);
                }
                time_coeffs.push(acc * inv_n);
            }
        }
        Ok(Self {
            n_x,
            n_t,
            box_x: grid.box_x(),
            box_t: grid.box_t(),
            spatial,
            time_coeffs,
            tau,
            xi,
        })
    }

    fn rows(&self) -> usize {
        self.time_coeffs.len() / self.n_t
    }

    /// `g(y_i, s)` for every spatial node `i`.
    fn at_time(&self, s: T, out: &mut Vec<Cplx<T>>) {
        let phase: Vec<Cplx<T>> = self
            .tau
            .iter()
            .map(|&f| Cplx::from_polar(T::one(), f * (s + self.box_t / T::lit(2.0))))
            .collect();
        out.clear();
        for r in 0..self.rows() {
            let c = &self.time_coeffs[r * self.n_t..(r + 1) * self.n_t];
            out.push(c.iter().zip(&phase).fold(cx(T::zero(), T::zero()), |a, (x, y)| a + *x * *y));
        }
    }

    /// Interpolates a row vector (one value per spatial node) at `y`.
    fn interp_space(&self, row: &[Cplx<T>], y: T) -> Cplx<T> {
        let n = self.n_x;
        let inv_n = T::from_usize_lossy(n).recip();
        let mut acc = cx(T::zero(), T::zero());
        for (k, &f) in self.xi.iter().enumerate() {
            let mut c = cx(T::zero(), T::zero());
            for (m, v) in row.iter().enumerate() {
                let ang = -T::lit(2.0) * T::PI() * T::from_usize_lossy((k * m) % n) * inv_n;
                c = c + *v * Cplx::from_polar(T::one(), ang);
            }
            acc = acc + c * Cplx::from_polar(T::one(), f * (y + self.box_x / T::lit(2.0)));
        }
        acc * inv_n
    }
}

fn layer_convolution<T: Real>(
    layer: Layer,
    g: &SampledField<T>,
    x: &[T],
    x_d: T,
    t: T,
    settings: &ConvolutionSettings<T>,
) -> Result<Cplx<T>> {
    if !(x_d > T::zero()) {
        return Err(Error::InvalidParameter(format!("x_d = {x_d} must be > 0")));
    }
    let data = PeriodicData::new(g)?;
    if x.len() != data.spatial {
        return Err(Error::InvalidParameter("point dimension".into()));
    }
    let dt = data.box_t / T::from_usize_lossy(data.n_t);
    let reach = settings.horizon_periods * data.box_t;
    let nodes = lag_nodes(x_d, dt.min(x_d * x_d), reach + reach);
    let mut row = Vec::new();
    let mut total = cx(T::zero(), T::zero());
    let dx = if data.spatial == 1 {
        data.box_x / T::from_usize_lossy(data.n_x)
    } else {
        T::zero()
    };
    for (lag, w) in nodes {
        let cut = smooth_step((lag - reach) / reach);
        if cut == T::zero() {
            continue;
        }
        let kernel = layer.weight(x_d, lag) * w * cut;
        data.at_time(t - lag, &mut row);
        let value = if data.spatial == 0 {
            row[0]
        } else {
            spatial_average(&data, &row, x[0], lag, dx)
        };
        total = total + value * kernel;
    }
    Ok(total)
}

/// `int_R Gamma_1(x - y, lag) g(y) dy` for periodic `g` given on nodes.
fn spatial_average<T: Real>(data: &PeriodicData<T>, row: &[Cplx<T>], x: T, lag: T, dx: T) -> Cplx<T> {
    let sigma = (T::lit(2.0) * lag).sqrt();
    if sigma >= T::lit(2.0) * dx {
        // Trapezoid on the nodes against the periodized Gaussian.
        let l = data.box_x;
        let images = (T::lit(8.0) * sigma / l).ceil().to_f64_lossy() as i64 + 1;
        let half = l / T::lit(2.0);
        let mut acc = cx(T::zero(), T::zero());
        for (i, v) in row.iter().enumerate() {
            let y = T::from_usize_lossy(i) * dx - half;
            let mut k = T::zero();
            for n in -images..=images {
                k = k + heat_kernel(&[x - y + T::lit(n as f64) * l], lag);
            }
            acc = acc + *v * k;
        }
        acc * dx
    } else {
        // Narrow Gaussian: trapezoid on a local mesh with interpolated data.
        let h = sigma / T::lit(3.0);
        let mut acc = cx(T::zero(), T::zero());
        for i in -24i32..=24 {
            let u = h * T::lit(i as f64);
            acc = acc + data.interp_space(row, x + u) * heat_kernel(&[u], lag);
        }
        acc * h
    }
}

/// Double-layer representation `-2 int int d_d Gamma(x' - y', x_d, t - s) g(y', s) dy' ds`
/// for periodic sampled data (`d <= 2`).
pub fn convolve_dirichlet<T: Real>(g: &SampledField<T>, x: &[T], x_d: T, t: T) -> Result<Cplx<T>> {
    layer_convolution(Layer::Dirichlet, g, x, x_d, t, &ConvolutionSettings::default())
}

/// Single-layer representation with kernel `-2 Gamma`.
pub fn convolve_neumann<T: Real>(g: &SampledField<T>, x: &[T], x_d: T, t: T) -> Result<Cplx<T>> {
    layer_convolution(Layer::Neumann, g, x, x_d, t, &ConvolutionSettings::default())
}

pub fn convolve_with_settings<T: Real>(
    layer: Layer,
    g: &SampledField<T>,
    x: &[T],
    x_d: T,
    t: T,
    settings: &ConvolutionSettings<T>,
) -> Result<Cplx<T>> {
    layer_convolution(layer, g, x, x_d, t, settings)
}

/// Layer potential of non-periodic data `g(y', s)` that vanishes for
/// `s < t - horizon` (`d <= 2`). `max_step` bounds the tangential
/// trapezoid step and should resolve the narrowest feature of `g`.
pub fn convolve_function<T: Real, F: Fn(&[T], T) -> T>(
    layer: Layer,
    g: F,
    x: &[T],
    x_d: T,
    t: T,
    horizon: T,
    max_step: T,
) -> Result<T> {
    if !(max_step > T::zero()) {
        return Err(Error::InvalidParameter("max_step must be positive".into()));
    }
    if !(x_d > T::zero()) {
        return Err(Error::InvalidParameter(format!("x_d = {x_d} must be > 0")));
    }
    if x.len() > 1 {
        return Err(Error::Unsupported("convolution oracle supports d <= 2".into()));
    }
    // Closure data may switch on steeply (caloric traces start like
    // `exp(-h^2 / 4s)`), so panels are capped at `0.005`.
    let fine = (x_d * x_d / T::lit(16.0)).min(T::lit(0.005));
    let mut total = T::zero();
    for (lag, w) in lag_nodes(x_d, fine, horizon) {
        let kernel = layer.weight(x_d, lag) * w;
        let s = t - lag;
        let value = if x.is_empty() {
            g(&[], s)
        } else {
            let sigma = (T::lit(2.0) * lag).sqrt();
            let h = (sigma / T::lit(3.0)).min(max_step);
            let reach = (T::lit(8.0) * sigma / h).ceil().to_i64().unwrap_or(24);
            let mut acc = T::zero();
            for i in -reach..=reach {
                let u = h * T::lit(i as f64);
                acc = acc + g(&[x[0] + u], s) * heat_kernel(&[u], lag);
            }
            acc * h
        };
        total = total + value * kernel;
    }
    Ok(total)
}

fn oracle_bump(u: f64) -> f64 {
    if u.abs() >= 1.0 - 1e-8 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

/// `rho(2^{-j} r)` coded from scratch: normalized by the two bumps that overlap.
fn oracle_phi(j: i32, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let l = r.log2() - j as f64;
    let f = l - l.floor();
    oracle_bump(l) / (oracle_bump(f) + oracle_bump(f - 1.0))
}

/// Exhaustive Besov norm for lattices of at most 16 points per axis: direct
/// DFT, band weights evaluated per mode, direct inverse and `l^q` sum.
pub fn tiny_besov_oracle(g: &SampledField<f64>, s: f64, p: f64, q: f64) -> Result<f64> {
    let grid = g.grid();
    if grid.n_t() > 16 || (grid.dim() > 1 && grid.n_x() > 16) || grid.dim() > 3 {
        return Err(Error::Unsupported("tiny oracle needs <= 16 points per axis and d <= 3".into()));
    }
    let shape = grid.shape();
    let boxes: Vec<f64> = (0..shape.len())
        .map(|a| if a + 1 == shape.len() { grid.box_t() } else { grid.box_x() })
        .collect();
    let n = g.values().len();
    let idx = |mut flat: usize| -> Vec<usize> {
        let mut out = vec![0; shape.len()];
        for a in (0..shape.len()).rev() {
            out[a] = flat % shape[a];
            flat /= shape[a];
        }
        out
    };
    let freq = |a: usize, k: usize| -> f64 {
        let s = if k < shape[a] / 2 { k as f64 } else { k as f64 - shape[a] as f64 };
        2.0 * std::f64::consts::PI * s / boxes[a]
    };
    let mut radius = vec![0.0; n];
    for (k, r) in radius.iter_mut().enumerate() {
        let ik = idx(k);
        let last = shape.len() - 1;
        let xs: f64 = (0..last).map(|a| freq(a, ik[a]).powi(2)).sum();
        *r = xs.sqrt() + freq(last, ik[last]).abs().sqrt();
    }
    // Coefficients up to the common factor; normalization cancels in the roundtrip.
    let mut coef = vec![Cplx::new(0.0, 0.0); n];
    for (k, c) in coef.iter_mut().enumerate() {
        let ik = idx(k);
        for (m, v) in g.values().iter().enumerate() {
            let im = idx(m);
            let ang: f64 = (0..shape.len())
                .map(|a| -2.0 * std::f64::consts::PI * (ik[a] * im[a]) as f64 / shape[a] as f64)
                .sum();
            *c += *v * Cplx::from_polar(1.0, ang);
        }
        *c /= n as f64;
    }
    if coef[0].norm() > 1e-9 * coef.iter().skip(1).fold(0.0f64, |m, c| m.max(c.norm())) && coef[0].norm() > 0.0 {
        return Err(Error::Degenerate("nonzero mean".into()));
    }
    let positive: Vec<f64> = radius.iter().copied().filter(|r| *r > 0.0).collect();
    if positive.is_empty() {
        return Ok(0.0);
    }
    let lo = positive.iter().copied().fold(f64::INFINITY, f64::min).log2().floor() as i32 - 1;
    let hi = positive.iter().copied().fold(0.0, f64::max).log2().ceil() as i32 + 1;
    let cell: f64 = boxes.iter().product::<f64>() / n as f64;
    let mut acc = 0.0f64;
    for j in lo..=hi {
        let mut sum_p = 0.0f64;
        let mut sup = 0.0f64;
        for m in 0..n {
            let im = idx(m);
            let mut v = Cplx::new(0.0, 0.0);
            for k in 0..n {
                let w = oracle_phi(j, radius[k]);
                if w == 0.0 {
                    continue;
                }
                let ik = idx(k);
                let ang: f64 = (0..shape.len())
                    .map(|a| 2.0 * std::f64::consts::PI * (ik[a] * im[a]) as f64 / shape[a] as f64)
                    .sum();
                v += coef[k] * w * Cplx::from_polar(1.0, ang);
            }
            sup = sup.max(v.norm());
            sum_p += v.norm().powf(p);
        }
        let band = if p.is_infinite() { sup } else { (sum_p * cell).powf(1.0 / p) };
        let term = 2f64.powf(j as f64 * s) * band;
        if q.is_infinite() {
            acc = acc.max(term);
        } else {
            acc += term.powf(q);
        }
    }
    Ok(if q.is_infinite() { acc } else { acc.powf(1.0 / q) })
}
