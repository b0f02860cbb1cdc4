//! Homogeneous anisotropic norms of boundary fields and interior stacks.
//!
//! Boundary norms act on `(x', t)` fields; the anisotropic time smoothness is
//! always half the space smoothness. For `d = 1` the bank is isotropic in `t`
//! and the Besov norm with index `s` is the `B^{s/2}_{p,q}(R)` norm.

use crate::error::{Error, Result};
use crate::grid::{Grid, SampledField, SpectralField};
use crate::lp_bank::{band_weight_at_radius, DyadicBank};
use crate::multiplier::{frac_power_from_sq, mean_negligible, MultiIndex};
use crate::scalar::{cx, Cplx, Real};
use crate::solver::{derivative_field, interior_lp_norm, SliceStack};

/// Which homogeneous norm to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec<T> {
    Besov { s: T, p: T, q: T },
    Bessel { s: T, p: T },
    /// `W^{2m,m}_p`: all derivatives with `|alpha| + 2 beta = 2m`.
    Sobolev { m: u32, p: T },
}

impl<T: Real> NormSpec<T> {
    pub fn validate(&self) -> Result<()> {
        let check_exp = |name: &str, v: T| {
            if v.is_nan() || v < T::one() {
                Err(Error::InvalidParameter(format!("{name} = {v} must lie in [1, inf]")))
            } else {
                Ok(())
            }
        };
        match *self {
            Self::Besov { s, p, q } => {
                if !s.is_finite() {
                    return Err(Error::InvalidParameter("Besov smoothness must be finite".into()));
                }
                check_exp("p", p)?;
                check_exp("q", q)
            }
            Self::Bessel { s, p } => {
                if !s.is_finite() {
                    return Err(Error::InvalidParameter("Bessel smoothness must be finite".into()));
                }
                check_exp("p", p)
            }
            Self::Sobolev { p, .. } => check_exp("p", p),
        }
    }

    /// Norm of a boundary field (Sobolev is interior-only).
    pub fn boundary(&self, g: &SampledField<T>) -> Result<T> {
        self.validate()?;
        match *self {
            Self::Besov { s, p, q } => besov_norm(g, s, p, q),
            Self::Bessel { s, p } => bessel_norm(g, s, p),
            Self::Sobolev { .. } => Err(Error::Unsupported("Sobolev norm of a boundary field".into())),
        }
    }

    /// Norm of an interior field.
    pub fn interior(&self, v: &SliceStack<T>) -> Result<T> {
        self.validate()?;
        match *self {
            Self::Besov { s, p, q } => interior_besov_norm(v, s, p, q),
            Self::Bessel { s, p } => interior_bessel_norm(v, s, p),
            Self::Sobolev { m, p } => sobolev_norm(v, m, p),
        }
    }
}

fn require_mean_zero<T: Real>(g_hat: &SpectralField<T>) -> Result<()> {
    if !mean_negligible(g_hat) {
        return Err(Error::Degenerate("homogeneous norms need mean-zero data".into()));
    }
    Ok(())
}

/// `(j, ||Delta_j g||_p)` for every active band.
pub fn band_lp_norms<T: Real>(g_hat: &SpectralField<T>, p: T) -> Result<Vec<(i32, T)>> {
    let bank = DyadicBank::new(g_hat.grid());
    bank.bands()
        .map(|j| Ok((j, bank.apply(j, g_hat)?.inverse().lp_norm(p)?)))
        .collect()
}

/// `l^q` combination `(sum_j (2^{js} a_j)^q)^{1/q}`, a supremum for `q = inf`.
pub fn combine_bands<T: Real>(terms: &[(i32, T)], s: T, q: T) -> T {
    let scaled = terms.iter().map(|&(j, a)| (s * T::from_i32(j).unwrap()).exp2() * a);
    if q.is_infinite() {
        return scaled.fold(T::zero(), T::max);
    }
    if q == T::one() {
        return scaled.sum();
    }
    scaled.map(|a| a.powf(q)).sum::<T>().powf(q.recip())
}

/// `(sum_j 2^{jsq} ||Delta_j g||_p^q)^{1/q}` over the active bands.
pub fn besov_norm<T: Real>(g: &SampledField<T>, s: T, p: T, q: T) -> Result<T> {
    besov_norm_spectral(&g.forward(), s, p, q)
}

pub fn besov_norm_spectral<T: Real>(g_hat: &SpectralField<T>, s: T, p: T, q: T) -> Result<T> {
    NormSpec::Besov { s, p, q }.validate()?;
    require_mean_zero(g_hat)?;
    Ok(combine_bands(&band_lp_norms(g_hat, p)?, s, q))
}

fn bessel_coeffs<T: Real>(g_hat: &SpectralField<T>, s: T) -> Result<SpectralField<T>> {
    let lat = g_hat.grid().lattice();
    let mut out = g_hat.clone();
    for (k, c) in out.coeffs_mut().iter_mut().enumerate() {
        *c = if k == 0 {
            cx(T::zero(), T::zero())
        } else {
            *c * frac_power_from_sq(s, lat.xi_sq(k), lat.tau(k))?
        };
    }
    Ok(out)
}

/// `|| ((|xi'|^2 + i tau)^{s/2} g_hat)^vee ||_p`; the band sum of the
/// definition telescopes to the multiplier on every nonzero mode.
pub fn bessel_norm<T: Real>(g: &SampledField<T>, s: T, p: T) -> Result<T> {
    bessel_norm_spectral(&g.forward(), s, p)
}

pub fn bessel_norm_spectral<T: Real>(g_hat: &SpectralField<T>, s: T, p: T) -> Result<T> {
    NormSpec::Bessel { s, p }.validate()?;
    require_mean_zero(g_hat)?;
    bessel_coeffs(g_hat, s)?.inverse().lp_norm(p)
}

/// `sum_{|alpha| + 2 beta = 2m} ||nabla^alpha d_t^beta v||_{L^p}` over the half space.
pub fn sobolev_norm<T: Real>(v: &SliceStack<T>, m: u32, p: T) -> Result<T> {
    NormSpec::Sobolev { m, p }.validate()?;
    if v.is_empty() {
        return Err(Error::Config("empty slice stack".into()));
    }
    let mut total = T::zero();
    for index in MultiIndex::all_of_order(v.grid().dim(), 2 * m) {
        total = total + interior_lp_norm(&derivative_field(v, &index)?, p)?;
    }
    Ok(total)
}

/// Interior Bessel-potential norm with the tangential multiplier
/// `(|xi'|^2 + i tau)^{s/2}`, which on the Poisson profile is `root^s`.
pub fn interior_bessel_norm<T: Real>(v: &SliceStack<T>, s: T, p: T) -> Result<T> {
    NormSpec::Bessel { s, p }.validate()?;
    if v.carries_mean() {
        return Err(Error::Degenerate("homogeneous norms need mean-zero data".into()));
    }
    let lat = v.grid().lattice();
    let mut symbols = Vec::with_capacity(lat.len());
    symbols.push(cx(T::zero(), T::zero()));
    for k in 1..lat.len() {
        symbols.push(frac_power_from_sq(s, lat.xi_sq(k), lat.tau(k))?);
    }
    interior_lp_norm(&v.map_tangential(|k| symbols[k]), p)
}

/// Interior Besov norm from tangential `(x', t)` bands of the stack, the
/// depth handled by the stack quadrature.
pub fn interior_besov_norm<T: Real>(v: &SliceStack<T>, s: T, p: T, q: T) -> Result<T> {
    NormSpec::Besov { s, p, q }.validate()?;
    if v.carries_mean() {
        return Err(Error::Degenerate("homogeneous norms need mean-zero data".into()));
    }
    let bank = DyadicBank::new(v.grid());
    let lat = bank.lattice().clone();
    let mut terms = Vec::new();
    for j in bank.bands() {
        let band = v.map_tangential(|k| cx(band_weight_at_radius(j, lat.radius(k)), T::zero()));
        terms.push((j, interior_lp_norm(&band, p)?));
    }
    Ok(combine_bands(&terms, s, q))
}

/// Interior Besov norm with bands in all of `(x', x_d, t)`. The Poisson
/// profile is sampled at `n_d` uniform depths in `[0, box_x / 2)`, reflected
/// evenly to a full period and analysed on a `(d + 1)`-variable grid. The
/// grid type shares one box among spatial axes, so for `d >= 2` the normal box
/// and size must match the tangential ones. Meant for tiny grids.
pub fn full_band_besov_norm<T: Real>(v: &SliceStack<T>, s: T, p: T, q: T, box_d: T, n_d: usize) -> Result<T> {
    NormSpec::Besov { s, p, q }.validate()?;
    let g = v.grid();
    if g.dim() > 1 && box_d != g.box_x() {
        return Err(Error::InvalidParameter("normal box must equal the tangential box".into()));
    }
    if g.dim() > 1 && n_d != g.n_x() {
        return Err(Error::InvalidParameter("normal size must equal the tangential size".into()));
    }
    let full = Grid::new(g.dim() + 1, box_d, g.box_t(), n_d, g.n_t())?;
    let h = box_d / T::from_usize_lossy(n_d);
    let half = n_d / 2;
    // Depth sample i of the full axis sits at -box_d/2 + i h; fold by |x_d|.
    let mut planes: Vec<Vec<Cplx<T>>> = Vec::with_capacity(half + 1);
    for i in 0..=half {
        let x_d = T::from_usize_lossy(i) * h;
        planes.push(v.slice_at(x_d)?.inverse().into_values());
    }
    let mut values = vec![cx(T::zero(), T::zero()); full.len()];
    // Full layout: tangential axes, then the normal axis, then t.
    for (flat, val) in values.iter_mut().enumerate() {
        let it = flat % g.n_t();
        let rest = flat / g.n_t();
        let id = rest % n_d;
        let ix = rest / n_d;
        let depth = id.abs_diff(half);
        *val = planes[depth][ix * g.n_t() + it];
    }
    let f = SampledField::new(full, values)?.forward();
    let bank = DyadicBank::new(&full);
    let mut terms = Vec::new();
    for j in bank.bands() {
        let n = bank.apply(j, &f)?.inverse().lp_norm(p)?;
        // Half-space share of an even field.
        let n = if p.is_infinite() { n } else { n / T::lit(2.0).powf(p.recip()) };
        terms.push((j, n));
    }
    Ok(combine_bands(&terms, s, q))
}

/// Double-integral seminorm on a periodic time axis with its estimated
/// excluded diagonal mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gagliardo<T> {
    pub value: T,
    /// Estimate of the `p`-th power mass of the omitted diagonal cell.
    pub excluded_mass: T,
}

/// `(int int |D^k g(x) - D^k g(y)|^p / |x - y|^{1 + sigma p})^{1/p}` with
/// `k = floor(s)`, `sigma = s - k`, for a one-dimensional field (`d = 1`).
/// The outer variable runs over one period and the inner over the real line,
/// which reduces to one period against the periodized kernel. Derivatives are spectral.
pub fn gagliardo_seminorm_1d<T: Real>(g: &SampledField<T>, s: T, p: T) -> Result<Gagliardo<T>> {
    let grid = g.grid();
    if grid.dim() != 1 {
        return Err(Error::Unsupported("Gagliardo seminorm is one-dimensional".into()));
    }
    if !(s > T::zero()) || s == s.floor() {
        return Err(Error::Unsupported(format!("smoothness s = {s} must be positive and non-integer")));
    }
    if p.is_nan() || p < T::one() || p.is_infinite() {
        return Err(Error::InvalidParameter(format!("p = {p} must lie in [1, inf)")));
    }
    let k = s.floor().to_f64_lossy() as u32;
    let sigma = s - s.floor();
    let u = spectral_derivative(g, k);
    let du = spectral_derivative(g, k + 1);
    let n = grid.n_t();
    let h = grid.spacing(0);
    let period = grid.box_t();
    let a = T::one() + sigma * p;
    let kernel: Vec<T> = (0..n)
        .map(|m| {
            if m == 0 {
                T::zero()
            } else {
                periodized_power(T::from_usize_lossy(m) * h, period, a)
            }
        })
        .collect();
    let vals = u.values();
    let mut total = T::zero();
    let square = p == T::lit(2.0);
    for i in 0..n {
        let mut row = T::zero();
        for m in 1..n {
            let diff = vals[i] - vals[(i + m) % n];
            let d = if square { diff.norm_sqr() } else { diff.norm().powf(p) };
            row = row + d * kernel[m];
        }
        total = total + row;
    }
    total = total * h * h;
    // Near the diagonal |D^k g(x) - D^k g(y)| ~ |D^{k+1} g(x)| |x - y|.
    let r = h / T::lit(2.0);
    let e = p * (T::one() - sigma);
    let dp: T = du.values().iter().map(|v| v.norm().powf(p)).sum::<T>() * h;
    let excluded = dp * (T::lit(2.0) * r.powf(e) / e);
    Ok(Gagliardo {
        value: total.powf(p.recip()),
        excluded_mass: excluded,
    })
}

fn spectral_derivative<T: Real>(g: &SampledField<T>, k: u32) -> SampledField<T> {
    if k == 0 {
        return g.clone();
    }
    let lat = g.grid().lattice();
    g.forward()
        .map_modes(&lat, |j, l| crate::scalar::cpowi(cx(T::zero(), l.tau(j)), k))
        .inverse()
}

/// `sum_{n in Z} |r + n L|^{-a}` for `0 < r < L`, `a > 1`, via Hurwitz zeta values.
pub fn periodized_power<T: Real>(r: T, period: T, a: T) -> T {
    let x = r / period;
    (hurwitz_zeta(a, x) + hurwitz_zeta(a, T::one() - x)) * period.powf(-a)
}

/// `zeta(a, x) = sum_{n >= 0} (n + x)^{-a}` for `a > 1`, `x > 0`, by direct
/// summation followed by Euler-Maclaurin with four Bernoulli corrections.
pub fn hurwitz_zeta<T: Real>(a: T, x: T) -> T {
    const N: usize = 12;
    let mut sum = T::zero();
    for n in 0..N {
        sum = sum + (x + T::from_usize_lossy(n)).powf(-a);
    }
    let y = x + T::from_usize_lossy(N);
    let one = T::one();
    sum = sum + y.powf(one - a) / (a - one) + y.powf(-a) / T::lit(2.0);
    // B_2k / (2k)! times the rising factorial a (a+1) ... (a+2k-2).
    let b = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0];
    let mut rising = a;
    let mut fact = T::lit(2.0);
    let mut pow = y.powf(-a - one);
    for (i, bk) in b.iter().enumerate() {
        sum = sum + T::lit(*bk) / fact * rising * pow;
        let k2 = T::from_usize_lossy(2 * i + 2);
        rising = rising * (a + k2 - one) * (a + k2);
        fact = fact * (k2 + one) * (k2 + T::lit(2.0));
        pow = pow / (y * y);
    }
    sum
}
