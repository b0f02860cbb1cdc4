//! Parabolic Fourier symbols on `(xi', tau)`.
//!
//! All complex powers use the principal branch with the cut on the negative
//! real axis. Since `|xi'|^2 + i tau` has nonnegative real part it never
//! touches the cut except at the origin.

use crate::error::{Error, Result};
use crate::grid::{Grid, SpectralField};
use crate::lp_bank::bump;
use crate::scalar::{cpowi, cx, Cplx, Real};

/// Principal square root of `a + i b` for `a >= 0`, computed without
/// trigonometry so that `root(xi', -tau) = conj(root(xi', tau))` holds exactly.
pub fn principal_sqrt<T: Real>(a: T, b: T) -> Cplx<T> {
    let m = a.hypot(b);
    if m == T::zero() {
        return cx(T::zero(), T::zero());
    }
    if a >= T::zero() {
        let s = ((m + a) / T::lit(2.0)).sqrt();
        cx(s, b / (s + s))
    } else {
        let s = ((m - a) / T::lit(2.0)).sqrt();
        let s = if b < T::zero() { -s } else { s };
        cx(b / (s + s), s)
    }
}

fn norm_sq<T: Real>(xi: &[T]) -> T {
    xi.iter().fold(T::zero(), |a, &x| a + x * x)
}

/// `sqrt(|xi'|^2 + i tau)`.
pub fn root<T: Real>(xi: &[T], tau: T) -> Cplx<T> {
    principal_sqrt(norm_sq(xi), tau)
}

/// Same as [`root`] from a precomputed `|xi'|^2`.
pub fn root_from_sq<T: Real>(xi_sq: T, tau: T) -> Cplx<T> {
    principal_sqrt(xi_sq, tau)
}

fn check_depth<T: Real>(x_d: T) -> Result<()> {
    if !(x_d >= T::zero()) {
        return Err(Error::InvalidParameter(format!("depth x_d = {x_d} must be >= 0")));
    }
    Ok(())
}

/// Dirichlet boundary-to-interior symbol `exp(-x_d root)`.
pub fn poisson_symbol<T: Real>(x_d: T, xi: &[T], tau: T) -> Result<Cplx<T>> {
    check_depth(x_d)?;
    Ok((-root(xi, tau) * x_d).exp())
}

/// Neumann boundary-to-interior symbol `-exp(-x_d root) / root`.
pub fn neumann_symbol<T: Real>(x_d: T, xi: &[T], tau: T) -> Result<Cplx<T>> {
    check_depth(x_d)?;
    let z = root(xi, tau);
    if z == cx(T::zero(), T::zero()) {
        return Err(Error::SingularSymbol);
    }
    Ok(-(-z * x_d).exp() / z)
}

/// `(|xi|^2 + i tau)^{s/2}` via the principal logarithm.
pub fn frac_power<T: Real>(s: T, xi: &[T], tau: T) -> Result<Cplx<T>> {
    frac_power_from_sq(s, norm_sq(xi), tau)
}

pub fn frac_power_from_sq<T: Real>(s: T, xi_sq: T, tau: T) -> Result<Cplx<T>> {
    let z = cx(xi_sq, tau);
    if z == cx(T::zero(), T::zero()) {
        return Err(Error::SingularSymbol);
    }
    if s == T::zero() {
        return Ok(cx(T::one(), T::zero()));
    }
    Ok((z.ln() * (s / T::lit(2.0))).exp())
}

/// Derivative multi-index: `alpha` over `(x', x_d)` (length `d`) and the
/// time order `beta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    alpha: Vec<u32>,
    beta: u32,
}

impl MultiIndex {
    pub fn new(alpha: &[i64], beta: i64) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidParameter("alpha must have d >= 1 entries".into()));
        }
        if alpha.iter().any(|&a| a < 0) || beta < 0 {
            return Err(Error::InvalidParameter(format!(
                "negative multi-index entry in alpha = {alpha:?}, beta = {beta}"
            )));
        }
        Ok(Self {
            alpha: alpha.iter().map(|&a| a as u32).collect(),
            beta: beta as u32,
        })
    }

    pub fn zero(d: usize) -> Self {
        Self {
            alpha: vec![0; d],
            beta: 0,
        }
    }

    /// `m` derivatives in the normal direction.
    pub fn normal(d: usize, m: u32) -> Self {
        let mut alpha = vec![0; d];
        alpha[d - 1] = m;
        Self { alpha, beta: 0 }
    }

    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// Normal order `alpha_d`.
    pub fn normal_order(&self) -> u32 {
        self.alpha[self.alpha.len() - 1]
    }

    /// Parabolic order `|alpha| + 2 beta`.
    pub fn order(&self) -> u32 {
        self.alpha.iter().sum::<u32>() + 2 * self.beta
    }

    /// Componentwise sum, i.e. the index of the composed derivative.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidParameter("multi-index dimensions differ".into()));
        }
        Ok(Self {
            alpha: self.alpha.iter().zip(&other.alpha).map(|(a, b)| a + b).collect(),
            beta: self.beta + other.beta,
        })
    }

    /// Every index of parabolic order `2m` in dimension `d`.
    pub fn all_of_order(d: usize, order: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for beta in 0..=order / 2 {
            let rest = order - 2 * beta;
            let mut alpha = vec![0u32; d];
            compositions(&mut alpha, 0, rest, &mut |a| {
                out.push(Self {
                    alpha: a.to_vec(),
                    beta,
                })
            });
        }
        out
    }
}

fn compositions(buf: &mut [u32], pos: usize, rest: u32, f: &mut dyn FnMut(&[u32])) {
    if pos + 1 == buf.len() {
        buf[pos] = rest;
        f(buf);
        return;
    }
    for a in (0..=rest).rev() {
        buf[pos] = a;
        compositions(buf, pos + 1, rest - a, f);
    }
}

/// `P = prod_k (i xi_k)^{alpha_k} (-root)^{alpha_d} (i tau)^beta`, with `0^0 = 1`.
pub fn deriv_symbol<T: Real>(index: &MultiIndex, xi: &[T], tau: T) -> Result<Cplx<T>> {
    if index.dim() != xi.len() + 1 {
        return Err(Error::InvalidParameter(format!(
            "multi-index has {} entries, expected d = {}",
            index.dim(),
            xi.len() + 1
        )));
    }
    Ok(deriv_symbol_with_root(index, xi, tau, root(xi, tau)))
}

pub(crate) fn deriv_symbol_with_root<T: Real>(index: &MultiIndex, xi: &[T], tau: T, z: Cplx<T>) -> Cplx<T> {
    let mut p = cx(T::one(), T::zero());
    for (k, &a) in index.alpha[..xi.len()].iter().enumerate() {
        p = p * cpowi(cx(T::zero(), xi[k]), a);
    }
    p * cpowi(-z, index.normal_order()) * cpowi(cx(T::zero(), tau), index.beta)
}

/// Tagged symbol, for callers that pick the multiplier at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum ParabolicSymbol<T> {
    Root,
    Poisson(T),
    Neumann(T),
    Deriv(MultiIndex),
    FracPow(T),
}

impl<T: Real> ParabolicSymbol<T> {
    pub fn eval(&self, xi: &[T], tau: T) -> Result<Cplx<T>> {
        match self {
            Self::Root => Ok(root(xi, tau)),
            Self::Poisson(x) => poisson_symbol(*x, xi, tau),
            Self::Neumann(x) => neumann_symbol(*x, xi, tau),
            Self::Deriv(mi) => deriv_symbol(mi, xi, tau),
            Self::FracPow(s) => frac_power(*s, xi, tau),
        }
    }

    /// Parabolic homogeneity degree; `None` for the depth-dependent symbols.
    pub fn degree(&self) -> Option<T> {
        match self {
            Self::Root => Some(T::one()),
            Self::Poisson(_) | Self::Neumann(_) => None,
            Self::Deriv(mi) => Some(T::from_u32(mi.order()).unwrap()),
            Self::FracPow(s) => Some(*s),
        }
    }

    /// Multiplies every coefficient by the symbol. A symbol that is singular
    /// at the origin is accepted only if the zero mode is negligible, and the
    /// zero mode of the result is then set to zero.
    pub fn apply(&self, field: &SpectralField<T>) -> Result<SpectralField<T>> {
        let lat = field.grid().lattice();
        let mut out = field.clone();
        for (k, c) in out.coeffs_mut().iter_mut().enumerate() {
            match self.eval(lat.xi(k), lat.tau(k)) {
                Ok(v) => *c = *c * v,
                Err(Error::SingularSymbol) if k == 0 && mean_negligible(field) => {
                    *c = cx(T::zero(), T::zero())
                }
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }
}

/// Relative size below which a zero mode counts as rounding residue:
/// `1e-9`, or `1000 eps` in low precision.
pub(crate) fn mean_tolerance<T: Real>() -> T {
    T::lit(1e-9).max(T::lit(1e3) * T::epsilon())
}

/// Zero mode small against the remaining coefficients (relative
/// `mean_tolerance`), or an identically zero field.
pub fn mean_negligible<T: Real>(field: &SpectralField<T>) -> bool {
    let c = field.coeffs();
    let rest = c[1..].iter().fold(T::zero(), |m, v| m.max(v.norm()));
    c[0].norm() <= mean_tolerance::<T>() * rest || c[0].norm() == T::zero()
}

const CUTOFF_OUTER: f64 = 1.584_962_500_721_156_3; // log2(3)

/// Smooth annulus cutoff `psi(r)`: one for `1/2 <= r <= 2`, zero outside
/// `(1/3, 3)`, a mollifier-based step in `log2 r` in between.
pub fn annulus_cutoff<T: Real>(r: T) -> T {
    if !(r > T::zero()) {
        return T::zero();
    }
    let u = r.log2().abs();
    if u <= T::one() {
        return T::one();
    }
    let outer = T::lit(CUTOFF_OUTER);
    if u >= outer {
        return T::zero();
    }
    let w = (u - T::one()) / (outer - T::one());
    // Same mollifier as the bank, read on (-1, 1) as a step profile.
    let a = bump(w);
    let b = bump(w - T::one());
    a / (a + b)
}

/// Minimum number of lattice points inside the cutoff annulus along each axis.
pub const MIN_ANNULUS_SAMPLES: usize = 8;

/// `|| (psi P exp(-x_d root))^vee ||_{L^1}` on the grid: the symbol is
/// sampled on the lattice, transformed back, and integrated by the Riemann sum.
pub fn kernel_decay_l1<T: Real>(index: &MultiIndex, x_d: T, grid: &Grid<T>) -> Result<T> {
    check_depth(x_d)?;
    if index.dim() != grid.dim() {
        return Err(Error::InvalidParameter(format!(
            "multi-index has {} entries, grid has d = {}",
            index.dim(),
            grid.dim()
        )));
    }
    check_annulus_resolved(grid)?;
    let lat = grid.lattice();
    let mut coeffs = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        let xi = lat.xi(k);
        let tau = lat.tau(k);
        let psi = annulus_cutoff(lat.radius(k));
        if psi == T::zero() {
            coeffs.push(cx(T::zero(), T::zero()));
            continue;
        }
        let z = root_from_sq(lat.xi_sq(k), tau);
        let p = deriv_symbol_with_root(index, xi, tau, z);
        coeffs.push(p * (-z * x_d).exp() * psi);
    }
    SpectralField::new(*grid, coeffs)?.inverse().lp_norm(T::one())
}

fn check_annulus_resolved<T: Real>(grid: &Grid<T>) -> Result<()> {
    let third = T::lit(1.0 / 3.0);
    let three = T::lit(3.0);
    for axis in 0..grid.ndim() {
        let time = axis + 1 == grid.ndim();
        let (lo, hi) = if time { (third * third, three * three) } else { (third, three) };
        let freqs = grid.axis_frequencies(axis);
        let inside = freqs.iter().filter(|&&f| f > lo && f < hi).count();
        let top = freqs.iter().fold(T::zero(), |m, &f| m.max(f));
        if inside < MIN_ANNULUS_SAMPLES || top < hi {
            return Err(Error::Unresolved(format!(
                "axis {axis}: {inside} samples inside the annulus, top frequency {top}"
            )));
        }
    }
    Ok(())
}
