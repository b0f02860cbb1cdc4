//! Periodic space-time sampling boxes for boundary fields on `R^{d-1} x R`,
//! and the transform pair between physical samples and frequency coefficients.
//!
//! Layout: row-major with the `d - 1` spatial axes first and time last.
//! Sample `n` along an axis of length `L` with `N` points sits at
//! `-L/2 + n L/N`. Coefficients are stored in FFT order: index `k < N/2`
//! carries frequency `2 pi k / L`, index `k >= N/2` carries `2 pi (k - N) / L`.
//!
//! Normalization: `forward` approximates the continuous transform
//! `int u(x) e^{-i xi (x - x_0)} dx`, i.e. the DFT scaled by the cell volume
//! `V/N`; `inverse` is the DFT inverse scaled by `1/V`. Hence the zero mode is
//! the field mean times the box volume and
//! `||u||_{L^2(box)}^2 = (1/V) sum_k |u_k|^2`.

mod fft;
pub mod io;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rustfft::FftDirection;

use crate::error::{Error, Result};
use crate::scalar::{cx, Cplx, Real};

/// A periodic sampling box for `(x', t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    d: usize,
    box_x: T,
    box_t: T,
    n_x: usize,
    n_t: usize,
}

fn check_size(name: &str, n: usize) -> Result<()> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::Config(format!(
            "{name} = {n} must be a power of two >= 4"
        )));
    }
    Ok(())
}

impl<T: Real> Grid<T> {
    /// Builds a grid for the half space `R^d_+`. For `d = 1` the spatial box
    /// is absent and `box_x`, `n_x` are ignored.
    pub fn new(d: usize, box_x: T, box_t: T, n_x: usize, n_t: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Config("dimension d must be >= 1".into()));
        }
        check_size("n_t", n_t)?;
        if !(box_t > T::zero()) || !box_t.is_finite() {
            return Err(Error::Config(format!("box_t = {box_t} must be positive")));
        }
        if d == 1 {
            return Ok(Self {
                d,
                box_x: T::zero(),
                box_t,
                n_x: 1,
                n_t,
            });
        }
        check_size("n_x", n_x)?;
        if !(box_x > T::zero()) || !box_x.is_finite() {
            return Err(Error::Config(format!("box_x = {box_x} must be positive")));
        }
        Ok(Self {
            d,
            box_x,
            box_t,
            n_x,
            n_t,
        })
    }

    /// One-dimensional half line: only the time axis is sampled.
    pub fn time_only(box_t: T, n_t: usize) -> Result<Self> {
        Self::new(1, T::zero(), box_t, 1, n_t)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of boundary space variables, `d - 1`.
    pub fn spatial_dims(&self) -> usize {
        self.d - 1
    }

    pub fn box_x(&self) -> T {
        self.box_x
    }

    pub fn box_t(&self) -> T {
        self.box_t
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    /// Number of boundary axes (`d - 1` spatial plus time).
    pub fn ndim(&self) -> usize {
        self.d
    }

    pub fn shape(&self) -> Vec<usize> {
        let mut s = vec![self.n_x; self.d - 1];
        s.push(self.n_t);
        s
    }

    pub fn len(&self) -> usize {
        self.n_x.pow((self.d - 1) as u32) * self.n_t
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn volume(&self) -> T {
        self.box_x.powi((self.d - 1) as i32) * self.box_t
    }

    pub fn cell_volume(&self) -> T {
        self.volume() / T::from_usize_lossy(self.len())
    }

    fn axis_len_box(&self, axis: usize) -> (usize, T) {
        if axis + 1 == self.d {
            (self.n_t, self.box_t)
        } else {
            (self.n_x, self.box_x)
        }
    }

    /// Angular frequencies along `axis` in FFT order.
    pub fn axis_frequencies(&self, axis: usize) -> Vec<T> {
        let (n, l) = self.axis_len_box(axis);
        let two_pi = T::PI() + T::PI();
        (0..n)
            .map(|k| {
                let signed = if k < n / 2 { k as i64 } else { k as i64 - n as i64 };
                two_pi * T::from_i64(signed).unwrap() / l
            })
            .collect()
    }

    /// Sample coordinates along `axis`, starting at `-L/2`.
    pub fn axis_coordinates(&self, axis: usize) -> Vec<T> {
        let (n, l) = self.axis_len_box(axis);
        let h = l / T::from_usize_lossy(n);
        let half = l / T::lit(2.0);
        (0..n).map(|k| T::from_usize_lossy(k) * h - half).collect()
    }

    /// Grid spacing along `axis`.
    pub fn spacing(&self, axis: usize) -> T {
        let (n, l) = self.axis_len_box(axis);
        l / T::from_usize_lossy(n)
    }

    /// The box carrying `x -> u(2^k x', 4^k t)` with identical samples:
    /// spatial side divided by `2^k`, period divided by `4^k`.
    pub fn dilated(&self, k: i32) -> Self {
        let two = T::lit(2.0);
        let sx = two.powi(-k);
        let st = two.powi(-2 * k);
        Self {
            box_x: self.box_x * sx,
            box_t: self.box_t * st,
            ..*self
        }
    }

    /// Frequency lattice of this grid.
    pub fn lattice(&self) -> Lattice<T> {
        Lattice::new(self)
    }

    /// Smallest and largest anisotropic radius `|xi'| + |tau|^{1/2}` over
    /// nonzero lattice frequencies.
    pub fn radius_range(&self) -> (T, T) {
        let lat = self.lattice();
        let mut lo = T::infinity();
        let mut hi = T::zero();
        for k in 1..self.len() {
            let r = lat.radius(k);
            if r > T::zero() {
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        (lo, hi)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

/// Per-mode frequencies of a grid, indexed by the flat coefficient index.
#[derive(Debug, Clone)]
pub struct Lattice<T> {
    spatial: usize,
    xi: Vec<T>,
    xi_sq: Vec<T>,
    tau: Vec<T>,
    nyquist: Vec<bool>,
}

impl<T: Real> Lattice<T> {
    fn new(grid: &Grid<T>) -> Self {
        let spatial = grid.spatial_dims();
        let shape = grid.shape();
        let freqs: Vec<Vec<T>> = (0..grid.ndim()).map(|a| grid.axis_frequencies(a)).collect();
        let n = grid.len();
        let mut xi = Vec::with_capacity(n * spatial);
        let mut xi_sq = Vec::with_capacity(n);
        let mut tau = Vec::with_capacity(n);
        let mut nyquist = Vec::with_capacity(n);
        let mut idx = vec![0usize; shape.len()];
        for _ in 0..n {
            nyquist.push(idx.iter().zip(&shape).any(|(i, s)| *i == s / 2));
            let mut s = T::zero();
            for a in 0..spatial {
                let f = freqs[a][idx[a]];
                xi.push(f);
                s = s + f * f;
            }
            xi_sq.push(s);
            tau.push(freqs[spatial][idx[spatial]]);
            for a in (0..shape.len()).rev() {
                idx[a] += 1;
                if idx[a] < shape[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        Self {
            spatial,
            xi,
            xi_sq,
            tau,
            nyquist,
        }
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    /// Spatial frequency vector `xi'` of mode `k` (empty when `d = 1`).
    pub fn xi(&self, k: usize) -> &[T] {
        &self.xi[k * self.spatial..(k + 1) * self.spatial]
    }

    pub fn xi_sq(&self, k: usize) -> T {
        self.xi_sq[k]
    }

    pub fn tau(&self, k: usize) -> T {
        self.tau[k]
    }

    /// Whether mode `k` sits on a Nyquist index of some axis. Such modes have
    /// no conjugate partner, so real fields should carry none of them.
    pub fn is_nyquist(&self, k: usize) -> bool {
        self.nyquist[k]
    }

    /// Anisotropic radius `|xi'| + |tau|^{1/2}`.
    pub fn radius(&self, k: usize) -> T {
        self.xi_sq[k].sqrt() + self.tau[k].abs().sqrt()
    }
}

/// Boundary field in physical representation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField<T> {
    grid: Grid<T>,
    values: Vec<Cplx<T>>,
}

/// Boundary field in frequency representation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<T> {
    grid: Grid<T>,
    coeffs: Vec<Cplx<T>>,
}

impl<T: Real> SampledField<T> {
    pub fn new(grid: Grid<T>, values: Vec<Cplx<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid<T>) -> Self {
        Self {
            values: vec![Cplx::new(T::zero(), T::zero()); grid.len()],
            grid,
        }
    }

    /// Samples `f(x', t)` on the grid.
    pub fn from_fn<F: FnMut(&[T], T) -> Cplx<T>>(grid: Grid<T>, mut f: F) -> Self {
        let coords: Vec<Vec<T>> = (0..grid.ndim()).map(|a| grid.axis_coordinates(a)).collect();
        let shape = grid.shape();
        let spatial = grid.spatial_dims();
        let mut idx = vec![0usize; shape.len()];
        let mut x = vec![T::zero(); spatial];
        let mut values = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            for a in 0..spatial {
                x[a] = coords[a][idx[a]];
            }
            values.push(f(&x, coords[spatial][idx[spatial]]));
            for a in (0..shape.len()).rev() {
                idx[a] += 1;
                if idx[a] < shape[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        Self { grid, values }
    }

    /// Samples a real function.
    pub fn from_real_fn<F: FnMut(&[T], T) -> T>(grid: Grid<T>, mut f: F) -> Self {
        Self::from_fn(grid, |x, t| cx(f(x, t), T::zero()))
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[Cplx<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Cplx<T>] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Cplx<T>> {
        self.values
    }

    /// Forward transform (see the module docs for the normalization).
    pub fn forward(&self) -> SpectralField<T> {
        let mut data = self.values.clone();
        fft::fft_nd(&mut data, &self.grid.shape(), FftDirection::Forward);
        let scale = self.grid.cell_volume();
        for c in data.iter_mut() {
            *c = *c * scale;
        }
        SpectralField {
            grid: self.grid,
            coeffs: data,
        }
    }

    /// Riemann-sum `L^p(box)` norm; `p = inf` gives the largest modulus.
    pub fn lp_norm(&self, p: T) -> Result<T> {
        lp_norm_of(&self.values, self.grid.cell_volume(), p)
    }

    pub fn mean(&self) -> Cplx<T> {
        let n = T::from_usize_lossy(self.values.len());
        self.values.iter().fold(cx(T::zero(), T::zero()), |a, &v| a + v) / n
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    /// Largest `|Im u|`, the residue left by a real computation.
    pub fn max_imag(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.im.abs()))
    }

    /// The field with its sample mean removed.
    pub fn mean_free(&self) -> Self {
        let m = self.mean();
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| v - m).collect(),
        }
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    /// The same samples on the parabolically dilated box, i.e. `u(2^k x', 4^k t)`.
    pub fn dilated(&self, k: i32) -> Self {
        Self {
            grid: self.grid.dilated(k),
            values: self.values.clone(),
        }
    }

    pub fn write_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        io::write_csv(&self.grid, &self.values, &mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<P: AsRef<Path>>(path: P) -> Result<Self> {
        let (grid, values) = io::read_csv(File::open(path)?)?;
        Self::new(grid, values)
    }

    pub fn write_binary<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        io::write_binary(&self.grid, &self.values, &mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_binary<P: AsRef<Path>>(path: P) -> Result<Self> {
        let (grid, values) = io::read_binary(std::io::BufReader::new(File::open(path)?))?;
        Self::new(grid, values)
    }
}

pub(crate) fn lp_norm_of<T: Real>(values: &[Cplx<T>], cell: T, p: T) -> Result<T> {
    if p.is_nan() || p < T::one() {
        return Err(Error::InvalidParameter(format!(
            "L^p exponent p = {p} must satisfy 1 <= p <= inf"
        )));
    }
    if p.is_infinite() {
        return Ok(values.iter().fold(T::zero(), |m, v| m.max(v.norm())));
    }
    let sum = if p == T::one() {
        values.iter().map(|v| v.norm()).sum::<T>()
    } else if p == T::lit(2.0) {
        values.iter().map(|v| v.norm_sqr()).sum::<T>()
    } else if p == T::lit(4.0) {
        values.iter().map(|v| v.norm_sqr() * v.norm_sqr()).sum::<T>()
    } else {
        values.iter().map(|v| v.norm().powf(p)).sum::<T>()
    };
    Ok((sum * cell).powf(p.recip()))
}

impl<T: Real> SpectralField<T> {
    pub fn new(grid: Grid<T>, coeffs: Vec<Cplx<T>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                actual: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: Grid<T>) -> Self {
        Self {
            coeffs: vec![Cplx::new(T::zero(), T::zero()); grid.len()],
            grid,
        }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Cplx<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Cplx<T>] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Cplx<T>> {
        self.coeffs
    }

    pub fn inverse(&self) -> SampledField<T> {
        let mut data = self.coeffs.clone();
        fft::fft_nd(&mut data, &self.grid.shape(), FftDirection::Inverse);
        let scale = self.grid.volume().recip();
        for v in data.iter_mut() {
            *v = *v * scale;
        }
        SampledField {
            grid: self.grid,
            values: data,
        }
    }

    /// Coefficient of the zero frequency (mean times box volume).
    pub fn zero_mode(&self) -> Cplx<T> {
        self.coeffs[0]
    }

    /// `(1/V) sum_k |c_k|^2`, equal to `||u||_{L^2(box)}^2` by Parseval.
    pub fn l2_norm_sq(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<T>() / self.grid.volume()
    }

    /// Multiplies every coefficient by `symbol(k, c)` evaluated on the lattice.
    pub fn map_modes<F: FnMut(usize, &Lattice<T>) -> Cplx<T>>(&self, lattice: &Lattice<T>, mut symbol: F) -> Self {
        Self {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c * symbol(k, lattice))
                .collect(),
        }
    }

    pub fn scaled(&self, s: Cplx<T>) -> Self {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    /// Trigonometric interpolant at an arbitrary point `(x', t)`.
    pub fn evaluate(&self, x: &[T], t: T) -> Cplx<T> {
        let g = &self.grid;
        let spatial = g.spatial_dims();
        assert_eq!(x.len(), spatial, "point dimension");
        let half_x = g.box_x / T::lit(2.0);
        let half_t = g.box_t / T::lit(2.0);
        // Separable phases per axis.
        let phases: Vec<Vec<Cplx<T>>> = (0..g.ndim())
            .map(|a| {
                let offset = if a < spatial { x[a] + half_x } else { t + half_t };
                g.axis_frequencies(a)
                    .into_iter()
                    .map(|f| Cplx::from_polar(T::one(), f * offset))
                    .collect()
            })
            .collect();
        let shape = g.shape();
        let mut idx = vec![0usize; shape.len()];
        let mut acc = cx(T::zero(), T::zero());
        for &c in &self.coeffs {
            let mut ph = cx(T::one(), T::zero());
            for a in 0..shape.len() {
                ph = ph * phases[a][idx[a]];
            }
            acc = acc + c * ph;
            for a in (0..shape.len()).rev() {
                idx[a] += 1;
                if idx[a] < shape[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        acc / g.volume()
    }

    pub fn write_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        io::write_csv(&self.grid, &self.coeffs, &mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn write_binary<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        io::write_binary(&self.grid, &self.coeffs, &mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_binary<P: AsRef<Path>>(path: P) -> Result<Self> {
        let (grid, coeffs) = io::read_binary(std::io::BufReader::new(File::open(path)?))?;
        Self::new(grid, coeffs)
    }
}
