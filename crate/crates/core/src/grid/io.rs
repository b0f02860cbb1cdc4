//! Flat field layouts: a header with the grid description followed by the
//! row-major samples as `(re, im)` pairs.
//!
//! CSV: first line `d,box_x,box_t,n_x,n_t`, second line the values, then one
//! `re,im` line per sample. Binary (little endian): `u32 d`, `f64 box_x`,
//! `f64 box_t`, `u64 n_x`, `u64 n_t`, then `2 * len` `f64` values. For `d = 1`
//! the spatial entries are written as `0` and `1`.

use std::io::{BufRead, BufReader, Read, Write};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::{Cplx, Real};

pub const CSV_HEADER: &str = "d,box_x,box_t,n_x,n_t";

pub fn write_csv<T: Real, W: Write>(grid: &Grid<T>, values: &[Cplx<T>], mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    writeln!(
        w,
        "{},{:e},{:e},{},{}",
        grid.dim(),
        grid.box_x().to_f64_lossy(),
        grid.box_t().to_f64_lossy(),
        grid.n_x(),
        grid.n_t()
    )?;
    for v in values {
        writeln!(w, "{:e},{:e}", v.re.to_f64_lossy(), v.im.to_f64_lossy())?;
    }
    Ok(())
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Format(format!("bad number {s:?}: {e}")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|e| Error::Format(format!("bad integer {s:?}: {e}")))
}

pub fn read_csv<T: Real, R: Read>(r: R) -> Result<(Grid<T>, Vec<Cplx<T>>)> {
    let mut lines = BufReader::new(r).lines();
    let mut next = || -> Result<String> {
        lines
            .next()
            .ok_or_else(|| Error::Format("unexpected end of field file".into()))?
            .map_err(Error::from)
    };
    let header = next()?;
    if header.trim() != CSV_HEADER {
        return Err(Error::Format(format!("unexpected header {header:?}")));
    }
    let desc = next()?;
    let parts: Vec<&str> = desc.split(',').collect();
    if parts.len() != 5 {
        return Err(Error::Format(format!("bad grid line {desc:?}")));
    }
    let grid = Grid::new(
        parse_usize(parts[0])?,
        T::lit(parse_f64(parts[1])?),
        T::lit(parse_f64(parts[2])?),
        parse_usize(parts[3])?,
        parse_usize(parts[4])?,
    )?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let line = next()?;
        let (re, im) = line
            .split_once(',')
            .ok_or_else(|| Error::Format(format!("bad sample line {line:?}")))?;
        values.push(Cplx::new(T::lit(parse_f64(re)?), T::lit(parse_f64(im)?)));
    }
    Ok((grid, values))
}

pub fn write_binary<T: Real, W: Write>(grid: &Grid<T>, values: &[Cplx<T>], mut w: W) -> Result<()> {
    w.write_all(&(grid.dim() as u32).to_le_bytes())?;
    w.write_all(&grid.box_x().to_f64_lossy().to_le_bytes())?;
    w.write_all(&grid.box_t().to_f64_lossy().to_le_bytes())?;
    w.write_all(&(grid.n_x() as u64).to_le_bytes())?;
    w.write_all(&(grid.n_t() as u64).to_le_bytes())?;
    for v in values {
        w.write_all(&v.re.to_f64_lossy().to_le_bytes())?;
        w.write_all(&v.im.to_f64_lossy().to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<T: Real, R: Read>(mut r: R) -> Result<(Grid<T>, Vec<Cplx<T>>)> {
    fn word<R: Read>(r: &mut R) -> Result<[u8; 8]> {
        let mut b = [0u8; 8];
        r.read_exact(&mut b)?;
        Ok(b)
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let d = u32::from_le_bytes(b4) as usize;
    let box_x = f64::from_le_bytes(word(&mut r)?);
    let box_t = f64::from_le_bytes(word(&mut r)?);
    let n_x = u64::from_le_bytes(word(&mut r)?) as usize;
    let n_t = u64::from_le_bytes(word(&mut r)?) as usize;
    let grid = Grid::new(d, T::lit(box_x), T::lit(box_t), n_x, n_t)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = f64::from_le_bytes(word(&mut r)?);
        let im = f64::from_le_bytes(word(&mut r)?);
        values.push(Cplx::new(T::lit(re), T::lit(im)));
    }
    Ok((grid, values))
}
