//! On-disk stacks: `manifest.json` (grid, nodes, weights, file list) next to
//! one binary field file per slice. Stacks with the analytic profile also
//! store the amplitude so they load back with it.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, SpectralField};
use crate::scalar::Real;
use crate::solver::SliceStack;

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    d: usize,
    box_x: f64,
    box_t: f64,
    n_x: usize,
    n_t: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    slices: Vec<String>,
    amplitude: Option<String>,
}

pub fn write_stack<T: Real, P: AsRef<Path>>(stack: &SliceStack<T>, dir: P) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let g = stack.grid();
    let mut slices = Vec::with_capacity(stack.len());
    for i in 0..stack.len() {
        let name = format!("slice_{i:04}.bin");
        stack.slice(i).write_binary(dir.join(&name))?;
        slices.push(name);
    }
    let amplitude = match stack.amplitude() {
        Some(a) => {
            a.write_binary(dir.join("amplitude.bin"))?;
            Some("amplitude.bin".to_string())
        }
        None => None,
    };
    let manifest = Manifest {
        d: g.dim(),
        box_x: g.box_x().to_f64_lossy(),
        box_t: g.box_t().to_f64_lossy(),
        n_x: g.n_x(),
        n_t: g.n_t(),
        nodes: stack.nodes().iter().map(|x| x.to_f64_lossy()).collect(),
        weights: stack.weights().iter().map(|x| x.to_f64_lossy()).collect(),
        slices,
        amplitude,
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(dir.join("manifest.json"), text)?;
    Ok(())
}

pub fn read_stack<T: Real, P: AsRef<Path>>(dir: P) -> Result<SliceStack<T>> {
    let dir = dir.as_ref();
    let text = fs::read_to_string(dir.join("manifest.json"))?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| Error::Format(e.to_string()))?;
    let grid = Grid::new(m.d, T::lit(m.box_x), T::lit(m.box_t), m.n_x, m.n_t)?;
    let nodes: Vec<T> = m.nodes.iter().map(|&x| T::lit(x)).collect();
    let weights: Vec<T> = m.weights.iter().map(|&x| T::lit(x)).collect();
    let load = |name: &str| -> Result<SpectralField<T>> {
        let f = SpectralField::read_binary(dir.join(name))?;
        if f.grid() != &grid {
            return Err(Error::GridMismatch);
        }
        Ok(f)
    };
    match m.amplitude {
        Some(a) => SliceStack::poisson(load(&a)?, nodes, weights),
        None => {
            let slices = m.slices.iter().map(|s| load(s)).collect::<Result<Vec<_>>>()?;
            SliceStack::explicit(slices, nodes, weights)
        }
    }
}
