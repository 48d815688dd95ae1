//! Pixel similarity graphs for segmentation experiments.
//!
//! Every pixel becomes a node. Two pixels `i, j` are joined when their
//! squared spatial distance is at most `r`, with weight
//! `exp(−‖p_i − p_j‖²/σ_d² − ‖c_i − c_j‖²/σ_I²)`.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Row-major raster with channel values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub rows: usize,
    pub cols: usize,
    pub channels: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(rows: usize, cols: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || channels == 0 {
            return Err(Error::InvalidParameter("image dimensions must be positive".into()));
        }
        if data.len() != rows * cols * channels {
            return Err(Error::InvalidParameter(format!(
                "expected {} values for a {rows}x{cols}x{channels} image, got {}",
                rows * cols * channels,
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidParameter(format!("pixel value {v} outside [0, 1]")));
        }
        Ok(Image { rows, cols, channels, data })
    }

    /// Grayscale image from a function of `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let data = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        Image::new(rows, cols, 1, data)
    }

    pub fn pixel(&self, row: usize, col: usize) -> &[f64] {
        let start = (row * self.cols + col) * self.channels;
        &self.data[start..start + self.channels]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    /// Gate on squared spatial distance.
    pub r: f64,
    pub sigma_d2: f64,
    pub sigma_i2: f64,
}

/// Node id to pixel bijection: node `row·cols + col`.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelGraphMap {
    pub rows: usize,
    pub cols: usize,
    pub params: KernelParams,
}

impl PixelGraphMap {
    pub fn node(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    pub fn position(&self, node: usize) -> (usize, usize) {
        (node / self.cols, node % self.cols)
    }

    pub fn node_count(&self) -> usize {
        self.rows * self.cols
    }

    /// One `nodeid row col` line per pixel.
    pub fn write<W: Write>(&self, mut out: W) -> io::Result<()> {
        for u in 0..self.node_count() {
            let (r, c) = self.position(u);
            writeln!(out, "{u} {r} {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ImageGraph {
    pub graph: WeightedGraph,
    pub map: PixelGraphMap,
    pub warnings: Vec<String>,
}

pub fn kernel_weight(spatial2: f64, color2: f64, params: &KernelParams) -> f64 {
    (-spatial2 / params.sigma_d2 - color2 / params.sigma_i2).exp()
}

fn row_edges(image: &Image, params: &KernelParams, row: usize, reach: usize) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::new();
    let cols = image.cols;
    for col in 0..cols {
        let u = row * cols + col;
        let cu = image.pixel(row, col);
        for r2 in row..(row + reach + 1).min(image.rows) {
            let dr = (r2 - row) as f64;
            let lo = if r2 == row { col + 1 } else { col.saturating_sub(reach) };
            for c2 in lo..(col + reach + 1).min(cols) {
                let dc = c2 as f64 - col as f64;
                let spatial2 = dr * dr + dc * dc;
                if spatial2 > params.r {
                    continue;
                }
                let color2: f64 = cu.iter().zip(image.pixel(r2, c2)).map(|(a, b)| (a - b) * (a - b)).sum();
                let w = kernel_weight(spatial2, color2, params);
                if w > 0.0 {
                    edges.push((u, r2 * cols + c2, w));
                }
            }
        }
    }
    edges
}

pub fn image_to_graph(image: &Image, params: KernelParams) -> Result<ImageGraph> {
    for (name, v) in [("r", params.r), ("sigma_d2", params.sigma_d2), ("sigma_i2", params.sigma_i2)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
    }
    let map = PixelGraphMap { rows: image.rows, cols: image.cols, params };
    let mut warnings = Vec::new();
    let reach = params.r.sqrt().floor() as usize;

    #[cfg(feature = "parallel")]
    let per_row: Vec<Vec<(usize, usize, f64)>> = {
        use rayon::prelude::*;
        (0..image.rows).into_par_iter().map(|row| row_edges(image, &params, row, reach)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_row: Vec<Vec<(usize, usize, f64)>> = (0..image.rows).map(|row| row_edges(image, &params, row, reach)).collect();

    let edges: Vec<_> = per_row.into_iter().flatten().collect();
    let graph = if edges.is_empty() {
        warnings.push(if map.node_count() == 1 {
            "single-pixel image gives a graph with one node and no edges".to_string()
        } else {
            format!("gate r = {} admits no pixel pairs; graph has no edges", params.r)
        });
        WeightedGraph::edgeless(map.node_count())
    } else {
        WeightedGraph::from_edges(map.node_count(), &edges)?.0
    };
    Ok(ImageGraph { graph, map, warnings })
}
