//! Overlapping patch extraction and aggregation with wrap-around.
//!
//! Every pixel is the upper-left corner of one patch (stride 1), and patch
//! indices wrap modulo the image side. With that convention each pixel is
//! covered by exactly P patches, so aggregation (the average of all patch
//! entries covering a pixel) exactly inverts extraction.
//!
//! Patch entries are vectorized row-major within the patch, and patch i
//! corresponds to pixel i in row-major order. Both orders are frozen: the
//! sparse-coding state and the on-disk dictionary format rely on them.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{ImageGrid, Mode};

/// Patch geometry. The stride is fixed at one pixel and the boundary rule
/// is fixed to wrap-around; only the patch side is configurable.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PatchConfig {
    patch_side: usize,
}

impl Default for PatchConfig {
    fn default() -> Self {
        PatchConfig { patch_side: 6 }
    }
}

impl PatchConfig {
    pub fn new(patch_side: usize) -> Result<Self> {
        if patch_side == 0 {
            return Err(Error::InvalidConfig("patch side must be positive".into()));
        }
        Ok(PatchConfig { patch_side })
    }

    pub fn patch_side(&self) -> usize {
        self.patch_side
    }

    /// Number of pixels per patch (P).
    pub fn patch_len(&self) -> usize {
        self.patch_side * self.patch_side
    }
}

/// A P x N matrix of vectorized patches, stored column-major so each
/// patch is contiguous.
#[derive(Clone, Debug)]
pub struct PatchMatrix {
    p: usize,
    n_cols: usize,
    mode: Mode,
    data: Vec<Complex64>,
}

impl PatchMatrix {
    pub fn zeros(p: usize, n_cols: usize, mode: Mode) -> Self {
        PatchMatrix { p, n_cols, mode, data: vec![Complex64::new(0.0, 0.0); p * n_cols] }
    }

    pub fn patch_len(&self) -> usize {
        self.p
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn column(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.p..(i + 1) * self.p]
    }

    pub fn column_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.p..(i + 1) * self.p]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Mean-removed variance of all entries. Because each pixel appears in
    /// exactly P patches this equals the pixel variance of the source image.
    pub fn variance(&self) -> f64 {
        let n = self.data.len() as f64;
        let mean = self.data.iter().sum::<Complex64>() / n;
        self.data.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / n
    }
}

/// Extract all N overlapping patches of `img`; column i is the patch whose
/// upper-left corner is pixel i, indices taken modulo the side.
pub fn extract_patches(img: &ImageGrid, cfg: &PatchConfig) -> Result<PatchMatrix> {
    let n = img.side();
    let ps = cfg.patch_side;
    if ps > n {
        return Err(Error::InvalidConfig(format!(
            "patch side {ps} exceeds image side {n}"
        )));
    }
    let p = cfg.patch_len();
    let n_cols = img.n_pixels();
    let mut out = PatchMatrix::zeros(p, n_cols, img.mode());
    let pixels = img.pixels();
    out.data
        .par_chunks_exact_mut(p)
        .enumerate()
        .for_each(|(i, col)| {
            let r0 = i / n;
            let c0 = i % n;
            for dr in 0..ps {
                let rr = (r0 + dr) % n;
                for dc in 0..ps {
                    let cc = (c0 + dc) % n;
                    col[dr * ps + dc] = pixels[rr * n + cc];
                }
            }
        });
    Ok(out)
}

/// Average the patch entries covering each pixel back into an image:
/// `(1/P) * sum_i R_i^T cols_i`. Exactly inverts [`extract_patches`].
///
/// The accumulation order is fixed (sequential over patches) so results are
/// reproducible regardless of thread count.
pub fn aggregate_patches(cols: &PatchMatrix, cfg: &PatchConfig) -> Result<ImageGrid> {
    let p = cfg.patch_len();
    let ps = cfg.patch_side;
    if cols.patch_len() != p {
        return Err(Error::DimensionMismatch(format!(
            "patch matrix has {} rows, config expects {p}",
            cols.patch_len()
        )));
    }
    let n_cols = cols.n_cols();
    let n = (n_cols as f64).sqrt().round() as usize;
    if n * n != n_cols {
        return Err(Error::DimensionMismatch(format!(
            "column count {n_cols} is not a square"
        )));
    }
    if ps > n {
        return Err(Error::InvalidConfig(format!(
            "patch side {ps} exceeds image side {n}"
        )));
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); n_cols];
    for i in 0..n_cols {
        let r0 = i / n;
        let c0 = i % n;
        let col = cols.column(i);
        for dr in 0..ps {
            let rr = (r0 + dr) % n;
            for dc in 0..ps {
                let cc = (c0 + dc) % n;
                acc[rr * n + cc] += col[dr * ps + dc];
            }
        }
    }
    let scale = 1.0 / p as f64;
    for z in &mut acc {
        *z *= scale;
    }
    ImageGrid::from_complex(n, acc, cols.mode())
}
