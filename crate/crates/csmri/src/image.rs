//! Square image container and the unitary 2-D Fourier transform.
//!
//! Pixels are stored row-major as `Complex64`. A grid in [`Mode::Real`]
//! keeps every imaginary component exactly zero; operations that could
//! introduce imaginary round-off (inverse transforms) zero it explicitly.
//!
//! The transform pair is unitary (a factor of 1/n in each direction), so
//! `ifft2` is the exact inverse of `fft2` and energy is preserved. That
//! convention is what makes the Fourier-domain image update coefficient-wise
//! exact.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether a grid represents a real-valued or complex-valued image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Real,
    Complex,
}

/// An n x n image (or k-space grid), row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageGrid {
    side: usize,
    mode: Mode,
    pixels: Vec<Complex64>,
}

impl ImageGrid {
    pub fn zeros(side: usize, mode: Mode) -> Self {
        ImageGrid { side, mode, pixels: vec![Complex64::new(0.0, 0.0); side * side] }
    }

    pub fn from_real(side: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != side * side {
            return Err(Error::DimensionMismatch(format!(
                "expected {} pixels for side {side}, got {}",
                side * side,
                values.len()
            )));
        }
        Ok(ImageGrid {
            side,
            mode: Mode::Real,
            pixels: values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        })
    }

    pub fn from_complex(side: usize, pixels: Vec<Complex64>, mode: Mode) -> Result<Self> {
        if pixels.len() != side * side {
            return Err(Error::DimensionMismatch(format!(
                "expected {} pixels for side {side}, got {}",
                side * side,
                pixels.len()
            )));
        }
        let mut img = ImageGrid { side, mode, pixels };
        if mode == Mode::Real {
            img.zero_imag();
        }
        Ok(img)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn n_pixels(&self) -> usize {
        self.side * self.side
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn pixels(&self) -> &[Complex64] {
        &self.pixels
    }

    pub(crate) fn pixels_mut(&mut self) -> &mut [Complex64] {
        &mut self.pixels
    }

    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.pixels[row * self.side + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        let v = if self.mode == Mode::Real { Complex64::new(value.re, 0.0) } else { value };
        self.pixels[row * self.side + col] = v;
    }

    /// Pixel magnitudes, the quantity metrics and 8/16-bit exports use.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.pixels.iter().map(|z| z.norm()).collect()
    }

    pub fn norm_l2(&self) -> f64 {
        self.pixels.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn zero_imag(&mut self) {
        for z in &mut self.pixels {
            z.im = 0.0;
        }
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn transpose(data: &mut Vec<Complex64>, n: usize) {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for r in 0..n {
        for c in 0..n {
            out[c * n + r] = data[r * n + c];
        }
    }
    *data = out;
}

fn fft2_raw(pixels: &[Complex64], n: usize, inverse: bool) -> Vec<Complex64> {
    let mut data = pixels.to_vec();
    PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
        for row in data.chunks_exact_mut(n) {
            fft.process(row);
        }
        transpose(&mut data, n);
        for row in data.chunks_exact_mut(n) {
            fft.process(row);
        }
        transpose(&mut data, n);
    });
    // One factor of 1/n per 2-D pass keeps the pair unitary.
    let scale = 1.0 / n as f64;
    for z in &mut data {
        *z *= scale;
    }
    data
}

/// Unitary 2-D DFT. The result is a k-space grid (always complex mode),
/// with the DC coefficient at index (0, 0).
pub fn fft2(img: &ImageGrid) -> ImageGrid {
    ImageGrid {
        side: img.side,
        mode: Mode::Complex,
        pixels: fft2_raw(&img.pixels, img.side, false),
    }
}

/// Unitary inverse 2-D DFT. In [`Mode::Real`] the imaginary parts of the
/// result are zeroed to suppress round-off drift.
pub fn ifft2(kspace: &ImageGrid, mode: Mode) -> ImageGrid {
    let mut img = ImageGrid {
        side: kspace.side,
        mode,
        pixels: fft2_raw(&kspace.pixels, kspace.side, true),
    };
    if mode == Mode::Real {
        img.zero_imag();
    }
    img
}
