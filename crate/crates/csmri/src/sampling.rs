//! K-space undersampling masks and the undersampled Fourier encoding.
//!
//! Masks are boolean grids over *centered* k-space (DC at `(n/2, n/2)`),
//! which is the natural layout for line- and angle-based trajectories.
//! Measured values are taken from the uncentered DFT grid through a fixed
//! index shift, in mask (row-major centered) order.
//!
//! Two practical generators are provided: variable-density Cartesian phase
//! encodes and uniformly spaced radial lines. A uniform-random generator is
//! included for testing only; random scatter sampling is not realizable on
//! an MRI scanner.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{fft2, ifft2, ImageGrid, Mode};
use crate::rng::{derive_rng, tag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaskKind {
    Cartesian,
    Radial,
    Random,
    Full,
}

impl std::fmt::Display for MaskKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MaskKind::Cartesian => "cartesian",
            MaskKind::Radial => "radial",
            MaskKind::Random => "random",
            MaskKind::Full => "full",
        };
        f.write_str(s)
    }
}

/// Boolean selection over centered k-space, plus bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplingMask {
    side: usize,
    selected: Vec<bool>,
    kind: MaskKind,
    requested_rate: f64,
    seed: u64,
}

impl SamplingMask {
    fn new(side: usize, selected: Vec<bool>, kind: MaskKind, requested_rate: f64, seed: u64) -> Self {
        debug_assert_eq!(selected.len(), side * side);
        debug_assert!(selected[(side / 2) * side + side / 2], "DC must be selected");
        SamplingMask { side, selected, kind, requested_rate, seed }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn kind(&self) -> MaskKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn requested_rate(&self) -> f64 {
        self.requested_rate
    }

    /// Achieved sampling fraction, `selected / n^2`.
    pub fn rate(&self) -> f64 {
        self.n_selected() as f64 / (self.side * self.side) as f64
    }

    pub fn n_selected(&self) -> usize {
        self.selected.iter().filter(|&&b| b).count()
    }

    /// Centered boolean grid, row-major.
    pub fn selected(&self) -> &[bool] {
        &self.selected
    }

    /// Map a centered grid index to the matching uncentered DFT index.
    pub fn uncentered_index(&self, centered: usize) -> usize {
        let n = self.side;
        let half = n / 2;
        let r = centered / n;
        let c = centered % n;
        ((r + n - half) % n) * n + (c + n - half) % n
    }

    /// Uncentered DFT indices of the selected locations, in mask order
    /// (ascending centered index). This order defines the measurement
    /// vector layout.
    pub fn selected_uncentered_indices(&self) -> Vec<usize> {
        (0..self.selected.len())
            .filter(|&i| self.selected[i])
            .map(|i| self.uncentered_index(i))
            .collect()
    }

    pub(crate) fn from_parts(
        side: usize,
        selected: Vec<bool>,
        kind: MaskKind,
        requested_rate: f64,
        seed: u64,
    ) -> Result<Self> {
        if selected.len() != side * side {
            return Err(Error::DimensionMismatch(format!(
                "mask bitmap has {} entries for side {side}",
                selected.len()
            )));
        }
        if !selected[(side / 2) * side + side / 2] {
            return Err(Error::InvalidConfig("mask does not select the DC coefficient".into()));
        }
        Ok(SamplingMask { side, selected, kind, requested_rate, seed })
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "sampling rate must lie in (0, 1], got {rate}"
        )));
    }
    Ok(())
}

fn check_side(side: usize) -> Result<()> {
    if side < 2 {
        return Err(Error::InvalidConfig(format!("mask side must be at least 2, got {side}")));
    }
    Ok(())
}

/// Variable-density Cartesian mask: full horizontal lines (phase encodes).
///
/// `ceil(rate * n)` lines are selected in total. A centered band of
/// `ceil(0.2 * rate * n)` lines is always taken; the rest are drawn without
/// replacement with probability proportional to `(1 - |d| / (n/2))^4`,
/// where `d` is the signed line distance from the center. Deterministic
/// for a fixed seed.
pub fn gen_cartesian(side: usize, rate: f64, seed: u64) -> Result<SamplingMask> {
    check_side(side)?;
    check_rate(rate)?;
    let n = side;
    let total_lines = ((rate * n as f64).ceil() as usize).clamp(1, n);
    let band = ((0.2 * rate * n as f64).ceil() as usize).clamp(1, total_lines);
    let center = n / 2;
    let band_start = center - (band / 2).min(center);

    let mut line_selected = vec![false; n];
    for r in band_start..(band_start + band).min(n) {
        line_selected[r] = true;
    }
    let mut rng = derive_rng(seed, &[tag::MASK, n as u64, total_lines as u64]);
    let mut remaining: Vec<usize> = (0..n).filter(|&r| !line_selected[r]).collect();
    let mut drawn = line_selected.iter().filter(|&&b| b).count();
    while drawn < total_lines {
        let weights: Vec<f64> = remaining
            .iter()
            .map(|&r| {
                let d = r as f64 - center as f64;
                let w = 1.0 - d.abs() / (n as f64 / 2.0);
                if w > 0.0 { w.powi(4) } else { 0.0 }
            })
            .collect();
        let total: f64 = weights.iter().sum();
        let pick = if total > 0.0 {
            let mut u = rng.gen::<f64>() * total;
            let mut idx = remaining.len() - 1;
            for (j, w) in weights.iter().enumerate() {
                if u < *w {
                    idx = j;
                    break;
                }
                u -= w;
            }
            idx
        } else {
            rng.gen_range(0..remaining.len())
        };
        line_selected[remaining.swap_remove(pick)] = true;
        drawn += 1;
    }

    let mut selected = vec![false; n * n];
    for r in 0..n {
        if line_selected[r] {
            selected[r * n..(r + 1) * n].fill(true);
        }
    }
    Ok(SamplingMask::new(n, selected, MaskKind::Cartesian, rate, seed))
}

fn rasterize_radial(side: usize, lines: usize) -> Vec<bool> {
    let n = side;
    let center = (n / 2) as f64;
    let mut selected = vec![false; n * n];
    for l in 0..lines {
        let theta = std::f64::consts::PI * l as f64 / lines as f64;
        let (dx, dy) = (theta.cos(), theta.sin());
        for dir in [1.0f64, -1.0] {
            let mut t = 0.0f64;
            loop {
                let x = center + dir * t * dx;
                let y = center + dir * t * dy;
                let col = x.round();
                let row = y.round();
                if col < 0.0 || row < 0.0 || col >= n as f64 || row >= n as f64 {
                    break;
                }
                selected[row as usize * n + col as usize] = true;
                t += 0.5;
            }
        }
    }
    selected
}

/// Radial mask: L diametral lines through the k-space center at angles
/// `pi * l / L`, rasterized by nearest-neighbor stepping at half-pixel
/// increments. L is the smallest line count whose union meets or exceeds
/// the target rate. Fully deterministic.
pub fn gen_radial(side: usize, rate: f64) -> Result<SamplingMask> {
    check_side(side)?;
    check_rate(rate)?;
    let n = side;
    let target = ((rate * (n * n) as f64).ceil() as usize).clamp(1, n * n);
    // A single rasterized diametral line covers at most ~2n pixels, which
    // bounds the smallest line count that can possibly reach the target.
    let start = (target / (2 * n)).max(1);
    let cap = ((4.0 * std::f64::consts::PI * n as f64).ceil() as usize).max(start + 1);
    for lines in start..=cap {
        let selected = rasterize_radial(n, lines);
        if selected.iter().filter(|&&b| b).count() >= target {
            return Ok(SamplingMask::new(n, selected, MaskKind::Radial, rate, 0));
        }
    }
    Err(Error::InvalidConfig(format!(
        "radial trajectory cannot reach rate {rate} on a {n}x{n} grid"
    )))
}

/// Uniform-random mask. Test-only convenience: scatter sampling cannot be
/// realized by a scanner trajectory. The DC coefficient is always included.
pub fn gen_random(side: usize, rate: f64, seed: u64) -> Result<SamplingMask> {
    check_side(side)?;
    check_rate(rate)?;
    let n = side;
    let total = ((rate * (n * n) as f64).ceil() as usize).clamp(1, n * n);
    let dc = (n / 2) * n + n / 2;
    let mut selected = vec![false; n * n];
    selected[dc] = true;
    let mut rng = derive_rng(seed, &[tag::MASK, n as u64, total as u64, 2]);
    let mut pool: Vec<usize> = (0..n * n).filter(|&i| i != dc).collect();
    for _ in 1..total {
        let j = rng.gen_range(0..pool.len());
        selected[pool.swap_remove(j)] = true;
    }
    Ok(SamplingMask::new(n, selected, MaskKind::Random, rate, seed))
}

/// Full sampling (every k-space location measured).
pub fn gen_full(side: usize) -> Result<SamplingMask> {
    check_side(side)?;
    Ok(SamplingMask::new(side, vec![true; side * side], MaskKind::Full, 1.0, 0))
}

/// Measured k-space data: the mask plus the complex values at the selected
/// locations, vectorized in mask order.
#[derive(Clone, Debug)]
pub struct KSpaceData {
    mask: SamplingMask,
    values: Vec<Complex64>,
    mode: Mode,
}

impl KSpaceData {
    pub fn new(mask: SamplingMask, values: Vec<Complex64>, mode: Mode) -> Result<Self> {
        if values.len() != mask.n_selected() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} selected locations",
                values.len(),
                mask.n_selected()
            )));
        }
        Ok(KSpaceData { mask, values, mode })
    }

    pub fn mask(&self) -> &SamplingMask {
        &self.mask
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn side(&self) -> usize {
        self.mask.side()
    }
}

/// Measure: `y = F_u x`, the unitary DFT of `x` restricted to the selected
/// locations in mask order.
pub fn apply_mask(x: &ImageGrid, mask: &SamplingMask) -> Result<KSpaceData> {
    if x.side() != mask.side() {
        return Err(Error::DimensionMismatch(format!(
            "image side {} vs mask side {}",
            x.side(),
            mask.side()
        )));
    }
    let k = fft2(x);
    let values = mask
        .selected_uncentered_indices()
        .into_iter()
        .map(|idx| k.pixels()[idx])
        .collect();
    KSpaceData::new(mask.clone(), values, x.mode())
}

/// Zero-filling reconstruction: insert the measured values into an
/// all-zero k-space grid and invert.
pub fn zero_fill(y: &KSpaceData) -> ImageGrid {
    let n = y.side();
    let mut grid = ImageGrid::zeros(n, Mode::Complex);
    for (pos, idx) in y.mask.selected_uncentered_indices().into_iter().enumerate() {
        grid.pixels_mut()[idx] = y.values[pos];
    }
    ifft2(&grid, y.mode)
}
