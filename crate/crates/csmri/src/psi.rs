//! Per-pixel finite differences and their circulant diagonalization.
//!
//! For pixel i the two coefficients are
//!   `beta[2i]   = x(r, c) - x(r-1, c)` (vertical, pixel above)
//!   `beta[2i+1] = x(r, c) - x(r, c+1)` (horizontal, pixel to the right)
//! with periodic boundary (row -1 wraps to the last row, column n wraps to
//! column 0). Periodicity makes the normal matrix of the stacked operator a
//! 2-D circular convolution, so its eigenvalues under the unitary DFT are
//! `4 - 2cos(2 pi k1 / n) - 2cos(2 pi k2 / n)` and the image update can be
//! done per Fourier coefficient.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::image::{fft2, ImageGrid, Mode};

/// Eigenvalues of the difference normal matrix on an n x n grid, stored in
/// uncentered DFT order (DC first).
#[derive(Clone, Debug)]
pub struct DifferenceOperator {
    side: usize,
    eigenvalues: Vec<f64>,
}

impl DifferenceOperator {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

/// Stacked forward differences: returns 2N coefficients, two per pixel.
pub fn psi_apply(img: &ImageGrid) -> Vec<Complex64> {
    let n = img.side();
    let x = img.pixels();
    let mut beta = vec![Complex64::new(0.0, 0.0); 2 * n * n];
    for r in 0..n {
        let up = if r == 0 { n - 1 } else { r - 1 };
        for c in 0..n {
            let right = if c + 1 == n { 0 } else { c + 1 };
            let i = r * n + c;
            beta[2 * i] = x[i] - x[up * n + c];
            beta[2 * i + 1] = x[i] - x[r * n + right];
        }
    }
    beta
}

/// Adjoint of [`psi_apply`]: satisfies `<psi x, beta> = <x, psi^T beta>`.
pub fn psi_transpose_apply(beta: &[Complex64], side: usize, mode: Mode) -> Result<ImageGrid> {
    let n = side;
    if beta.len() != 2 * n * n {
        return Err(Error::DimensionMismatch(format!(
            "expected {} coefficients for side {n}, got {}",
            2 * n * n,
            beta.len()
        )));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for r in 0..n {
        let down = if r + 1 == n { 0 } else { r + 1 };
        for c in 0..n {
            let left = if c == 0 { n - 1 } else { c - 1 };
            let i = r * n + c;
            // +1 from this pixel's own differences, -1 from the neighbours
            // whose stencil references this pixel.
            out[i] = beta[2 * i] - beta[2 * (down * n + c)] + beta[2 * i + 1]
                - beta[2 * (r * n + left) + 1];
        }
    }
    ImageGrid::from_complex(n, out, mode)
}

/// Eigenvalues of `psi^T psi` computed by transforming its first column
/// (the operator is a periodic convolution). The DC eigenvalue is pinned to
/// exactly zero and FFT round-off below zero is clamped.
pub fn laplacian_eigenvalues(side: usize) -> DifferenceOperator {
    let n = side;
    let mut delta = ImageGrid::zeros(n, Mode::Real);
    delta.set(0, 0, Complex64::new(1.0, 0.0));
    let kernel = psi_transpose_apply(&psi_apply(&delta), n, Mode::Real).unwrap();
    let spectrum = fft2(&kernel);
    let scale = n as f64; // undo the unitary 1/n to get the convolution eigenvalues
    let mut eigenvalues: Vec<f64> =
        spectrum.pixels().iter().map(|z| (z.re * scale).max(0.0)).collect();
    eigenvalues[0] = 0.0;
    DifferenceOperator { side: n, eigenvalues }
}

/// Isotropic total variation: sum over pixels of the Euclidean norm of the
/// two-coefficient difference vector (complex magnitudes in complex mode).
pub fn tv_norm(beta: &[Complex64]) -> f64 {
    beta.chunks_exact(2)
        .map(|pair| (pair[0].norm_sqr() + pair[1].norm_sqr()).sqrt())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    use crate::image::tests::random_image;

    fn closed_form(n: usize, k1: usize, k2: usize) -> f64 {
        use std::f64::consts::PI;
        4.0 - 2.0 * (2.0 * PI * k1 as f64 / n as f64).cos()
            - 2.0 * (2.0 * PI * k2 as f64 / n as f64).cos()
    }

    /// Dense 2N x N difference matrix, for oracle use only.
    fn dense_psi(n: usize) -> Vec<f64> {
        let np = n * n;
        let mut m = vec![0.0f64; 2 * np * np];
        for r in 0..n {
            let up = if r == 0 { n - 1 } else { r - 1 };
            for c in 0..n {
                let right = if c + 1 == n { 0 } else { c + 1 };
                let i = r * n + c;
                m[(2 * i) * np + i] += 1.0;
                m[(2 * i) * np + up * n + c] -= 1.0;
                m[(2 * i + 1) * np + i] += 1.0;
                m[(2 * i + 1) * np + r * n + right] -= 1.0;
            }
        }
        m
    }

    #[test]
    fn constant_image_has_zero_differences() {
        let img = ImageGrid::from_real(5, vec![3.0; 25]).unwrap();
        assert!(psi_apply(&img).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn two_by_two_stencil_hand_check() {
        // [[0,1],[0,1]]: horizontal differences are +-1, vertical are 0.
        let img = ImageGrid::from_real(2, vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        let beta = psi_apply(&img);
        let vert: Vec<f64> = beta.iter().step_by(2).map(|z| z.re).collect();
        let horiz: Vec<f64> = beta.iter().skip(1).step_by(2).map(|z| z.re).collect();
        assert_eq!(vert, vec![0.0, 0.0, 0.0, 0.0]);
        assert_eq!(horiz, vec![-1.0, 1.0, -1.0, 1.0]);
        // Against the dense operator.
        let m = dense_psi(2);
        let x = [0.0, 1.0, 0.0, 1.0];
        for (row, z) in beta.iter().enumerate() {
            let want: f64 = (0..4).map(|j| m[row * 4 + j] * x[j]).sum();
            assert_eq!(z.re, want);
        }
    }

    #[test]
    fn transpose_of_constant_kernel_is_zero() {
        let img = ImageGrid::from_real(4, vec![2.0; 16]).unwrap();
        let out = psi_transpose_apply(&psi_apply(&img), 4, Mode::Real).unwrap();
        assert!(out.pixels().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(psi_transpose_apply(&[Complex64::new(0.0, 0.0); 7], 2, Mode::Real).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn adjoint_identity(seed in 0u64..500) {
            let n = 4;
            let x = random_image(n, Mode::Complex, seed);
            let b = random_image(n, Mode::Complex, seed + 7000);
            let mut beta = Vec::with_capacity(2 * n * n);
            for z in b.pixels() {
                beta.push(*z);
                beta.push(z.conj() * 0.5 + Complex64::new(0.25, -0.125));
            }
            let lhs: Complex64 = psi_apply(&x)
                .iter()
                .zip(beta.iter())
                .map(|(a, b)| a * b.conj())
                .sum();
            let rhs: Complex64 = x
                .pixels()
                .iter()
                .zip(psi_transpose_apply(&beta, n, Mode::Complex).unwrap().pixels())
                .map(|(a, b)| a * b.conj())
                .sum();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn dc_eigenvalue_is_exactly_zero_and_unique() {
        for n in [2usize, 4, 8, 17] {
            let eig = laplacian_eigenvalues(n);
            let zeros = eig.eigenvalues().iter().filter(|&&v| v == 0.0).count();
            assert_eq!(zeros, 1, "n = {n}");
            assert_eq!(eig.eigenvalues()[0], 0.0);
        }
    }

    #[test]
    fn eigenvalues_match_closed_form() {
        for n in [4usize, 8, 9] {
            let eig = laplacian_eigenvalues(n);
            for k1 in 0..n {
                for k2 in 0..n {
                    let got = eig.eigenvalues()[k1 * n + k2];
                    assert!(
                        (got - closed_form(n, k1, k2)).abs() <= 1e-12,
                        "n={n} k=({k1},{k2}) got {got}"
                    );
                }
            }
        }
        // Spot value from the closed form: n=4, k=(2,2) gives 8.
        let eig = laplacian_eigenvalues(4);
        assert!((eig.eigenvalues()[2 * 4 + 2] - 8.0).abs() <= 1e-12);
    }

    #[test]
    fn eigenvalues_match_dense_eigendecomposition() {
        // Cross-check the FFT route against a dense eigendecomposition of
        // the 16x16 normal matrix.
        let n = 4;
        let np = n * n;
        let m = dense_psi(n);
        let mut gram = vec![Complex64::new(0.0, 0.0); np * np];
        for a in 0..np {
            for b in 0..np {
                let mut sum = 0.0;
                for row in 0..2 * np {
                    sum += m[row * np + a] * m[row * np + b];
                }
                gram[a * np + b] = Complex64::new(sum, 0.0);
            }
        }
        let dense = crate::linalg::hermitian_eigen(&gram, np);
        let mut fft_route = laplacian_eigenvalues(n).eigenvalues().to_vec();
        fft_route.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in dense.values.iter().zip(fft_route.iter()) {
            assert!((a - b).abs() <= 1e-10, "dense {a} vs fft {b}");
        }
    }

    #[test]
    fn eigenvalues_nonnegative_and_symmetric() {
        let n = 8;
        let eig = laplacian_eigenvalues(n);
        for k1 in 0..n {
            for k2 in 0..n {
                let v = eig.eigenvalues()[k1 * n + k2];
                let mirrored = eig.eigenvalues()[((n - k1) % n) * n + (n - k2) % n];
                assert!(v >= 0.0);
                assert!((v - mirrored).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn difference_energy_matches_spectral_form() {
        // |psi x|^2 == sum_i lambda_i |theta_i|^2 with theta = fft2(x).
        let n = 8;
        let x = random_image(n, Mode::Complex, 40);
        let beta = psi_apply(&x);
        let lhs: f64 = beta.iter().map(|z| z.norm_sqr()).sum();
        let theta = fft2(&x);
        let eig = laplacian_eigenvalues(n);
        let rhs: f64 = theta
            .pixels()
            .iter()
            .zip(eig.eigenvalues())
            .map(|(t, l)| l * t.norm_sqr())
            .sum();
        assert!((lhs - rhs).abs() <= 1e-10 * lhs.max(1.0));
    }
}
