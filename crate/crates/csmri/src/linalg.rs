//! Dense Hermitian linear algebra for small systems.
//!
//! The dictionary sampler solves K x K systems (K ~ 100) and the
//! initializer eigendecomposes a P x P patch Gram matrix (P ~ 36), so a
//! dependency-free Jacobi eigensolver and Cholesky factorization are
//! enough. Matrices are stored row-major as `Vec<Complex64>`.
//!
//! All routines work on complex storage. When every imaginary part of the
//! input is exactly zero the outputs also have exactly-zero imaginary
//! parts, which is what keeps real-mode runs free of imaginary drift.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column-major eigenvectors: vector `k` occupies `[k*n .. (k+1)*n]`.
    pub vectors: Vec<Complex64>,
}

/// Cyclic Jacobi eigendecomposition of a Hermitian `n x n` matrix.
///
/// Each rotation first removes the phase of the pivot entry and then
/// applies the classical symmetric Givens rotation, so the method handles
/// complex Hermitian input directly.
pub fn hermitian_eigen(a: &[Complex64], n: usize) -> HermitianEigen {
    assert_eq!(a.len(), n * n, "matrix storage must be n*n");
    let mut m = a.to_vec();
    // v starts as the identity; columns accumulate the eigenvectors.
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }

    let fro: f64 = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = 1e-14 * fro.max(f64::MIN_POSITIVE);

    for _sweep in 0..80 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                let abs = apq.norm();
                if abs == 0.0 {
                    continue;
                }
                // Unitary phase that makes the pivot real positive.
                let phase = apq / Complex64::new(abs, 0.0);
                let app = m[p * n + p].re;
                let aqq = m[q * n + q].re;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // R restricted to (p,q): [[c, s], [-s*conj(phase), c*conj(phase)]]
                let rpp = Complex64::new(c, 0.0);
                let rpq = Complex64::new(s, 0.0);
                let rqp = -phase.conj() * s;
                let rqq = phase.conj() * c;

                // Columns: M <- M R, V <- V R.
                for i in 0..n {
                    let mip = m[i * n + p];
                    let miq = m[i * n + q];
                    m[i * n + p] = mip * rpp + miq * rqp;
                    m[i * n + q] = mip * rpq + miq * rqq;
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = vip * rpp + viq * rqp;
                    v[i * n + q] = vip * rpq + viq * rqq;
                }
                // Rows: M <- R^H M.
                for j in 0..n {
                    let mpj = m[p * n + j];
                    let mqj = m[q * n + j];
                    m[p * n + j] = rpp.conj() * mpj + rqp.conj() * mqj;
                    m[q * n + j] = rpq.conj() * mpj + rqq.conj() * mqj;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());

    let mut values = Vec::with_capacity(n);
    let mut vectors = vec![Complex64::new(0.0, 0.0); n * n];
    for (k, &src) in order.iter().enumerate() {
        values.push(diag[src]);
        // Fix the phase so the largest-magnitude component is real positive.
        let mut best = 0usize;
        let mut best_mag = -1.0f64;
        for i in 0..n {
            let mag = v[i * n + src].norm();
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        let pivot = v[best * n + src];
        let fix = if best_mag > 0.0 {
            pivot.conj() / Complex64::new(best_mag, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            vectors[k * n + i] = v[i * n + src] * fix;
        }
    }
    HermitianEigen { values, vectors }
}

/// Cholesky factorization `a = L L^H` of a Hermitian positive-definite
/// matrix. Returns the lower factor, row-major.
pub fn cholesky(a: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    assert_eq!(a.len(), n * n, "matrix storage must be n*n");
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut d = a[j * n + j].re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if !(d > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "matrix is not positive definite (pivot {j} = {d})"
            )));
        }
        let djj = d.sqrt();
        l[j * n + j] = Complex64::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = sum / djj;
        }
    }
    Ok(l)
}

/// Solve `L y = b` in place (forward substitution, `L` lower triangular).
pub fn solve_lower(l: &[Complex64], n: usize, b: &mut [Complex64]) {
    for i in 0..n {
        let mut sum = b[i];
        for j in 0..i {
            sum -= l[i * n + j] * b[j];
        }
        b[i] = sum / l[i * n + i].re;
    }
}

/// Solve `L^H x = y` in place (backward substitution).
pub fn solve_upper_hermitian(l: &[Complex64], n: usize, b: &mut [Complex64]) {
    for i in (0..n).rev() {
        let mut sum = b[i];
        for j in (i + 1)..n {
            sum -= l[j * n + i].conj() * b[j];
        }
        b[i] = sum / l[i * n + i].re;
    }
}

/// Solve `A x = b` in place given the Cholesky factor of `A`.
pub fn solve_with_cholesky(l: &[Complex64], n: usize, b: &mut [Complex64]) {
    solve_lower(l, n, b);
    solve_upper_hermitian(l, n, b);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    use crate::rng::derive_rng;

    fn random_hermitian(n: usize, seed: u64, complex: bool) -> Vec<Complex64> {
        let mut rng = derive_rng(seed, &[99]);
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let re: f64 = rng.gen::<f64>() - 0.5;
                let im: f64 = if complex && i != j { rng.gen::<f64>() - 0.5 } else { 0.0 };
                a[i * n + j] = Complex64::new(re, im);
                a[j * n + i] = Complex64::new(re, -im);
            }
        }
        a
    }

    fn matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i * n + k];
                for j in 0..n {
                    c[i * n + j] += aik * b[k * n + j];
                }
            }
        }
        c
    }

    #[test]
    fn eigen_reconstructs_hermitian_matrix() {
        for &complex in &[false, true] {
            let n = 9;
            let a = random_hermitian(n, 5, complex);
            let eig = hermitian_eigen(&a, n);
            // Rebuild sum_k lambda_k v_k v_k^H and compare.
            let mut rec = vec![Complex64::new(0.0, 0.0); n * n];
            for k in 0..n {
                let v = &eig.vectors[k * n..(k + 1) * n];
                for i in 0..n {
                    for j in 0..n {
                        rec[i * n + j] += v[i] * v[j].conj() * eig.values[k];
                    }
                }
            }
            let err: f64 = rec
                .iter()
                .zip(a.iter())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err < 1e-10, "reconstruction error {err}");
        }
    }

    #[test]
    fn eigen_vectors_are_orthonormal() {
        let n = 8;
        let a = random_hermitian(n, 11, true);
        let eig = hermitian_eigen(&a, n);
        for k1 in 0..n {
            for k2 in 0..n {
                let dot: Complex64 = (0..n)
                    .map(|i| eig.vectors[k1 * n + i].conj() * eig.vectors[k2 * n + i])
                    .sum();
                let expect = if k1 == k2 { 1.0 } else { 0.0 };
                assert!((dot.norm() - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn eigen_real_input_stays_exactly_real() {
        let n = 7;
        let a = random_hermitian(n, 3, false);
        let eig = hermitian_eigen(&a, n);
        assert!(eig.vectors.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn eigen_values_sorted_descending() {
        let a = random_hermitian(6, 1, true);
        let eig = hermitian_eigen(&a, 6);
        for w in eig.values.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn cholesky_solve_roundtrip() {
        let n = 10;
        // A = B B^H + n I is Hermitian positive definite.
        let b = random_hermitian(n, 21, true);
        let mut a = matmul(&b, &b, n);
        for i in 0..n {
            a[i * n + i] += Complex64::new(n as f64, 0.0);
        }
        let l = cholesky(&a, n).unwrap();
        let mut rng = derive_rng(4, &[1]);
        let x: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        // rhs = A x, then solve and compare.
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            for j in 0..n {
                rhs[i] += a[i * n + j] * x[j];
            }
        }
        solve_with_cholesky(&l, n, &mut rhs);
        let err: f64 = rhs.iter().zip(x.iter()).map(|(u, v)| (u - v).norm()).sum();
        assert!(err < 1e-9, "solve error {err}");
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let n = 2;
        let a = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        assert!(cholesky(&a, n).is_err());
    }
}
