//! Cyclic Jacobi diagonalization of symmetric matrices.
//!
//! Sweeps rotate away each off-diagonal element in turn until the
//! off-diagonal Frobenius norm falls below `1e-13 * ||X||_F`; eigenpairs
//! are then sorted ascending. The rotation algebra follows the classical
//! two-sided scheme (Numerical Recipes, sec. 11.1).

use super::{DenseMatrix, MatrixError, SymmetricMatrixState};

const MAX_SWEEPS: usize = 100;
const REL_OFF_TOL: f64 = 1e-13;

/// Eigenvalues ascending with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DenseMatrix,
}

impl SpectralDecomposition {
    /// `max |Q L Q' - X|` over entries.
    pub fn reconstruction_error(&self, x: &SymmetricMatrixState) -> f64 {
        let n = self.eigenvalues.len();
        let q = &self.eigenvectors;
        let mut err = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += q.get(i, k) * self.eigenvalues[k] * q.get(j, k);
                }
                err = err.max((acc - x.entry(i, j)).abs());
            }
        }
        err
    }

    /// `max |Q'Q - I|` over entries.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.eigenvalues.len();
        let q = &self.eigenvectors;
        let mut err = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += q.get(k, i) * q.get(k, j);
                }
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((acc - target).abs());
            }
        }
        err
    }
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let v = a.get(i, j);
            acc += 2.0 * v * v;
        }
    }
    acc.sqrt()
}

/// Diagonalize a symmetric state. Fails only if the sweep limit is hit.
pub fn eigendecompose(state: &SymmetricMatrixState) -> Result<SpectralDecomposition, MatrixError> {
    if !state.is_finite() {
        return Err(MatrixError::NonFinite);
    }
    let n = state.dim();
    let mut a = state.to_dense();
    let mut q = DenseMatrix::identity(n);
    let frob = state.frobenius_norm();
    let tol = REL_OFF_TOL * frob;

    let mut converged = off_diagonal_norm(&a) <= tol;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(MatrixError::NonConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for r in p + 1..n {
                let apr = a.get(p, r);
                if apr == 0.0 {
                    continue;
                }
                let theta = 0.5 * (a.get(r, r) - a.get(p, p)) / apr;
                let t = if theta.abs() > 1e12 {
                    // rotation angle underflows; first-order tangent
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                let app = a.get(p, p);
                let arr = a.get(r, r);
                a.set(p, p, app - t * apr);
                a.set(r, r, arr + t * apr);
                a.set(p, r, 0.0);
                a.set(r, p, 0.0);
                for j in 0..n {
                    if j != p && j != r {
                        let ajp = a.get(j, p);
                        let ajr = a.get(j, r);
                        let njp = ajp - s * (ajr + tau * ajp);
                        let njr = ajr + s * (ajp - tau * ajr);
                        a.set(j, p, njp);
                        a.set(p, j, njp);
                        a.set(j, r, njr);
                        a.set(r, j, njr);
                    }
                }
                for j in 0..n {
                    let qjp = q.get(j, p);
                    let qjr = q.get(j, r);
                    q.set(j, p, qjp - s * (qjr + tau * qjp));
                    q.set(j, r, qjr + s * (qjp - tau * qjr));
                }
            }
        }
        converged = off_diagonal_norm(&a) <= tol;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).total_cmp(&a.get(j, j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| a.get(k, k)).collect();
    let mut eigenvectors = DenseMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors.set(i, dst, q.get(i, src));
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{GaussianStream, TAG_SAMPLER};

    fn random_symmetric(n: usize, stream: &mut GaussianStream) -> SymmetricMatrixState {
        let mut noise = vec![0.0; n * (n + 1) / 2];
        stream.fill_step(&mut noise);
        let mut s = SymmetricMatrixState::zeros(n, 0.0);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                s.set_entry(i, j, noise[k]);
                k += 1;
            }
        }
        s
    }

    #[test]
    fn diagonal_input_comes_back_sorted() {
        let mut s = SymmetricMatrixState::zeros(3, 0.0);
        s.set_entry(0, 0, 3.0);
        s.set_entry(1, 1, 1.0);
        s.set_entry(2, 2, 2.0);
        let spec = eigendecompose(&s).unwrap();
        assert_eq!(spec.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn analytic_two_by_two() {
        let mut s = SymmetricMatrixState::zeros(2, 0.0);
        s.set_entry(0, 1, 1.0);
        let spec = eigendecompose(&s).unwrap();
        assert!((spec.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_matrix_is_trivial() {
        let s = SymmetricMatrixState::zeros(4, 0.0);
        let spec = eigendecompose(&s).unwrap();
        assert_eq!(spec.eigenvalues, vec![0.0; 4]);
        assert!(spec.orthogonality_error() == 0.0);
    }

    #[test]
    fn random_matrices_reconstruct() {
        let mut stream = GaussianStream::new(77, 0, TAG_SAMPLER);
        for k in 0..20 {
            let n = 2 + (k * 7) % 49;
            let s = random_symmetric(n, &mut stream);
            let spec = eigendecompose(&s).unwrap();
            let scale = 1.0 + s.to_dense().max_abs();
            assert!(
                spec.reconstruction_error(&s) <= 1e-10 * scale,
                "n={n} err={}",
                spec.reconstruction_error(&s)
            );
            assert!(spec.orthogonality_error() <= 1e-10, "n={n}");
            assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn trace_and_frobenius_are_preserved() {
        let mut stream = GaussianStream::new(78, 0, TAG_SAMPLER);
        let s = random_symmetric(30, &mut stream);
        let spec = eigendecompose(&s).unwrap();
        let trace: f64 = (0..30).map(|i| s.entry(i, i)).sum();
        let eig_sum: f64 = spec.eigenvalues.iter().sum();
        assert!((trace - eig_sum).abs() < 1e-10 * (1.0 + trace.abs()));
        let frob = s.frobenius_norm();
        let eig_frob = spec.eigenvalues.iter().map(|l| l * l).sum::<f64>().sqrt();
        assert!((frob - eig_frob).abs() < 1e-10 * (1.0 + frob));
    }
}
