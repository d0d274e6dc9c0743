//! Matrix-valued process engine: symmetric Brownian motion, Wishart
//! sampling, and Euler-Maruyama steps of the matrix flow
//!
//! ```text
//! dX = g(X) dB h(X) + h(X) dB' g(X) + b(X) dt
//! ```
//!
//! where scalar coefficients act on the spectrum through full
//! diagonalization (`f(X) = Q f(L) Q'`). Diagonalization is a cyclic Jacobi
//! sweep kept in-repo for bit-reproducibility; cost is O(N^3) per step,
//! which is the accepted price at desk scale — the particle engine is the
//! fast path.

mod jacobi;

pub use jacobi::{eigendecompose, SpectralDecomposition};

use crate::catalog::{CoefficientModel, ModelKind};
use crate::rng::GaussianStream;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MatrixError {
    #[error("Jacobi sweep limit reached without convergence ({0} sweeps)")]
    NonConvergence(usize),
    #[error("matrix flow requires a matrix-eigenvalue model")]
    WrongModelKind,
    #[error("matrix entries must be finite")]
    NonFinite,
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    a: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        let n = self.n;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += aik * rhs.a[k * n + j];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> DenseMatrix {
        let n = self.n;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }
}

/// Symmetric matrix state with the upper triangle stored once, so
/// `entry(i, j) == entry(j, i)` holds exactly by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrixState {
    dim: usize,
    upper: Vec<f64>,
    time: f64,
}

impl SymmetricMatrixState {
    pub fn zeros(dim: usize, time: f64) -> Self {
        Self {
            dim,
            upper: vec![0.0; dim * (dim + 1) / 2],
            time,
        }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        r * self.dim - r * (r + 1) / 2 + c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.upper[self.idx(i, j)]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.upper[k] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.upper.iter().all(|v| v.is_finite())
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, self.entry(i, j));
            }
        }
        m
    }

    /// Absorb rounding asymmetry of a dense result by averaging with its
    /// transpose while packing.
    pub fn from_dense_symmetrized(m: &DenseMatrix, time: f64) -> Self {
        let mut s = Self::zeros(m.dim(), time);
        for i in 0..m.dim() {
            for j in i..m.dim() {
                s.set_entry(i, j, 0.5 * (m.get(i, j) + m.get(j, i)));
            }
        }
        s
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = self.entry(i, j);
                acc += v * v;
            }
        }
        acc.sqrt()
    }
}

/// Symmetric Brownian motion at time `t`: independent entries with
/// variance `t/n` off the diagonal and `2t/n` on it.
pub fn sample_symmetric_brownian(
    n: usize,
    t: f64,
    stream: &mut GaussianStream,
) -> SymmetricMatrixState {
    assert!(n >= 1 && t > 0.0);
    let mut noise = vec![0.0; n * (n + 1) / 2];
    stream.fill_step(&mut noise);
    let mut state = SymmetricMatrixState::zeros(n, t);
    let off = (t / n as f64).sqrt();
    let diag = (2.0 * t / n as f64).sqrt();
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            let scale = if i == j { diag } else { off };
            state.set_entry(i, j, scale * noise[k]);
            k += 1;
        }
    }
    state
}

/// Normalized Wishart sample `(1/n) B' B` with `B` a `p x n` matrix of
/// independent `N(0, t)` entries; positive semidefinite by construction.
pub fn sample_wishart(
    n: usize,
    p: usize,
    t: f64,
    stream: &mut GaussianStream,
) -> SymmetricMatrixState {
    assert!(n >= 1 && p >= 1 && t > 0.0);
    let mut b = vec![0.0; p * n];
    stream.fill_step(&mut b);
    let scale = t.sqrt();
    for v in &mut b {
        *v *= scale;
    }
    let mut state = SymmetricMatrixState::zeros(n, t);
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for k in 0..p {
                acc += b[k * n + i] * b[k * n + j];
            }
            state.set_entry(i, j, acc / n as f64);
        }
    }
    state
}

/// Apply a scalar function to the spectrum: `f(X) = Q f(L) Q'`.
fn functional_calculus(spec: &SpectralDecomposition, f: impl Fn(f64) -> f64) -> DenseMatrix {
    let n = spec.eigenvalues.len();
    let q = &spec.eigenvectors;
    let mut scaled = DenseMatrix::zeros(n);
    for i in 0..n {
        for k in 0..n {
            scaled.set(i, k, q.get(i, k) * f(spec.eigenvalues[k]));
        }
    }
    scaled.matmul(&q.transpose())
}

/// One Euler-Maruyama step of the matrix flow. `dB` is a full (not
/// symmetrized) Gaussian matrix; symmetry of the state comes from the
/// flow's structure plus re-symmetrization of rounding.
pub fn step_matrix_sde(
    state: &SymmetricMatrixState,
    model: &CoefficientModel,
    dt: f64,
    stream: &mut GaussianStream,
) -> Result<SymmetricMatrixState, MatrixError> {
    if model.kind() != ModelKind::MatrixEigenvalue {
        return Err(MatrixError::WrongModelKind);
    }
    assert!(dt > 0.0);
    if !state.is_finite() {
        return Err(MatrixError::NonFinite);
    }
    let n = state.dim();
    let spec = eigendecompose(state)?;
    let g_x = functional_calculus(&spec, |x| model.g(x).expect("matrix kind"));
    let h_x = functional_calculus(&spec, |x| model.h(x).expect("matrix kind"));
    let b_x = functional_calculus(&spec, |x| model.b(x));

    let mut db = DenseMatrix::zeros(n);
    let mut noise = vec![0.0; n * n];
    stream.fill_step(&mut noise);
    let s = dt.sqrt();
    for i in 0..n {
        for j in 0..n {
            db.set(i, j, s * noise[i * n + j]);
        }
    }

    let gbh = g_x.matmul(&db).matmul(&h_x);
    let hbg = h_x.matmul(&db.transpose()).matmul(&g_x);
    let mut next = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            next.set(
                i,
                j,
                state.entry(i, j) + gbh.get(i, j) + hbg.get(i, j) + b_x.get(i, j) * dt,
            );
        }
    }
    Ok(SymmetricMatrixState::from_dense_symmetrized(
        &next,
        state.time() + dt,
    ))
}
