//! Discrete principal-value Hilbert transform and the static density
//! equation it feeds.
//!
//! `H(f)(u) = (1/pi) PV int f(x) / (u - x) dx` is approximated on a uniform
//! grid by the skip-diagonal sum `(1/pi) sum_{k != j} f(u_k) dx / (u_j -
//! u_k)`: the symmetric pairing of terms around the singular cell cancels
//! the leading singularity, so no explicit correction term is added. Grids
//! must be uniform; transparency of the error analysis is the point, so no
//! FFT route is offered.

use super::LawError;

fn check_uniform(grid: &[f64]) -> Result<f64, LawError> {
    if grid.len() < 3 {
        return Err(LawError::TooFewSamples(3));
    }
    let dx = grid[1] - grid[0];
    if !(dx > 0.0) {
        return Err(LawError::NonUniformGrid);
    }
    for w in grid.windows(2) {
        if ((w[1] - w[0]) - dx).abs() > 1e-9 * dx {
            return Err(LawError::NonUniformGrid);
        }
    }
    Ok(dx)
}

/// Discrete Hilbert transform of samples `f` on the uniform `grid`.
/// Callers should pad the grid so `f` decays at the ends.
pub fn hilbert_transform(grid: &[f64], f: &[f64]) -> Result<Vec<f64>, LawError> {
    check_uniform(grid)?;
    if f.len() != grid.len() {
        return Err(LawError::InvalidParameter(
            "sample count must match the grid".into(),
        ));
    }
    // f_k dx / (u_j - u_k) = f_k / (j - k): the spacing cancels
    let n = grid.len();
    let mut out = vec![0.0; n];
    for j in 0..n {
        let mut acc = 0.0;
        // terms k and 2j - k pair up with opposite signs near the pole,
        // cancelling the leading singularity
        for k in 0..n {
            if k != j {
                acc += f[k] / (j as f64 - k as f64);
            }
        }
        out[j] = acc / std::f64::consts::PI;
    }
    Ok(out)
}

/// Pointwise residual of the static density equation
///
/// ```text
/// (alpha/t x - b(x)) p(x) = pi g2(x) p(x) H(h2 p)(x)
///                         + pi h2(x) p(x) H(g2 p)(x)
/// ```
///
/// for density samples `p` on the uniform `grid`. Requires `p >= 0` with
/// unit mass on the grid (within 1e-3).
pub fn density_equation_residual(
    grid: &[f64],
    p: &[f64],
    alpha: f64,
    t: f64,
    b: impl Fn(f64) -> f64,
    g2: impl Fn(f64) -> f64,
    h2: impl Fn(f64) -> f64,
) -> Result<Vec<f64>, LawError> {
    let dx = check_uniform(grid)?;
    if p.len() != grid.len() {
        return Err(LawError::InvalidParameter(
            "sample count must match the grid".into(),
        ));
    }
    if !(t > 0.0) {
        return Err(LawError::InvalidParameter("t must be positive".into()));
    }
    if p.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(LawError::BadDensity(f64::NAN));
    }
    let mass: f64 = trapezoid_mass(p, dx);
    if mass > 0.0 && (mass - 1.0).abs() > 1e-3 {
        return Err(LawError::BadDensity(mass));
    }

    let pi = std::f64::consts::PI;
    let h2p: Vec<f64> = grid.iter().zip(p).map(|(&x, &v)| h2(x) * v).collect();
    let g2p: Vec<f64> = grid.iter().zip(p).map(|(&x, &v)| g2(x) * v).collect();
    let h_h2p = hilbert_transform(grid, &h2p)?;
    let h_g2p = hilbert_transform(grid, &g2p)?;

    Ok(grid
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let lhs = (alpha / t * x - b(x)) * p[j];
            let rhs = pi * g2(x) * p[j] * h_h2p[j] + pi * h2(x) * p[j] * h_g2p[j];
            (lhs - rhs).abs()
        })
        .collect())
}

fn trapezoid_mass(p: &[f64], dx: f64) -> f64 {
    if p.len() < 2 {
        return 0.0;
    }
    let inner: f64 = p[1..p.len() - 1].iter().sum();
    dx * (inner + 0.5 * (p[0] + p[p.len() - 1]))
}
