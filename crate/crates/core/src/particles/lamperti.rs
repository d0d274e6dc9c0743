//! Unit-diffusion coordinate change `y = f(x)` with `f'(x) = 1/sigma(x)`.
//!
//! `f` is tabulated by cumulative trapezoidal quadrature of `1/sigma` over a
//! caller-supplied grid and anchored so `f(anchor) = 0`; the inverse is the
//! monotone interpolant of the flipped table. In the new coordinates the
//! diffusion is 1 and the drift picks up the Ito correction `-sigma'/2`:
//!
//! ```text
//! dy_i = dW_i + [ (b(x_i) + sum pair(x_i,x_j)/(x_i-x_j)) / sigma(x_i)
//!                 - sigma'(x_i)/2 ] dt,     x = f^{-1}(y).
//! ```
//!
//! The map requires a diffusion profile shared by all particles (true of
//! every catalog model); a per-particle profile would not preserve ordering
//! under a single coordinate change.

use super::ParticleError;
use crate::catalog::CoefficientModel;

#[derive(Clone, Debug)]
pub struct LampertiMap {
    grid: Vec<f64>,
    f: Vec<f64>,
    anchor: f64,
}

impl LampertiMap {
    /// Build the map for `model` on `grid` (strictly increasing, inside the
    /// model domain) anchored at `anchor` in the grid range. Fails if
    /// `sigma` is not strictly positive on the grid or differs across
    /// particle indices.
    pub fn build(
        model: &CoefficientModel,
        grid: &[f64],
        anchor: f64,
    ) -> Result<Self, ParticleError> {
        if grid.len() < 3 || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ParticleError::BadGrid);
        }
        if anchor < grid[0] || anchor > grid[grid.len() - 1] {
            return Err(ParticleError::OutsideGrid);
        }
        let (lo, hi) = model.domain();
        if grid[0] < lo || grid[grid.len() - 1] > hi {
            return Err(ParticleError::OutsideGrid);
        }

        // the profile must not depend on the particle index
        let probes = [grid[0], anchor, grid[grid.len() - 1]];
        for i in 1..model.n_particles() {
            for &x in &probes {
                if model.sigma(i, x) != model.sigma(0, x) {
                    return Err(ParticleError::NonUniformSigma);
                }
            }
        }

        let inv_sigma: Vec<f64> = grid
            .iter()
            .map(|&x| {
                let s = model.sigma(0, x);
                if s > 0.0 && s.is_finite() {
                    Ok(1.0 / s)
                } else {
                    Err(ParticleError::SigmaNotPositive(x, s))
                }
            })
            .collect::<Result<_, _>>()?;

        let mut f = Vec::with_capacity(grid.len());
        f.push(0.0);
        for k in 1..grid.len() {
            let dx = grid[k] - grid[k - 1];
            let prev = f[k - 1];
            f.push(prev + 0.5 * dx * (inv_sigma[k] + inv_sigma[k - 1]));
        }
        let map = Self {
            grid: grid.to_vec(),
            f,
            anchor,
        };
        let offset = map.interp(&map.grid, &map.f, anchor);
        Ok(Self {
            f: map.f.iter().map(|v| v - offset).collect(),
            ..map
        })
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    /// Range of the transformed coordinate.
    pub fn range(&self) -> (f64, f64) {
        (self.f[0], self.f[self.f.len() - 1])
    }

    /// Grid span of the original coordinate.
    pub fn domain(&self) -> (f64, f64) {
        (self.grid[0], self.grid[self.grid.len() - 1])
    }

    /// `f(x)`; `x` must lie inside the grid span.
    pub fn forward(&self, x: f64) -> f64 {
        self.interp(&self.grid, &self.f, x)
    }

    /// `f^{-1}(y)`, clamped to the grid span.
    pub fn inverse(&self, y: f64) -> f64 {
        self.interp(&self.f, &self.grid, y)
    }

    pub fn forward_all(&self, xs: &[f64]) -> Result<Vec<f64>, ParticleError> {
        let (lo, hi) = self.domain();
        if xs.iter().any(|&x| x < lo || x > hi) {
            return Err(ParticleError::OutsideGrid);
        }
        Ok(xs.iter().map(|&x| self.forward(x)).collect())
    }

    /// Drift of the unit-diffusion system at transformed positions `ys`.
    pub fn transformed_drift(&self, model: &CoefficientModel, ys: &[f64]) -> Vec<f64> {
        let xs: Vec<f64> = ys.iter().map(|&y| self.inverse(y)).collect();
        let n = xs.len();
        let mut interaction: Vec<f64> = xs.iter().map(|&x| model.b(x)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let term = model.pair(xs[i], xs[j]) / (xs[i] - xs[j]);
                interaction[i] += term;
                interaction[j] -= term;
            }
        }
        xs.iter()
            .enumerate()
            .map(|(i, &x)| interaction[i] / model.sigma(i, x) - 0.5 * self.sigma_prime(model, x))
            .collect()
    }

    /// Central-difference derivative of the shared diffusion profile,
    /// kept inside the grid span near its ends.
    fn sigma_prime(&self, model: &CoefficientModel, x: f64) -> f64 {
        let (lo, hi) = self.domain();
        let h = 1e-6 * (1.0 + x.abs());
        let xc = x.clamp(lo + h, hi - h);
        (model.sigma(0, xc + h) - model.sigma(0, xc - h)) / (2.0 * h)
    }

    /// Piecewise-linear interpolation of `ys` over strictly increasing
    /// `xs`, clamped at the ends.
    fn interp(&self, xs: &[f64], ys: &[f64], x: f64) -> f64 {
        let n = xs.len();
        if x <= xs[0] {
            return ys[0];
        }
        if x >= xs[n - 1] {
            return ys[n - 1];
        }
        let k = xs.partition_point(|&v| v <= x);
        let (x0, x1) = (xs[k - 1], xs[k]);
        let w = (x - x0) / (x1 - x0);
        ys[k - 1] + w * (ys[k] - ys[k - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_beta_laguerre, CoefficientModel};
    use std::sync::Arc;

    fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect()
    }

    #[test]
    fn constant_sigma_gives_a_linear_map() {
        let m = CoefficientModel::particle(
            "flat",
            Arc::new(|_, _| 2.5),
            Arc::new(|_| 0.0),
            Arc::new(|_, _| 0.0),
            (f64::NEG_INFINITY, f64::INFINITY),
            3,
        )
        .unwrap();
        let grid = uniform_grid(-4.0, 4.0, 1000);
        let map = LampertiMap::build(&m, &grid, 1.0).unwrap();
        for &x in &[-3.2, -1.0, 0.0, 1.0, 2.7] {
            assert!((map.forward(x) - (x - 1.0) / 2.5).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn square_root_diffusion_matches_antiderivative() {
        // sigma = 2 sqrt(x), anchor 1: f(x) = sqrt(x) - 1; f(4) = 1
        let m = make_beta_laguerre(1, 1.0, 4.0).unwrap();
        // catalog sigma is 2 sqrt(x / n) with n = 1
        let grid = uniform_grid(0.5, 5.0, 45_000);
        let map = LampertiMap::build(&m, &grid, 1.0).unwrap();
        assert!((map.forward(4.0) - 1.0).abs() < 1e-8);
        assert!((map.forward(2.25) - 0.5).abs() < 1e-8);
    }

    #[test]
    fn round_trip_through_the_inverse() {
        let m = make_beta_laguerre(1, 1.0, 4.0).unwrap();
        let grid = uniform_grid(0.25, 9.0, 4000);
        let map = LampertiMap::build(&m, &grid, 1.0).unwrap();
        for k in 0..1000 {
            let x = 0.3 + 8.4 * k as f64 / 999.0;
            let y = map.forward(x);
            assert!((map.inverse(y) - x).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn rejects_vanishing_sigma_and_bad_grids() {
        let m = make_beta_laguerre(1, 1.0, 4.0).unwrap();
        // grid touching 0, where sigma vanishes
        let grid = uniform_grid(0.0, 4.0, 100);
        assert!(matches!(
            LampertiMap::build(&m, &grid, 1.0),
            Err(ParticleError::SigmaNotPositive(_, _))
        ));
        assert!(LampertiMap::build(&m, &[1.0, 0.5, 2.0], 1.0).is_err());
        let grid = uniform_grid(0.5, 4.0, 100);
        assert!(matches!(
            LampertiMap::build(&m, &grid, 9.0),
            Err(ParticleError::OutsideGrid)
        ));
    }

    #[test]
    fn transformed_drift_of_square_root_diffusion() {
        // n = 1, sigma = 2 sqrt(x), b = beta * alpha = 4:
        // drift_y = 4 / (2 sqrt(x)) - (1/2) / sqrt(x) = (3/2) / sqrt(x)
        let m = make_beta_laguerre(1, 1.0, 4.0).unwrap();
        let grid = uniform_grid(0.25, 16.0, 60_000);
        let map = LampertiMap::build(&m, &grid, 1.0).unwrap();
        for &x in &[0.5, 1.0, 2.0, 4.0, 9.0] {
            let y = map.forward(x);
            let d = map.transformed_drift(&m, &[y]);
            let expect = 1.5 / x.sqrt();
            assert!((d[0] - expect).abs() < 1e-4 * (1.0 + expect), "x={x} {d:?}");
        }
    }
}
