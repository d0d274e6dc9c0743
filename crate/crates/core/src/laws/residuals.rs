//! Residual functionals of the limit-measure equations.
//!
//! The dynamic equation verified against simulated trajectories reads, for
//! every `z` off the real axis,
//!
//! ```text
//! G_t(z) = G_0(z) + int_0^t [ int b(x)/(z-x)^2 mu_s(dx)
//!                            + int sigma(x)^2/(z-x)^3 mu_s(dx)
//!                            + int int pair(x,y) / ((z-x)(z-y)^2)
//!                                      mu_s(dx) mu_s(dy) ] ds
//! ```
//!
//! evaluated with empirical measures, exact O(N^2) double sums and a
//! trapezoidal time quadrature. The self-similar reduction replaces the
//! time integral by a static identity, and `pde_residual` checks the
//! closed-form transforms against their own flow equations.

use num_complex::Complex64;

use super::{LawError, LimitLaw, SelfSimilarSplit};
use crate::catalog::LimitCoefficients;
use crate::measures::EmpiricalMeasure;

/// Residual magnitudes on a (time x z) grid.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub z_grid: Vec<Complex64>,
    pub times: Vec<f64>,
    /// `residual_abs[k][j] = |LHS - RHS|` at `(times[k], z_grid[j])`.
    pub residual_abs: Vec<Vec<f64>>,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.residual_abs
            .iter()
            .flatten()
            .fold(0.0f64, |m, &v| m.max(v))
    }

    pub fn mean(&self) -> f64 {
        let n: usize = self.residual_abs.iter().map(|r| r.len()).sum();
        if n == 0 {
            return 0.0;
        }
        self.residual_abs.iter().flatten().sum::<f64>() / n as f64
    }
}

fn require_off_axis(z_grid: &[Complex64]) -> Result<(), LawError> {
    if z_grid.iter().any(|z| z.im == 0.0) {
        return Err(LawError::RealArgument);
    }
    Ok(())
}

/// Per-snapshot integrand of the limit equation at one `z`.
fn equation_integrand(atoms: &[f64], limits: &LimitCoefficients, z: Complex64) -> Complex64 {
    let n = atoms.len();
    let w: Vec<Complex64> = atoms.iter().map(|&x| (z - x).finv()).collect();

    let mut single = Complex64::new(0.0, 0.0);
    for (i, &x) in atoms.iter().enumerate() {
        let b = (limits.b_limit)(x);
        let s = (limits.sigma_limit)(x);
        single += b * w[i] * w[i] + (s * s) * w[i] * w[i] * w[i];
    }
    single /= n as f64;

    // sum_{i,j} pair(x_i, x_j) w_i w_j^2: diagonal plus symmetrized pairs
    let mut double = Complex64::new(0.0, 0.0);
    for i in 0..n {
        double += (limits.pair_limit)(atoms[i], atoms[i]) * w[i] * w[i] * w[i];
        for j in i + 1..n {
            let p = (limits.pair_limit)(atoms[i], atoms[j]);
            double += p * w[i] * w[j] * (w[i] + w[j]);
        }
    }
    double /= (n * n) as f64;

    single + double
}

/// Residuals of the dynamic limit equation along a trajectory of empirical
/// measures on a uniform time grid. Entry `[k][j]` compares the transform
/// of snapshot `k` with the time-quadratured right-hand side at `z_j`.
pub fn limit_equation_residual(
    measures: &[EmpiricalMeasure],
    limits: &LimitCoefficients,
    z_grid: &[Complex64],
) -> Result<ResidualReport, LawError> {
    if measures.is_empty() {
        return Err(LawError::TooFewSamples(1));
    }
    require_off_axis(z_grid)?;
    let times: Vec<f64> = measures.iter().map(|m| m.time_label()).collect();
    if times.len() >= 3 {
        let dt = times[1] - times[0];
        for w in times.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.abs().max(1e-12) {
                return Err(LawError::NonUniformTimes);
            }
        }
    }

    let mut residual_abs = Vec::with_capacity(times.len());
    let mut g0 = Vec::with_capacity(z_grid.len());
    let mut prev_integrand: Vec<Complex64> = Vec::new();
    let mut acc: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); z_grid.len()];

    for (k, m) in measures.iter().enumerate() {
        let integrand: Vec<Complex64> = z_grid
            .iter()
            .map(|&z| equation_integrand(m.atoms(), limits, z))
            .collect();
        if k == 0 {
            for &z in z_grid {
                g0.push(m.stieltjes(z).expect("off-axis checked"));
            }
        } else {
            let dt = times[k] - times[k - 1];
            for j in 0..z_grid.len() {
                acc[j] += 0.5 * dt * (prev_integrand[j] + integrand[j]);
            }
        }
        let row: Vec<f64> = z_grid
            .iter()
            .enumerate()
            .map(|(j, &z)| {
                let g = m.stieltjes(z).expect("off-axis checked");
                (g - g0[j] - acc[j]).norm()
            })
            .collect();
        residual_abs.push(row);
        prev_integrand = integrand;
    }

    Ok(ResidualReport {
        z_grid: z_grid.to_vec(),
        times,
        residual_abs,
    })
}

/// Residual of the static self-similar identity
/// `alpha/t int x/(z-x) = int b/(z-x) + int g^2/(z-x) * int h^2/(z-x)`
/// for one measure, given the `(b, g^2, h^2)` split of the kernel.
pub fn self_similar_residual(
    measure: &EmpiricalMeasure,
    split: &SelfSimilarSplit,
    t: f64,
    z_grid: &[Complex64],
) -> Result<ResidualReport, LawError> {
    if !(t > 0.0) {
        return Err(LawError::InvalidParameter("t must be positive".into()));
    }
    require_off_axis(z_grid)?;
    let atoms = measure.atoms();
    let n = atoms.len() as f64;
    let row: Vec<f64> = z_grid
        .iter()
        .map(|&z| {
            let mut lhs = Complex64::new(0.0, 0.0);
            let mut b_term = Complex64::new(0.0, 0.0);
            let mut g_term = Complex64::new(0.0, 0.0);
            let mut h_term = Complex64::new(0.0, 0.0);
            for &x in atoms {
                let w = (z - x).finv();
                lhs += (split.alpha / t) * x * w;
                b_term += (split.b)(x) * w;
                g_term += (split.g2)(x) * w;
                h_term += (split.h2)(x) * w;
            }
            ((lhs - b_term - g_term * h_term / n) / n).norm()
        })
        .collect();
    Ok(ResidualReport {
        z_grid: z_grid.to_vec(),
        times: vec![measure.time_label()],
        residual_abs: vec![row],
    })
}

/// Internal time resolution of the flow quadrature.
const FLOW_DS: f64 = 2.5e-4;

/// Check a closed-form law against its own flow equation from a point-mass
/// start: residual `|G_t(z) - 1/z - int_0^t I(s, z) ds|` with the family's
/// integrand, trapezoid in `s` at resolution [`FLOW_DS`].
pub fn pde_residual(
    law: &dyn LimitLaw,
    t_grid: &[f64],
    z_grid: &[Complex64],
) -> Result<ResidualReport, LawError> {
    if t_grid.is_empty() {
        return Err(LawError::TooFewSamples(1));
    }
    if t_grid.iter().any(|&t| t < 0.0) {
        return Err(LawError::InvalidParameter("times must be >= 0".into()));
    }
    if z_grid.iter().any(|z| z.im <= 0.0) {
        return Err(LawError::RealArgument);
    }
    let residual_abs: Vec<Vec<f64>> = t_grid
        .iter()
        .map(|&t| {
            z_grid
                .iter()
                .map(|&z| {
                    let g0 = z.finv();
                    let steps = (t / FLOW_DS).ceil().max(1.0) as usize;
                    let ds = t / steps as f64;
                    let mut acc = Complex64::new(0.0, 0.0);
                    if t > 0.0 {
                        let mut prev = law.flow_integrand(z, 0.0);
                        for k in 1..=steps {
                            let cur = law.flow_integrand(z, k as f64 * ds);
                            acc += 0.5 * ds * (prev + cur);
                            prev = cur;
                        }
                    }
                    (law.stieltjes(z, t) - g0 - acc).norm()
                })
                .collect()
        })
        .collect();
    Ok(ResidualReport {
        z_grid: z_grid.to_vec(),
        times: t_grid.to_vec(),
        residual_abs,
    })
}
