//! Empirical spectral measures: finite multisets of real atoms with uniform
//! weight `1/N`, with CDF, moments, Stieltjes evaluation and
//! Kolmogorov-Smirnov distances against limit laws.

use num_complex::Complex64;

use crate::laws::LimitLaw;
use crate::particles::{ParticleState, ParticleStatus};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MeasureError {
    #[error("cannot build a measure from an exited state")]
    ExitedState,
    #[error("empty atom set")]
    Empty,
    #[error("Stieltjes evaluation requires Im z != 0")]
    RealArgument,
    #[error("moment order {0} exceeds the overflow guard (12)")]
    MomentOrder(u32),
}

/// Uniform-weight atomic measure, atoms kept sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMeasure {
    atoms: Vec<f64>,
    time_label: f64,
}

impl EmpiricalMeasure {
    pub fn from_atoms(mut atoms: Vec<f64>, time_label: f64) -> Result<Self, MeasureError> {
        if atoms.is_empty() {
            return Err(MeasureError::Empty);
        }
        atoms.sort_by(|a, b| a.total_cmp(b));
        Ok(Self { atoms, time_label })
    }

    /// Measure of the particle positions; exited states are rejected.
    pub fn from_state(state: &ParticleState) -> Result<Self, MeasureError> {
        if !matches!(state.status(), ParticleStatus::Alive) {
            return Err(MeasureError::ExitedState);
        }
        Self::from_atoms(state.positions().to_vec(), state.time())
    }

    /// Pool the atoms of several measures into one.
    pub fn pooled(parts: &[EmpiricalMeasure]) -> Result<Self, MeasureError> {
        let atoms: Vec<f64> = parts.iter().flat_map(|m| m.atoms.iter().copied()).collect();
        let t = parts.first().map(|m| m.time_label).unwrap_or(0.0);
        Self::from_atoms(atoms, t)
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn time_label(&self) -> f64 {
        self.time_label
    }

    /// Fraction of atoms `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.atoms.partition_point(|&a| a <= x);
        k as f64 / self.atoms.len() as f64
    }

    /// `(1/N) sum 1/(z - atom)`; requires `Im z != 0`.
    pub fn stieltjes(&self, z: Complex64) -> Result<Complex64, MeasureError> {
        if z.im == 0.0 {
            return Err(MeasureError::RealArgument);
        }
        let sum: Complex64 = self.atoms.iter().map(|&a| (z - a).finv()).sum();
        Ok(sum / self.atoms.len() as f64)
    }

    /// `(1/N) sum atom^k`, guarded at `k <= 12`.
    pub fn moment(&self, k: u32) -> Result<f64, MeasureError> {
        if k > 12 {
            return Err(MeasureError::MomentOrder(k));
        }
        let sum: f64 = self.atoms.iter().map(|&a| a.powi(k as i32)).sum();
        Ok(sum / self.atoms.len() as f64)
    }

    /// One-sample Kolmogorov-Smirnov statistic against `law` at time `t`:
    /// the sup over atoms of the CDF gap on both sides of each jump.
    pub fn ks_distance(&self, law: &dyn LimitLaw, t: f64) -> f64 {
        let n = self.atoms.len() as f64;
        let mut d: f64 = 0.0;
        for (i, &a) in self.atoms.iter().enumerate() {
            let f = law.cdf(a, t);
            d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
        }
        d
    }
}

/// Two-sample Kolmogorov-Smirnov statistic between pooled samples.
pub fn two_sample_ks(xs: &[f64], ys: &[f64]) -> f64 {
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        // consume every copy of the smaller value from both samples
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
