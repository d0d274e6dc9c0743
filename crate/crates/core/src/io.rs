//! CSV serialization of the numeric value types. One writer per format so
//! the byte layout is fixed in a single place; floats print with Rust's
//! shortest round-trip formatting, which is deterministic.

use std::io::{self, Write};

use crate::laws::ResidualReport;
use crate::matrix::SymmetricMatrixState;
use crate::measures::EmpiricalMeasure;
use crate::particles::ParticleTrajectory;

/// `i,j,value` rows of a symmetric matrix, row-major.
pub fn write_matrix_csv<W: Write>(state: &SymmetricMatrixState, w: &mut W) -> io::Result<()> {
    writeln!(w, "i,j,value")?;
    for i in 0..state.dim() {
        for j in 0..state.dim() {
            writeln!(w, "{},{},{}", i, j, state.entry(i, j))?;
        }
    }
    Ok(())
}

/// `atom,weight` rows; weights are uniform.
pub fn write_measure_csv<W: Write>(measure: &EmpiricalMeasure, w: &mut W) -> io::Result<()> {
    writeln!(w, "atom,weight")?;
    let weight = 1.0 / measure.len() as f64;
    for &a in measure.atoms() {
        writeln!(w, "{},{}", a, weight)?;
    }
    Ok(())
}

/// `time,particle_index,position` rows over all snapshots.
pub fn write_trajectory_csv<W: Write>(traj: &ParticleTrajectory, w: &mut W) -> io::Result<()> {
    writeln!(w, "time,particle_index,position")?;
    for snap in &traj.snapshots {
        for (i, &x) in snap.positions().iter().enumerate() {
            writeln!(w, "{},{},{}", snap.time(), i, x)?;
        }
    }
    Ok(())
}

/// `re_z,im_z,t,residual` rows over the full (time x z) grid.
pub fn write_residual_csv<W: Write>(report: &ResidualReport, w: &mut W) -> io::Result<()> {
    writeln!(w, "re_z,im_z,t,residual")?;
    for (k, &t) in report.times.iter().enumerate() {
        for (j, z) in report.z_grid.iter().enumerate() {
            writeln!(w, "{},{},{},{}", z.re, z.im, t, report.residual_abs[k][j])?;
        }
    }
    Ok(())
}
