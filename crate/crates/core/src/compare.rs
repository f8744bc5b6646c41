//! Direct simulation against the leading term along rays.

use crate::asymptotics::{leading_term, ray_data, ray_data_unchecked, AsymptoticsError};
use crate::evolution::{fit_decay_slope, ray_probe, EvolveError, Trajectory};
use crate::rh_data::ReflectionData;
use crate::C64;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompareError {
    #[error(transparent)]
    Evolve(#[from] EvolveError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareRow {
    pub xi: f64,
    pub t: f64,
    pub q_pde: C64,
    pub q_asym: C64,
    /// `|q_pde| / |q_asym|`.
    pub ratio: f64,
    /// `arg(q_pde / q_asym)` in `(-π, π]`.
    pub phase_mismatch: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RaySummary {
    pub xi: f64,
    pub nu: C64,
    /// `-1/2 + Im ν(-ξ)`.
    pub predicted_slope: f64,
    /// Least-squares slope of `ln |q_pde|` against `ln t`.
    pub fitted_slope: f64,
    pub final_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub rows: Vec<CompareRow>,
    pub summaries: Vec<RaySummary>,
}

/// Probes every ray at the snapshots with `t >= 1` and sets the values
/// against the leading term. Zero reflection data give an empty comparison.
pub fn compare_rays(traj: &Trajectory, r: &ReflectionData, xis: &[f64], check_gates: bool) -> Result<Comparison, CompareError> {
    let mut out = Comparison { rows: Vec::new(), summaries: Vec::new() };
    if r.is_trivial() {
        return Ok(out);
    }
    for &xi in xis {
        let ray = if check_gates { ray_data(r, xi)? } else { ray_data_unchecked(r, xi)? };
        let series: Vec<(f64, C64)> = ray_probe(traj, xi)?.into_iter().filter(|p| p.0 >= 1.0).collect();
        let mut last_ratio = f64::NAN;
        for &(t, q_pde) in &series {
            let q_asym = leading_term(&ray, 4.0 * xi * t, t)?.q_leading;
            let ratio = q_pde.norm() / q_asym.norm();
            let phase_mismatch = wrap((q_pde / q_asym).arg());
            last_ratio = ratio;
            out.rows.push(CompareRow { xi, t, q_pde, q_asym, ratio, phase_mismatch });
        }
        out.summaries.push(RaySummary { xi, nu: ray.nu, predicted_slope: -0.5 + ray.nu.im, fitted_slope: fit_decay_slope(&series), final_ratio: last_ratio });
    }
    Ok(out)
}

fn wrap(a: f64) -> f64 {
    if a <= -PI {
        a + 2.0 * PI
    } else {
        a
    }
}

impl Comparison {
    /// Table CSV with header `xi,t,abs_q_pde,abs_q_asym,ratio,phase_mismatch`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "xi,t,abs_q_pde,abs_q_asym,ratio,phase_mismatch")?;
        for r in &self.rows {
            writeln!(w, "{:e},{:e},{:e},{:e},{:e},{:e}", r.xi, r.t, r.q_pde.norm(), r.q_asym.norm(), r.ratio, r.phase_mismatch)?;
        }
        Ok(())
    }
}
