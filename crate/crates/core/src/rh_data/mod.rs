//! Reflection coefficients, the unwrapped argument of `w = 1 + σ r1 r2`, the
//! phase functions `ν(-ξ)`, `χ(-ξ)`, the scalar function `δ(k, ξ)` and the
//! checks of the solitonless and small-argument assumptions.

mod gates;
mod hermite;
mod phase;

pub use gates::{gate_assumptions, GateReport, REMARK_L1_BOUND};
pub use phase::{chi_at, chi_fn, delta_at, hilbert_log_w, log_w_at, nu_at, nu_at_unchecked, r1_at, r2_at, QUADRATURE_TOLERANCE};

use crate::grid::UniformGrid;
use crate::scattering::SpectralData;
use crate::{Sigma, C64};
use hermite::Hermite;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};
use std::io::{self, Write};
use thiserror::Error;

/// Smallest admissible `|a1|`, `|a2|` on the grid.
pub const MIN_MODULUS: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RhError {
    #[error("k-grid must be symmetric about 0")]
    AsymmetricGrid,
    #[error("a1 or a2 nearly vanishes at k = {k} (|a| = {modulus:e})")]
    ZeroOnGrid { k: f64, modulus: f64 },
    #[error("argument of w jumps by {step} between k = {k} and the next node; refine the grid")]
    PhaseStepTooLarge { k: f64, step: f64 },
    #[error("stationary point -ξ = {0} is outside the k-grid interior")]
    OutsideGrid(f64),
    #[error("assumption on arg w violated at k = {k} (|arg w| = {arg})")]
    AssumptionViolated { k: f64, arg: f64 },
    #[error("quadrature error estimate {0:e} exceeds tolerance")]
    NotConverged(f64),
    #[error("k = {0} lies on the cut (-∞, -ξ]")]
    OnCut(C64),
}

/// Reflection data on a symmetric real grid.
#[derive(Debug, Clone)]
pub struct ReflectionData {
    pub kgrid: UniformGrid,
    pub r1: Vec<C64>,
    pub r2: Vec<C64>,
    /// `1 + σ r1 r2`.
    pub w: Vec<C64>,
    /// Argument of `w`, continuous along the grid and principal at the left end.
    pub arg_w: Vec<f64>,
    pub sigma: Sigma,
    log_w: Hermite,
    log_w_coarse: Option<Hermite>,
}

/// Argument of `values` continued along the sequence from the principal value
/// at index 0. Fails at the first step whose increment reaches `max_step`.
pub fn unwrap_phase(values: &[C64], max_step: f64) -> Result<Vec<f64>, usize> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = values[0].arg();
    out.push(acc);
    for i in 1..values.len() {
        let step = (values[i] / values[i - 1]).arg();
        if step.abs() >= max_step {
            return Err(i - 1);
        }
        acc += step;
        out.push(acc);
    }
    Ok(out)
}

/// `r1 = b/a1`, `r2(k) = conj(b(-k))/a2(k)`, `w` and its unwrapped argument.
pub fn reflect(s: &SpectralData) -> Result<ReflectionData, RhError> {
    let g = s.kgrid;
    if !g.is_symmetric() {
        return Err(RhError::AsymmetricGrid);
    }
    for i in 0..g.len() {
        let m = s.a1[i].norm().min(s.a2[i].norm());
        if !(m > MIN_MODULUS) {
            return Err(RhError::ZeroOnGrid { k: g.node(i), modulus: m });
        }
    }
    let sig = s.sigma.value();
    let r1: Vec<C64> = (0..g.len()).map(|i| s.b[i] / s.a1[i]).collect();
    let r2: Vec<C64> = (0..g.len()).map(|i| s.b[g.mirror(i)].conj() / s.a2[i]).collect();
    let w: Vec<C64> = (0..g.len()).map(|i| 1.0 + sig * r1[i] * r2[i]).collect();
    let arg_w = unwrap_phase(&w, FRAC_PI_2).map_err(|i| RhError::PhaseStepTooLarge { k: g.node(i), step: (w[i + 1] / w[i]).arg() })?;
    let log_w: Vec<C64> = w.iter().zip(&arg_w).map(|(v, a)| C64::new(v.norm().ln(), *a)).collect();
    Ok(ReflectionData {
        kgrid: g,
        log_w: Hermite::new(g, &log_w),
        log_w_coarse: Hermite::coarsened(&g, &log_w),
        r1,
        r2,
        w,
        arg_w,
        sigma: s.sigma,
    })
}

impl ReflectionData {
    /// `max |w a1 a2 - 1|` against the spectral data it came from.
    pub fn product_defect(&self, s: &SpectralData) -> f64 {
        (0..self.w.len()).map(|i| (self.w[i] * s.a1[i] * s.a2[i] - 1.0).norm()).fold(0.0, f64::max)
    }

    /// `max |r1(-k) r2(-k) - conj(r1(k) r2(k))|`.
    pub fn symmetry_defect(&self) -> f64 {
        let g = &self.kgrid;
        (0..g.len())
            .map(|i| {
                let m = g.mirror(i);
                (self.r1[m] * self.r2[m] - (self.r1[i] * self.r2[i]).conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `max |r1 - conj r2|`, zero for even data.
    pub fn evenness_defect(&self) -> f64 {
        self.r1.iter().zip(&self.r2).map(|(a, b)| (a - b.conj()).norm()).fold(0.0, f64::max)
    }

    /// `max |arg w|` over nodes with `k <= k_max`.
    pub fn max_abs_arg_up_to(&self, k_max: f64) -> (f64, f64) {
        let mut best = (0.0, self.kgrid.start());
        for i in 0..self.kgrid.len() {
            let k = self.kgrid.node(i);
            if k > k_max {
                break;
            }
            if self.arg_w[i].abs() > best.0 {
                best = (self.arg_w[i].abs(), k);
            }
        }
        best
    }

    /// `max |arg w|` over the grid.
    pub fn max_abs_arg(&self) -> f64 {
        self.arg_w.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    pub fn is_trivial(&self) -> bool {
        self.r1.iter().chain(&self.r2).all(|v| v.norm() == 0.0)
    }
}

/// Remainder classes, keyed on the sign of `Im ν(-ξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RemainderClass {
    Pos,
    Zero,
    Neg,
}

/// Below this `|Im ν|` the sign is treated as zero.
pub const NU_DEADBAND: f64 = 1e-12;

impl RemainderClass {
    pub fn of(nu: C64) -> Self {
        if nu.im > NU_DEADBAND {
            RemainderClass::Pos
        } else if nu.im < -NU_DEADBAND {
            RemainderClass::Neg
        } else {
            RemainderClass::Zero
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RemainderClass::Pos => "pos",
            RemainderClass::Zero => "zero",
            RemainderClass::Neg => "neg",
        }
    }
}

/// Quantities attached to the ray `x = 4ξt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayData {
    pub xi: f64,
    /// `ν(-ξ)`.
    pub nu: C64,
    /// `χ(-ξ)`.
    pub chi: C64,
    /// `p(-ξ)`.
    pub p: C64,
    pub remainder_class: RemainderClass,
}

/// Ray sweep CSV with header `xi,re_nu,im_nu,re_chi,im_chi,gate_i,gate_ii`;
/// `gate_ii` is the argument condition on `(-∞, -ξ]` for that ray.
pub fn write_rays_csv<W: Write>(mut w: W, rays: &[RayData], gate_i: bool, gate_ii: &[bool]) -> io::Result<()> {
    writeln!(w, "xi,re_nu,im_nu,re_chi,im_chi,gate_i,gate_ii")?;
    for (r, g2) in rays.iter().zip(gate_ii) {
        // adding zero turns -0 into +0
        writeln!(w, "{:e},{:e},{:e},{:e},{:e},{},{}", r.xi + 0.0, r.nu.re + 0.0, r.nu.im + 0.0, r.chi.re + 0.0, r.chi.im + 0.0, u8::from(gate_i), u8::from(*g2))?;
    }
    Ok(())
}

pub(crate) fn strictly_below_pi(arg: f64) -> bool {
    arg.abs() < PI
}
