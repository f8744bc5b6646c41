use super::profile::InitialProfile;
use crate::grid::UniformGrid;
use crate::ode::{integrate, OdeError, Tolerance};
use crate::{Sigma, C64};
use rayon::prelude::*;
use std::f64::consts::TAU;
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatterError {
    #[error("integration failed at k = {k}: {source}")]
    Integration { k: C64, source: OdeError },
    #[error("k-grid must be symmetric about 0")]
    AsymmetricGrid,
}

/// Scattering functions on a real k-grid.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub kgrid: UniformGrid,
    pub a1: Vec<C64>,
    pub a2: Vec<C64>,
    pub b: Vec<C64>,
    pub sigma: Sigma,
}

/// Maximum violations reported by [`check_properties`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PropertyReport {
    /// `max |conj a_j(-k) - a_j(k)|` over both `j`.
    pub a_symmetry: f64,
    /// `max |a1 a2 + σ b(k) conj b(-k) - 1|`.
    pub determinant: f64,
    /// `max(|a1 - 1|, |a2 - 1|)` at the two grid ends.
    pub tail_a: f64,
    /// `|b|` at the two grid ends.
    pub tail_b: f64,
}

impl PropertyReport {
    pub fn max_identity_violation(&self) -> f64 {
        self.a_symmetry.max(self.determinant)
    }
}

/// `e^{-2ik x}` with the real part of the phase reduced modulo 2π.
fn plane_wave(k: C64, x: f64) -> C64 {
    let phase = (-2.0 * k.re * x).rem_euclid(TAU);
    C64::from_polar((2.0 * k.im * x).exp(), phase)
}

/// `(q0(x), σ conj(q0(-x)))` for `x` inside the piece `[lo, hi]`.
fn coefficients(q0: &InitialProfile, x: f64, lo: f64, hi: f64) -> (C64, C64) {
    let s = q0.sigma().value();
    match q0 {
        InitialProfile::Box { .. } => {
            let mid = 0.5 * (lo + hi);
            (q0.eval(mid), s * q0.eval(-mid).conj())
        }
        InitialProfile::Sampled(_) => (q0.eval(x), s * q0.eval(-x).conj()),
    }
}

fn first_step(k: C64, span: f64) -> f64 {
    span.min(0.1 / (1.0 + k.norm()))
}

/// Integrates `(ψ1, ψ3)` from `(1, 0)`; returns `(a1, b)`.
fn left_column(q0: &InitialProfile, k: C64, tol: Tolerance) -> Result<(C64, C64), ScatterError> {
    let bp = q0.breakpoints();
    let mut y = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let ik2 = 2.0 * C64::i() * k;
    for w in bp.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        y = integrate(
            |x, y: &[C64; 2]| {
                let (q, p) = coefficients(q0, x, lo, hi);
                [q * y[1], ik2 * y[1] - p * y[0]]
            },
            lo,
            hi,
            y,
            first_step(k, hi - lo),
            tol,
        )
        .map_err(|source| ScatterError::Integration { k, source })?;
    }
    let xmax = *bp.last().unwrap();
    Ok((y[0], plane_wave(k, xmax) * y[1]))
}

/// Integrates `(ψ2, ψ4)` from `(0, 1)`; returns `a2`.
fn right_column(q0: &InitialProfile, k: C64, tol: Tolerance) -> Result<C64, ScatterError> {
    let bp = q0.breakpoints();
    let mut y = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
    let ik2 = 2.0 * C64::i() * k;
    for w in bp.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        y = integrate(
            |x, y: &[C64; 2]| {
                let (q, p) = coefficients(q0, x, lo, hi);
                [-ik2 * y[0] + q * y[1], -p * y[0]]
            },
            lo,
            hi,
            y,
            first_step(k, hi - lo),
            tol,
        )
        .map_err(|source| ScatterError::Integration { k, source })?;
    }
    Ok(y[1])
}

/// `a1(k)` for `Im k >= 0` by integrating the scattering system.
pub fn a1_at(q0: &InitialProfile, k: C64) -> Result<C64, ScatterError> {
    if q0.is_zero() {
        return Ok(C64::new(1.0, 0.0));
    }
    left_column(q0, k, Tolerance::default()).map(|(a1, _)| a1)
}

/// `a2(k)` for `Im k <= 0` by integrating the scattering system.
pub fn a2_at(q0: &InitialProfile, k: C64) -> Result<C64, ScatterError> {
    if q0.is_zero() {
        return Ok(C64::new(1.0, 0.0));
    }
    right_column(q0, k, Tolerance::default())
}

/// `(a1, a2, b)` at a real `k`.
pub fn scatter_point(q0: &InitialProfile, k: f64) -> Result<(C64, C64, C64), ScatterError> {
    if q0.is_zero() {
        return Ok((C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)));
    }
    let kc = C64::new(k, 0.0);
    let tol = Tolerance::default();
    let (a1, b) = left_column(q0, kc, tol)?;
    let a2 = right_column(q0, kc, tol)?;
    Ok((a1, a2, b))
}

/// Direct scattering transform on `kgrid`, parallel over nodes.
pub fn scatter(q0: &InitialProfile, kgrid: &UniformGrid) -> Result<SpectralData, ScatterError> {
    let rows: Result<Vec<_>, _> = kgrid.nodes().into_par_iter().map(|k| scatter_point(q0, k)).collect();
    let rows = rows?;
    Ok(SpectralData {
        kgrid: *kgrid,
        a1: rows.iter().map(|r| r.0).collect(),
        a2: rows.iter().map(|r| r.1).collect(),
        b: rows.iter().map(|r| r.2).collect(),
        sigma: q0.sigma(),
    })
}

/// `(e^u - 1) / u`, accurate near `u = 0`.
fn expm1_ratio(u: C64) -> C64 {
    if u.norm() < 1e-3 {
        1.0 + u * (0.5 + u * (1.0 / 6.0 + u * (1.0 / 24.0 + u / 120.0)))
    } else {
        (u.exp() - 1.0) / u
    }
}

/// Closed-form scattering functions of the box `q0 = H` on `(0, L)` at any
/// complex `k` (the formula for `a1` is meaningful for `Im k >= 0`).
pub fn box_spectral_complex(h: C64, width: f64, sigma: Sigma, k: C64) -> (C64, C64, C64) {
    let s = sigma.value();
    let e = expm1_ratio(2.0 * C64::i() * k * width);
    let a1 = 1.0 - s * h.norm_sqr() * width * width * e * e;
    let b = -s * h.conj() * width * e;
    (a1, C64::new(1.0, 0.0), b)
}

/// Closed-form `(a1, a2, b)` of the box at real `k`.
pub fn box_spectral(h: C64, width: f64, sigma: Sigma, k: f64) -> (C64, C64, C64) {
    box_spectral_complex(h, width, sigma, C64::new(k, 0.0))
}

/// Closed-form spectral data of the box on a grid.
pub fn box_spectral_data(h: C64, width: f64, sigma: Sigma, kgrid: &UniformGrid) -> SpectralData {
    let rows: Vec<_> = kgrid.nodes().into_iter().map(|k| box_spectral(h, width, sigma, k)).collect();
    SpectralData {
        kgrid: *kgrid,
        a1: rows.iter().map(|r| r.0).collect(),
        a2: rows.iter().map(|r| r.1).collect(),
        b: rows.iter().map(|r| r.2).collect(),
        sigma,
    }
}

/// Symmetry, determinant and decay diagnostics.
pub fn check_properties(s: &SpectralData) -> Result<PropertyReport, ScatterError> {
    let g = &s.kgrid;
    if !g.is_symmetric() {
        return Err(ScatterError::AsymmetricGrid);
    }
    let sig = s.sigma.value();
    let mut a_symmetry: f64 = 0.0;
    let mut determinant: f64 = 0.0;
    for i in 0..g.len() {
        let m = g.mirror(i);
        a_symmetry = a_symmetry.max((s.a1[m].conj() - s.a1[i]).norm()).max((s.a2[m].conj() - s.a2[i]).norm());
        determinant = determinant.max((s.a1[i] * s.a2[i] + sig * s.b[i] * s.b[m].conj() - 1.0).norm());
    }
    let ends = [0, g.len() - 1];
    let tail_a = ends.iter().map(|&i| (s.a1[i] - 1.0).norm().max((s.a2[i] - 1.0).norm())).fold(0.0, f64::max);
    let tail_b = ends.iter().map(|&i| s.b[i].norm()).fold(0.0, f64::max);
    Ok(PropertyReport { a_symmetry, determinant, tail_a, tail_b })
}

impl SpectralData {
    /// CSV with header `k,re_a1,im_a1,re_a2,im_a2,re_b,im_b`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "k,re_a1,im_a1,re_a2,im_a2,re_b,im_b")?;
        for i in 0..self.kgrid.len() {
            writeln!(
                w,
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                self.kgrid.node(i),
                self.a1[i].re,
                self.a1[i].im,
                self.a2[i].re,
                self.a2[i].im,
                self.b[i].re,
                self.b[i].im
            )?;
        }
        Ok(())
    }
}
