//! Long-time leading term along rays `x = 4ξt`:
//! `q ≈ t^{-1/2 + Im ν(-ξ)} p(-ξ) exp{4itξ² - i Re ν(-ξ) ln t}`.

use crate::rh_data::{chi_at, chi_fn, nu_at, nu_at_unchecked, r1_at, RayData, ReflectionData, RemainderClass, RhError};
use crate::specfun::rgamma;
use crate::C64;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_4, LN_2, PI};
use std::io::{self, Write};
use thiserror::Error;

/// Largest `max |r1 - conj r2|` accepted as even data.
pub const EVEN_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error(transparent)]
    Rh(#[from] RhError),
    #[error("r1(-ξ) vanishes while ν(-ξ) = {0} does not")]
    IllPosed(C64),
    #[error("leading term needs t >= 1, got {0}")]
    TimeTooSmall(f64),
    #[error("ray ξ = {ray} does not contain (x, t) with x/4t = {xi}")]
    RayMismatch { ray: f64, xi: f64 },
    #[error("data are not even: max |r1 - conj r2| = {0:e}")]
    NotEven(f64),
}

/// `p(-ξ) = √π exp{-πν/2 + iπ/4 + 2χ - 3iν ln 2} / (r1(-ξ) Γ(-iν))`.
pub fn p_amplitude(nu: C64, chi: C64, r1: C64) -> Result<C64, AsymptoticsError> {
    let i = C64::i();
    let rg = rgamma(-i * nu);
    if r1.norm() == 0.0 {
        return if rg.norm() == 0.0 { Ok(C64::new(0.0, 0.0)) } else { Err(AsymptoticsError::IllPosed(nu)) };
    }
    let e = -PI * nu / 2.0 + i * FRAC_PI_4 + 2.0 * chi - 3.0 * i * nu * LN_2;
    Ok(PI.sqrt() * e.exp() * rg / r1)
}

/// `p` assembled from the model coefficient `β(ξ)`: `-2 β e^{2χ(-ξ)} 8^{-1/2-iν}`.
pub fn p_from_beta(beta: C64, chi: C64, nu: C64) -> C64 {
    let eight = C64::new(8.0, 0.0);
    -2.0 * beta * (2.0 * chi).exp() * eight.powc(-0.5 - C64::i() * nu)
}

/// `ν`, `χ`, `p` for the ray `ξ`, after checking `|arg w| < π` on `(-∞, -ξ]`.
pub fn ray_data(r: &ReflectionData, xi: f64) -> Result<RayData, AsymptoticsError> {
    let nu = nu_at(r, xi)?;
    let chi = chi_at(r, xi)?;
    finish_ray(r, xi, nu, chi)
}

/// As [`ray_data`] but without the argument check; for runs that override
/// the gates.
pub fn ray_data_unchecked(r: &ReflectionData, xi: f64) -> Result<RayData, AsymptoticsError> {
    let nu = nu_at_unchecked(r, xi)?;
    let chi = chi_fn(r, xi, C64::new(-xi, 0.0))?;
    finish_ray(r, xi, nu, chi)
}

fn finish_ray(r: &ReflectionData, xi: f64, nu: C64, chi: C64) -> Result<RayData, AsymptoticsError> {
    let p = p_amplitude(nu, chi, r1_at(r, -xi))?;
    Ok(RayData { xi, nu, chi, p, remainder_class: RemainderClass::of(nu) })
}

/// Leading term at one point `(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticPrediction {
    pub x: f64,
    pub t: f64,
    pub xi: f64,
    pub q_leading: C64,
    pub remainder_class: RemainderClass,
    pub remainder_scale: f64,
}

/// Size of the remainder with unit constant: `t^{-1+2|Im ν|}`, `t^{-1} ln t`
/// or `t^{-1}` for the classes pos, zero and neg.
pub fn remainder_scale(class: RemainderClass, nu: C64, t: f64) -> f64 {
    match class {
        RemainderClass::Pos => t.powf(-1.0 + 2.0 * nu.im.abs()),
        RemainderClass::Zero => t.ln() / t,
        RemainderClass::Neg => 1.0 / t,
    }
}

/// Leading term on the ray of `ray` at `(x, t)`; `x / 4t` must equal `ray.xi`.
pub fn leading_term(ray: &RayData, x: f64, t: f64) -> Result<AsymptoticPrediction, AsymptoticsError> {
    if !(t >= 1.0) {
        return Err(AsymptoticsError::TimeTooSmall(t));
    }
    let xi = x / (4.0 * t);
    if (xi - ray.xi).abs() > 1e-12 * (1.0 + ray.xi.abs()) {
        return Err(AsymptoticsError::RayMismatch { ray: ray.xi, xi });
    }
    let nu = ray.nu;
    let phase = 4.0 * t * xi * xi - nu.re * t.ln();
    let q_leading = t.powf(-0.5 + nu.im) * ray.p * C64::from_polar(1.0, phase);
    Ok(AsymptoticPrediction {
        x,
        t,
        xi,
        q_leading,
        remainder_class: ray.remainder_class,
        remainder_scale: remainder_scale(ray.remainder_class, nu, t),
    })
}

/// Leading term at `(x, t)`, computing the ray data for `ξ = x/4t`.
pub fn predict(r: &ReflectionData, x: f64, t: f64) -> Result<AsymptoticPrediction, AsymptoticsError> {
    let ray = ray_data(r, x / (4.0 * t))?;
    leading_term(&ray, x, t)
}

/// Leading-term quantities for even data, where `r1 = conj r2 =: r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalNls {
    /// `-ln(1 + σ|r(-ξ)|²) / 2π`.
    pub nu: f64,
    /// `√((σ/4π) ln(1 + σ|r(-ξ)|²))`.
    pub p_mod: f64,
    /// `arg p(-ξ)` from the general amplitude.
    pub p_arg: f64,
}

pub fn local_nls_reduction(r: &ReflectionData, xi: f64) -> Result<LocalNls, AsymptoticsError> {
    let defect = r.evenness_defect();
    if defect > EVEN_TOLERANCE {
        return Err(AsymptoticsError::NotEven(defect));
    }
    let s = r.sigma.value();
    let ray = ray_data(r, xi)?;
    let l = (1.0 + s * r1_at(r, -xi).norm_sqr()).ln();
    Ok(LocalNls { nu: -l / (2.0 * PI), p_mod: (s * l / (4.0 * PI)).max(0.0).sqrt(), p_arg: ray.p.arg() })
}

/// Prediction CSV with header `x,t,xi,re_q,im_q,abs_q,remainder_class,remainder_scale`.
pub fn write_predictions_csv<W: Write>(mut w: W, rows: &[AsymptoticPrediction]) -> io::Result<()> {
    writeln!(w, "x,t,xi,re_q,im_q,abs_q,remainder_class,remainder_scale")?;
    for p in rows {
        let q = p.q_leading + 0.0;
        writeln!(w, "{:e},{:e},{:e},{:e},{:e},{:e},{},{:e}", p.x, p.t, p.xi, q.re, q.im, q.norm(), p.remainder_class.as_str(), p.remainder_scale)?;
    }
    Ok(())
}
