use crate::C64;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Below this modulus a contour sample counts as a zero on the contour.
pub const CONTOUR_FLOOR: f64 = 1e-8;
const MAX_ARG_STEP: f64 = PI / 4.0;
const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZeroCountError {
    #[error("function nearly vanishes on the contour at k = {k} (|f| = {modulus:e})")]
    ZeroOnContour { k: C64, modulus: f64 },
    #[error("function evaluation failed at k = {k}: {message}")]
    Evaluation { k: C64, message: String },
    #[error("argument increment {0} is not a multiple of 2π")]
    Ambiguous(f64),
    #[error("contour must lie in the closed upper half-plane")]
    BadContour,
}

/// Axis-aligned rectangle `[re_min, re_max] × [im_min, im_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rectangle {
    /// `[-k, k] × [0, k]`.
    pub fn upper(k: f64) -> Self {
        Rectangle { re_min: -k, re_max: k, im_min: 0.0, im_max: k }
    }

    /// Counter-clockwise corners starting at the lower-left one.
    fn corners(&self) -> [C64; 4] {
        [
            C64::new(self.re_min, self.im_min),
            C64::new(self.re_max, self.im_min),
            C64::new(self.re_max, self.im_max),
            C64::new(self.re_min, self.im_max),
        ]
    }
}

/// Number of zeros of `f` inside `contour` (argument principle). `f` must be
/// analytic inside and continuous up to the boundary.
pub fn count_zeros_upper<F, E>(f: F, contour: &Rectangle) -> Result<u32, ZeroCountError>
where
    F: Fn(C64) -> Result<C64, E> + Sync,
    E: std::fmt::Display,
{
    if !(contour.im_min >= 0.0 && contour.im_max > contour.im_min && contour.re_max > contour.re_min) {
        return Err(ZeroCountError::BadContour);
    }
    let eval = |k: C64| -> Result<C64, ZeroCountError> {
        let v = f(k).map_err(|e| ZeroCountError::Evaluation { k, message: e.to_string() })?;
        if !(v.norm() > CONTOUR_FLOOR) {
            return Err(ZeroCountError::ZeroOnContour { k, modulus: v.norm() });
        }
        Ok(v)
    };
    let corners = contour.corners();
    let width = contour.re_max - contour.re_min;
    let height = contour.im_max - contour.im_min;
    let density = 256.0 / width.max(height);
    let mut total = 0.0;
    for side in 0..4 {
        let (za, zb) = (corners[side], corners[(side + 1) % 4]);
        let n = (((zb - za).norm() * density).ceil() as usize).max(16);
        let pts: Vec<C64> = (0..=n).map(|j| za + (zb - za) * (j as f64 / n as f64)).collect();
        let vals: Result<Vec<C64>, _> = pts.par_iter().map(|&z| eval(z)).collect();
        let vals = vals?;
        for j in 0..n {
            total += arg_increment(&eval, pts[j], pts[j + 1], vals[j], vals[j + 1], 0)?;
        }
    }
    let winding = total / TAU;
    let rounded = winding.round();
    if (winding - rounded).abs() > 0.05 || rounded < 0.0 {
        return Err(ZeroCountError::Ambiguous(total));
    }
    Ok(rounded as u32)
}

fn arg_increment<G>(eval: &G, za: C64, zb: C64, fa: C64, fb: C64, depth: u32) -> Result<f64, ZeroCountError>
where
    G: Fn(C64) -> Result<C64, ZeroCountError>,
{
    let step = (fb / fa).arg();
    if step.abs() <= MAX_ARG_STEP || depth >= MAX_DEPTH {
        return Ok(step);
    }
    let zm = 0.5 * (za + zb);
    let fm = eval(zm)?;
    Ok(arg_increment(eval, za, zm, fa, fm, depth + 1)? + arg_increment(eval, zm, zb, fm, fb, depth + 1)?)
}
