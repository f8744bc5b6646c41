use super::{strictly_below_pi, Hermite, ReflectionData, RhError};
use crate::C64;
use std::f64::consts::{PI, TAU};

/// Largest accepted quadrature error estimate for `χ` and `δ`.
pub const QUADRATURE_TOLERANCE: f64 = 1e-7;

fn check_inside(r: &ReflectionData, k0: f64) -> Result<(), RhError> {
    let g = &r.kgrid;
    if k0 > g.start() && k0 < g.end() {
        Ok(())
    } else {
        Err(RhError::OutsideGrid(k0))
    }
}

fn check_assumption(r: &ReflectionData, k0: f64) -> Result<(), RhError> {
    let (arg, k) = r.max_abs_arg_up_to(k0);
    if !strictly_below_pi(arg) {
        return Err(RhError::AssumptionViolated { k, arg });
    }
    let at = r.log_w.eval(k0).im;
    if !strictly_below_pi(at) {
        return Err(RhError::AssumptionViolated { k: k0, arg: at.abs() });
    }
    Ok(())
}

/// `ln w(k)` on the unwrapped branch, interpolated between nodes.
pub fn log_w_at(r: &ReflectionData, k: f64) -> C64 {
    r.log_w.eval(k)
}

/// `r1(k)` interpolated between nodes (natural cubic through the samples).
pub fn r1_at(r: &ReflectionData, k: f64) -> C64 {
    Hermite::new(r.kgrid, &r.r1).eval(k)
}

/// `r2(k)` interpolated between nodes.
pub fn r2_at(r: &ReflectionData, k: f64) -> C64 {
    Hermite::new(r.kgrid, &r.r2).eval(k)
}

/// `ν(-ξ) = -ln w(-ξ) / 2π`, after checking `|arg w| < π` on `(-∞, -ξ]`.
pub fn nu_at(r: &ReflectionData, xi: f64) -> Result<C64, RhError> {
    check_inside(r, -xi)?;
    check_assumption(r, -xi)?;
    Ok(-r.log_w.eval(-xi) / TAU)
}

/// `ν(-ξ)` on the unwrapped branch without the argument check.
pub fn nu_at_unchecked(r: &ReflectionData, xi: f64) -> Result<C64, RhError> {
    check_inside(r, -xi)?;
    Ok(-r.log_w.eval(-xi) / TAU)
}

/// `-(1/2πi) [L(k_min) ln(k - k_min) + ∫_{k_min}^{b} ln(k - ζ) dL(ζ)]` for one
/// interpolant; `L = ln w` is taken as zero left of the grid.
fn chi_with(l: &Hermite, b: f64, k: C64) -> C64 {
    let k_min = l.grid().start();
    let jump = l.eval(k_min) * (k - k_min).ln();
    -(jump + l.log_moment(b, k)) / (2.0 * PI * C64::i())
}

fn estimated(r: &ReflectionData, f: impl Fn(&Hermite) -> C64) -> Result<C64, RhError> {
    let fine = f(&r.log_w);
    if let Some(coarse) = &r.log_w_coarse {
        // fourth-order interpolant: the fine error is about 1/15 of the difference
        let est = (fine - f(coarse)).norm() / 15.0;
        if est > QUADRATURE_TOLERANCE {
            return Err(RhError::NotConverged(est));
        }
    }
    Ok(fine)
}

fn on_cut(k: C64, xi: f64) -> bool {
    k.im == 0.0 && k.re <= -xi
}

/// `χ(k)` for the ray `ξ`: `δ(k, ξ) = (k + ξ)^{iν(-ξ)} e^{χ(k)}`.
pub fn chi_fn(r: &ReflectionData, xi: f64, k: C64) -> Result<C64, RhError> {
    check_inside(r, -xi)?;
    if on_cut(k, xi) && k.re != -xi {
        return Err(RhError::OnCut(k));
    }
    estimated(r, |l| chi_with(l, -xi, k))
}

/// `χ(-ξ) = -(1/2πi) ∫_{-∞}^{-ξ} ln(-ξ - ζ) d ln w(ζ)`.
pub fn chi_at(r: &ReflectionData, xi: f64) -> Result<C64, RhError> {
    check_inside(r, -xi)?;
    check_assumption(r, -xi)?;
    estimated(r, |l| chi_with(l, -xi, C64::new(-xi, 0.0)))
}

/// `δ(k, ξ) = exp{(1/2πi) ∫_{-∞}^{-ξ} ln w(ζ) / (ζ - k) dζ}`.
pub fn delta_at(r: &ReflectionData, xi: f64, k: C64) -> Result<C64, RhError> {
    check_inside(r, -xi)?;
    if on_cut(k, xi) {
        return Err(RhError::OnCut(k));
    }
    let e = estimated(r, |l| l.cauchy(-xi, k) / (2.0 * PI * C64::i()))?;
    Ok(e.exp())
}

/// Principal value `PV ∫ ln w(ζ) / (ζ - x) dζ` over the whole grid.
pub fn hilbert_log_w(r: &ReflectionData, x: f64) -> Result<C64, RhError> {
    check_inside(r, x)?;
    estimated(r, |l| l.cauchy(l.grid().end(), C64::new(x, 0.0)))
}
