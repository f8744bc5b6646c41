//! Parabolic cylinder function `D_a(z)` (Whittaker's notation), solution of
//! `y'' = (z^2/4 - a - 1/2) y` that decays along the positive real axis.
//!
//! Evaluation scheme for `|arg z| <= pi/2`:
//! * `|z| <= R_TAYLOR`: Taylor series about the origin;
//! * `|z| >= R_ASYMP`: the large-argument expansion;
//! * in between, Taylor steps of the Weber equation, started from the
//!   asymptotic expansion when `D_a` is recessive (`|arg z| < pi/4`) and from
//!   the origin otherwise, so stepping always follows the growing direction.
//!
//! The left half-plane is reached through the connection formulas
//! `D_a(z) = e^{±iπa} D_a(-z) + sqrt(2π)/Γ(-a) e^{±iπ(a+1)/2} D_{-a-1}(∓iz)`.

use super::{gamma::rgamma, SpecFunError};
use crate::C64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Largest supported `|a|`.
pub const PCF_MAX_ORDER: f64 = 5.0;
/// Largest supported `|z|`.
pub const PCF_MAX_ARG: f64 = 30.0;

const R_TAYLOR: f64 = 3.0;
const R_ASYMP: f64 = 11.0;
const MAX_STEP: f64 = 0.5;
const MAX_TERMS: usize = 400;
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// `D_a(z)`.
pub fn pcf_d(a: C64, z: C64) -> Result<C64, SpecFunError> {
    pcf_d_with_derivative(a, z).map(|(d, _)| d)
}

/// `(D_a(z), D_a'(z))`.
pub fn pcf_d_with_derivative(a: C64, z: C64) -> Result<(C64, C64), SpecFunError> {
    if !(a.norm() <= PCF_MAX_ORDER + 1e-12 && z.norm() <= PCF_MAX_ARG + 1e-12) {
        return Err(SpecFunError::OutOfEnvelope { a, z });
    }
    eval(a, z)
}

fn eval(a: C64, z: C64) -> Result<(C64, C64), SpecFunError> {
    if z.re >= 0.0 {
        return right_half(a, z);
    }
    // connection formula; the sign choice keeps -z and ∓iz in the right half-plane
    let s = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let i = C64::i();
    let (d1, dd1) = right_half(a, -z)?;
    let rot = -s * i;
    let (d2, dd2) = right_half(-a - 1.0, rot * z)?;
    let e1 = (s * i * PI * a).exp();
    let e2 = (s * i * FRAC_PI_2 * (a + 1.0)).exp() * SQRT_2PI * rgamma(-a);
    Ok((e1 * d1 + e2 * d2, -e1 * dd1 + e2 * rot * dd2))
}

fn right_half(a: C64, z: C64) -> Result<(C64, C64), SpecFunError> {
    let r = z.norm();
    if r <= R_TAYLOR {
        let (d0, dd0) = origin_values(a);
        return taylor_step(a, C64::new(0.0, 0.0), d0, dd0, z).ok_or(SpecFunError::NonConvergent { a, z });
    }
    if r >= R_ASYMP {
        if let Some(v) = asymptotic(a, z) {
            return Ok(v);
        }
    }
    let dir = z / r;
    let (start, mut y, mut dy) = if z.arg().abs() < FRAC_PI_4 {
        let zs = dir * r.max(R_ASYMP);
        let (y, dy) = asymptotic(a, zs).ok_or(SpecFunError::NonConvergent { a, z })?;
        (zs, y, dy)
    } else {
        let zs = dir * R_TAYLOR;
        let (d0, dd0) = origin_values(a);
        let (y, dy) = taylor_step(a, C64::new(0.0, 0.0), d0, dd0, zs).ok_or(SpecFunError::NonConvergent { a, z })?;
        (zs, y, dy)
    };
    let span = z - start;
    let n = (span.norm() / MAX_STEP).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut z0 = start;
    for _ in 0..n {
        let (y1, dy1) = taylor_step(a, z0, y, dy, h).ok_or(SpecFunError::NonConvergent { a, z })?;
        y = y1;
        dy = dy1;
        z0 += h;
    }
    Ok((y, dy))
}

fn origin_values(a: C64) -> (C64, C64) {
    let sqrt_pi = PI.sqrt();
    let two = C64::new(2.0, 0.0);
    let d0 = two.powc(a / 2.0) * sqrt_pi * rgamma((1.0 - a) / 2.0);
    let dd0 = -two.powc((a + 1.0) / 2.0) * sqrt_pi * rgamma(-a / 2.0);
    (d0, dd0)
}

/// Advances `(y, y')` from `z0` to `z0 + h` with the Taylor series of the
/// Weber equation about `z0`.
fn taylor_step(a: C64, z0: C64, y0: C64, dy0: C64, h: C64) -> Option<(C64, C64)> {
    if h.norm() == 0.0 {
        return Some((y0, dy0));
    }
    let c = a + 0.5;
    let q0 = z0 * z0 / 4.0 - c;
    let q1 = z0 / 2.0;
    // d[n-2], d[n-1], d[n]
    let (mut dm2, mut dm1) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    let (mut d0, mut d1) = (y0, dy0);
    let mut hn = C64::new(1.0, 0.0); // h^n
    let mut y = C64::new(0.0, 0.0);
    let mut dy = C64::new(0.0, 0.0);
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let term = d0 * hn;
        y += term;
        if n > 0 {
            dy += d0 * (n as f64) * hn / h;
        }
        let scale = y.norm().max(dy.norm() * h.norm()).max(f64::MIN_POSITIVE);
        if term.norm() <= 1e-17 * scale && n > 2 {
            small += 1;
            if small >= 3 {
                return Some((y, dy));
            }
        } else {
            small = 0;
        }
        let nf = n as f64;
        let d2 = (q0 * d0 + q1 * dm1 + 0.25 * dm2) / ((nf + 2.0) * (nf + 1.0));
        dm2 = dm1;
        dm1 = d0;
        d0 = d1;
        d1 = d2;
        hn *= h;
    }
    None
}

/// Large-`|z|` expansion for `|arg z| <= pi/2`, with the derivative from
/// `D_a' = -z/2 D_a + a D_{a-1}`. Returns `None` when the series does not
/// reach full precision before its terms start to grow.
fn asymptotic(a: C64, z: C64) -> Option<(C64, C64)> {
    let d = asymptotic_value(a, z)?;
    let dm1 = asymptotic_value(a - 1.0, z)?;
    Some((d, -z / 2.0 * d + a * dm1))
}

fn asymptotic_value(a: C64, z: C64) -> Option<C64> {
    let z2 = z * z;
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut prev = f64::INFINITY;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term = -term * (a - 2.0 * nf) * (a - 2.0 * nf - 1.0) / (2.0 * (nf + 1.0) * z2);
        let t = term.norm();
        if t > prev && t > 1e-17 * sum.norm() {
            return None;
        }
        sum += term;
        if t <= 1e-17 * sum.norm() {
            return Some((a * z.ln() - z2 / 4.0).exp() * sum);
        }
        prev = t;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn order_zero_is_gaussian() {
        for &(x, y) in &[(1.0, 0.0), (3.0, 2.0), (-2.5, 3.5), (0.3, -4.9), (-4.0, -2.0)] {
            let z = c(x, y);
            let d = pcf_d(c(0.0, 0.0), z).unwrap();
            assert!(rel(d, (-z * z / 4.0).exp()) < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn asymptotic_is_accepted_only_when_converged() {
        assert!(asymptotic_value(c(0.0, 5.0), c(2.0, 0.0)).is_none());
        assert!(asymptotic_value(c(0.0, 1.0), c(15.0, 0.0)).is_some());
    }

    #[test]
    fn envelope_is_enforced() {
        assert!(matches!(pcf_d(c(6.0, 0.0), c(1.0, 0.0)), Err(SpecFunError::OutOfEnvelope { .. })));
        assert!(matches!(pcf_d(c(1.0, 0.0), c(0.0, 31.0)), Err(SpecFunError::OutOfEnvelope { .. })));
    }

    #[test]
    fn regions_overlap() {
        let a = c(0.7, -1.3);
        for &arg in &[0.1, 0.5, 1.0, 1.4] {
            let dir = C64::from_polar(1.0, arg);
            let zt = dir * R_TAYLOR;
            let (d0, dd0) = origin_values(a);
            let (direct, _) = taylor_step(a, c(0.0, 0.0), d0, dd0, zt).unwrap();
            let (stepped, _) = right_half(a, zt).unwrap();
            assert!(rel(direct, stepped) < 1e-12, "arg {arg}: {}", rel(direct, stepped));
            if arg < FRAC_PI_4 {
                continue;
            }
            let za = dir * (R_ASYMP + 0.5);
            let (asym, _) = asymptotic(a, za).unwrap();
            let (y, dy) = taylor_step(a, c(0.0, 0.0), d0, dd0, dir * R_TAYLOR).unwrap();
            let mut z0 = dir * R_TAYLOR;
            let (mut y, mut dy) = (y, dy);
            let n = 30;
            let h = (za - z0) / n as f64;
            for _ in 0..n {
                let s = taylor_step(a, z0, y, dy, h).unwrap();
                y = s.0;
                dy = s.1;
                z0 += h;
            }
            let _ = dy;
            assert!(rel(asym, y) < 1e-8, "arg {arg}: {}", rel(asym, y));
        }
    }
}
