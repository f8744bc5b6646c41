//! Dormand–Prince 5(4) integrator for small complex linear systems.

use crate::C64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("step size underflow at x = {x}")]
    StepUnderflow { x: f64 },
    #[error("step budget exhausted at x = {x}")]
    TooManySteps { x: f64 },
    #[error("non-finite state at x = {x}")]
    NonFinite { x: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { atol: 1e-11, rtol: 1e-10 }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const MAX_STEPS: usize = 2_000_000;

fn comb<const N: usize>(y: &[C64; N], h: f64, terms: &[(f64, &[C64; N])]) -> [C64; N] {
    let mut out = *y;
    for (c, k) in terms {
        if *c != 0.0 {
            for i in 0..N {
                out[i] += k[i] * (h * c);
            }
        }
    }
    out
}

/// Integrates `y' = f(x, y)` from `x0` to `x1 > x0`. `h0` is the first trial step.
pub fn integrate<const N: usize, F>(mut f: F, x0: f64, x1: f64, y0: [C64; N], h0: f64, tol: Tolerance) -> Result<[C64; N], OdeError>
where
    F: FnMut(f64, &[C64; N]) -> [C64; N],
{
    let span = x1 - x0;
    if span <= 0.0 {
        return Ok(y0);
    }
    let mut x = x0;
    let mut y = y0;
    let mut h = h0.min(span).max(span * 1e-12);
    let mut k1 = f(x, &y);
    for _ in 0..MAX_STEPS {
        let last = x + h >= x1;
        if last {
            h = x1 - x;
        }
        let k2 = f(x + C2 * h, &comb(&y, h, &[(A21, &k1)]));
        let k3 = f(x + C3 * h, &comb(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(x + C4 * h, &comb(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(x + C5 * h, &comb(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(x + h, &comb(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = comb(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let x_new = if last { x1 } else { x + h };
        let k7 = f(x_new, &y_new);
        let mut err: f64 = 0.0;
        for i in 0..N {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let sc = tol.atol + tol.rtol * y[i].norm().max(y_new[i].norm());
            err = err.max(e.norm() / sc);
        }
        if !err.is_finite() {
            if y_new.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) && h <= span * 1e-14 {
                return Err(OdeError::NonFinite { x });
            }
            h *= 0.2;
            continue;
        }
        if err <= 1.0 {
            x = x_new;
            y = y_new;
            k1 = k7;
            if last {
                return Ok(y);
            }
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= if err <= 1.0 { fac } else { fac.min(1.0) };
        if h < span * 1e-14 {
            return Err(OdeError::StepUnderflow { x });
        }
    }
    Err(OdeError::TooManySteps { x })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_is_exact_to_tolerance() {
        // y1' = i y1, y2' = -2 y2
        let y = integrate(
            |_, y: &[C64; 2]| [C64::i() * y[0], -2.0 * y[1]],
            0.0,
            10.0,
            [C64::new(1.0, 0.0), C64::new(1.0, 0.0)],
            0.1,
            Tolerance::default(),
        )
        .unwrap();
        assert!((y[0] - C64::new(10f64.cos(), 10f64.sin())).norm() < 1e-8);
        assert!((y[1].re - (-20f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn fifth_order_on_polynomial() {
        let y = integrate(|x, _: &[C64; 1]| [C64::new(5.0 * x.powi(4), 0.0)], 0.0, 2.0, [C64::new(0.0, 0.0)], 2.0, Tolerance::default()).unwrap();
        assert!((y[0].re - 32.0).abs() < 1e-9);
    }
}
