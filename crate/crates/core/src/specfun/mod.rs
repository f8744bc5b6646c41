//! Special functions of complex argument: Gamma, the parabolic cylinder
//! function `D_a(z)` and the modified Bessel function `I_0`.

mod bessel;
mod gamma;
mod pcf;

pub use bessel::bessel_i0;
pub use gamma::{gamma, ln_gamma, rgamma};
pub use pcf::{pcf_d, pcf_d_with_derivative, PCF_MAX_ARG, PCF_MAX_ORDER};

use crate::C64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("gamma has a pole at z = {0}")]
    Pole(C64),
    #[error("gamma overflows at z = {0}")]
    Overflow(C64),
    #[error("D_a(z) requested outside the supported envelope (a = {a}, z = {z})")]
    OutOfEnvelope { a: C64, z: C64 },
    #[error("series for D_a(z) did not converge (a = {a}, z = {z})")]
    NonConvergent { a: C64, z: C64 },
    #[error("I0 is only provided for 0 <= x <= 700, got {0}")]
    Domain(f64),
}

/// `sin(pi x)` with exact argument reduction.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let s = (std::f64::consts::PI * (x - n)).sin();
    if n.rem_euclid(2.0) == 0.0 {
        s
    } else {
        -s
    }
}

/// `cos(pi x)` with exact argument reduction.
pub(crate) fn cos_pi(x: f64) -> f64 {
    let n = x.round();
    let c = (std::f64::consts::PI * (x - n)).cos();
    if n.rem_euclid(2.0) == 0.0 {
        c
    } else {
        -c
    }
}

/// `sin(pi z)` for complex `z`.
pub(crate) fn csin_pi(z: C64) -> C64 {
    let y = std::f64::consts::PI * z.im;
    C64::new(sin_pi(z.re) * y.cosh(), cos_pi(z.re) * y.sinh())
}
