use super::{csin_pi, SpecFunError};
use crate::C64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS_C: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_274e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162_4e-6,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Lanczos sum for `Re z >= 1/2`; returns `ln Γ(z)` on the branch that is
/// continuous in the right half-plane.
fn ln_gamma_right(z: C64) -> C64 {
    let tmp = z + LANCZOS_G;
    let mut ser = C64::new(LANCZOS_C0, 0.0);
    let mut y = z;
    for c in LANCZOS_C {
        y += 1.0;
        ser += c / y;
    }
    (z + 0.5) * tmp.ln() - tmp + LN_SQRT_2PI + ser.ln() - z.ln()
}

fn is_pole(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Euler's Gamma function.
pub fn gamma(z: C64) -> Result<C64, SpecFunError> {
    if is_pole(z) {
        return Err(SpecFunError::Pole(z));
    }
    let value = if z.re >= 0.5 {
        ln_gamma_right(z).exp()
    } else {
        let s = csin_pi(z);
        PI / (s * ln_gamma_right(1.0 - z).exp())
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(SpecFunError::Overflow(z))
    }
}

/// A logarithm of Γ(z). For `Re z >= 1/2` this is the branch continuous in
/// the right half-plane; to the left it is assembled from the reflection
/// formula with principal logarithms, so the imaginary part is only defined
/// modulo 2π there.
pub fn ln_gamma(z: C64) -> Result<C64, SpecFunError> {
    if is_pole(z) {
        return Err(SpecFunError::Pole(z));
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        Ok(C64::new(PI.ln(), 0.0) - csin_pi(z).ln() - ln_gamma_right(1.0 - z))
    }
}

/// Reciprocal Gamma function, entire; zero at the non-positive integers.
pub fn rgamma(z: C64) -> C64 {
    if is_pole(z) {
        return C64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        (-ln_gamma_right(z)).exp()
    } else {
        csin_pi(z) * ln_gamma_right(1.0 - z).exp() / PI
    }
}
