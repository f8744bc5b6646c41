//! Direct scattering: `a1`, `a2`, `b` from the initial datum, closed forms
//! for the box, property checks and zero counting in the upper half-plane.

mod profile;
mod spectral;
mod zeros;

pub use profile::{InitialProfile, ProfileError, SampledProfile, DECAY_TOLERANCE};
pub use spectral::{
    a1_at, a2_at, box_spectral, box_spectral_complex, box_spectral_data, check_properties, scatter, scatter_point, PropertyReport,
    ScatterError, SpectralData,
};
pub use zeros::{count_zeros_upper, Rectangle, ZeroCountError, CONTOUR_FLOOR};

use crate::C64;

/// Zeros of `a1` in the rectangle (closed form for the box, ODE otherwise).
pub fn count_zeros_a1(q0: &InitialProfile, contour: &Rectangle) -> Result<u32, ZeroCountError> {
    match q0 {
        InitialProfile::Box { h, width, sigma } => {
            let (h, width, sigma) = (*h, *width, *sigma);
            count_zeros_upper(|k| Ok::<_, ScatterError>(box_spectral_complex(h, width, sigma, k).0), contour)
        }
        InitialProfile::Sampled(_) => count_zeros_upper(|k| a1_at(q0, k), contour),
    }
}

/// Zeros of `a2` in the mirror image of the rectangle in the lower
/// half-plane, counted through `conj(a2(conj k))`.
pub fn count_zeros_a2(q0: &InitialProfile, contour: &Rectangle) -> Result<u32, ZeroCountError> {
    match q0 {
        InitialProfile::Box { .. } => count_zeros_upper(|_| Ok::<_, ScatterError>(C64::new(1.0, 0.0)), contour),
        InitialProfile::Sampled(_) => count_zeros_upper(|k: C64| a2_at(q0, k.conj()).map(|v| v.conj()), contour),
    }
}
