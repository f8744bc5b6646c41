//! Numerical toolkit for the nonlocal nonlinear Schrödinger equation
//! `i q_t + q_xx + 2σ q² conj(q(-x)) = 0`: direct scattering, reflection
//! data and phase functions, the long-time leading term, the parabolic
//! cylinder model problem and a split-step integrator used as an oracle.

pub mod asymptotics;
pub mod compare;
pub mod evolution;
pub mod grid;
pub mod interp;
pub mod model_rhp;
pub mod ode;
pub mod scattering;
pub mod rh_data;
pub mod specfun;

pub use num_complex::Complex64 as C64;

use serde::{Deserialize, Serialize};

/// Sign of the nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sigma {
    Plus,
    Minus,
}

impl Sigma {
    pub fn value(self) -> f64 {
        match self {
            Sigma::Plus => 1.0,
            Sigma::Minus => -1.0,
        }
    }

    pub fn from_sign(s: i64) -> Option<Sigma> {
        match s {
            1 => Some(Sigma::Plus),
            -1 => Some(Sigma::Minus),
            _ => None,
        }
    }
}
