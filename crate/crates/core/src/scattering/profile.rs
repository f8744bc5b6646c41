use crate::grid::UniformGrid;
use crate::interp::CubicSpline;
use crate::{Sigma, C64};
use thiserror::Error;

/// Samples this far below the peak are treated as zero when trimming the
/// integration interval of a sampled profile.
const TRIM_LEVEL: f64 = 1e-14;
/// Required decay of sampled values at the grid ends.
pub const DECAY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("box width must be positive and finite, got {0}")]
    BadWidth(f64),
    #[error("box amplitude must be finite")]
    BadAmplitude,
    #[error("sample grid must be symmetric about 0")]
    AsymmetricGrid,
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite sample at x = {0}")]
    NonFinite(f64),
    #[error("profile has not decayed at the grid ends: |q| = {0:e} > {DECAY_TOLERANCE:e}")]
    NotDecayed(f64),
}

/// Initial datum `q0(x)` together with the sign `σ` of the nonlinearity.
#[derive(Debug, Clone)]
pub enum InitialProfile {
    /// `q0 = H` on `(0, L)` and zero elsewhere.
    Box { h: C64, width: f64, sigma: Sigma },
    Sampled(SampledProfile),
}

#[derive(Debug, Clone)]
pub struct SampledProfile {
    grid: UniformGrid,
    values: Vec<C64>,
    sigma: Sigma,
    spline: CubicSpline,
    reach: f64,
}

impl SampledProfile {
    pub fn new(grid: UniformGrid, values: Vec<C64>, sigma: Sigma) -> Result<Self, ProfileError> {
        if !grid.is_symmetric() {
            return Err(ProfileError::AsymmetricGrid);
        }
        if values.len() != grid.len() {
            return Err(ProfileError::LengthMismatch { expected: grid.len(), got: values.len() });
        }
        for (i, v) in values.iter().enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(ProfileError::NonFinite(grid.node(i)));
            }
        }
        let edge = values[0].norm().max(values[values.len() - 1].norm());
        if edge > DECAY_TOLERANCE {
            return Err(ProfileError::NotDecayed(edge));
        }
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let h = grid.step();
        let reach = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > TRIM_LEVEL * peak)
            .map(|(i, _)| grid.node(i).abs())
            .fold(0.0, f64::max);
        let reach = (reach + 2.0 * h).min(grid.end());
        let spline = CubicSpline::new(grid, values.clone());
        Ok(SampledProfile { grid, values, sigma, spline, reach })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }
}

impl InitialProfile {
    pub fn boxed(h: C64, width: f64, sigma: Sigma) -> Result<Self, ProfileError> {
        if !(width.is_finite() && width > 0.0) {
            return Err(ProfileError::BadWidth(width));
        }
        if !(h.re.is_finite() && h.im.is_finite()) {
            return Err(ProfileError::BadAmplitude);
        }
        Ok(InitialProfile::Box { h, width, sigma })
    }

    pub fn zero(sigma: Sigma) -> Self {
        InitialProfile::Box { h: C64::new(0.0, 0.0), width: 1.0, sigma }
    }

    pub fn sampled(grid: UniformGrid, values: Vec<C64>, sigma: Sigma) -> Result<Self, ProfileError> {
        SampledProfile::new(grid, values, sigma).map(InitialProfile::Sampled)
    }

    /// Samples `f` on `grid`.
    pub fn from_fn(grid: UniformGrid, sigma: Sigma, f: impl Fn(f64) -> C64) -> Result<Self, ProfileError> {
        Self::sampled(grid, grid.nodes().into_iter().map(f).collect(), sigma)
    }

    pub fn sigma(&self) -> Sigma {
        match self {
            InitialProfile::Box { sigma, .. } => *sigma,
            InitialProfile::Sampled(s) => s.sigma,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            InitialProfile::Box { h, .. } => h.norm() == 0.0,
            InitialProfile::Sampled(s) => s.values.iter().all(|v| v.norm() == 0.0),
        }
    }

    /// `q0(x)`; box edges take the mean of the one-sided values.
    pub fn eval(&self, x: f64) -> C64 {
        match self {
            InitialProfile::Box { h, width, .. } => {
                if x > 0.0 && x < *width {
                    *h
                } else if x == 0.0 || x == *width {
                    *h / 2.0
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            InitialProfile::Sampled(s) => s.spline.eval(x),
        }
    }

    /// `∫ |q0| dx` (trapezoid rule for sampled data).
    pub fn l1_norm(&self) -> f64 {
        match self {
            InitialProfile::Box { h, width, .. } => h.norm() * width,
            InitialProfile::Sampled(s) => {
                let n = s.values.len();
                let inner: f64 = s.values[1..n - 1].iter().map(|v| v.norm()).sum();
                s.grid.step() * (inner + 0.5 * (s.values[0].norm() + s.values[n - 1].norm()))
            }
        }
    }

    /// Half-width `R` such that `q0` vanishes outside `[-R, R]`.
    pub fn reach(&self) -> f64 {
        match self {
            InitialProfile::Box { width, .. } => *width,
            InitialProfile::Sampled(s) => s.reach,
        }
    }

    /// Points where the potential of the scattering system is non-smooth; the
    /// first and last are the integration limits.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        match self {
            InitialProfile::Box { width, .. } => vec![-width, 0.0, *width],
            InitialProfile::Sampled(s) => vec![-s.reach, s.reach],
        }
    }

    /// Maximum of `|q0(x) - q0(-x)|` over the sample nodes (box: analytic).
    pub fn evenness_defect(&self) -> f64 {
        match self {
            InitialProfile::Box { h, .. } => h.norm(),
            InitialProfile::Sampled(s) => (0..s.values.len()).map(|i| (s.values[i] - s.values[s.grid.mirror(i)]).norm()).fold(0.0, f64::max),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_values_and_norm() {
        let p = InitialProfile::boxed(C64::new(0.3, 0.4), 2.0, Sigma::Plus).unwrap();
        assert_eq!(p.eval(1.0), C64::new(0.3, 0.4));
        assert_eq!(p.eval(2.0), C64::new(0.15, 0.2));
        assert_eq!(p.eval(-0.1), C64::new(0.0, 0.0));
        assert!((p.l1_norm() - 1.0).abs() < 1e-15);
        assert_eq!(p.breakpoints(), vec![-2.0, 0.0, 2.0]);
        assert!(InitialProfile::boxed(C64::new(1.0, 0.0), 0.0, Sigma::Plus).is_err());
    }

    #[test]
    fn sampled_validation() {
        let g = UniformGrid::symmetric(10.0, 201).unwrap();
        let p = InitialProfile::from_fn(g, Sigma::Minus, |x| C64::new(0.3 * (-x * x).exp(), 0.0)).unwrap();
        assert!((p.l1_norm() - 0.3 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!(p.reach() < 7.0);
        assert!(p.evenness_defect() < 1e-16);
        let wide = InitialProfile::from_fn(g, Sigma::Plus, |x| C64::new((-x * x / 20.0).exp(), 0.0));
        assert!(matches!(wide, Err(ProfileError::NotDecayed(_))));
        let g2 = UniformGrid::new(-10.0, 11.0, 201).unwrap();
        assert!(matches!(InitialProfile::from_fn(g2, Sigma::Plus, |_| C64::new(0.0, 0.0)), Err(ProfileError::AsymmetricGrid)));
    }
}
