//! Parabolic cylinder model problem at the stationary point: the
//! coefficients `β`, `γ`, the explicit solution `m0(z)` of
//! `m0' + [[iz/2, β], [γ, -iz/2]] m0 = 0` and checks of its jump across the
//! real line and its normalization at infinity.
//!
//! Sector layout (verified by the jump test): in `Im z > 0`
//! `m11 = e^{-3πν/4} D_{iν}(e^{-3πi/4} z)`, `m22 = e^{πν/4} D_{-iν}(e^{-πi/4} z)`;
//! in `Im z < 0` `m11 = e^{πν/4} D_{iν}(e^{πi/4} z)`,
//! `m22 = e^{-3πν/4} D_{-iν}(e^{3πi/4} z)`. Off-diagonal entries follow from
//! the ODE; with `ω² = ±i` the combination `(d/dz ± iz/2) D_a(ωz)` reduces to
//! `ω a D_{a-1}(ωz)`, which avoids cancellation.

use crate::specfun::{pcf_d, rgamma, SpecFunError};
use crate::{Sigma, C64};
use rand::Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_4, PI};
use std::ops::{Add, Mul, Sub};
use thiserror::Error;

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("reflection coefficient vanishes at the stationary point")]
    VanishingReflection,
    #[error("m0 is discontinuous on the real axis; use m0_side for boundary values (z = {0})")]
    OnAxis(C64),
    #[error(transparent)]
    SpecialFunction(#[from] SpecFunError),
}

/// 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Matrix2C(pub [[C64; 2]; 2]);

impl Matrix2C {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Matrix2C([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        Matrix2C::new(o, z, z, o)
    }

    pub fn diag(a: C64, d: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        Matrix2C::new(a, z, z, d)
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        let m = &self.0;
        Some(Matrix2C::new(m[1][1] / d, -m[0][1] / d, -m[1][0] / d, m[0][0] / d))
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        Matrix2C::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |a, v| a.max(v.norm()))
    }
}

impl Mul for Matrix2C {
    type Output = Matrix2C;
    fn mul(self, o: Matrix2C) -> Matrix2C {
        let (a, b) = (&self.0, &o.0);
        Matrix2C::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Add for Matrix2C {
    type Output = Matrix2C;
    fn add(self, o: Matrix2C) -> Matrix2C {
        let (a, b) = (&self.0, &o.0);
        Matrix2C::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl Sub for Matrix2C {
    type Output = Matrix2C;
    fn sub(self, o: Matrix2C) -> Matrix2C {
        self + o.scale(C64::new(-1.0, 0.0))
    }
}

/// Coefficients of the model problem for one ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelCoefficients {
    pub xi: f64,
    pub beta: C64,
    pub gamma_c: C64,
    /// `ν(-ξ)`; equals `β γ`.
    pub nu: C64,
    /// `r1(-ξ)`, `r2(-ξ)` and `σ` fix the jump matrix.
    pub r1: C64,
    pub r2: C64,
    pub sigma: Sigma,
}

impl ModelCoefficients {
    /// Zero reflection: `β = γ = ν = 0`.
    pub fn trivial(xi: f64, sigma: Sigma) -> Self {
        let z = C64::new(0.0, 0.0);
        ModelCoefficients { xi, beta: z, gamma_c: z, nu: z, r1: z, r2: z, sigma }
    }

    /// `j0 = [[1 + σ r1 r2, σ r2], [r1, 1]]`.
    pub fn jump(&self) -> Matrix2C {
        let s = self.sigma.value();
        Matrix2C::new(1.0 + s * self.r1 * self.r2, s * self.r2, self.r1, C64::new(1.0, 0.0))
    }

    fn is_trivial(&self) -> bool {
        self.nu.norm() == 0.0
    }
}

/// `β = √(2π) e^{-πν/2} e^{-3πi/4} / (r1 Γ(-iν))`,
/// `γ = σ √(2π) e^{-πν/2} e^{-πi/4} / (r2 Γ(iν))`.
pub fn beta_gamma(r1: C64, r2: C64, nu: C64, sigma: Sigma, xi: f64) -> Result<ModelCoefficients, ModelError> {
    if r1.norm() == 0.0 || r2.norm() == 0.0 {
        return Err(ModelError::VanishingReflection);
    }
    let i = C64::i();
    let damp = (-PI * nu / 2.0).exp() * SQRT_2PI;
    let beta = damp * (-3.0 * FRAC_PI_4 * i).exp() * rgamma(-i * nu) / r1;
    let gamma_c = sigma.value() * damp * (-FRAC_PI_4 * i).exp() * rgamma(i * nu) / r2;
    Ok(ModelCoefficients { xi, beta, gamma_c, nu, r1, r2, sigma })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPlane {
    Upper,
    Lower,
}

/// The solution formula of the given half-plane, continued to any `z`
/// (each is entire). On the real axis this gives the boundary values.
pub fn m0_side(coeff: &ModelCoefficients, z: C64, side: HalfPlane) -> Result<Matrix2C, ModelError> {
    let i = C64::i();
    if coeff.is_trivial() {
        return Ok(Matrix2C::diag((-i * z * z / 4.0).exp(), (i * z * z / 4.0).exp()));
    }
    let nu = coeff.nu;
    let (w11, w22, p11, p22) = match side {
        HalfPlane::Upper => ((-3.0 * FRAC_PI_4 * i).exp(), (-FRAC_PI_4 * i).exp(), (-3.0 * PI * nu / 4.0).exp(), (PI * nu / 4.0).exp()),
        HalfPlane::Lower => ((FRAC_PI_4 * i).exp(), (3.0 * FRAC_PI_4 * i).exp(), (PI * nu / 4.0).exp(), (-3.0 * PI * nu / 4.0).exp()),
    };
    let a = i * nu;
    let m11 = p11 * pcf_d(a, w11 * z)?;
    let m21 = p11 * w11 * a * pcf_d(a - 1.0, w11 * z)? / (-coeff.beta);
    let m22 = p22 * pcf_d(-a, w22 * z)?;
    let m12 = p22 * w22 * (-a) * pcf_d(-a - 1.0, w22 * z)? / (-coeff.gamma_c);
    Ok(Matrix2C::new(m11, m12, m21, m22))
}

/// `m0(z)` for `Im z != 0`.
pub fn m0_eval(coeff: &ModelCoefficients, z: C64) -> Result<Matrix2C, ModelError> {
    if z.im > 0.0 {
        m0_side(coeff, z, HalfPlane::Upper)
    } else if z.im < 0.0 {
        m0_side(coeff, z, HalfPlane::Lower)
    } else {
        Err(ModelError::OnAxis(z))
    }
}

/// `A(z) = [[iz/2, β], [γ, -iz/2]]`.
fn ode_matrix(coeff: &ModelCoefficients, z: C64) -> Matrix2C {
    let h = C64::i() * z / 2.0;
    Matrix2C::new(h, coeff.beta, coeff.gamma_c, -h)
}

/// `diag(e^{iz²/4} z^{-iν}, e^{-iz²/4} z^{iν})` with the principal logarithm.
fn normalizer_inverse(nu: C64, z: C64) -> Matrix2C {
    let i = C64::i();
    let e = i * z * z / 4.0 - i * nu * z.ln();
    Matrix2C::diag(e.exp(), (-e).exp())
}

/// Sample points and radii used by [`verify_model`].
#[derive(Debug, Clone)]
pub struct VerifySettings {
    pub ode_points: Vec<C64>,
    pub jump_points: Vec<f64>,
    /// Radii for the normalization check along the rays `arg z = ±π/4, ±3π/4`.
    pub radii: Vec<f64>,
}

impl Default for VerifySettings {
    fn default() -> Self {
        let mut ode_points = Vec::new();
        for sgn in [1.0, -1.0] {
            for a in 0..10 {
                for b in 0..5 {
                    ode_points.push(C64::new(-4.5 + a as f64, sgn * (0.25 + 0.9 * b as f64)));
                }
            }
        }
        VerifySettings { ode_points, jump_points: vec![-3.0, -1.0, 1.0, 3.0], radii: vec![8.0, 10.0, 12.0, 14.0, 17.0, 20.0, 24.0, 28.0] }
    }
}

/// Residual maxima of the model-problem checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelReport {
    pub ode_residual: f64,
    pub jump_residual: f64,
    pub beta_gamma_product: f64,
    pub top_left_jump: f64,
    pub det_drift: f64,
    pub normalization_residual: f64,
    pub normalization_slope: f64,
    pub beta_extracted: C64,
    pub gamma_extracted: C64,
    pub beta_error: f64,
    pub gamma_error: f64,
}

const RAYS: [f64; 4] = [FRAC_PI_4, 3.0 * FRAC_PI_4, -FRAC_PI_4, -3.0 * FRAC_PI_4];

/// Runs the ODE, jump, determinant and normalization checks and recovers
/// `β`, `γ` from the `1/z` term at infinity.
pub fn verify_model(coeff: &ModelCoefficients, set: &VerifySettings) -> Result<ModelReport, ModelError> {
    let mut ode_residual: f64 = 0.0;
    let mut det_drift: f64 = 0.0;
    for &z in &set.ode_points {
        let h = 1e-3 / (1.0 + z.norm() / 4.0);
        let m = |s: f64| m0_eval(coeff, z + s * h);
        let d = (m(-2.0)? - m(2.0)? + (m(1.0)? - m(-1.0)?).scale(C64::new(8.0, 0.0))).scale(C64::new(1.0 / (12.0 * h), 0.0));
        let m0 = m0_eval(coeff, z)?;
        let am = ode_matrix(coeff, z) * m0;
        ode_residual = ode_residual.max((d + am).max_abs() / (d.max_abs() + am.max_abs()));
        det_drift = det_drift.max((m0.det() - 1.0).norm());
    }
    let j0 = coeff.jump();
    let mut jump_residual: f64 = 0.0;
    for &x in &set.jump_points {
        let z = C64::new(x, 0.0);
        let plus = m0_side(coeff, z, HalfPlane::Upper)?;
        let minus = m0_side(coeff, z, HalfPlane::Lower)?;
        let j = minus.inverse().ok_or(ModelError::OnAxis(z))? * plus;
        jump_residual = jump_residual.max((j - j0).max_abs());
    }
    let mut res_by_radius = Vec::new();
    let mut z_y12 = Vec::new();
    let mut z_y21 = Vec::new();
    for &r in &set.radii {
        let mut worst: f64 = 0.0;
        let (mut s12, mut s21) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for phi in RAYS {
            let z = C64::from_polar(r, phi);
            let y = m0_eval(coeff, z)? * normalizer_inverse(coeff.nu, z) - Matrix2C::identity();
            worst = worst.max(y.max_abs());
            s12 += z * y.0[0][1] / 4.0;
            s21 += z * y.0[1][0] / 4.0;
        }
        res_by_radius.push((r, worst));
        z_y12.push(s12);
        z_y21.push(s21);
    }
    let normalization_residual = res_by_radius.last().map(|p| p.1).unwrap_or(0.0);
    let normalization_slope = log_log_slope(&res_by_radius);
    // averaging over the four rays removes the z^-1, z^-2, z^-3 corrections;
    // a final Richardson step in R^-4 uses the two largest radii
    let n = set.radii.len();
    let (beta_extracted, gamma_extracted) = if n >= 2 {
        let (r1, r2) = (set.radii[n - 2].powi(4), set.radii[n - 1].powi(4));
        let rich = |f1: C64, f2: C64| (f2 * r2 - f1 * r1) / (r2 - r1);
        (-C64::i() * rich(z_y12[n - 2], z_y12[n - 1]), C64::i() * rich(z_y21[n - 2], z_y21[n - 1]))
    } else {
        (C64::new(f64::NAN, 0.0), C64::new(f64::NAN, 0.0))
    };
    let s = coeff.sigma.value();
    Ok(ModelReport {
        ode_residual,
        jump_residual,
        beta_gamma_product: (coeff.beta * coeff.gamma_c - coeff.nu).norm(),
        top_left_jump: if coeff.is_trivial() { 0.0 } else { ((-2.0 * PI * coeff.nu).exp() - (1.0 + s * coeff.r1 * coeff.r2)).norm() },
        det_drift,
        normalization_residual,
        normalization_slope,
        beta_error: (beta_extracted - coeff.beta).norm(),
        gamma_error: (gamma_extracted - coeff.gamma_c).norm(),
        beta_extracted,
        gamma_extracted,
    })
}

/// Draws `r1`, `r2`, `σ` at random until `ν = -ln(1 + σ r1 r2)/(2π)` has
/// modulus at most `max_nu`, and returns the matching coefficients.
pub fn sample_admissible<R: Rng>(rng: &mut R, max_nu: f64) -> ModelCoefficients {
    loop {
        let mut draw = || C64::from_polar(rng.gen_range(0.05..0.9), rng.gen_range(-PI..PI));
        let (r1, r2) = (draw(), draw());
        let sigma = if rng.gen_bool(0.5) { Sigma::Plus } else { Sigma::Minus };
        let w = 1.0 + sigma.value() * r1 * r2;
        let nu = -w.ln() / (2.0 * PI);
        if nu.norm() <= max_nu && nu.norm() > 1e-3 {
            if let Ok(c) = beta_gamma(r1, r2, nu, sigma, rng.gen_range(-2.0..2.0)) {
                return c;
            }
        }
    }
}

/// Least-squares slope of `ln y` against `ln x`; zero residuals give 0.
fn log_log_slope(pts: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = pts.iter().filter(|p| p.1 > 0.0).map(|p| (p.0.ln(), p.1.ln())).collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
