//! Split-step Fourier integrator for `i q_t + q_xx + 2σ q² conj(q(-x)) = 0`
//! on the periodic cell `[-X, X)`.
//!
//! Nodes are `x_j = (j - N/2) dx` with `dx = 2X/N`, so `x ↦ -x` is the index
//! map `j ↦ (N - j) mod N`. One step is Strang splitting: a half step of the
//! exact linear flow `e^{-iκ² dt/2}` (with the 2/3-rule mask), a classical RK4
//! step of `dq/dt = 2iσ q² conj(q(-x))`, and a second linear half step.

use crate::grid::UniformGrid;
use crate::interp::lagrange4;
use crate::scattering::{InitialProfile, ProfileError};
use crate::{Sigma, C64};
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::{self, Write};
use std::sync::Arc;
use thiserror::Error;

/// Edge band: the outer 5% of the cell on each side.
pub const EDGE_FRACTION: f64 = 0.05;
/// Largest `|q|` tolerated in the edge band.
pub const EDGE_ERROR: f64 = 1e-6;
/// Edge level above which a warning is recorded.
pub const EDGE_WARNING: f64 = 1e-8;
/// Default level below which samples outside the window are dropped when a
/// field is handed to scattering.
pub const TRIM_LEVEL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvolveError {
    #[error("invalid evolution config: {0}")]
    InvalidConfig(String),
    #[error("field reached the edge band at t = {t}: |q| = {value:e}")]
    BoundaryContamination { t: f64, value: f64 },
    #[error("blow-up detected at t = {t}: max |q| = {peak:e}")]
    BlowUp { t: f64, peak: f64 },
    #[error("non-finite field at t = {0}")]
    NonFinite(f64),
    #[error("ray x = {x} at t = {t} leaves the safe window |x| < {limit}")]
    RayOutsideWindow { t: f64, x: f64, limit: f64 },
    #[error("field has not decayed inside the cell (|q| = {0:e} at the edge)")]
    NotLocalized(f64),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Nonlinear term of the integrated equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Nonlinearity {
    /// `2σ q² conj(q(-x))`.
    #[default]
    Nonlocal,
    /// `2σ |q|² q`, the local equation (exact phase rotation substep).
    Local,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveConfig {
    pub dt: f64,
    pub t_final: f64,
    /// Half-width `X` of the periodic cell.
    pub half_width: f64,
    /// Node count `N`, a power of two.
    pub nodes: usize,
    /// Fraction of the Nyquist wavenumber kept by the dealiasing mask.
    pub dealias_fraction: f64,
    /// Apply `exp(-36 (|κ|/κ_c)^16)` once to the initial field, `κ_c` being
    /// the mask cutoff.
    pub smooth_initial: bool,
    /// First snapshot time; snapshots follow every `snapshot_every`.
    pub snapshot_start: f64,
    pub snapshot_every: f64,
    /// Allowed growth of `max |q|` over its initial value.
    pub blowup_factor: f64,
    pub nonlinearity: Nonlinearity,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            dt: 1e-3,
            t_final: 1.0,
            half_width: 128.0,
            nodes: 4096,
            dealias_fraction: 2.0 / 3.0,
            smooth_initial: false,
            snapshot_start: 0.0,
            snapshot_every: 1.0,
            blowup_factor: 50.0,
            nonlinearity: Nonlinearity::Nonlocal,
        }
    }
}

impl EvolveConfig {
    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.nodes as f64
    }

    /// Largest wavenumber kept by the dealiasing mask.
    pub fn cutoff(&self) -> f64 {
        self.dealias_fraction * PI / self.dx()
    }

    /// Checks sizes and the explicit-substep budget `dt κ_c² ≤ 40` (the linear
    /// flow is exact, so this only bounds the phase error per step).
    pub fn validate(&self) -> Result<(), EvolveError> {
        let bad = |m: &str| Err(EvolveError::InvalidConfig(m.to_string()));
        if !(self.nodes >= 16 && self.nodes.is_power_of_two()) {
            return bad("nodes must be a power of two, at least 16");
        }
        if !(self.half_width.is_finite() && self.half_width > 0.0) {
            return bad("half_width must be positive");
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad("dt must be positive");
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return bad("t_final must be non-negative");
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return bad("dealias_fraction must lie in (0, 1]");
        }
        if !(self.snapshot_every > 0.0 && self.snapshot_start >= 0.0) {
            return bad("snapshot_every must be positive and snapshot_start non-negative");
        }
        if !(self.blowup_factor > 1.0) {
            return bad("blowup_factor must exceed 1");
        }
        if self.dt * self.cutoff().powi(2) > 40.0 {
            return bad("dt too large for the resolved wavenumbers (dt κ_c² > 40)");
        }
        Ok(())
    }

    fn steps_to(&self, t: f64) -> usize {
        (t / self.dt).round() as usize
    }
}

/// Field on the periodic cell at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub half_width: f64,
    pub q: Vec<C64>,
    pub t: f64,
}

impl Field {
    /// Samples `q0` at the nodes; box edges get the mean value.
    pub fn sample(q0: &InitialProfile, half_width: f64, nodes: usize) -> Self {
        let mut f = Field { half_width, q: vec![C64::new(0.0, 0.0); nodes], t: 0.0 };
        for j in 0..nodes {
            f.q[j] = q0.eval(f.x(j));
        }
        f
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.q.len() as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        (j as f64 - (self.q.len() / 2) as f64) * self.dx()
    }

    /// Index of the node at `-x_j`.
    pub fn mirror(&self, j: usize) -> usize {
        (self.q.len() - j) % self.q.len()
    }

    pub fn max_abs(&self) -> f64 {
        self.q.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// `max |q(x) - q(-x)|`.
    pub fn evenness_defect(&self) -> f64 {
        (0..self.len()).map(|j| (self.q[j] - self.q[self.mirror(j)]).norm()).fold(0.0, f64::max)
    }

    /// `max |q|` over the edge band.
    pub fn edge_level(&self) -> f64 {
        let band = ((self.len() as f64 * EDGE_FRACTION).ceil() as usize).max(1);
        let n = self.len();
        self.q[..band].iter().chain(&self.q[n - band..]).fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Cubic interpolation at `x`; `None` within two nodes of the cell ends.
    pub fn eval(&self, x: f64) -> Option<C64> {
        lagrange4(-self.half_width, self.dx(), &self.q, x)
    }

    /// Snapshot CSV with header `x,re_q,im_q`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x,re_q,im_q")?;
        for j in 0..self.len() {
            writeln!(w, "{:e},{:e},{:e}", self.x(j), self.q[j].re, self.q[j].im)?;
        }
        Ok(())
    }

    /// Band-limited interpolation onto a grid `upsample` times finer,
    /// restricted to the smallest symmetric window outside which
    /// `|q| <= trim_level`, as a sampled profile for scattering. The window's
    /// end samples are set to zero; the L¹ mass dropped this way bounds the
    /// change in the scattering data.
    pub fn to_profile(&self, sigma: Sigma, upsample: usize, trim_level: f64) -> Result<Trimmed, EvolveError> {
        let n = self.len();
        let m = n * upsample.max(1);
        let mut planner = FftPlanner::new();
        let mut spec = self.q.clone();
        planner.plan_fft_forward(n).process(&mut spec);
        let mut fine = vec![C64::new(0.0, 0.0); m];
        let half = n / 2;
        for i in 0..half {
            fine[i] = spec[i];
            fine[m - half + i] = spec[half + i];
        }
        // split the Nyquist coefficient so the interpolant stays real for real data
        fine[half] = spec[half] / 2.0;
        fine[m - half] = spec[half] / 2.0;
        planner.plan_fft_inverse(m).process(&mut fine);
        let scale = 1.0 / n as f64;
        for v in fine.iter_mut() {
            *v *= scale;
        }
        // fine node i sits at x = (i - m/2) dx/upsample
        let centre = m / 2;
        let mut reach = 0;
        for (i, v) in fine.iter().enumerate() {
            if v.norm() > trim_level {
                reach = reach.max(i.abs_diff(centre));
            }
        }
        let reach = reach + 1;
        if reach >= centre {
            return Err(EvolveError::NotLocalized(self.edge_level()));
        }
        let step = self.dx() / upsample.max(1) as f64;
        let grid = UniformGrid::symmetric(reach as f64 * step, 2 * reach + 1).map_err(|e| EvolveError::InvalidConfig(e.to_string()))?;
        let mut values = fine[centre - reach..=centre + reach].to_vec();
        let kept: f64 = values[1..2 * reach].iter().map(|v| v.norm()).sum();
        let total: f64 = fine[1..].iter().map(|v| v.norm()).sum();
        values[0] = C64::new(0.0, 0.0);
        values[2 * reach] = C64::new(0.0, 0.0);
        let profile = InitialProfile::sampled(grid, values, sigma)?;
        Ok(Trimmed { profile, discarded_l1: ((total - kept) * step).max(0.0) })
    }
}

/// A field restricted to a finite window.
#[derive(Debug, Clone)]
pub struct Trimmed {
    pub profile: InitialProfile,
    /// `∫ |q|` over the dropped samples.
    pub discarded_l1: f64,
}

/// Run summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub steps: usize,
    pub initial_peak: f64,
    pub max_peak: f64,
    pub max_edge_level: f64,
    pub final_evenness_defect: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub config: EvolveConfig,
    pub sigma: Sigma,
    pub snapshots: Vec<Field>,
    pub diagnostics: Diagnostics,
}

struct Stepper {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    half: Vec<C64>,
    scratch: Vec<C64>,
    refl: Vec<usize>,
    sigma: f64,
    dt: f64,
    nonlinearity: Nonlinearity,
}

fn wavenumbers(n: usize, half_width: f64) -> Vec<f64> {
    let base = PI / half_width;
    (0..n).map(|m| if m < n / 2 { m as f64 } else { m as f64 - n as f64 } * base).collect()
}

impl Stepper {
    fn new(cfg: &EvolveConfig, sigma: Sigma) -> Self {
        let n = cfg.nodes;
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let kc = cfg.cutoff();
        let scale = 1.0 / n as f64;
        let half = wavenumbers(n, cfg.half_width)
            .into_iter()
            .map(|k| if k.abs() <= kc { C64::from_polar(scale, -k * k * cfg.dt / 2.0) } else { C64::new(0.0, 0.0) })
            .collect();
        let scratch = vec![C64::new(0.0, 0.0); fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len())];
        Stepper { fwd, inv, half, scratch, refl: (0..n).map(|j| (n - j) % n).collect(), sigma: sigma.value(), dt: cfg.dt, nonlinearity: cfg.nonlinearity }
    }

    fn linear_half(&mut self, q: &mut [C64]) {
        self.fwd.process_with_scratch(q, &mut self.scratch);
        for (v, h) in q.iter_mut().zip(&self.half) {
            *v *= h;
        }
        self.inv.process_with_scratch(q, &mut self.scratch);
    }

    fn nonlinear(&self, q: &mut [C64]) {
        let dt = self.dt;
        let g = C64::new(0.0, 2.0 * self.sigma);
        match self.nonlinearity {
            Nonlinearity::Local => {
                for v in q.iter_mut() {
                    *v *= C64::from_polar(1.0, 2.0 * self.sigma * v.norm_sqr() * dt);
                }
            }
            Nonlinearity::Nonlocal => {
                // pairs (j, refl j) form closed 2-dimensional systems
                let n = q.len();
                for j in 0..n {
                    let m = self.refl[j];
                    if m < j {
                        continue;
                    }
                    let f = |a: C64, b: C64| (g * a * a * b.conj(), g * b * b * a.conj());
                    let (a, b) = (q[j], q[m]);
                    let k1 = f(a, b);
                    let k2 = f(a + k1.0 * (dt / 2.0), b + k1.1 * (dt / 2.0));
                    let k3 = f(a + k2.0 * (dt / 2.0), b + k2.1 * (dt / 2.0));
                    let k4 = f(a + k3.0 * dt, b + k3.1 * dt);
                    let na = a + (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0) * (dt / 6.0);
                    let nb = b + (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1) * (dt / 6.0);
                    q[j] = na;
                    q[m] = if m == j { na } else { nb };
                }
            }
        }
    }

    fn step(&mut self, q: &mut [C64]) {
        self.linear_half(q);
        self.nonlinear(q);
        self.linear_half(q);
    }
}

/// Applies `exp(-36 (|κ|/κ_c)^16)` to the field.
fn smooth(field: &mut Field, cfg: &EvolveConfig) {
    let n = field.len();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut field.q);
    let kc = cfg.cutoff();
    for (v, k) in field.q.iter_mut().zip(wavenumbers(n, cfg.half_width)) {
        *v *= (-36.0 * (k.abs() / kc).powi(16)).exp() / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut field.q);
}

/// Integrates from `q0` to `cfg.t_final`, storing snapshots at
/// `snapshot_start + j snapshot_every`.
pub fn evolve(q0: &InitialProfile, cfg: &EvolveConfig) -> Result<Trajectory, EvolveError> {
    cfg.validate()?;
    let mut field = Field::sample(q0, cfg.half_width, cfg.nodes);
    if cfg.smooth_initial {
        smooth(&mut field, cfg);
    }
    evolve_field(field, q0.sigma(), cfg)
}

/// As [`evolve`], starting from an already sampled field.
pub fn evolve_field(mut field: Field, sigma: Sigma, cfg: &EvolveConfig) -> Result<Trajectory, EvolveError> {
    cfg.validate()?;
    if field.len() != cfg.nodes || field.half_width != cfg.half_width {
        return Err(EvolveError::InvalidConfig("field does not match the configured cell".into()));
    }
    let total = cfg.steps_to(cfg.t_final);
    let first = cfg.steps_to(cfg.snapshot_start);
    let every = cfg.steps_to(cfg.snapshot_every).max(1);
    let mut stepper = Stepper::new(cfg, sigma);
    let initial_peak = field.max_abs();
    let mut diag = Diagnostics { steps: 0, initial_peak, max_peak: initial_peak, max_edge_level: field.edge_level(), final_evenness_defect: 0.0, warnings: Vec::new() };
    let mut snapshots = Vec::new();
    let mut warned = false;
    for n in 0..=total {
        if n > 0 {
            stepper.step(&mut field.q);
            field.t = n as f64 * cfg.dt;
            diag.steps = n;
            let peak = field.max_abs();
            if !peak.is_finite() {
                return Err(EvolveError::NonFinite(field.t));
            }
            diag.max_peak = diag.max_peak.max(peak);
            if initial_peak > 0.0 && peak > cfg.blowup_factor * initial_peak {
                return Err(EvolveError::BlowUp { t: field.t, peak });
            }
            let edge = field.edge_level();
            diag.max_edge_level = diag.max_edge_level.max(edge);
            if edge > EDGE_ERROR {
                return Err(EvolveError::BoundaryContamination { t: field.t, value: edge });
            }
            if edge > EDGE_WARNING && !warned {
                warned = true;
                diag.warnings.push(format!("edge level {edge:e} at t = {}", field.t));
            }
        }
        if n >= first && (n - first) % every == 0 {
            snapshots.push(field.clone());
        }
    }
    diag.final_evenness_defect = field.evenness_defect();
    Ok(Trajectory { config: cfg.clone(), sigma, snapshots, diagnostics: diag })
}

/// `q(4ξt, t)` at every snapshot, rejecting points outside the inner 95% of
/// the cell.
pub fn ray_probe(traj: &Trajectory, xi: f64) -> Result<Vec<(f64, C64)>, EvolveError> {
    let limit = (1.0 - EDGE_FRACTION) * traj.config.half_width;
    traj.snapshots
        .iter()
        .map(|f| {
            let x = 4.0 * xi * f.t;
            if x.abs() >= limit {
                return Err(EvolveError::RayOutsideWindow { t: f.t, x, limit });
            }
            f.eval(x).map(|q| (f.t, q)).ok_or(EvolveError::RayOutsideWindow { t: f.t, x, limit })
        })
        .collect()
}

/// Least-squares slope of `ln |q|` against `ln t`.
pub fn fit_decay_slope(series: &[(f64, C64)]) -> f64 {
    let pts: Vec<(f64, f64)> = series.iter().filter(|p| p.0 > 0.0 && p.1.norm() > 0.0).map(|p| (p.0.ln(), p.1.norm().ln())).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
