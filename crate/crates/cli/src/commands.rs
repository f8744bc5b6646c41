use crate::config::Loaded;
use crate::error::CliError;
use crate::output::Sink;
use nnls_core::asymptotics::{leading_term, ray_data, ray_data_unchecked, write_predictions_csv};
use nnls_core::compare::compare_rays;
use nnls_core::evolution::{evolve, Trajectory};
use nnls_core::model_rhp::{beta_gamma, sample_admissible, verify_model, ModelCoefficients, ModelReport, VerifySettings};
use nnls_core::rh_data::{gate_assumptions, r1_at, r2_at, reflect, write_rays_csv, GateReport, RayData, ReflectionData};
use nnls_core::scattering::{check_properties, scatter, InitialProfile, Rectangle, SpectralData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use std::f64::consts::PI;
use std::io::Write;

/// Largest accepted violation of the exact scattering identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-6;

pub struct Ctx {
    pub loaded: Loaded,
    pub sink: Sink,
    pub override_gates: bool,
}

struct Prepared {
    q0: InitialProfile,
    spectral: SpectralData,
    refl: ReflectionData,
    gates: GateReport,
}

impl Ctx {
    fn prepare(&self) -> Result<Prepared, CliError> {
        let q0 = self.loaded.profile()?;
        let spectral = scatter(&q0, &self.loaded.kgrid()).map_err(CliError::numerical)?;
        let refl = reflect(&spectral).map_err(CliError::numerical)?;
        let contour = Rectangle::upper(self.loaded.config.gates.contour_half_width);
        let gates = gate_assumptions(&q0, &refl, &contour);
        Ok(Prepared { q0, spectral, refl, gates })
    }

    fn require_gates(&self, g: &GateReport) -> Result<(), CliError> {
        if g.passed() || self.override_gates {
            return Ok(());
        }
        Err(CliError::GateRefusal(format!(
            "gate (i) {} (zeros of a1: {:?}, of a2: {:?}), gate (ii) {} (max |arg w| = {:.6}); rerun with --override-gates to force",
            verdict(g.gate_i),
            g.zeros_a1,
            g.zeros_a2,
            verdict(g.gate_ii),
            g.max_abs_arg_w
        )))
    }

    fn rays(&self, r: &ReflectionData) -> Result<Vec<RayData>, CliError> {
        self.loaded
            .config
            .rays
            .xi
            .iter()
            .map(|&xi| if self.override_gates { ray_data_unchecked(r, xi) } else { ray_data(r, xi) })
            .collect::<Result<_, _>>()
            .map_err(CliError::numerical)
    }

    fn evolve(&self, q0: &InitialProfile) -> Result<Trajectory, CliError> {
        evolve(q0, &self.loaded.config.evolution).map_err(CliError::numerical)
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn print_gates(g: &GateReport) {
    println!("gates: {}", verdict(g.passed()));
    println!("  (i)  zeros of a1 {:?}, of a2 {:?} in [-K,K]x[0,K], K = {}", g.zeros_a1, g.zeros_a2, g.contour_half_width);
    if let Some(n) = &g.zero_count_note {
        println!("       {n}");
    }
    println!("  (ii) max |arg(1 + σ r1 r2)| = {:.6} (grid step {:.3e})", g.max_abs_arg_w, g.grid_step);
    println!("  L1 norm {:.6}: sufficient bound {}", g.l1_norm, verdict(g.remark_l1));
}

pub fn cmd_scatter(ctx: &Ctx) -> Result<(), CliError> {
    let p = ctx.prepare()?;
    let props = check_properties(&p.spectral).map_err(CliError::numerical)?;
    ctx.sink.csv("spectral.csv", |w| p.spectral.write_csv(w))?;
    ctx.sink.json("spectral.json", &json!({ "properties": props, "gates": p.gates }))?;
    print_gates(&p.gates);
    let v = props.max_identity_violation();
    println!("identities: max violation {v:.3e}");
    if v > IDENTITY_TOLERANCE {
        return Err(CliError::Numerical(format!("scattering identities violated by {v:e} > {IDENTITY_TOLERANCE:e}")));
    }
    Ok(())
}

pub fn cmd_gates(ctx: &Ctx) -> Result<(), CliError> {
    let p = ctx.prepare()?;
    ctx.sink.json("gates.json", &json!({ "gates": p.gates, "passed": p.gates.passed() }))?;
    print_gates(&p.gates);
    Ok(())
}

pub fn cmd_rays(ctx: &Ctx) -> Result<(), CliError> {
    let p = ctx.prepare()?;
    ctx.require_gates(&p.gates)?;
    let rays = ctx.rays(&p.refl)?;
    let gate_ii: Vec<bool> = rays
        .iter()
        .map(|ray| p.refl.max_abs_arg_up_to(-ray.xi).0 < PI && nnls_core::rh_data::log_w_at(&p.refl, -ray.xi).im.abs() < PI)
        .collect();
    ctx.sink.csv("rays.csv", |w| write_rays_csv(w, &rays, p.gates.gate_i, &gate_ii))?;
    let ev = &ctx.loaded.config.evolution;
    let mut predictions = Vec::new();
    for ray in &rays {
        let mut t = ev.snapshot_start;
        while t <= ev.t_final + 1e-9 {
            if t >= 1.0 {
                predictions.push(leading_term(ray, 4.0 * ray.xi * t, t).map_err(CliError::numerical)?);
            }
            t += ev.snapshot_every;
        }
    }
    ctx.sink.csv("predictions.csv", |w| write_predictions_csv(w, &predictions))?;
    ctx.sink.json("rays.json", &json!({ "rays": rays, "gates": p.gates }))?;
    for r in &rays {
        println!("xi {:+.4}: nu = {:+.6e} {:+.6e}i, |p| = {:.6e}, decay exponent {:+.6}, remainder {}", r.xi, r.nu.re, r.nu.im, r.p.norm(), -0.5 + r.nu.im, r.remainder_class.as_str());
    }
    Ok(())
}

#[derive(Serialize)]
struct ModelEntry {
    label: String,
    coefficients: ModelCoefficients,
    report: ModelReport,
}

pub fn cmd_model_verify(ctx: &Ctx) -> Result<(), CliError> {
    let p = ctx.prepare()?;
    ctx.require_gates(&p.gates)?;
    let rays = ctx.rays(&p.refl)?;
    let mut sets = Vec::new();
    for ray in &rays {
        let (r1, r2) = (r1_at(&p.refl, -ray.xi), r2_at(&p.refl, -ray.xi));
        let c = if ray.nu.norm() == 0.0 || r1.norm() == 0.0 || r2.norm() == 0.0 {
            ModelCoefficients::trivial(ray.xi, p.refl.sigma)
        } else {
            beta_gamma(r1, r2, ray.nu, p.refl.sigma, ray.xi).map_err(CliError::numerical)?
        };
        sets.push((format!("ray {}", ray.xi), c));
    }
    let m = &ctx.loaded.config.model;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.loaded.config.run.seed);
    for j in 0..m.random_sets {
        sets.push((format!("random {j}"), sample_admissible(&mut rng, m.max_nu)));
    }
    let settings = VerifySettings::default();
    let entries: Vec<ModelEntry> = sets
        .into_par_iter()
        .map(|(label, coefficients)| verify_model(&coefficients, &settings).map(|report| ModelEntry { label, coefficients, report }))
        .collect::<Result<_, _>>()
        .map_err(CliError::numerical)?;
    ctx.sink.csv("model.csv", |w| {
        writeln!(w, "label,xi,re_nu,im_nu,ode_residual,jump_residual,beta_gamma_product,det_drift,normalization_slope,beta_error,gamma_error")?;
        for e in &entries {
            let (c, r) = (&e.coefficients, &e.report);
            writeln!(
                w,
                "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                e.label, c.xi, c.nu.re, c.nu.im, r.ode_residual, r.jump_residual, r.beta_gamma_product, r.det_drift, r.normalization_slope, r.beta_error, r.gamma_error
            )?;
        }
        Ok(())
    })?;
    ctx.sink.json("model.json", &json!({ "models": entries }))?;
    for e in &entries {
        let r = &e.report;
        println!(
            "{}: ode {:.2e}, jump {:.2e}, beta*gamma-nu {:.2e}, slope {:+.3}, beta err {:.2e}",
            e.label, r.ode_residual, r.jump_residual, r.beta_gamma_product, r.normalization_slope, r.beta_error
        );
    }
    Ok(())
}

pub fn cmd_evolve(ctx: &Ctx) -> Result<(), CliError> {
    let q0 = ctx.loaded.profile()?;
    let traj = ctx.evolve(&q0)?;
    let mut files = Vec::new();
    for (i, f) in traj.snapshots.iter().enumerate() {
        let name = format!("snapshot_{i:05}.csv");
        ctx.sink.csv(&name, |w| f.write_csv(w))?;
        ctx.sink.json(&format!("snapshot_{i:05}.json"), &json!({ "t": f.t, "config": traj.config, "diagnostics": traj.diagnostics }))?;
        files.push(json!({ "t": f.t, "csv": name }));
    }
    ctx.sink.json("manifest.json", &json!({ "snapshots": files, "config": traj.config, "diagnostics": traj.diagnostics }))?;
    let d = &traj.diagnostics;
    println!("steps {}, snapshots {}, max |q| {:.6e}, max edge level {:.3e}", d.steps, traj.snapshots.len(), d.max_peak, d.max_edge_level);
    for w in &d.warnings {
        println!("warning: {w}");
    }
    Ok(())
}

pub fn cmd_compare(ctx: &Ctx) -> Result<(), CliError> {
    let p = ctx.prepare()?;
    ctx.require_gates(&p.gates)?;
    let traj = ctx.evolve(&p.q0)?;
    let cmp = compare_rays(&traj, &p.refl, &ctx.loaded.config.rays.xi, !ctx.override_gates).map_err(CliError::numerical)?;
    ctx.sink.csv("compare.csv", |w| cmp.write_csv(w))?;
    ctx.sink.json("compare.json", &json!({ "summaries": cmp.summaries, "diagnostics": traj.diagnostics, "gates": p.gates }))?;
    if cmp.summaries.is_empty() {
        println!("zero reflection data: nothing to compare");
    }
    for s in &cmp.summaries {
        println!(
            "xi {:+.4}: fitted slope {:+.5}, predicted {:+.5}, |q_pde|/|q_asym| at end {:.4}",
            s.xi, s.fitted_slope, s.predicted_slope, s.final_ratio
        );
    }
    Ok(())
}
