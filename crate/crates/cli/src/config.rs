//! Run configuration: a TOML file with strictly checked sections.

use crate::error::CliError;
use nnls_core::evolution::EvolveConfig;
use nnls_core::grid::UniformGrid;
use nnls_core::scattering::InitialProfile;
use nnls_core::{Sigma, C64};
use serde::Deserialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub profile: ProfileSection,
    #[serde(default)]
    pub kgrid: KGridSection,
    #[serde(default)]
    pub rays: RaysSection,
    #[serde(default)]
    pub evolution: EvolveConfig,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub gates: GatesSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Box,
    Sampled,
    Zero,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub kind: ProfileKind,
    pub sigma: i64,
    #[serde(default)]
    pub h_re: f64,
    #[serde(default)]
    pub h_im: f64,
    #[serde(default = "one")]
    pub width: f64,
    /// `x,re_q,im_q` CSV; relative paths resolve against the config file.
    pub sample_file: Option<PathBuf>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KGridSection {
    pub k_max: f64,
    pub nodes: usize,
}

impl Default for KGridSection {
    fn default() -> Self {
        KGridSection { k_max: 12.0, nodes: 2001 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RaysSection {
    pub xi: Vec<f64>,
}

impl Default for RaysSection {
    fn default() -> Self {
        RaysSection { xi: vec![0.15, 0.25, 0.4] }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    /// Random admissible coefficient sets checked besides the rays.
    pub random_sets: usize,
    pub max_nu: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection { random_sets: 5, max_nu: 0.2 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GatesSection {
    /// Half-width `K` of the zero-counting rectangle `[-K, K] × [0, K]`.
    pub contour_half_width: f64,
}

impl Default for GatesSection {
    fn default() -> Self {
        GatesSection { contour_half_width: 4.0 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: PathBuf::from("out") }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub seed: u64,
}

/// A parsed config with the hash of its bytes and its directory.
pub struct Loaded {
    pub config: RunConfig,
    pub sha256: String,
    pub base_dir: PathBuf,
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let config: RunConfig = toml::from_str(text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    validate(&config)?;
    Ok(Loaded { config, sha256, base_dir })
}

fn validate(c: &RunConfig) -> Result<(), CliError> {
    if Sigma::from_sign(c.profile.sigma).is_none() {
        return Err(CliError::Input(format!("profile.sigma must be 1 or -1, got {}", c.profile.sigma)));
    }
    if !(c.kgrid.k_max > 0.0 && c.kgrid.nodes >= 9 && c.kgrid.nodes % 2 == 1) {
        return Err(CliError::Input("kgrid needs k_max > 0 and an odd node count of at least 9".into()));
    }
    if c.rays.xi.iter().any(|x| !x.is_finite() || x.abs() >= c.kgrid.k_max) {
        return Err(CliError::Input("every ray must satisfy |xi| < kgrid.k_max".into()));
    }
    if !(c.gates.contour_half_width > 0.0) {
        return Err(CliError::Input("gates.contour_half_width must be positive".into()));
    }
    c.evolution.validate().map_err(CliError::input)
}

impl Loaded {
    pub fn sigma(&self) -> Sigma {
        Sigma::from_sign(self.config.profile.sigma).expect("validated")
    }

    pub fn kgrid(&self) -> UniformGrid {
        UniformGrid::symmetric(self.config.kgrid.k_max, self.config.kgrid.nodes).expect("validated")
    }

    pub fn profile(&self) -> Result<InitialProfile, CliError> {
        let p = &self.config.profile;
        let sigma = self.sigma();
        match p.kind {
            ProfileKind::Zero => Ok(InitialProfile::zero(sigma)),
            ProfileKind::Box => InitialProfile::boxed(C64::new(p.h_re, p.h_im), p.width, sigma).map_err(CliError::input),
            ProfileKind::Sampled => {
                let file = p.sample_file.as_ref().ok_or_else(|| CliError::Input("sampled profile needs profile.sample_file".into()))?;
                let path = if file.is_absolute() { file.clone() } else { self.base_dir.join(file) };
                let text = fs::read_to_string(&path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                parse_samples(&text, sigma).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
            }
        }
    }
}

/// Reads `x,re_q,im_q` rows (header required, `#` lines skipped) on a uniform
/// grid symmetric about zero.
pub fn parse_samples(text: &str, sigma: Sigma) -> Result<InitialProfile, String> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    if lines.next() != Some("x,re_q,im_q") {
        return Err("expected header x,re_q,im_q".into());
    }
    let mut xs = Vec::new();
    let mut qs = Vec::new();
    for (n, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 3 {
            return Err(format!("row {}: expected 3 fields", n + 1));
        }
        let v: Result<Vec<f64>, _> = f.iter().map(|s| s.trim().parse::<f64>()).collect();
        let v = v.map_err(|e| format!("row {}: {e}", n + 1))?;
        xs.push(v[0]);
        qs.push(C64::new(v[1], v[2]));
    }
    if xs.len() < 3 {
        return Err("need at least 3 samples".into());
    }
    let (a, b) = (xs[0], xs[xs.len() - 1]);
    if !(b > 0.0) || (a + b).abs() > 1e-9 * b {
        return Err(format!("grid [{a}, {b}] is not symmetric about 0"));
    }
    let grid = UniformGrid::symmetric(b, xs.len()).map_err(|e| e.to_string())?;
    let h = grid.step();
    if let Some(i) = (0..xs.len()).find(|&i| (xs[i] - grid.node(i)).abs() > 1e-6 * h) {
        return Err(format!("row {}: grid is not uniform", i + 1));
    }
    InitialProfile::sampled(grid, qs, sigma).map_err(|e| e.to_string())
}
