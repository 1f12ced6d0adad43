//! Flat key-value run configuration (TOML, scalars only).

use serde::Deserialize;

use crate::CliError;

/// Raw file schema: every key optional here so that precondition failures can
/// be reported by name; unknown keys are rejected outright.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    // model (mass..beta mandatory, hbar/c default 1)
    pub mass: Option<f64>,
    pub charge: Option<f64>,
    pub field: Option<f64>,
    pub theta: Option<f64>,
    pub hbar: Option<f64>,
    pub c: Option<f64>,
    pub beta: Option<f64>,

    // truncation and quadrature
    pub cutoff: Option<usize>,
    pub n_r: Option<usize>,
    pub n_theta: Option<usize>,

    // spectrum window
    pub e_max: Option<f64>,

    // magnetics sweep
    pub volume: Option<f64>,
    pub particles: Option<f64>,
    pub thermal_wavelength_beta: Option<bool>,
    pub kappa_min: Option<f64>,
    pub kappa_max: Option<f64>,
    pub kappa_points: Option<usize>,

    // kms check
    pub kms_omega: Option<f64>,
    pub kms_radius: Option<f64>,
    pub kms_grid: Option<usize>,
    pub rho_action: Option<String>,

    // thresholds (exit-3 gates)
    pub norm_tol: Option<f64>,
    pub wehrl_tol: Option<f64>,
    pub residual_tol: Option<f64>,
    pub resolution_tol: Option<f64>,
    pub unitarity_tol: Option<f64>,
    pub isometry_tol: Option<f64>,
    pub husimi_norm_tol: Option<f64>,

    // guard widths
    pub eps_crit: Option<f64>,
}

/// Fully-resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: exoland::ModelParams64,
    pub cutoff: usize,
    pub n_r: usize,
    pub n_theta: usize,
    pub e_max: f64,
    pub volume: f64,
    pub particles: f64,
    pub thermal_wavelength_beta: bool,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub kappa_points: usize,
    pub kms_omega: f64,
    pub kms_radius: f64,
    pub kms_grid: usize,
    pub rho_action: exoland::kms::RhoAction,
    pub norm_tol: f64,
    pub wehrl_tol: f64,
    pub residual_tol: f64,
    pub resolution_tol: f64,
    pub unitarity_tol: f64,
    pub isometry_tol: f64,
    pub husimi_norm_tol: f64,
    pub eps_crit: f64,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        let raw: RawConfig = toml::from_str(&text)
            .map_err(|e| CliError::input(format!("config parse error: {e}")))?;
        Self::from_raw(raw)
    }

    pub fn from_raw(raw: RawConfig) -> Result<Self, CliError> {
        let mut pairs: Vec<(&str, f64)> = Vec::new();
        for (key, value) in [
            ("mass", raw.mass),
            ("charge", raw.charge),
            ("field", raw.field),
            ("theta", raw.theta),
            ("hbar", raw.hbar),
            ("c", raw.c),
            ("beta", raw.beta),
        ] {
            if let Some(v) = value {
                pairs.push((key, v));
            }
        }
        let params = exoland::ModelParams64::from_key_values(pairs)
            .map_err(|e| CliError::input(format!("model parameters: {e}")))?;
        let rho_action = match raw.rho_action.as_deref().unwrap_or("left") {
            "left" => exoland::kms::RhoAction::Left,
            "right" => exoland::kms::RhoAction::Right,
            "symmetric" => exoland::kms::RhoAction::Symmetric,
            other => {
                return Err(CliError::input(format!(
                    "rho_action must be left|right|symmetric, got {other}"
                )))
            }
        };
        let config = RunConfig {
            params,
            cutoff: raw.cutoff.unwrap_or(40),
            n_r: raw.n_r.unwrap_or(64),
            n_theta: raw.n_theta.unwrap_or(32),
            e_max: raw.e_max.unwrap_or(5.0),
            volume: raw.volume.unwrap_or(1.0),
            particles: raw.particles.unwrap_or(1.0),
            thermal_wavelength_beta: raw.thermal_wavelength_beta.unwrap_or(false),
            kappa_min: raw.kappa_min.unwrap_or(-0.95),
            kappa_max: raw.kappa_max.unwrap_or(0.0),
            kappa_points: raw.kappa_points.unwrap_or(39),
            kms_omega: raw.kms_omega.unwrap_or(1.0),
            kms_radius: raw.kms_radius.unwrap_or(6.0),
            kms_grid: raw.kms_grid.unwrap_or(64),
            rho_action,
            norm_tol: raw.norm_tol.unwrap_or(1e-6),
            wehrl_tol: raw.wehrl_tol.unwrap_or(1e-6),
            residual_tol: raw.residual_tol.unwrap_or(1e-5),
            resolution_tol: raw.resolution_tol.unwrap_or(1e-3),
            unitarity_tol: raw.unitarity_tol.unwrap_or(1e-8),
            isometry_tol: raw.isometry_tol.unwrap_or(1e-6),
            husimi_norm_tol: raw.husimi_norm_tol.unwrap_or(1e-3),
            eps_crit: raw.eps_crit.unwrap_or(exoland::model::EPS_CRIT),
        };
        for (name, value) in [
            ("cutoff", config.cutoff as f64),
            ("n_r", config.n_r as f64),
            ("kappa_points", config.kappa_points as f64),
            ("kms_grid", config.kms_grid as f64),
        ] {
            if value < 2.0 {
                return Err(CliError::input(format!("{name} must be at least 2")));
            }
        }
        Ok(config)
    }
}
