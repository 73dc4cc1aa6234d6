//! JSON run configuration. Every section is optional at parse time; each
//! subcommand demands the sections it needs. Unknown keys are rejected
//! everywhere so a typo cannot silently fall back to a default.

use num_complex::Complex64;
use qcmeans::maps::{DiskIdentity, DiskMap, DiskPowerMap, NormalizedDiskMap, PowerParams};
use qcmeans::spectrum::RadiusSchedule;
use serde::Deserialize;
use sha2::{Digest, Sha256};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),

    #[error("cannot parse config: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("invalid config: {0}")]
    Invalid(String),
}

fn invalid(message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(message.into())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub map: Option<MapConfig>,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub region: Option<RegionConfig>,
    #[serde(default)]
    pub twist: Option<TwistConfig>,
    #[serde(default)]
    pub spectra: Option<SpectraConfig>,
}

impl RunConfig {
    /// Parse a config file; returns the config and the hex digest of the
    /// raw bytes for the output provenance header.
    pub fn load(path: &Path) -> Result<(Self, String), ConfigError> {
        let bytes = std::fs::read(path)?;
        let digest = Sha256::digest(&bytes);
        let sha = digest.iter().map(|b| format!("{b:02x}")).collect();
        let config: RunConfig = serde_json::from_slice(&bytes)?;
        config.tolerances.validate()?;
        if let Some(map) = &config.map {
            map.validate()?;
        }
        Ok((config, sha))
    }

    pub fn require_map(&self) -> Result<&MapConfig, ConfigError> {
        self.map
            .as_ref()
            .ok_or_else(|| invalid("this command needs a \"map\" section"))
    }

    pub fn require_grid(&self) -> Result<Vec<Complex64>, ConfigError> {
        self.grid
            .as_ref()
            .ok_or_else(|| invalid("this command needs a \"grid\" section"))?
            .exponents()
    }
}

/// Map family plus parameters, kept flat so unknown keys are caught.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    pub family: String,
    #[serde(default)]
    pub sigma: Option<[f64; 2]>,
    #[serde(default)]
    pub lambda: Option<[f64; 2]>,
    #[serde(default)]
    pub eta: Option<[f64; 2]>,
}

fn as_complex(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

impl MapConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let (wants_sigma, wants_lambda, wants_eta) = match self.family.as_str() {
            "identity" => (false, false, false),
            "half_plane_power" | "disk_power" | "disk_power_normalized" => (true, false, false),
            "radial_stretch" => (false, true, false),
            "welded_stretch" => (false, true, true),
            other => {
                return Err(invalid(format!(
                    "unknown map family \"{other}\"; expected identity, half_plane_power, \
                     disk_power, disk_power_normalized, welded_stretch, or radial_stretch"
                )))
            }
        };
        let checks = [
            ("sigma", wants_sigma, self.sigma.is_some()),
            ("lambda", wants_lambda, self.lambda.is_some()),
            ("eta", wants_eta, self.eta.is_some()),
        ];
        for (name, wanted, present) in checks {
            if wanted && !present {
                return Err(invalid(format!(
                    "family \"{}\" needs a \"{name}\" parameter",
                    self.family
                )));
            }
            if !wanted && present {
                return Err(invalid(format!(
                    "family \"{}\" takes no \"{name}\" parameter",
                    self.family
                )));
            }
        }
        Ok(())
    }

    /// Power map exponent, for the families that have one.
    pub fn power_params(&self) -> Result<Option<PowerParams>, ConfigError> {
        match self.family.as_str() {
            "half_plane_power" | "disk_power" | "disk_power_normalized" => {
                let sigma = as_complex(self.sigma.expect("validated"));
                let params = PowerParams::new(sigma)
                    .map_err(|e| invalid(format!("bad exponent: {e}")))?;
                Ok(Some(params))
            }
            _ => Ok(None),
        }
    }

    /// Instantiate the map as a disk map; plane and half plane families
    /// are rejected since circle integrals and boundary walks need the
    /// disk domain.
    pub fn disk_map(&self) -> Result<Box<dyn DiskMap>, ConfigError> {
        match self.family.as_str() {
            "identity" => Ok(Box::new(DiskIdentity)),
            "disk_power" => {
                let params = self.power_params()?.expect("power family");
                Ok(Box::new(DiskPowerMap::new(params)))
            }
            "disk_power_normalized" => {
                let params = self.power_params()?.expect("power family");
                let normalized = NormalizedDiskMap::new(DiskPowerMap::new(params))
                    .map_err(|e| invalid(format!("cannot normalize: {e}")))?;
                Ok(Box::new(normalized))
            }
            other => Err(invalid(format!(
                "family \"{other}\" does not act on the unit disk; \
                 beta and twist need identity, disk_power, or disk_power_normalized"
            ))),
        }
    }

    pub fn describe(&self) -> String {
        let complex = |pair: Option<[f64; 2]>| {
            let value = as_complex(pair.unwrap_or([f64::NAN, f64::NAN]));
            format!("{} + {}i", value.re, value.im)
        };
        match self.family.as_str() {
            "identity" => "identity".to_string(),
            "welded_stretch" => format!(
                "welded_stretch lambda = {}, eta = {}",
                complex(self.lambda),
                complex(self.eta)
            ),
            "radial_stretch" => format!("radial_stretch lambda = {}", complex(self.lambda)),
            family => format!("{family} sigma = {}", complex(self.sigma)),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    #[serde(default = "default_j_min")]
    pub j_min: u32,
    #[serde(default = "default_j_max")]
    pub j_max: u32,
    #[serde(default = "default_tail_length")]
    pub tail_length: usize,
}

fn default_j_min() -> u32 {
    2
}

fn default_j_max() -> u32 {
    14
}

fn default_tail_length() -> usize {
    4
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig {
            j_min: default_j_min(),
            j_max: default_j_max(),
            tail_length: default_tail_length(),
        }
    }
}

impl ScheduleConfig {
    pub fn to_schedule(self) -> Result<RadiusSchedule, ConfigError> {
        RadiusSchedule::new(self.j_min, self.j_max)
            .map_err(|e| invalid(format!("bad schedule: {e}")))
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    #[serde(default = "default_quadrature_tol")]
    pub quadrature: f64,
    #[serde(default = "default_area_tol")]
    pub area: f64,
}

fn default_quadrature_tol() -> f64 {
    1e-7
}

fn default_area_tol() -> f64 {
    1e-6
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            quadrature: default_quadrature_tol(),
            area: default_area_tol(),
        }
    }
}

impl ToleranceConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        for (name, value) in [("quadrature", self.quadrature), ("area", self.area)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(invalid(format!("tolerance \"{name}\" must be positive")));
            }
        }
        Ok(())
    }
}

/// Exponent grid: either an explicit list of complex values or one modulus
/// swept over a list of angles. Exactly one of the two forms.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default)]
    pub t: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub modulus: Option<f64>,
    #[serde(default)]
    pub angles: Option<Vec<f64>>,
}

impl GridConfig {
    pub fn exponents(&self) -> Result<Vec<Complex64>, ConfigError> {
        match (&self.t, self.modulus, &self.angles) {
            (Some(list), None, None) => {
                if list.is_empty() {
                    return Err(invalid("grid \"t\" list must not be empty"));
                }
                Ok(list.iter().map(|pair| as_complex(*pair)).collect())
            }
            (None, Some(modulus), Some(angles)) => {
                if !(modulus > 0.0 && modulus.is_finite()) {
                    return Err(invalid("grid \"modulus\" must be positive"));
                }
                if angles.is_empty() {
                    return Err(invalid("grid \"angles\" list must not be empty"));
                }
                Ok(angles
                    .iter()
                    .map(|angle| Complex64::from_polar(modulus, *angle))
                    .collect())
            }
            _ => Err(invalid(
                "grid needs exactly one of a \"t\" list or \"modulus\" with \"angles\"",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    pub k: f64,
    #[serde(default = "default_vertices")]
    pub n: usize,
}

fn default_vertices() -> usize {
    512
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistConfig {
    pub zeta: [f64; 2],
    #[serde(default = "default_twist_depth")]
    pub j_max: u32,
}

fn default_twist_depth() -> u32 {
    12
}

impl TwistConfig {
    pub fn zeta(&self) -> Complex64 {
        as_complex(self.zeta)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectraConfig {
    pub k: f64,
}
