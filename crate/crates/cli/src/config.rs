//! JSON run configuration and the resolved run context.

use std::f64::consts::PI;
use std::path::Path;

use dce_core::params::{self, Bath, DerivedParams, PhysicalParams};
use dce_core::RwaInputs;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrequencyUnit {
    #[serde(rename = "rad_s")]
    RadPerSecond,
    /// Value is `f` in Hz; stored as `2πf`.
    #[serde(rename = "hz_2pi")]
    Hertz,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Frequency {
    pub value: f64,
    pub unit: FrequencyUnit,
}

impl Frequency {
    pub fn rad_s(&self) -> f64 {
        match self.unit {
            FrequencyUnit::RadPerSecond => self.value,
            FrequencyUnit::Hertz => 2.0 * PI * self.value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default = "linear")]
    pub scale: Scale,
}

fn linear() -> Scale {
    Scale::Linear
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOptions {
    pub axes: Vec<SweepAxis>,
    pub observables: Vec<String>,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub cavity_length_m: f64,
    pub mass_kg: f64,
    pub mech_freq: Frequency,
    pub mech_damping: Frequency,
    pub cavity_decay: Frequency,
    pub g0: Frequency,
    pub laser_freq: Frequency,
    pub detuning: Frequency,
    #[serde(rename = "laser_power_W")]
    pub laser_power_w: f64,
    pub modulation_depth: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bath_occupation: Option<f64>,
    #[serde(default, rename = "bath_temperature_K", skip_serializing_if = "Option::is_none")]
    pub bath_temperature_k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepOptions>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Invalid(msg) => CliError::Invalid(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn physical(&self) -> Result<PhysicalParams> {
        let bath = match (self.bath_occupation, self.bath_temperature_k) {
            (Some(n), None) => Bath::Occupation(n),
            (None, Some(t)) => Bath::Temperature(t),
            _ => {
                return Err(CliError::Invalid(
                    "config: exactly one of `bath_occupation` or `bath_temperature_K` is required".into(),
                ))
            }
        };
        Ok(PhysicalParams {
            cavity_length: self.cavity_length_m,
            mass: self.mass_kg,
            mech_freq: self.mech_freq.rad_s(),
            mech_damping: self.mech_damping.rad_s(),
            cavity_decay: self.cavity_decay.rad_s(),
            g0: self.g0.rad_s(),
            laser_freq: self.laser_freq.rad_s(),
            detuning: self.detuning.rad_s(),
            laser_power: self.laser_power_w,
            modulation_depth: self.modulation_depth,
            bath,
        })
    }
}

/// Command-line overrides of the dimensionless controls.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub s_eps: Option<f64>,
    pub nbar: Option<f64>,
    pub xi: Option<f64>,
}

/// Values used when no config file is given (`γ_m = 1`, times in `1/γ_m`).
pub const DEFAULT_S_EPS: f64 = 0.44;
pub const DEFAULT_NBAR: f64 = 0.01;
pub const DEFAULT_MODULATION_DEPTH: f64 = 0.5;

/// Derives the RWA inputs from physical parameters, then applies overrides.
pub fn resolve_inputs(params: Option<&PhysicalParams>, ov: &Overrides) -> Result<(Option<DerivedParams>, RwaInputs)> {
    let (derived, base) = match params {
        Some(p) => {
            let d = params::derive(p)?;
            (Some(d), RwaInputs::from_derived(&d)?)
        }
        None => (None, RwaInputs::new(DEFAULT_S_EPS, 0.0, DEFAULT_NBAR, 1.0)?),
    };
    let inputs = RwaInputs::new(
        ov.s_eps.unwrap_or(base.s_eps),
        ov.xi.unwrap_or(base.xi),
        ov.nbar.unwrap_or(base.nbar),
        base.gamma,
    )?;
    Ok((derived, inputs))
}

/// Everything a command needs, resolved once.
#[derive(Debug, Clone)]
pub struct Context {
    pub file: Option<ConfigFile>,
    pub params: Option<PhysicalParams>,
    pub derived: Option<DerivedParams>,
    pub inputs: RwaInputs,
    pub overrides: Overrides,
    pub seed: u64,
    pub omega_ratio: f64,
    pub beyond_rwa: bool,
}

impl Context {
    pub fn new(file: Option<ConfigFile>, overrides: Overrides, seed: u64, omega_ratio: f64, beyond_rwa: bool) -> Result<Self> {
        let params = file.as_ref().map(ConfigFile::physical).transpose()?;
        let (derived, inputs) = resolve_inputs(params.as_ref(), &overrides)?;
        if !(omega_ratio > 0.0 && omega_ratio.is_finite()) {
            return Err(CliError::Invalid(format!("--omega-ratio must be positive (got {omega_ratio})")));
        }
        Ok(Self {
            file,
            params,
            derived,
            inputs,
            overrides,
            seed,
            omega_ratio,
            beyond_rwa,
        })
    }

    /// Scaled context without a config file.
    pub fn scaled(overrides: Overrides) -> Result<Self> {
        Self::new(None, overrides, 0, 200.0, false)
    }

    pub fn gamma(&self) -> f64 {
        self.inputs.gamma
    }

    /// `ε` for the beyond-RWA model: the config value when non-zero.
    pub fn modulation_depth(&self) -> f64 {
        match self.params {
            Some(p) if p.modulation_depth > 0.0 => p.modulation_depth,
            _ => DEFAULT_MODULATION_DEPTH,
        }
    }
}
