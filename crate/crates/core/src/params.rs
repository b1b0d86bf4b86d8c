//! Physical inputs, the derived symbol set and regime auditing.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054571817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380649e-23;
/// Speed of light, m/s.
pub const C_LIGHT: f64 = 2.99792458e8;

/// Thermal bath of the mechanical oscillator, given either as a mean
/// occupation or as a temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bath {
    Occupation(f64),
    Temperature(f64),
}

/// Raw experimental inputs. Frequencies and rates are angular (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Cavity length `L`, m.
    pub cavity_length: f64,
    /// Effective oscillator mass `m`, kg.
    pub mass: f64,
    /// Bare mechanical frequency `ω_m`.
    pub mech_freq: f64,
    /// Mechanical damping `γ_m`.
    pub mech_damping: f64,
    /// Cavity energy decay rate `κ`.
    pub cavity_decay: f64,
    /// Single-photon coupling `g₀`.
    pub g0: f64,
    /// Laser frequency `ω_L`.
    pub laser_freq: f64,
    /// Cavity detuning `Δ_c = ω_c − ω_L`; positive is red, negative blue.
    pub detuning: f64,
    /// Mean input power `P_L`, W.
    pub laser_power: f64,
    /// Relative power modulation depth `ε ∈ [0, 1)`.
    pub modulation_depth: f64,
    pub bath: Bath,
}

impl PhysicalParams {
    /// SiN membrane-in-the-middle values (L = 6.7 cm, m = 4×10⁻¹¹ kg,
    /// ω_m/2π = 134 kHz, γ_m/2π = 0.12 Hz, κ/2π = 500 kHz, g₀/2π = 50 Hz)
    /// completed with a 1064 nm laser. Detuning, power, modulation depth and
    /// bath are supplied by the caller.
    pub fn membrane_in_the_middle(detuning: f64, laser_power: f64, modulation_depth: f64, bath: Bath) -> Self {
        let two_pi = 2.0 * PI;
        Self {
            cavity_length: 6.7e-2,
            mass: 4e-11,
            mech_freq: two_pi * 134e3,
            mech_damping: two_pi * 0.12,
            cavity_decay: two_pi * 5e5,
            g0: two_pi * 50.0,
            laser_freq: two_pi * C_LIGHT / 1064e-9,
            detuning,
            laser_power,
            modulation_depth,
            bath,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("cavity_length", self.cavity_length),
            ("mass", self.mass),
            ("mech_freq", self.mech_freq),
            ("mech_damping", self.mech_damping),
            ("cavity_decay", self.cavity_decay),
            ("laser_freq", self.laser_freq),
            ("laser_power", self.laser_power),
        ];
        for (name, value) in positive {
            // NaN fails this comparison too
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveInput { name, value });
            }
        }
        if !(self.g0 >= 0.0) || !self.g0.is_finite() {
            return Err(Error::OutOfRange {
                name: "g0",
                reason: format!("must be finite and >= 0 (got {})", self.g0),
            });
        }
        if !(0.0..1.0).contains(&self.modulation_depth) {
            return Err(Error::OutOfRange {
                name: "modulation_depth",
                reason: format!("must lie in [0, 1) (got {})", self.modulation_depth),
            });
        }
        if !self.detuning.is_finite() {
            return Err(Error::OutOfRange {
                name: "detuning",
                reason: "must be finite".into(),
            });
        }
        if self.detuning == 0.0 {
            return Err(Error::ZeroDetuning);
        }
        match self.bath {
            Bath::Occupation(n) if !(n >= 0.0) || !n.is_finite() => Err(Error::OutOfRange {
                name: "bath_occupation",
                reason: format!("must be finite and >= 0 (got {n})"),
            }),
            Bath::Temperature(t) if !(t > 0.0) || !t.is_finite() => Err(Error::NonPositiveTemperature(t)),
            _ => Ok(()),
        }
    }
}

/// Every derived symbol used downstream. Rates are angular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// Drive amplitude `E_L = √(κ P_L / ħ ω_L)`.
    pub drive_amplitude: f64,
    /// Steady intracavity amplitude `|α_ss|` (phase absorbed).
    pub steady_field: f64,
    /// Linearized coupling `g = g₀ α_ss`.
    pub coupling: f64,
    /// `χ₀ = g²/Δ_c`, signed with the detuning.
    pub chi0: f64,
    /// `χ_ε = ε χ₀`.
    pub chi_eps: f64,
    /// `s_ε = χ_ε / γ_m`.
    pub s_eps: f64,
    /// `ξ = (g/Δ_c) √(κ/γ_m)`.
    pub xi: f64,
    /// `C = 1 + 2ξ²/(1 + 2n̄_m)`.
    pub noise_factor: f64,
    /// Optical-spring shifted frequency `Ω_m = ω_m − 2χ₀`.
    pub shifted_freq: f64,
    /// Modulation frequency at parametric resonance, `Ω = 2Ω_m`.
    pub modulation_freq: f64,
    /// `λ₁ = −γ_m (1 + 2s_ε)/2`.
    pub lambda1: f64,
    /// `λ₂ = −γ_m (1 − 2s_ε)/2`.
    pub lambda2: f64,
    /// `x_zpf = √(ħ / 2 m ω_m)`, m.
    pub zero_point: f64,
    /// `P₀ = ħ ω_L Δ_c² / κ`, W.
    pub reference_power: f64,
    /// `FSR = κ𝓕 = πc/(2L)`.
    pub free_spectral_range: f64,
    /// `𝓕 = πc/(2κL)`.
    pub finesse: f64,
    pub bath_occupation: f64,
    pub bath_temperature: Option<f64>,
    pub mech_damping: f64,
    pub mech_freq: f64,
}

pub fn derive(p: &PhysicalParams) -> Result<DerivedParams> {
    p.validate()?;

    let (bath_occupation, bath_temperature) = match p.bath {
        Bath::Occupation(n) => {
            let t = if n > 0.0 {
                Some(occupation_to_temperature(n, p.mech_freq)?)
            } else {
                None
            };
            (n, t)
        }
        Bath::Temperature(t) => (bath_occupation(t, p.mech_freq)?, Some(t)),
    };

    let kappa = p.cavity_decay;
    let delta = p.detuning;
    let gamma = p.mech_damping;

    let drive_amplitude = (kappa * p.laser_power / (HBAR * p.laser_freq)).sqrt();
    let steady_field = drive_amplitude / (0.25 * kappa * kappa + delta * delta).sqrt();
    let coupling = p.g0 * steady_field;
    let chi0 = coupling * coupling / delta;
    let chi_eps = p.modulation_depth * chi0;
    let s_eps = chi_eps / gamma;
    let xi = (coupling / delta) * (kappa / gamma).sqrt();
    let noise_factor = 1.0 + 2.0 * xi * xi / (1.0 + 2.0 * bath_occupation);
    let shifted_freq = p.mech_freq - 2.0 * chi0;

    Ok(DerivedParams {
        drive_amplitude,
        steady_field,
        coupling,
        chi0,
        chi_eps,
        s_eps,
        xi,
        noise_factor,
        shifted_freq,
        modulation_freq: 2.0 * shifted_freq,
        lambda1: -gamma * (1.0 + 2.0 * s_eps) / 2.0,
        lambda2: -gamma * (1.0 - 2.0 * s_eps) / 2.0,
        zero_point: (HBAR / (2.0 * p.mass * p.mech_freq)).sqrt(),
        reference_power: HBAR * p.laser_freq * delta * delta / kappa,
        free_spectral_range: PI * C_LIGHT / (2.0 * p.cavity_length),
        finesse: PI * C_LIGHT / (2.0 * kappa * p.cavity_length),
        bath_occupation,
        bath_temperature,
        mech_damping: gamma,
        mech_freq: p.mech_freq,
    })
}

/// `s_ε` expressed through the input power, `ε (P_L/P₀) g₀²/(Δ_c γ_m)`,
/// carrying the exact Lorentzian factor `Δ_c²/(Δ_c² + κ²/4)` of `|α_ss|²`.
pub fn s_eps_from_power(p: &PhysicalParams) -> f64 {
    let delta = p.detuning;
    let kappa = p.cavity_decay;
    let p0 = HBAR * p.laser_freq * delta * delta / kappa;
    let lorentz = delta * delta / (delta * delta + 0.25 * kappa * kappa);
    p.modulation_depth * (p.laser_power / p0) * p.g0 * p.g0 / (delta * p.mech_damping) * lorentz
}

/// Bose–Einstein occupation `(exp(ħω/k_B T) − 1)⁻¹`.
pub fn bath_occupation(temperature: f64, mech_freq: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    let x = HBAR * mech_freq / (K_B * temperature);
    Ok(1.0 / x.exp_m1())
}

/// Inverse of [`bath_occupation`]: `ħω / (k_B ln(1 + 1/n))`.
pub fn occupation_to_temperature(occupation: f64, mech_freq: f64) -> Result<f64> {
    if !(occupation > 0.0) {
        return Err(Error::NonPositiveOccupation(occupation));
    }
    Ok(HBAR * mech_freq / (K_B * (1.0 / occupation).ln_1p()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Marginal,
    Unstable,
}

/// Routh–Hurwitz classification of the RWA drift: stable iff `|s_ε| < 1/2`.
pub fn stability(s_eps: f64) -> Stability {
    let a = s_eps.abs();
    if a < 0.5 {
        Stability::Stable
    } else if a == 0.5 {
        Stability::Marginal
    } else {
        Stability::Unstable
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Warn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeCheck {
    pub name: String,
    pub description: String,
    pub ratio: f64,
    pub threshold: f64,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub checks: Vec<RegimeCheck>,
    pub notes: Vec<String>,
}

impl RegimeReport {
    pub fn has_warnings(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Warn)
    }

    pub fn check(&self, name: &str) -> Option<&RegimeCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Thresholds for the regime audit. `much_greater` is the ratio that
/// stands in for "≫".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    pub much_greater: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self { much_greater: 10.0 }
    }
}

/// Audit of the approximations behind the effective model. Never fails;
/// a violated inequality only produces a warning.
pub fn regime_report(p: &PhysicalParams, d: &DerivedParams, thresholds: &RegimeThresholds) -> RegimeReport {
    let mg = thresholds.much_greater;
    let delta = p.detuning.abs();
    let mut checks = Vec::new();
    let mut push = |name: &str, description: &str, ratio: f64, threshold: f64| {
        let status = if ratio.is_finite() && ratio >= threshold {
            CheckStatus::Pass
        } else {
            CheckStatus::Warn
        };
        checks.push(RegimeCheck {
            name: name.to_string(),
            description: description.to_string(),
            ratio,
            threshold,
            status,
        });
    };

    push("far_detuned", "|Δ_c| ≫ κ", delta / p.cavity_decay, mg);
    push("detuning_vs_mech", "|Δ_c| ≫ ω_m", delta / p.mech_freq, mg);
    push("detuning_vs_g0", "|Δ_c| ≫ g₀", ratio_or_inf(delta, p.g0), mg);
    push("unresolved_sideband", "κ ≥ ω_m", p.cavity_decay / p.mech_freq, 1.0);
    push("single_mode", "FSR ≫ |Δ_c|", d.free_spectral_range / delta, mg);
    push("adiabatic_damping", "κ ≫ γ_m", p.cavity_decay / p.mech_damping, mg);
    push("adiabatic_coupling", "κ ≫ g₀", ratio_or_inf(p.cavity_decay, p.g0), mg);
    push("adiabatic_linear_coupling", "κ ≫ g", ratio_or_inf(p.cavity_decay, d.coupling), mg);
    push("quality_factor", "Q_m = ω_m/γ_m ≫ 1", p.mech_freq / p.mech_damping, mg);

    let quoted_fsr = 2.8e10;
    let notes = vec![format!(
        "FSR evaluated as κ𝓕 = πc/(2L) = {:e} rad/s; the literature value {:e} Hz for this cavity corresponds to 2πc/L",
        d.free_spectral_range, quoted_fsr
    )];

    RegimeReport { checks, notes }
}

fn ratio_or_inf(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}
