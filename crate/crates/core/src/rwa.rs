//! Closed-form rotating-wave dynamics of the modulated oscillator.
//!
//! In the frame rotating at `Ω_m` the quadratures obey a constant linear
//! drift with eigenvalues `λ₁,₂ = −γ_m(1 ± 2s_ε)/2` along the `±π/4`
//! quadratures. Starting from a thermal state, the variances
//! `Ṽ₁ = Var(δX_{π/4})` and `Ṽ₂ = Var(δX_{−π/4})` relax as
//!
//! ```text
//! Ṽ₁,₂(t) = (1 + 2n̄)/4 · [ C/(1 ± 2s) + e^{2λ₁,₂ t} (1 − C ± 2s)/(1 ± 2s) ]
//! ```
//!
//! and every observable in this module follows from these two numbers (plus
//! the `O(ξ²)` cross term).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{occupation_to_temperature, DerivedParams};

/// Below this, `1 ± 2s_ε` is treated as zero.
const DENOMINATOR_GUARD: f64 = 1e-9;

/// Dimensionless control set for the RWA formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RwaInputs {
    /// `s_ε = χ_ε/γ_m`, signed (positive for red detuning).
    pub s_eps: f64,
    /// `C = 1 + 2ξ²/(1 + 2n̄_m)`.
    pub noise_factor: f64,
    /// Bath occupation `n̄_m`.
    pub nbar: f64,
    /// `|ξ|`.
    pub xi: f64,
    /// `γ_m`, rad/s.
    pub gamma: f64,
}

impl RwaInputs {
    pub fn new(s_eps: f64, xi: f64, nbar: f64, gamma: f64) -> Result<Self> {
        if !s_eps.is_finite() {
            return Err(Error::OutOfRange {
                name: "s_eps",
                reason: "must be finite".into(),
            });
        }
        if !(xi >= 0.0) || !xi.is_finite() {
            return Err(Error::OutOfRange {
                name: "xi",
                reason: format!("must be finite and >= 0 (got {xi})"),
            });
        }
        if !(nbar >= 0.0) || !nbar.is_finite() {
            return Err(Error::OutOfRange {
                name: "nbar",
                reason: format!("must be finite and >= 0 (got {nbar})"),
            });
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::NonPositiveInput { name: "gamma", value: gamma });
        }
        Ok(Self {
            s_eps,
            noise_factor: noise_factor(xi, nbar),
            nbar,
            xi,
            gamma,
        })
    }

    /// Builds inputs from an explicit `C`, checking it against `ξ` and `n̄_m`.
    pub fn with_noise_factor(s_eps: f64, c: f64, nbar: f64, xi: f64, gamma: f64) -> Result<Self> {
        let inputs = Self::new(s_eps, xi, nbar, gamma)?;
        let expected = inputs.noise_factor;
        if !(((c - expected) / expected).abs() <= 1e-12) {
            return Err(Error::InconsistentNoiseFactor { c, xi, nbar, expected });
        }
        Ok(Self { noise_factor: c, ..inputs })
    }

    pub fn from_derived(d: &DerivedParams) -> Result<Self> {
        Self::new(d.s_eps, d.xi.abs(), d.bath_occupation, d.mech_damping)
    }

    /// `λ₁ = −γ_m(1 + 2s_ε)/2`.
    pub fn lambda1(&self) -> f64 {
        -self.gamma * (1.0 + 2.0 * self.s_eps) / 2.0
    }

    /// `λ₂ = −γ_m(1 − 2s_ε)/2`.
    pub fn lambda2(&self) -> f64 {
        -self.gamma * (1.0 - 2.0 * self.s_eps) / 2.0
    }

    pub fn is_stable(&self) -> bool {
        self.s_eps.abs() < 0.5
    }

    /// Same inputs with the detuning side flipped, `s_ε → −s_ε`.
    pub fn mirrored(&self) -> Self {
        Self { s_eps: -self.s_eps, ..*self }
    }

    pub(crate) fn thermal_variance(&self) -> f64 {
        (1.0 + 2.0 * self.nbar) / 4.0
    }

    /// `(1 + 2s_ε, 1 − 2s_ε)`, guarded against the marginal point.
    pub(crate) fn denominators(&self) -> Result<(f64, f64)> {
        let plus = 1.0 + 2.0 * self.s_eps;
        let minus = 1.0 - 2.0 * self.s_eps;
        if plus.abs() < DENOMINATOR_GUARD || minus.abs() < DENOMINATOR_GUARD {
            return Err(Error::MarginalStability { s_eps: self.s_eps });
        }
        Ok((plus, minus))
    }

    pub(crate) fn require_stable(&self) -> Result<(f64, f64)> {
        let den = self.denominators()?;
        if !self.is_stable() {
            return Err(Error::MarginalStability { s_eps: self.s_eps });
        }
        Ok(den)
    }
}

pub fn noise_factor(xi: f64, nbar: f64) -> f64 {
    1.0 + 2.0 * xi * xi / (1.0 + 2.0 * nbar)
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeTime(t))
    }
}

/// Covariance of the `±π/4` quadratures at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovariancePair {
    pub t: f64,
    /// `Ṽ₁ = Var(δX_{π/4})`.
    pub v1: f64,
    /// `Ṽ₂ = Var(δX_{−π/4})`.
    pub v2: f64,
    /// Symmetrized cross covariance `Ṽ₁₂`, of order `ξ²`.
    pub v12: f64,
    /// `false` when `|s_ε| > 1/2`; the values are still the exact
    /// finite-time solution.
    pub stable: bool,
}

impl CovariancePair {
    pub fn determinant(&self) -> f64 {
        self.v1 * self.v2 - self.v12 * self.v12
    }
}

/// RWA covariance at time `t` for a thermal initial state.
pub fn covariance(t: f64, inp: &RwaInputs) -> Result<CovariancePair> {
    check_time(t)?;
    let (plus, minus) = inp.denominators()?;
    let c = inp.noise_factor;
    let a = inp.thermal_variance();
    let e1 = (2.0 * inp.lambda1() * t).exp();
    let e2 = (2.0 * inp.lambda2() * t).exp();
    let v1 = a * (c / plus + e1 * (1.0 - c + 2.0 * inp.s_eps) / plus);
    let v2 = a * (c / minus + e2 * (1.0 - c - 2.0 * inp.s_eps) / minus);
    // dṼ₁₂/dt = −γ_m Ṽ₁₂ + D̃₁₂ with D̃₁₂ = γ_m(1 + 2n̄)(1 − C)/4
    let v12 = a * (1.0 - c) * (-(-inp.gamma * t).exp_m1());
    Ok(CovariancePair {
        t,
        v1,
        v2,
        v12,
        stable: inp.is_stable(),
    })
}

/// `t → ∞` limit of [`covariance`].
pub fn steady_covariance(inp: &RwaInputs) -> Result<CovariancePair> {
    let (plus, minus) = inp.require_stable()?;
    let c = inp.noise_factor;
    let a = inp.thermal_variance();
    Ok(CovariancePair {
        t: f64::INFINITY,
        v1: a * c / plus,
        v2: a * c / minus,
        v12: a * (1.0 - c),
        stable: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhononNumbers {
    /// Total `n(t) = Ṽ₁ + Ṽ₂ − 1/2`.
    pub total: f64,
    /// Parametrically generated (Casimir) part.
    pub casimir: f64,
    /// Part proportional to `n̄_m`.
    pub thermal: f64,
    /// `n_ss`, present only for stable inputs.
    pub steady: Option<f64>,
}

pub fn phonon_numbers(t: f64, inp: &RwaInputs) -> Result<PhononNumbers> {
    check_time(t)?;
    let (plus, minus) = inp.denominators()?;
    let s = inp.s_eps;
    let xi2 = inp.xi * inp.xi;
    let e1 = (2.0 * inp.lambda1() * t).exp();
    let e2 = (2.0 * inp.lambda2() * t).exp();
    let den = plus * minus;

    let cov = covariance(t, inp)?;
    let total = cov.v1 + cov.v2 - 0.5;
    let casimir = (2.0 * s * s + xi2) / den + 0.5 * ((s - xi2) / plus * e1 - (s + xi2) / minus * e2);
    let thermal = inp.nbar * (1.0 / den + s * (e1 / plus - e2 / minus));
    let steady = if inp.is_stable() { Some(steady_phonon_number(inp)?) } else { None };

    Ok(PhononNumbers {
        total,
        casimir,
        thermal,
        steady,
    })
}

/// `n_ss = (2(C − 1) + 4Cn̄ + 8s²) / (4(1 − 4s²))`.
pub fn steady_phonon_number(inp: &RwaInputs) -> Result<f64> {
    let (plus, minus) = inp.require_stable()?;
    let c = inp.noise_factor;
    let s = inp.s_eps;
    Ok((2.0 * (c - 1.0) + 4.0 * c * inp.nbar + 8.0 * s * s) / (4.0 * plus * minus))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Squeezing {
    /// `S₁ = 4Ṽ₁ − 1`.
    pub s1: f64,
    /// `S₂ = 4Ṽ₂ − 1`.
    pub s2: f64,
}

impl Squeezing {
    pub fn from_covariance(cov: &CovariancePair) -> Self {
        Self {
            s1: 4.0 * cov.v1 - 1.0,
            s2: 4.0 * cov.v2 - 1.0,
        }
    }

    /// Below-vacuum flags for the two quadratures.
    pub fn squeezed(&self) -> [bool; 2] {
        [self.s1 < 0.0, self.s2 < 0.0]
    }
}

pub fn squeezing(t: f64, inp: &RwaInputs) -> Result<Squeezing> {
    Ok(Squeezing::from_covariance(&covariance(t, inp)?))
}

/// `((C − 1) + 2Cn̄ ∓ 2s)/(1 ± 2s)`.
pub fn steady_squeezing(inp: &RwaInputs) -> Result<Squeezing> {
    Ok(Squeezing::from_covariance(&steady_covariance(inp)?))
}

/// Quadrature that can squeeze for a given detuning side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SqueezedQuadrature {
    /// `θ = π/4`, red detuning (`s_ε ≥ 0`).
    First,
    /// `θ = −π/4`, blue detuning (`s_ε < 0`).
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalOccupation {
    pub n_cr: f64,
    pub branch: SqueezedQuadrature,
    /// `(C − 1)/2` evaluated at `n̄_m = n_cr`; squeezing needs `|s_ε|` above it.
    pub window_lower: f64,
}

/// Squeezing threshold at fixed `C`:
/// `n_cr = ½ (1 − C + 2|s|)/(3C − 1 + 2|s|)`.
pub fn critical_occupation_at(s_eps: f64, c: f64) -> f64 {
    let s = s_eps.abs();
    0.5 * (1.0 - c + 2.0 * s) / (3.0 * c - 1.0 + 2.0 * s)
}

/// Self-consistent critical occupation, with `C` itself evaluated at
/// `n̄_m = n_cr`. Solves `8(1+|s|)n² + 4(1+3ξ²)n − 2(|s| − ξ²) = 0`.
pub fn critical_occupation(s_eps: f64, xi: f64) -> Result<CriticalOccupation> {
    let s = s_eps.abs();
    if !(s < 0.5) || (1.0 - 2.0 * s) < DENOMINATOR_GUARD {
        return Err(Error::MarginalStability { s_eps });
    }
    let xi2 = xi * xi;
    if xi2 > s {
        return Err(Error::NoSqueezingWindow { s_abs: s, xi_sq: xi2 });
    }
    let b = 1.0 + 3.0 * xi2;
    let n_cr = ((b * b + 4.0 * (1.0 + s) * (s - xi2)).sqrt() - b) / (4.0 * (1.0 + s));
    let n_cr = n_cr.max(0.0);
    let branch = if s_eps >= 0.0 {
        SqueezedQuadrature::First
    } else {
        SqueezedQuadrature::Second
    };
    Ok(CriticalOccupation {
        n_cr,
        branch,
        window_lower: (noise_factor(xi, n_cr) - 1.0) / 2.0,
    })
}

/// `T_cr = ħω_m / (k_B ln(1 + 1/n_cr))`, zero when `n_cr = 0`.
pub fn critical_temperature(s_eps: f64, xi: f64, mech_freq: f64) -> Result<f64> {
    let crit = critical_occupation(s_eps, xi)?;
    if crit.n_cr == 0.0 {
        return Ok(0.0);
    }
    occupation_to_temperature(crit.n_cr, mech_freq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn inputs(s: f64, xi: f64, nbar: f64) -> RwaInputs {
        RwaInputs::new(s, xi, nbar, 1.0).unwrap()
    }

    #[test]
    fn thermal_initial_condition() {
        for &(s, xi, n) in &[(0.44, 0.0, 0.0), (-0.3, 0.01, 0.7), (0.1, 0.002, 3.0)] {
            let c = covariance(0.0, &inputs(s, xi, n)).unwrap();
            assert_relative_eq!(c.v1, (1.0 + 2.0 * n) / 4.0, max_relative = 1e-15);
            assert_relative_eq!(c.v2, (1.0 + 2.0 * n) / 4.0, max_relative = 1e-15);
            assert_eq!(c.v12, 0.0);
        }
    }

    #[test]
    fn frozen_without_modulation_or_leak() {
        let inp = inputs(0.0, 0.0, 0.3);
        for k in 0..20 {
            let c = covariance(0.5 * k as f64, &inp).unwrap();
            assert_relative_eq!(c.v1, 0.4, max_relative = 1e-15);
            assert_relative_eq!(c.v2, 0.4, max_relative = 1e-15);
        }
    }

    #[test]
    fn covariance_reference_point() {
        // direct evaluation at s = 0.44, C = 1, n̄ = 0, γt = 1
        let c = covariance(1.0, &inputs(0.44, 0.0, 0.0)).unwrap();
        let v1 = 0.25 * (1.0 / 1.88 + (-1.88f64).exp() * 0.88 / 1.88);
        let v2 = 0.25 * (1.0 / 0.12 - (-0.12f64).exp() * 0.88 / 0.12);
        assert_relative_eq!(c.v1, v1, max_relative = 1e-14);
        assert_relative_eq!(c.v2, v2, max_relative = 1e-14);
        assert_relative_eq!(c.v1, 0.150835, max_relative = 5e-6);
        assert_relative_eq!(c.v2, 0.457312, max_relative = 5e-6);
    }

    #[test]
    fn time_scales_with_gamma() {
        let a = covariance(2.0, &RwaInputs::new(0.3, 0.01, 0.1, 1.0).unwrap()).unwrap();
        let b = covariance(2.0 / 7.5, &RwaInputs::new(0.3, 0.01, 0.1, 7.5).unwrap()).unwrap();
        assert_relative_eq!(a.v1, b.v1, max_relative = 1e-13);
        assert_relative_eq!(a.v2, b.v2, max_relative = 1e-13);
        assert_relative_eq!(a.v12, b.v12, max_relative = 1e-13);
    }

    #[test]
    fn marginal_and_negative_time_errors() {
        assert!(matches!(covariance(1.0, &inputs(0.5, 0.0, 0.0)), Err(Error::MarginalStability { .. })));
        assert!(matches!(covariance(1.0, &inputs(-0.5, 0.0, 0.0)), Err(Error::MarginalStability { .. })));
        assert_eq!(covariance(-1.0, &inputs(0.2, 0.0, 0.0)).unwrap_err(), Error::NegativeTime(-1.0));
        assert!(matches!(
            steady_phonon_number(&inputs(0.6, 0.0, 0.0)),
            Err(Error::MarginalStability { .. })
        ));
    }

    #[test]
    fn unstable_inputs_still_evaluate_in_time() {
        let c = covariance(1.0, &inputs(0.6, 0.0, 0.0)).unwrap();
        assert!(!c.stable);
        assert!(c.v2.is_finite() && c.v2 > 0.25);
        let n = phonon_numbers(1.0, &inputs(0.6, 0.0, 0.0)).unwrap();
        assert!(n.steady.is_none());
    }

    #[test]
    fn inconsistent_noise_factor_rejected() {
        assert!(RwaInputs::with_noise_factor(0.2, 1.0, 0.0, 0.0, 1.0).is_ok());
        assert!(matches!(
            RwaInputs::with_noise_factor(0.2, 1.1, 0.0, 0.0, 1.0),
            Err(Error::InconsistentNoiseFactor { .. })
        ));
    }

    #[test]
    fn initial_phonon_number_is_bath() {
        let p = phonon_numbers(0.0, &inputs(0.37, 0.01, 0.25)).unwrap();
        assert_relative_eq!(p.total, 0.25, max_relative = 1e-14);
        assert!(p.casimir.abs() < 1e-15);
    }

    #[test]
    fn unmodulated_phonon_number() {
        let (xi, nbar) = (0.02, 0.3);
        let inp = inputs(0.0, xi, nbar);
        for k in 0..30 {
            let t = 0.3 * k as f64;
            let p = phonon_numbers(t, &inp).unwrap();
            assert!((p.total - (nbar + xi * xi * (1.0 - (-t).exp()))).abs() < 1e-12);
        }
    }

    #[test]
    fn steady_phonon_number_reference() {
        let n = steady_phonon_number(&inputs(0.44, 0.0, 0.0)).unwrap();
        assert_relative_eq!(n, 0.3872 / 0.2256, max_relative = 1e-14);
        assert_relative_eq!(n, 1.71631, max_relative = 3e-6);
    }

    #[test]
    fn unmodulated_squeezing_never_negative() {
        let (xi, nbar) = (0.01, 0.05);
        let inp = inputs(0.0, xi, nbar);
        for k in 0..40 {
            let t = 0.25 * k as f64;
            let sq = squeezing(t, &inp).unwrap();
            let expected = 2.0 * nbar + 2.0 * xi * xi * (1.0 - (-t).exp());
            assert!((sq.s1 - expected).abs() < 1e-12);
            assert!((sq.s2 - expected).abs() < 1e-12);
            assert_eq!(sq.squeezed(), [false, false]);
        }
    }

    #[test]
    fn steady_squeezing_reference() {
        let sq = steady_squeezing(&inputs(0.44, 0.0, 0.0)).unwrap();
        assert_relative_eq!(sq.s1, -0.88 / 1.88, max_relative = 1e-14);
        assert_relative_eq!(sq.s1, -0.468085, max_relative = 1e-6);
        assert_eq!(sq.squeezed(), [true, false]);
        let near = steady_squeezing(&inputs(0.4999999, 0.0, 0.0)).unwrap();
        assert!((near.s1 + 0.5).abs() < 1e-6);
    }

    #[test]
    fn steady_squeezing_matches_closed_form() {
        let inp = inputs(0.3, 0.05, 0.2);
        let sq = steady_squeezing(&inp).unwrap();
        let c = inp.noise_factor;
        let s = inp.s_eps;
        assert_relative_eq!(sq.s1, ((c - 1.0) + 2.0 * c * 0.2 - 2.0 * s) / (1.0 + 2.0 * s), max_relative = 1e-13);
        assert_relative_eq!(sq.s2, ((c - 1.0) + 2.0 * c * 0.2 + 2.0 * s) / (1.0 - 2.0 * s), max_relative = 1e-13);
    }

    #[test]
    fn critical_occupation_limits() {
        let near_half = critical_occupation(0.4999999, 0.0).unwrap();
        assert!((near_half.n_cr - 1.0 / 6.0).abs() < 1e-6);
        let c = critical_occupation(0.3, 0.0).unwrap();
        assert_relative_eq!(c.n_cr, 0.3 / 2.6, max_relative = 1e-14);
        assert_eq!(critical_occupation(0.0, 0.0).unwrap().n_cr, 0.0);
        assert_eq!(critical_occupation(-0.3, 0.0).unwrap().branch, SqueezedQuadrature::Second);
        assert_eq!(critical_occupation(0.3, 0.0).unwrap().branch, SqueezedQuadrature::First);
    }

    #[test]
    fn critical_occupation_errors() {
        assert!(matches!(critical_occupation(0.5, 0.0), Err(Error::MarginalStability { .. })));
        assert!(matches!(critical_occupation(0.01, 0.2), Err(Error::NoSqueezingWindow { .. })));
    }

    #[test]
    fn critical_occupation_is_self_consistent() {
        for &(s, xi) in &[(0.3, 0.1), (0.44, 0.05), (-0.2, 0.3), (0.49, 0.6), (0.05, 0.2)] {
            let crit = critical_occupation(s, xi).unwrap();
            let c = noise_factor(xi, crit.n_cr);
            let implicit = critical_occupation_at(s, c);
            assert!((implicit - crit.n_cr).abs() < 1e-10, "s={s} xi={xi}: {implicit} vs {}", crit.n_cr);
            assert!(crit.window_lower <= s.abs() + 1e-15);
        }
    }

    #[test]
    fn steady_squeezing_survives_at_critical_occupation() {
        for &(s, xi) in &[(0.3, 0.1), (0.44, 0.0), (0.2, 0.05), (-0.4, 0.01)] {
            let crit = critical_occupation(s, xi).unwrap();
            let sq = steady_squeezing(&inputs(s, xi, crit.n_cr)).unwrap();
            let squeezed = if s > 0.0 { sq.s1 } else { sq.s2 };
            assert!(squeezed < 0.0, "s={s}: {squeezed}");
        }
    }

    #[test]
    fn steady_squeezing_boundary() {
        // S₁,ss = 0 where C(1 + 2n̄) = 1 + 2|s|, i.e. n̄ = |s| at ξ = 0
        for &s in &[0.1, 0.22, 0.44] {
            let sq = steady_squeezing(&inputs(s, 0.0, s)).unwrap();
            assert!(sq.s1.abs() < 1e-14, "{}", sq.s1);
        }
    }

    #[test]
    fn critical_temperature_matches_inverse_occupation() {
        let w = 2.0 * std::f64::consts::PI * 134e3;
        let t = critical_temperature(0.4999999, 0.0, w).unwrap();
        assert_relative_eq!(t, occupation_to_temperature(1.0 / 6.0, w).unwrap(), max_relative = 1e-5);
        assert_eq!(critical_temperature(0.0, 0.0, w).unwrap(), 0.0);
    }

    #[test]
    fn thermal_to_casimir_steady_ratio() {
        for &(s, n) in &[(0.44, 0.01), (0.22, 0.5), (-0.3, 0.2)] {
            let inp = inputs(s, 0.0, n);
            let p = phonon_numbers(1e4, &inp).unwrap();
            assert_relative_eq!(p.thermal / p.casimir, 0.5 * n / (s * s), max_relative = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn totals_decompose_and_mirror(
            s in -0.49f64..0.49, xi in 0.0f64..0.05, nbar in 0.0f64..2.0, t in 0.0f64..20.0,
        ) {
            let inp = inputs(s, xi, nbar);
            let p = phonon_numbers(t, &inp).unwrap();
            prop_assert!((p.total - p.casimir - p.thermal).abs() < 1e-12 * (1.0 + p.total.abs()));
            let q = phonon_numbers(t, &inp.mirrored()).unwrap();
            prop_assert!((p.total - q.total).abs() <= 1e-12 * (1.0 + p.total.abs()));
            prop_assert!((p.casimir - q.casimir).abs() <= 1e-12 * (1.0 + p.casimir.abs()));
            let a = squeezing(t, &inp).unwrap();
            let b = squeezing(t, &inp.mirrored()).unwrap();
            prop_assert_eq!(a.s1, b.s2);
            prop_assert_eq!(a.s2, b.s1);
        }

        #[test]
        fn heisenberg_bound(s in -0.49f64..0.49, xi in 0.0f64..0.05, nbar in 0.0f64..2.0, t in 0.0f64..50.0) {
            let c = covariance(t, &inputs(s, xi, nbar)).unwrap();
            prop_assert!(c.v1 > 0.0 && c.v2 > 0.0);
            prop_assert!(c.v1 * c.v2 >= 1.0 / 16.0 - 1e-12);
            prop_assert!(c.determinant() >= 1.0 / 16.0 - 1e-12);
        }

        #[test]
        fn casimir_grows_with_modulation(s_lo in 0.01f64..0.48, ds in 0.001f64..0.01, t in 0.05f64..20.0) {
            let s_hi = (s_lo + ds).min(0.49);
            prop_assume!(s_hi > s_lo);
            let lo = phonon_numbers(t, &inputs(s_lo, 0.0, 0.0)).unwrap().casimir;
            let hi = phonon_numbers(t, &inputs(s_hi, 0.0, 0.0)).unwrap().casimir;
            prop_assert!(hi > lo);
        }

        #[test]
        fn no_squeezing_above_steady_boundary(s in 0.01f64..0.49, extra in 1e-3f64..1.0, t in 0.0f64..50.0) {
            let sq = squeezing(t, &inputs(s, 0.0, s + extra)).unwrap();
            prop_assert!(sq.s1 > 0.0 && sq.s2 > 0.0);
        }

        #[test]
        fn critical_occupation_below_steady_boundary(s in 0.001f64..0.4999) {
            let crit = critical_occupation(s, 0.0).unwrap();
            prop_assert!(crit.n_cr < s);
            prop_assert!((crit.n_cr - s / (2.0 * (1.0 + s))).abs() < 1e-14);
        }
    }
}
