//! Symmetrized displacement spectrum of the mechanical mode around the
//! shifted frequency, in the dimensionless detuning `ω̃ = (ω − Ω_m)/γ_m`:
//!
//! ```text
//! γ_m S_xx(ω̃) = [(1 + 2n̄)(1 + 4ω̃²) + 4s²((1 + 2n̄) + 4ξ²)]
//!              / (16 [ω̃² + ((1 − 4s²)/4 − ω̃²)²])
//! ```
//!
//! The factorized form `|G_x|² D_XX + |G_p|² D_PP` is exposed for checks.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::DerivedParams;
use crate::rwa::RwaInputs;

/// Half-maximum crossings are refined to this absolute tolerance in `ω̃`.
const BISECTION_TOL: f64 = 1e-12;

/// `γ_m S_xx(ω̃)`.
pub fn scaled_density(omega: f64, inp: &RwaInputs) -> f64 {
    let th = 1.0 + 2.0 * inp.nbar;
    let s2 = inp.s_eps * inp.s_eps;
    let w2 = omega * omega;
    let num = th * (1.0 + 4.0 * w2) + 4.0 * s2 * (th + 4.0 * inp.xi * inp.xi);
    let q = (1.0 - 4.0 * s2) / 4.0 - w2;
    num / (16.0 * (w2 + q * q))
}

/// Mechanical susceptibility `χ_m(ω) = 1/(γ_m/2 − iω)`.
pub fn chi_m(omega: f64, gamma: f64) -> Complex64 {
    Complex64::new(gamma / 2.0, -omega).inv()
}

/// `G_x = χ_m / (1 − χ_ε² χ_m²)`.
pub fn g_x(omega: f64, gamma: f64, chi_eps: f64) -> Complex64 {
    let chi = chi_m(omega, gamma);
    chi / (1.0 - chi_eps * chi_eps * chi * chi)
}

/// `G_p = χ_ε χ_m G_x`.
pub fn g_p(omega: f64, gamma: f64, chi_eps: f64) -> Complex64 {
    chi_eps * chi_m(omega, gamma) * g_x(omega, gamma, chi_eps)
}

/// `|G_x|² D_XX + |G_p|² D_PP` at angular offset `ω` (rad/s), in s.
pub fn factorized_density(omega: f64, inp: &RwaInputs) -> f64 {
    let gamma = inp.gamma;
    let chi_eps = inp.s_eps * gamma;
    let th = 1.0 + 2.0 * inp.nbar;
    let dxx = gamma * th / 4.0;
    let dpp = gamma * (th + 4.0 * inp.xi * inp.xi) / 4.0;
    g_x(omega, gamma, chi_eps).norm_sqr() * dxx + g_p(omega, gamma, chi_eps).norm_sqr() * dpp
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Linewidth {
    /// Full width at half maximum in `ω̃` units.
    pub width: f64,
    /// Width in rad/s.
    pub width_rad_s: f64,
    pub left: f64,
    pub right: f64,
    /// `true` when the grid maximum is not at the sample nearest `ω̃ = 0`.
    pub non_central_peak: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub inputs: RwaInputs,
    pub omega: Vec<f64>,
    /// `γ_m S_xx`.
    pub scaled: Vec<f64>,
    /// `S_xx / S_xx(0)`.
    pub normalized: Vec<f64>,
    pub peak_omega: f64,
    /// `γ_m S_xx` at the peak.
    pub peak_value: f64,
}

impl SpectrumResult {
    /// `S_xx` in seconds.
    pub fn density(&self) -> Vec<f64> {
        self.scaled.iter().map(|v| v / self.inputs.gamma).collect()
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 3 {
        return Err(Error::InvalidGrid("spectrum grid needs at least 3 points".into()));
    }
    if grid.iter().any(|w| !w.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("spectrum grid must be finite and strictly increasing".into()));
    }
    let scale = grid[grid.len() - 1].abs().max(grid[0].abs());
    if grid.iter().zip(grid.iter().rev()).any(|(a, b)| (a + b).abs() > 1e-12 * scale) {
        return Err(Error::InvalidGrid("spectrum grid must be symmetric about 0".into()));
    }
    Ok(())
}

/// `count` points uniformly over `[−half_width, half_width]`, exactly
/// symmetric.
pub fn symmetric_grid(half_width: f64, count: usize) -> Vec<f64> {
    let h = 2.0 * half_width / (count - 1) as f64;
    let mid = (count - 1) as f64 / 2.0;
    (0..count).map(|k| (k as f64 - mid) * h).collect()
}

/// 4001 points over `ω̃ ∈ [−5, 5]`.
pub fn default_grid() -> Vec<f64> {
    symmetric_grid(5.0, 4001)
}

pub fn evaluate(grid: &[f64], inp: &RwaInputs) -> Result<SpectrumResult> {
    inp.require_stable()?;
    validate_grid(grid)?;
    let scaled: Vec<f64> = grid.iter().map(|&w| scaled_density(w, inp)).collect();
    let at_zero = scaled_density(0.0, inp);
    let (peak_idx, peak_value) = scaled
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    Ok(SpectrumResult {
        inputs: *inp,
        omega: grid.to_vec(),
        normalized: scaled.iter().map(|v| v / at_zero).collect(),
        scaled,
        peak_omega: grid[peak_idx],
        peak_value,
    })
}

fn bisect(f: impl Fn(f64) -> f64, mut inside: f64, mut outside: f64) -> f64 {
    // f(inside) > 0 >= f(outside)
    while (outside - inside).abs() > BISECTION_TOL {
        let mid = 0.5 * (inside + outside);
        if f(mid) > 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (inside + outside)
}

/// Full width at half maximum about the grid maximum. Crossings are
/// bracketed on the grid and refined by bisection on the closed form.
pub fn fwhm(result: &SpectrumResult) -> Result<Linewidth> {
    let grid = &result.omega;
    let peak_idx = grid.iter().position(|&w| w == result.peak_omega).unwrap_or(0);
    let centre_idx = grid
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &w)| if w.abs() < acc.1 { (i, w.abs()) } else { acc })
        .0;
    let half = 0.5 * result.peak_value;
    let inp = result.inputs;
    let excess = |w: f64| scaled_density(w, &inp) - half;

    let right_idx = (peak_idx + 1..grid.len())
        .find(|&i| result.scaled[i] <= half)
        .ok_or(Error::NoHalfCrossing { side: "right" })?;
    let left_idx = (0..peak_idx)
        .rev()
        .find(|&i| result.scaled[i] <= half)
        .ok_or(Error::NoHalfCrossing { side: "left" })?;
    let right = bisect(excess, grid[right_idx - 1], grid[right_idx]);
    let left = bisect(excess, grid[left_idx + 1], grid[left_idx]);
    let width = right - left;
    Ok(Linewidth {
        width,
        width_rad_s: width * inp.gamma,
        left,
        right,
        non_central_peak: peak_idx != centre_idx,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DetuningSide {
    Red,
    Blue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CasimirCenters {
    /// `ω_m − 2|χ₀|`.
    pub red: f64,
    /// `ω_m + 2|χ₀|`.
    pub blue: f64,
    pub side: DetuningSide,
}

impl CasimirCenters {
    pub fn active(&self) -> f64 {
        match self.side {
            DetuningSide::Red => self.red,
            DetuningSide::Blue => self.blue,
        }
    }
}

/// Centre frequencies of the generated phonons on either detuning side;
/// the sign of `χ₀` follows the sign of `Δ_c`.
pub fn casimir_center(d: &DerivedParams) -> CasimirCenters {
    let shift = 2.0 * d.chi0.abs();
    CasimirCenters {
        red: d.mech_freq - shift,
        blue: d.mech_freq + shift,
        side: if d.chi0 >= 0.0 { DetuningSide::Red } else { DetuningSide::Blue },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn inputs(s: f64, nbar: f64, xi: f64) -> RwaInputs {
        RwaInputs::new(s, xi, nbar, 1.0).unwrap()
    }

    #[test]
    fn lorentzian_limit() {
        let inp = inputs(0.0, 0.3, 0.0);
        let res = evaluate(&default_grid(), &inp).unwrap();
        for (w, v) in res.omega.iter().zip(&res.scaled) {
            let lor = 1.6 / (1.0 + 4.0 * w * w);
            assert!(((v - lor) / lor).abs() < 1e-12);
        }
        let lw = fwhm(&res).unwrap();
        assert!((lw.width - 1.0).abs() < 1e-6);
        assert!(!lw.non_central_peak);
    }

    #[test]
    fn peak_height_at_044() {
        assert!((scaled_density(0.0, &inputs(0.44, 0.0, 0.0)) - 34.864).abs() < 1e-3);
        assert_relative_eq!(
            scaled_density(0.0, &inputs(0.44, 0.0, 0.0)),
            1.7744 / (0.2256 * 0.2256),
            max_relative = 1e-12
        );
    }

    #[test]
    fn narrowing() {
        let widths: Vec<f64> = (0..20)
            .map(|k| {
                let s = 0.49 * k as f64 / 19.0;
                fwhm(&evaluate(&default_grid(), &inputs(s, 0.0, 0.0)).unwrap()).unwrap().width
            })
            .collect();
        assert!(widths.windows(2).all(|w| w[1] < w[0]), "{widths:?}");
        assert!(widths[19] < 0.1);
    }

    #[test]
    fn physical_width_scales_with_gamma() {
        let inp = RwaInputs::new(0.22, 0.0, 0.0, 3.0).unwrap();
        let lw = fwhm(&evaluate(&default_grid(), &inp).unwrap()).unwrap();
        assert_relative_eq!(lw.width_rad_s, 3.0 * lw.width, max_relative = 1e-15);
    }

    #[test]
    fn narrow_grid_has_no_crossing() {
        let res = evaluate(&symmetric_grid(0.1, 21), &inputs(0.0, 0.0, 0.0)).unwrap();
        assert!(matches!(fwhm(&res), Err(Error::NoHalfCrossing { .. })));
    }

    #[test]
    fn rejects_asymmetric_grid_and_instability() {
        assert!(matches!(evaluate(&[-1.0, 0.0, 2.0], &inputs(0.1, 0.0, 0.0)), Err(Error::InvalidGrid(_))));
        let unstable = inputs(0.6, 0.0, 0.0);
        assert!(matches!(evaluate(&default_grid(), &unstable), Err(Error::MarginalStability { .. })));
    }

    #[test]
    fn sum_rule() {
        let inp = inputs(0.0, 0.2, 0.0);
        let grid = symmetric_grid(50.0, 200_001);
        let h = grid[1] - grid[0];
        let vals: Vec<f64> = grid.iter().map(|&w| scaled_density(w, &inp)).collect();
        let integral = h * (vals.iter().sum::<f64>() - 0.5 * (vals[0] + vals[vals.len() - 1]));
        let expected = std::f64::consts::FRAC_PI_2 * 1.4;
        assert!(((integral - expected) / expected).abs() < 0.01);
    }

    #[test]
    fn centers() {
        let mut d = crate::params::derive(&crate::params::PhysicalParams::membrane_in_the_middle(
            1e9,
            1e-6,
            0.5,
            crate::params::Bath::Occupation(0.01),
        ))
        .unwrap();
        let c = casimir_center(&d);
        assert_eq!(c.side, DetuningSide::Red);
        assert!(c.active() < d.mech_freq);
        d.chi0 = -d.chi0;
        let c = casimir_center(&d);
        assert_eq!(c.side, DetuningSide::Blue);
        assert!(c.active() > d.mech_freq);
        d.chi0 = 0.0;
        let c = casimir_center(&d);
        assert_eq!((c.red, c.blue), (d.mech_freq, d.mech_freq));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn closed_form_matches_factorization(
            s in -0.49f64..0.49, nbar in 0.0f64..2.0, xi in 0.0f64..0.1, w in -10.0f64..10.0, gamma in 0.1f64..10.0,
        ) {
            let inp = RwaInputs::new(s, xi, nbar, gamma).unwrap();
            let closed = scaled_density(w, &inp) / gamma;
            let fact = factorized_density(w * gamma, &inp);
            prop_assert!(((closed - fact) / closed).abs() < 1e-10, "{} vs {}", closed, fact);
            let chi = chi_m(w * gamma, gamma);
            let gp = g_p(w * gamma, gamma, s * gamma);
            let gx = g_x(w * gamma, gamma, s * gamma);
            prop_assert!((gp - s * gamma * chi * gx).norm() <= 1e-12 * gp.norm().max(1e-300));
        }

        #[test]
        fn even_and_side_invariant(s in -0.49f64..0.49, nbar in 0.0f64..2.0, xi in 0.0f64..0.1, w in 0.0f64..10.0) {
            let inp = inputs(s, nbar, xi);
            let a = scaled_density(w, &inp);
            prop_assert!((a - scaled_density(-w, &inp)).abs() <= 1e-12 * a);
            prop_assert!((a - scaled_density(w, &inp.mirrored())).abs() <= 1e-12 * a);
            prop_assert!(a > 0.0);
        }

        #[test]
        fn peak_stays_central(s in -0.49f64..0.49, nbar in 0.0f64..2.0) {
            let res = evaluate(&default_grid(), &inputs(s, nbar, 0.0)).unwrap();
            prop_assert_eq!(res.peak_omega, 0.0);
        }
    }
}
