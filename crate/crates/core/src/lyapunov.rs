//! Fixed-step RK4 integration of the covariance equation
//! `dV/dt = A(t) V + V A(t)ᵀ + D` for a single mechanical mode.
//!
//! Two drifts are provided. [`DriftModel::RwaConstant`] is the
//! rotating-wave drift in the frame rotating at `Ω_m`, and serves as an
//! independent check of the closed forms in [`crate::rwa`].
//! [`DriftModel::FullModulated`] keeps every counter-rotating term and is
//! written in the lab quadrature basis; its trajectories are brought to the
//! rotating frame with [`rotate`] and to the `±π/4` basis with [`eigenbasis`].

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{congruence, eigen_rotation, is_positive_definite, is_positive_semidefinite, rotation, spectral_radius, symmetrize, Mat2};
use crate::rwa::RwaInputs;

/// Minimum number of RK4 steps per modulation period for the full model.
pub const MIN_STEPS_PER_PERIOD: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Lab quadratures `(δX, δP)`.
    Lab,
    /// Quadratures in the frame rotating at `Ω_m`.
    Rotating,
    /// `±π/4` quadratures of the rotating frame.
    Eigen,
}

impl Basis {
    pub fn tag(self) -> &'static str {
        match self {
            Basis::Lab => "lab",
            Basis::Rotating => "rotating",
            Basis::Eigen => "eigen",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceState {
    pub matrix: Mat2,
    pub basis: Basis,
}

impl CovarianceState {
    /// Thermal state `(1 + 2n̄)/4 · I`, isotropic in every basis.
    pub fn thermal(nbar: f64, basis: Basis) -> Self {
        Self {
            matrix: Mat2::identity() * ((1.0 + 2.0 * nbar) / 4.0),
            basis,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriftModel {
    /// `[[−γ/2, χ_ε], [χ_ε, −γ/2]]` in the rotating frame.
    RwaConstant { gamma: f64, chi_eps: f64 },
    /// `[[−γ/2, 2χ(t) + Ω_m(t)], [2χ(t) − Ω_m(t), −γ/2]]` in the lab frame, with
    /// `χ(t) = χ₀(1 + ε cos Ωt)`, `Ω_m(t) = Ω_m − 2εχ₀ cos Ωt` and `Ω = 2Ω_m`.
    FullModulated {
        gamma: f64,
        shifted_freq: f64,
        chi0: f64,
        modulation_depth: f64,
    },
    /// Arbitrary constant drift.
    Constant(Mat2),
}

impl DriftModel {
    pub fn matrix(&self, t: f64) -> Mat2 {
        match *self {
            DriftModel::RwaConstant { gamma, chi_eps } => Mat2::new(-gamma / 2.0, chi_eps, chi_eps, -gamma / 2.0),
            DriftModel::FullModulated {
                gamma,
                shifted_freq,
                chi0,
                modulation_depth,
            } => {
                let cos = (2.0 * shifted_freq * t).cos();
                let chi_t = chi0 * (1.0 + modulation_depth * cos);
                let omega_t = shifted_freq - 2.0 * modulation_depth * chi0 * cos;
                Mat2::new(-gamma / 2.0, 2.0 * chi_t + omega_t, 2.0 * chi_t - omega_t, -gamma / 2.0)
            }
            DriftModel::Constant(m) => m,
        }
    }

    pub fn gamma(&self) -> Option<f64> {
        match *self {
            DriftModel::RwaConstant { gamma, .. } | DriftModel::FullModulated { gamma, .. } => Some(gamma),
            DriftModel::Constant(_) => None,
        }
    }

    /// `2π/Ω` for the modulated drift.
    pub fn modulation_period(&self) -> Option<f64> {
        match *self {
            DriftModel::FullModulated { shifted_freq, .. } => Some(2.0 * PI / (2.0 * shifted_freq).abs()),
            _ => None,
        }
    }

    /// Upper bound on `|λ|` of `A(t)` over all `t`.
    pub fn rate_bound(&self) -> f64 {
        match *self {
            DriftModel::FullModulated {
                gamma,
                shifted_freq,
                chi0,
                modulation_depth,
            } => {
                let upper = (2.0 * chi0 + shifted_freq).abs();
                let lower = (2.0 * chi0 - shifted_freq).abs() + 4.0 * (modulation_depth * chi0).abs();
                gamma / 2.0 + (upper * lower).sqrt()
            }
            _ => spectral_radius(&self.matrix(0.0)),
        }
    }
}

/// Constant symmetric positive semidefinite diffusion matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionModel(Mat2);

impl DiffusionModel {
    pub fn new(matrix: Mat2) -> Result<Self> {
        if (matrix[(0, 1)] - matrix[(1, 0)]).abs() > 1e-14 * matrix.amax().max(f64::MIN_POSITIVE) {
            return Err(Error::NonPsdDiffusion);
        }
        if !is_positive_semidefinite(&matrix) {
            return Err(Error::NonPsdDiffusion);
        }
        Ok(Self(matrix))
    }

    /// `diag(γ(1 + 2n̄)/4, γ((1 + 2n̄) + 4ξ²)/4)`, the symmetrized second
    /// moments of the quadrature noises `X_in`, `P_in`.
    pub fn canonical(gamma: f64, nbar: f64, xi: f64) -> Self {
        let thermal = 1.0 + 2.0 * nbar;
        Self(Mat2::new(gamma * thermal / 4.0, 0.0, 0.0, gamma * (thermal + 4.0 * xi * xi) / 4.0))
    }

    pub fn zero() -> Self {
        Self(Mat2::zeros())
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    /// `Mᵀ D M`, the diffusion seen by coordinates `ũ = Mᵀ u`.
    pub fn in_basis(&self, m: &Mat2) -> Mat2 {
        m.transpose() * self.0 * m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Mat2>,
    pub basis: Basis,
    /// `γ_m` of the generating drift, when known.
    pub gamma: Option<f64>,
}

/// Per-sample observables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observables {
    pub n: f64,
    pub v1: Option<f64>,
    pub v2: Option<f64>,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
}

impl CovarianceTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `n = tr V − 1/2`, invariant under the frame rotations used here.
    pub fn phonon_numbers(&self) -> Vec<f64> {
        self.states.iter().map(|v| v.trace() - 0.5).collect()
    }

    /// `(Ṽ₁, Ṽ₂)` per sample. Undefined in the lab basis.
    pub fn quadrature_variances(&self) -> Option<Vec<(f64, f64)>> {
        match self.basis {
            Basis::Lab => None,
            Basis::Eigen => Some(self.states.iter().map(|v| (v[(0, 0)], v[(1, 1)])).collect()),
            Basis::Rotating => Some(
                self.states
                    .iter()
                    .map(|v| {
                        let mean = 0.5 * (v[(0, 0)] + v[(1, 1)]);
                        let c = 0.5 * (v[(0, 1)] + v[(1, 0)]);
                        (mean - c, mean + c)
                    })
                    .collect(),
            ),
        }
    }

    pub fn observables(&self) -> Vec<Observables> {
        let n = self.phonon_numbers();
        match self.quadrature_variances() {
            Some(vars) => n
                .into_iter()
                .zip(vars)
                .map(|(n, (v1, v2))| Observables {
                    n,
                    v1: Some(v1),
                    v2: Some(v2),
                    s1: Some(4.0 * v1 - 1.0),
                    s2: Some(4.0 * v2 - 1.0),
                })
                .collect(),
            None => n
                .into_iter()
                .map(|n| Observables {
                    n,
                    v1: None,
                    v2: None,
                    s1: None,
                    s2: None,
                })
                .collect(),
        }
    }
}

/// `n` uniformly spaced points from `start` to `end` inclusive.
pub fn uniform_grid(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let h = (end - start) / (n - 1) as f64;
            (0..n).map(|k| if k == n - 1 { end } else { start + h * k as f64 }).collect()
        }
    }
}

pub(crate) fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid("grid contains non-finite times".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    Ok(())
}

fn lyapunov_rhs(a: &Mat2, v: &Mat2, d: &Mat2) -> Mat2 {
    a * v + v * a.transpose() + d
}

fn rk4_step(drift: &DriftModel, d: &Mat2, t: f64, h: f64, v: &Mat2) -> Mat2 {
    let a0 = drift.matrix(t);
    let a_mid = drift.matrix(t + 0.5 * h);
    let a1 = drift.matrix(t + h);
    let k1 = lyapunov_rhs(&a0, v, d);
    let k2 = lyapunov_rhs(&a_mid, &(v + k1 * (0.5 * h)), d);
    let k3 = lyapunov_rhs(&a_mid, &(v + k2 * (0.5 * h)), d);
    let k4 = lyapunov_rhs(&a1, &(v + k3 * h), d);
    symmetrize(&(v + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)))
}

/// Integrates the covariance from `v0` at `grid[0]`, taking `substeps`
/// RK4 steps between consecutive grid points.
///
/// The full modulated drift must be resolved with at least
/// [`MIN_STEPS_PER_PERIOD`] steps per modulation period; every drift must
/// satisfy `h·|λ|max ≤ 1`.
pub fn integrate(
    drift: &DriftModel,
    diffusion: &DiffusionModel,
    v0: &CovarianceState,
    grid: &[f64],
    substeps: usize,
) -> Result<CovarianceTrajectory> {
    validate_grid(grid)?;
    if substeps == 0 {
        return Err(Error::InvalidGrid("substeps must be at least 1".into()));
    }
    if !is_positive_definite(&v0.matrix) || (v0.matrix[(0, 1)] - v0.matrix[(1, 0)]).abs() > 1e-14 {
        return Err(Error::LostPositivity { t: grid[0] });
    }

    let max_interval = grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let h_max = max_interval / substeps as f64;
    let rate = drift.rate_bound();
    let mut limit = if rate > 0.0 { 1.0 / rate } else { f64::INFINITY };
    if let Some(period) = drift.modulation_period() {
        limit = limit.min(period / MIN_STEPS_PER_PERIOD);
    }
    if h_max > limit * (1.0 + 1e-9) {
        return Err(Error::StepTooCoarse { dt: h_max, limit });
    }

    let d = diffusion.matrix();
    let mut states = Vec::with_capacity(grid.len());
    let mut v = v0.matrix;
    states.push(v);
    for w in grid.windows(2) {
        let h = (w[1] - w[0]) / substeps as f64;
        for k in 0..substeps {
            let t = w[0] + h * k as f64;
            v = rk4_step(drift, d, t, h, &v);
            if !is_positive_definite(&v) {
                return Err(Error::LostPositivity { t: t + h });
            }
        }
        states.push(v);
    }

    Ok(CovarianceTrajectory {
        times: grid.to_vec(),
        states,
        basis: v0.basis,
        gamma: drift.gamma(),
    })
}

/// Lab trajectory to the frame rotating at `shifted_freq`:
/// `V_rot(t) = R(Ω_m t) V(t) R(Ω_m t)ᵀ`.
pub fn rotate(traj: &CovarianceTrajectory, shifted_freq: f64) -> Result<CovarianceTrajectory> {
    if traj.basis != Basis::Lab {
        return Err(Error::WrongBasis {
            expected: Basis::Lab.tag(),
            found: traj.basis.tag(),
        });
    }
    let states = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, v)| symmetrize(&congruence(&rotation(shifted_freq * t), v)))
        .collect();
    Ok(CovarianceTrajectory {
        times: traj.times.clone(),
        states,
        basis: Basis::Rotating,
        gamma: traj.gamma,
    })
}

/// Rotating-frame trajectory to the `±π/4` quadratures:
/// `Ṽ₁ = Var((X̃ − P̃)/√2)`, `Ṽ₂ = Var((X̃ + P̃)/√2)`.
pub fn eigenbasis(traj: &CovarianceTrajectory) -> Result<CovarianceTrajectory> {
    if traj.basis != Basis::Rotating {
        return Err(Error::WrongBasis {
            expected: Basis::Rotating.tag(),
            found: traj.basis.tag(),
        });
    }
    let r = eigen_rotation();
    let states = traj.states.iter().map(|v| symmetrize(&(r.transpose() * v * r))).collect();
    Ok(CovarianceTrajectory {
        times: traj.times.clone(),
        states,
        basis: Basis::Eigen,
        gamma: traj.gamma,
    })
}

/// Modulated oscillator with all counter-rotating terms, usually in scaled
/// units (`γ_m = 1`) where `ω_m/γ_m` is a tunable ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulatedModel {
    pub gamma: f64,
    /// Bare `ω_m`.
    pub mech_freq: f64,
    pub chi0: f64,
    pub modulation_depth: f64,
    pub nbar: f64,
    pub xi: f64,
}

impl ModulatedModel {
    /// `γ_m = 1`, `ω_m = omega_ratio`, `χ₀ = s_ε/ε`.
    pub fn scaled(omega_ratio: f64, s_eps: f64, modulation_depth: f64, nbar: f64, xi: f64) -> Result<Self> {
        if !(modulation_depth > 0.0 && modulation_depth < 1.0) {
            return Err(Error::OutOfRange {
                name: "modulation_depth",
                reason: format!("scaled runs need 0 < ε < 1 (got {modulation_depth})"),
            });
        }
        if !(omega_ratio > 0.0) {
            return Err(Error::NonPositiveInput {
                name: "omega_ratio",
                value: omega_ratio,
            });
        }
        Ok(Self {
            gamma: 1.0,
            mech_freq: omega_ratio,
            chi0: s_eps / modulation_depth,
            modulation_depth,
            nbar,
            xi,
        })
    }

    pub fn chi_eps(&self) -> f64 {
        self.modulation_depth * self.chi0
    }

    pub fn s_eps(&self) -> f64 {
        self.chi_eps() / self.gamma
    }

    /// `Ω_m = ω_m − 2χ₀`.
    pub fn shifted_freq(&self) -> f64 {
        self.mech_freq - 2.0 * self.chi0
    }

    pub fn modulation_period(&self) -> f64 {
        2.0 * PI / (2.0 * self.shifted_freq())
    }

    pub fn drift(&self) -> DriftModel {
        DriftModel::FullModulated {
            gamma: self.gamma,
            shifted_freq: self.shifted_freq(),
            chi0: self.chi0,
            modulation_depth: self.modulation_depth,
        }
    }

    pub fn rwa_drift(&self) -> DriftModel {
        DriftModel::RwaConstant {
            gamma: self.gamma,
            chi_eps: self.chi_eps(),
        }
    }

    pub fn diffusion(&self) -> DiffusionModel {
        DiffusionModel::canonical(self.gamma, self.nbar, self.xi)
    }

    pub fn rwa_inputs(&self) -> Result<RwaInputs> {
        RwaInputs::new(self.s_eps(), self.xi, self.nbar, self.gamma)
    }

    /// Sample grid over `[0, t_end]` aligned to whole modulation periods.
    pub fn period_grid(&self, t_end: f64, samples_per_period: usize) -> Vec<f64> {
        let dt = self.modulation_period() / samples_per_period as f64;
        let n = (t_end / dt).ceil() as usize + 1;
        (0..n).map(|k| k as f64 * dt).collect()
    }

    /// Integrates the lab-frame model from the thermal state and returns
    /// the trajectory in the `±π/4` basis of the rotating frame.
    pub fn run(&self, t_end: f64, samples_per_period: usize, substeps: usize) -> Result<CovarianceTrajectory> {
        let grid = self.period_grid(t_end, samples_per_period);
        let lab = integrate(
            &self.drift(),
            &self.diffusion(),
            &CovarianceState::thermal(self.nbar, Basis::Lab),
            &grid,
            substeps,
        )?;
        eigenbasis(&rotate(&lab, self.shifted_freq())?)
    }
}

/// Mean over one full period centred on each sample, with trapezoid end
/// weights. `window` is the number of samples per period and must be even;
/// samples too close to either end get `None`.
pub fn period_mean(values: &[f64], window: usize) -> Vec<Option<f64>> {
    assert!(window >= 2 && window.is_multiple_of(2), "window must be even and >= 2");
    let half = window / 2;
    (0..values.len())
        .map(|k| {
            if k < half || k + half >= values.len() {
                return None;
            }
            let slice = &values[k - half..=k + half];
            let inner: f64 = slice[1..window].iter().sum();
            Some((inner + 0.5 * (slice[0] + slice[window])) / window as f64)
        })
        .collect()
}
