//! Euler–Maruyama ensembles of the linear quadrature Langevin equations
//! `du = A(t) u dt + G dW`, `G Gᵀ = D`.
//!
//! Each trajectory draws from its own ChaCha8 stream keyed by
//! `(seed, trajectory index)`, so the output is bit-identical for any thread
//! count. Only second moments are estimated: the classical process shares
//! the symmetrized covariance of the quantum one, nothing more.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigen_rotation, psd_factor, Mat2, Vec2};
use crate::lyapunov::{DiffusionModel, DriftModel};
use crate::rwa::RwaInputs;

/// Upper bound on `dt·|λ|max` for the explicit scheme.
pub const STABILITY_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub trajectories: usize,
    pub dt: f64,
    pub duration: f64,
    pub seed: u64,
    pub drift: DriftModel,
    pub diffusion: DiffusionModel,
    pub initial_covariance: Mat2,
    /// Steps between recorded samples in [`simulate`].
    pub record_every: usize,
}

impl EnsembleSpec {
    /// RWA dynamics written directly in the `±π/4` basis: drift
    /// `diag(λ₁, λ₂)`, diffusion `Rᵀ D R`, thermal start.
    pub fn rwa_eigen(inp: &RwaInputs, trajectories: usize, dt: f64, duration: f64, seed: u64) -> Self {
        let canonical = DiffusionModel::canonical(inp.gamma, inp.nbar, inp.xi);
        let rotated = canonical.in_basis(&eigen_rotation());
        let th = (1.0 + 2.0 * inp.nbar) / 4.0;
        Self {
            trajectories,
            dt,
            duration,
            seed,
            drift: DriftModel::Constant(Mat2::new(inp.lambda1(), 0.0, 0.0, inp.lambda2())),
            diffusion: DiffusionModel::new(crate::linalg::symmetrize(&rotated)).unwrap_or(canonical),
            initial_covariance: Mat2::identity() * th,
            record_every: 1,
        }
    }

    pub fn steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }

    fn validate(&self) -> Result<(Mat2, Mat2)> {
        if self.trajectories < 2 {
            return Err(Error::InvalidEnsemble(format!(
                "need at least 2 trajectories (got {})",
                self.trajectories
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::NonPositiveInput { name: "dt", value: self.dt });
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return Err(Error::NegativeTime(self.duration));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidEnsemble("record_every must be at least 1".into()));
        }
        let margin = self.dt * self.drift.rate_bound();
        if margin >= STABILITY_MARGIN {
            return Err(Error::UnstableStep(margin));
        }
        let noise = psd_factor(self.diffusion.matrix()).ok_or(Error::NonPsdDiffusion)?;
        let init =
            psd_factor(&self.initial_covariance).ok_or_else(|| Error::InvalidEnsemble("initial covariance is not positive semidefinite".into()))?;
        Ok((noise, init))
    }
}

/// Box–Muller pairs from a 64-bit stream.
struct Normals {
    rng: ChaCha8Rng,
}

impl Normals {
    fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    fn pair(&mut self) -> Vec2 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        // u1 ∈ (0, 1], u2 ∈ [0, 1)
        let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * SCALE;
        let u2 = (self.rng.next_u64() >> 11) as f64 * SCALE;
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        Vec2::new(r * c, r * s)
    }
}

/// Runs every trajectory and records `u` at the sorted step indices.
fn run_paths(spec: &EnsembleSpec, record: &[usize]) -> Result<Vec<Vec<Vec2>>> {
    let (noise, init) = spec.validate()?;
    let last = record.last().copied().unwrap_or(0);
    let sqrt_dt = spec.dt.sqrt();
    let paths = (0..spec.trajectories)
        .into_par_iter()
        .map(|index| {
            let mut normals = Normals::new(spec.seed, index as u64);
            let mut u = init * normals.pair();
            let mut out = Vec::with_capacity(record.len());
            let mut next = 0;
            for step in 0..=last {
                while next < record.len() && record[next] == step {
                    out.push(u);
                    next += 1;
                }
                if step == last {
                    break;
                }
                let t = step as f64 * spec.dt;
                let a = spec.drift.matrix(t);
                u += a * u * spec.dt + noise * normals.pair() * sqrt_dt;
            }
            out
        })
        .collect();
    Ok(paths)
}

/// Pairwise summation with a fixed split, independent of scheduling.
fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Mean and standard error of the mean.
fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&dev) / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Sample cross covariance `Cov(a, b)` with its standard error.
fn cross_covariance(a: &[f64], b: &[f64]) -> (f64, f64) {
    let n = a.len() as f64;
    let ma = pairwise_sum(a) / n;
    let mb = pairwise_sum(b) / n;
    let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).collect();
    let (m, se) = mean_and_stderr(&prod);
    (m * n / (n - 1.0), se)
}

fn lag_moments(first: &[Vec2], second: &[Vec2]) -> (Mat2, Mat2) {
    let comp = |v: &[Vec2], i: usize| v.iter().map(|u| u[i]).collect::<Vec<f64>>();
    let a = [comp(first, 0), comp(first, 1)];
    let b = [comp(second, 0), comp(second, 1)];
    let mut cov = Mat2::zeros();
    let mut se = Mat2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let (c, e) = cross_covariance(&a[i], &b[j]);
            cov[(i, j)] = c;
            se[(i, j)] = e;
        }
    }
    (cov, se)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleMoments {
    pub trajectories: usize,
    pub times: Vec<f64>,
    pub mean: Vec<Vec2>,
    pub mean_stderr: Vec<Vec2>,
    pub covariance: Vec<Mat2>,
    pub covariance_stderr: Vec<Mat2>,
}

pub fn simulate(spec: &EnsembleSpec) -> Result<EnsembleMoments> {
    let steps = spec.steps();
    let record: Vec<usize> = (0..=steps).step_by(spec.record_every.max(1)).collect();
    let paths = run_paths(spec, &record)?;
    let per_time: Vec<_> = (0..record.len())
        .into_par_iter()
        .map(|k| {
            let column: Vec<Vec2> = paths.iter().map(|p| p[k]).collect();
            let (m0, e0) = mean_and_stderr(&column.iter().map(|u| u[0]).collect::<Vec<_>>());
            let (m1, e1) = mean_and_stderr(&column.iter().map(|u| u[1]).collect::<Vec<_>>());
            let (cov, se) = lag_moments(&column, &column);
            (Vec2::new(m0, m1), Vec2::new(e0, e1), cov, se)
        })
        .collect();
    Ok(EnsembleMoments {
        trajectories: spec.trajectories,
        times: record.iter().map(|&k| k as f64 * spec.dt).collect(),
        mean: per_time.iter().map(|x| x.0).collect(),
        mean_stderr: per_time.iter().map(|x| x.1).collect(),
        covariance: per_time.iter().map(|x| x.2).collect(),
        covariance_stderr: per_time.iter().map(|x| x.3).collect(),
    })
}

/// Sampled `E[u(t) u(t+τ)ᵀ]` (mean-subtracted) at each lag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagCovariances {
    pub t: f64,
    pub taus: Vec<f64>,
    pub covariance: Vec<Mat2>,
    pub stderr: Vec<Mat2>,
}

/// `t` and every `τ` are rounded to the nearest step.
pub fn two_time_sample(spec: &EnsembleSpec, t: f64, taus: &[f64]) -> Result<LagCovariances> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if let Some(&tau) = taus.iter().find(|&&tau| !(tau >= 0.0)) {
        return Err(Error::NegativeTime(tau));
    }
    let horizon = spec.duration + 0.5 * spec.dt;
    if let Some(&tau) = taus.iter().find(|&&tau| t + tau > horizon) {
        return Err(Error::LagBeyondDuration {
            requested: t + tau,
            duration: spec.duration,
        });
    }
    let base = (t / spec.dt).round() as usize;
    let lagged: Vec<usize> = taus.iter().map(|tau| base + (tau / spec.dt).round() as usize).collect();
    let mut record: Vec<usize> = lagged.clone();
    record.push(base);
    record.sort_unstable();
    record.dedup();
    let paths = run_paths(spec, &record)?;
    let slot = |step: usize| record.binary_search(&step).expect("recorded step");
    let first: Vec<Vec2> = paths.iter().map(|p| p[slot(base)]).collect();
    let results: Vec<(Mat2, Mat2)> = lagged
        .par_iter()
        .map(|&step| {
            let second: Vec<Vec2> = paths.iter().map(|p| p[slot(step)]).collect();
            lag_moments(&first, &second)
        })
        .collect();
    Ok(LagCovariances {
        t: base as f64 * spec.dt,
        taus: lagged.iter().map(|&k| (k - base) as f64 * spec.dt).collect(),
        covariance: results.iter().map(|r| r.0).collect(),
        stderr: results.iter().map(|r| r.1).collect(),
    })
}
