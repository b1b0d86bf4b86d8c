//! Monte Carlo ensemble of the RWA Langevin equations in the `±π/4` basis,
//! tabulated against the closed-form covariance.

use dce_core::rwa;
use dce_core::stochastic::{self, EnsembleSpec};
use serde_json::{json, Value};

use crate::config::Context;
use crate::error::{CliError, Result};
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    pub trajectories: usize,
    /// Step in units of `1/γ_m`.
    pub dt: f64,
    /// Duration in units of `1/γ_m`.
    pub duration: f64,
    pub record_every: usize,
    /// Lag samples on `[0, duration/2]`, taken from the midpoint.
    pub lags: usize,
}

impl Default for McOptions {
    fn default() -> Self {
        Self {
            trajectories: 10_000,
            dt: 1e-3,
            duration: 5.0,
            record_every: 50,
            lags: 11,
        }
    }
}

pub fn run(ctx: &Context, opts: &McOptions) -> Result<(Vec<Table>, Value)> {
    if !(opts.dt > 0.0 && opts.duration > opts.dt) || opts.record_every == 0 || opts.lags < 1 {
        return Err(CliError::Invalid("mc needs 0 < dt < duration, record_every >= 1 and lags >= 1".into()));
    }
    let inp = &ctx.inputs;
    let g = inp.gamma;
    let mut spec = EnsembleSpec::rwa_eigen(inp, opts.trajectories, opts.dt / g, opts.duration / g, ctx.seed);
    spec.record_every = opts.record_every;
    let moments = stochastic::simulate(&spec)?;

    let mut table = Table::new(
        "mc",
        &[
            "gamma_t",
            "mean1",
            "mean2",
            "V11",
            "V12",
            "V22",
            "se_mean1",
            "se_mean2",
            "se_V11",
            "se_V12",
            "se_V22",
            "V1_exact",
            "V12_exact",
            "V2_exact",
        ],
    );
    for k in 0..moments.times.len() {
        let t = moments.times[k];
        let exact = rwa::covariance(t, inp)?;
        let (m, ms, c, cs) = (
            moments.mean[k],
            moments.mean_stderr[k],
            moments.covariance[k],
            moments.covariance_stderr[k],
        );
        table.push(
            [
                t * g,
                m[0],
                m[1],
                c[(0, 0)],
                c[(0, 1)],
                c[(1, 1)],
                ms[0],
                ms[1],
                cs[(0, 0)],
                cs[(0, 1)],
                cs[(1, 1)],
                exact.v1,
                exact.v12,
                exact.v2,
            ]
            .map(Into::into)
            .to_vec(),
        );
    }

    let half = opts.duration / 2.0;
    let taus: Vec<f64> = (0..opts.lags)
        .map(|k| if opts.lags == 1 { 0.0 } else { half * k as f64 / (opts.lags - 1) as f64 } / g)
        .collect();
    let lag = stochastic::two_time_sample(&spec, half / g, &taus)?;
    let base = rwa::covariance(lag.t, inp)?;
    let lambda = [inp.lambda1(), inp.lambda2()];
    let base_m = [[base.v1, base.v12], [base.v12, base.v2]];
    let mut cols = vec!["gamma_tau".to_string()];
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        cols.push(format!("C{}{}", i + 1, j + 1));
        cols.push(format!("se_C{}{}", i + 1, j + 1));
        cols.push(format!("C{}{}_exact", i + 1, j + 1));
    }
    let mut lag_table = Table::with_columns("mc_lag", cols);
    for (k, &tau) in lag.taus.iter().enumerate() {
        let mut row = vec![(tau * g).into()];
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            // E[u(t) u(t+τ)ᵀ] = V(t) exp(Aᵀτ) with A diagonal
            let exact = base_m[i][j] * (lambda[j] * tau).exp();
            row.extend([lag.covariance[k][(i, j)].into(), lag.stderr[k][(i, j)].into(), exact.into()]);
        }
        lag_table.push(row);
    }

    let summary = json!({
        "seed": ctx.seed,
        "trajectories": opts.trajectories,
        "dt_gamma": opts.dt,
        "duration_gamma": opts.duration,
        "record_every": opts.record_every,
        "lag_base_gamma_t": lag.t * g,
        "s_eps": inp.s_eps,
        "xi": inp.xi,
        "bath_occupation": inp.nbar,
        "gamma_m": g,
        "basis": "eigen",
    });
    Ok((vec![table, lag_table], summary))
}
