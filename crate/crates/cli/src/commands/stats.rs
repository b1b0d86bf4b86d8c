use dce_core::lyapunov;
use dce_core::rwa;
use dce_core::stats::{self, BaseTime, Route};
use serde_json::{json, Value};

use super::optional;
use crate::config::Context;
use crate::error::{CliError, Result};
use crate::table::{Cell, Table};

/// Steady-state `g²(τ)` on the default lag grid and `Q(t)` on
/// `γ_m t ∈ [0, t_end]`, plus a summary document.
pub fn run(ctx: &Context, t_end: f64, points: usize, lags: usize) -> Result<(Vec<Table>, Value)> {
    if !(t_end > 0.0) || points < 2 || lags < 2 {
        return Err(CliError::Invalid("stats needs t_end > 0, points >= 2 and lags >= 2".into()));
    }
    let inp = &ctx.inputs;
    let taus = stats::default_lag_grid(inp.gamma, lags);
    let series = stats::correlation_series(Route::Paper, BaseTime::Steady, &taus, inp)?;
    let mut g2 = Table::new("g2", &["gamma_tau", "g2", "g2_normalized"]);
    for ((&tau, &v), &n) in taus.iter().zip(&series.g2).zip(&series.g2_normalized) {
        g2.push(vec![(tau * inp.gamma).into(), v.into(), n.into()]);
    }

    let times: Vec<f64> = lyapunov::uniform_grid(0.0, t_end, points).iter().map(|gt| gt / inp.gamma).collect();
    let q = stats::mandel_series(&times, inp)?;
    let mut mandel = Table::new("mandel", &["gamma_t", "Q_paper", "Q_gauss"]);
    for ((&t, &qp), &qg) in times.iter().zip(&q.q_paper).zip(&q.q_gauss) {
        mandel.push(vec![(t * inp.gamma).into(), Cell::opt(qp), Cell::opt(qg)]);
    }

    let cov = rwa::steady_covariance(inp)?;
    let summary = json!({
        "s_eps": inp.s_eps,
        "noise_factor": inp.noise_factor,
        "bath_occupation": inp.nbar,
        "n_ss": rwa::steady_phonon_number(inp)?,
        "g2_0": stats::g2(Route::Paper, BaseTime::Steady, 0.0, inp)?,
        "g2_0_from_covariance": optional(stats::g2_zero_from_covariance(&cov))?,
        "g2_0_exact_route": stats::g2(Route::Exact, BaseTime::Steady, 0.0, inp)?,
        "Q_gauss_ss": stats::mandel_gauss(BaseTime::Steady, inp)?,
        "Q_paper_t0": optional(stats::mandel_paper(0.0, inp))?,
        "Q_gauss_t0": optional(stats::mandel_gauss(BaseTime::At(0.0), inp))?,
    });
    Ok((vec![g2, mandel], summary))
}
