//! Datasets behind the four published figures, at their caption
//! parameters. The noise parameter `ξ` is zero unless `--xi` is given.

use dce_core::lyapunov::{self, period_mean, ModulatedModel};
use dce_core::stats::{self, BaseTime, Route};
use dce_core::{rwa, spectrum, RwaInputs};

use super::evolve::{SAMPLES_PER_PERIOD, SUBSTEPS};
use crate::config::Context;
use crate::error::{CliError, Result};
use crate::table::{Cell, Table};

pub const S_VALUES: [f64; 2] = [0.22, 0.44];
pub const FIG3_NBAR: [f64; 3] = [0.01, 0.35, 0.5];
pub const FIG4_NBAR: [f64; 2] = [0.01, 0.5];
pub const FIG5_S: [f64; 3] = [0.0, 0.22, 0.44];
/// `γ_m t` range of the time-domain figures.
pub const T_END: f64 = 60.0;
pub const T_POINTS: usize = 601;
/// `γ_m t` range of the beyond-RWA comparisons.
pub const BEYOND_T_END: f64 = 10.0;

fn inputs(ctx: &Context, s: f64, nbar: f64) -> Result<RwaInputs> {
    Ok(RwaInputs::new(s, ctx.overrides.xi.unwrap_or(0.0), nbar, ctx.gamma())?)
}

fn label(prefix: &str, s: f64, nbar: Option<f64>) -> String {
    match nbar {
        Some(n) => format!("{prefix}_s{s}_n{n}"),
        None => format!("{prefix}_s{s}"),
    }
}

fn time_grid() -> Vec<f64> {
    lyapunov::uniform_grid(0.0, T_END, T_POINTS)
}

pub fn figure(index: u8, ctx: &Context) -> Result<Vec<Table>> {
    match (index, ctx.beyond_rwa) {
        (2, false) => Ok(vec![fig2(ctx)?]),
        (2, true) => Ok(vec![fig2(ctx)?, beyond(ctx, "fig2b", 0.0, false)?]),
        (3, false) => Ok(vec![fig3(ctx)?]),
        (3, true) => Ok(vec![fig3(ctx)?, beyond(ctx, "fig3c", 0.01, true)?]),
        (4, false) => fig4(ctx),
        (5, false) => Ok(vec![fig5(ctx)?]),
        (4 | 5, true) => Err(CliError::Invalid(format!("figure {index} has no beyond-RWA variant"))),
        _ => Err(CliError::Invalid(format!("unknown figure {index}; expected 2, 3, 4 or 5"))),
    }
}

fn fig2(ctx: &Context) -> Result<Table> {
    let mut cols = vec!["gamma_t".to_string(), "t_seconds".to_string()];
    let ins: Vec<RwaInputs> = S_VALUES.iter().map(|&s| inputs(ctx, s, 0.0)).collect::<Result<_>>()?;
    cols.extend(S_VALUES.iter().map(|&s| label("n_casimir", s, None)));
    let mut table = Table::with_columns("fig2", cols);
    for gt in time_grid() {
        let t = gt / ctx.gamma();
        let mut row: Vec<Cell> = vec![gt.into(), t.into()];
        for inp in &ins {
            row.push(rwa::phonon_numbers(t, inp)?.casimir.into());
        }
        table.push(row);
    }
    Ok(table)
}

fn fig3(ctx: &Context) -> Result<Table> {
    let mut cols = vec!["gamma_t".to_string(), "t_seconds".to_string()];
    let mut ins = Vec::new();
    for &s in &S_VALUES {
        for &n in &FIG3_NBAR {
            cols.push(label("S1", s, Some(n)));
            cols.push(label("S2", s, Some(n)));
            ins.push(inputs(ctx, s, n)?);
        }
    }
    let mut table = Table::with_columns("fig3", cols);
    for gt in time_grid() {
        let t = gt / ctx.gamma();
        let mut row: Vec<Cell> = vec![gt.into(), t.into()];
        for inp in &ins {
            let sq = rwa::squeezing(t, inp)?;
            row.push(sq.s1.into());
            row.push(sq.s2.into());
        }
        table.push(row);
    }
    Ok(table)
}

fn fig4(ctx: &Context) -> Result<Vec<Table>> {
    let combos: Vec<(f64, f64)> = S_VALUES.iter().flat_map(|&s| FIG4_NBAR.iter().map(move |&n| (s, n))).collect();
    let ins: Vec<RwaInputs> = combos.iter().map(|&(s, n)| inputs(ctx, s, n)).collect::<Result<_>>()?;

    let lags = stats::default_lag_grid(1.0, 400);
    let mut cols = vec!["gamma_tau".to_string()];
    cols.extend(combos.iter().map(|&(s, n)| label("g2_normalized", s, Some(n))));
    let mut g2 = Table::with_columns("fig4a", cols);
    let series: Vec<_> = ins
        .iter()
        .map(|inp| {
            let taus: Vec<f64> = lags.iter().map(|l| l / inp.gamma).collect();
            stats::correlation_series(Route::Paper, BaseTime::Steady, &taus, inp)
        })
        .collect::<dce_core::Result<_>>()?;
    for (k, &gt) in lags.iter().enumerate() {
        let mut row: Vec<Cell> = vec![gt.into()];
        row.extend(series.iter().map(|s| Cell::Num(s.g2_normalized[k])));
        g2.push(row);
    }

    let mut cols = vec!["gamma_t".to_string()];
    for &(s, n) in &combos {
        cols.push(label("Q_paper", s, Some(n)));
        cols.push(label("Q_gauss", s, Some(n)));
    }
    let mut q = Table::with_columns("fig4b", cols);
    for gt in time_grid() {
        let mut row: Vec<Cell> = vec![gt.into()];
        for inp in &ins {
            let t = gt / inp.gamma;
            row.push(stats::mandel_paper(t, inp)?.into());
            row.push(stats::mandel_gauss(BaseTime::At(t), inp)?.into());
        }
        q.push(row);
    }
    Ok(vec![g2, q])
}

fn fig5(ctx: &Context) -> Result<Table> {
    let grid = spectrum::default_grid();
    let mut cols = vec!["omega_tilde".to_string()];
    cols.extend(FIG5_S.iter().map(|&s| label("Sxx_normalized", s, None)));
    let curves: Vec<_> = FIG5_S
        .iter()
        .map(|&s| -> Result<_> { Ok(spectrum::evaluate(&grid, &inputs(ctx, s, ctx.inputs.nbar)?)?) })
        .collect::<Result<_>>()?;
    let mut table = Table::with_columns("fig5", cols);
    for (k, &w) in grid.iter().enumerate() {
        let mut row: Vec<Cell> = vec![w.into()];
        row.extend(curves.iter().map(|c| Cell::Num(c.normalized[k])));
        table.push(row);
    }
    Ok(table)
}

/// RWA against the full modulated model at `s_ε = 0.44`, scaled units.
fn beyond(ctx: &Context, name: &str, nbar: f64, squeezing: bool) -> Result<Table> {
    let xi = ctx.overrides.xi.unwrap_or(0.0);
    let model = ModulatedModel::scaled(ctx.omega_ratio, 0.44, ctx.modulation_depth(), nbar, xi)?;
    let traj = model.run(BEYOND_T_END, SAMPLES_PER_PERIOD, SUBSTEPS)?;
    let inp = model.rwa_inputs()?;
    let values: Vec<f64> = if squeezing {
        traj.quadrature_variances()
            .expect("eigen basis")
            .iter()
            .map(|v| 4.0 * v.0 - 1.0)
            .collect()
    } else {
        traj.phonon_numbers()
    };
    let avg = period_mean(&values, SAMPLES_PER_PERIOD);
    let cols: &[&str] = if squeezing {
        &["gamma_t", "S1_rwa", "S1_beyond", "S1_beyond_period_mean"]
    } else {
        &["gamma_t", "n_rwa", "n_beyond", "n_beyond_period_mean"]
    };
    let mut table = Table::new(name, cols);
    for (k, &t) in traj.times.iter().enumerate() {
        let reference = if squeezing {
            rwa::squeezing(t, &inp)?.s1
        } else {
            rwa::phonon_numbers(t, &inp)?.total
        };
        table.push(vec![t.into(), reference.into(), values[k].into(), Cell::opt(avg[k])]);
    }
    Ok(table)
}
