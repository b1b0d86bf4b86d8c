use dce_core::linalg::{eigen_rotation, Mat2};
use dce_core::lyapunov::{self, period_mean, ModulatedModel};
use dce_core::rwa;

use crate::config::Context;
use crate::error::{CliError, Result};
use crate::table::{Cell, Table};

pub const COLUMNS: [&str; 11] = ["t_seconds", "gamma_t", "Vxx", "Vxp", "Vpp", "V1", "V2", "n", "S1", "S2", "basis"];

/// Samples per modulation period for beyond-RWA runs.
pub const SAMPLES_PER_PERIOD: usize = 64;
/// RK4 steps per output sample for beyond-RWA runs.
pub const SUBSTEPS: usize = 4;

fn check(t_end: f64, points: usize) -> Result<()> {
    if !(t_end > 0.0 && t_end.is_finite()) || points < 2 {
        return Err(CliError::Invalid(format!("need t_end > 0 and at least 2 points (got {t_end}, {points})")));
    }
    Ok(())
}

/// Closed-form RWA covariance on `points` samples of `γ_m t ∈ [0, t_end]`.
/// `Vxx`, `Vxp`, `Vpp` are rotating-frame quadratures.
pub fn rwa_table(ctx: &Context, t_end: f64, points: usize) -> Result<Table> {
    check(t_end, points)?;
    let inp = &ctx.inputs;
    let r = eigen_rotation();
    let mut table = Table::new("evolve", &COLUMNS);
    for gt in lyapunov::uniform_grid(0.0, t_end, points) {
        let t = gt / inp.gamma;
        let c = rwa::covariance(t, inp)?;
        let rot = r * Mat2::new(c.v1, c.v12, c.v12, c.v2) * r.transpose();
        table.push(vec![
            t.into(),
            gt.into(),
            rot[(0, 0)].into(),
            rot[(0, 1)].into(),
            rot[(1, 1)].into(),
            c.v1.into(),
            c.v2.into(),
            (c.v1 + c.v2 - 0.5).into(),
            (4.0 * c.v1 - 1.0).into(),
            (4.0 * c.v2 - 1.0).into(),
            "rotating".into(),
        ]);
    }
    Ok(table)
}

pub fn scaled_model(ctx: &Context) -> Result<ModulatedModel> {
    let inp = &ctx.inputs;
    Ok(ModulatedModel::scaled(
        ctx.omega_ratio,
        inp.s_eps,
        ctx.modulation_depth(),
        inp.nbar,
        inp.xi,
    )?)
}

/// Beyond-RWA run in scaled units (`γ_m = 1`), sampled at
/// [`SAMPLES_PER_PERIOD`] points per modulation period, with the
/// period-averaged `n` alongside.
pub fn beyond_rwa_table(ctx: &Context, t_end: f64) -> Result<Table> {
    check(t_end, 2)?;
    let model = scaled_model(ctx)?;
    let grid = model.period_grid(t_end, SAMPLES_PER_PERIOD);
    let lab = lyapunov::integrate(
        &model.drift(),
        &model.diffusion(),
        &lyapunov::CovarianceState::thermal(model.nbar, lyapunov::Basis::Lab),
        &grid,
        SUBSTEPS,
    )?;
    let rot = lyapunov::rotate(&lab, model.shifted_freq())?;
    let eig = lyapunov::eigenbasis(&rot)?;
    let n = eig.phonon_numbers();
    let n_avg = period_mean(&n, SAMPLES_PER_PERIOD);
    let mut columns: Vec<String> = COLUMNS.iter().map(|c| c.to_string()).collect();
    columns.push("n_period_mean".into());
    let mut table = Table::with_columns("evolve_beyond_rwa", columns);
    for k in 0..grid.len() {
        let (v, e) = (rot.states[k], eig.states[k]);
        table.push(vec![
            grid[k].into(),
            grid[k].into(),
            v[(0, 0)].into(),
            v[(0, 1)].into(),
            v[(1, 1)].into(),
            e[(0, 0)].into(),
            e[(1, 1)].into(),
            n[k].into(),
            (4.0 * e[(0, 0)] - 1.0).into(),
            (4.0 * e[(1, 1)] - 1.0).into(),
            "rotating".into(),
            Cell::opt(n_avg[k]),
        ]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Overrides;

    #[test]
    fn starts_thermal() {
        let ctx = Context::scaled(Overrides::default()).unwrap();
        let t = rwa_table(&ctx, 5.0, 11).unwrap();
        let n = t.column("n").unwrap();
        assert!((n[0].unwrap() - 0.01).abs() < 1e-15);
        assert_eq!(t.rows.len(), 11);
    }

    #[test]
    fn rotating_columns_reconstruct_eigen_variances() {
        let ctx = Context::scaled(Overrides::default()).unwrap();
        let t = rwa_table(&ctx, 5.0, 6).unwrap();
        for row in &t.rows {
            let (xx, xp, pp) = (row[2].as_f64().unwrap(), row[3].as_f64().unwrap(), row[4].as_f64().unwrap());
            let v1 = row[5].as_f64().unwrap();
            assert!(((xx + pp) / 2.0 - xp - v1).abs() < 1e-14);
        }
    }

    #[test]
    fn beyond_rwa_has_period_mean() {
        let ctx = Context::scaled(Overrides::default()).unwrap();
        let t = beyond_rwa_table(&ctx, 0.5).unwrap();
        let avg = t.column("n_period_mean").unwrap();
        assert!(avg[0].is_none());
        assert!(avg[avg.len() / 2].is_some());
    }
}
