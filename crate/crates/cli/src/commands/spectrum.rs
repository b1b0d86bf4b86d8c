use dce_core::spectrum;
use serde_json::{json, Value};

use super::optional;
use crate::config::Context;
use crate::error::{CliError, Result};
use crate::table::Table;

pub fn run(ctx: &Context, half_width: f64, points: usize) -> Result<(Vec<Table>, Value)> {
    if !(half_width > 0.0) || points < 3 || points.is_multiple_of(2) {
        return Err(CliError::Invalid("spectrum needs half_width > 0 and an odd number of points >= 3".into()));
    }
    let grid = spectrum::symmetric_grid(half_width, points);
    let res = spectrum::evaluate(&grid, &ctx.inputs)?;
    let mut table = Table::new("spectrum", &["omega_tilde", "Sxx_times_gamma", "Sxx_normalized"]);
    for ((&w, &v), &n) in grid.iter().zip(&res.scaled).zip(&res.normalized) {
        table.push(vec![w.into(), v.into(), n.into()]);
    }
    let lw = optional(spectrum::fwhm(&res))?;
    let mut summary = json!({
        "s_eps": ctx.inputs.s_eps,
        "peak_omega_tilde": res.peak_omega,
        "peak_Sxx_times_gamma": res.peak_value,
        "fwhm_omega_tilde": lw.map(|l| l.width),
        "fwhm_rad_s": lw.map(|l| l.width_rad_s),
        "non_central_peak": lw.map(|l| l.non_central_peak),
    });
    if let Some(d) = &ctx.derived {
        summary["casimir_centers"] = json!(spectrum::casimir_center(d));
    }
    Ok((vec![table], summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Overrides;

    #[test]
    fn unmodulated_width_is_gamma() {
        let ctx = Context::scaled(Overrides {
            s_eps: Some(0.0),
            ..Overrides::default()
        })
        .unwrap();
        let (_, s) = run(&ctx, 5.0, 4001).unwrap();
        assert!((s["fwhm_omega_tilde"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn even_point_count_rejected() {
        let ctx = Context::scaled(Overrides::default()).unwrap();
        assert!(matches!(run(&ctx, 5.0, 4000), Err(CliError::Invalid(_))));
    }
}
