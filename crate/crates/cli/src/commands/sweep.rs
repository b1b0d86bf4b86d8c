//! Parameter sweeps over the Cartesian product of the requested axes.
//! Rows are ordered lexicographically in the axis indices, first axis
//! slowest.

use dce_core::params::PhysicalParams;
use dce_core::{rwa, spectrum, stats, RwaInputs};
use rayon::prelude::*;

use super::optional;
use crate::config::{resolve_inputs, Context, Overrides, Scale, SweepAxis, SweepOptions};
use crate::error::{CliError, Result};
use crate::table::{Cell, Table};

pub const AXES: [&str; 6] = ["s_eps", "nbar", "xi", "eps", "P_L", "detuning"];
pub const OBSERVABLES: [&str; 8] = ["n_ss", "S1_ss", "S2_ss", "n_cr", "T_cr", "FWHM", "g2_0", "Q_ss"];

fn is_physical(axis: &str) -> bool {
    matches!(axis, "eps" | "P_L" | "detuning")
}

/// Parses `name=min:max:count[:linear|log]`.
pub fn parse_axis(spec: &str) -> Result<SweepAxis> {
    let bad = || CliError::Invalid(format!("axis `{spec}` must look like name=min:max:count[:linear|log]"));
    let (name, rest) = spec.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = rest.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(bad());
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let scale = match parts.get(3).map(|s| s.trim()) {
        None | Some("linear") => Scale::Linear,
        Some("log") => Scale::Log,
        Some(_) => return Err(bad()),
    };
    Ok(SweepAxis {
        name: name.trim().to_string(),
        min: num(parts[0])?,
        max: num(parts[1])?,
        count: parts[2].trim().parse().map_err(|_| bad())?,
        scale,
    })
}

pub fn axis_values(axis: &SweepAxis) -> Result<Vec<f64>> {
    if axis.count == 0 || !axis.min.is_finite() || !axis.max.is_finite() {
        return Err(CliError::Invalid(format!("axis `{}` needs finite bounds and count >= 1", axis.name)));
    }
    if axis.count == 1 {
        return Ok(vec![axis.min]);
    }
    let n = (axis.count - 1) as f64;
    match axis.scale {
        Scale::Linear => Ok((0..axis.count).map(|k| axis.min + (axis.max - axis.min) * k as f64 / n).collect()),
        Scale::Log => {
            if !(axis.min > 0.0 && axis.max > 0.0) {
                return Err(CliError::Invalid(format!("log axis `{}` needs positive bounds", axis.name)));
            }
            Ok(stats::log_grid(axis.min, axis.max, axis.count))
        }
    }
}

fn validate(opts: &SweepOptions, ctx: &Context) -> Result<()> {
    if opts.axes.is_empty() {
        return Err(CliError::Invalid("sweep needs at least one axis".into()));
    }
    if opts.observables.is_empty() {
        return Err(CliError::Invalid("sweep needs at least one observable".into()));
    }
    for a in &opts.axes {
        if !AXES.contains(&a.name.as_str()) {
            return Err(CliError::Invalid(format!("unknown axis `{}`; expected one of {AXES:?}", a.name)));
        }
        if is_physical(&a.name) && ctx.params.is_none() {
            return Err(CliError::Invalid(format!("axis `{}` needs --config", a.name)));
        }
        if opts.axes.iter().filter(|b| b.name == a.name).count() > 1 {
            return Err(CliError::Invalid(format!("axis `{}` given twice", a.name)));
        }
    }
    for o in &opts.observables {
        if !OBSERVABLES.contains(&o.as_str()) {
            return Err(CliError::Invalid(format!("unknown observable `{o}`; expected one of {OBSERVABLES:?}")));
        }
        if o == "T_cr" && ctx.params.is_none() {
            return Err(CliError::Invalid("observable `T_cr` needs --config".into()));
        }
    }
    Ok(())
}

fn point_inputs(ctx: &Context, axes: &[SweepAxis], values: &[f64]) -> Result<(Option<f64>, RwaInputs)> {
    let mut params: Option<PhysicalParams> = ctx.params;
    let mut ov: Overrides = ctx.overrides;
    for (a, &v) in axes.iter().zip(values) {
        match a.name.as_str() {
            "s_eps" => ov.s_eps = Some(v),
            "nbar" => ov.nbar = Some(v),
            "xi" => ov.xi = Some(v),
            "eps" => params.as_mut().expect("validated").modulation_depth = v,
            "P_L" => params.as_mut().expect("validated").laser_power = v,
            "detuning" => params.as_mut().expect("validated").detuning = v,
            _ => unreachable!("validated axis"),
        }
    }
    let (derived, inputs) = resolve_inputs(params.as_ref(), &ov)?;
    Ok((derived.map(|d| d.mech_freq), inputs))
}

fn observable(name: &str, inp: &RwaInputs, mech_freq: Option<f64>) -> Result<Option<f64>> {
    match name {
        "n_ss" => optional(rwa::steady_phonon_number(inp)),
        "S1_ss" => Ok(optional(rwa::steady_squeezing(inp))?.map(|s| s.s1)),
        "S2_ss" => Ok(optional(rwa::steady_squeezing(inp))?.map(|s| s.s2)),
        "n_cr" => Ok(optional(rwa::critical_occupation(inp.s_eps, inp.xi))?.map(|c| c.n_cr)),
        "T_cr" => optional(rwa::critical_temperature(inp.s_eps, inp.xi, mech_freq.expect("validated"))),
        "FWHM" => {
            let res = spectrum::evaluate(&spectrum::default_grid(), inp)?;
            Ok(optional(spectrum::fwhm(&res))?.map(|l| l.width))
        }
        "g2_0" => optional(stats::g2(stats::Route::Paper, stats::BaseTime::Steady, 0.0, inp)),
        "Q_ss" => optional(stats::mandel_gauss(stats::BaseTime::Steady, inp)),
        _ => unreachable!("validated observable"),
    }
}

pub fn run(ctx: &Context, opts: &SweepOptions) -> Result<Table> {
    validate(opts, ctx)?;
    let grids: Vec<Vec<f64>> = opts.axes.iter().map(axis_values).collect::<Result<_>>()?;
    let total: usize = grids.iter().map(Vec::len).product();
    let points: Vec<Vec<f64>> = (0..total)
        .map(|mut flat| {
            let mut idx = vec![0; grids.len()];
            for (d, g) in grids.iter().enumerate().rev() {
                idx[d] = flat % g.len();
                flat /= g.len();
            }
            idx.iter().enumerate().map(|(d, &i)| grids[d][i]).collect()
        })
        .collect();

    let rows: Vec<Vec<Cell>> = points
        .par_iter()
        .map(|values| -> Result<Vec<Cell>> {
            let (mech_freq, inp) = point_inputs(ctx, &opts.axes, values)?;
            let mut row: Vec<Cell> = values.iter().map(|&v| Cell::Num(v)).collect();
            if !inp.is_stable() {
                row.push("unstable".into());
                row.extend(opts.observables.iter().map(|_| Cell::Empty));
                return Ok(row);
            }
            row.push("ok".into());
            for o in &opts.observables {
                row.push(Cell::opt(observable(o, &inp, mech_freq)?));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let mut columns: Vec<String> = opts.axes.iter().map(|a| a.name.clone()).collect();
    columns.push("status".into());
    columns.extend(opts.observables.iter().cloned());
    let mut table = Table::with_columns("sweep", columns);
    for r in rows {
        table.push(r);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::scaled(Overrides::default()).unwrap()
    }

    fn opts(axes: &[&str], obs: &[&str]) -> SweepOptions {
        SweepOptions {
            axes: axes.iter().map(|a| parse_axis(a).unwrap()).collect(),
            observables: obs.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn n_ss_increases_with_s_eps() {
        let t = run(&ctx(), &opts(&["s_eps=0:0.49:50"], &["n_ss"])).unwrap();
        let n: Vec<f64> = t.column("n_ss").unwrap().into_iter().map(Option::unwrap).collect();
        assert!(n.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn marginal_point_is_unstable() {
        let t = run(&ctx(), &opts(&["s_eps=0.4:0.6:3"], &["n_ss", "FWHM"])).unwrap();
        let status: Vec<&Cell> = t.rows.iter().map(|r| &r[1]).collect();
        assert_eq!(status, [&Cell::from("ok"), &Cell::from("unstable"), &Cell::from("unstable")]);
        assert_eq!(t.rows[1][2], Cell::Empty);
    }

    #[test]
    fn row_order_is_lexicographic() {
        let t = run(&ctx(), &opts(&["s_eps=0.1:0.2:2", "nbar=0:1:3"], &["n_ss"])).unwrap();
        let firsts: Vec<f64> = t.rows.iter().map(|r| r[0].as_f64().unwrap()).collect();
        let seconds: Vec<f64> = t.rows.iter().map(|r| r[1].as_f64().unwrap()).collect();
        assert_eq!(firsts, [0.1, 0.1, 0.1, 0.2, 0.2, 0.2]);
        assert_eq!(seconds, [0.0, 0.5, 1.0, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn squeezing_sign_change_brackets_steady_boundary() {
        // at ξ = 0 the steady squeezing of the first quadrature ends at n̄ = s
        let t = run(
            &Context::scaled(Overrides {
                s_eps: Some(0.3),
                ..Overrides::default()
            })
            .unwrap(),
            &opts(&["nbar=0:0.6:61"], &["S1_ss", "n_cr"]),
        )
        .unwrap();
        let n: Vec<f64> = t.column("nbar").unwrap().into_iter().map(Option::unwrap).collect();
        let s1: Vec<f64> = t.column("S1_ss").unwrap().into_iter().map(Option::unwrap).collect();
        let k = s1.iter().position(|&v| v >= 0.0).unwrap();
        assert!(n[k - 1] < 0.3 && n[k] >= 0.3 - 1e-12);
        let n_cr = t.column("n_cr").unwrap()[0].unwrap();
        assert!(n_cr < n[k - 1]);
    }

    #[test]
    fn log_axis_and_errors() {
        assert_eq!(axis_values(&parse_axis("nbar=0.01:1:3:log").unwrap()).unwrap().len(), 3);
        assert!(axis_values(&parse_axis("nbar=0:1:3:log").unwrap()).is_err());
        assert!(parse_axis("nbar=0:1").is_err());
        assert!(run(&ctx(), &opts(&["P_L=1e-6:1e-5:2"], &["n_ss"])).is_err());
        assert!(run(&ctx(), &opts(&["s_eps=0:0.4:2"], &["bogus"])).is_err());
        assert!(run(&ctx(), &opts(&["s_eps=0:0.4:2"], &["T_cr"])).is_err());
    }
}
