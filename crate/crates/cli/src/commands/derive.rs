use dce_core::params::{self, RegimeThresholds};
use dce_core::{rwa, spectrum};
use serde_json::{json, Value};

use super::optional;
use crate::config::Context;
use crate::error::Result;

/// Derived-parameter report with the regime audit.
pub fn report(ctx: &Context) -> Result<Value> {
    let inp = &ctx.inputs;
    let steady = optional(rwa::steady_squeezing(inp))?;
    let crit = optional(rwa::critical_occupation(inp.s_eps, inp.xi))?;
    let t_cr = match &ctx.derived {
        Some(d) => optional(rwa::critical_temperature(inp.s_eps, inp.xi, d.mech_freq))?,
        None => None,
    };
    let mut doc = json!({
        "s_eps": inp.s_eps,
        "xi": inp.xi,
        "noise_factor": inp.noise_factor,
        "bath_occupation": inp.nbar,
        "gamma_m": inp.gamma,
        "lambda1": inp.lambda1(),
        "lambda2": inp.lambda2(),
        "stability": params::stability(inp.s_eps),
        "n_ss": optional(rwa::steady_phonon_number(inp))?,
        "S1_ss": steady.map(|s| s.s1),
        "S2_ss": steady.map(|s| s.s2),
        "n_cr": crit.map(|c| c.n_cr),
        "T_cr_K": t_cr,
    });
    if let (Some(p), Some(d)) = (&ctx.params, &ctx.derived) {
        let regime = params::regime_report(p, d, &RegimeThresholds::default());
        let obj = doc.as_object_mut().expect("object");
        obj.insert("regime_warnings".into(), json!(regime.has_warnings()));
        obj.insert("physical".into(), json!(p));
        obj.insert("derived".into(), json!(d));
        obj.insert("s_eps_from_power".into(), json!(params::s_eps_from_power(p)));
        obj.insert("casimir_centers".into(), json!(spectrum::casimir_center(d)));
        obj.insert("regime".into(), json!(regime));
    }
    Ok(doc)
}
