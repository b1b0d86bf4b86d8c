//! Two-time correlators, second-order coherence and the Mandel parameter of
//! the `±π/4` phonon operator `b̃ = ũ₁ + iũ₂`.
//!
//! Two routes are kept side by side. The `paper` functions evaluate the
//! published moment formulas term by term. The `exact` and `gauss` functions
//! use Gaussian regression on the RWA covariance, including the `O(ξ²)`
//! cross term; the two agree identically when `C = 1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rwa::{self, CovariancePair, RwaInputs};

/// Populations below this are treated as zero.
pub const MIN_POPULATION: f64 = 1e-30;

/// Base time of a two-time correlator. `Steady` drops every `e^{2λᵢt}` term
/// analytically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseTime {
    At(f64),
    Steady,
}

impl BaseTime {
    fn check(self, inp: &RwaInputs) -> Result<()> {
        match self {
            BaseTime::At(t) if !(t >= 0.0 && t.is_finite()) => Err(Error::NegativeTime(t)),
            BaseTime::At(_) => inp.denominators().map(|_| ()),
            BaseTime::Steady => inp.require_stable().map(|_| ()),
        }
    }

    fn covariance(self, inp: &RwaInputs) -> Result<CovariancePair> {
        match self {
            BaseTime::At(t) => rwa::covariance(t, inp),
            BaseTime::Steady => rwa::steady_covariance(inp),
        }
    }
}

/// `(⟨b̃†(t) b̃(t+τ)⟩, ⟨b̃†(t) b̃†(t+τ)⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoTime {
    pub normal: Complex64,
    pub anomalous: Complex64,
}

fn check_lag(tau: f64) -> Result<()> {
    if tau >= 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeTime(tau))
    }
}

/// Published two-time correlators, evaluated verbatim.
pub fn two_time_paper(t: BaseTime, tau: f64, inp: &RwaInputs) -> Result<TwoTime> {
    t.check(inp)?;
    check_lag(tau)?;
    let (plus, minus) = inp.denominators()?;
    let (s, c, nbar) = (inp.s_eps, inp.noise_factor, inp.nbar);
    let (l1, l2) = (inp.lambda1(), inp.lambda2());

    let a1 = (2.0 * c * nbar - 2.0 * s) / plus * (l1 * tau).exp() / 4.0;
    let a2 = (2.0 * c * nbar + 2.0 * s) / minus * (l2 * tau).exp() / 4.0;
    let (b1, b2) = match t {
        BaseTime::Steady => (0.0, 0.0),
        BaseTime::At(t) => {
            let th = (1.0 + 2.0 * nbar) / 4.0;
            (
                th * (1.0 - c + 2.0 * s) / plus * (l1 * (2.0 * t + tau)).exp(),
                th * (1.0 - c - 2.0 * s) / minus * (l2 * (2.0 * t + tau)).exp(),
            )
        }
    };
    Ok(TwoTime {
        normal: Complex64::new(a1 + a2 + b1 + b2, 0.0),
        anomalous: Complex64::new(a1 - a2 + b1 - b2, 0.0),
    })
}

/// Two-time correlators by Gaussian regression on the RWA covariance:
/// `ũᵢ(t+τ)` regresses as `e^{λᵢτ}ũᵢ(t)` in the `±π/4` basis.
pub fn two_time_exact(t: BaseTime, tau: f64, inp: &RwaInputs) -> Result<TwoTime> {
    t.check(inp)?;
    check_lag(tau)?;
    let cov = t.covariance(inp)?;
    let e1 = (inp.lambda1() * tau).exp();
    let e2 = (inp.lambda2() * tau).exp();
    // ⟨ũᵢ ũⱼ⟩ = Ṽᵢⱼ + (i/2)εᵢⱼ/... with [ũ₁, ũ₂] = i/2
    let p = Complex64::new(cov.v1 - 0.25, -cov.v12);
    let q = Complex64::new(cov.v2 - 0.25, cov.v12);
    Ok(TwoTime {
        normal: p * e1 + q * e2,
        anomalous: p * e1 - q * e2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Paper,
    Exact,
}

fn two_time(route: Route, t: BaseTime, tau: f64, inp: &RwaInputs) -> Result<TwoTime> {
    match route {
        Route::Paper => two_time_paper(t, tau, inp),
        Route::Exact => two_time_exact(t, tau, inp),
    }
}

/// `g²(τ) = 1 + |⟨b̃†b̃†(τ)⟩|²/n² + |⟨b̃†b̃(τ)⟩|²/n²` with `n` the `τ = 0`
/// normal correlator of the same route.
pub fn g2(route: Route, t: BaseTime, tau: f64, inp: &RwaInputs) -> Result<f64> {
    let n = two_time(route, t, 0.0, inp)?.normal.re;
    if !(n.abs() >= MIN_POPULATION) {
        return Err(Error::ZeroPopulation(n));
    }
    let c = two_time(route, t, tau, inp)?;
    Ok(1.0 + (c.anomalous.norm_sqr() + c.normal.norm_sqr()) / (n * n))
}

/// `g²(0) = 2 + |⟨b̃²⟩|²/n²` from the equal-time covariance.
pub fn g2_zero_from_covariance(cov: &CovariancePair) -> Result<f64> {
    let n = cov.v1 + cov.v2 - 0.5;
    if !(n.abs() >= MIN_POPULATION) {
        return Err(Error::ZeroPopulation(n));
    }
    Ok(2.0 + anomalous_moment_sq(cov) / (n * n))
}

/// `|⟨b̃²⟩|² = (Ṽ₁ − Ṽ₂)² + 4Ṽ₁₂²`.
fn anomalous_moment_sq(cov: &CovariancePair) -> f64 {
    let d = cov.v1 - cov.v2;
    d * d + 4.0 * cov.v12 * cov.v12
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationSeries {
    /// `None` for the steady state.
    pub t: Option<f64>,
    pub taus: Vec<f64>,
    pub normal: Vec<Complex64>,
    pub anomalous: Vec<Complex64>,
    pub g2: Vec<f64>,
    /// `g²(τ)/g²(0)`.
    pub g2_normalized: Vec<f64>,
}

pub fn correlation_series(route: Route, t: BaseTime, taus: &[f64], inp: &RwaInputs) -> Result<CorrelationSeries> {
    let g0 = g2(route, t, 0.0, inp)?;
    let mut normal = Vec::with_capacity(taus.len());
    let mut anomalous = Vec::with_capacity(taus.len());
    let mut g = Vec::with_capacity(taus.len());
    for &tau in taus {
        let c = two_time(route, t, tau, inp)?;
        normal.push(c.normal);
        anomalous.push(c.anomalous);
        g.push(g2(route, t, tau, inp)?);
    }
    Ok(CorrelationSeries {
        t: match t {
            BaseTime::At(t) => Some(t),
            BaseTime::Steady => None,
        },
        taus: taus.to_vec(),
        normal,
        anomalous,
        g2_normalized: g.iter().map(|v| v / g0).collect(),
        g2: g,
    })
}

/// `count` log-spaced lags over `[10⁻³, 10]/γ_m`.
pub fn default_lag_grid(gamma: f64, count: usize) -> Vec<f64> {
    log_grid(1e-3 / gamma, 10.0 / gamma, count)
}

pub fn log_grid(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let (a, b) = (start.ln(), end.ln());
            (0..count)
                .map(|k| {
                    if k == count - 1 {
                        end
                    } else {
                        (a + (b - a) * k as f64 / (count - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// Deterministic/stochastic moments entering the published Mandel formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MandelMoments {
    /// `⟨b̃_d†² b̃_d²⟩`.
    pub dd_fourth: f64,
    /// `⟨b̃_s† b̃_s⟩`.
    pub ss_number: f64,
    /// `⟨b̃_s²⟩`.
    pub ss_anomalous: Complex64,
    /// `⟨b̃_d† b̃_d⟩`.
    pub dd_number: f64,
    /// `⟨b̃_d²⟩`.
    pub dd_anomalous: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl MandelMoments {
    pub fn number(&self) -> f64 {
        self.dd_number + self.ss_number
    }

    /// `⟨b̃†² b̃²⟩` assembled from the decomposition.
    pub fn fourth(&self) -> f64 {
        let ns = self.ss_number;
        self.dd_fourth
            + 2.0 * ns * ns
            + self.ss_anomalous.norm_sqr()
            + 2.0 * (Complex64::new(self.dd_anomalous, 0.0) * self.ss_anomalous.conj()).re
            + 4.0 * self.dd_number * ns
    }
}

pub fn mandel_moments(t: f64, inp: &RwaInputs) -> Result<MandelMoments> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::NegativeTime(t));
    }
    inp.denominators()?;
    let (gamma, c, nbar) = (inp.gamma, inp.noise_factor, inp.nbar);
    let (l1, l2) = (inp.lambda1(), inp.lambda2());
    let th = 1.0 + 2.0 * nbar;
    let e1 = (2.0 * l1 * t).exp();
    let e2 = (2.0 * l2 * t).exp();
    let decay = (-gamma * t).exp();
    // (e^{2λt} − 1)/(2λ), finite as λ → 0
    let growth = |l: f64| if l == 0.0 { t } else { (2.0 * l * t).exp_m1() / (2.0 * l) };
    let (g1, g2) = (growth(l1), growth(l2));

    let n_th = nbar;
    let n2_th = 2.0 * nbar * nbar + nbar;
    let r1 = (3.0 + 6.0 * n_th + 6.0 * n2_th) / 16.0;
    let r2 = -(1.0 + 2.0 * n_th) / 2.0;
    let r3 = (10.0 + 4.0 * n_th + 4.0 * n2_th) / 16.0;

    Ok(MandelMoments {
        dd_fourth: r1 * (e1 * e1 + e2 * e2) + r2 * decay * (e1 + e2) + r3 * decay * decay,
        ss_number: gamma / 4.0 * c * th * (g1 + g2) + 0.5 * (decay - 1.0),
        ss_anomalous: Complex64::new(gamma / 4.0 * c * th * (g1 - g2), 0.5 * (c - 1.0) * th * (decay - 1.0)),
        dd_number: th / 4.0 * (e1 + e2) - 0.5 * decay,
        dd_anomalous: th / 4.0 * (e1 - e2),
        r1,
        r2,
        r3,
    })
}

/// `Q = (⟨b̃†²b̃²⟩ − n²)/n` from the published moment decomposition.
pub fn mandel_paper(t: f64, inp: &RwaInputs) -> Result<f64> {
    let m = mandel_moments(t, inp)?;
    let n = m.number();
    if !(n.abs() >= MIN_POPULATION) {
        return Err(Error::ZeroPopulation(n));
    }
    Ok((m.fourth() - n * n) / n)
}

/// Gaussian-state Mandel parameter `Q = n + |⟨b̃²⟩|²/n`.
pub fn mandel_gauss(t: BaseTime, inp: &RwaInputs) -> Result<f64> {
    t.check(inp)?;
    let cov = t.covariance(inp)?;
    let n = cov.v1 + cov.v2 - 0.5;
    if !(n.abs() >= MIN_POPULATION) {
        return Err(Error::ZeroPopulation(n));
    }
    Ok(n + anomalous_moment_sq(&cov) / n)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MandelSeries {
    pub times: Vec<f64>,
    /// `None` where the published formula divides by zero.
    pub q_paper: Vec<Option<f64>>,
    pub q_gauss: Vec<Option<f64>>,
    pub moments: Vec<MandelMoments>,
}

pub fn mandel_series(times: &[f64], inp: &RwaInputs) -> Result<MandelSeries> {
    let mut out = MandelSeries {
        times: times.to_vec(),
        q_paper: Vec::with_capacity(times.len()),
        q_gauss: Vec::with_capacity(times.len()),
        moments: Vec::with_capacity(times.len()),
    };
    for &t in times {
        out.moments.push(mandel_moments(t, inp)?);
        out.q_paper.push(optional(mandel_paper(t, inp))?);
        out.q_gauss.push(optional(mandel_gauss(BaseTime::At(t), inp))?);
    }
    Ok(out)
}

fn optional(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::ZeroPopulation(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ideal(s: f64) -> RwaInputs {
        RwaInputs::new(s, 0.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn steady_correlators_at_044() {
        let c = two_time_paper(BaseTime::Steady, 0.0, &ideal(0.44)).unwrap();
        assert_relative_eq!(c.anomalous.re, -0.44 / (1.0 - 4.0 * 0.44 * 0.44), max_relative = 1e-14);
        assert!((c.anomalous.re + 1.950355).abs() < 1e-6);
        assert!((c.normal.re - 1.71631).abs() < 1e-5);
        assert_eq!(c.normal.im, 0.0);
    }

    #[test]
    fn thermal_oscillator_limit() {
        let inp = RwaInputs::new(0.0, 0.0, 0.3, 2.0).unwrap();
        for &tau in &[0.0, 0.1, 1.0, 7.0] {
            for route in [Route::Paper, Route::Exact] {
                let c = two_time(route, BaseTime::Steady, tau, &inp).unwrap();
                assert_relative_eq!(c.normal.re, 0.3 * (-tau).exp(), max_relative = 1e-14);
                assert!(c.anomalous.norm() < 1e-15);
            }
        }
    }

    #[test]
    fn correlators_vanish_at_long_lag() {
        let c = two_time_paper(BaseTime::Steady, 500.0, &ideal(0.3)).unwrap();
        assert!(c.normal.norm() < 1e-20 && c.anomalous.norm() < 1e-20);
        let g = g2(Route::Paper, BaseTime::Steady, 500.0, &ideal(0.3)).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn g2_zero_two_routes() {
        let inp = ideal(0.44);
        let a = g2(Route::Paper, BaseTime::Steady, 0.0, &inp).unwrap();
        let b = g2_zero_from_covariance(&rwa::steady_covariance(&inp).unwrap()).unwrap();
        let expect = 2.0 + (1.950355f64 / 1.71631).powi(2);
        assert!((a - expect).abs() < 1e-4, "{a}");
        assert!((a - b).abs() < 1e-12);
        assert!((a - 3.2913).abs() < 1e-3);
    }

    #[test]
    fn g2_is_monotone_bunched() {
        for &s in &[0.1, 0.22, 0.44, -0.44] {
            for &nbar in &[0.0, 0.01, 0.5] {
                let inp = RwaInputs::new(s, 0.0, nbar, 1.0).unwrap();
                let series = correlation_series(Route::Paper, BaseTime::Steady, &default_lag_grid(1.0, 400), &inp).unwrap();
                assert!(series.g2.windows(2).all(|w| w[1] <= w[0] + 1e-14));
                assert!(series.g2_normalized.iter().all(|&v| v <= 1.0 + 1e-14));
                assert!(series.g2[0] >= 2.0);
            }
        }
    }

    #[test]
    fn paper_and_exact_routes_agree_without_noise_anisotropy() {
        let inp = RwaInputs::new(0.37, 0.0, 0.2, 1.5).unwrap();
        for &t in &[0.0, 0.3, 2.0] {
            for &tau in &[0.0, 0.5, 3.0] {
                let p = two_time_paper(BaseTime::At(t), tau, &inp).unwrap();
                let e = two_time_exact(BaseTime::At(t), tau, &inp).unwrap();
                assert!((p.normal - e.normal).norm() < 1e-13);
                assert!((p.anomalous - e.anomalous).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn exact_route_reproduces_phonon_number_with_anisotropy() {
        let inp = RwaInputs::new(0.2, 0.1, 0.05, 1.0).unwrap();
        for &t in &[0.0, 0.4, 5.0] {
            let e = two_time_exact(BaseTime::At(t), 0.0, &inp).unwrap();
            let n = rwa::phonon_numbers(t, &inp).unwrap().total;
            assert!((e.normal.re - n).abs() < 1e-12);
            assert!(e.normal.im.abs() < 1e-15);
        }
    }

    #[test]
    fn mandel_at_thermal_start() {
        let inp = RwaInputs::new(0.44, 0.0, 0.01, 1.0).unwrap();
        assert_relative_eq!(mandel_gauss(BaseTime::At(0.0), &inp).unwrap(), 0.01, epsilon = 1e-10);
        // the published decomposition is a thermal state at t = 0 as well
        assert_relative_eq!(mandel_paper(0.0, &inp).unwrap(), 0.01, epsilon = 1e-10);
        let m = mandel_moments(0.0, &inp).unwrap();
        assert_relative_eq!(m.dd_number, 0.01, epsilon = 1e-15);
        assert_eq!(m.ss_number, 0.0);
        assert_eq!(m.ss_anomalous, Complex64::new(0.0, 0.0));
        assert_relative_eq!(2.0 * m.r1 + 2.0 * m.r2 + m.r3, 2.0 * 0.01 * 0.01, epsilon = 1e-15);
    }

    #[test]
    fn mandel_paper_divides_by_zero_in_vacuum() {
        assert!(matches!(mandel_paper(0.0, &ideal(0.3)), Err(Error::ZeroPopulation(_))));
        assert!(matches!(mandel_gauss(BaseTime::At(0.0), &ideal(0.3)), Err(Error::ZeroPopulation(_))));
    }

    #[test]
    fn mandel_steady_value() {
        let q = mandel_gauss(BaseTime::Steady, &ideal(0.44)).unwrap();
        assert!((q - (1.71631 + 1.950355f64.powi(2) / 1.71631)).abs() < 1e-4);
        assert!((q - 3.9326).abs() < 1e-4);
        let qp = mandel_paper(200.0, &ideal(0.44)).unwrap();
        assert!((qp - q).abs() < 1e-9);
    }

    #[test]
    fn unmodulated_mandel_is_thermal() {
        let inp = RwaInputs::new(0.0, 0.01, 0.2, 1.0).unwrap();
        for &t in &[0.1, 1.0, 10.0] {
            let q = mandel_gauss(BaseTime::At(t), &inp).unwrap();
            assert!((q - (0.2 + 1e-4 * (1.0 - (-t).exp()))).abs() < 1e-7);
        }
    }

    #[test]
    fn lag_grid_shape() {
        let g = default_lag_grid(2.0, 400);
        assert_eq!(g.len(), 400);
        assert_relative_eq!(g[0], 5e-4, max_relative = 1e-14);
        assert_eq!(g[399], 5.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn mandel_routes_coincide(s in -0.49f64..0.49, nbar in 0.001f64..1.0, xi in 0.0f64..0.05, t in 0.0f64..8.0) {
            let inp = RwaInputs::new(s, xi, nbar, 1.0).unwrap();
            let qp = mandel_paper(t, &inp).unwrap();
            let qg = mandel_gauss(BaseTime::At(t), &inp).unwrap();
            prop_assert!((qp - qg).abs() <= 1e-9 * qg.abs().max(1.0), "{} vs {}", qp, qg);
            let m = mandel_moments(t, &inp).unwrap();
            let n = rwa::phonon_numbers(t, &inp).unwrap().total;
            prop_assert!((m.number() - n).abs() < 1e-12);
        }

        #[test]
        fn gaussian_bounds(s in -0.49f64..0.49, nbar in 0.0f64..1.0, xi in 0.0f64..0.05, t in 0.01f64..8.0) {
            let inp = RwaInputs::new(s, xi, nbar, 1.0).unwrap();
            prop_assert!(g2(Route::Exact, BaseTime::At(t), 0.0, &inp).unwrap() >= 2.0 - 1e-12);
            prop_assert!(g2(Route::Paper, BaseTime::Steady, 0.0, &inp).unwrap() >= 2.0 - 1e-12);
            prop_assert!(mandel_gauss(BaseTime::At(t), &inp).unwrap() > 0.0);
        }

        #[test]
        fn detuning_side_invariance(s in -0.49f64..0.49, nbar in 0.001f64..1.0, t in 0.0f64..8.0, tau in 0.0f64..8.0) {
            let inp = RwaInputs::new(s, 0.0, nbar, 1.0).unwrap();
            let mir = inp.mirrored();
            for route in [Route::Paper, Route::Exact] {
                let a = two_time(route, BaseTime::At(t), tau, &inp).unwrap();
                let b = two_time(route, BaseTime::At(t), tau, &mir).unwrap();
                prop_assert!((a.normal.norm() - b.normal.norm()).abs() < 1e-12);
                prop_assert!((a.anomalous.norm() - b.anomalous.norm()).abs() < 1e-12);
                let ga = g2(route, BaseTime::At(t), tau, &inp).unwrap();
                let gb = g2(route, BaseTime::At(t), tau, &mir).unwrap();
                prop_assert!((ga - gb).abs() <= 1e-12 * ga);
            }
            let qa = mandel_paper(t, &inp).unwrap();
            let qb = mandel_paper(t, &mir).unwrap();
            prop_assert!((qa - qb).abs() <= 1e-12 * qa.abs().max(1.0));
        }

        #[test]
        fn anomalous_moment_two_routes(s in -0.49f64..0.49, nbar in 0.0f64..1.0) {
            let inp = RwaInputs::new(s, 0.0, nbar, 1.0).unwrap();
            let c = two_time_paper(BaseTime::Steady, 0.0, &inp).unwrap();
            let cov = rwa::steady_covariance(&inp).unwrap();
            prop_assert!((c.anomalous.norm() - (cov.v1 - cov.v2).abs()).abs() < 1e-10);
            prop_assert!((c.normal.re - rwa::steady_phonon_number(&inp).unwrap()).abs() < 1e-10);
        }
    }
}
