//! Orchestrated studies that turn the well-posedness, energy-decay, and
//! inviscid-limit statements into pass/fail numerical reports.

use crate::diagnostics::{
    bound_check, convergence_order, decay_e0, decay_rate_fit,
};
use crate::discrete_ops::{norm_v, ComplexField};
use crate::error::{Result, SimError};
use crate::geometry::RadialGrid;
use crate::initial::bump_field;
use crate::model::ModelParams;
use crate::stepper::{run, BcVariant, Forcing, SchemeConfig};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::sync::Arc;
use std::time::Instant;

/// Auditable study outcome: every pass flag is backed by a stored metric and
/// the tolerance it was compared against.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: Map<String, Value>,
    pub cases: Vec<CaseReport>,
    pub tolerances: Map<String, Value>,
    pub pass: bool,
    pub wall_clock_secs: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CaseReport {
    pub label: String,
    pub metrics: Map<String, Value>,
    pub pass: bool,
}

fn case(label: impl Into<String>, metrics: Value, pass: bool) -> CaseReport {
    let metrics = match metrics {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    CaseReport {
        label: label.into(),
        metrics,
        pass,
    }
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn default_bump(grid: &RadialGrid) -> ComplexField {
    bump_field(grid, 1.0, 0.45, 0.25)
}

/// Maximum per-step increase of a series, as an absolute value.
fn max_step_increase(series: &[f64]) -> f64 {
    series
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0f64, f64::max)
}

/// Linear theory suite: semigroup contraction, hidden boundary regularity,
/// and the forced-problem energy inequality with η = 1/2:
/// `(1/4)‖u(t)‖²_V + λ∫‖Δu‖² + (1/2)∫‖∂ν u‖²_{Γ1}
///    <= (1/2)‖u0‖²_V + (1/2)∫‖g‖²_{Γ1} + ∫‖f‖²_V`.
pub fn linear_suite(
    grid: &RadialGrid,
    params: &ModelParams,
    scheme: &SchemeConfig,
) -> Result<ExperimentReport> {
    assert_eq!(params.kappa, 0.0);
    assert_eq!(params.beta, 0.0);
    assert_eq!(params.gamma, 0.0);
    let start = Instant::now();
    let mut cases = Vec::new();

    // (a) V-norm contraction with the dissipative first-order boundary row.
    let u0 = default_bump(grid);
    let contraction_scheme = scheme.clone().with_boundary_order(1);
    let (_, ledger) = run(grid, params, &contraction_scheme, &u0, usize::MAX)?;
    let v0 = ledger.v_norm[0];
    let worst = max_step_increase(&ledger.v_norm);
    let tol_a = 1e-10 * v0;
    cases.push(case(
        "contraction",
        json!({"max_step_increase": worst, "v0": v0, "tolerance": tol_a}),
        worst <= tol_a,
    ));

    // (a') with the second-order boundary stencil the per-step violation is
    // only discretization-small; it must shrink at order >= 1.
    let mut hs = Vec::new();
    let mut violations = Vec::new();
    for level in 0..3u32 {
        let m = grid.m * (1 << level);
        let g = RadialGrid::build(grid.dim, grid.r0, grid.r1, m)?;
        let mut s = scheme.clone().with_boundary_order(2);
        s.dt = scheme.dt / (1 << level) as f64;
        let (_, led) = run(&g, params, &s, &default_bump(&g), usize::MAX)?;
        hs.push(g.h);
        violations.push(max_step_increase(&led.v_norm).max(1e-16));
    }
    let refine_pass = if violations.iter().all(|&v| v <= 1e-12) {
        true
    } else {
        convergence_order(&hs, &violations)? >= 1.0
    };
    cases.push(case(
        "contraction_refinement",
        json!({"h": hs, "max_step_increase": violations}),
        refine_pass,
    ));

    // (b) hidden regularity: ∫‖∂ν u‖²_{Γ1} is finite and T-stable.
    let mut long = scheme.clone();
    long.t_final = 8.0;
    let (_, led) = run(grid, params, &long, &u0, usize::MAX)?;
    let idx4 = led
        .times
        .iter()
        .position(|&t| t >= 4.0 - 0.5 * long.dt)
        .expect("run reaches t=4");
    let c4 = led.cum_flux[idx4];
    let c8 = *led.cum_flux.last().unwrap();
    let rel_change = (c8 - c4).abs() / c4.max(1e-14);
    cases.push(case(
        "hidden_regularity",
        json!({"cum_flux_t4": c4, "cum_flux_t8": c8, "rel_change": rel_change}),
        c8.is_finite() && rel_change < 0.01,
    ));

    // (c) forced estimate with η = 1/2, for bump and zero initial data.
    for (label, zero_u0) in [("forced_estimate", false), ("forced_estimate_zero_u0", true)] {
        let c = forced_estimate_case(grid, params, scheme, zero_u0, label)?;
        cases.push(c);
    }

    let pass = cases.iter().all(|c| c.pass);
    Ok(ExperimentReport {
        name: "linear".into(),
        parameters: obj(json!({
            "dim": grid.dim, "m": grid.m, "lambda": params.lambda,
            "alpha": params.alpha, "dt": scheme.dt, "t_final": scheme.t_final,
        })),
        cases,
        tolerances: obj(json!({
            "contraction_per_step": 1e-10,
            "hidden_regularity_rel_change": 0.01,
            "forced_slack": "h + dt",
        })),
        pass,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    })
}

fn forced_estimate_case(
    grid: &RadialGrid,
    params: &ModelParams,
    scheme: &SchemeConfig,
    zero_u0: bool,
    label: &str,
) -> Result<CaseReport> {
    let span = grid.r1 - grid.r0;
    let r0 = grid.r0;
    let shape = ComplexField::from_fn(grid, |r| {
        C64::new((std::f64::consts::PI * (r - r0) / span).sin(), 0.0)
    });
    let shape_v = norm_v(&shape, grid);
    let amp = move |t: f64| C64::new((-t).exp(), 0.5 * (-t).exp());
    let forcing = Forcing {
        interior: {
            let span = span;
            Arc::new(move |r: f64, t: f64| {
                amp(t) * (std::f64::consts::PI * (r - r0) / span).sin()
            })
        },
        boundary: Arc::new(move |t: f64| 0.1 * amp(t)),
    };
    let mut s = scheme.clone().with_boundary_order(1).with_forcing(forcing);
    s.t_final = scheme.t_final.max(1.0);
    let u0 = if zero_u0 {
        ComplexField::zeros(grid)
    } else {
        default_bump(grid)
    };
    let (_, led) = run(grid, params, &s, &u0, usize::MAX)?;

    // RHS integrals: the forcing is separable, so ∫‖f‖²_V and ∫‖g‖²_{Γ1}
    // reduce to scalar quadratures in time.
    let v0 = led.v_norm[0];
    let mut worst = f64::NEG_INFINITY;
    let mut cum_g = 0.0;
    let mut cum_f = 0.0;
    let surface = grid.surface_measure_g1;
    let gmag = |t: f64| surface * (0.1 * amp(t)).norm_sqr();
    let fmag = |t: f64| (amp(t).norm() * shape_v).powi(2);
    for k in 1..led.times.len() {
        let (t0, t1) = (led.times[k - 1], led.times[k]);
        let dt = t1 - t0;
        cum_g += 0.5 * dt * (gmag(t0) + gmag(t1));
        cum_f += 0.5 * dt * (fmag(t0) + fmag(t1));
        let lhs = 0.25 * led.v_norm[k].powi(2)
            + params.lambda * led.cum_lap[k]
            + 0.5 * led.cum_flux[k];
        let rhs = 0.5 * v0 * v0 + 0.5 * cum_g + cum_f;
        worst = worst.max((lhs - rhs) / rhs.max(1e-12));
    }
    let slack = grid.h + s.dt;
    let final_lhs_positive = led.v_norm.last().unwrap() > &0.0 || led.cum_flux.last().unwrap() > &0.0;
    Ok(case(
        label,
        json!({"max_relative_violation": worst, "slack": slack,
               "lhs_nontrivial": final_lhs_positive}),
        worst <= slack && (!zero_u0 || final_lhs_positive),
    ))
}

/// Decay studies: for γ < 0 the pointwise bound `F(t) <= E_0 e^{-|γ|t}`,
/// for γ = 0 a positive fitted decay rate under the geometric condition.
pub fn stabilization_study(
    grid: &RadialGrid,
    params: &ModelParams,
    scheme: &SchemeConfig,
    gamma_values: &[f64],
) -> Result<ExperimentReport> {
    assert!(params.beta > 0.0 && params.kappa > 0.0 && params.lambda > 0.0);
    assert!(params.global_range_ok(), "(p, N) outside the global table");
    let start = Instant::now();
    let t_final = scheme.t_final;

    let cases: Vec<CaseReport> = gamma_values
        .par_iter()
        .map(|&gamma| -> Result<CaseReport> {
            let mut p = *params;
            p.gamma = gamma;
            let u0 = default_bump(grid);
            if u0.max_abs() == 0.0 {
                return Ok(case(
                    format!("gamma={gamma}"),
                    json!({"degenerate": true}),
                    true,
                ));
            }
            if gamma == 0.0 && !grid.geometric_condition_check(0.0).satisfied {
                return Ok(case(
                    format!("gamma={gamma}"),
                    json!({"geometric_condition": false}),
                    false,
                ));
            }
            let (_, led) = run(grid, &p, scheme, &u0, usize::MAX)?;
            if gamma < 0.0 {
                let e0 = decay_e0(&u0, grid, &p);
                let chk = bound_check(&led.times, &led.energy_f, |t| e0 * (gamma * t).exp());
                let fit = decay_rate_fit(&led.times, &led.energy_f, 1e-12)?;
                Ok(case(
                    format!("gamma={gamma}"),
                    json!({"e0": e0,
                           "max_relative_violation": chk.max_relative_violation,
                           "worst_time": chk.worst_time,
                           "fitted_rate": fit.rate, "r_squared": fit.r_squared}),
                    chk.max_relative_violation <= 0.05 && fit.rate >= gamma.abs() * 0.9,
                ))
            } else if gamma == 0.0 {
                let lo = t_final / 4.0;
                let window: Vec<(f64, f64)> = led
                    .times
                    .iter()
                    .zip(&led.energy_f)
                    .filter(|(&t, _)| t >= lo)
                    .map(|(&t, &f)| (t, f))
                    .collect();
                let times: Vec<f64> = window.iter().map(|p| p.0).collect();
                let values: Vec<f64> = window.iter().map(|p| p.1).collect();
                let fit = decay_rate_fit(&times, &values, 1e-12)?;
                Ok(case(
                    format!("gamma={gamma}"),
                    json!({"fitted_rate": fit.rate, "r_squared": fit.r_squared,
                           "window": [lo, t_final]}),
                    fit.rate > 0.0 && fit.r_squared >= 0.99,
                ))
            } else {
                // γ > 0: growth is allowed; record the fitted envelope only.
                let fit = decay_rate_fit(&led.times, &led.energy_e, 1e-12)?;
                Ok(case(
                    format!("gamma={gamma}"),
                    json!({"fitted_growth": -fit.rate}),
                    fit.rate.is_finite(),
                ))
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let pass = cases.iter().all(|c| c.pass);
    Ok(ExperimentReport {
        name: "stabilization".into(),
        parameters: obj(json!({
            "dim": grid.dim, "r0": grid.r0, "r1": grid.r1, "m": grid.m,
            "lambda": params.lambda, "alpha": params.alpha,
            "kappa": params.kappa, "beta": params.beta, "p": params.p,
            "gammas": gamma_values, "dt": scheme.dt, "t_final": t_final,
        })),
        cases,
        tolerances: obj(json!({
            "bound_violation": 0.05, "gamma0_r_squared": 0.99,
        })),
        pass,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    })
}

/// Vanishing-viscosity study: CGLE runs with λ = κ = ε against an NLS
/// reference on the same grid and step, fitting `ln‖u_ε - u‖_V` against
/// `ln ε`. First-order convergence is the claim under test.
pub fn inviscid_study(
    grid: &RadialGrid,
    params: &ModelParams,
    scheme: &SchemeConfig,
    epsilon_list: &[f64],
) -> Result<ExperimentReport> {
    if grid.dim != 2 || params.p != 3.0 {
        return Err(SimError::InsufficientData(
            "inviscid study requires the N=2 annulus with p=3".into(),
        ));
    }
    assert!(params.beta > 0.0);
    let start = Instant::now();
    // Low-wavenumber profile with a triple zero at Γ1 (hence compatible
    // data). Viscous damping of a mode saturates once ε λ k² T ~ 1, so low
    // spectral content keeps the whole epsilon range in the O(ε) regime; the
    // sharp default bump would bend the observed slope well below 1.
    let span = grid.r1 - grid.r0;
    let u0 = ComplexField::from_fn(grid, |r| {
        let s = (r - grid.r0) / span;
        C64::new(4.0 * s * (1.0 - s).powi(3), 0.0)
    });

    let mut nls = *params;
    nls.lambda = 0.0;
    nls.kappa = 0.0;
    let (ref_traj, _) = run(grid, &nls, scheme, &u0, usize::MAX)?;
    let reference = ref_traj.final_state().clone();

    let errors: Vec<f64> = epsilon_list
        .par_iter()
        .map(|&eps| -> Result<f64> {
            let mut p = *params;
            p.lambda = eps;
            p.kappa = eps;
            let (traj, _) = run(grid, &p, scheme, &u0, usize::MAX)?;
            Ok(norm_v(&(traj.final_state() - &reference), grid))
        })
        .collect::<Result<Vec<_>>>()?;

    let slope = convergence_order(epsilon_list, &errors)?;
    let cases: Vec<CaseReport> = epsilon_list
        .iter()
        .zip(&errors)
        .map(|(&eps, &err)| {
            case(
                format!("epsilon={eps}"),
                json!({"v_error": err}),
                err.is_finite(),
            )
        })
        .collect();
    let pass = (0.8..=1.2).contains(&slope) && cases.iter().all(|c| c.pass);
    Ok(ExperimentReport {
        name: "inviscid".into(),
        parameters: obj(json!({
            "dim": grid.dim, "r0": grid.r0, "r1": grid.r1, "m": grid.m,
            "beta": params.beta, "p": params.p, "epsilons": epsilon_list,
            "dt": scheme.dt, "t_final": scheme.t_final,
        })),
        cases: {
            let mut c = cases;
            c.push(case("slope", json!({"fitted_slope": slope}), (0.8..=1.2).contains(&slope)));
            c
        },
        tolerances: obj(json!({"slope_range": [0.8, 1.2]})),
        pass,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    })
}

/// Dynamic vs Wentzell formulations on the same physical problem: the
/// max-in-time V-distance must vanish under joint (h, dt) refinement at
/// order >= 1.
pub fn equivalence_study(
    grid: &RadialGrid,
    params: &ModelParams,
    scheme: &SchemeConfig,
    levels: usize,
) -> Result<ExperimentReport> {
    assert!(levels >= 3);
    assert!(scheme.feedback.is_identity());
    let start = Instant::now();

    let results: Vec<(f64, f64)> = (0..levels)
        .into_par_iter()
        .map(|level| -> Result<(f64, f64)> {
            let m = grid.m * (1 << level);
            let g = RadialGrid::build(grid.dim, grid.r0, grid.r1, m)?;
            let mut s_dyn = scheme.clone();
            s_dyn.dt = scheme.dt / (1 << level) as f64;
            s_dyn.bc_variant = BcVariant::Dynamic;
            let mut s_wen = s_dyn.clone();
            s_wen.bc_variant = BcVariant::Wentzell;
            let u0 = default_bump(&g);
            let (td, _) = run(&g, params, &s_dyn, &u0, 1)?;
            let (tw, _) = run(&g, params, &s_wen, &u0, 1)?;
            let d = td
                .states
                .iter()
                .zip(&tw.states)
                .map(|(a, b)| norm_v(&(a - b), &g))
                .fold(0.0f64, f64::max);
            Ok((g.h, d))
        })
        .collect::<Result<Vec<_>>>()?;

    let hs: Vec<f64> = results.iter().map(|r| r.0).collect();
    let ds: Vec<f64> = results.iter().map(|r| r.1.max(1e-16)).collect();
    let order = convergence_order(&hs, &ds)?;
    let trivially_zero = results.iter().all(|r| r.1 <= 1e-14);
    let pass = trivially_zero || order >= 1.0;
    let cases = results
        .iter()
        .map(|&(h, d)| case(format!("h={h}"), json!({"max_v_distance": d}), d.is_finite()))
        .chain(std::iter::once(case(
            "order",
            json!({"observed_order": order}),
            pass,
        )))
        .collect();
    Ok(ExperimentReport {
        name: "equivalence".into(),
        parameters: obj(json!({
            "dim": grid.dim, "m0": grid.m, "dt0": scheme.dt,
            "t_final": scheme.t_final, "levels": levels,
            "kappa": params.kappa, "beta": params.beta, "p": params.p,
        })),
        cases,
        tolerances: obj(json!({"min_order": 1.0})),
        pass,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    })
}

/// Method of manufactured solutions on the forced problem: the target
/// `u*(r,t) = e^{-t} sin(π(r-r0)/(r1-r0))` determines the interior forcing
/// and boundary input exactly, so the endpoint V-error measures the scheme's
/// combined space-time order.
pub fn manufactured_solution_study(
    grid: &RadialGrid,
    params: &ModelParams,
    scheme: &SchemeConfig,
    levels: usize,
) -> Result<ExperimentReport> {
    assert!(levels >= 3);
    let start = Instant::now();

    let results: Vec<(f64, f64)> = (0..levels)
        .into_par_iter()
        .map(|level| -> Result<(f64, f64)> {
            let m = grid.m * (1 << level);
            let g = RadialGrid::build(grid.dim, grid.r0, grid.r1, m)?;
            let mut s = scheme.clone();
            s.dt = scheme.dt / (1 << level) as f64;
            s.forcing = Some(manufactured_forcing(&g, params, s.bc_variant));
            let u0 = target_profile(&g);
            let (traj, _) = run(&g, params, &s, &u0, usize::MAX)?;
            let t_end = *traj.times.last().unwrap();
            let exact = ComplexField {
                values: target_profile(&g)
                    .values
                    .iter()
                    .map(|&z| (-t_end).exp() * z)
                    .collect(),
            };
            Ok((g.h, norm_v(&(traj.final_state() - &exact), &g)))
        })
        .collect::<Result<Vec<_>>>()?;

    let hs: Vec<f64> = results.iter().map(|r| r.0).collect();
    let errs: Vec<f64> = results.iter().map(|r| r.1.max(1e-16)).collect();
    let order = convergence_order(&hs, &errs)?;
    let required = if scheme.boundary_order == 2 { 1.8 } else { 0.8 };
    let pass = order >= required;
    let cases = results
        .iter()
        .map(|&(h, e)| case(format!("h={h}"), json!({"v_error": e}), e.is_finite()))
        .chain(std::iter::once(case(
            "order",
            json!({"observed_order": order, "required": required}),
            pass,
        )))
        .collect();
    Ok(ExperimentReport {
        name: "manufactured".into(),
        parameters: obj(json!({
            "dim": grid.dim, "m0": grid.m, "dt0": scheme.dt,
            "t_final": scheme.t_final, "levels": levels,
            "boundary_order": scheme.boundary_order,
            "lambda": params.lambda, "alpha": params.alpha,
        })),
        cases,
        tolerances: obj(json!({"min_order": required})),
        pass,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    })
}

fn target_profile(grid: &RadialGrid) -> ComplexField {
    let span = grid.r1 - grid.r0;
    let r0 = grid.r0;
    ComplexField::from_fn(grid, |r| {
        C64::new((std::f64::consts::PI * (r - r0) / span).sin(), 0.0)
    })
}

/// Forcing pair making `u* = e^{-t} φ(r)` an exact solution of the forced
/// system, boundary law included.
pub fn manufactured_forcing(
    grid: &RadialGrid,
    params: &ModelParams,
    variant: BcVariant,
) -> Forcing {
    let span = grid.r1 - grid.r0;
    let r0 = grid.r0;
    let k = std::f64::consts::PI / span;
    let nm1 = (grid.dim - 1) as f64;
    let mu = params.diffusion();
    let nl = params.nl_coeff();
    let (p, gamma) = (params.p, params.gamma);

    let phi = move |r: f64| (k * (r - r0)).sin();
    let phi_r = move |r: f64| k * (k * (r - r0)).cos();
    let phi_rr = move |r: f64| -k * k * (k * (r - r0)).sin();
    let lap_phi = move |r: f64| phi_rr(r) + if nm1 > 0.0 { nm1 / r * phi_r(r) } else { 0.0 };

    let interior = Arc::new(move |r: f64, t: f64| {
        let et = (-t).exp();
        let u = et * phi(r);
        // u*_t - (λ+iα)Δu* + (κ+iβ)|u*|^{p-1}u* - γ u*
        C64::new(-u, 0.0) - mu * et * lap_phi(r) + nl * u.abs().powf(p - 1.0) * u
            - gamma * C64::new(u, 0.0)
    });

    let r1 = grid.r1;
    let boundary: Arc<dyn Fn(f64) -> C64 + Send + Sync> = match variant {
        // ∂ν u* + u*_t at Γ1; φ(r1) = 0 so the trace derivative vanishes.
        BcVariant::Dynamic => Arc::new(move |t: f64| C64::new((-t).exp() * phi_r(r1), 0.0)),
        // ∂ν u* + (λ+iα)Δu* - F(u*) at Γ1 (F(0) = 0).
        BcVariant::Wentzell => Arc::new(move |t: f64| {
            (-t).exp() * (C64::new(phi_r(r1), 0.0) + mu * lap_phi(r1))
        }),
    };
    Forcing { interior, boundary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stepper::NonlinearTreatment;

    fn linear_params(dim: u32) -> ModelParams {
        ModelParams {
            lambda: 1.0,
            alpha: 1.0,
            kappa: 0.0,
            beta: 0.0,
            gamma: 0.0,
            p: 3.0,
            dim,
        }
    }

    #[test]
    fn linear_suite_passes_on_default_setup() {
        let grid = RadialGrid::build(1, 0.0, 1.0, 64).unwrap();
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 5e-3, 1.0);
        let rep = linear_suite(&grid, &linear_params(1), &scheme).unwrap();
        assert!(rep.pass, "{}", serde_json::to_string_pretty(&rep).unwrap());
    }

    #[test]
    fn equivalence_zero_data_is_exact() {
        let grid = RadialGrid::build(1, 0.0, 1.0, 32).unwrap();
        let params = linear_params(1);
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 1e-2, 0.1);
        let u0 = ComplexField::zeros(&grid);
        let (td, _) = run(&grid, &params, &scheme, &u0, 1).unwrap();
        let mut sw = scheme.clone();
        sw.bc_variant = BcVariant::Wentzell;
        let (tw, _) = run(&grid, &params, &sw, &u0, 1).unwrap();
        for (a, b) in td.states.iter().zip(&tw.states) {
            assert_eq!(a.max_abs(), 0.0);
            assert_eq!(b.max_abs(), 0.0);
        }
    }

    #[test]
    fn manufactured_linear_second_order() {
        let grid = RadialGrid::build(1, 0.0, 1.0, 32).unwrap();
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 1e-2, 0.5);
        let rep =
            manufactured_solution_study(&grid, &linear_params(1), &scheme, 4).unwrap();
        assert!(rep.pass, "{}", serde_json::to_string_pretty(&rep).unwrap());
    }

    #[test]
    fn manufactured_first_order_boundary_still_converges() {
        // The target profile has a vanishing second derivative at Γ1, so the
        // first-order stencil loses no visible accuracy on it; the study must
        // still report convergence, not divergence.
        let grid = RadialGrid::build(1, 0.0, 1.0, 32).unwrap();
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 1e-2, 0.5).with_boundary_order(1);
        let rep =
            manufactured_solution_study(&grid, &linear_params(1), &scheme, 4).unwrap();
        let order = rep
            .cases
            .iter()
            .find(|c| c.label == "order")
            .and_then(|c| c.metrics["observed_order"].as_f64())
            .unwrap();
        assert!(order > 0.8, "first-order boundary should converge: {order}");
    }

    #[test]
    fn inviscid_requires_annulus() {
        let grid = RadialGrid::build(1, 0.0, 1.0, 32).unwrap();
        let mut p = linear_params(1);
        p.beta = 1.0;
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 1e-2, 0.1);
        assert!(inviscid_study(&grid, &p, &scheme, &[0.1, 0.01, 0.001]).is_err());
    }

    #[test]
    fn reports_roundtrip_through_json() {
        let grid = RadialGrid::build(1, 0.0, 1.0, 32).unwrap();
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 1e-2, 0.5)
            .with_treatment(NonlinearTreatment::ExplicitAb2);
        let rep = manufactured_solution_study(&grid, &linear_params(1), &scheme, 3).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        let back: ExperimentReport = serde_json::from_str(&text).unwrap();
        assert_eq!(rep, back);
    }
}
