//! Energy bookkeeping and rate/order estimation.
//!
//! The ledger tracks, along a trajectory, the instantaneous norms and the
//! cumulative time integrals entering the two energy functionals
//!
//! ```text
//! F(t) = (α/2)‖∇u‖² + (β/(p+1))‖u‖_{p+1}^{p+1}
//! E(t) = F(t) + (ακ+βλ)/(p+1)‖u‖_{p+1,Γ1}^{p+1}  [- (αγ/2)‖u‖²_{Γ1} when γ<=0]
//!        + α∫‖u_t‖²_{Γ1} + αλ∫‖Δu‖² + κβ∫‖u‖_{2p}^{2p}
//! ```
//!
//! For γ <= 0 the theory gives E(t) <= E(0); for γ < 0 it gives the decay
//! bound F(t) <= E_0 e^{-|γ|t}. The boundary L² term enters E only in the
//! γ <= 0 variant, exactly as the two printed definitions differ.

use crate::discrete_ops::{
    l2_sq_interior, lp_pow_boundary, lp_pow_interior, norm_v, ComplexField,
};
use crate::error::{Result, SimError};
use crate::geometry::RadialGrid;
use crate::model::ModelParams;

/// Time series of norms, cumulative integrals, and the derived energies.
#[derive(Debug, Clone, Default)]
pub struct EnergyLedger {
    pub times: Vec<f64>,
    pub v_norm: Vec<f64>,
    pub l2_interior: Vec<f64>,
    /// `‖u‖_{L^{p+1}(Ω)}^{p+1}`.
    pub lp1_pow_interior: Vec<f64>,
    /// `‖u‖²_{L²(Γ1)}`.
    pub bd_l2_sq: Vec<f64>,
    /// `‖u‖_{L^{p+1}(Γ1)}^{p+1}`.
    pub bd_lp1_pow: Vec<f64>,
    /// Cumulative `∫‖u_t‖²_{L²(Γ1)}`.
    pub cum_ut_bd: Vec<f64>,
    /// Cumulative `∫‖Δu‖²_{L²(Ω)}`.
    pub cum_lap: Vec<f64>,
    /// Cumulative `∫‖u‖_{L^{2p}(Ω)}^{2p}`.
    pub cum_l2p: Vec<f64>,
    /// Cumulative `∫‖∂ν u‖²_{L²(Γ1)}` — the hidden regularity.
    pub cum_flux: Vec<f64>,
    pub energy_e: Vec<f64>,
    pub energy_f: Vec<f64>,
}

/// Integrand values at the Crank-Nicolson step midpoint `(u^n + u^{n+1})/2`,
/// accumulated by one rectangle per step. The midpoint is where the scheme's
/// exact energy balance lives: stiff modes that the trapezoid rule rings
/// between endpoints cancel there, so endpoint sampling would grossly
/// overestimate the dissipation integrals.
#[derive(Debug, Clone, Copy)]
pub struct StepIncrements {
    /// `‖u_t‖²_{L²(Γ1)}` from the backward difference of the trace.
    pub ut_sq_bd: f64,
    /// `‖Δ_h u_mid‖²` with interior node weights.
    pub lap_sq_mid: f64,
    /// `‖u_mid‖_{L^{2p}(Ω)}^{2p}`.
    pub l2p_mid: f64,
    /// `‖∂ν u_mid‖²_{L²(Γ1)}`.
    pub flux_sq_mid: f64,
}

/// Instantaneous quantities handed to the ledger once per accepted step.
pub struct LedgerSample<'a> {
    pub t: f64,
    pub state: &'a ComplexField,
    /// Midpoint integrands for this step; `None` at t = 0.
    pub increments: Option<StepIncrements>,
}

impl EnergyLedger {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Appends one sample, advancing the cumulative integrals.
    pub fn record(&mut self, s: LedgerSample, grid: &RadialGrid, params: &ModelParams) {
        let p = params.p;
        let v = norm_v(s.state, grid);
        let lp1 = lp_pow_interior(s.state, grid, p + 1.0);
        let trace = s.state.values[grid.m];
        let bd2 = lp_pow_boundary(trace, grid, 2.0);
        let bdp1 = lp_pow_boundary(trace, grid, p + 1.0);

        let (cum_ut, cum_lap, cum_l2p, cum_flux) = match (s.increments, self.times.last()) {
            (Some(inc), Some(&t_prev)) => {
                let dt = s.t - t_prev;
                let k = self.len() - 1;
                (
                    self.cum_ut_bd[k] + dt * inc.ut_sq_bd,
                    self.cum_lap[k] + dt * inc.lap_sq_mid,
                    self.cum_l2p[k] + dt * inc.l2p_mid,
                    self.cum_flux[k] + dt * inc.flux_sq_mid,
                )
            }
            _ => (0.0, 0.0, 0.0, 0.0),
        };

        let f_val = 0.5 * params.alpha * v * v + params.beta / (p + 1.0) * lp1;
        let mut e_val = f_val
            + (params.alpha * params.kappa + params.beta * params.lambda) / (p + 1.0) * bdp1
            + params.alpha * cum_ut
            + params.alpha * params.lambda * cum_lap
            + params.kappa * params.beta * cum_l2p;
        if params.gamma <= 0.0 {
            e_val += -0.5 * params.alpha * params.gamma * bd2;
        }

        self.times.push(s.t);
        self.v_norm.push(v);
        self.l2_interior.push(l2_sq_interior(s.state, grid).sqrt());
        self.lp1_pow_interior.push(lp1);
        self.bd_l2_sq.push(bd2);
        self.bd_lp1_pow.push(bdp1);
        self.cum_ut_bd.push(cum_ut);
        self.cum_lap.push(cum_lap);
        self.cum_l2p.push(cum_l2p);
        self.cum_flux.push(cum_flux);
        self.energy_e.push(e_val);
        self.energy_f.push(f_val);
    }
}

impl EnergyLedger {
    pub fn new() -> Self {
        Self::default()
    }
}

/// `F(t)` from a single state, for callers outside a run.
pub fn energy_f(state: &ComplexField, grid: &RadialGrid, params: &ModelParams) -> f64 {
    let v = norm_v(state, grid);
    0.5 * params.alpha * v * v
        + params.beta / (params.p + 1.0) * lp_pow_interior(state, grid, params.p + 1.0)
}

/// The `E_0` constant of the exponential decay bound:
/// `E_0 = (α/2)‖∇u0‖² + (β/(p+1))‖u0‖_{p+1}^{p+1} - (αγ/2)‖u0‖²_{Γ1}
///        + (ακ+βλ)/(p+1)‖u0‖_{p+1,Γ1}^{p+1}`.
pub fn decay_e0(u0: &ComplexField, grid: &RadialGrid, params: &ModelParams) -> f64 {
    let trace = u0.values[grid.m];
    energy_f(u0, grid, params)
        - 0.5 * params.alpha * params.gamma * lp_pow_boundary(trace, grid, 2.0)
        + (params.alpha * params.kappa + params.beta * params.lambda) / (params.p + 1.0)
            * lp_pow_boundary(trace, grid, params.p + 1.0)
}

/// Result of a log-linear decay fit.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DecayFit {
    /// Negated slope of `ln(value)` against `t`.
    pub rate: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares line on `(t, ln value)` restricted to values above `floor`.
pub fn decay_rate_fit(times: &[f64], values: &[f64], floor: f64) -> Result<DecayFit> {
    assert_eq!(times.len(), values.len());
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(_, &v)| v > floor)
        .map(|(&t, &v)| (t, v.ln()))
        .collect();
    if pts.len() < 10 {
        return Err(SimError::InsufficientData(format!(
            "decay fit needs >= 10 samples above floor, got {}",
            pts.len()
        )));
    }
    let (slope, intercept, r2) = least_squares(&pts);
    Ok(DecayFit {
        rate: -slope,
        intercept,
        r_squared: r2,
    })
}

/// Maximum relative excursion of a sample series above a bound curve.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct BoundCheck {
    pub max_relative_violation: f64,
    pub worst_time: f64,
}

pub fn bound_check(times: &[f64], values: &[f64], bound: impl Fn(f64) -> f64) -> BoundCheck {
    assert_eq!(times.len(), values.len());
    let floor = 1e-12;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_time = f64::NAN;
    for (&t, &v) in times.iter().zip(values) {
        let b = bound(t);
        let rel = (v - b) / b.max(floor);
        if rel > worst {
            worst = rel;
            worst_time = t;
        }
    }
    BoundCheck {
        max_relative_violation: worst,
        worst_time,
    }
}

/// Least-squares slope of `ln error` against `ln h` — the observed order.
pub fn convergence_order(h_list: &[f64], error_list: &[f64]) -> Result<f64> {
    assert_eq!(h_list.len(), error_list.len());
    if h_list.len() < 3 {
        return Err(SimError::InsufficientData(
            "convergence fit needs >= 3 levels".into(),
        ));
    }
    if error_list.iter().any(|&e| e <= 0.0) {
        return Err(SimError::InsufficientData(
            "convergence fit needs positive errors".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = h_list
        .iter()
        .zip(error_list)
        .map(|(&h, &e)| (h.ln(), e.ln()))
        .collect();
    Ok(least_squares(&pts).0)
}

fn least_squares(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    (slope, intercept, r2)
}
