//! Crank-Nicolson IMEX time integration with interchangeable boundary
//! treatments.
//!
//! The stiff linear part `(λ+iα)Δ_h + γ` is integrated implicitly by the
//! trapezoid rule; the power nonlinearity is extrapolated (AB2) or corrected
//! once (one Picard sweep). Two boundary rows are available at Γ1:
//!
//! * `dynamic`:  `(u^{n+1}_M - u^n_M)/dt + D_ν((u^{n+1}+u^n)/2) = g_b`,
//!   folded into the matrix for the identity feedback; for nonlinear
//!   feedback the row becomes `u_t = g⁻¹(g_b - D_ν u)` resolved by an outer
//!   fixed-point sweep.
//! * `wentzell`: `D_ν u^{n+1} + (λ+iα)Δ_h^{os} u^{n+1} = F(u_M) + g_b`,
//!   the recast boundary law with the Laplacian trace made implicit and the
//!   nonlinearity explicit, matching the interior IMEX split.
//!
//! With the first-order, flux-consistent normal derivative the dynamic
//! variant inherits the discrete summation-by-parts structure, so the linear
//! semigroup contracts the V-norm to round-off.

use crate::diagnostics::{EnergyLedger, LedgerSample, StepIncrements};
use crate::discrete_ops::{
    lap_sq_interior, laplacian_apply, lp_pow_interior, normal_derivative, ComplexField,
};
use crate::error::{Result, SimError};
use crate::geometry::{BoundaryEnd, RadialGrid};
use crate::linsolve::{bordered_solve, dense_solve, thomas_solve, to_dense, TridiagonalSystem};
use crate::model::{nonlinearity, FeedbackSpec, ModelParams};
use num_complex::Complex64 as C64;
use std::sync::Arc;

/// Norm guard: any field exceeding this aborts the run as a blow-up.
pub const BLOWUP_GUARD: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcVariant {
    Dynamic,
    Wentzell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonlinearTreatment {
    /// Adams-Bashforth-2 extrapolation of the power term, Euler bootstrap.
    ExplicitAb2,
    /// One Picard correction: predict with `N(u^n)`, redo with the midpoint.
    Picard1,
}

type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> C64 + Send + Sync>;
type TimeFn = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

/// Optional interior forcing `f(r, t)` and boundary input `g_b(t)` for the
/// forced linear problems.
#[derive(Clone)]
pub struct Forcing {
    pub interior: SpaceTimeFn,
    pub boundary: TimeFn,
}

impl Forcing {
    pub fn interior_only(f: SpaceTimeFn) -> Self {
        Self {
            interior: f,
            boundary: Arc::new(|_| C64::default()),
        }
    }
}

/// Time-integration configuration.
#[derive(Clone)]
pub struct SchemeConfig {
    pub bc_variant: BcVariant,
    pub dt: f64,
    pub t_final: f64,
    /// Boundary stencil order at Γ1: 1 keeps the system tridiagonal (and the
    /// dynamic row exactly dissipative), 2 adds one bordered entry.
    pub boundary_order: u8,
    pub nonlinear_treatment: NonlinearTreatment,
    pub feedback: FeedbackSpec,
    pub forcing: Option<Forcing>,
}

impl SchemeConfig {
    pub fn new(bc_variant: BcVariant, dt: f64, t_final: f64) -> Self {
        assert!(dt > 0.0 && t_final >= dt);
        Self {
            bc_variant,
            dt,
            t_final,
            boundary_order: 2,
            nonlinear_treatment: NonlinearTreatment::ExplicitAb2,
            feedback: FeedbackSpec::identity(),
            forcing: None,
        }
    }

    pub fn with_boundary_order(mut self, order: u8) -> Self {
        assert!(order == 1 || order == 2);
        self.boundary_order = order;
        self
    }

    pub fn with_feedback(mut self, feedback: FeedbackSpec) -> Self {
        self.feedback = feedback;
        self
    }

    pub fn with_forcing(mut self, forcing: Forcing) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn with_treatment(mut self, nl: NonlinearTreatment) -> Self {
        self.nonlinear_treatment = nl;
        self
    }
}

/// Sampled trajectory plus the per-step boundary traces the energy theory
/// cares about.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Sample times (strictly increasing, includes t = 0 and t = T).
    pub times: Vec<f64>,
    pub states: Vec<ComplexField>,
    /// Backward difference `(u^{n+1}_M - u^n_M)/dt`, one entry per step.
    pub ut_trace: Vec<C64>,
    /// Normal derivative at Γ1 after each step.
    pub dnu_trace: Vec<C64>,
}

impl Trajectory {
    pub fn final_state(&self) -> &ComplexField {
        self.states.last().expect("trajectory has samples")
    }
}

/// Assembled Crank-Nicolson matrices for one (grid, params, scheme) triple.
pub struct StepOperator {
    left: TridiagonalSystem,
    left_extra: C64,
    /// Interior rows of `I + dt/2·L_h` (sub, diag, super), indexed by node.
    right_sub: Vec<C64>,
    right_diag: Vec<C64>,
    right_sup: Vec<C64>,
    /// Explicit-side coefficients of the boundary row on
    /// `(u^n_M, u^n_{M-1}, u^n_{M-2})`, dynamic identity variant.
    row_m_right: [C64; 3],
    /// Scale applied to `g_b` in the boundary row's right-hand side.
    bc_rhs_scale: f64,
}

fn dnu_coeffs(grid: &RadialGrid, order: u8) -> [f64; 3] {
    let h = grid.h;
    if order == 1 {
        // Flux-consistent first-order stencil: pairs with boundary_flux so
        // the dynamic row is exactly dissipative in the discrete V-norm.
        let s = (grid.r_mid(grid.m - 1) / grid.r1).powi(grid.dim as i32 - 1);
        [s / h, -s / h, 0.0]
    } else {
        [3.0 / (2.0 * h), -4.0 / (2.0 * h), 1.0 / (2.0 * h)]
    }
}

impl StepOperator {
    /// Builds the CN matrices: interior rows are `(I ∓ dt/2·L_h)` with
    /// `L_h = (λ+iα)Δ_h + γ`, row 0 encodes the Dirichlet condition, row M
    /// the selected boundary law.
    pub fn assemble(grid: &RadialGrid, params: &ModelParams, scheme: &SchemeConfig) -> Self {
        let m = grid.m;
        let n = m + 1;
        let h = grid.h;
        let dt = scheme.dt;
        let nm1 = grid.dim as i32 - 1;
        let mu = params.diffusion();
        let one = C64::new(1.0, 0.0);

        let mut lower = vec![C64::default(); n - 1];
        let mut diag = vec![C64::default(); n];
        let mut upper = vec![C64::default(); n - 1];
        let mut right_sub = vec![C64::default(); n];
        let mut right_diag = vec![C64::default(); n];
        let mut right_sup = vec![C64::default(); n];

        // Row 0: Dirichlet on Γ0.
        diag[0] = one;

        for j in 1..m {
            let rj = grid.nodes[j].powi(nm1);
            let a = grid.r_mid(j - 1).powi(nm1) / (rj * h * h);
            let c = grid.r_mid(j).powi(nm1) / (rj * h * h);
            let la = mu * a;
            let lc = mu * c;
            let lb = -(la + lc) + params.gamma;
            lower[j - 1] = -0.5 * dt * la;
            diag[j] = one - 0.5 * dt * lb;
            upper[j] = -0.5 * dt * lc;
            right_sub[j] = 0.5 * dt * la;
            right_diag[j] = one + 0.5 * dt * lb;
            right_sup[j] = 0.5 * dt * lc;
        }

        let left_extra;
        let mut row_m_right = [C64::default(); 3];
        let bc_rhs_scale;
        match scheme.bc_variant {
            BcVariant::Dynamic => {
                // u^{n+1}_M + dt/2 D_ν u^{n+1} = u^n_M - dt/2 D_ν u^n + dt g_b.
                let d = dnu_coeffs(grid, scheme.boundary_order);
                diag[m] = one + 0.5 * dt * d[0];
                lower[m - 1] = C64::new(0.5 * dt * d[1], 0.0);
                left_extra = C64::new(0.5 * dt * d[2], 0.0);
                row_m_right = [
                    one - 0.5 * dt * d[0],
                    C64::new(-0.5 * dt * d[1], 0.0),
                    C64::new(-0.5 * dt * d[2], 0.0),
                ];
                bc_rhs_scale = dt;
            }
            BcVariant::Wentzell => {
                // D_ν u^{n+1} + (λ+iα)Δ^os u^{n+1} = F(u^n_M) + g_b, the
                // one-sided Laplacian trace kept 3-point so only one entry
                // falls outside the band.
                let d = dnu_coeffs(grid, scheme.boundary_order);
                let urr = [1.0 / (h * h), -2.0 / (h * h), 1.0 / (h * h)];
                let rad = nm1 as f64 / grid.r1;
                let ur1 = dnu_coeffs(grid, 2);
                let coef =
                    |k: usize| C64::new(d[k], 0.0) + mu * (urr[k] + rad * ur1[k]);
                diag[m] = coef(0);
                lower[m - 1] = coef(1);
                left_extra = coef(2);
                // Right side of this row is assembled per step (explicit F).
                bc_rhs_scale = 1.0;
            }
        }

        Self {
            left: TridiagonalSystem::new(lower, diag, upper),
            left_extra,
            right_sub,
            right_diag,
            right_sup,
            row_m_right,
            bc_rhs_scale,
        }
    }

    fn solve(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        let banded = if self.left_extra == C64::default() {
            thomas_solve(&self.left, rhs)
        } else {
            bordered_solve(&self.left, self.left_extra, rhs)
        };
        match banded {
            Err(SimError::ZeroPivot(_)) => {
                let mut dense = to_dense(&self.left, Some(self.left_extra));
                dense_solve(&mut dense, rhs)
            }
            other => other,
        }
    }

    /// Largest amplification factor of the linear step map, estimated by
    /// power iteration on random fields.
    pub fn amplification_estimate(&self, grid: &RadialGrid, iters: usize, seed: u64) -> f64 {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = grid.num_nodes();
        let mut v: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        v[0] = C64::default();
        let mut rho = 0.0;
        for _ in 0..iters {
            // Apply the step map: rhs = R v (interior) with the boundary rows
            // of the homogeneous problem, then solve the left system.
            let mut rhs = vec![C64::default(); n];
            for j in 1..n - 1 {
                rhs[j] = self.right_sub[j] * v[j - 1]
                    + self.right_diag[j] * v[j]
                    + self.right_sup[j] * v[j + 1];
            }
            let m = n - 1;
            rhs[m] = self.row_m_right[0] * v[m]
                + self.row_m_right[1] * v[m - 1]
                + self.row_m_right[2] * v[m - 2];
            let w = self.solve(&rhs).expect("power iteration solve");
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            rho = norm / v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v = w.iter().map(|z| z / norm).collect();
        }
        rho
    }
}

/// One simulation in flight. Owns the AB2 history.
pub struct Stepper<'a> {
    grid: &'a RadialGrid,
    params: ModelParams,
    scheme: SchemeConfig,
    op: StepOperator,
    prev_power: Option<Vec<C64>>,
}

impl<'a> Stepper<'a> {
    pub fn new(grid: &'a RadialGrid, params: ModelParams, scheme: SchemeConfig) -> Self {
        let op = StepOperator::assemble(grid, &params, &scheme);
        Self {
            grid,
            params,
            scheme,
            op,
            prev_power: None,
        }
    }

    pub fn operator(&self) -> &StepOperator {
        &self.op
    }

    fn power_term(&self, u: C64) -> C64 {
        // The γu part of F lives in the implicit matrix; only the power term
        // is explicit.
        let a = u.norm();
        -self.params.nl_coeff() * a.powf(self.params.p - 1.0) * u
    }

    fn explicit_power(&self, state: &ComplexField) -> Vec<C64> {
        if self.params.kappa == 0.0 && self.params.beta == 0.0 {
            return vec![C64::default(); state.len()];
        }
        state.values.iter().map(|&u| self.power_term(u)).collect()
    }

    /// Advances one step from `state` at time `t`.
    pub fn step(&mut self, state: &ComplexField, t: f64) -> Result<ComplexField> {
        let cur_power = self.explicit_power(state);
        // AB2 extrapolation to the CN midpoint; Euler bootstrap on step one.
        let nl_mid: Vec<C64> = match (self.scheme.nonlinear_treatment, &self.prev_power) {
            (NonlinearTreatment::ExplicitAb2, Some(prev)) => cur_power
                .iter()
                .zip(prev)
                .map(|(&c, &p)| 1.5 * c - 0.5 * p)
                .collect(),
            _ => cur_power.clone(),
        };
        let mut next = self.solve_with_power(state, t, &nl_mid)?;
        if self.scheme.nonlinear_treatment == NonlinearTreatment::Picard1
            && (self.params.kappa != 0.0 || self.params.beta != 0.0)
        {
            let mid = ComplexField {
                values: state
                    .values
                    .iter()
                    .zip(&next.values)
                    .map(|(&a, &b)| 0.5 * (a + b))
                    .collect(),
            };
            let corrected = self.explicit_power(&mid);
            next = self.solve_with_power(state, t, &corrected)?;
        }
        self.prev_power = Some(cur_power);
        Ok(next)
    }

    fn solve_with_power(
        &self,
        state: &ComplexField,
        t: f64,
        nl_mid: &[C64],
    ) -> Result<ComplexField> {
        let grid = self.grid;
        let m = grid.m;
        let n = m + 1;
        let dt = self.scheme.dt;
        let t_mid = t + 0.5 * dt;
        let mut rhs = vec![C64::default(); n];
        for j in 1..m {
            rhs[j] = self.op.right_sub[j] * state.values[j - 1]
                + self.op.right_diag[j] * state.values[j]
                + self.op.right_sup[j] * state.values[j + 1]
                + dt * nl_mid[j];
        }
        if let Some(forcing) = &self.scheme.forcing {
            for j in 1..m {
                rhs[j] += dt * (forcing.interior)(grid.nodes[j], t_mid);
            }
        }
        let g_b = self
            .scheme
            .forcing
            .as_ref()
            .map(|f| (f.boundary)(t_mid))
            .unwrap_or_default();

        match self.scheme.bc_variant {
            BcVariant::Wentzell => {
                rhs[m] = nonlinearity(state.values[m], &self.params) + g_b;
                let x = self.op.solve(&rhs)?;
                Ok(ComplexField { values: x })
            }
            BcVariant::Dynamic if self.scheme.feedback.is_identity() => {
                rhs[m] = self.op.row_m_right[0] * state.values[m]
                    + self.op.row_m_right[1] * state.values[m - 1]
                    + self.op.row_m_right[2] * state.values[m - 2]
                    + self.op.bc_rhs_scale * g_b;
                let x = self.op.solve(&rhs)?;
                Ok(ComplexField { values: x })
            }
            BcVariant::Dynamic => self.feedback_fixed_point(state, rhs, g_b),
        }
    }

    /// Outer fixed-point sweep for nonlinear boundary feedback: the row at
    /// Γ1 becomes `u^{n+1}_M = u^n_M + dt·g⁻¹(g_b - D_ν u_mid)` with the
    /// midpoint normal derivative recomputed from each new iterate.
    fn feedback_fixed_point(
        &self,
        state: &ComplexField,
        mut rhs: Vec<C64>,
        g_b: C64,
    ) -> Result<ComplexField> {
        let grid = self.grid;
        let m = grid.m;
        let dt = self.scheme.dt;
        // The boundary row of the assembled matrix is replaced by the
        // identity row for this path.
        let mut op_left = self.op.left.clone();
        op_left.diag[m] = C64::new(1.0, 0.0);
        op_left.lower[m - 1] = C64::default();
        let mut iterate = state.clone();
        let tol = 1e-10;
        for it in 0..50 {
            let mid = ComplexField {
                values: state
                    .values
                    .iter()
                    .zip(&iterate.values)
                    .map(|(&a, &b)| 0.5 * (a + b))
                    .collect(),
            };
            let dnu = normal_derivative(&mid, grid, BoundaryEnd::Gamma1, self.scheme.boundary_order);
            let ut = self.scheme.feedback.invert(g_b - dnu)?;
            rhs[m] = state.values[m] + dt * ut;
            let x = thomas_solve(&op_left, &rhs)?;
            let delta = (x[m] - iterate.values[m]).norm();
            let done = delta <= tol * x[m].norm().max(1.0);
            iterate = ComplexField { values: x };
            if done {
                return Ok(iterate);
            }
            if it == 49 {
                return Err(SimError::NonConvergence {
                    context: "boundary feedback fixed point".into(),
                    iterations: 50,
                    residual: delta,
                });
            }
        }
        unreachable!()
    }
}

/// Drives a full simulation, recording the trajectory every `sample_stride`
/// steps (plus the final step) and the energy ledger every step.
pub fn run(
    grid: &RadialGrid,
    params: &ModelParams,
    scheme: &SchemeConfig,
    u0: &ComplexField,
    sample_stride: usize,
) -> Result<(Trajectory, EnergyLedger)> {
    assert!(sample_stride >= 1);
    assert_eq!(u0.len(), grid.num_nodes());
    let dt = scheme.dt;
    let n_steps = (scheme.t_final / dt).round().max(1.0) as usize;
    let order = scheme.boundary_order;

    let mut stepper = Stepper::new(grid, *params, scheme.clone());
    let mut ledger = EnergyLedger::new();
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![u0.clone()],
        ut_trace: Vec::with_capacity(n_steps),
        dnu_trace: Vec::with_capacity(n_steps),
    };

    ledger.record(
        LedgerSample {
            t: 0.0,
            state: u0,
            increments: None,
        },
        grid,
        params,
    );

    let mut state = u0.clone();
    for n in 0..n_steps {
        let t = n as f64 * dt;
        let next = stepper.step(&state, t)?;
        let norm = next.max_abs();
        if !norm.is_finite() || norm > BLOWUP_GUARD {
            return Err(SimError::Blowup {
                t: t + dt,
                norm,
                guard: BLOWUP_GUARD,
            });
        }
        let ut = (next.values[grid.m] - state.values[grid.m]) / dt;
        // The dissipation integrals live at the Crank-Nicolson midpoint;
        // endpoint sampling would ring on stiff modes (u^{n+1} ~ -u^n) and
        // grossly overestimate them.
        let mid = ComplexField {
            values: state
                .values
                .iter()
                .zip(&next.values)
                .map(|(&a, &b)| 0.5 * (a + b))
                .collect(),
        };
        let lap_mid = laplacian_apply(&mid, grid);
        let inc = StepIncrements {
            ut_sq_bd: grid.surface_measure_g1 * ut.norm_sqr(),
            lap_sq_mid: lap_sq_interior(&lap_mid, grid),
            l2p_mid: lp_pow_interior(&mid, grid, 2.0 * params.p),
            flux_sq_mid: grid.surface_measure_g1
                * normal_derivative(&mid, grid, BoundaryEnd::Gamma1, order).norm_sqr(),
        };
        ledger.record(
            LedgerSample {
                t: t + dt,
                state: &next,
                increments: Some(inc),
            },
            grid,
            params,
        );
        let dnu = normal_derivative(&next, grid, BoundaryEnd::Gamma1, order);
        traj.ut_trace.push(ut);
        traj.dnu_trace.push(dnu);
        state = next;
        if (n + 1) % sample_stride == 0 || n + 1 == n_steps {
            if *traj.times.last().unwrap() < t + dt {
                traj.times.push(t + dt);
                traj.states.push(state.clone());
            }
        }
    }
    Ok((traj, ledger))
}

/// Analytic harmonic lift with zero trace on Γ0 and normal derivative
/// `g_val` on Γ1:
/// N=1: `g(r-r0)`, N=2: `g·r1·ln(r/r0)`, N=3: `g·r1²(1/r0 - 1/r)`.
pub fn neumann_map(g_val: C64, grid: &RadialGrid) -> ComplexField {
    match grid.dim {
        1 => ComplexField::from_fn(grid, |r| g_val * (r - grid.r0)),
        2 => ComplexField::from_fn(grid, |r| g_val * grid.r1 * (r / grid.r0).ln()),
        _ => ComplexField::from_fn(grid, |r| {
            g_val * grid.r1 * grid.r1 * (1.0 / grid.r0 - 1.0 / r)
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete_ops::norm_v;
    use approx::assert_relative_eq;

    fn heat_params(dim: u32) -> ModelParams {
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

    fn bump(grid: &RadialGrid) -> ComplexField {
        crate::initial::bump_field(grid, 1.0, 0.45, 0.2)
    }

    #[test]
    fn zero_state_is_fixed() {
        let grid = RadialGrid::build(1, 0.0, 1.0, 32).unwrap();
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 1e-2, 0.1);
        let (traj, ledger) = run(&grid, &heat_params(1), &scheme, &ComplexField::zeros(&grid), 1).unwrap();
        assert_eq!(traj.final_state().max_abs(), 0.0);
        assert!(ledger.energy_e.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn dirichlet_node_stays_zero() {
        let grid = RadialGrid::build(2, 0.5, 1.5, 48).unwrap();
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 1e-2, 0.3);
        let (traj, _) = run(&grid, &heat_params(2), &scheme, &bump(&grid), 5).unwrap();
        for s in &traj.states {
            assert_eq!(s.values[0], C64::default());
        }
    }

    #[test]
    fn linear_contraction_first_order_boundary() {
        let grid = RadialGrid::build(1, 0.0, 1.0, 64).unwrap();
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 1e-2, 0.5).with_boundary_order(1);
        let params = heat_params(1);
        let (_, ledger) = run(&grid, &params, &scheme, &bump(&grid), 1).unwrap();
        let v0 = ledger.v_norm[0];
        for w in ledger.v_norm.windows(2) {
            assert!(w[1] <= w[0] + 1e-10 * v0, "{} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn amplification_bounded_for_dynamic_bc() {
        let grid = RadialGrid::build(1, 0.0, 1.0, 64).unwrap();
        let params = heat_params(1);
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 1e-2, 0.1);
        let op = StepOperator::assemble(&grid, &params, &scheme);
        let rho = op.amplification_estimate(&grid, 200, 3);
        assert!(rho <= 1.0 + 1e-10, "spectral radius estimate {rho}");
    }

    #[test]
    fn cn_matrices_approach_identity_as_dt_vanishes() {
        let grid = RadialGrid::build(1, 0.0, 1.0, 16).unwrap();
        let params = heat_params(1);
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 1e-9, 1e-8);
        let op = StepOperator::assemble(&grid, &params, &scheme);
        for j in 1..grid.m {
            assert!((op.left.diag[j] - C64::new(1.0, 0.0)).norm() < 1e-3);
            assert!((op.right_diag[j] - C64::new(1.0, 0.0)).norm() < 1e-3);
        }
    }

    #[test]
    fn phase_equivariance() {
        let grid = RadialGrid::build(1, 0.0, 1.0, 48).unwrap();
        let params = ModelParams {
            lambda: 0.5,
            alpha: 1.0,
            kappa: 0.3,
            beta: 1.0,
            gamma: 0.0,
            p: 3.0,
            dim: 1,
        };
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 5e-3, 0.1);
        let c = C64::from_polar(1.0, 0.83);
        let u0 = bump(&grid);
        let cu0 = ComplexField {
            values: u0.values.iter().map(|&z| c * z).collect(),
        };
        let (t1, _) = run(&grid, &params, &scheme, &u0, 1000).unwrap();
        let (t2, _) = run(&grid, &params, &scheme, &cu0, 1000).unwrap();
        let rotated = ComplexField {
            values: t1.final_state().values.iter().map(|&z| c * z).collect(),
        };
        let diff = norm_v(&(&rotated - t2.final_state()), &grid);
        assert!(diff <= 1e-11 * norm_v(&rotated, &grid).max(1.0), "diff {diff}");
    }

    #[test]
    fn richardson_self_convergence_order_two() {
        let grid = RadialGrid::build(1, 0.0, 1.0, 128).unwrap();
        let params = heat_params(1);
        let u0 = bump(&grid);
        let endpoint = |dt: f64| {
            let scheme = SchemeConfig::new(BcVariant::Dynamic, dt, 0.25);
            run(&grid, &params, &scheme, &u0, usize::MAX).unwrap().0
        };
        let fine = endpoint(2.5e-4);
        let e1 = norm_v(&(endpoint(2e-3).final_state() - fine.final_state()), &grid);
        let e2 = norm_v(&(endpoint(1e-3).final_state() - fine.final_state()), &grid);
        assert!(e1 / e2 > 3.3, "temporal order ratio {}", e1 / e2);
    }

    #[test]
    fn nls_degenerate_mass_drift_is_converged_physics() {
        // λ = κ = 0: mass leaves through the dynamic boundary, which is
        // physical dissipation, not a scheme artifact. The drift must
        // therefore agree between two resolutions.
        let params = ModelParams {
            lambda: 0.0,
            alpha: 1.0,
            kappa: 0.0,
            beta: 1.0,
            gamma: 0.0,
            p: 3.0,
            dim: 1,
        };
        let drift = |m: usize, dt: f64| {
            let grid = RadialGrid::build(1, 0.0, 1.0, m).unwrap();
            let scheme = SchemeConfig::new(BcVariant::Dynamic, dt, 0.2);
            let u0 = bump(&grid);
            let (_, ledger) = run(&grid, &params, &scheme, &u0, usize::MAX).unwrap();
            let m0 = ledger.l2_interior[0];
            (ledger.l2_interior.last().unwrap() - m0) / m0
        };
        let d1 = drift(128, 1e-3);
        let d2 = drift(256, 5e-4);
        assert!(d1 < 0.0, "dynamic boundary should dissipate mass: {d1}");
        assert!(
            (d1 - d2).abs() <= 0.05 * d2.abs(),
            "drift not resolution-converged: {d1} vs {d2}"
        );
    }

    #[test]
    fn saturating_feedback_runs_and_dissipates() {
        let grid = RadialGrid::build(1, 0.0, 1.0, 64).unwrap();
        let params = heat_params(1);
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 5e-3, 0.5)
            .with_feedback(FeedbackSpec::saturating(0.5, 2.0));
        let (_, ledger) = run(&grid, &params, &scheme, &bump(&grid), 10).unwrap();
        assert!(ledger.v_norm.last().unwrap() < &ledger.v_norm[0]);
    }

    #[test]
    fn neumann_map_values() {
        let g1 = RadialGrid::build(1, 0.0, 1.0, 32).unwrap();
        assert_eq!(neumann_map(C64::default(), &g1).max_abs(), 0.0);
        let lift = neumann_map(C64::new(1.0, 0.0), &g1);
        assert_eq!(lift.values[0], C64::default());
        assert_relative_eq!(
            normal_derivative(&lift, &g1, BoundaryEnd::Gamma1, 2).re,
            1.0,
            max_relative = 1e-12
        );

        for dim in [2u32, 3] {
            let g = RadialGrid::build(dim, 0.5, 1.5, 64).unwrap();
            let lift = neumann_map(C64::new(0.7, -0.2), &g);
            assert!(lift.values[0].norm() < 1e-15);
            // Discrete harmonicity at interior nodes, refining at order 2.
            let lap = laplacian_apply(&lift, &g);
            let max_int = (1..g.m).map(|j| lap.values[j].norm()).fold(0.0f64, f64::max);
            let g2 = RadialGrid::build(dim, 0.5, 1.5, 128).unwrap();
            let lap2 = laplacian_apply(&neumann_map(C64::new(0.7, -0.2), &g2), &g2);
            let max_int2 = (1..g2.m).map(|j| lap2.values[j].norm()).fold(0.0f64, f64::max);
            assert!(max_int / max_int2 > 3.0, "dim {dim}: {max_int} vs {max_int2}");
        }
    }
}
